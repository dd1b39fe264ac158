from __future__ import annotations

import numpy as np
import pytest
from hypothesis import strategies as st

from paramagnon import ModelParams, SymmetricParams
from paramagnon.stability import spectrum_of


def random_model(rng: np.random.Generator, **fixed) -> ModelParams:
    values = dict(
        delta_c=rng.uniform(-5, 5),
        delta_1=rng.uniform(-5, 5),
        delta_2=rng.uniform(-5, 5),
        g1=rng.uniform(0, 3),
        g2=rng.uniform(0, 3),
        kappa=rng.uniform(0.3, 2),
        gamma1=rng.uniform(0.3, 2),
        gamma2=rng.uniform(0.3, 2),
        G=rng.uniform(0, 3),
        delta_2ph=rng.uniform(-1, 1),
        omega_rabi=rng.uniform(0.1, 10),
        pump_convention=str(rng.choice(["full", "half"])),
    )
    values.update(fixed)
    return ModelParams(**values)


def random_symmetric(rng: np.random.Generator, **fixed) -> SymmetricParams:
    values = dict(
        delta=rng.uniform(-6, 6),
        g=rng.uniform(0, 3),
        gamma=rng.uniform(0.3, 2),
        G=rng.uniform(0, 2),
        delta_2ph=rng.uniform(-1, 1),
        omega_rabi=rng.uniform(0.1, 10),
        pump_convention=str(rng.choice(["full", "half"])),
    )
    values.update(fixed)
    return SymmetricParams(**values)


def stable_draws(n: int, seed: int, factory=random_model, margin: float = 0.0, **fixed) -> list:
    """Rejection-sample ``n`` parameter sets with max Im(lambda) < -margin."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        p = factory(rng, **fixed)
        spec = spectrum_of(p)
        if spec.stable and spec.max_im < -margin:
            out.append(p)
    return out


@pytest.fixture
def paper_point() -> SymmetricParams:
    """Symmetric configuration used throughout the figures: g = 2, Delta = 3."""
    return SymmetricParams(delta=3.0, g=2.0)


rates = st.floats(0.2, 3.0)
detunings = st.floats(-6.0, 6.0)
couplings = st.floats(0.0, 3.0)
pumps = st.floats(0.0, 3.0)
conventions = st.sampled_from(["full", "half"])

model_params = st.builds(
    ModelParams,
    delta_c=detunings,
    delta_1=detunings,
    delta_2=detunings,
    g1=couplings,
    g2=couplings,
    kappa=rates,
    gamma1=rates,
    gamma2=rates,
    G=pumps,
    delta_2ph=st.floats(-2.0, 2.0),
    omega_rabi=st.floats(0.01, 100.0),
    pump_convention=conventions,
)

symmetric_params = st.builds(
    SymmetricParams,
    delta=detunings,
    g=couplings,
    gamma=rates,
    G=pumps,
    delta_2ph=st.floats(-2.0, 2.0),
    omega_rabi=st.floats(0.01, 100.0),
    pump_convention=conventions,
)
