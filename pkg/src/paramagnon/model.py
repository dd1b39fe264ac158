"""
Parameter types and matrix assembly for the parametric cavity with two magnon modes.

Mean-field equations of motion are written as

    dX/dt = -i H X + Omega * F_in,    X = (a, m1, m2, a+, m1+, m2+)

with H the 6x6 effective matrix [[H0, J], [-J, -conj(H0)]]. All rates and
detunings are in units of a reference rate (kappa = 1 by default).

Two conventions for the parametric term are supported because they differ by
a factor of two in the pump entry of J:

    "full": H_p = G (a^2 + a+^2)      -> J[0, 0] = 2G   (default)
    "half": H_p = (G/2)(a^2 + a+^2)   -> J[0, 0] = G
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace
from typing import Literal

import numpy as np
from numpy.typing import NDArray

from .errors import ParameterError

PumpConvention = Literal["full", "half"]

PUMP_SCALE: dict[str, float] = {"full": 2.0, "half": 1.0}

# global mode ordering; every index in the package follows it
MODE_LABELS: tuple[str, ...] = ("a", "m1", "m2", "a_dag", "m1_dag", "m2_dag")
REDUCED_MODE_LABELS: tuple[str, ...] = ("a", "M", "a_dag", "M_dag")

SQRT2 = math.sqrt(2.0)


def _check_finite(obj) -> None:
    for f in fields(obj):
        value = getattr(obj, f.name)
        if isinstance(value, str):
            continue
        if not math.isfinite(value):
            raise ParameterError(f"{f.name} must be finite, got {value!r}")


def _check_convention(convention: str) -> None:
    if convention not in PUMP_SCALE:
        raise ParameterError(
            f"pump_convention must be one of {sorted(PUMP_SCALE)}, got {convention!r}"
        )


@dataclass(frozen=True)
class ModelParams:
    """All rates, detunings and couplings for one system instance."""

    delta_c: float = 0.0
    delta_1: float = 0.0
    delta_2: float = 0.0
    g1: float = 0.0
    g2: float = 0.0
    kappa: float = 1.0
    gamma1: float = 1.0
    gamma2: float = 1.0
    G: float = 0.0
    delta_2ph: float = 0.0
    omega_rabi: float = 1.0
    pump_convention: PumpConvention = "full"

    def __post_init__(self) -> None:
        _check_convention(self.pump_convention)
        _check_finite(self)
        for name in ("kappa", "gamma1", "gamma2"):
            if getattr(self, name) <= 0:
                raise ParameterError(f"{name} must be > 0, got {getattr(self, name)!r}")
        if self.G < 0:
            raise ParameterError(f"G must be >= 0, got {self.G!r}")

    def replace(self, **changes) -> ModelParams:
        return replace(self, **changes)

    @property
    def pump_entry(self) -> float:
        """Value placed in J[0, 0] for this convention."""
        return PUMP_SCALE[self.pump_convention] * self.G

    def to_model(self) -> ModelParams:
        return self


@dataclass(frozen=True)
class SymmetricParams:
    """Equal detunings, couplings and linewidths for cavity and both magnons."""

    delta: float = 0.0
    g: float = 0.0
    gamma: float = 1.0
    G: float = 0.0
    delta_2ph: float = 0.0
    omega_rabi: float = 1.0
    pump_convention: PumpConvention = "full"

    def __post_init__(self) -> None:
        _check_convention(self.pump_convention)
        _check_finite(self)
        if self.gamma <= 0:
            raise ParameterError(f"gamma must be > 0, got {self.gamma!r}")
        if self.G < 0:
            raise ParameterError(f"G must be >= 0, got {self.G!r}")

    def replace(self, **changes) -> SymmetricParams:
        return replace(self, **changes)

    @property
    def pump_entry(self) -> float:
        return PUMP_SCALE[self.pump_convention] * self.G

    def to_model(self) -> ModelParams:
        return ModelParams(
            delta_c=self.delta,
            delta_1=self.delta,
            delta_2=self.delta,
            g1=self.g,
            g2=self.g,
            kappa=self.gamma,
            gamma1=self.gamma,
            gamma2=self.gamma,
            G=self.G,
            delta_2ph=self.delta_2ph,
            omega_rabi=self.omega_rabi,
            pump_convention=self.pump_convention,
        )


AnyParams = ModelParams | SymmetricParams


@dataclass(frozen=True)
class EffectiveMatrix:
    entries: NDArray[np.complex128]
    block_tag: Literal["full", "reduced"]

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def upper_block(self) -> NDArray[np.complex128]:
        n = self.dim // 2
        return self.entries[:n, :n]

    @property
    def pump_block(self) -> NDArray[np.complex128]:
        n = self.dim // 2
        return self.entries[:n, n:]


def _assemble(h0: NDArray[np.complex128], j: NDArray[np.complex128], shift: float) -> NDArray[np.complex128]:
    n = h0.shape[0]
    out = np.block([[h0, j], [-j, -h0.conj()]])
    out -= shift * np.eye(2 * n)
    return out


def build_full_matrix(p: AnyParams) -> EffectiveMatrix:
    """Assemble the 6x6 effective matrix, including the two-photon detuning shift."""
    p = p.to_model()
    h0 = np.array(
        [
            [p.delta_c - 1j * p.kappa, p.g1, p.g2],
            [p.g1, p.delta_1 - 1j * p.gamma1, 0.0],
            [p.g2, 0.0, p.delta_2 - 1j * p.gamma2],
        ],
        dtype=complex,
    )
    j = np.zeros((3, 3), dtype=complex)
    j[0, 0] = p.pump_entry
    return EffectiveMatrix(_assemble(h0, j, p.delta_2ph), "full")


def build_reduced_matrix(p: SymmetricParams) -> EffectiveMatrix:
    """Assemble the 4x4 matrix over (a, M, a+, M+) with M = (m1 + m2)/sqrt(2).

    The antisymmetric combination m = (m1 - m2)/sqrt(2) decouples from the
    cavity and is omitted; the cavity couples to M with strength g*sqrt(2).
    """
    if not isinstance(p, SymmetricParams):
        raise ParameterError("reduced matrix requires SymmetricParams")
    h0 = np.array(
        [
            [p.delta - 1j * p.gamma, SQRT2 * p.g],
            [SQRT2 * p.g, p.delta - 1j * p.gamma],
        ],
        dtype=complex,
    )
    j = np.zeros((2, 2), dtype=complex)
    j[0, 0] = p.pump_entry
    return EffectiveMatrix(_assemble(h0, j, p.delta_2ph), "reduced")


def dark_mode_eigenvalues(p: SymmetricParams) -> tuple[complex, complex]:
    """Eigenvalues of the decoupled antisymmetric mode m and its adjoint."""
    return (
        complex(p.delta - p.delta_2ph, -p.gamma),
        complex(-p.delta - p.delta_2ph, -p.gamma),
    )


def build_drive_vector(dim: int) -> NDArray[np.complex128]:
    """Unit drive pattern; multiply by omega_rabi at the solve site."""
    if dim == 6:
        return np.array([0, 1, 0, 0, 1, 0], dtype=complex)
    if dim == 4:
        # m1 = (M + m)/sqrt(2): the drive on m1 reaches M with weight 1/sqrt(2)
        r = 1.0 / SQRT2
        return np.array([0, r, 0, r], dtype=complex)
    raise ParameterError(f"drive vector dimension must be 6 or 4, got {dim!r}")
