"""
Steady-state linear response: amplitudes, spin current of the second magnon
mode, and the parametric enhancement factor F = M(G) / M(G=0).

The steady state solves 0 = -i H X + Omega F_in with an LU factorisation.
The spin current is |m2|^2, where m2 is component index 2 of X in the order
(a, m1, m2, a+, m1+, m2+).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
import scipy.linalg
from numpy.typing import NDArray

from .errors import IllConditionedWarning, SingularMatrixError, UnstableError, ZeroResponseError
from .model import (
    SQRT2,
    AnyParams,
    ModelParams,
    SymmetricParams,
    build_drive_vector,
    build_full_matrix,
    build_reduced_matrix,
)
from .stability import parallel_map, spectrum_of

M2_INDEX = 2
COND_WARN = 1e12


@dataclass(frozen=True)
class SteadyState:
    amplitudes: NDArray[np.complex128]
    spin_current: float
    condition_number: float
    params: ModelParams

    @property
    def m2(self) -> complex:
        return complex(self.amplitudes[M2_INDEX])


@dataclass(frozen=True)
class EnhancementResult:
    f_value: float
    m_with_G: float
    m_without_G: float


def _linear_solve(h: NDArray[np.complex128], rhs: NDArray[np.complex128]) -> tuple[NDArray, float]:
    """Solve -i h x = rhs. Returns x and the 2-norm condition number of h."""
    cond = float(np.linalg.cond(h))
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("error", scipy.linalg.LinAlgWarning)
            lu = scipy.linalg.lu_factor(-1j * h, check_finite=True)
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgWarning, ValueError) as exc:
        raise SingularMatrixError(f"steady-state matrix is singular: {exc}") from exc
    x = scipy.linalg.lu_solve(lu, rhs)
    if not np.all(np.isfinite(x)):
        raise SingularMatrixError("steady-state solve produced non-finite amplitudes")
    if cond > COND_WARN:
        warnings.warn(f"steady-state matrix condition number {cond:.3e}", IllConditionedWarning, stacklevel=3)
    return x, cond


def solve_steady_state(p: AnyParams) -> SteadyState:
    """Steady-state mode amplitudes for stable parameters."""
    p = p.to_model()
    spec = spectrum_of(p)
    if not spec.stable:
        raise UnstableError(f"no steady state: max Im(lambda) = {spec.max_im:.6g} >= 0 for {p}")
    h = build_full_matrix(p).entries
    # 0 = -i h X + Omega F  =>  (-i h) X = -Omega F
    rhs = -p.omega_rabi * build_drive_vector(6)
    x, cond = _linear_solve(h, rhs)
    return SteadyState(x, float(abs(x[M2_INDEX]) ** 2), cond, p)


def spin_current(p: AnyParams) -> float:
    return solve_steady_state(p).spin_current


def reduced_m2(p: SymmetricParams) -> complex:
    """m2 from the 4x4 collective system plus the decoupled antisymmetric mode.

    m2 = (M - m)/sqrt(2), where M comes from the reduced solve and m obeys
    its own one-mode equation driven with weight 1/sqrt(2).
    """
    spec = spectrum_of(p)
    if not spec.stable:
        raise UnstableError(f"no steady state: max Im(lambda) = {spec.max_im:.6g} >= 0")
    h = build_reduced_matrix(p).entries
    x, _ = _linear_solve(h, -p.omega_rabi * build_drive_vector(4))
    big_m = x[1]
    h_dark = p.delta - p.delta_2ph - 1j * p.gamma
    dark = -1j * (p.omega_rabi / SQRT2) / h_dark
    return complex((big_m - dark) / SQRT2)


def enhancement_factor(p: AnyParams) -> EnhancementResult:
    """Ratio of the spin current with the pump on to that with G = 0."""
    with_g = spin_current(p)
    without_g = spin_current(p.replace(G=0.0))
    if not (math.isfinite(without_g) and without_g >= np.finfo(float).tiny):
        raise ZeroResponseError(f"reference spin current is {without_g!r}; F undefined")
    return EnhancementResult(with_g / without_g, with_g, without_g)


class CurvePoint(NamedTuple):
    G: float
    F: float | None
    status: str


def _curve_point(args) -> CurvePoint:
    p, G = args
    try:
        return CurvePoint(G, enhancement_factor(p.replace(G=G)).f_value, "ok")
    except UnstableError:
        return CurvePoint(G, None, "unstable")
    except ZeroResponseError:
        return CurvePoint(G, None, "zero_response")


def enhancement_curve(p_template: AnyParams, g_values: Sequence[float], workers: int = 1) -> list[CurvePoint]:
    """F at each G. Unstable points carry F=None and status 'unstable'."""
    return parallel_map(_curve_point, [(p_template, float(G)) for G in g_values], workers)
