"""
Quantum-fluctuation correction from the steady-state Lyapunov equation.

Fluctuations dX = X - <X> obey dX' = A dX + f(t) with A = -i H and
<f_i(t) f_j(t')^+> = D_ij delta(t - t'). The second moments
V_ij = <dX_i dX_j^+> then satisfy

    A V + V A^+ + D = 0.

Diffusion layout, basis (a, m1, m2, a+, m1+, m2+), vacuum or thermal inputs:

    ========  ===================
    entry     value
    ========  ===================
    D[0, 0]   2 kappa  (n_c + 1)
    D[1, 1]   2 gamma1 (n_1 + 1)
    D[2, 2]   2 gamma2 (n_2 + 1)
    D[3, 3]   2 kappa  n_c
    D[4, 4]   2 gamma1 n_1
    D[5, 5]   2 gamma2 n_2
    ========  ===================

With this ordering V[5, 5] = <dm2+ dm2> is the normally ordered fluctuation
occupancy of the second magnon mode.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg
from numpy.typing import NDArray

from .errors import SingularMatrixError, UnstableError
from .model import AnyParams, build_full_matrix
from .response import M2_INDEX, solve_steady_state
from .stability import spectrum_of

M2_DAG_INDEX = 5
PSD_TOL = 1e-10


@dataclass(frozen=True)
class NoiseSpec:
    n_th_cavity: float = 0.0
    n_th_m1: float = 0.0
    n_th_m2: float = 0.0

    def __post_init__(self) -> None:
        for name in ("n_th_cavity", "n_th_m1", "n_th_m2"):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0:
                raise ValueError(f"{name} must be finite and >= 0, got {value!r}")


@dataclass(frozen=True)
class CovarianceResult:
    second_moments: NDArray[np.complex128]
    quantum_m2_occupancy: float
    semiclassical_spin_current: float
    ratio_to_semiclassical: float
    residual: float

    def min_eigenvalue(self) -> float:
        herm = 0.5 * (self.second_moments + self.second_moments.conj().T)
        return float(np.linalg.eigvalsh(herm).min())


def diffusion_matrix(p: AnyParams, noise: NoiseSpec = NoiseSpec()) -> NDArray[np.complex128]:
    p = p.to_model()
    rates = np.array([p.kappa, p.gamma1, p.gamma2])
    n_th = np.array([noise.n_th_cavity, noise.n_th_m1, noise.n_th_m2])
    diag = np.concatenate([2 * rates * (n_th + 1), 2 * rates * n_th])
    return np.diag(diag).astype(complex)


def lyapunov_direct(a: NDArray, d: NDArray) -> NDArray[np.complex128]:
    """Solve A V + V A^+ + D = 0 by a dense Kronecker-product solve.

    Uses column-major vectorisation: vec(A V) = (I kron A) vec V and
    vec(V A^+) = (conj(A) kron I) vec V.
    """
    n = a.shape[0]
    eye = np.eye(n)
    op = np.kron(eye, a) + np.kron(a.conj(), eye)
    rhs = -np.asarray(d, dtype=complex).reshape(-1, order="F")
    try:
        vec = scipy.linalg.solve(op, rhs)
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgWarning) as exc:
        raise SingularMatrixError(f"Lyapunov operator is singular: {exc}") from exc
    return vec.reshape((n, n), order="F")


def solve_lyapunov(p: AnyParams, noise: NoiseSpec = NoiseSpec()) -> CovarianceResult:
    p = p.to_model()
    spec = spectrum_of(p)
    if not spec.stable:
        raise UnstableError(f"no steady covariance: max Im(lambda) = {spec.max_im:.6g} >= 0")
    a = -1j * build_full_matrix(p).entries
    d = diffusion_matrix(p, noise)
    v = lyapunov_direct(a, d)
    residual = float(np.linalg.norm(a @ v + v @ a.conj().T + d))
    quantum = float(v[M2_DAG_INDEX, M2_DAG_INDEX].real)
    semiclassical = float(abs(solve_steady_state(p).amplitudes[M2_INDEX]) ** 2)
    if semiclassical > 0:
        ratio = quantum / semiclassical
    else:
        ratio = math.inf if quantum > 0 else 0.0
    return CovarianceResult(v, quantum, semiclassical, ratio, residual)


def total_spin_current(p: AnyParams, noise: NoiseSpec = NoiseSpec()) -> float:
    """Semiclassical |<m2>|^2 plus the fluctuation occupancy <dm2+ dm2>."""
    result = solve_lyapunov(p, noise)
    return result.semiclassical_spin_current + result.quantum_m2_occupancy
