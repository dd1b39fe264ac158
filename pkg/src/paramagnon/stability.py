"""
Spectral stability classification and critical parametric strength.

The steady state exists when every eigenvalue of the effective matrix has a
strictly negative imaginary part. The threshold G_c is located by bisection
after a coarse scan confirms a single stable-to-unstable crossing.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from numpy.typing import NDArray

from .errors import BracketError, EigensolverError, ParamagnonError
from .model import AnyParams, EffectiveMatrix, SymmetricParams, build_full_matrix

# max Im within this distance of zero counts as unstable
MARGINAL_TOL = 1e-12
DEFAULT_TOL = 1e-6
DEFAULT_G_MAX = 5.0
PRESCAN_POINTS = 64


def sort_key(z: complex) -> tuple[float, float]:
    return (z.imag, z.real)


def sort_eigenvalues(values) -> NDArray[np.complex128]:
    return np.array(sorted(np.asarray(values, dtype=complex), key=sort_key), dtype=complex)


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: NDArray[np.complex128]
    max_im: float
    stable: bool

    def __len__(self) -> int:
        return len(self.eigenvalues)

    @property
    def min_abs_im(self) -> float:
        return float(np.min(np.abs(self.eigenvalues.imag)))

    @property
    def min_abs(self) -> float:
        return float(np.min(np.abs(self.eigenvalues)))


def compute_spectrum(m: EffectiveMatrix | NDArray, params=None) -> Spectrum:
    entries = m.entries if isinstance(m, EffectiveMatrix) else np.asarray(m, dtype=complex)
    try:
        ev = np.linalg.eigvals(entries)
    except np.linalg.LinAlgError as exc:
        raise EigensolverError(f"eigenvalue iteration failed: {exc}", entries, params) from exc
    if not np.all(np.isfinite(ev)):
        raise EigensolverError("eigensolver returned non-finite values", entries, params)
    ev = sort_eigenvalues(ev)
    max_im = float(np.max(ev.imag))
    return Spectrum(ev, max_im, max_im < -MARGINAL_TOL)


def spectrum_of(p: AnyParams) -> Spectrum:
    return compute_spectrum(build_full_matrix(p), p)


def is_stable(p: AnyParams) -> bool:
    return spectrum_of(p).stable


def _with_G(p: AnyParams, G: float) -> AnyParams:
    return p.replace(G=G)


@dataclass
class BisectionTrace:
    """Bracket endpoints visited by one bisection, for invariant checks."""

    brackets: list[tuple[float, float]] = field(default_factory=list)


def critical_G(
    p: AnyParams,
    g_max: float = DEFAULT_G_MAX,
    tol: float = DEFAULT_TOL,
    trace: BisectionTrace | None = None,
) -> float | None:
    """Return the parametric strength where the system first becomes unstable.

    The G field of ``p`` is ignored. Returns None when the system stays
    stable on all of [0, g_max]. The returned estimate is within ``tol`` of
    the true crossing.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if g_max <= 0:
        raise ValueError("g_max must be positive")
    if not is_stable(_with_G(p, 0.0)):
        raise BracketError("system is unstable at G=0; no stable bracket")

    grid = np.linspace(0.0, g_max, PRESCAN_POINTS + 1)
    labels = [True] + [is_stable(_with_G(p, float(G))) for G in grid[1:]]
    if all(labels):
        return None
    first = labels.index(False)
    if any(labels[first:]):
        raise BracketError(
            f"stable region is not a single interval in G on [0, {g_max}]"
        )

    lo, hi = float(grid[first - 1]), float(grid[first])
    if trace is not None:
        trace.brackets.append((lo, hi))
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if is_stable(_with_G(p, mid)):
            lo = mid
        else:
            hi = mid
        if trace is not None:
            trace.brackets.append((lo, hi))
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class PhaseBoundary:
    delta_axis: list[float]
    g_c: list[float | None]
    tolerance: float
    errors: dict[int, str] = field(default_factory=dict)


def with_common_detuning(p: AnyParams, delta: float) -> AnyParams:
    if isinstance(p, SymmetricParams):
        return p.replace(delta=delta)
    return p.replace(delta_c=delta, delta_1=delta, delta_2=delta)


def _boundary_point(args) -> tuple[float | None, str | None]:
    p, delta, g_max, tol = args
    try:
        return critical_G(with_common_detuning(p, delta), g_max, tol), None
    except ParamagnonError as exc:
        return None, f"{type(exc).__name__}: {exc}"


def parallel_map(fn: Callable, items: Sequence, workers: int = 1) -> list:
    """Map preserving input order; ``workers > 1`` uses processes."""
    if workers <= 1 or len(items) < 2:
        return [fn(item) for item in items]
    chunk = max(1, len(items) // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=chunk))


def trace_boundary(
    delta_range: Sequence[float],
    p_template: AnyParams,
    g_max: float = DEFAULT_G_MAX,
    tol: float = DEFAULT_TOL,
    workers: int = 1,
) -> PhaseBoundary:
    """G_c at each common detuning. Per-point failures are recorded, not raised."""
    deltas = [float(d) for d in delta_range]
    results = parallel_map(_boundary_point, [(p_template, d, g_max, tol) for d in deltas], workers)
    g_c = [r[0] for r in results]
    errors = {i: r[1] for i, r in enumerate(results) if r[1] is not None}
    return PhaseBoundary(deltas, g_c, tol, errors)
