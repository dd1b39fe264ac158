"""
Parameter sweeps over one or two axes, and continuous eigenvalue tracks of the
reduced collective-mode system.

Grid values are stored with shape (len(x), len(y)) and flattened row-major.
Points where a stability-requiring metric cannot be evaluated hold NaN.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields
from typing import Sequence

import numpy as np
from numpy.typing import NDArray
from scipy.optimize import linear_sum_assignment

from . import __version__
from .errors import ParamagnonError, ParameterError
from .model import AnyParams, ModelParams, SymmetricParams, build_reduced_matrix
from .response import enhancement_factor, solve_steady_state
from .stability import compute_spectrum, parallel_map, sort_eigenvalues, spectrum_of

SENTINEL = math.nan

STABILITY_METRICS = frozenset({"F", "spin_current", "condition_number"})
METRICS = frozenset({"stable", "min_abs_im_eig", "min_abs_eig"}) | STABILITY_METRICS

# axis aliases usable on a ModelParams template
MODEL_ALIASES: dict[str, tuple[str, ...]] = {
    "delta": ("delta_c", "delta_1", "delta_2"),
    "g": ("g1", "g2"),
    "gamma": ("kappa", "gamma1", "gamma2"),
}


def axis_fields(template: AnyParams) -> set[str]:
    names = {f.name for f in fields(template)} - {"pump_convention"}
    if isinstance(template, ModelParams):
        names |= set(MODEL_ALIASES)
    return names


def apply_overrides(template: AnyParams, overrides: dict[str, float]) -> AnyParams:
    changes: dict[str, float] = {}
    allowed = axis_fields(template)
    for name, value in overrides.items():
        if name not in allowed:
            raise ParameterError(f"unknown axis {name!r}; expected one of {sorted(allowed)}")
        if isinstance(template, ModelParams) and name in MODEL_ALIASES:
            for target in MODEL_ALIASES[name]:
                changes[target] = float(value)
        else:
            changes[name] = float(value)
    return template.replace(**changes)


def evaluate_metric(p: AnyParams, metric: str) -> float:
    """One scalar diagnostic; NaN when the point is unstable or fails."""
    if metric == "stable":
        return 1.0 if spectrum_of(p).stable else 0.0
    if metric == "min_abs_im_eig":
        return spectrum_of(p).min_abs_im
    if metric == "min_abs_eig":
        return spectrum_of(p).min_abs
    if not spectrum_of(p).stable:
        return SENTINEL
    try:
        if metric == "F":
            return enhancement_factor(p).f_value
        if metric == "spin_current":
            return solve_steady_state(p).spin_current
        if metric == "condition_number":
            return solve_steady_state(p).condition_number
    except ParamagnonError:
        return SENTINEL
    raise ParameterError(f"unknown metric {metric!r}")


@dataclass(frozen=True)
class SweepGrid:
    x_name: str
    x_values: NDArray[np.float64]
    metric: str
    values: NDArray[np.float64]
    y_name: str | None = None
    y_values: NDArray[np.float64] | None = None
    metadata: dict = field(default_factory=dict)

    @property
    def shape(self) -> tuple[int, ...]:
        if self.y_values is None:
            return (len(self.x_values),)
        return (len(self.x_values), len(self.y_values))

    def grid(self) -> NDArray[np.float64]:
        return self.values.reshape(self.shape)


def _row(args) -> list[float]:
    template, x_name, x, y_name, ys, metric = args
    if y_name is None:
        return [evaluate_metric(apply_overrides(template, {x_name: x}), metric)]
    return [evaluate_metric(apply_overrides(template, {x_name: x, y_name: y}), metric) for y in ys]


def run_sweep(
    template: AnyParams,
    x_axis: tuple[str, Sequence[float]],
    y_axis: tuple[str, Sequence[float]] | None = None,
    metric: str = "stable",
    workers: int = 1,
) -> SweepGrid:
    """Evaluate ``metric`` over the grid. Output is independent of ``workers``."""
    if metric not in METRICS:
        raise ParameterError(f"unknown metric {metric!r}; expected one of {sorted(METRICS)}")
    x_name, xs = x_axis[0], np.asarray(x_axis[1], dtype=float)
    y_name, ys = (None, None) if y_axis is None else (y_axis[0], np.asarray(y_axis[1], dtype=float))
    allowed = axis_fields(template)
    for name in (x_name, y_name):
        if name is not None and name not in allowed:
            raise ParameterError(f"unknown axis {name!r}; expected one of {sorted(allowed)}")
    if y_name is not None and y_name == x_name:
        raise ParameterError("x and y axes must differ")

    y_list = None if ys is None else [float(y) for y in ys]
    tasks = [(template, x_name, float(x), y_name, y_list, metric) for x in xs]
    rows = parallel_map(_row, tasks, workers)
    values = np.array([v for row in rows for v in row], dtype=float)
    metadata = {"template": template, "metric": metric, "version": __version__}
    return SweepGrid(x_name, xs, metric, values, y_name, ys, metadata)


@dataclass(frozen=True)
class EigenTracks:
    """Eigenvalues of the reduced system, columns continued across samples."""

    delta: NDArray[np.float64]
    tracks: NDArray[np.complex128]  # shape (n_samples, 4)
    ambiguous: list[int]
    matching_radius: float

    def long_lived_index(self) -> int:
        """Track attaining the smallest |Im lambda| anywhere on the axis."""
        return int(np.argmin(np.abs(self.tracks.imag).min(axis=0)))

    def long_lived(self) -> NDArray[np.complex128]:
        return self.tracks[:, self.long_lived_index()]


def eigenvalue_tracks(
    p_template: SymmetricParams,
    delta_values: Sequence[float],
    matching_radius: float = 1e-4,
) -> EigenTracks:
    """Follow the four reduced eigenvalues along the detuning axis.

    Adjacent samples are paired by minimum total distance in the complex
    plane. Samples where two eigenvalues lie closer than ``matching_radius``
    are listed in ``ambiguous``; the pairing there is not unique.
    """
    if not isinstance(p_template, SymmetricParams):
        raise ParameterError("eigenvalue tracks require SymmetricParams")
    deltas = np.asarray(delta_values, dtype=float)
    out = np.empty((len(deltas), 4), dtype=complex)
    ambiguous: list[int] = []
    prev = None
    for i, d in enumerate(deltas):
        ev = compute_spectrum(build_reduced_matrix(p_template.replace(delta=float(d)))).eigenvalues
        gaps = np.abs(ev[:, None] - ev[None, :])[np.triu_indices(4, 1)]
        if gaps.min() < matching_radius:
            ambiguous.append(i)
        if prev is None:
            ev = sort_eigenvalues(ev)
        else:
            _, cols = linear_sum_assignment(np.abs(prev[:, None] - ev[None, :]))
            ev = ev[cols]
        out[i] = ev
        prev = ev
    return EigenTracks(deltas, out, ambiguous, matching_radius)
