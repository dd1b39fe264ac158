import math

import numpy as np
import pytest

from oracles import single_mode_threshold
from paramagnon import ModelParams, ParameterError, SymmetricParams
from paramagnon.stability import is_stable
from paramagnon.sweep import apply_overrides, eigenvalue_tracks, run_sweep


def test_single_point_F():
    grid = run_sweep(SymmetricParams(delta=3.0, g=2.0), ("G", [0.0]), metric="F")
    assert grid.values.tolist() == [1.0]
    assert grid.shape == (1,)


def test_unknown_axis_and_metric():
    with pytest.raises(ParameterError):
        run_sweep(SymmetricParams(), ("nope", [0.0]))
    with pytest.raises(ParameterError):
        run_sweep(SymmetricParams(), ("G", [0.0]), metric="nope")
    with pytest.raises(ParameterError):
        run_sweep(SymmetricParams(), ("G", [0.0]), ("G", [1.0]))


def test_model_aliases():
    p = apply_overrides(ModelParams(), {"delta": 2.0, "g": 0.5, "gamma": 0.7})
    assert (p.delta_c, p.delta_1, p.delta_2, p.g1, p.g2) == (2.0, 2.0, 2.0, 0.5, 0.5)
    assert p.kappa == p.gamma1 == p.gamma2 == 0.7


def test_phase_grid_matches_single_mode_boundary():
    deltas = np.linspace(-3, 3, 61)
    gs = np.linspace(0, 4, 81)
    grid = run_sweep(ModelParams(pump_convention="half"), ("delta", deltas), ("G", gs), "stable").grid()
    step = gs[1] - gs[0]
    for i, d in enumerate(deltas):
        unstable = gs[grid[i] == 0.0]
        # first unstable sample lies within one grid step above the analytic threshold;
        # samples landing on the threshold itself are marginal and count as unstable
        assert -1e-9 <= unstable[0] - single_mode_threshold(d) < step + 1e-9


def test_phase_grid_topology_with_magnons():
    deltas = np.linspace(-6, 6, 121)
    gs = np.linspace(0, 3, 121)
    grid = run_sweep(SymmetricParams(g=2.0), ("delta", deltas), ("G", gs), "stable").grid()
    first_unstable = np.array([gs[np.argmax(row == 0.0)] for row in grid])
    # stable at G = 0 everywhere; each column has a single stable-to-unstable transition
    assert np.all(grid[:, 0] == 1.0)
    for row in grid:
        k = np.argmax(row == 0.0)
        assert np.all(row[:k] == 1.0) and np.all(row[k:] == 0.0)
    # non-monotonic in delta on each side, lowest near |delta| = 3
    right = first_unstable[deltas >= 0]
    assert np.any(np.diff(right) > 0) and np.any(np.diff(right) < 0)
    assert abs(abs(deltas[np.argmin(first_unstable)]) - 3.0) < 0.2


def test_sentinels_coincide_with_instability():
    deltas = np.linspace(-4, 4, 17)
    gs = np.linspace(0, 2, 11)
    base = SymmetricParams(g=2.0)
    stable = run_sweep(base, ("delta", deltas), ("G", gs), "stable").grid()
    for metric in ("F", "spin_current", "condition_number"):
        values = run_sweep(base, ("delta", deltas), ("G", gs), metric).grid()
        assert np.array_equal(np.isnan(values), stable == 0.0)
    spectral = run_sweep(base, ("delta", deltas), ("G", gs), "min_abs_im_eig").grid()
    assert np.all(np.isfinite(spectral))


def test_values_are_finite_or_sentinel():
    grid = run_sweep(SymmetricParams(delta=3.0, g=2.0), ("G", np.linspace(0, 1.5, 31)), metric="F")
    assert len(grid.values) == 31
    assert all(math.isnan(v) or math.isfinite(v) for v in grid.values)
    assert math.isnan(grid.values[-1])


def test_reordering_axis_permutes_output():
    xs = np.linspace(-3, 3, 7)
    ys = np.linspace(0, 1.2, 5)
    perm = np.array([3, 0, 6, 1, 5, 2, 4])
    base = SymmetricParams(g=2.0)
    a = run_sweep(base, ("delta", xs), ("G", ys), "min_abs_eig").grid()
    b = run_sweep(base, ("delta", xs[perm]), ("G", ys), "min_abs_eig").grid()
    assert np.array_equal(a[perm], b)


def test_workers_bit_identical():
    xs = np.linspace(-6, 6, 25)
    ys = np.linspace(0, 3, 25)
    base = SymmetricParams(g=2.0)
    one = run_sweep(base, ("delta", xs), ("G", ys), "F", workers=1)
    many = run_sweep(base, ("delta", xs), ("G", ys), "F", workers=3)
    assert one.values.tobytes() == many.values.tobytes()


def test_flat_tracks_without_coupling():
    tr = eigenvalue_tracks(SymmetricParams(gamma=0.7), np.linspace(0, 6, 31))
    np.testing.assert_allclose(tr.tracks.imag, -0.7, atol=1e-14)


def test_tracks_long_lived_mode():
    tr = eigenvalue_tracks(SymmetricParams(g=2.0, G=0.95), np.linspace(0, 6, 601))
    slow = tr.long_lived()
    i = int(np.argmin(np.abs(slow.imag)))
    assert abs(tr.delta[i] - 3.0) <= 0.2
    assert abs(slow[i].real) < 1e-8
    near = np.abs(tr.delta - tr.delta[i]) <= 0.2
    assert np.all(np.abs(slow[near].real) < 1e-8)


def test_tracks_respect_pairing():
    tr = eigenvalue_tracks(SymmetricParams(g=2.0, G=0.95), np.linspace(0, 6, 121))
    for row in tr.tracks:
        for z in row:
            assert np.min(np.abs(-z.conjugate() - row)) < 1e-7


def test_tracks_are_continuous():
    deltas = np.linspace(0, 6, 601)
    tr = eigenvalue_tracks(SymmetricParams(g=2.0, G=0.5), deltas)
    jumps = np.abs(np.diff(tr.tracks, axis=0))
    # eigenvalues move like sqrt(delta - delta_ep) next to exceptional points
    assert jumps.max() < 3 * math.sqrt(deltas[1] - deltas[0])
    assert np.median(jumps) < 0.02


def test_tracks_flag_ambiguity():
    # decoupled modes are exactly degenerate in pairs
    tr = eigenvalue_tracks(SymmetricParams(), [0.0, 1.0])
    assert tr.ambiguous == [0, 1]


def test_tracks_require_symmetric():
    with pytest.raises(ParameterError):
        eigenvalue_tracks(ModelParams(), [0.0])


def test_stable_metric_agrees_with_is_stable():
    grid = run_sweep(SymmetricParams(delta=1.0, g=2.0), ("G", np.linspace(0, 3, 31)))
    expected = [1.0 if is_stable(SymmetricParams(delta=1.0, g=2.0, G=g)) else 0.0 for g in np.linspace(0, 3, 31)]
    assert grid.values.tolist() == expected
