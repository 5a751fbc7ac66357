import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.integrate import simpson

import kerrswitch as ks
from kerrswitch import instanton
from kerrswitch.errors import BvpNoConvergence, InsufficientOverlap
from kerrswitch.keldysh import flow_hamiltonian

from conftest import load_fixture

REF = ks.KerrParams(delta=5.8, chi=-0.5, epsilon=-4.0, kappa=1.0)


@pytest.fixture(scope="module")
def bounce_pair():
    return ks.bounce_path(REF)


@pytest.fixture(scope="module")
def refined_pair(bounce_pair):
    pb, pd = bounce_pair
    return ks.refine_path_bvp(pb, REF), ks.refine_path_bvp(pd, REF)


def test_targets_and_orientation(bounce_pair):
    pb, pd = bounce_pair
    assert pb.origin == "stable_bright" and pd.origin == "stable_dim"
    assert pb.terminus == pd.terminus == "unstable"
    for p in bounce_pair:
        assert np.all(np.diff(p.times) > 0)


def test_actions_match_frozen_cross_checked_values(bounce_pair):
    fx = load_fixture("keldysh_reference_actions.json")
    pb, pd = bounce_pair
    assert_allclose(pb.action, fx["iS_bright_shoot"], rtol=1e-6)
    assert_allclose(pd.action, fx["iS_dim_shoot"], rtol=1e-6)


def test_escape_actions_negative(bounce_pair):
    for p in bounce_pair:
        assert p.action < 0


def test_endpoints_are_fixed_points_with_zero_quantum_components(bounce_pair):
    fps = {f.kind: f.as_array() for f in ks.classify_fixed_points(REF)}
    for path in bounce_pair:
        qn = path.quantum_norms()
        assert qn[0] == 0.0 and qn[-1] == 0.0
        assert np.linalg.norm(path.points[0] - fps[path.origin]) < 1e-12
        assert np.linalg.norm(path.points[-1] - fps["unstable"]) < 1e-12


def test_truncation_radii_within_tolerance(bounce_pair):
    for path in bounce_pair:
        d = path.diagnostics
        assert d["r_start"] <= 1e-6 * d["scale"] * 1.5
        assert d["r_end"] <= 1e-5 * d["scale"]
        # quantum components just inside the formal endpoints stay small
        qn = path.quantum_norms()
        assert qn[1] <= 1e-6 * d["scale"]
        assert qn[-2] <= 1e-5 * d["scale"]


def test_hamiltonian_conserved_along_paths(bounce_pair):
    scale = bounce_pair[0].diagnostics["scale"]
    bound = (abs(REF.delta) + abs(REF.chi) * scale**2 + REF.kappa
             + abs(REF.epsilon)) * scale**2 * 1e-6
    for path in bounce_pair:
        H = path.hamiltonian_values(REF)
        assert np.max(np.abs(H)) <= bound


def test_leaves_plane_immediately(bounce_pair):
    for path in bounce_pair:
        qn = path.quantum_norms()
        assert qn[1:-1].max() > 0.1  # genuinely out-of-plane excursion


def test_action_quadrature_halving(bounce_pair):
    for path in bounce_pair:
        t, P = path.times, path.points
        F = ks.eom_rhs(P.T, REF)
        integ = P[:, 2] * F[0] + P[:, 3] * F[1]
        full = -simpson(integ, x=t)
        half = -simpson(integ[::2], x=t[::2])
        assert abs(full - half) <= 1e-6 * abs(full)


def test_path_action_matches_stored_action(bounce_pair):
    for path in bounce_pair:
        assert_allclose(instanton.path_action(path, REF), path.action,
                        rtol=1e-9, atol=1e-12)


def test_action_even_under_drive_sign_flip():
    pb, pd = ks.bounce_path(REF.flipped_drive())
    fx = load_fixture("keldysh_reference_actions.json")
    assert_allclose(pb.action, fx["iS_bright_shoot"], rtol=1e-6)
    assert_allclose(pd.action, fx["iS_dim_shoot"], rtol=1e-6)


def test_bvp_agrees_with_shooting(bounce_pair, refined_pair):
    for shoot, bvp in zip(bounce_pair, refined_pair):
        assert abs(shoot.action - bvp.action) / abs(bvp.action) <= 1e-4
        assert bvp.diagnostics["bvp_max_residual"] <= 1e-8


def test_bvp_near_noop_on_refined_seed(refined_pair):
    rb = refined_pair[0]
    again = ks.refine_path_bvp(rb, REF)
    assert abs(again.action - rb.action) / abs(rb.action) <= 1e-6


def test_offset_halving_leaves_action_unchanged():
    rel = instanton.bounce_offset_convergence(REF, delta_offset=1e-5)
    assert rel["bright"] <= 1e-5 and rel["dim"] <= 1e-5


def test_bvp_rejects_plane_seed():
    fp = next(f for f in ks.classify_fixed_points(REF)
              if f.kind == "stable_dim").as_array()
    t = np.linspace(0.0, 5.0, 64)
    pts = np.tile(fp, (64, 1))
    seed = instanton.InstantonPath(times=t, points=pts, origin="stable_dim",
                                   terminus="unstable", action=0.0)
    with pytest.raises(BvpNoConvergence):
        ks.refine_path_bvp(seed, REF)


class TestActionHelpers:
    def test_constant_path_zero_action(self):
        fp = ks.classify_fixed_points(REF)[0].as_array()
        t = np.linspace(0.0, 3.0, 50)
        path = instanton.InstantonPath(times=t, points=np.tile(fp, (50, 1)),
                                       origin="stable_dim", terminus="unstable",
                                       action=0.0)
        assert instanton.path_action(path, REF) == 0.0

    def test_in_plane_path_zero_action(self, rng):
        t = np.linspace(0.0, 2.0, 80)
        pts = np.zeros((80, 4))
        pts[:, 0] = np.sin(t)
        pts[:, 1] = np.cos(t)
        path = instanton.InstantonPath(times=t, points=pts,
                                       origin="stable_dim", terminus="unstable",
                                       action=0.0)
        assert instanton.path_action(path, REF) == 0.0

    def test_positive_action_flagged(self):
        t = np.linspace(0.0, 1.0, 30)
        pts = np.zeros((30, 4))
        pts[:, 0] = t          # x_c advances
        pts[:, 2] = -1.0       # with x_q negative: -int x_q dx_c > 0
        path = instanton.InstantonPath(times=t, points=pts,
                                       origin="stable_dim", terminus="unstable",
                                       action=0.0)
        with pytest.warns(UserWarning, match="nonphysical"):
            val = instanton.path_action(path, REF)
        assert val > 0


class TestRates:
    def test_zero_barrier(self):
        est = ks.switching_rate(0.0, REF.kappa)
        assert est.rate == REF.kappa

    def test_log_ten(self):
        est = ks.switching_rate(-math.log(10.0), 1.0)
        assert_allclose(est.rate, 0.1, rtol=1e-12)

    def test_rate_identity(self):
        est = ks.switching_rate(-2.3, 0.7, "dim->bright")
        assert_allclose(est.rate, est.attempt_frequency * math.exp(est.action_iS),
                        rtol=1e-15)
        assert est.rate > 0

    def test_rejects_bad_frequency(self):
        with pytest.raises(ValueError):
            ks.switching_rate(-1.0, 0.0)

    def test_barrier_height(self):
        assert ks.barrier_height(0.0, 0.0128) == 0.0
        assert_allclose(ks.barrier_height(-3.0, 0.0128), -0.0384, rtol=1e-12)
        assert_allclose(ks.barrier_height(-3.0, 0.0256),
                        2 * ks.barrier_height(-3.0, 0.0128), rtol=1e-12)
        with pytest.raises(ValueError):
            ks.barrier_height(-1.0, 0.0)


class TestAttemptFrequencyFit:
    def test_exact_recovery_on_synthetic_rates(self, rng):
        sweep = np.linspace(1.0, 2.0, 9)
        iS_bd = -3.0 - 2.0 * sweep
        iS_db = -1.0 - 3.0 * sweep
        w_bd, w_db = 0.87, 0.093
        fit = ks.fit_attempt_frequencies(sweep, iS_bd, iS_db,
                                         sweep, w_bd * np.exp(iS_bd),
                                         w_db * np.exp(iS_db))
        assert_allclose(fit.omega_bd, w_bd, rtol=1e-12)
        assert_allclose(fit.omega_db, w_db, rtol=1e-12)
        assert fit.rms_log10_bd < 1e-12 and fit.rms_log10_db < 1e-12

    def test_insufficient_overlap(self):
        with pytest.raises(InsufficientOverlap):
            ks.fit_attempt_frequencies([1.0, 2.0], [-1, -2], [-1, -2],
                                       [5.0, 6.0], [0.1, 0.1], [0.1, 0.1])

    def test_ignores_nonpositive_rates(self):
        sweep = np.linspace(0.0, 1.0, 6)
        iS = -1.0 - sweep
        rates = 0.5 * np.exp(iS)
        rates_bad = rates.copy()
        rates_bad[0] = 0.0
        fit = ks.fit_attempt_frequencies(sweep, iS, iS, sweep, rates_bad, rates)
        assert fit.n_points == 5
        assert_allclose(fit.omega_bd, 0.5, rtol=1e-12)
