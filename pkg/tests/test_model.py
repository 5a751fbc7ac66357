import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose
from scipy.integrate import solve_ivp

import kerrswitch as ks
from kerrswitch.model import (bistability_boundary, classical_fixed_points,
                              classical_rhs, duffing_to_kerr)

from conftest import load_fixture

REF = ks.KerrParams(delta=5.8, chi=-0.5, epsilon=-4.0, kappa=1.0)


class TestKerrParams:
    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            ks.KerrParams(delta=np.nan, chi=1.0, epsilon=0.0, kappa=1.0)

    def test_rejects_negative_kappa(self):
        with pytest.raises(ValueError):
            ks.KerrParams(delta=1.0, chi=1.0, epsilon=0.0, kappa=-1.0)

    @given(st.floats(-50, 50), st.floats(-5, 5), st.floats(-20, 20),
           st.floats(0, 10))
    @settings(max_examples=50, deadline=None)
    def test_dict_round_trip(self, d, c, e, k):
        p = ks.KerrParams(delta=d, chi=c, epsilon=e, kappa=k)
        assert ks.KerrParams.from_dict(p.to_dict()) == p


class TestClassicalFixedPoints:
    def test_reference_roots_match_scan_oracle(self):
        fx = load_fixture("model_cubic_roots.json")
        pts = classical_fixed_points(REF)
        assert_allclose([p.n for p in pts], fx["n_roots"], rtol=1e-9)

    def test_reference_is_bistable_with_labels(self):
        pts = classical_fixed_points(REF)
        assert [p.stability for p in pts] == ["stable_dim", "unstable",
                                              "stable_bright"]

    def test_residuals_below_contract(self):
        for p in classical_fixed_points(REF):
            assert p.residual <= 1e-10

    def test_undriven_single_origin(self):
        pts = classical_fixed_points(ks.KerrParams(delta=2.0, chi=-1.0,
                                                   epsilon=0.0, kappa=1.0))
        assert len(pts) == 1
        assert pts[0].n == 0.0
        assert pts[0].stability == "stable_dim"

    def test_drive_sign_flip_mirrors_coordinates(self):
        pts_p = classical_fixed_points(REF)
        pts_m = classical_fixed_points(REF.flipped_drive())
        for a, b in zip(pts_p, pts_m):
            assert_allclose([a.x_c, a.p_c], [-b.x_c, -b.p_c], atol=1e-12)
            assert_allclose(a.n, b.n, rtol=1e-12)
            assert a.stability == b.stability

    def test_stability_labels_match_long_time_flow(self, rng):
        pts = classical_fixed_points(REF)

        def flow_to(z0, t=60.0):
            sol = solve_ivp(lambda t, z: classical_rhs(z[0], z[1], REF),
                            (0, t), z0, rtol=1e-10, atol=1e-12)
            return sol.y[:, -1]

        for p in pts:
            if p.stability == "unstable":
                continue
            z0 = np.array([p.x_c, p.p_c]) + 1e-3 * rng.standard_normal(2)
            end = flow_to(z0)
            assert np.hypot(end[0] - p.x_c, end[1] - p.p_c) < 1e-6
        unst = next(p for p in pts if p.stability == "unstable")
        end = flow_to(np.array([unst.x_c, unst.p_c]) + np.array([1e-3, 1e-3]))
        stables = [p for p in pts if p.stability != "unstable"]
        assert min(np.hypot(end[0] - p.x_c, end[1] - p.p_c)
                   for p in stables) < 1e-6

    @given(st.floats(4.0, 9.0), st.floats(0.5, 18.0))
    @settings(max_examples=30, deadline=None)
    def test_count_matches_boundary_side(self, delta, eps):
        chi, kappa = -0.5, 1.0
        entry = bistability_boundary(chi, kappa, [delta])[0]
        pts = classical_fixed_points(
            ks.KerrParams(delta=delta, chi=chi, epsilon=eps, kappa=kappa))
        if not entry["bistable"]:
            assert len(pts) == 1
            return
        lo, hi = entry["epsilon_lower"], entry["epsilon_upper"]
        margin = 1e-3 * (hi - lo)
        if lo + margin < eps < hi - margin:
            assert len(pts) == 3
        elif eps < lo - margin or eps > hi + margin:
            assert len(pts) == 1


class TestBistabilityBoundary:
    def test_no_bistability_below_critical_detuning(self):
        kappa = 1.0
        for delta in (0.0, 1.0, np.sqrt(3.0) * kappa * 0.999):
            entry = bistability_boundary(-0.5, kappa, [delta])[0]
            assert not entry["bistable"]

    def test_wedge_opens_for_positive_delta(self):
        grid = np.linspace(0.0, 10.0, 21)
        entries = bistability_boundary(-0.1, 1.0, grid)
        flags = [e["bistable"] for e in entries]
        assert not flags[0]
        assert flags[-1]
        widths = [e["epsilon_upper"] - e["epsilon_lower"]
                  for e in entries if e["bistable"]]
        assert all(np.diff(widths) > 0)

    def test_edges_match_count_scan_oracle(self):
        fx = load_fixture("model_window_edges.json")
        entry = bistability_boundary(fx["chi"], fx["kappa"], [fx["delta"]])[0]
        lo, hi = sorted(fx["epsilon_edges_from_count_scan"])
        assert_allclose(entry["epsilon_lower"], lo, rtol=1e-6)
        assert_allclose(entry["epsilon_upper"], hi, rtol=1e-6)


class TestDuffingMap:
    def test_lambda_identity_fixture(self):
        fx = load_fixture("model_duffing_lambda.json")
        duff = ks.DuffingParams.from_dict(fx["duffing"])
        kerr, lam = duffing_to_kerr(duff)
        assert_allclose(lam, fx["lambda_from_formula"], rtol=1e-12)
        # identity lam = hbar |chi/delta| holds exactly; the signed ratio is
        # negative in the bistable arrangement
        assert_allclose(lam, duff.hbar * abs(kerr.chi / kerr.delta), rtol=1e-12)
        assert kerr.chi / kerr.delta < 0
        assert_allclose(abs(kerr.chi / kerr.delta), 1.0 / 78.0, rtol=1e-12)
        assert_allclose(lam, 0.0128, rtol=5e-3)  # 3 significant figures

    def test_lambda_linear_in_hbar(self):
        fx = load_fixture("model_duffing_lambda.json")
        d1 = ks.DuffingParams.from_dict(fx["duffing"])
        d2 = ks.DuffingParams.from_dict({**fx["duffing"], "hbar": 2.0})
        _, lam1 = duffing_to_kerr(d1)
        _, lam2 = duffing_to_kerr(d2)
        assert_allclose(lam2, 2.0 * lam1, rtol=1e-12)

    def test_rejects_resonant_drive(self):
        with pytest.raises(ValueError):
            ks.DuffingParams(omega_0=1.0, omega_F=1.0, gamma_duffing=0.1, A=1.0)

    def test_rejects_wrong_side_detuning(self):
        with pytest.raises(ValueError):
            duffing_to_kerr(ks.DuffingParams(omega_0=1.05, omega_F=1.0,
                                             gamma_duffing=0.1, A=1.0))
