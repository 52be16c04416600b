import math

import numpy as np
import pytest

from helpers import dominant_spectrum, dominant_surface
from odesurface import (
    BoundaryLimitRow,
    BoundCheckReport,
    DecayProfile,
    GaussBonnetReport,
    HypothesisViolation,
    LpDiagnostic,
    QuadConfig,
    SurfaceSpec,
    abs_theta_total,
    boundary_limit_check,
    check_kappa_bound,
    check_total_gauss_bound,
    decay_profile,
    gauss_bonnet_check,
    gauss_total,
    kappa_total,
    mean_curvature_lp,
    partial_volume,
    theta_total,
    validate_spectrum,
    volume_total,
)
from odesurface.functionals import result_from_dict, result_to_dict, truncation_config
from odesurface.tables import ex86_surface

S = validate_spectrum
SPIRAL = S([-1], [(1, 1)])
PLANE3 = SurfaceSpec(S([1, 0, -1]), S([1, 0, -1]))


def test_two_root_totals():
    for roots in ([1, -1], [2, -3], [0.25, -4]):
        c = S(roots)
        assert kappa_total(c).value == pytest.approx(math.pi / 2, abs=1e-9)
        assert theta_total(c).value == pytest.approx(math.pi / 2, abs=1e-9)
    assert abs_theta_total(S([1, -1])).value == pytest.approx(math.pi / 2, abs=1e-6)


def test_theta_three_roots():
    assert theta_total(S([1, 0, -1])).value == pytest.approx(1.10423, abs=1e-4)


def test_abs_theta():
    assert abs_theta_total(S([1, -5, -6])).value == pytest.approx(2.03662, abs=1e-3)
    assert abs_theta_total(S([1, -7, -8])).value == pytest.approx(2.10877, abs=1e-3)


def test_kappa_bound_random_quartic():
    rng = np.random.default_rng(10)
    for _ in range(20):
        rep = check_kappa_bound(dominant_spectrum(rng, 4))
        assert rep.result.converged and rep.quantity <= 24 and rep.satisfied


def test_spiral_kappa_diverges():
    res = kappa_total(SPIRAL)
    assert not res.converged and res.diverged


def test_spiral_surface_gauss_diverges():
    res = gauss_total(SurfaceSpec(SPIRAL, S([1, -1])), absolute=True)
    assert not res.converged


def test_saddle_totals():
    s = SurfaceSpec(S([1, -2]), S([1, -2]))
    assert abs(gauss_total(s).value) < 1e-6
    assert gauss_total(s, absolute=True).value == pytest.approx(0.811319, abs=1e-3)


def test_gauss_bonnet_three_roots():
    rep = gauss_bonnet_check(PLANE3)
    assert rep.converged
    assert rep.theta1 == pytest.approx(1.10423, abs=1e-4) and rep.theta2 == pytest.approx(1.10423, abs=1e-4)
    assert abs(rep.residual) <= 1e-6
    assert rep.residual == rep.k_total - 2 * rep.theta1 - 2 * rep.theta2 + 2 * math.pi
    assert abs(rep.k_total) <= rep.abs_k_total


@pytest.mark.xfail(strict=True, reason="printed value is off the Gauss-Bonnet-consistent total by 1.35e-3")
def test_gauss_bonnet_three_roots_printed_total():
    assert gauss_bonnet_check(PLANE3).k_total == pytest.approx(-1.8649, abs=1e-3)


@pytest.mark.xfail(strict=True, reason="printed value is off the Gauss-Bonnet-consistent total by 1.2e-3")
def test_printed_total_for_doubled_root_pair():
    s = SurfaceSpec(S([1, -1, -2]), S([1, -1, -2]))
    assert gauss_total(s).value == pytest.approx(-1.96762, abs=1e-3)


def test_doubled_root_pair_is_gauss_bonnet_consistent():
    s = SurfaceSpec(S([1, -1, -2]), S([1, -1, -2]))
    th = theta_total(s.curve1).value
    # reference value from a 300-digit quadrature of the curve density
    assert th == pytest.approx(1.0785869819993156, abs=1e-12)
    assert gauss_total(s).value == pytest.approx(4 * th - 2 * math.pi, abs=1e-8)


def test_two_by_two_gauss_bonnet():
    rng = np.random.default_rng(12)
    for _ in range(5):
        rep = gauss_bonnet_check(dominant_surface(rng, 2, 2))
        assert abs(rep.k_total) < 1e-6 and abs(rep.residual) < 1e-6


def test_literal_family_row():
    rep = gauss_bonnet_check(ex86_surface(1))
    assert rep.k_total == pytest.approx(-2.15652, abs=1e-4)
    assert rep.theta1 == pytest.approx(0.49253, abs=1e-4)
    assert rep.theta2 == pytest.approx(math.pi / 2, abs=1e-9)
    assert abs(rep.residual) <= 1e-6


def test_bound_checks():
    rep = check_kappa_bound(S([1, 0, -1]))
    assert rep.satisfied and rep.bound == 12 and rep.bound_kind == "kappa_total"
    rep = check_total_gauss_bound(PLANE3)
    assert rep.quantity == pytest.approx(1.866, abs=1e-3)
    assert rep.bound == pytest.approx(2 * math.pi + 48) and rep.satisfied
    with pytest.raises(HypothesisViolation):
        check_total_gauss_bound(ex86_surface(2))
    with pytest.raises(HypothesisViolation):
        check_kappa_bound(SPIRAL)
    with pytest.raises(HypothesisViolation):
        check_kappa_bound(S([3, 2, 1]))


def test_total_inequalities():
    rng = np.random.default_rng(13)
    for _ in range(10):
        c = dominant_spectrum(rng, int(rng.integers(2, 6)))
        k, th, ath = kappa_total(c).value, theta_total(c).value, abs_theta_total(c).value
        assert k >= ath - 1e-7 and ath >= abs(th) - 1e-7


def test_root_negation_invariance():
    rng = np.random.default_rng(14)
    for _ in range(3):
        s = dominant_surface(rng, 3, 2)
        neg = SurfaceSpec(*(S([-r for r in c.real_roots]) for c in (s.curve1, s.curve2)))
        assert kappa_total(neg.curve1).value == pytest.approx(kappa_total(s.curve1).value, abs=1e-8)
        assert theta_total(neg.curve1).value == pytest.approx(theta_total(s.curve1).value, abs=1e-8)
        assert gauss_total(neg).value == pytest.approx(gauss_total(s).value, abs=1e-7)
        assert gauss_total(neg, absolute=True).value == pytest.approx(gauss_total(s, absolute=True).value, abs=1e-6)


def test_lp_verdicts():
    assert mean_curvature_lp(SurfaceSpec(S([2, 1, -1, -2]), S([2, 1, -1, -2])), 3).verdict == "convergent"
    diag = mean_curvature_lp(PLANE3, 2, QuadConfig(initial_half_width=0, max_half_width=0))
    assert diag.partial_values == ((0.0, 0.0),)


@pytest.mark.slow
def test_lp_square_divergence():
    roots = [10, 2, 1, -1, -2]
    diag = mean_curvature_lp(SurfaceSpec(S(roots), S(roots)), 2)
    assert diag.verdict == "divergent"
    vals = [v for _, v in diag.partial_values]
    assert all(b >= a for a, b in zip(vals, vals[1:]))


def test_boundary_limit():
    s = SurfaceSpec(S([1, -1]), S([2, -3]))
    rows = boundary_limit_check(s)
    for edge in ("t2=+r", "t1=-r"):
        devs = [r.deviation for r in rows if r.edge == edge]
        assert all(b < a for a, b in zip(devs, devs[1:]))
        assert all(r.target == pytest.approx(-math.pi / 2, abs=1e-9) for r in rows)
    rows = boundary_limit_check(PLANE3, radii=(8.0,), edges=("t2=+r", "t1=+r"))
    assert rows[0].edge_integral == pytest.approx(-1.10423, abs=1e-2)
    assert rows[1].edge_integral == pytest.approx(rows[1].target, abs=1e-2)


def test_boundary_targets_follow_factors():
    s = SurfaceSpec(S([1, 0, -1]), S([1, -1]))
    rows = boundary_limit_check(s, radii=(10.0,))
    th1, th2 = theta_total(s.curve1).value, theta_total(s.curve2).value
    for r in rows:
        assert r.target == (-th1 if r.edge.startswith("t2") else -th2)
        assert r.deviation < 1e-3


def test_volume():
    s = SurfaceSpec(S([1, -1]), S([1, -1]))
    v5, v10 = partial_volume(s, QuadConfig(), 5), partial_volume(s, QuadConfig(), 10)
    assert v10 > v5
    assert math.log(v10 / v5) / 5 >= 2 - 0.1
    assert not volume_total(s).converged


def test_decay_profiles():
    thm = SurfaceSpec(S([2, 1, -1, -2]), S([2, 1, -1, -2]))
    assert decay_profile(thm, (2, 4, 6, 8)).trend == "decaying"
    grow = SurfaceSpec(S([1, -3, -4]), S([1, -3, -4]))
    assert decay_profile(grow, (2, 4, 6, 8)).trend == "growing"
    assert decay_profile(thm, (2, 4, 6), "gauss_curvature").trend == "decaying"


def test_truncation_policy():
    cfg = QuadConfig()
    narrow = truncation_config(cfg, [S([1, -1, -1.1])], plane=False)
    assert narrow.max_half_width > cfg.max_half_width
    assert truncation_config(cfg, [S([1, -1])], plane=False) is cfg
    assert truncation_config(cfg, [SPIRAL], plane=False) is cfg


def test_report_round_trips():
    rep = gauss_bonnet_check(SurfaceSpec(S([1, -1]), S([2, -1])))
    assert GaussBonnetReport.from_dict(rep.to_dict()) == rep
    res = theta_total(S([1, -1]))
    assert result_from_dict(result_to_dict(res)) == res
    b = check_kappa_bound(S([1, 0, -1]))
    assert BoundCheckReport.from_dict(b.to_dict()) == b
    lp = LpDiagnostic(3.0, ((10.0, 1.0), (20.0, 1.5)), "inconclusive")
    assert LpDiagnostic.from_dict(lp.to_dict()) == lp
    dp = DecayProfile("mean_curvature", (1.0, 2.0), (3.0, 2.0), "decaying")
    assert DecayProfile.from_dict(dp.to_dict()) == dp
    row = BoundaryLimitRow(4.0, "t2=+r", -1.2, -1.1)
    assert BoundaryLimitRow.from_dict(row.to_dict()) == row
