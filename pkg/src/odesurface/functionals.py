"""Total curvature integrals, the Gauss-Bonnet residual and related checks."""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from .errors import ContractViolation, HypothesisViolation, NonFiniteSample
from .odecurve import (
    Curve,
    RootSpectrum,
    classify_dominance,
    kappa_integrand,
    theta_integrand,
)
from .quadrature import (
    IntegralResult,
    QuadConfig,
    integrate_box,
    integrate_interval,
    integrate_line,
    integrate_plane,
)
from .surface import (
    EDGES,
    SurfaceSpec,
    area_integrand,
    edge_integrand,
    gauss_integrand,
    mean_curvature_norm_at,
    gauss_curvature_at,
    mean_lp_integrand,
)

# Integrals of |f| have kinks along the zero set of f, where the embedded
# error estimate is very pessimistic; they are refined to at most this
# relative tolerance.
KINK_REL_TOL = 1e-7
# Cap on the automatically widened truncation domain.
TRUNCATION_CAP = 4000.0


# --- configuration helpers ---------------------------------------------------


def _decay_rate(curve: Curve) -> float | None:
    if not isinstance(curve, RootSpectrum):
        return None
    rep = classify_dominance(curve)
    return rep.epsilon2 if rep.real_dominant else None


def truncation_config(cfg: QuadConfig, curves, plane: bool) -> QuadConfig:
    """Widen ``max_half_width`` so the spectral gap can take the tails below tolerance.

    Densities of real-dominant spectra decay like ``exp(-eps2 |t|)`` on the
    line and at least like ``exp(-eps2 |t| / 2)`` on the plane.  When the
    configured maximum is too small for that decay it is raised (up to
    ``TRUNCATION_CAP``); otherwise ``cfg`` is returned unchanged.  The factor
    two leaves room for one more doubling after the tail drops below
    tolerance, which the step test needs to see.
    """
    rates = [_decay_rate(c) for c in curves]
    if any(r is None for r in rates):
        return cfg
    rate = min(rates) * (0.5 if plane else 1.0)
    tol = max(cfg.rel_tol, 1e-16)
    needed = min(TRUNCATION_CAP, 2.0 * (math.log(1.0 / tol) + 5.0) / rate)
    if needed <= cfg.max_half_width:
        return cfg
    return dataclasses.replace(cfg, max_half_width=needed)


def _kink_config(cfg: QuadConfig) -> QuadConfig:
    if cfg.rel_tol >= KINK_REL_TOL:
        return cfg
    return dataclasses.replace(cfg, rel_tol=KINK_REL_TOL)


# --- reports ---------------------------------------------------------------------


def result_to_dict(r: IntegralResult) -> dict:
    return {
        "value": r.value,
        "error_estimate": r.error_estimate,
        "converged": r.converged,
        "diverged": r.diverged,
        "abs_value": r.abs_value,
        "final_half_width": r.final_half_width,
        "tail_history": [[t, v] for t, v in r.tail_history],
        "evaluations": r.evaluations,
    }


def result_from_dict(d: dict) -> IntegralResult:
    return IntegralResult(
        value=d["value"],
        error_estimate=d["error_estimate"],
        converged=d["converged"],
        tail_history=tuple((t, v) for t, v in d["tail_history"]),
        diverged=d["diverged"],
        abs_value=d["abs_value"],
        evaluations=d["evaluations"],
    )


@dataclass(frozen=True)
class GaussBonnetReport:
    k_total: float
    abs_k_total: float
    theta1: float
    theta2: float
    residual: float
    k_result: IntegralResult
    abs_k_result: IntegralResult
    theta1_result: IntegralResult
    theta2_result: IntegralResult

    @property
    def converged(self) -> bool:
        return all(r.converged for r in self.results())

    @property
    def diverged(self) -> bool:
        return any(r.diverged for r in self.results())

    def results(self):
        return (self.k_result, self.abs_k_result, self.theta1_result, self.theta2_result)

    def to_dict(self) -> dict:
        return {
            "k_total": self.k_total,
            "abs_k_total": self.abs_k_total,
            "theta1": self.theta1,
            "theta2": self.theta2,
            "residual": self.residual,
            "converged": self.converged,
            "k_result": result_to_dict(self.k_result),
            "abs_k_result": result_to_dict(self.abs_k_result),
            "theta1_result": result_to_dict(self.theta1_result),
            "theta2_result": result_to_dict(self.theta2_result),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "GaussBonnetReport":
        return cls(
            d["k_total"], d["abs_k_total"], d["theta1"], d["theta2"], d["residual"],
            *(result_from_dict(d[k]) for k in ("k_result", "abs_k_result", "theta1_result", "theta2_result")),
        )


@dataclass(frozen=True)
class BoundCheckReport:
    quantity: float
    bound: float
    satisfied: bool
    bound_kind: str
    result: IntegralResult | None = None

    def to_dict(self) -> dict:
        return {
            "quantity": self.quantity,
            "bound": self.bound,
            "satisfied": self.satisfied,
            "bound_kind": self.bound_kind,
            "result": None if self.result is None else result_to_dict(self.result),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "BoundCheckReport":
        res = d.get("result")
        return cls(d["quantity"], d["bound"], d["satisfied"], d["bound_kind"],
                   None if res is None else result_from_dict(res))


@dataclass(frozen=True)
class LpDiagnostic:
    p: float
    partial_values: tuple
    verdict: str

    def to_dict(self) -> dict:
        return {"p": self.p, "partial_values": [[t, v] for t, v in self.partial_values], "verdict": self.verdict}

    @classmethod
    def from_dict(cls, d: dict) -> "LpDiagnostic":
        return cls(d["p"], tuple((t, v) for t, v in d["partial_values"]), d["verdict"])


@dataclass(frozen=True)
class DecayProfile:
    """Samples of a pointwise quantity along the diagonal ``t1 = t2 = r``."""

    quantity: str
    radii: tuple
    values: tuple
    trend: str

    def to_dict(self) -> dict:
        return {"quantity": self.quantity, "radii": list(self.radii), "values": list(self.values),
                "trend": self.trend}

    @classmethod
    def from_dict(cls, d: dict) -> "DecayProfile":
        return cls(d["quantity"], tuple(d["radii"]), tuple(d["values"]), d["trend"])


@dataclass(frozen=True)
class BoundaryLimitRow:
    r: float
    edge: str
    edge_integral: float
    target: float

    @property
    def deviation(self) -> float:
        return abs(self.edge_integral - self.target)

    def to_dict(self) -> dict:
        return {"r": self.r, "edge": self.edge, "edge_integral": self.edge_integral,
                "target": self.target, "deviation": self.deviation}

    @classmethod
    def from_dict(cls, d: dict) -> "BoundaryLimitRow":
        return cls(d["r"], d["edge"], d["edge_integral"], d["target"])


# --- curve totals ------------------------------------------------------------------


def kappa_total(curve: Curve, cfg: QuadConfig = QuadConfig()) -> IntegralResult:
    """Total first curvature; divergence shows up as ``converged=False``."""
    return integrate_line(kappa_integrand(curve), truncation_config(cfg, [curve], plane=False))


def theta_total(curve: Curve, cfg: QuadConfig = QuadConfig()) -> IntegralResult:
    return integrate_line(theta_integrand(curve), truncation_config(cfg, [curve], plane=False))


def abs_theta_total(curve: Curve, cfg: QuadConfig = QuadConfig()) -> IntegralResult:
    cfg = _kink_config(truncation_config(cfg, [curve], plane=False))
    return integrate_line(theta_integrand(curve, absolute=True), cfg)


# --- surface totals ----------------------------------------------------------------


def gauss_total(s: SurfaceSpec, cfg: QuadConfig = QuadConfig(), absolute: bool = False) -> IntegralResult:
    """Total Gauss curvature ``K[S]`` or total absolute curvature ``|K|[S]``."""
    cfg = truncation_config(cfg, [s.curve1, s.curve2], plane=True)
    if absolute:
        cfg = _kink_config(cfg)
    return integrate_plane(gauss_integrand(s, absolute), cfg)


def gauss_bonnet_check(s: SurfaceSpec, cfg: QuadConfig = QuadConfig()) -> GaussBonnetReport:
    k = gauss_total(s, cfg)
    ak = gauss_total(s, cfg, absolute=True)
    th1 = theta_total(s.curve1, cfg)
    th2 = theta_total(s.curve2, cfg)
    residual = k.value - 2.0 * th1.value - 2.0 * th2.value + 2.0 * math.pi
    return GaussBonnetReport(k.value, ak.value, th1.value, th2.value, residual, k, ak, th1, th2)


def partial_volume(s: SurfaceSpec, cfg: QuadConfig, T: float) -> float:
    """Area of the image of ``[-T, T]^2``."""
    if T < 0:
        raise ContractViolation("T must be non-negative")
    return integrate_box(area_integrand(s), (-T, T, -T, T), cfg).value


def volume_total(s: SurfaceSpec, cfg: QuadConfig = QuadConfig()) -> IntegralResult:
    """Total area through the extension loop (expected to diverge)."""
    return integrate_plane(area_integrand(s), cfg)


# --- bound checks ------------------------------------------------------------------


def _require_all_real_dominant(curve: Curve) -> RootSpectrum:
    if not isinstance(curve, RootSpectrum) or not curve.all_real:
        raise HypothesisViolation("the bound needs all roots real and simple")
    if not classify_dominance(curve).real_dominant:
        raise HypothesisViolation("the bound needs dominant real roots at both ends")
    return curve


def check_kappa_bound(curve: Curve, cfg: QuadConfig = QuadConfig()) -> BoundCheckReport:
    spec = _require_all_real_dominant(curve)
    n = spec.dim
    res = kappa_total(spec, cfg)
    bound = 2.0 * n * (n - 1)
    return BoundCheckReport(res.value, bound, res.value <= bound + 1e-9, "kappa_total", res)


def check_total_gauss_bound(s: SurfaceSpec, cfg: QuadConfig = QuadConfig()) -> BoundCheckReport:
    c1, c2 = _require_all_real_dominant(s.curve1), _require_all_real_dominant(s.curve2)
    n1, n2 = c1.dim, c2.dim
    res = gauss_total(s, cfg, absolute=True)
    bound = 2.0 * math.pi + 4.0 * n1 * (n1 - 1) + 4.0 * n2 * (n2 - 1)
    return BoundCheckReport(res.value, bound, res.value <= bound + 1e-9, "abs_gauss_total", res)


# --- mean curvature diagnostics -----------------------------------------------------


def mean_curvature_lp(s: SurfaceSpec, p: float, cfg: QuadConfig = QuadConfig()) -> LpDiagnostic:
    """Partial integrals of ``|H|^p g`` over growing squares, with a verdict.

    Convergent when the last doubling changed the value by less than the
    tolerance, divergent when the quadrature growth heuristic fires (or
    the density leaves the floating-point range), inconclusive otherwise.
    """
    if not p >= 1:
        raise ContractViolation("p must be at least 1")
    f = mean_lp_integrand(s, p)
    if cfg.max_half_width == 0:
        return LpDiagnostic(float(p), ((0.0, 0.0),), "inconclusive")
    try:
        res = integrate_plane(f, cfg)
    except NonFiniteSample:
        return LpDiagnostic(float(p), _overflow_history(f, cfg), "divergent")
    if res.converged:
        verdict = "convergent"
    elif res.diverged:
        verdict = "divergent"
    else:
        verdict = "inconclusive"
    return LpDiagnostic(float(p), res.tail_history, verdict)


def _overflow_history(f, cfg: QuadConfig):
    """Partial values up to the first square whose density overflows."""
    out = []
    T = cfg.initial_half_width
    while T <= cfg.max_half_width:
        try:
            out.append((T, integrate_box(f, (-T, T, -T, T), cfg).value))
        except NonFiniteSample:
            out.append((T, math.inf))
            break
        T *= 2
    return tuple(out)


def decay_profile(s: SurfaceSpec, radii, quantity: str = "mean_curvature") -> DecayProfile:
    """Sample ``|H|`` or ``|K|`` on the diagonal and classify the trend."""
    fns = {
        "mean_curvature": lambda r: mean_curvature_norm_at(s, r, r),
        "gauss_curvature": lambda r: abs(gauss_curvature_at(s, r, r)),
    }
    if quantity not in fns:
        raise ContractViolation(f"quantity must be one of {sorted(fns)}")
    radii = tuple(float(r) for r in radii)
    values = tuple(float(fns[quantity](r)) for r in radii)
    diffs = np.diff(values)
    if len(values) > 1 and np.all(diffs > 0):
        trend = "growing"
    elif len(values) > 1 and np.all(diffs < 0):
        trend = "decaying"
    else:
        trend = "mixed"
    return DecayProfile(quantity, radii, values, trend)


# --- boundary limit ----------------------------------------------------------------


def boundary_limit_check(s: SurfaceSpec, cfg: QuadConfig = QuadConfig(), radii=(4.0, 6.0, 8.0),
                         edges=EDGES):
    """Edge integrals of the geodesic curvature on ``[-r, r]^2``.

    Each edge integral is paired with its limit: ``-Theta[sigma1]`` for
    the edges ``t2 = +-r`` and ``-Theta[sigma2]`` for ``t1 = +-r``.
    """
    th1 = theta_total(s.curve1, cfg).value
    th2 = theta_total(s.curve2, cfg).value
    rows = []
    for r in radii:
        for edge in edges:
            val = integrate_interval(edge_integrand(s, edge, r), -r, r, cfg).value
            target = -th1 if edge.startswith("t2") else -th2
            rows.append(BoundaryLimitRow(float(r), edge, val, target))
    return rows
