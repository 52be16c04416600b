"""Tensor-product surfaces ``Sigma(t1, t2) = sigma1(t1) (x) sigma2(t2)``.

Pointwise quantities (Gauss curvature, its area density, edge geodesic
curvature, the norm of the mean curvature vector) are ratios of blade
inner products.  Those inner products are expanded exactly by
:mod:`odesurface.expansion` and only the final ratio is formed in floating
point, in log-scaled form.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from . import expansion as ex
from .errors import ContractViolation, DegenerateMetric, PreconditionViolation
from .exterior import ScaledScalar, ScaledVector, dot
from .odecurve import Curve, RootSpectrum, curve_from_json, curve_rows, eval_jet

# Derivative multi-indices of the surface jet.
P, P1, P2, P11, P12, P22 = (0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)
EDGES = ("t2=+r", "t2=-r", "t1=+r", "t1=-r")
# A metric is treated as degenerate when g / (|Sigma_1| |Sigma_2|) falls below this.
DEGENERATE_SINE = 1e-300


@dataclass(frozen=True)
class SurfaceSpec:
    curve1: Curve
    curve2: Curve

    @property
    def dim(self) -> int:
        return self.curve1.dim * self.curve2.dim

    def to_json(self) -> dict:
        return {"curve1": self.curve1.to_json(), "curve2": self.curve2.to_json()}


def surface_from_json(obj) -> SurfaceSpec:
    if not isinstance(obj, dict) or set(obj) != {"curve1", "curve2"}:
        raise ContractViolation("surface must be an object with keys 'curve1' and 'curve2'")
    return SurfaceSpec(curve_from_json(obj["curve1"]), curve_from_json(obj["curve2"]))


@dataclass(frozen=True)
class SurfaceJet:
    p: ScaledVector
    p1: ScaledVector
    p2: ScaledVector
    p11: ScaledVector
    p12: ScaledVector
    p22: ScaledVector
    g11: ScaledScalar
    g12: ScaledScalar
    g22: ScaledScalar
    g: ScaledScalar


# --- exact algebra --------------------------------------------------------


class SurfaceAlgebra:
    """Exact blade inner products of one surface, built on first use."""

    def __init__(self, spec: SurfaceSpec):
        self.rows = ex.tensor_rows(curve_rows(spec.curve1), curve_rows(spec.curve2))
        self._coords = {}

    def coords(self, *cols):
        if cols not in self._coords:
            self._coords[cols] = ex.blade_coordinates(self.rows, list(cols))
        return self._coords[cols]

    def _pair(self, a, b):
        return ex.pairing(self.coords(*a), self.coords(*b))

    @functools.cached_property
    def metric(self):
        return tuple(ex.ExpPoly(self._pair((a,), (b,)), 2) for a, b in ((P1, P1), (P1, P2), (P2, P2)))

    @functools.cached_property
    def g2(self) -> ex.ExpPoly:
        return ex.ExpPoly(self._pair((P1, P2), (P1, P2)), 2)

    @functools.cached_property
    def gauss_numerator(self) -> ex.ExpPoly:
        l11, l12, l22 = (P1, P2, P11), (P1, P2, P12), (P1, P2, P22)
        terms = ex.combine((1, self._pair(l11, l22)), (-1, self._pair(l12, l12)))
        return ex.ExpPoly(terms, 2)

    @functools.cached_property
    def edge_t1(self):
        """``(S1 ^ S2, S1 ^ S11)`` and ``|S1|^2`` for curves of constant t2."""
        return ex.ExpPoly(self._pair((P1, P2), (P1, P11)), 2), self.metric[0]

    @functools.cached_property
    def edge_t2(self):
        """``(S2 ^ S1, S2 ^ S22)`` and ``|S2|^2`` for curves of constant t1."""
        return ex.ExpPoly(self._pair((P2, P1), (P2, P22)), 2), self.metric[2]

    @functools.cached_property
    def normal_minors(self) -> "NormalMinors":
        return NormalMinors([self.coords(P1, P2, c) for c in (P11, P12, P22)])


class NormalMinors:
    """Coordinates of ``S1 ^ S2 ^ S11``, ``S1 ^ S2 ^ S12``, ``S1 ^ S2 ^ S22``.

    A coordinate's exponents depend only on the chosen rows, not on the
    derivative columns, so the three blades share one exponent table and
    each exponential is evaluated once.
    """

    def __init__(self, blades):
        sets = sorted(set().union(*blades))
        coef, rate, freq, starts = [], [], [], []
        for S in sets:
            exps = sorted(set().union(*(b.get(S, {}) for b in blades)),
                          key=lambda e: tuple(float(x.re) for x in e) + tuple(float(x.im) for x in e))
            starts.append(len(coef))
            for e in exps:
                coef.append([complex(b.get(S, {}).get(e, ex.GQ_ZERO)) for b in blades])
                rate.append([float(x.re) for x in e])
                freq.append([float(x.im) for x in e])
        self.count = len(sets)
        self.starts = np.array(starts, dtype=np.intp)
        self.coef = np.array(coef, dtype=complex).reshape(-1, 3)
        self.rate = np.array(rate, dtype=float).reshape(-1, 2)
        self.freq = np.array(freq, dtype=float).reshape(-1, 2)
        self.oscillating = bool(np.any(self.freq != 0.0))
        self._c = [np.ascontiguousarray(self.coef[:, j].real) for j in range(3)]
        self._ci = [np.ascontiguousarray(self.coef[:, j].imag) for j in range(3)]

    def combine(self, t1, t2, w11, w12, w22):
        """Per-point ``sum_S (w22 m11 + w11 m22 - 2 w12 m12)(S)^2`` and its log-scale.

        ``w11, w12, w22`` are per-point weights (already on a common scale).
        """
        n, m = t1.size, self.coef.shape[0]
        hh = np.zeros(n)
        scale = np.zeros(n)
        if m == 0:
            return hh, scale
        step = max(1, ex._CHUNK // m)
        for lo in range(0, n, step):
            sl = slice(lo, lo + step)
            e = t1[sl, None] * self.rate[None, :, 0] + t2[sl, None] * self.rate[None, :, 1]
            top = e.max(axis=1)
            w = np.exp(e - top[:, None])
            a, b, c = w22[sl, None], w11[sl, None], -2.0 * w12[sl, None]
            mix = a * self._c[0] + c * self._c[1] + b * self._c[2]
            if self.oscillating:
                ph = t1[sl, None] * self.freq[None, :, 0] + t2[sl, None] * self.freq[None, :, 1]
                mix_i = a * self._ci[0] + c * self._ci[1] + b * self._ci[2]
                v = w * (mix * np.cos(ph) - mix_i * np.sin(ph))
            else:
                v = w * mix
            h = np.add.reduceat(v, self.starts, axis=1)
            hh[sl] = (h * h).sum(axis=1)
            scale[sl] = 2.0 * top
        return hh, scale


@functools.lru_cache(maxsize=64)
def surface_algebra(spec: SurfaceSpec) -> SurfaceAlgebra:
    return SurfaceAlgebra(spec)


# --- vectorised kernels ----------------------------------------------------


def _args(t1, t2):
    a1, a2 = np.broadcast_arrays(np.asarray(t1, dtype=float), np.asarray(t2, dtype=float))
    if not (np.all(np.isfinite(a1)) and np.all(np.isfinite(a2))):
        raise ContractViolation("surface parameters must be finite")
    return a1, a2


def _metric_root(alg, t1, t2):
    mg, sg = alg.g2.evaluate(t1, t2)
    bad = ~(mg > 0.0)
    if np.any(bad):
        i = int(np.argmax(bad.reshape(-1)))
        where = (float(t1.reshape(-1)[i]), float(t2.reshape(-1)[i]))
        raise DegenerateMetric(f"metric degenerates at {where}")
    return mg, sg


def _gauss(spec, t1, t2, power, absolute=False):
    """``X / g^power`` where ``X = (L11, L22) - (L12, L12)``; power 3 or 4."""
    alg = surface_algebra(spec)
    mg, sg = _metric_root(alg, t1, t2)
    mx, sx = alg.gauss_numerator.evaluate(t1, t2)
    if absolute:
        mx = np.abs(mx)
    half = 0.5 * power
    return mx / mg**half * np.exp(sx - half * sg)


def _normal_norm(spec, t1, t2):
    """Log-scaled ``|S1 ^ S2 ^ (g11 S22 + g22 S11 - 2 g12 S12)|``."""
    alg = surface_algebra(spec)
    shape = t1.shape
    f1, f2 = t1.reshape(-1), t2.reshape(-1)
    (m11, s11), (m12, s12), (m22, s22) = (q.evaluate(f1, f2) for q in alg.metric)
    top = np.maximum(np.maximum(s11, s22), s12)
    w11, w12, w22 = m11 * np.exp(s11 - top), m12 * np.exp(s12 - top), m22 * np.exp(s22 - top)
    hh, sh = alg.normal_minors.combine(f1, f2, w11, w12, w22)
    return np.sqrt(hh).reshape(shape), (0.5 * sh + top).reshape(shape)


def _mean_norm(spec, t1, t2):
    alg = surface_algebra(spec)
    mg, sg = _metric_root(alg, t1, t2)
    mh, sh = _normal_norm(spec, t1, t2)
    return mh / mg**1.5 * np.exp(sh - 1.5 * sg)


def _scalar(a1, out):
    return float(out) if a1.ndim == 0 else out


# --- public pointwise API ------------------------------------------------------


def eval_surface_jet(spec: SurfaceSpec, t1: float, t2: float) -> SurfaceJet:
    j1, j2 = eval_jet(spec.curve1, t1), eval_jet(spec.curve2, t2)

    def kron(u: ScaledVector, v: ScaledVector) -> ScaledVector:
        return ScaledVector.of(np.kron(u.mantissa, v.mantissa), u.log_scale + v.log_scale)

    p = kron(j1.position, j2.position)
    p1 = kron(j1.velocity, j2.position)
    p2 = kron(j1.position, j2.velocity)
    p11 = kron(j1.acceleration, j2.position)
    p12 = kron(j1.velocity, j2.velocity)
    p22 = kron(j1.position, j2.acceleration)
    g11, g12, g22 = dot(p1, p1), dot(p1, p2), dot(p2, p2)
    mg, sg = surface_algebra(spec).g2.evaluate(float(t1), float(t2))
    mg, sg = float(mg), float(sg)
    if not mg > 0.0:
        raise DegenerateMetric(f"metric degenerates at {(t1, t2)}")
    g = ScaledScalar.of(math.sqrt(mg), 0.5 * sg)
    sine = g.log_abs() - 0.5 * (g11.log_abs() + g22.log_abs())
    if sine < math.log(DEGENERATE_SINE):
        raise DegenerateMetric(f"metric degenerates at {(t1, t2)}")
    return SurfaceJet(p, p1, p2, p11, p12, p22, g11, g12, g22, g)


def metric_at(spec: SurfaceSpec, t1, t2):
    """``(g11, g12, g22, g)`` as floats (or arrays)."""
    a1, a2 = _args(t1, t2)
    alg = surface_algebra(spec)
    out = [m * np.exp(s) for m, s in (q.evaluate(a1, a2) for q in alg.metric)]
    mg, sg = _metric_root(alg, a1, a2)
    out.append(np.sqrt(mg) * np.exp(0.5 * sg))
    return tuple(_scalar(a1, o) for o in out)


def gauss_curvature_at(spec: SurfaceSpec, t1, t2):
    a1, a2 = _args(t1, t2)
    return _scalar(a1, _gauss(spec, a1, a2, 4))


def gauss_density_at(spec: SurfaceSpec, t1, t2):
    """``K g``, the density of total Gauss curvature against dt1 dt2."""
    a1, a2 = _args(t1, t2)
    return _scalar(a1, _gauss(spec, a1, a2, 3))


def mean_curvature_norm_at(spec: SurfaceSpec, t1, t2):
    a1, a2 = _args(t1, t2)
    return _scalar(a1, _mean_norm(spec, a1, a2))


def geodesic_curvature_edge(spec: SurfaceSpec, edge: str, r: float, t, normal: str = "inward"):
    """Geodesic curvature density ``kappa_g ds/dt`` along one edge of ``[-r, r]^2``.

    ``edge`` is one of ``"t2=+r"``, ``"t2=-r"``, ``"t1=+r"``, ``"t1=-r"``;
    the normal points into the square unless ``normal="outward"``.
    """
    if edge not in EDGES:
        raise ContractViolation(f"edge must be one of {EDGES}")
    if normal not in ("inward", "outward"):
        raise ContractViolation("normal must be 'inward' or 'outward'")
    t = np.asarray(t, dtype=float)
    fixed = np.full_like(t, float(r))
    sign = -1.0 if edge.endswith("+r") else 1.0
    if edge.endswith("-r"):
        fixed = -fixed
    if normal == "outward":
        sign = -sign
    alg = surface_algebra(spec)
    if edge.startswith("t2"):
        a1, a2 = _args(t, fixed)
        num, speed = alg.edge_t1
    else:
        a1, a2 = _args(fixed, t)
        num, speed = alg.edge_t2
    mg, sg = _metric_root(alg, a1, a2)
    mn, sn = num.evaluate(a1, a2)
    mv, sv = speed.evaluate(a1, a2)
    out = sign * mn / (np.sqrt(mg) * mv) * np.exp(sn - 0.5 * sg - sv)
    return _scalar(t, out)


def _require_real_dominant_pair(spec: SurfaceSpec):
    for c in (spec.curve1, spec.curve2):
        if not isinstance(c, RootSpectrum) or not c.all_real or len(c.real_roots) < 3:
            raise PreconditionViolation("the diagnostic needs two real spectra with at least three roots")
        if not c.real_roots[0] > c.real_roots[1] > 0:
            raise PreconditionViolation("the diagnostic needs r1 > r2 > 0 and s1 > s2 > 0")


def h_ratio_diagnostic(spec: SurfaceSpec, t1, t2):
    """``g^3 |H|`` divided by the three-term exponential comparison function.

    Defined on the closed first quadrant for real spectra with
    ``r1 > r2 > 0`` and ``s1 > s2 > 0``.
    """
    _require_real_dominant_pair(spec)
    a1, a2 = _args(t1, t2)
    if np.any(a1 < 0) or np.any(a2 < 0):
        raise PreconditionViolation("the diagnostic is defined for t1, t2 >= 0")
    r, s = spec.curve1.real_roots, spec.curve2.real_roots
    logs = np.stack([
        5 * r[0] * a1 + (3 * s[0] + s[1] + s[2]) * a2,
        (3 * r[0] + r[1] + r[2]) * a1 + 5 * s[0] * a2,
        (4 * r[0] + r[1]) * a1 + (4 * s[0] + s[1]) * a2,
    ])
    top = logs.max(axis=0)
    log_cmp = top + np.log(np.exp(logs - top).sum(axis=0))
    mh, sh = _normal_norm(spec, a1, a2)
    return _scalar(a1, mh * np.exp(sh - log_cmp))


# --- integrands -----------------------------------------------------------------


def gauss_integrand(spec: SurfaceSpec, absolute: bool = False):
    surface_algebra(spec).gauss_numerator
    return lambda t1, t2: _gauss(spec, *_args(t1, t2), 3, absolute)


def area_integrand(spec: SurfaceSpec):
    alg = surface_algebra(spec)

    def f(t1, t2):
        mg, sg = _metric_root(alg, *_args(t1, t2))
        return np.sqrt(mg) * np.exp(0.5 * sg)

    return f


def mean_lp_integrand(spec: SurfaceSpec, p: float):
    """``|H|^p g``."""
    surface_algebra(spec).normal_minors
    alg = surface_algebra(spec)

    def f(t1, t2):
        a1, a2 = _args(t1, t2)
        mg, sg = _metric_root(alg, a1, a2)
        mh, sh = _normal_norm(spec, a1, a2)
        with np.errstate(divide="ignore"):
            log_h = np.log(mh) + sh - 1.5 * (np.log(mg) + sg)
        return np.exp(p * log_h + 0.5 * (np.log(mg) + sg))

    return f


def edge_integrand(spec: SurfaceSpec, edge: str, r: float):
    return lambda t: geodesic_curvature_edge(spec, edge, r, t)
