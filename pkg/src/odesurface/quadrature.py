"""Adaptive Gauss-Kronrod integration over the line and the plane.

Improper integrals are truncated to ``[-T, T]`` (or ``[-T, T]^2``) and ``T``
is doubled until adding the new region changes the value by less than the
tolerance.  Divergence is never raised: it is reported through
``converged=False`` together with the partial values in ``tail_history``.

Panels are refined adaptively in rounds.  Each round marks the panels
carrying the largest error estimates, splits them and evaluates all
children in fixed-size chunks.  Chunks may be spread over threads, but
chunk boundaries do not depend on the thread count and all totals are
formed with ``math.fsum`` (correctly rounded, hence order independent),
so results are bit-identical for any number of threads.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import ContractViolation, NonFiniteSample

# 15-point Kronrod nodes on [-1, 1] (non-negative half) and weights; the
# odd-indexed nodes are the 7-point Gauss nodes.
_XK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

NODES = np.concatenate([-_XK[:-1], _XK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WK[:-1], _WK[::-1]])
GAUSS_WEIGHTS = np.zeros(15)
GAUSS_WEIGHTS[[1, 3, 5]] = _WG[:3]
GAUSS_WEIGHTS[[13, 11, 9]] = _WG[:3]
GAUSS_WEIGHTS[7] = _WG[3]

_EPS = np.finfo(float).eps
_CHUNK_PANELS = 64


@dataclass(frozen=True)
class QuadConfig:
    rel_tol: float = 1e-9
    abs_tol: float = 1e-12
    initial_half_width: float = 10.0
    max_half_width: float = 240.0
    divergence_growth_factor: float = 1.05
    max_panel_depth: int = 40
    threads: int = 1

    def __post_init__(self):
        if not (0 <= self.rel_tol < 1 and self.abs_tol >= 0 and self.rel_tol + self.abs_tol > 0):
            raise ContractViolation("need 0 <= rel_tol < 1, abs_tol >= 0, not both zero")
        if not (0 <= self.initial_half_width <= self.max_half_width):
            raise ContractViolation("need 0 <= initial_half_width <= max_half_width")
        if not math.isfinite(self.max_half_width):
            raise ContractViolation("max_half_width must be finite")
        if self.divergence_growth_factor <= 1.0:
            raise ContractViolation("divergence_growth_factor must exceed 1")
        if self.max_panel_depth < 1 or self.threads < 1:
            raise ContractViolation("max_panel_depth and threads must be positive")

    def tolerance(self, value: float) -> float:
        return max(self.abs_tol, self.rel_tol * abs(value))


@dataclass(frozen=True)
class IntegralResult:
    value: float
    error_estimate: float
    converged: bool
    tail_history: tuple = ()
    diverged: bool = False
    abs_value: float = math.nan
    evaluations: int = field(default=0, compare=False)

    @property
    def final_half_width(self) -> float:
        return self.tail_history[-1][0] if self.tail_history else 0.0


# --- panel rules ----------------------------------------------------------


def _check_finite(vals, pts):
    bad = ~np.isfinite(vals)
    if np.any(bad):
        i = int(np.argmax(bad.reshape(-1)))
        where = tuple(float(np.asarray(p).reshape(-1)[i]) for p in pts)
        raise NonFiniteSample(f"density is not finite at {where}", where)


def _error(k, g, resabs, resasc):
    err = abs(k - g)
    if resasc > 0 and err > 0:
        err = resasc * min(1.0, (200.0 * err / resasc) ** 1.5)
    floor = 50.0 * _EPS * resabs
    return max(err, floor), err <= floor


class _LineRule:
    dim = 1

    @staticmethod
    def evaluate(f, panels):
        a = np.array([p[0] for p in panels])
        b = np.array([p[1] for p in panels])
        c, h = 0.5 * (a + b), 0.5 * (b - a)
        x = c[:, None] + h[:, None] * NODES[None, :]
        y = np.asarray(f(x), dtype=float).reshape(x.shape)
        _check_finite(y, (x,))
        out = []
        for i in range(len(panels)):
            yi, hi = y[i], h[i]
            k = hi * float(KRONROD_WEIGHTS @ yi)
            g = hi * float(GAUSS_WEIGHTS @ yi)
            resabs = hi * float(KRONROD_WEIGHTS @ np.abs(yi))
            mean = k / (2 * hi) if hi else 0.0
            resasc = hi * float(KRONROD_WEIGHTS @ np.abs(yi - mean))
            err, at_floor = _error(k, g, resabs, resasc)
            out.append((k, err, resabs, at_floor, None))
        return out

    @staticmethod
    def split(p, hint):
        a, b = p
        m = 0.5 * (a + b)
        return [(a, m), (m, b)]


_W2K = np.outer(KRONROD_WEIGHTS, KRONROD_WEIGHTS).reshape(-1)
_W2G = np.outer(GAUSS_WEIGHTS, GAUSS_WEIGHTS).reshape(-1)
# Gauss in one variable, Kronrod in the other: their gaps to the full
# Kronrod rule estimate the error along each direction separately.
_W2GK = np.outer(GAUSS_WEIGHTS, KRONROD_WEIGHTS).reshape(-1)
_W2KG = np.outer(KRONROD_WEIGHTS, GAUSS_WEIGHTS).reshape(-1)
_ANISOTROPY = 8.0


class _PlaneRule:
    dim = 2

    @staticmethod
    def evaluate(f, panels):
        arr = np.array(panels, dtype=float)
        c1, h1 = 0.5 * (arr[:, 0] + arr[:, 1]), 0.5 * (arr[:, 1] - arr[:, 0])
        c2, h2 = 0.5 * (arr[:, 2] + arr[:, 3]), 0.5 * (arr[:, 3] - arr[:, 2])
        x1 = c1[:, None, None] + h1[:, None, None] * NODES[None, :, None]
        x2 = c2[:, None, None] + h2[:, None, None] * NODES[None, None, :]
        x1, x2 = np.broadcast_arrays(x1, x2)
        x1 = x1.reshape(len(panels), -1)
        x2 = x2.reshape(len(panels), -1)
        y = np.asarray(f(x1, x2), dtype=float).reshape(x1.shape)
        _check_finite(y, (x1, x2))
        out = []
        for i in range(len(panels)):
            yi, jac = y[i], h1[i] * h2[i]
            k = jac * float(_W2K @ yi)
            g = jac * float(_W2G @ yi)
            resabs = jac * float(_W2K @ np.abs(yi))
            mean = k / (4 * jac) if jac else 0.0
            resasc = jac * float(_W2K @ np.abs(yi - mean))
            err, at_floor = _error(k, g, resabs, resasc)
            e1 = abs(k - jac * float(_W2GK @ yi))
            e2 = abs(k - jac * float(_W2KG @ yi))
            if e1 > _ANISOTROPY * e2:
                hint = 1
            elif e2 > _ANISOTROPY * e1:
                hint = 2
            else:
                hint = 0
            out.append((k, err, resabs, at_floor, hint))
        return out

    @staticmethod
    def split(p, hint):
        a, b, c, d = p
        m, n = 0.5 * (a + b), 0.5 * (c + d)
        if hint == 1:
            return [(a, m, c, d), (m, b, c, d)]
        if hint == 2:
            return [(a, b, c, n), (a, b, n, d)]
        return [(a, m, c, n), (a, m, n, d), (m, b, c, n), (m, b, n, d)]


# --- adaptive pool ---------------------------------------------------------


class _Pool:
    """Panels of the current domain with their estimates."""

    def __init__(self, rule, f, cfg: QuadConfig):
        self.rule, self.f, self.cfg = rule, f, cfg
        self.panels = []  # (geometry, depth, value, err, abs, final, split hint)
        self.evaluations = 0

    def _evaluate(self, geoms):
        chunks = [geoms[i:i + _CHUNK_PANELS] for i in range(0, len(geoms), _CHUNK_PANELS)]
        if self.cfg.threads > 1 and len(chunks) > 1:
            with ThreadPoolExecutor(max_workers=self.cfg.threads) as pool:
                parts = list(pool.map(lambda ch: self.rule.evaluate(self.f, ch), chunks))
        else:
            parts = [self.rule.evaluate(self.f, ch) for ch in chunks]
        self.evaluations += len(geoms) * 15**self.rule.dim
        return [r for part in parts for r in part]

    def add(self, geoms, depth=0):
        for g, res in zip(geoms, self._evaluate(geoms)):
            self.panels.append((g, depth) + tuple(res))

    def value(self) -> float:
        return math.fsum(p[2] for p in self.panels)

    def error(self) -> float:
        return math.fsum(p[3] for p in self.panels)

    def abs_value(self) -> float:
        return math.fsum(p[4] for p in self.panels)

    def refine(self, share: float = 0.5) -> None:
        """Split panels until the summed error is within ``share`` of tolerance."""
        while True:
            value, err = self.value(), self.error()
            target = share * self.cfg.tolerance(value)
            if err <= target:
                return
            order = sorted(
                (i for i, p in enumerate(self.panels) if not p[5] and p[1] < self.cfg.max_panel_depth),
                key=lambda i: (-self.panels[i][3], i),
            )
            if not order:
                return
            marked, covered = [], 0.0
            for i in order:
                marked.append(i)
                covered += self.panels[i][3]
                if covered >= 0.5 * (err - target):
                    break
            marked_set = set(marked)
            kids, kid_depth = [], []
            for i in sorted(marked_set):
                g, depth, hint = self.panels[i][0], self.panels[i][1], self.panels[i][6]
                for kg in self.rule.split(g, hint):
                    kids.append(kg)
                    kid_depth.append(depth + 1)
            keep = [p for i, p in enumerate(self.panels) if i not in marked_set]
            results = self._evaluate(kids)
            self.panels = keep + [(g, d) + tuple(r) for g, d, r in zip(kids, kid_depth, results)]


def _graded(half: float):
    """Breakpoints of [-half, half] that double in width away from 0."""
    if half <= 0.0:
        return [0.0]
    pos = [0.0]
    w = 1.0
    while w < half:
        pos.append(w)
        w *= 2.0
    pos.append(half)
    return [-x for x in reversed(pos[1:])] + pos


def _cells(edges):
    return [(edges[i], edges[i + 1]) for i in range(len(edges) - 1)]


def _ring(dim: int, lo: float, hi: float):
    """Panels covering ``[-hi, hi]^dim`` minus ``[-lo, lo]^dim``.

    Inner intervals are graded towards the axes so that features near a
    coordinate axis are seen even when the ring is very wide.
    """
    outer = [(-hi, -lo), (lo, hi)]
    if dim == 1:
        return outer
    inner = _cells(_graded(lo))
    return [x + y for x in outer for y in outer + inner] + [x + y for x in inner for y in outer]


def _initial(rule, half):
    if half == 0.0:
        return []
    cells = _cells(_graded(half))
    if rule.dim == 1:
        return cells
    return [x + y for x in cells for y in cells]


def _integrate_improper(rule, f, cfg: QuadConfig) -> IntegralResult:
    pool = _Pool(rule, f, cfg)
    half = float(cfg.initial_half_width)
    pool.add(_initial(rule, half))
    pool.refine()
    value = pool.value()
    history = [(half, value)]
    growth_run = 0
    last_step = math.inf
    converged = diverged = False
    while half < cfg.max_half_width:
        new_half = min(2 * half, cfg.max_half_width) if half > 0 else min(1.0, cfg.max_half_width)
        pool.add(_ring(rule.dim, half, new_half))
        pool.refine()
        new_value = pool.value()
        last_step = abs(new_value - value)
        tol = cfg.tolerance(new_value)
        half = new_half
        history.append((half, new_value))
        if last_step <= 0.5 * tol:
            value = new_value
            converged = pool.error() <= 0.5 * tol
            break
        if abs(new_value) > cfg.divergence_growth_factor * abs(value):
            growth_run += 1
        else:
            growth_run = 0
        value = new_value
        if growth_run >= 3:
            diverged = True
            break
    error = pool.error() + (last_step if math.isfinite(last_step) else abs(value))
    return IntegralResult(
        value=value,
        error_estimate=error,
        converged=converged,
        tail_history=tuple(history),
        diverged=diverged,
        abs_value=pool.abs_value(),
        evaluations=pool.evaluations,
    )


def integrate_line(f, cfg: QuadConfig = QuadConfig()) -> IntegralResult:
    """Integrate a vectorised density over the real line."""
    return _integrate_improper(_LineRule, f, cfg)


def integrate_plane(f, cfg: QuadConfig = QuadConfig()) -> IntegralResult:
    """Integrate a vectorised density ``f(t1, t2)`` over the plane."""
    return _integrate_improper(_PlaneRule, f, cfg)


def integrate_interval(f, a: float, b: float, cfg: QuadConfig = QuadConfig()) -> IntegralResult:
    """Adaptive integral over the finite interval ``[a, b]``."""
    pool = _Pool(_LineRule, f, cfg)
    if b > a:
        e = np.linspace(a, b, 9)
        pool.add([(e[i], e[i + 1]) for i in range(8)])
        pool.refine(1.0)
    value = pool.value()
    err = pool.error()
    return IntegralResult(value, err, err <= cfg.tolerance(value), ((0.5 * (b - a), value),),
                          abs_value=pool.abs_value(), evaluations=pool.evaluations)


def integrate_box(f, box, cfg: QuadConfig = QuadConfig()) -> IntegralResult:
    """Adaptive integral over the rectangle ``(a, b, c, d)``."""
    a, b, c, d = (float(x) for x in box)
    pool = _Pool(_PlaneRule, f, cfg)
    if b > a and d > c:
        e1, e2 = np.linspace(a, b, 5), np.linspace(c, d, 5)
        pool.add([(e1[i], e1[i + 1], e2[j], e2[j + 1]) for i in range(4) for j in range(4)])
        pool.refine(1.0)
    value = pool.value()
    err = pool.error()
    return IntegralResult(value, err, err <= cfg.tolerance(value), (),
                          abs_value=pool.abs_value(), evaluations=pool.evaluations)
