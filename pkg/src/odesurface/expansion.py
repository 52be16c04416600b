"""Exact exponential-polynomial expansion of blade inner products.

Every coordinate of a curve or tensor surface is a finite sum
``c * exp(<lam, t>)``.  A k-blade built from derivative columns therefore
has coordinates (k x k minors over row sets) that are again such sums,
with coefficients given by small determinants of powers of the exponents.
Inner products of blades are sums over row sets of products of these
coordinates.

All of that bookkeeping is done here in exact Gaussian-rational
arithmetic, grouping terms by exponent.  Cancellations that are exact in
the algebra (for instance the leading orders of a Gram determinant of
nearly parallel vectors, or the oscillating parts contributed by a
cosine/sine pair) then cancel exactly, and the remaining floating-point
evaluation is a sum of well-scaled terms.
"""

from __future__ import annotations

import itertools

import numpy as np

try:
    from gmpy2 import mpq as Q
except ImportError:  # pragma: no cover
    from fractions import Fraction as Q

_ZERO = Q(0)
_ONE = Q(1)
_HALF = Q(1, 2)

# Upper bound on points x terms held in memory at once during evaluation.
_CHUNK = 1 << 20


class GQ:
    """Gaussian rational ``re + i*im``."""

    __slots__ = ("re", "im")

    def __init__(self, re=_ZERO, im=_ZERO):
        self.re = re
        self.im = im

    @classmethod
    def of(cls, x) -> "GQ":
        if isinstance(x, GQ):
            return x
        if isinstance(x, complex):
            return cls(Q(x.real), Q(x.imag))
        return cls(Q(x), _ZERO)

    def __add__(self, o: "GQ") -> "GQ":
        return GQ(self.re + o.re, self.im + o.im)

    def __sub__(self, o: "GQ") -> "GQ":
        return GQ(self.re - o.re, self.im - o.im)

    def __neg__(self) -> "GQ":
        return GQ(-self.re, -self.im)

    def __mul__(self, o: "GQ") -> "GQ":
        if not self.im and not o.im:
            return GQ(self.re * o.re, _ZERO)
        return GQ(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    def __pow__(self, p: int) -> "GQ":
        out = GQ(_ONE)
        for _ in range(p):
            out = out * self
        return out

    def conj(self) -> "GQ":
        return GQ(self.re, -self.im)

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __eq__(self, o) -> bool:
        return isinstance(o, GQ) and self.re == o.re and self.im == o.im

    def __hash__(self) -> int:
        return hash((self.re, self.im))

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __repr__(self) -> str:
        return f"GQ({float(self.re)!r}, {float(self.im)!r})"


GQ_ZERO = GQ()
GQ_ONE = GQ(_ONE)
GQ_HALF = GQ(_HALF)


def merge_terms(terms):
    """Group ``(coef, exps)`` pairs by exponent, dropping zero coefficients."""
    acc: dict = {}
    for c, e in terms:
        acc[e] = acc.get(e, GQ_ZERO) + c
    return tuple((c, e) for e, c in acc.items() if c)


def atom_terms(a: float, b: float, kind: str):
    """Exponential terms of ``e^{at}``, ``e^{at} cos bt`` or ``e^{at} sin bt``."""
    lam = GQ.of(complex(a, b))
    lam_bar = lam.conj()
    if kind == "exp":
        return merge_terms([(GQ_ONE, (GQ.of(a),))])
    if kind == "cos":
        return merge_terms([(GQ_HALF, (lam,)), (GQ_HALF, (lam_bar,))])
    if kind == "sin":
        return merge_terms([(GQ(_ZERO, -_HALF), (lam,)), (GQ(_ZERO, _HALF), (lam_bar,))])
    raise ValueError(f"unknown atom kind {kind!r}")


def tensor_rows(rows1, rows2):
    """Rows of the tensor product, ordered (i, a) lexicographically."""
    out = []
    for r1 in rows1:
        for r2 in rows2:
            out.append(merge_terms([(c1 * c2, e1 + e2) for c1, e1 in r1 for c2, e2 in r2]))
    return out


def _column_values(exps, columns):
    vals = []
    for col in columns:
        v = GQ_ONE
        for lam, p in zip(exps, col):
            if p:
                v = v * lam**p
        vals.append(v)
    return vals


def _det(m):
    k = len(m)
    if k == 1:
        return m[0][0]
    if k == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    if k == 3:
        return (
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        )
    raise ValueError("blades of rank above 3 are not needed")


def blade_coordinates(rows, columns):
    """Exact coordinates of the blade ``col_1 ^ ... ^ col_k``.

    ``rows`` is a list of term tuples, ``columns`` a list of derivative
    multi-indices.  Returns ``{row_set: {exps: coef}}`` with zero
    coordinates omitted.
    """
    k = len(columns)
    table = [[(c, e, _column_values(e, columns)) for c, e in row] for row in rows]
    live = [i for i, row in enumerate(table) if row]
    out = {}
    for S in itertools.combinations(live, k):
        acc: dict = {}
        for choice in itertools.product(*(table[i] for i in S)):
            d = _det([vals for _, _, vals in choice])
            if not d:
                continue
            c = d
            for cc, _, _ in choice:
                c = c * cc
            e = choice[0][1]
            for _, ee, _ in choice[1:]:
                e = tuple(x + y for x, y in zip(e, ee))
            acc[e] = acc.get(e, GQ_ZERO) + c
        acc = {e: c for e, c in acc.items() if c}
        if acc:
            out[S] = acc
    return out


def pairing(coords_a, coords_b) -> dict:
    """Exact inner product of two blades given by their coordinates."""
    acc: dict = {}
    for S, ta in coords_a.items():
        tb = coords_b.get(S)
        if tb is None:
            continue
        for ea, ca in ta.items():
            for eb, cb in tb.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                acc[e] = acc.get(e, GQ_ZERO) + ca * cb
    return {e: c for e, c in acc.items() if c}


def combine(*scaled_dicts) -> dict:
    """Exact linear combination ``sum(w * d)`` of term dictionaries."""
    acc: dict = {}
    for w, d in scaled_dicts:
        w = GQ.of(w)
        for e, c in d.items():
            acc[e] = acc.get(e, GQ_ZERO) + w * c
    return {e: c for e, c in acc.items() if c}


def _term_arrays(terms, dim):
    items = sorted(
        terms.items(),
        key=lambda kv: tuple(float(x.re) for x in kv[0]) + tuple(float(x.im) for x in kv[0]),
    )
    m = len(items)
    coef = np.array([complex(c) for _, c in items], dtype=complex).reshape(m)
    rate = np.array([[float(x.re) for x in e] for e, _ in items], dtype=float).reshape(m, dim)
    freq = np.array([[float(x.im) for x in e] for e, _ in items], dtype=float).reshape(m, dim)
    return coef, rate, freq


class ExpPoly:
    """Real-valued sum of ``c * exp(<lam, t>)`` evaluated in log-scaled form.

    ``evaluate`` returns ``(mantissa, log_scale)`` arrays with the value
    equal to ``mantissa * exp(log_scale)``; the scale is the largest real
    exponent present at each point, so the mantissa never overflows.
    """

    def __init__(self, terms: dict, dim: int):
        self.dim = dim
        self.coef, self.rate, self.freq = _term_arrays(terms, dim)
        self.oscillating = bool(np.any(self.freq != 0.0))
        self._cr = np.ascontiguousarray(self.coef.real)
        self._ci = np.ascontiguousarray(self.coef.imag)

    @property
    def size(self) -> int:
        return self.coef.shape[0]

    def is_zero(self) -> bool:
        return self.size == 0

    def evaluate(self, *ts):
        if len(ts) != self.dim:
            raise ValueError(f"expected {self.dim} coordinates, got {len(ts)}")
        ts = np.broadcast_arrays(*(np.asarray(t, dtype=float) for t in ts))
        shape = ts[0].shape
        flat = [t.reshape(-1) for t in ts]
        n = flat[0].size
        mant = np.zeros(n)
        scale = np.zeros(n)
        m = self.size
        if m == 0:
            return mant.reshape(shape), scale.reshape(shape)
        step = max(1, _CHUNK // m)
        for lo in range(0, n, step):
            sl = slice(lo, lo + step)
            ex = flat[0][sl, None] * self.rate[None, :, 0]
            for v in range(1, self.dim):
                ex = ex + flat[v][sl, None] * self.rate[None, :, v]
            top = ex.max(axis=1)
            w = np.exp(ex - top[:, None])
            if self.oscillating:
                ph = flat[0][sl, None] * self.freq[None, :, 0]
                for v in range(1, self.dim):
                    ph = ph + flat[v][sl, None] * self.freq[None, :, v]
                w = w * (self._cr * np.cos(ph) - self._ci * np.sin(ph))
            else:
                w = w * self._cr
            mant[sl] = w.sum(axis=1)
            scale[sl] = top
        return mant.reshape(shape), scale.reshape(shape)
