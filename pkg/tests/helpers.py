"""Random fixtures shared by the unit and acceptance tests."""

from __future__ import annotations

import numpy as np

from odesurface import SurfaceSpec, validate_spectrum

MIN_SEP = 0.1

# PASS/FAIL lines of the acceptance suite, echoed in the pytest summary.
ACCEPTANCE_LINES: list[str] = []


def _separated(rng, lo, hi, k, avoid=()):
    while True:
        xs = rng.uniform(lo, hi, size=k)
        pts = np.sort(np.concatenate([xs, np.asarray(avoid, dtype=float)]))
        if k == 0 or np.all(np.diff(pts) >= MIN_SEP):
            return [float(x) for x in xs]


def dominant_real_roots(rng, n, lo=0.2, hi=5.0):
    """``n`` real roots, separated by MIN_SEP, with a positive top and negative bottom.

    The top root lies in [lo, hi], the bottom in [-hi, -lo] and the rest
    strictly between them.
    """
    top = rng.uniform(lo, hi)
    bottom = -rng.uniform(lo, hi)
    while top - bottom < (n - 1) * MIN_SEP * 1.5:
        top, bottom = rng.uniform(lo, hi), -rng.uniform(lo, hi)
    inner = _separated(rng, bottom + MIN_SEP, top - MIN_SEP, n - 2, avoid=(bottom, top)) if n > 2 else []
    return [top] + inner + [bottom]


def dominant_spectrum(rng, n, **kw):
    return validate_spectrum(dominant_real_roots(rng, n, **kw))


def dominant_surface(rng, n1, n2, **kw):
    return SurfaceSpec(dominant_spectrum(rng, n1, **kw), dominant_spectrum(rng, n2, **kw))


def mixed_spectrum(rng, n_real, n_pairs):
    """Real roots plus complex pairs with distinct parameters (no dominance asked)."""
    reals = _separated(rng, -3.0, 3.0, n_real)
    pairs = [(a, float(rng.uniform(0.3, 3.0))) for a in _separated(rng, -3.0, 3.0, n_pairs)]
    return validate_spectrum(reals, pairs)
