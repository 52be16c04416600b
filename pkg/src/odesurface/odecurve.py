"""Curves whose coordinates are the fundamental solutions of a linear ODE.

For a constant-coefficient ODE with simple characteristic roots the
canonical curve has one coordinate per real root ``s`` (``e^{st}``) and two
per complex pair ``a +- ib`` (``e^{at} cos bt`` and ``e^{at} sin bt``).
Coordinates are ordered real roots first (descending), then complex pairs
by descending real part with ties broken by ascending imaginary part.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from . import expansion as ex
from .errors import (
    ContractViolation,
    DegenerateWedge,
    NonPositiveImaginary,
    RepeatedRoot,
    TooSmall,
    ZeroVelocity,
)
from .exterior import ScaledVector

ROOT_SEPARATION = 1e-9
ATOM_KINDS = ("exp", "cos", "sin")


def _too_close(z: complex, w: complex) -> bool:
    return abs(z - w) <= ROOT_SEPARATION * max(1.0, abs(z), abs(w))


@dataclass(frozen=True)
class RootSpectrum:
    """Simple characteristic roots; complex pairs are stored as ``(a, b)``, b > 0."""

    real_roots: tuple = ()
    complex_pairs: tuple = ()

    def __post_init__(self):
        reals = tuple(float(s) for s in self.real_roots)
        pairs = tuple((float(a), float(b)) for a, b in self.complex_pairs)
        if not all(math.isfinite(x) for x in reals + tuple(v for p in pairs for v in p)):
            raise ContractViolation("roots must be finite")
        for a, b in pairs:
            if b <= 0.0:
                raise NonPositiveImaginary(f"complex pair ({a}, {b}) needs b > 0")
        if len(reals) + 2 * len(pairs) < 2:
            raise TooSmall("a curve needs at least two roots")
        roots = [complex(s, 0.0) for s in reals] + [complex(a, b) for a, b in pairs]
        for i in range(len(roots)):
            for j in range(i + 1, len(roots)):
                if _too_close(roots[i], roots[j]):
                    raise RepeatedRoot(f"roots {roots[i]} and {roots[j]} are not simple")
        object.__setattr__(self, "real_roots", tuple(sorted(reals, reverse=True)))
        object.__setattr__(self, "complex_pairs", tuple(sorted(pairs, key=lambda p: (-p[0], p[1]))))

    @property
    def dim(self) -> int:
        return len(self.real_roots) + 2 * len(self.complex_pairs)

    @property
    def atoms(self) -> tuple:
        out = [(s, 0.0, "exp") for s in self.real_roots]
        for a, b in self.complex_pairs:
            out += [(a, b, "cos"), (a, b, "sin")]
        return tuple(out)

    @property
    def all_real(self) -> bool:
        return not self.complex_pairs

    def to_json(self) -> dict:
        return {"real": list(self.real_roots), "complex": [list(p) for p in self.complex_pairs]}


@dataclass(frozen=True)
class LiteralCurve:
    """A curve given coordinate by coordinate as ``(a, b, kind)`` atoms."""

    atoms: tuple

    def __post_init__(self):
        atoms = []
        for atom in self.atoms:
            a, b, kind = atom
            a, b = float(a), float(b)
            if kind not in ATOM_KINDS:
                raise ContractViolation(f"atom kind must be one of {ATOM_KINDS}, got {kind!r}")
            if not (math.isfinite(a) and math.isfinite(b)):
                raise ContractViolation("atom parameters must be finite")
            if kind == "exp" and b != 0.0:
                raise ContractViolation("an 'exp' atom takes b = 0")
            atoms.append((a, b, kind))
        if len(atoms) < 2:
            raise TooSmall("a curve needs at least two coordinates")
        object.__setattr__(self, "atoms", tuple(atoms))

    @property
    def dim(self) -> int:
        return len(self.atoms)

    @property
    def all_real(self) -> bool:
        return all(kind == "exp" for _, _, kind in self.atoms)

    def to_json(self) -> dict:
        return {"atoms": [[a, b, k] for a, b, k in self.atoms]}


Curve = Union[RootSpectrum, LiteralCurve]


def validate_spectrum(real_roots=(), complex_pairs=()) -> RootSpectrum:
    return RootSpectrum(tuple(real_roots), tuple(tuple(p) for p in complex_pairs))


def curve_from_json(obj) -> Curve:
    if not isinstance(obj, dict):
        raise ContractViolation("curve must be a JSON object")
    if "atoms" in obj:
        if set(obj) - {"atoms"}:
            raise ContractViolation("a literal curve takes only 'atoms'")
        return LiteralCurve(tuple(tuple(a) for a in obj["atoms"]))
    if set(obj) - {"real", "complex"}:
        raise ContractViolation(f"unexpected curve keys {sorted(set(obj) - {'real', 'complex'})}")
    return validate_spectrum(obj.get("real", ()), obj.get("complex", ()))


@dataclass(frozen=True)
class DominanceReport:
    real_dominant: bool
    dominant_top: float | None
    dominant_bottom: float | None
    epsilon1: float | None
    epsilon2: float | None
    subdominant_top: float | None
    subdominant_bottom: float | None


def classify_dominance(spec: RootSpectrum) -> DominanceReport:
    """Which extreme roots are real and dominate every other real part."""
    if not isinstance(spec, RootSpectrum):
        raise ContractViolation("dominance is defined for root spectra")
    reals = spec.real_roots
    others_re = [a for a, _ in spec.complex_pairs]
    top = bottom = None
    if reals and reals[0] > 0 and all(reals[0] > a for a in others_re):
        top = reals[0]
    if reals and reals[-1] < 0 and all(reals[-1] < a for a in others_re):
        bottom = reals[-1]
    all_re = list(reals) + others_re
    sub_top = max((x for x in all_re if x != reals[0]), default=None) if reals else None
    sub_bottom = min((x for x in all_re if x != reals[-1]), default=None) if reals else None
    dominant = top is not None and bottom is not None
    eps1 = eps2 = None
    if dominant:
        eps1 = min(top, -bottom)
        eps2 = min(top - sub_top, sub_bottom - bottom)
    return DominanceReport(dominant, top, bottom, eps1, eps2, sub_top, sub_bottom)


# --- pointwise jets -------------------------------------------------------


@dataclass(frozen=True)
class CurveJet:
    position: ScaledVector
    velocity: ScaledVector
    acceleration: ScaledVector


def _atom_derivatives(atoms, t: float, orders):
    """Mantissas of the requested derivatives and the shared log-scale."""
    scale = max(a * t for a, _, _ in atoms)
    out = []
    for p in orders:
        vals = []
        for a, b, kind in atoms:
            w = math.exp(a * t - scale)
            if kind == "exp":
                vals.append(w * a**p)
            else:
                z = complex(a, b) ** p * complex(math.cos(b * t), math.sin(b * t))
                vals.append(w * (z.real if kind == "cos" else z.imag))
        out.append(np.array(vals))
    return out, scale


def eval_jet(curve: Curve, t: float) -> CurveJet:
    t = float(t)
    if not math.isfinite(t):
        raise ContractViolation("t must be finite")
    (p0, p1, p2), scale = _atom_derivatives(curve.atoms, t, (0, 1, 2))
    return CurveJet(ScaledVector.of(p0, scale), ScaledVector.of(p1, scale), ScaledVector.of(p2, scale))


# --- exact algebra --------------------------------------------------------


def curve_rows(curve: Curve):
    return [ex.atom_terms(a, b, kind) for a, b, kind in curve.atoms]


class CurveAlgebra:
    """Exact inner products of the jet blades of one curve."""

    def __init__(self, curve: Curve):
        rows = curve_rows(curve)
        vel = ex.blade_coordinates(rows, [(1,)])
        vp = ex.blade_coordinates(rows, [(1,), (0,)])
        va = ex.blade_coordinates(rows, [(1,), (2,)])
        self.speed2 = ex.ExpPoly(ex.pairing(vel, vel), 1)
        self.vel_pos2 = ex.ExpPoly(ex.pairing(vp, vp), 1)
        self.vel_acc2 = ex.ExpPoly(ex.pairing(va, va), 1)
        self.cross = ex.ExpPoly(ex.pairing(vp, va), 1)


@functools.lru_cache(maxsize=256)
def curve_algebra(curve: Curve) -> CurveAlgebra:
    return CurveAlgebra(curve)


def _positive(mant, t, exc, what):
    bad = ~(mant > 0.0)
    if np.any(bad):
        where = float(np.asarray(t).reshape(-1)[np.argmax(bad.reshape(-1))])
        raise exc(f"{what} vanishes at t={where!r}")


def _kappa(curve, t, power):
    alg = curve_algebra(curve)
    ms, ss = alg.speed2.evaluate(t)
    _positive(ms, t, ZeroVelocity, "velocity")
    ma, sa = alg.vel_acc2.evaluate(t)
    ma = np.maximum(ma, 0.0)
    return np.sqrt(ma) / ms**power * np.exp(0.5 * sa - power * ss)


def _theta(curve, t, power, absolute):
    alg = curve_algebra(curve)
    ms, ss = alg.speed2.evaluate(t)
    _positive(ms, t, ZeroVelocity, "velocity")
    mw, sw = alg.vel_pos2.evaluate(t)
    _positive(mw, t, DegenerateWedge, "velocity ^ position")
    mx, sx = alg.cross.evaluate(t)
    if absolute:
        mx = np.abs(mx)
    return mx / (np.sqrt(mw) * ms**power) * np.exp(sx - 0.5 * sw - power * ss)


def _scalar_or_array(t, fn):
    arr = np.asarray(t, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ContractViolation("t must be finite")
    out = fn(arr)
    return float(out) if arr.ndim == 0 else out


def kappa_at(curve: Curve, t) -> float:
    """Curvature ``|v ^ a| / |v|^3``."""
    return _scalar_or_array(t, lambda a: _kappa(curve, a, 1.5))


def theta_at(curve: Curve, t) -> float:
    """Signed second curvature ``(v ^ x, v ^ a) / (|v ^ x| |v|^3)``."""
    return _scalar_or_array(t, lambda a: _theta(curve, a, 1.5, False))


def kappa_integrand(curve: Curve):
    """Vectorised density of ``kappa ds`` with respect to dt."""
    curve_algebra(curve)
    return lambda t: _kappa(curve, np.asarray(t, dtype=float), 1.0)


def theta_integrand(curve: Curve, absolute: bool = False):
    """Vectorised density of ``Theta ds`` (or ``|Theta| ds``) with respect to dt."""
    curve_algebra(curve)
    return lambda t: _theta(curve, np.asarray(t, dtype=float), 1.0, absolute)
