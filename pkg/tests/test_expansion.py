import cmath
import math

import numpy as np
import pytest

from odesurface import expansion as ex


def _direct(row, t):
    return sum(complex(c) * cmath.exp(complex(e[0]) * t) for c, e in row).real


@pytest.mark.parametrize("kind,fn", [
    ("exp", lambda t: math.exp(0.7 * t)),
    ("cos", lambda t: math.exp(0.7 * t) * math.cos(1.3 * t)),
    ("sin", lambda t: math.exp(0.7 * t) * math.sin(1.3 * t)),
])
def test_atom_terms_reproduce_atoms(kind, fn):
    row = ex.atom_terms(0.7, 0.0 if kind == "exp" else 1.3, kind)
    for t in (-2.0, 0.0, 0.4, 3.0):
        assert _direct(row, t) == pytest.approx(fn(t), rel=1e-14, abs=1e-14)


def test_sine_of_zero_frequency_is_empty():
    assert ex.atom_terms(1.0, 0.0, "sin") == ()
    assert len(ex.atom_terms(1.0, 0.0, "cos")) == 1


def test_gaussian_rational_arithmetic():
    z = ex.GQ.of(complex(0.5, -2.0))
    w = ex.GQ.of(3.0)
    assert complex(z * w) == complex(1.5, -6.0)
    assert complex(z * z.conj()) == 0.25 + 4.0
    assert complex(z**3) == pytest.approx(complex(0.5, -2.0) ** 3)
    assert not (z - z)


def test_merge_cancels_exactly():
    a = ex.GQ.of(0.1)
    terms = [(a, (ex.GQ.of(1.0),)), (-a, (ex.GQ.of(1.0),)), (a, (ex.GQ.of(2.0),))]
    assert ex.merge_terms(terms) == ((a, (ex.GQ.of(2.0),)),)


def _numeric_blade(atoms, t, columns):
    """Coordinates of the blade of jets, by brute-force minors."""
    import itertools

    jets = []
    for p in (0, 1, 2):
        row = []
        for a, b, kind in atoms:
            z = complex(a, b) ** p * cmath.exp(complex(a, b) * t)
            row.append(z.real if kind in ("exp", "cos") else z.imag)
        jets.append(row)
    cols = [jets[c[0]] for c in columns]
    out = {}
    for S in itertools.combinations(range(len(atoms)), len(columns)):
        m = np.array([[col[i] for col in cols] for i in S])
        out[S] = np.linalg.det(m)
    return out


def test_blade_coordinates_match_numeric_minors():
    atoms = [(1.0, 0.0, "exp"), (-0.5, 2.0, "cos"), (-0.5, 2.0, "sin"), (-1.5, 0.0, "exp")]
    rows = [ex.atom_terms(*a) for a in atoms]
    for columns in ([(1,)], [(1,), (0,)], [(0,), (1,), (2,)]):
        coords = ex.blade_coordinates(rows, columns)
        for t in (-1.0, 0.3, 2.0):
            want = _numeric_blade(atoms, t, columns)
            for S, w in want.items():
                got = sum(complex(c) * cmath.exp(complex(e[0]) * t) for e, c in coords.get(S, {}).items())
                assert got.real == pytest.approx(w, rel=1e-12, abs=1e-12)
                assert abs(got.imag) < 1e-12


def test_exppoly_log_scaled_evaluation():
    rows = [ex.atom_terms(2.0, 0.0, "exp"), ex.atom_terms(-3.0, 0.0, "exp")]
    vel = ex.blade_coordinates(rows, [(1,)])
    speed2 = ex.ExpPoly(ex.pairing(vel, vel), 1)
    t = np.array([-400.0, 0.0, 400.0])
    mant, scale = speed2.evaluate(t)
    logs = np.log(mant) + scale
    want = [math.log(9.0) + 6.0 * 400.0, math.log(13.0), math.log(4.0) + 4.0 * 400.0]
    np.testing.assert_allclose(logs, want, rtol=1e-14)


def test_exppoly_oscillating_parts_cancel_in_norms():
    # |(cos bt, sin bt)|^2 == 1 exactly: the oscillating exponents cancel.
    rows = [ex.atom_terms(0.0, 5.0, "cos"), ex.atom_terms(0.0, 5.0, "sin")]
    pos = ex.blade_coordinates(rows, [(0,)])
    norm2 = ex.ExpPoly(ex.pairing(pos, pos), 1)
    assert not norm2.oscillating
    mant, scale = norm2.evaluate(np.linspace(-50, 50, 7))
    np.testing.assert_allclose(mant * np.exp(scale), 1.0, rtol=1e-15)


def test_combine_and_zero_poly():
    a = {(ex.GQ.of(1.0),): ex.GQ.of(2.0)}
    assert ex.combine((1, a), (-1, a)) == {}
    z = ex.ExpPoly({}, 2)
    assert z.is_zero()
    mant, scale = z.evaluate(np.zeros(3), np.ones(3))
    assert np.all(mant == 0)
    with pytest.raises(ValueError):
        z.evaluate(np.zeros(3))
