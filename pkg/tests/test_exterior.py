import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from odesurface import (
    ContractViolation,
    ScaledScalar,
    ScaledVector,
    dot,
    gram_inner_pair,
    gram_inner_triple,
    wedge2_norm,
    wedge3_norm,
)
from oracles import wedge_coordinates, wedge_inner

finite = st.floats(-1e6, 1e6, allow_nan=False)


def test_scalar_normalises_mantissa():
    s = ScaledScalar.of(12.0, 1.5)
    assert 0.5 <= abs(s.mantissa) < 1.0
    assert s.to_float() == pytest.approx(12.0 * math.exp(1.5), rel=1e-15)


def test_scalar_zero_and_log():
    z = ScaledScalar.of(0.0, 7.0)
    assert z.to_float() == 0.0 and z.log_abs() == -math.inf
    big = ScaledScalar.of(3.0, 5000.0)
    assert big.log_abs() == pytest.approx(math.log(3.0) + 5000.0, rel=1e-15)
    assert big.to_float() == math.inf


nonzero = st.floats(1e-100, 1e100) | st.floats(-1e100, -1e-100)


@given(nonzero, nonzero, st.floats(-800, 800), st.floats(-800, 800))
def test_scalar_arithmetic(a, b, sa, sb):
    x, y = ScaledScalar.of(a, sa), ScaledScalar.of(b, sb)
    la, lb = math.log(abs(a)), math.log(abs(b))
    assert (x * y).log_abs() == pytest.approx(la + lb + sa + sb, abs=1e-9)
    assert (x / y).log_abs() == pytest.approx(la - lb + sa - sb, abs=1e-9)
    assert math.copysign(1, (x * y).mantissa) == math.copysign(1, a * b)


def test_scalar_sqrt_pow():
    x = ScaledScalar.of(9.0, 2000.0)
    assert x.sqrt().log_abs() == pytest.approx(math.log(3.0) + 1000.0)
    assert x.pow(1.5).log_abs() == pytest.approx(1.5 * (math.log(9.0) + 2000.0))
    with pytest.raises(ValueError):
        ScaledScalar.of(-1.0).sqrt()
    with pytest.raises(ZeroDivisionError):
        x / ScaledScalar.of(0.0)


def test_vector_normalisation_and_roundtrip():
    v = ScaledVector.of([3.0, -0.25, 1e-3], 2.0)
    assert 0.5 <= np.max(np.abs(v.mantissa)) < 1.0
    np.testing.assert_allclose(v.to_array(), np.array([3.0, -0.25, 1e-3]) * math.exp(2.0), rtol=1e-15)
    assert v == ScaledVector.of([3.0, -0.25, 1e-3], 2.0)


def test_vector_from_logs_beyond_float_range():
    v = ScaledVector.from_logs([1, -1], [900.0, 899.0])
    assert v.log_scale == pytest.approx(900.0, abs=1.0)
    d = dot(v, v)
    assert d.log_abs() == pytest.approx(1800.0 + math.log(1 + math.exp(-2.0)), rel=1e-14)


def test_dimension_mismatch():
    with pytest.raises(ContractViolation):
        dot(ScaledVector.of([1.0, 2.0]), ScaledVector.of([1.0, 2.0, 3.0]))
    with pytest.raises(ContractViolation):
        ScaledVector.of(np.ones((2, 2)))


def test_parallel_vectors_have_zero_wedge():
    u = ScaledVector.of([1.0, 2.0, 3.0])
    v = ScaledVector.of([2.0, 4.0, 6.0], 3.0)
    assert wedge2_norm(u, v).to_float() == 0.0
    w = ScaledVector.of([0.0, 1.0, 5.0])
    assert wedge3_norm(u, v, w).to_float() == 0.0


def test_nearly_parallel_keeps_relative_accuracy():
    u = np.array([1.0, 2.0, 3.0])
    v = u + np.array([1e-9, 0.0, -2e-9])
    exact = float(wedge_inner(wedge_coordinates(u, v), wedge_coordinates(u, v)))
    got = wedge2_norm(ScaledVector.of(u), ScaledVector.of(v)).to_float()
    assert _rel(got, math.sqrt(exact)) < 1e-13


def _rel(a, b):
    return abs(a - b) / abs(b)


@pytest.mark.parametrize("n", range(2, 9))
def test_pair_matches_coordinate_expansion(n):
    rng = np.random.default_rng(n)
    for _ in range(25):
        u1, u2, v1, v2 = rng.standard_normal((4, n))
        scales = rng.uniform(-50, 50, 4)
        vs = [ScaledVector.of(x, s) for x, s in zip((u1, u2, v1, v2), scales)]
        exact = wedge_inner(wedge_coordinates(u1, u2), wedge_coordinates(v1, v2))
        got = gram_inner_pair(*vs)
        val = got.mantissa * math.exp(got.log_scale - scales.sum())
        assert _rel(val, float(exact)) < 1e-12
        nrm = wedge2_norm(vs[0], vs[1])
        want = math.sqrt(float(wedge_inner(wedge_coordinates(u1, u2), wedge_coordinates(u1, u2))))
        assert _rel(nrm.mantissa * math.exp(nrm.log_scale - scales[0] - scales[1]), want) < 1e-12


@pytest.mark.parametrize("n", range(3, 9))
def test_triple_matches_coordinate_expansion(n):
    rng = np.random.default_rng(100 + n)
    for _ in range(25):
        xs = rng.standard_normal((6, n))
        vs = [ScaledVector.of(x) for x in xs]
        exact = wedge_inner(wedge_coordinates(*xs[:3]), wedge_coordinates(*xs[3:]))
        assert _rel(gram_inner_triple(*vs).to_float(), float(exact)) < 1e-12
        sq = float(wedge_inner(wedge_coordinates(*xs[:3]), wedge_coordinates(*xs[:3])))
        assert _rel(wedge3_norm(*vs[:3]).to_float(), math.sqrt(sq)) < 1e-12


@settings(max_examples=50)
@given(st.lists(finite, min_size=3, max_size=3), st.lists(finite, min_size=3, max_size=3),
       st.floats(-600, 600), st.floats(-600, 600))
def test_wedge_scale_covariance(a, b, sa, sb):
    u, v = ScaledVector.of(a), ScaledVector.of(b)
    base = wedge2_norm(u, v)
    moved = wedge2_norm(ScaledVector.of(a, sa), ScaledVector.of(b, sb))
    if base.mantissa == 0.0:
        assert moved.mantissa == 0.0
    else:
        assert moved.log_abs() == pytest.approx(base.log_abs() + sa + sb, abs=1e-9)


@settings(max_examples=50)
@given(st.lists(finite, min_size=4, max_size=4), st.lists(finite, min_size=4, max_size=4))
def test_wedge_antisymmetry(a, b):
    u, v = ScaledVector.of(a), ScaledVector.of(b)
    assert gram_inner_pair(u, v, v, u).mantissa == -gram_inner_pair(u, v, u, v).mantissa
