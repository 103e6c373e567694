import random
from fractions import Fraction
from math import perm

import pytest

from dertool.algebra import nonunital_nilpotent, rationals, upper_triangular
from dertool.errors import DegreeCapExceeded, NotPreimage, NotUnital
from dertool.linalg import Mat
from dertool.parsing import parse_element
from dertool.polyext import PolyExtAlgebra, PolyOp, normalize_s, pmul, poly_elem_from_json, solve_slice

QT = PolyExtAlgebra(rationals())
T2T = PolyExtAlgebra(upper_triangular(2))


def P(text, A=QT):
    return parse_element(text, A)


D_Q = PolyOp(QT, "coefficient_derivative")
D_T = PolyOp(T2T, "coefficient_derivative")
DELTA_Q = PolyOp(QT, "composite", 1)
SHIFT_Q = PolyOp(QT, "shift_endo", 1)


def test_pmul_examples():
    assert pmul(P("E11*t", T2T), P("E11*t", T2T)) == P("E11*t^2", T2T)
    assert pmul(P("t+1"), P("t-1")) == P("t^2-1")
    assert pmul(P("E12*t", T2T), P("E11*t", T2T)).is_zero()


def test_degree_cap():
    A = PolyExtAlgebra(rationals(), degree_cap=4)
    x = parse_element("t^3", A)
    with pytest.raises(DegreeCapExceeded):
        x * x


def test_apply_examples():
    assert D_T(P("E11*t^3", T2T)) == P("3*E11*t^2", T2T)
    assert DELTA_Q(P("t^2")) == P("-2*t - 1")
    assert SHIFT_Q(P("7")) == P("7")


def test_shift_needs_unit():
    A = PolyExtAlgebra(nonunital_nilpotent(2))
    with pytest.raises(NotUnital):
        PolyOp(A, "shift_endo", 1)(A.monomial(A.coeff_algebra.basis_element(0), 1))


def test_solve_slice_examples():
    assert solve_slice(D_T, P("E11", T2T)) == P("E11*t", T2T)
    assert solve_slice(DELTA_Q, P("1")) == P("-t")
    assert solve_slice(D_Q, P("t^2")) == P("1/3*t^3")


def test_solve_slice_roundtrip():
    rng = random.Random(3)
    for T in [D_Q, DELTA_Q, PolyOp(QT, "composite", Fraction(-2, 3)), D_T, PolyOp(T2T, "composite", 2)]:
        for _ in range(20):
            y = T.algebra.random_element(rng, 7)
            assert T(solve_slice(T, y)) == y


def test_normalize_s_examples():
    e = P("E11", T2T)
    assert normalize_s(D_T, e, P("E11*t", T2T)) == P("E11*t", T2T)
    assert normalize_s(D_Q, P("1"), P("t")) == P("t")
    assert normalize_s(D_T, e, P("(E11+E22)*t", T2T)) == P("E11*t", T2T)


def test_normalize_s_rejects_bad_s():
    with pytest.raises(NotPreimage):
        normalize_s(D_T, P("E11", T2T), P("E12*t", T2T))


def test_falling_factorial_powers():
    # D^i(s^k) = k(k-1)...(k-i+1) s^(k-i), with s^0 = e
    for D, e, s in [(D_Q, P("1"), P("t")), (D_T, P("E11", T2T), P("E11*t", T2T))]:
        pows = [e]
        for _ in range(8):
            pows.append(pows[-1] * s)
        for k in range(9):
            x = pows[k]
            for i in range(k + 1):
                assert x == pows[k - i] * perm(k, i)
                x = D(x)


def test_degree_strictly_drops():
    rng = random.Random(8)
    for T in [D_Q, DELTA_Q, D_T, PolyOp(T2T, "composite", 3)]:
        for _ in range(20):
            a = T.algebra.random_element(rng, 6)
            if a.degree >= 1:
                assert T(a).degree < a.degree


def test_shift_multiplicative():
    rng = random.Random(9)
    for A in [QT, T2T]:
        S = PolyOp(A, "shift_endo", Fraction(5, 2))
        for _ in range(20):
            a, b = A.random_element(rng, 4), A.random_element(rng, 4)
            assert S(a * b) == S(a) * S(b)


def test_json_roundtrip():
    x = P("3/2*E12 + E11*t - E22*t^3", T2T)
    assert poly_elem_from_json(T2T, x.to_json()) == x


def test_prop32_transcendence_sampled():
    # sum c_i s^i = 0 with c_i in ker D forces c_i e = 0: the s^i e stay independent
    B = T2T.coeff_algebra
    e, s = P("E11", T2T), P("E11*t", T2T)
    kernel_constants = [T2T.constant(b) for b in B.basis_elements()]
    pows = [e]
    for _ in range(8):
        pows.append(pows[-1] * s)
    cols, labels = [], []
    for i, p in enumerate(pows):
        for c in kernel_constants:
            cols.append((c * p).to_vector(8))
            labels.append((c, i))
    M = Mat.from_columns(cols, 9 * B.dim)
    from dertool.linalg import nullspace

    for v in nullspace(M):
        for coef, (c, i) in zip(v, labels):
            if coef:
                assert (c * e).is_zero()


def test_prop32_derivative_on_ae():
    e, s = P("E11", T2T), P("E11*t", T2T)
    pows = [e]
    for _ in range(8):
        pows.append(pows[-1] * s)
    for a in [P("E11", T2T), P("E12", T2T), P("E22", T2T), P("2*E11-E12", T2T)]:
        assert D_T(a).is_zero()
        for k in range(1, 9):
            assert D_T(a * pows[k]) == a * pows[k - 1] * k


def test_prop32_shift_on_ea():
    # on eA the shift acts as the endomorphism s -> s + e
    e, s = P("E11", T2T), P("E11*t", T2T)
    shift = PolyOp(T2T, "shift_endo", 1)
    pows = [e]
    for _ in range(8):
        pows.append(pows[-1] * s)
    spe = [e]
    for _ in range(8):
        spe.append(spe[-1] * (s + e))
    for a in [P("E11", T2T), P("E12", T2T)]:
        for k in range(9):
            assert shift(e * a * pows[k]) == e * a * spe[k]
