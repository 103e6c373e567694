import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dertool.arith import UniPoly, squarefree_part
from dertool.errors import DimensionMismatch, NotCommuting, NotInvertible, NotNilpotent
from dertool.linalg import (
    Mat,
    image_basis,
    inverse,
    invert_shifted,
    jordan_chevalley,
    minimal_polynomial,
    nilpotency_index,
    nullspace,
    rank,
    solvability_transfer_check,
    solve_linear,
)

I2 = Mat.identity(2)
N = Mat.from_rows([[0, 1], [0, 0]])


def M(rows):
    return Mat.from_rows(rows)


def random_matrix(rng, n, m=None):
    m = n if m is None else m
    return M([[rng.randint(-3, 3) for _ in range(m)] for _ in range(n)])


matrices = st.integers(1, 4).flatmap(
    lambda n: st.lists(st.lists(st.integers(-3, 3), min_size=n, max_size=n), min_size=n, max_size=n)
).map(Mat.from_rows)


def test_solve_examples():
    assert solve_linear(I2, [3, Fraction(1, 2)]) == (3, Fraction(1, 2))
    assert solve_linear(M([[1, 1], [0, 0]]), [1, 1]) is None
    assert solve_linear(M([[1, 2], [3, 4]]), [5, 6]) == (-4, Fraction(9, 2))


def test_solve_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        solve_linear(I2, [1, 2, 3])


def test_free_variables_are_zeroed():
    assert solve_linear(M([[1, 1]]), [2]) == (2, 0)


def test_nullspace_examples():
    assert len(nullspace(Mat.zero(2))) == 2
    assert nullspace(I2) == []
    assert nullspace(N) == [(1, 0)]


def test_image_examples():
    assert len(image_basis(Mat.zero(2))) == 0
    assert len(image_basis(I2)) == 2
    assert image_basis(N) == [(1, 0)]


@given(matrices)
def test_rank_nullity(A):
    assert rank(A) + len(nullspace(A)) == A.cols
    assert len(image_basis(A)) == rank(A)
    for v in nullspace(A):
        assert all(x == 0 for x in A.apply(v))


def test_minimal_polynomial_examples():
    t = UniPoly([0, 1])
    assert minimal_polynomial(Mat.identity(3)) == t - UniPoly([1])
    assert minimal_polynomial(N) == t**2
    assert minimal_polynomial(M([[0, 1], [0, 1]])) == t**2 - t


@settings(max_examples=60)
@given(matrices)
def test_minimal_polynomial_annihilates(A):
    m = minimal_polynomial(A)
    assert A.poly_eval(m).is_zero()
    # no polynomial of lower degree kills A: powers I..A^(deg-1) are independent
    powers = [tuple((A ** k).entries) for k in range(m.degree)]
    assert rank(Mat.from_columns(powers, A.rows * A.cols)) == m.degree


def test_jc_examples():
    jc = jordan_chevalley(M([[1, 1], [0, 1]]))
    assert jc.semisimple == I2 and jc.nilpotent == N and jc.nilpotency_index == 2
    A = M([[0, 1], [0, 1]])
    jc = jordan_chevalley(A)
    assert jc.semisimple == A and jc.nilpotent.is_zero() and jc.nilpotency_index == 0
    jc = jordan_chevalley(M([[2, 1], [0, 2]]))
    assert jc.semisimple == I2 * 2 and jc.nilpotent == N


def jc_invariants_hold(A):
    jc = jordan_chevalley(A)
    S, Nn = jc.semisimple, jc.nilpotent
    if S + Nn != A or S * Nn != Nn * S:
        return False
    ms = minimal_polynomial(S)
    if squarefree_part(ms) != ms:
        return False
    k = jc.nilpotency_index
    if k == 0:
        ok_nil = Nn.is_zero()
    else:
        ok_nil = (Nn**k).is_zero() and not (Nn ** (k - 1)).is_zero()
    return ok_nil and A.poly_eval(jc.witness) == S


def test_jc_random_invariants():
    rng = random.Random(11)
    for _ in range(60):
        assert jc_invariants_hold(random_matrix(rng, rng.randint(1, 5)))


def test_jc_on_block_matrices():
    # nontrivial Jordan structure with a non-split factor t^2 - 2
    A = M([[0, 2, 1, 0], [1, 0, 0, 1], [0, 0, 0, 2], [0, 0, 1, 0]])
    assert jc_invariants_hold(A)
    assert not jordan_chevalley(A).nilpotent.is_zero()


def test_nilpotency_index():
    assert nilpotency_index(N) == 2
    assert nilpotency_index(I2) is None
    assert nilpotency_index(Mat.zero(3)) == 1


def test_invert_shifted_examples():
    assert invert_shifted(I2, N) == M([[1, 1], [0, 1]])
    assert invert_shifted(-I2, Mat.zero(2)) == -I2
    assert invert_shifted(I2 * 2, M([[0, 3], [0, 0]])) == M([[Fraction(1, 2), Fraction(3, 4)], [0, Fraction(1, 2)]])


def test_invert_shifted_errors():
    with pytest.raises(NotNilpotent):
        invert_shifted(I2, I2)
    with pytest.raises(NotCommuting):
        invert_shifted(M([[1, 0], [0, 2]]), N)
    with pytest.raises(NotInvertible):
        invert_shifted(Mat.zero(2), Mat.zero(2))


def test_inverse_roundtrip():
    A = M([[2, 1], [1, 1]])
    assert A * inverse(A) == I2


def test_transfer_examples():
    assert solvability_transfer_check(I2, [5, -7])
    assert solvability_transfer_check(M([[1, 1], [0, 0]]), [1, 1])
    A = M([[1, 2, 3], [2, 4, 6], [0, 1, 1]])
    assert rank(A) == 2
    assert solvability_transfer_check(A, [1, 2, 3])
    assert solvability_transfer_check(A, [1, 3, 3])


def test_transfer_random():
    rng = random.Random(5)
    for _ in range(40):
        A = random_matrix(rng, rng.randint(1, 3), rng.randint(1, 3))
        y = [rng.randint(-2, 2) for _ in range(A.rows)]
        assert solvability_transfer_check(A, y)


def test_matrix_json_roundtrip():
    A = M([[Fraction(1, 2), -3], [0, 7]])
    assert Mat.from_json(A.to_json()) == A
    assert A.to_json() == [["1/2", "-3"], ["0", "7"]]
