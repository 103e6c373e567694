"""Finite-dimensional associative algebras over Q given by structure constants."""

from __future__ import annotations

import re
from fractions import Fraction
from itertools import product
from typing import Sequence

from .arith import UniPoly, q, q_str, rational_roots, squarefree_part
from .errors import (
    AlgebraMismatch,
    BadUnit,
    DimensionMismatch,
    InputError,
    NotAssociative,
    NotUnital,
)
from .linalg import Mat, image_basis, independent_subset, krylov_minimal_polynomial, nullspace, span_rank

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*$")

ZERO = Fraction(0)
ONE = Fraction(1)


class FinDimAlgebra:
    """Algebra with basis ``b_0..b_{n-1}`` and ``b_i b_j = sum_k table[i][j][k] b_k``.

    Construct through :func:`algebra_from_table`, which validates associativity
    and the unit; the constructor itself only checks shapes.
    """

    def __init__(self, name: str, basis: Sequence[str], table, unit: Sequence | None = None):
        n = len(basis)
        if n < 1:
            raise InputError("algebra dimension must be >= 1")
        if len(set(basis)) != n:
            raise InputError("basis names must be unique")
        for b in basis:
            if b == "t" or not (_NAME.match(b) or b == "1"):
                raise InputError(f"bad basis name {b!r}")
        tab = []
        if len(table) != n:
            raise DimensionMismatch("structure table has wrong outer size")
        for i in range(n):
            if len(table[i]) != n:
                raise DimensionMismatch(f"structure table row {i} has wrong size")
            row = []
            for j in range(n):
                if len(table[i][j]) != n:
                    raise DimensionMismatch(f"structure constants ({i},{j}) have wrong length")
                row.append(tuple(q(c) for c in table[i][j]))
            tab.append(tuple(row))
        self.name = name
        self.basis = tuple(basis)
        self.dim = n
        self.table = tuple(tab)
        # sparse form: (i, j) -> [(k, c), ...]
        self._sparse = {
            (i, j): [(k, c) for k, c in enumerate(tab[i][j]) if c != 0]
            for i in range(n)
            for j in range(n)
        }
        self.unit = None
        if unit is not None:
            if len(unit) != n:
                raise DimensionMismatch("unit vector has wrong length")
            self.unit = AlgElem(self, [q(c) for c in unit])

    def __repr__(self):
        return f"FinDimAlgebra({self.name!r}, dim={self.dim})"

    def _key(self):
        return (self.basis, self.table, None if self.unit is None else self.unit.coeffs)

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, FinDimAlgebra):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    @property
    def is_unital(self) -> bool:
        return self.unit is not None

    def zero(self) -> "AlgElem":
        return AlgElem(self, [ZERO] * self.dim)

    def one(self) -> "AlgElem":
        if self.unit is None:
            raise NotUnital(f"algebra {self.name} has no unit")
        return self.unit

    def basis_element(self, i) -> "AlgElem":
        if isinstance(i, str):
            i = self.index(i)
        return AlgElem(self, [ONE if k == i else ZERO for k in range(self.dim)])

    def basis_elements(self) -> list["AlgElem"]:
        return [self.basis_element(i) for i in range(self.dim)]

    def element(self, coeffs: Sequence) -> "AlgElem":
        return AlgElem(self, [q(c) for c in coeffs])

    def index(self, name: str) -> int:
        return self.basis.index(name)

    def random_element(self, rng, lo: int = -3, hi: int = 3) -> "AlgElem":
        return AlgElem(self, [Fraction(rng.randint(lo, hi)) for _ in range(self.dim)])

    def mul_vectors(self, a: Sequence, b: Sequence) -> tuple:
        out = [ZERO] * self.dim
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                if y == 0:
                    continue
                xy = x * y
                for k, c in self._sparse[i, j]:
                    out[k] += xy * c
        return tuple(out)

    def left_mult_matrix(self, e: "AlgElem") -> Mat:
        """Matrix of ``a -> e*a``."""
        return Mat.from_columns([(e * b).coeffs for b in self.basis_elements()], self.dim)

    def right_mult_matrix(self, e: "AlgElem") -> Mat:
        """Matrix of ``a -> a*e``."""
        return Mat.from_columns([(b * e).coeffs for b in self.basis_elements()], self.dim)

    def center_basis(self) -> list["AlgElem"]:
        rows = []
        for b in self.basis_elements():
            comm = Mat.from_columns([(x * b - b * x).coeffs for x in self.basis_elements()], self.dim)
            rows.extend(comm.row_list())
        return [AlgElem(self, v) for v in nullspace(Mat.from_rows(rows))]

    def to_json(self) -> dict:
        data = {
            "dim": self.dim,
            "basis": list(self.basis),
            "table": [[[q_str(c) for c in self.table[i][j]] for j in range(self.dim)] for i in range(self.dim)],
            "name": self.name,
        }
        if self.unit is not None:
            data["unit"] = [q_str(c) for c in self.unit.coeffs]
        return data

    @classmethod
    def from_json(cls, data: dict) -> "FinDimAlgebra":
        try:
            dim = int(data["dim"])
            basis = list(data["basis"])
            table = data["table"]
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed algebra JSON: {exc}") from exc
        if len(basis) != dim:
            raise DimensionMismatch("basis length differs from dim")
        return algebra_from_table(table, basis, unit=data.get("unit"), name=data.get("name", "A"))


class AlgElem:
    __slots__ = ("algebra", "coeffs")

    def __init__(self, algebra: FinDimAlgebra, coeffs: Sequence):
        coeffs = tuple(coeffs)
        if len(coeffs) != algebra.dim:
            raise DimensionMismatch(f"{len(coeffs)} coefficients for a {algebra.dim}-dimensional algebra")
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, name, value):
        raise AttributeError("AlgElem is immutable")

    def _same(self, other: "AlgElem"):
        if not isinstance(other, AlgElem):
            raise AlgebraMismatch(f"expected an algebra element, got {type(other).__name__}")
        if other.algebra != self.algebra:
            raise AlgebraMismatch(f"elements of {self.algebra.name} and {other.algebra.name}")

    def __add__(self, other):
        self._same(other)
        return AlgElem(self.algebra, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        self._same(other)
        return AlgElem(self.algebra, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return AlgElem(self.algebra, [-a for a in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return AlgElem(self.algebra, [a * other for a in self.coeffs])
        self._same(other)
        return AlgElem(self.algebra, self.algebra.mul_vectors(self.coeffs, other.coeffs))

    def __rmul__(self, scalar):
        if isinstance(scalar, (int, Fraction)):
            return AlgElem(self.algebra, [scalar * a for a in self.coeffs])
        return NotImplemented

    def __truediv__(self, scalar):
        return self * (ONE / scalar)

    def __eq__(self, other):
        if not isinstance(other, AlgElem):
            return NotImplemented
        return self.coeffs == other.coeffs and self.algebra == other.algebra

    def __hash__(self):
        return hash(self.coeffs)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        from .parsing import format_element

        return f"AlgElem({format_element(self)})"

    def to_json(self) -> dict:
        return {"algebra": self.algebra.name, "coeffs": [q_str(c) for c in self.coeffs]}


def algebra_from_table(table, basis: Sequence[str], unit: Sequence | None = None, name: str = "A") -> FinDimAlgebra:
    """Build and validate an algebra; raises on the first failing triple or unit law."""
    A = FinDimAlgebra(name, basis, table, unit=None)
    n = A.dim
    es = A.basis_elements()
    prods = {(i, j): es[i] * es[j] for i in range(n) for j in range(n)}
    for i, j, k in product(range(n), repeat=3):
        if prods[i, j] * es[k] != es[i] * prods[j, k]:
            raise NotAssociative(i, j, k)
    if unit is not None:
        if len(unit) != n:
            raise DimensionMismatch("unit vector has wrong length")
        u = A.element(unit)
        for i in range(n):
            if u * es[i] != es[i] or es[i] * u != es[i]:
                raise BadUnit(i)
    if "1" in A.basis:
        k = A.basis.index("1")
        if unit is None or A.element(unit) != es[k]:
            raise InputError("basis name '1' is reserved for the unit")
    return FinDimAlgebra(name, basis, table, unit=unit)


def check_same_algebra(a: AlgElem, b: AlgElem):
    a._same(b)


def mul(a: AlgElem, b: AlgElem) -> AlgElem:
    a._same(b)
    return a * b


def is_idempotent(e: AlgElem) -> bool:
    return e * e == e


def is_central(e: AlgElem) -> bool:
    return all(e * b == b * e for b in e.algebra.basis_elements())


def one_sided_span(e: AlgElem, side: str) -> list[AlgElem]:
    """Basis of ``eA`` (side="right", elements ``e*a``) or ``Ae`` (side="left")."""
    A = e.algebra
    if side == "right":
        M = A.left_mult_matrix(e)
    elif side == "left":
        M = A.right_mult_matrix(e)
    else:
        raise InputError(f"side must be 'left' or 'right', not {side!r}")
    return [AlgElem(A, v) for v in image_basis(M)]


def principal_ideal_basis(e: AlgElem) -> list[AlgElem]:
    """Basis of the two-sided ideal generated by ``e`` (closure iteration)."""
    A = e.algebra
    if e.is_zero():
        return []
    current = [e.coeffs]
    gens = A.basis_elements()
    for _ in range(A.dim):
        cand = list(current)
        for v in current:
            x = AlgElem(A, v)
            for b in gens:
                cand.append((b * x).coeffs)
                cand.append((x * b).coeffs)
        grown = independent_subset(cand, A.dim)
        if len(grown) == len(current):
            break
        current = grown
    return [AlgElem(A, v) for v in current]


def element_minimal_polynomial(a: AlgElem) -> UniPoly:
    """Monic p of least degree with p(a) = 0, powers of ``a`` starting from the unit."""
    A = a.algebra
    return krylov_minimal_polynomial(A.left_mult_matrix(a), A.one().coeffs)


def poly_at_element(p: UniPoly, a: AlgElem) -> AlgElem:
    A = a.algebra
    acc = A.zero()
    one = A.one()
    for c in reversed(p.coeffs):
        acc = acc * a + one * c
    return acc


def spectral_idempotents(a: AlgElem) -> list[AlgElem]:
    """Orthogonal idempotents of Q[a] from a squarefree, Q-split minimal polynomial.

    Returns [] unless the minimal polynomial of ``a`` is a product of distinct
    rational linear factors.
    """
    A = a.algebra
    if not A.is_unital:
        raise NotUnital(f"algebra {A.name} has no unit")
    m = element_minimal_polynomial(a)
    if squarefree_part(m) != m:
        return []
    roots = rational_roots(m)
    if len(roots) != m.degree:
        return []
    out = []
    for lam in roots:
        lagrange = UniPoly([1])
        for mu in roots:
            if mu != lam:
                lagrange = lagrange * UniPoly([-mu, 1]) * (ONE / (lam - mu))
        out.append(poly_at_element(lagrange, a))
    return out


def central_idempotents(A: FinDimAlgebra, rng, samples: int = 3) -> list[AlgElem]:
    """Central idempotents reachable from random central elements, closed under orthogonal sums."""
    if not A.is_unital:
        raise NotUnital(f"algebra {A.name} has no unit")
    center = A.center_basis()
    found = {A.zero().coeffs, A.one().coeffs}
    for _ in range(samples):
        z = A.zero()
        for c in center:
            z = z + c * rng.randint(-5, 5)
        prims = spectral_idempotents(z)
        for mask in range(1, 2 ** len(prims)):
            e = A.zero()
            for k, p in enumerate(prims):
                if mask >> k & 1:
                    e = e + p
            found.add(e.coeffs)
    return [AlgElem(A, c) for c in sorted(found)]


# ---------------------------------------------------------------------------
# built-in algebras


def _table_from_products(n: int, rule) -> list:
    tab = [[[ZERO] * n for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            for k, c in rule(i, j):
                tab[i][j][k] += q(c)
    return tab


def product_of_q(n: int) -> FinDimAlgebra:
    """Q x ... x Q with orthogonal idempotent basis e1..en."""
    table = _table_from_products(n, lambda i, j: [(i, 1)] if i == j else [])
    return algebra_from_table(table, [f"e{i + 1}" for i in range(n)], unit=[1] * n, name="Q" if n == 1 else f"Q^{n}")


def rationals() -> FinDimAlgebra:
    return algebra_from_table([[[1]]], ["1"], unit=[1], name="Q")


def truncated_poly(n: int) -> FinDimAlgebra:
    """Q[x]/(x^n), basis 1, x, x2, ..."""
    names = ["1", "x"] + [f"x{k}" for k in range(2, n)]
    table = _table_from_products(n, lambda i, j: [(i + j, 1)] if i + j < n else [])
    return algebra_from_table(table, names[:n], unit=[1] + [0] * (n - 1), name="dual" if n == 2 else f"Q[x]/x^{n}")


def dual_numbers() -> FinDimAlgebra:
    return truncated_poly(2)


def upper_triangular(n: int = 2) -> FinDimAlgebra:
    """T_n(Q) with basis E_ij, i <= j, in row-major order."""
    idx = [(i, j) for i in range(n) for j in range(i, n)]
    pos = {p: k for k, p in enumerate(idx)}

    def rule(a, b):
        (i, j), (k, l) = idx[a], idx[b]
        return [(pos[i, l], 1)] if j == k else []

    table = _table_from_products(len(idx), rule)
    unit = [1 if i == j else 0 for i, j in idx]
    return algebra_from_table(table, [f"E{i + 1}{j + 1}" for i, j in idx], unit=unit, name=f"T{n}")


def matrix_algebra(n: int = 2) -> FinDimAlgebra:
    idx = [(i, j) for i in range(n) for j in range(n)]
    pos = {p: k for k, p in enumerate(idx)}

    def rule(a, b):
        (i, j), (k, l) = idx[a], idx[b]
        return [(pos[i, l], 1)] if j == k else []

    table = _table_from_products(len(idx), rule)
    unit = [1 if i == j else 0 for i, j in idx]
    return algebra_from_table(table, [f"E{i + 1}{j + 1}" for i, j in idx], unit=unit, name=f"M{n}")


def direct_sum(A: FinDimAlgebra, B: FinDimAlgebra, name: str | None = None) -> FinDimAlgebra:
    """A x B; basis names get suffixes _1 / _2 ("1" becomes "one")."""
    n, m = A.dim, B.dim

    def rule(i, j):
        if i < n and j < n:
            return [(k, c) for k, c in enumerate(A.table[i][j]) if c]
        if i >= n and j >= n:
            return [(n + k, c) for k, c in enumerate(B.table[i - n][j - n]) if c]
        return []

    table = _table_from_products(n + m, rule)
    rename = lambda s, tag: ("one" if s == "1" else s) + tag
    basis = [rename(s, "_1") for s in A.basis] + [rename(s, "_2") for s in B.basis]
    unit = None
    if A.is_unital and B.is_unital:
        unit = list(A.unit.coeffs) + list(B.unit.coeffs)
    return algebra_from_table(table, basis, unit=unit, name=name or f"{A.name}+{B.name}")


def nonunital_nilpotent(n: int = 2) -> FinDimAlgebra:
    """x Q[x]/(x^(n+1)): basis x, x2, .., x^n, no unit."""
    names = ["x"] + [f"x{k}" for k in range(2, n + 1)]
    table = _table_from_products(n, lambda i, j: [(i + j + 1, 1)] if i + j + 1 < n else [])
    return algebra_from_table(table, names, unit=None, name=f"xQ[x]/x^{n + 1}")


BUILTINS = {
    "Q": rationals,
    "dual": dual_numbers,
    "T2": lambda: upper_triangular(2),
    "T3": lambda: upper_triangular(3),
    "M2": lambda: matrix_algebra(2),
    "QxQ": lambda: product_of_q(2),
    "QxQxQ": lambda: product_of_q(3),
    "trunc3": lambda: truncated_poly(3),
}


def builtin_algebra(name: str) -> FinDimAlgebra:
    try:
        return BUILTINS[name]()
    except KeyError:
        raise InputError(f"unknown built-in algebra {name!r}; choose from {sorted(BUILTINS)}") from None


def subspace_rank(elems: Sequence[AlgElem]) -> int:
    if not elems:
        return 0
    return span_rank([e.coeffs for e in elems], elems[0].algebra.dim)
