"""Exact matrices over Q (or a quadratic extension) and the routines built on them.

Vectors are plain tuples. A matrix acts on column vectors; for an operator on
an algebra, column ``j`` holds the coordinates of the image of basis element ``j``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, log2
from typing import Iterable, Sequence

from .arith import (
    QuadExtElem,
    SQRT2_MODULUS,
    UniPoly,
    check_quadratic_modulus,
    poly_inverse_mod,
    poly_lcm,
    q,
    q_str,
    squarefree_part,
)
from .errors import (
    DimensionMismatch,
    InputError,
    IterationBound,
    NotCommuting,
    NotInvertible,
    NotNilpotent,
    NotSquare,
)


class Mat:
    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Sequence):
        entries = tuple(entries)
        if len(entries) != rows * cols:
            raise DimensionMismatch(f"{len(entries)} entries for a {rows}x{cols} matrix")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, name, value):
        raise AttributeError("Mat is immutable")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "Mat":
        rows = [list(r) for r in rows]
        n = len(rows)
        m = len(rows[0]) if rows else 0
        if any(len(r) != m for r in rows):
            raise DimensionMismatch("ragged rows")
        return cls(n, m, [_coerce(x) for r in rows for x in r])

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence], rows: int | None = None) -> "Mat":
        cols = [tuple(c) for c in cols]
        if rows is None:
            rows = len(cols[0]) if cols else 0
        return cls(rows, len(cols), [cols[j][i] for i in range(rows) for j in range(len(cols))])

    @classmethod
    def identity(cls, n: int, one=Fraction(1)) -> "Mat":
        zero = one * 0
        return cls(n, n, [one if i == j else zero for i in range(n) for j in range(n)])

    @classmethod
    def zero(cls, rows: int, cols: int | None = None) -> "Mat":
        cols = rows if cols is None else cols
        return cls(rows, cols, [Fraction(0)] * (rows * cols))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def column(self, j: int) -> tuple:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def row_list(self) -> list[list]:
        return [list(self.row(i)) for i in range(self.rows)]

    def columns(self) -> list[tuple]:
        return [self.column(j) for j in range(self.cols)]

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def transpose(self) -> "Mat":
        return Mat.from_columns([self.row(i) for i in range(self.rows)], self.cols)

    def map(self, f) -> "Mat":
        return Mat(self.rows, self.cols, [f(x) for x in self.entries])

    def __eq__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        return (self.rows, self.cols) == (other.rows, other.cols) and all(
            a == b for a, b in zip(self.entries, other.entries)
        )

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self):
        return f"Mat({self.to_json()})"

    def _same_shape(self, other):
        if not isinstance(other, Mat) or (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatch("matrix shapes differ")

    def __add__(self, other):
        self._same_shape(other)
        return Mat(self.rows, self.cols, [a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other):
        self._same_shape(other)
        return Mat(self.rows, self.cols, [a - b for a, b in zip(self.entries, other.entries)])

    def __neg__(self):
        return Mat(self.rows, self.cols, [-a for a in self.entries])

    def __mul__(self, other):
        if isinstance(other, Mat):
            if self.cols != other.rows:
                raise DimensionMismatch(f"{self.rows}x{self.cols} times {other.rows}x{other.cols}")
            ocols = other.columns()
            out = []
            for i in range(self.rows):
                r = self.row(i)
                for c in ocols:
                    out.append(_dot(r, c))
            return Mat(self.rows, other.cols, out)
        return Mat(self.rows, self.cols, [a * other for a in self.entries])

    def __rmul__(self, scalar):
        return Mat(self.rows, self.cols, [scalar * a for a in self.entries])

    def __pow__(self, n: int):
        if not self.is_square:
            raise NotSquare("power of a non-square matrix")
        result = Mat.identity(self.rows, _one_like(self))
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def apply(self, v: Sequence) -> tuple:
        if len(v) != self.cols:
            raise DimensionMismatch(f"vector of length {len(v)} for {self.cols} columns")
        return tuple(_dot(self.row(i), v) for i in range(self.rows))

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.entries)

    def poly_eval(self, p: UniPoly) -> "Mat":
        if not self.is_square:
            raise NotSquare("polynomial of a non-square matrix")
        one = Mat.identity(self.rows, _one_like(self))
        acc = one * 0
        for c in reversed(p.coeffs):
            acc = acc * self + one * c
        return acc

    def to_json(self) -> list:
        return [[_scalar_json(x) for x in self.row(i)] for i in range(self.rows)]

    @classmethod
    def from_json(cls, data) -> "Mat":
        if not isinstance(data, list) or not all(isinstance(r, list) for r in data):
            raise InputError("matrix JSON must be an array of arrays")
        return cls.from_rows([[q(x) for x in r] for r in data])


def _coerce(x):
    if isinstance(x, QuadExtElem):
        return x
    return q(x)


def _scalar_json(x):
    if isinstance(x, QuadExtElem):
        return [q_str(x.a), q_str(x.b)]
    return q_str(x)


def _one_like(m: Mat):
    for x in m.entries:
        if isinstance(x, QuadExtElem):
            return QuadExtElem(1, 0, x.modulus)
    return Fraction(1)


def _dot(a, b):
    acc = 0
    for x, y in zip(a, b):
        if x != 0 and y != 0:
            acc = x * y + acc
    return acc if not isinstance(acc, int) else Fraction(acc)


def rref(A: Mat) -> tuple[list[list], list[int]]:
    """Reduced row echelon form; returns (rows, pivot columns)."""
    M = A.row_list()
    pivots = []
    r = 0
    for c in range(A.cols):
        pr = next((i for i in range(r, A.rows) if M[i][c] != 0), None)
        if pr is None:
            continue
        M[r], M[pr] = M[pr], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(A.rows):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == A.rows:
            break
    return M, pivots


def rank(A: Mat) -> int:
    return len(rref(A)[1])


def solve_linear(A: Mat, y: Sequence) -> tuple | None:
    """Some ``x`` with ``A x = y``, free variables zero; ``None`` if inconsistent."""
    if A.rows != len(y):
        raise DimensionMismatch(f"{A.rows} rows but right-hand side of length {len(y)}")
    aug = Mat(
        A.rows,
        A.cols + 1,
        [x for i in range(A.rows) for x in (*A.row(i), _coerce(y[i]))],
    )
    M, pivots = rref(aug)
    if pivots and pivots[-1] == A.cols:
        return None
    zero = _one_like(aug) * 0
    x = [zero] * A.cols
    for r, c in enumerate(pivots):
        x[c] = M[r][A.cols]
    return tuple(x)


def nullspace(A: Mat) -> list[tuple]:
    M, pivots = rref(A)
    one = _one_like(A)
    zero = one * 0
    free = [c for c in range(A.cols) if c not in pivots]
    basis = []
    for f in free:
        v = [zero] * A.cols
        v[f] = one
        for r, c in enumerate(pivots):
            v[c] = -M[r][f]
        basis.append(tuple(v))
    return basis


def image_basis(A: Mat) -> list[tuple]:
    """The pivot columns of ``A``: a basis of its column space."""
    _, pivots = rref(A)
    return [A.column(c) for c in pivots]


def independent_subset(vectors: Sequence[Sequence], dim: int) -> list[tuple]:
    """A basis of span(vectors) chosen among the vectors themselves."""
    if not vectors:
        return []
    return image_basis(Mat.from_columns(vectors, dim))


def span_rank(vectors: Sequence[Sequence], dim: int) -> int:
    if not vectors:
        return 0
    return rank(Mat.from_columns(vectors, dim))


def in_span(v: Sequence, vectors: Sequence[Sequence], dim: int) -> bool:
    if all(x == 0 for x in v):
        return True
    if not vectors:
        return False
    return solve_linear(Mat.from_columns(vectors, dim), v) is not None


def subspace_contains(big: Sequence[Sequence], small: Sequence[Sequence], dim: int) -> bool:
    return span_rank(list(big) + list(small), dim) == span_rank(big, dim)


def subspaces_equal(u: Sequence[Sequence], v: Sequence[Sequence], dim: int) -> bool:
    ru, rv = span_rank(u, dim), span_rank(v, dim)
    return ru == rv == span_rank(list(u) + list(v), dim)


def inverse(A: Mat) -> Mat:
    if not A.is_square:
        raise NotSquare("inverse of a non-square matrix")
    n = A.rows
    one = _one_like(A)
    aug = Mat(n, 2 * n, [x for i in range(n) for x in (*A.row(i), *Mat.identity(n, one).row(i))])
    M, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise NotInvertible("matrix is singular")
    return Mat.from_rows([row[n:] for row in M[:n]])


def nilpotency_index(N: Mat) -> int | None:
    """Least k >= 1 with N^k = 0, or None if N is not nilpotent."""
    if not N.is_square:
        raise NotSquare("nilpotency of a non-square matrix")
    P = N
    for k in range(1, N.rows + 1):
        if P.is_zero():
            return k
        P = P * N
    return None


def krylov_minimal_polynomial(A: Mat, v: Sequence) -> UniPoly:
    """Monic p of least degree with p(A) v = 0."""
    if all(x == 0 for x in v):
        return UniPoly([1])
    vecs = [tuple(v)]
    while True:
        w = A.apply(vecs[-1])
        coeffs = solve_linear(Mat.from_columns(vecs, A.rows), w)
        if coeffs is not None:
            return UniPoly([-c for c in coeffs] + [1])
        vecs.append(w)


def minimal_polynomial(A: Mat) -> UniPoly:
    if not A.is_square:
        raise NotSquare("minimal polynomial of a non-square matrix")
    m = UniPoly([1])
    one = Fraction(1)
    for j in range(A.cols):
        e = tuple(one if i == j else Fraction(0) for i in range(A.rows))
        m = poly_lcm(m, krylov_minimal_polynomial(A, e))
    return m


@dataclass(frozen=True)
class JCDecomp:
    semisimple: Mat
    nilpotent: Mat
    witness: UniPoly
    nilpotency_index: int
    minimal_polynomial: UniPoly
    iterations: int


def jordan_chevalley(A: Mat) -> JCDecomp:
    """Split ``A`` into commuting semisimple + nilpotent parts (Newton iteration).

    All arithmetic happens in Q[t]/(m) with m the minimal polynomial of ``A``;
    the semisimple part is the resulting polynomial evaluated at ``A``.
    """
    if not A.is_square:
        raise NotSquare("Jordan-Chevalley of a non-square matrix")
    m = minimal_polynomial(A)
    f = squarefree_part(m)
    df = f.derivative()
    bound = ceil(log2(max(m.degree, 1))) + 2
    w = UniPoly([0, 1]) % m
    steps = 0
    while True:
        residual = f.compose(w) % m
        if residual.is_zero():
            break
        if steps >= bound:
            raise IterationBound(f"Newton iteration exceeded {bound} steps")
        correction = poly_inverse_mod(df.compose(w), m)
        w = (w - residual * correction) % m
        steps += 1
    S = A.poly_eval(w)
    N = A - S
    idx = 0 if N.is_zero() else nilpotency_index(N)
    if idx is None:
        raise IterationBound("nilpotent part is not nilpotent")
    return JCDecomp(S, N, w, idx, m, steps)


def invert_shifted(F: Mat, G: Mat) -> Mat:
    """(F - G)^-1 as the finite sum of G^k F^(-k-1), G nilpotent and commuting with F."""
    if not (F.is_square and G.is_square) or F.rows != G.rows:
        raise DimensionMismatch("F and G must be square of equal size")
    if F * G != G * F:
        raise NotCommuting("F and G do not commute")
    nu = nilpotency_index(G)
    if nu is None:
        raise NotNilpotent("G is not nilpotent")
    Finv = inverse(F)
    term = Finv
    total = term
    for _ in range(1, nu):
        term = G * term * Finv
        total = total + term
    if (F - G) * total != Mat.identity(F.rows, _one_like(F)):
        raise NotInvertible("series did not invert F - G")
    return total


def embed(A: Mat, modulus: UniPoly = SQRT2_MODULUS) -> Mat:
    return A.map(lambda x: QuadExtElem(x, 0, modulus))


def _transfer_conjugator(n: int, modulus: UniPoly) -> Mat:
    # unit lower-triangular times unit upper-triangular: invertible, genuinely irrational
    theta = QuadExtElem(0, 1, modulus)
    one = QuadExtElem(1, 0, modulus)
    zero = one * 0
    L = Mat(n, n, [one if i == j else (theta if i > j else zero) for i in range(n) for j in range(n)])
    U = Mat(n, n, [one if i == j else (theta + 1 if i < j else zero) for i in range(n) for j in range(n)])
    return L * U


def solvability_transfer_check(A: Mat, y: Sequence, modulus: UniPoly = SQRT2_MODULUS) -> bool:
    """Compare solvability of ``A x = y`` over Q and over Q[t]/(modulus).

    The extension-field system is first scrambled by an invertible matrix with
    irrational entries, so the second solve runs on genuinely irrational data.
    """
    if A.rows != len(y):
        raise DimensionMismatch(f"{A.rows} rows but right-hand side of length {len(y)}")
    check_quadratic_modulus(modulus)
    over_q = solve_linear(A, [q(v) for v in y]) is not None
    P = _transfer_conjugator(A.rows, modulus)
    AL = P * embed(A, modulus)
    yL = P.apply(tuple(QuadExtElem(v, 0, modulus) for v in y))
    xL = solve_linear(AL, yL)
    over_l = xL is not None
    if over_l and AL.apply(xL) != tuple(yL):
        return False
    return over_q == over_l


def vec_json(v: Iterable) -> list:
    return [q_str(x) for x in v]


def vec_from_json(data) -> tuple:
    return tuple(q(x) for x in data)
