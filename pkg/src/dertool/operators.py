"""Linear operators on either backend, behind one calling convention.

Every operator is a callable ``T(a) -> element`` with an ``algebra`` attribute
and an ``ln_status()`` method returning True / False / None (unknown).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable

from .algebra import AlgElem, FinDimAlgebra
from .errors import AlgebraMismatch, InputError, NotLocallyNilpotent
from .linalg import Mat, nilpotency_index
from .polyext import PolyExtAlgebra, PolyOp


class LinearMap:
    """Operator on a finite-dimensional algebra, stored as a matrix.

    Column ``j`` holds the coordinates of the image of basis element ``j``.
    """

    def __init__(self, algebra: FinDimAlgebra, matrix: Mat, name: str = "T"):
        if matrix.rows != algebra.dim or matrix.cols != algebra.dim:
            raise InputError(f"operator matrix must be {algebra.dim}x{algebra.dim}")
        self.algebra = algebra
        self.matrix = matrix
        self.name = name
        self._nilpotency = "unset"
        self.cache = {}

    @classmethod
    def from_function(cls, algebra: FinDimAlgebra, f: Callable, name: str = "T") -> "LinearMap":
        cols = [f(b).coeffs for b in algebra.basis_elements()]
        return cls(algebra, Mat.from_columns(cols, algebra.dim), name)

    @classmethod
    def identity(cls, algebra: FinDimAlgebra) -> "LinearMap":
        return cls(algebra, Mat.identity(algebra.dim), "I")

    @classmethod
    def zero(cls, algebra: FinDimAlgebra) -> "LinearMap":
        return cls(algebra, Mat.zero(algebra.dim), "0")

    def __call__(self, a: AlgElem) -> AlgElem:
        if a.algebra != self.algebra:
            raise AlgebraMismatch("operator and element live in different algebras")
        return AlgElem(self.algebra, self.matrix.apply(a.coeffs))

    def __repr__(self):
        return f"LinearMap({self.name}, {self.matrix.to_json()})"

    def __eq__(self, other):
        if not isinstance(other, LinearMap):
            return NotImplemented
        return self.algebra == other.algebra and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def __add__(self, other):
        return LinearMap(self.algebra, self.matrix + other.matrix, f"({self.name}+{other.name})")

    def __sub__(self, other):
        return LinearMap(self.algebra, self.matrix - other.matrix, f"({self.name}-{other.name})")

    def __neg__(self):
        return LinearMap(self.algebra, -self.matrix, f"-{self.name}")

    def compose(self, other: "LinearMap") -> "LinearMap":
        return LinearMap(self.algebra, self.matrix * other.matrix, f"{self.name}{other.name}")

    def scale(self, c) -> "LinearMap":
        return LinearMap(self.algebra, self.matrix * Fraction(c), f"{c}{self.name}")

    def power(self, k: int) -> "LinearMap":
        return LinearMap(self.algebra, self.matrix ** k, f"{self.name}^{k}")

    def nilpotency(self) -> int | None:
        if self._nilpotency == "unset":
            self._nilpotency = nilpotency_index(self.matrix)
        return self._nilpotency

    def ln_status(self) -> bool:
        return self.nilpotency() is not None

    def describe(self) -> dict:
        return {"kind": "matrix", "matrix": self.matrix.to_json()}


class FunctionOp:
    """Operator given only elementwise (used for derived operators on B[t])."""

    def __init__(self, algebra, func: Callable, name: str, ln: bool | None = None):
        self.algebra = algebra
        self.func = func
        self.name = name
        self._ln = ln
        self.cache = {}

    def __call__(self, a):
        if a.algebra != self.algebra:
            raise AlgebraMismatch("operator and element live in different algebras")
        return self.func(a)

    def __repr__(self):
        return f"FunctionOp({self.name})"

    def ln_status(self) -> bool | None:
        return self._ln

    def describe(self) -> str:
        return self.name


def iteration_bound(algebra) -> int:
    """Number of applications after which a locally nilpotent operator must vanish
    on any element (degree-lowering operators for B[t])."""
    if isinstance(algebra, FinDimAlgebra):
        return algebra.dim
    if isinstance(algebra, PolyExtAlgebra):
        return algebra.degree_cap + 1
    raise InputError(f"unsupported algebra {algebra!r}")


def orbit(T, a, bound: int | None = None) -> list:
    """``[a, T a, T^2 a, ...]`` up to (excluding) the first zero.

    Raises NotLocallyNilpotent if no zero appears within the iteration bound.
    """
    if T.ln_status() is False:
        raise NotLocallyNilpotent(f"{describe_op(T)} is not locally nilpotent")
    if bound is None:
        bound = iteration_bound(T.algebra)
    out = []
    x = a
    for _ in range(bound + 1):
        if x.is_zero():
            return out
        out.append(x)
        x = T(x)
    raise NotLocallyNilpotent(f"{describe_op(T)} did not annihilate the element within {bound} steps")


def power_apply(T, a, k: int):
    for _ in range(k):
        a = T(a)
    return a


def describe_op(T):
    if isinstance(T, PolyOp):
        return T.describe()
    if isinstance(T, LinearMap):
        return T.name
    return getattr(T, "name", repr(T))


def materialize(T, algebra=None) -> LinearMap:
    """Turn any operator on a finite-dimensional algebra into a LinearMap."""
    if isinstance(T, LinearMap):
        return T
    algebra = algebra or T.algebra
    if not isinstance(algebra, FinDimAlgebra):
        raise InputError("only operators on finite-dimensional algebras have matrices")
    return LinearMap.from_function(algebra, T, getattr(T, "name", "T"))


def inner_derivation(x: AlgElem) -> LinearMap:
    """ad_x : a -> x a - a x."""
    A = x.algebra
    return LinearMap.from_function(A, lambda a: x * a - a * x, "ad")


def identity_minus(T) -> "LinearMap | FunctionOp":
    if isinstance(T, LinearMap):
        return LinearMap(T.algebra, Mat.identity(T.algebra.dim) - T.matrix, f"I-{T.name}")
    if isinstance(T, PolyOp) and T.kind == "shift_endo":
        return PolyOp(T.algebra, "composite", T.c)
    if isinstance(T, PolyOp) and T.kind == "composite":
        return PolyOp(T.algebra, "shift_endo", T.c)
    return FunctionOp(T.algebra, lambda a: a - T(a), f"I-({describe_op(T)})")
