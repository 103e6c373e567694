"""Exponential / logarithm correspondence between LN derivations and LN E-derivations.

All sums are finite: they stop at the first vanishing power on the element.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, factorial

from ..algebra import FinDimAlgebra
from ..errors import NotLocallyNilpotent
from ..operators import FunctionOp, LinearMap, describe_op, identity_minus, orbit, power_apply
from ..polyext import PolyOp
from .classify import require_ederivation


def _require_ln(T):
    if T.ln_status() is False:
        raise NotLocallyNilpotent(f"{describe_op(T)} is not locally nilpotent")


def exp_apply(D, a):
    """e^D (a) = sum_k D^k(a) / k!."""
    _require_ln(D)
    acc = a.algebra.zero()
    for k, x in enumerate(orbit(D, a)):
        acc = acc + x * Fraction(1, factorial(k))
    return acc


def xi_map(D, a):
    """(I - e^D)(a)."""
    return a - exp_apply(D, a)


def lambda_map(delta, a):
    """ln(I - delta)(a) = -sum_{k>=1} delta^k(a) / k."""
    _require_ln(delta)
    acc = a.algebra.zero()
    for k, x in enumerate(orbit(delta, a)):
        if k:
            acc = acc - x * Fraction(1, k)
    return acc


def _derived(T, func, name):
    if isinstance(T.algebra, FinDimAlgebra):
        op = LinearMap.from_function(T.algebra, func, name)
        return op
    return FunctionOp(T.algebra, func, name, ln=True)


def xi_operator(D):
    """The E-derivation I - e^D (a matrix on finite-dim algebras)."""
    _require_ln(D)
    return _derived(D, lambda a: xi_map(D, a), f"xi({describe_op(D)})")


def exp_operator(D):
    _require_ln(D)
    op = _derived(D, lambda a: exp_apply(D, a), f"exp({describe_op(D)})")
    if isinstance(op, FunctionOp):
        op._ln = False
    return op


def lambda_operator(delta):
    """The derivation ln(I - delta)."""
    _require_ln(delta)
    return _derived(delta, lambda a: lambda_map(delta, a), f"log({describe_op(delta)})")


def _g_apply(D, a):
    # G = D * sum_{n>=2} D^(n-2)/n!  (so h(D) = -I - G)
    acc = a.algebra.zero()
    for k, x in enumerate(orbit(D, a)):
        if k >= 1:
            acc = acc + x * Fraction(1, factorial(k + 1))
    return acc


def h_apply(D, a):
    """h(D)(a) with I - e^D = D h(D)."""
    return -a - _g_apply(D, a)


def h_inverse_apply(D, a):
    """h(D)^-1 (a) as sum_k G^k F^(-k-1) with F = -I."""
    _require_ln(D)
    acc = a.algebra.zero()
    x = a
    sign = -1
    bound = 4 * (orbit_length_bound(D) + 1)
    for _ in range(bound):
        if x.is_zero():
            return acc
        acc = acc + x * sign
        x = _g_apply(D, x)
        sign = -sign
    raise NotLocallyNilpotent("h(D)^-1 series did not terminate")


def orbit_length_bound(D) -> int:
    from ..operators import iteration_bound

    return iteration_bound(D.algebra)


def e_leibniz_sides(delta, a, b, n: int):
    """Both sides of delta^n(ab) = sum_i C(n,i) delta^i(a) delta^(n-i)((I-delta)^i(b))."""
    lhs = power_apply(delta, a * b, n)
    phi = identity_minus(delta)
    rhs = a.algebra.zero()
    for i in range(n + 1):
        rhs = rhs + (power_apply(delta, a, i) * power_apply(delta, power_apply(phi, b, i), n - i)) * comb(n, i)
    return lhs, rhs


def e_leibniz_check(delta, a, b, n: int, check: bool = True) -> bool:
    if check:
        require_ederivation(delta)
    lhs, rhs = e_leibniz_sides(delta, a, b, n)
    return lhs == rhs


def scaled_derivative_for(delta):
    """For delta = I - shift(c) on B[t], the built-in c*d/dt (used for cross-checks)."""
    if isinstance(delta, PolyOp) and delta.kind == "composite":
        return PolyOp(delta.algebra, "coefficient_derivative", delta.c)
    return None


def operators_agree(S, T, elements) -> bool:
    return all(S(a) == T(a) for a in elements)

