"""Exact scalars, univariate polynomials, truncated power series and Q(sqrt)."""

from __future__ import annotations

from fractions import Fraction
from math import comb, gcd, isqrt
from typing import Iterable, Sequence

from .errors import InputError, ZeroPolynomial

Rational = Fraction


def q(x) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` string to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"not a rational: {x!r}") from exc
    raise InputError(f"not a rational: {x!r}")


def q_str(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


class UniPoly:
    """Polynomial in one variable over Q, coefficients lowest degree first.

    The zero polynomial has no coefficients; otherwise the last coefficient
    is nonzero.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [q(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("UniPoly is immutable")

    @classmethod
    def monomial(cls, k: int, c=1) -> "UniPoly":
        return cls([0] * k + [c])

    @classmethod
    def from_roots(cls, roots: Iterable) -> "UniPoly":
        p = cls([1])
        for r in roots:
            p = p * cls([-q(r), 1])
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = UniPoly([other])
        if not isinstance(other, UniPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(("UniPoly", self.coeffs))

    def __repr__(self):
        return f"UniPoly({self})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mono = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
            mag = abs(c)
            if mono and mag == 1:
                body = mono
            elif mono:
                body = f"{q_str(mag)}*{mono}"
            else:
                body = q_str(mag)
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __add__(self, other):
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return UniPoly(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return UniPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        other = _as_poly(other)
        if not self.coeffs or not other.coeffs:
            return UniPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = UniPoly([1])
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __divmod__(self, other):
        other = _as_poly(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        quo = [Fraction(0)] * max(len(rem) - dq, 0)
        inv_lc = 1 / other.lc
        for k in range(len(rem) - 1, dq - 1, -1):
            c = rem[k] * inv_lc
            if c == 0:
                continue
            quo[k - dq] = c
            for j, b in enumerate(other.coeffs):
                rem[k - dq + j] -= c * b
        return UniPoly(quo), UniPoly(rem)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def derivative(self) -> "UniPoly":
        return UniPoly(k * c for k, c in enumerate(self.coeffs) if k > 0)

    def monic(self) -> "UniPoly":
        if self.is_zero():
            return self
        inv = 1 / self.lc
        return UniPoly(c * inv for c in self.coeffs)

    def __call__(self, x, one=None):
        """Horner evaluation; ``x`` may be anything with ``+`` and ``*``.

        For non-scalar arguments pass ``one`` (the multiplicative identity).
        """
        if one is None:
            one = Fraction(1)
        acc = one * Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + one * c
        return acc

    def compose(self, inner: "UniPoly") -> "UniPoly":
        acc = UniPoly()
        for c in reversed(self.coeffs):
            acc = acc * inner + UniPoly([c])
        return acc

    def to_json(self) -> list:
        return [q_str(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data) -> "UniPoly":
        return cls(q(c) for c in data)


def _as_poly(x) -> UniPoly:
    if isinstance(x, UniPoly):
        return x
    return UniPoly([q(x)])


def poly_gcd(p: UniPoly, r: UniPoly) -> UniPoly:
    """Monic gcd; ``gcd(0, 0) = 0``."""
    a, b = p, r
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def poly_xgcd(p: UniPoly, r: UniPoly) -> tuple[UniPoly, UniPoly, UniPoly]:
    """Return ``(g, u, v)`` with ``u*p + v*r = g`` and ``g`` monic."""
    r0, r1 = p, r
    s0, s1 = UniPoly([1]), UniPoly()
    t0, t1 = UniPoly(), UniPoly([1])
    while not r1.is_zero():
        quo, rem = divmod(r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, s0 - quo * s1
        t0, t1 = t1, t0 - quo * t1
    if r0.is_zero():
        return r0, s0, t0
    inv = 1 / r0.lc
    return r0.monic(), s0 * inv, t0 * inv


def poly_lcm(p: UniPoly, r: UniPoly) -> UniPoly:
    if p.is_zero() or r.is_zero():
        return UniPoly()
    return (p * r // poly_gcd(p, r)).monic()


def poly_inverse_mod(p: UniPoly, m: UniPoly) -> UniPoly:
    g, u, _ = poly_xgcd(p % m, m)
    if g != UniPoly([1]):
        raise InputError(f"{p} is not invertible modulo {m}")
    return u % m


def squarefree_part(p: UniPoly) -> UniPoly:
    if p.is_zero():
        raise ZeroPolynomial("squarefree part of the zero polynomial")
    return (p // poly_gcd(p, p.derivative())).monic()


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    for d in range(1, isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
    return small + large[::-1]


def primitive_integer_form(p: UniPoly) -> list[int]:
    den = 1
    for c in p.coeffs:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in p.coeffs]
    content = 0
    for c in ints:
        content = gcd(content, c)
    return [c // content for c in ints]


def rational_roots(p: UniPoly) -> list[Fraction]:
    """Distinct rational roots, ascending, by the rational-root theorem."""
    if p.is_zero():
        raise ZeroPolynomial("roots of the zero polynomial")
    ints = primitive_integer_form(p)
    roots = set()
    # strip factors of t
    k = 0
    while ints[k] == 0:
        k += 1
    if k:
        roots.add(Fraction(0))
    ints = ints[k:]
    if len(ints) > 1:
        reduced = UniPoly(ints)
        for num in _divisors(ints[0]):
            for den in _divisors(ints[-1]):
                for cand in (Fraction(num, den), Fraction(-num, den)):
                    if cand not in roots and reduced(cand) == 0:
                        roots.add(cand)
    return sorted(roots)


class TruncSeries:
    """Formal power series truncated at a fixed order ``N`` (degrees 0..N)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence, order: int):
        if order < 0:
            raise InputError("truncation order must be >= 0")
        cs = [q(c) for c in coeffs[: order + 1]]
        cs += [Fraction(0)] * (order + 1 - len(cs))
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("TruncSeries is immutable")

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def from_poly(cls, p: UniPoly, order: int) -> "TruncSeries":
        return cls(p.coeffs, order)

    def _check(self, other):
        if not isinstance(other, TruncSeries) or other.order != self.order:
            raise InputError("series of different truncation orders")

    def __add__(self, other):
        self._check(other)
        return TruncSeries([a + b for a, b in zip(self.coeffs, other.coeffs)], self.order)

    def __sub__(self, other):
        self._check(other)
        return TruncSeries([a - b for a, b in zip(self.coeffs, other.coeffs)], self.order)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return TruncSeries([c * other for c in self.coeffs], self.order)
        self._check(other)
        n = self.order
        out = [Fraction(0)] * (n + 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j in range(n + 1 - i):
                out[i + j] += a * other.coeffs[j]
        return TruncSeries(out, n)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(("TruncSeries", self.coeffs))

    def __repr__(self):
        return f"TruncSeries({[q_str(c) for c in self.coeffs]}, order={self.order})"


def series_identity_check(i: int, order: int) -> bool:
    """(1-t)^i * sum_{n=i}^{N+i} C(n,i)/n * t^(n-i) == 1/i up to order N."""
    if i < 1 or order < i:
        raise InputError("need i >= 1 and N >= i")
    tail = TruncSeries([Fraction(comb(n, i), n) for n in range(i, order + i + 1)], order)
    factor = TruncSeries.from_poly(UniPoly([1, -1]) ** i, order)
    return factor * tail == TruncSeries([Fraction(1, i)], order)


class QuadExtElem:
    """Element ``a + b*theta`` of Q[theta]/(modulus), modulus monic of degree 2.

    Interoperates with ints and Fractions (embedded as ``b = 0``).
    """

    __slots__ = ("a", "b", "modulus")

    def __init__(self, a, b=0, modulus: UniPoly | None = None):
        if modulus is None:
            modulus = SQRT2_MODULUS
        object.__setattr__(self, "a", q(a))
        object.__setattr__(self, "b", q(b))
        object.__setattr__(self, "modulus", modulus)

    def __setattr__(self, name, value):
        raise AttributeError("QuadExtElem is immutable")

    # theta^2 = -p*theta - r  for modulus t^2 + p t + r
    def _pr(self):
        r, p, _ = self.modulus.coeffs
        return p, r

    def _lift(self, other) -> "QuadExtElem":
        if isinstance(other, QuadExtElem):
            if other.modulus != self.modulus:
                raise InputError("mixing different quadratic extensions")
            return other
        return QuadExtElem(q(other), 0, self.modulus)

    def __add__(self, other):
        o = self._lift(other)
        return QuadExtElem(self.a + o.a, self.b + o.b, self.modulus)

    __radd__ = __add__

    def __neg__(self):
        return QuadExtElem(-self.a, -self.b, self.modulus)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        p, r = self._pr()
        bb = self.b * o.b
        return QuadExtElem(
            self.a * o.a - r * bb,
            self.a * o.b + self.b * o.a - p * bb,
            self.modulus,
        )

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        p, r = self._pr()
        return self.a * self.a - p * self.a * self.b + r * self.b * self.b

    def inverse(self) -> "QuadExtElem":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in quadratic extension")
        p, _ = self._pr()
        return QuadExtElem((self.a - p * self.b) / n, -self.b / n, self.modulus)

    def __truediv__(self, other):
        return self * self._lift(other).inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        if isinstance(other, QuadExtElem):
            return (self.a, self.b, self.modulus) == (other.a, other.b, other.modulus)
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.modulus))

    def __repr__(self):
        return f"QuadExtElem({q_str(self.a)}, {q_str(self.b)})"


SQRT2_MODULUS = UniPoly([-2, 0, 1])


def check_quadratic_modulus(m: UniPoly) -> UniPoly:
    if m.degree != 2 or m.lc != 1:
        raise InputError("modulus must be monic of degree 2")
    if rational_roots(m):
        raise InputError(f"modulus {m} is reducible over Q")
    return m
