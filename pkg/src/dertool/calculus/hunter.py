"""Seeded random searches for counterexamples to the corollaries.

Every trial draws a small algebra from a fixed family and a random operator on
it, then checks one statement exactly. Trials are independent: trial ``i`` uses
its own generator seeded from ``sha256(f"{seed}:{i}")``, so reports are
reproducible and do not depend on execution order.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass
from fractions import Fraction

from ..algebra import (
    FinDimAlgebra,
    central_idempotents,
    direct_sum,
    is_idempotent,
    matrix_algebra,
    nonunital_nilpotent,
    product_of_q,
    spectral_idempotents,
    truncated_poly,
    upper_triangular,
)
from ..arith import q_str
from ..errors import DertoolError, NotSplit
from ..linalg import (
    Mat,
    image_basis,
    in_span,
    jordan_chevalley,
    nullspace,
    solvability_transfer_check,
    solve_linear,
    subspaces_equal,
)
from ..operators import LinearMap, identity_minus
from .classify import classify, derivation_space
from .correspondence import e_leibniz_sides, exp_operator, lambda_operator, xi_operator

MODES = ("central_idem_kernel", "no_idem_in_ker_and_im", "roundtrip", "transfer", "surjectivity", "grading")


def trial_rng(seed: int, index: int) -> random.Random:
    digest = hashlib.sha256(f"{seed}:{index}".encode()).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


# --- the algebra family -----------------------------------------------------------


@dataclass
class Sample:
    algebra: FinDimAlgebra
    characters: list  # algebra homomorphisms A -> Q, as functions of the coefficient vector


def _diag_chars(A: FinDimAlgebra, names) -> list:
    return [(lambda v, k=A.index(nm): v[k]) for nm in names]


def _qn(n):
    A = product_of_q(n)
    return Sample(A, _diag_chars(A, A.basis))


def _trunc(n):
    return Sample(truncated_poly(n), [lambda v: v[0]])


def _tri(n):
    A = upper_triangular(n)
    return Sample(A, _diag_chars(A, [f"E{i}{i}" for i in range(1, n + 1)]))


def _mat2():
    return Sample(matrix_algebra(2), [])


def _sum(a: Sample, b: Sample) -> Sample:
    A = direct_sum(a.algebra, b.algebra)
    n = a.algebra.dim
    chars = [(lambda v, c=c: c(v[:n])) for c in a.characters]
    chars += [(lambda v, c=c: c(v[n:])) for c in b.characters]
    return Sample(A, chars)


FAMILY = {
    "QxQ": lambda: _qn(2),
    "QxQxQ": lambda: _qn(3),
    "dual": lambda: _trunc(2),
    "trunc3": lambda: _trunc(3),
    "T2": lambda: _tri(2),
    "T3": lambda: _tri(3),
    "M2": _mat2,
    "dual+dual": lambda: _sum(_trunc(2), _trunc(2)),
    "dual+T2": lambda: _sum(_trunc(2), _tri(2)),
    "Q+trunc3": lambda: _sum(_qn(1), _trunc(3)),
    "T2+Q": lambda: _sum(_tri(2), _qn(1)),
    "xQ[x]/x^4": lambda: Sample(nonunital_nilpotent(3), []),
}
FAMILY_NAMES = sorted(FAMILY)
# modes that need a unit (idempotent searches, unit orbits) draw from these
UNITAL_NAMES = [n for n in FAMILY_NAMES if n != "xQ[x]/x^4"]

_CACHE: dict = {}


def family_sample(name: str) -> Sample:
    if name not in _CACHE:
        _CACHE[name] = FAMILY[name]()
    return _CACHE[name]


def _der_basis(A: FinDimAlgebra) -> list:
    key = ("der", A._key())
    if key not in _CACHE:
        _CACHE[key] = derivation_space(A)
    return _CACHE[key]


# --- random operators -------------------------------------------------------------------


def random_derivation(A: FinDimAlgebra, rng) -> LinearMap:
    M = Mat.zero(A.dim)
    for B in _der_basis(A):
        M = M + B.matrix * rng.randint(-3, 3)
    return LinearMap(A, M, "D")


def random_ln_derivation(A: FinDimAlgebra, rng) -> LinearMap:
    """Nilpotent Jordan-Chevalley part of a random derivation (again a derivation)."""
    D = random_derivation(A, rng)
    return LinearMap(A, jordan_chevalley(D.matrix).nilpotent, "Dn")


def _random_unit(A: FinDimAlgebra, rng):
    for _ in range(20):
        g = A.one() + A.random_element(rng, -2, 2)
        ginv = solve_linear(A.left_mult_matrix(g), A.one().coeffs)
        if ginv is not None:
            ginv = A.element(ginv)
            if ginv * g == A.one():
                return g, ginv
    return A.one(), A.one()


def _orthogonal_idempotents(A: FinDimAlgebra, rng) -> list:
    for _ in range(3):
        prims = spectral_idempotents(A.random_element(rng, -4, 4))
        if len(prims) > 1:
            return prims
    return [A.one()]


def random_endomorphism(sample: Sample, rng) -> LinearMap:
    """One of: zero, identity, inner automorphism, exp of an LN derivation, a map
    a -> sum_j chi_j(a) p_j through characters onto orthogonal idempotents, or a
    composite of two of these."""
    A = sample.algebra
    kinds = ["zero", "identity", "inner", "exp", "composite"]
    if sample.characters:
        kinds += ["characters", "characters"]
    kind = rng.choice(kinds)
    if kind == "zero":
        return LinearMap.zero(A)
    if kind == "identity":
        return LinearMap.identity(A)
    if kind == "inner":
        g, ginv = _random_unit(A, rng)
        return LinearMap.from_function(A, lambda a: g * a * ginv, "inner")
    if kind == "exp":
        return exp_operator(random_ln_derivation(A, rng))
    if kind == "characters":
        prims = _orthogonal_idempotents(A, rng)
        chosen = [(p, rng.choice(sample.characters)) for p in prims if rng.random() < 0.7]

        def f(a):
            acc = A.zero()
            for p, chi in chosen:
                acc = acc + p * chi(a.coeffs)
            return acc

        return LinearMap.from_function(A, f, "chars")
    first = random_endomorphism(sample, rng)
    second = random_endomorphism(sample, rng)
    return LinearMap(A, first.matrix * second.matrix, "composite")


def random_ln_ederivation(A: FinDimAlgebra, rng) -> LinearMap:
    return xi_operator(random_ln_derivation(A, rng))


# --- reporting ----------------------------------------------------------------------------


def _mat_json(T: LinearMap):
    return T.matrix.to_json()


@dataclass
class TrialResult:
    index: int
    ok: bool
    checks: int
    info: dict


def _run(mode, seed, trials, body) -> dict:
    results = [body(i, trial_rng(seed, i)) for i in range(trials)]
    results.sort(key=lambda r: r.index)
    violations = [dict(r.info, trial=r.index) for r in results if not r.ok]
    skipped = sum(1 for r in results if r.info.get("skipped"))
    return {
        "mode": mode,
        "seed": seed,
        "trials": trials,
        "passes": sum(1 for r in results if r.ok and not r.info.get("skipped")),
        "skipped": skipped,
        "checks": sum(r.checks for r in results),
        "violations": violations,
    }


def _pick(rng, unital: bool = True) -> tuple[str, Sample]:
    name = rng.choice(UNITAL_NAMES if unital else FAMILY_NAMES)
    return name, family_sample(name)


# --- modes ------------------------------------------------------------------------------


def _central_idem_kernel(i, rng):
    name, S = _pick(rng)
    A = S.algebra
    ops = [random_derivation(A, rng), random_ln_ederivation(A, rng)]
    checks = 0
    for e in central_idempotents(A, rng):
        for T in ops:
            checks += 1
            if not T(e).is_zero():
                return TrialResult(i, False, checks, {"algebra": name, "operator": _mat_json(T), "idempotent": [q_str(c) for c in e.coeffs]})
    return TrialResult(i, True, checks, {"algebra": name})


def _kernel_idempotents(T: LinearMap, rng, samples: int = 4) -> list:
    """Idempotents of the subalgebra ker T found spectrally from random kernel elements."""
    A = T.algebra
    K = nullspace(T.matrix)
    found = {A.one().coeffs} if T(A.one()).is_zero() else set()
    for _ in range(samples):
        z = A.zero()
        for v in K:
            z = z + A.element(v) * rng.randint(-5, 5)
        prims = spectral_idempotents(z)
        for mask in range(1, 2 ** len(prims)):
            e = A.zero()
            for k, p in enumerate(prims):
                if mask >> k & 1:
                    e = e + p
            found.add(e.coeffs)
    for c in central_idempotents(A, rng, samples=2):
        found.add(c.coeffs)
    return [A.element(c) for c in sorted(found)]


def _no_idem_in_ker_and_im(i, rng):
    name, S = _pick(rng)
    A = S.algebra
    T = random_ln_derivation(A, rng) if rng.random() < 0.5 else random_ln_ederivation(A, rng)
    im = image_basis(T.matrix)
    checks = 0
    for e in _kernel_idempotents(T, rng):
        if e.is_zero() or not is_idempotent(e) or not T(e).is_zero():
            continue
        checks += 1
        if in_span(e.coeffs, im, A.dim):
            return TrialResult(i, False, checks, {"algebra": name, "operator": _mat_json(T), "idempotent": [q_str(c) for c in e.coeffs]})
    return TrialResult(i, True, checks, {"algebra": name})


def roundtrip_checks(A: FinDimAlgebra, D: LinearMap, rng, pairs: int = 10, leibniz_n: int = 5) -> tuple[list, int]:
    """All exact checks of one roundtrip trial; returns (failed check names, count)."""
    failed = []
    n = A.dim
    delta = xi_operator(D)
    checks = 0

    def check(label, ok):
        nonlocal checks
        checks += 1
        if not ok:
            failed.append(label)

    check("log_xi", lambda_operator(delta).matrix == D.matrix)
    check("xi_log", xi_operator(lambda_operator(delta)).matrix == delta.matrix)
    check("kernel", subspaces_equal(nullspace(D.matrix), nullspace(delta.matrix), n))
    check("image", subspaces_equal(image_basis(D.matrix), image_basis(delta.matrix), n))
    E = exp_operator(D)
    for _ in range(pairs):
        a, b = A.random_element(rng), A.random_element(rng)
        check("exp_multiplicative", E(a * b) == E(a) * E(b))
    a, b = A.random_element(rng), A.random_element(rng)
    for k in range(leibniz_n + 1):
        lhs, rhs = e_leibniz_sides(delta, a, b, k)
        check("e_leibniz", lhs == rhs)
    return failed, checks


def _roundtrip(i, rng, pairs=10):
    name, S = _pick(rng, unital=False)
    A = S.algebra
    D = random_ln_derivation(A, rng)
    failed, checks = roundtrip_checks(A, D, rng, pairs)
    if failed:
        return TrialResult(i, False, checks, {"algebra": name, "operator": _mat_json(D), "failed": failed})
    return TrialResult(i, True, checks, {"algebra": name})


def _random_matrix(rng, rows, cols):
    rank_cap = rng.randint(0, min(rows, cols))
    # low-rank products make inconsistent and consistent systems equally likely
    L = Mat.from_rows([[rng.randint(-3, 3) for _ in range(rank_cap)] for _ in range(rows)]) if rank_cap else None
    R = Mat.from_rows([[rng.randint(-3, 3) for _ in range(cols)] for _ in range(rank_cap)]) if rank_cap else None
    return L * R if rank_cap else Mat.zero(rows, cols)


def _transfer(i, rng):
    rows, cols = rng.randint(1, 4), rng.randint(1, 4)
    M = _random_matrix(rng, rows, cols)
    if rng.random() < 0.5:
        x = [rng.randint(-3, 3) for _ in range(cols)]
        y = list(M.apply([Fraction(v) for v in x]))
    else:
        y = [Fraction(rng.randint(-3, 3)) for _ in range(rows)]
    ok = solvability_transfer_check(M, y)
    info = {"rows": rows, "cols": cols}
    if not ok:
        info.update(matrix=M.to_json(), rhs=[q_str(v) for v in y])
    return TrialResult(i, ok, 1, info)


def _surjectivity(i, rng):
    from .surjectivity import surjectivity_analysis, unit_orbit

    name, S = _pick(rng)
    A = S.algebra
    phi = random_endomorphism(S, rng)
    info = {"algebra": name, "phi": _mat_json(phi)}
    if not classify(phi).is_endomorphism:
        return TrialResult(i, False, 1, dict(info, failed="generator produced a non-endomorphism"))
    try:
        orb = unit_orbit(phi, A)
        rep = surjectivity_analysis(identity_minus(phi), A)
    except DertoolError as exc:
        return TrialResult(i, False, 1, dict(info, failed=f"{type(exc).__name__}: {exc}"))
    if orb.d > A.dim + 1:
        return TrialResult(i, False, 1, dict(info, failed="late stabilization"))
    return TrialResult(i, True, 2, {"algebra": name, "status": rep.status, "branch": orb.branch, "d": orb.d})


def _grading(i, rng):
    from .grading import image_decomposition

    name, S = _pick(rng, unital=False)
    A = S.algebra
    if rng.random() < 0.5 or not A.is_unital:
        T, kind = random_derivation(A, rng), "derivation"
    else:
        T, kind = identity_minus(random_endomorphism(S, rng)), "ederivation"
    try:
        image_decomposition(T, kind, A)
    except NotSplit:
        return TrialResult(i, True, 0, {"algebra": name, "skipped": "spectrum not split over Q"})
    except DertoolError as exc:
        return TrialResult(i, False, 1, {"algebra": name, "kind": kind, "operator": _mat_json(T), "failed": f"{type(exc).__name__}: {exc}"})
    return TrialResult(i, True, 1, {"algebra": name, "kind": kind})


_BODIES = {
    "central_idem_kernel": _central_idem_kernel,
    "no_idem_in_ker_and_im": _no_idem_in_ker_and_im,
    "roundtrip": _roundtrip,
    "transfer": _transfer,
    "surjectivity": _surjectivity,
    "grading": _grading,
}


def hunter(mode: str, seed: int = 0, trials: int = 100) -> dict:
    if mode not in _BODIES:
        from ..errors import InputError

        raise InputError(f"unknown hunter mode {mode!r}; choose from {list(MODES)}")
    if trials < 0:
        from ..errors import InputError

        raise InputError("trials must be non-negative")
    return _run(mode, seed, trials, _BODIES[mode])
