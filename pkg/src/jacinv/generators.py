"""Polynomial automorphisms with known exact inverses.

Three families: tame compositions of linear and elementary steps, two-variable
pairs with ``g`` linear (inverted in closed form by ``invert_special_42``),
and rank-one cubic maps ``x - c (ell . x)^3`` with ``ell ⊥ c``.

All random generators draw from a single ``random.Random`` seeded once.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

from .errors import InvalidStep, NonConstantJacobian, OrthogonalityViolated
from .inverter import verify_inverse
from .jacobi import check_jacobi, require_unit_jacobian
from .matrix import RationalMatrix
from .poly import PolyMap, Polynomial
from .blocks import monomials

DEFAULT_MAX_STEPS = 4
DEFAULT_STEP_DEGREE = 3
DEFAULT_COEFF_BOUND = 5


@dataclass(frozen=True)
class ElementaryStep:
    """``x_target := x_target + shift(x)``, with ``shift`` free of ``x_target``."""

    target: int
    shift: Polynomial


@dataclass(frozen=True)
class LinearStep:
    matrix: RationalMatrix


Step = Union[ElementaryStep, LinearStep]


@dataclass(frozen=True)
class TameProgram:
    """Steps applied first to last: ``F = S_k ∘ ... ∘ S_1``."""

    num_vars: int
    steps: tuple[Step, ...] = field(default_factory=tuple)
    seed: int | None = None


def _step_maps(step: Step, n: int) -> tuple[PolyMap, PolyMap, Fraction]:
    if isinstance(step, ElementaryStep):
        i, p = step.target, step.shift
        if not 0 <= i < n:
            raise InvalidStep(f"target variable {i} out of range")
        if p.num_vars != n:
            raise InvalidStep("shift polynomial has the wrong variable count")
        if i in p.variables():
            raise InvalidStep(f"shift polynomial mentions its target variable x{i + 1}")
        if p.constant_term:
            raise InvalidStep("shift polynomial must not have a constant term")
        xs = [Polynomial.variable(n, k) for k in range(n)]
        fwd = list(xs)
        back = list(xs)
        fwd[i] = xs[i] + p
        back[i] = xs[i] - p
        return PolyMap(fwd), PolyMap(back), Fraction(1)
    L = step.matrix
    if L.shape != (n, n):
        raise InvalidStep("linear step has the wrong shape")
    det = L.det()
    if det == 0:
        raise InvalidStep("linear step is singular")
    return PolyMap.from_matrix(L), PolyMap.from_matrix(L.inverse()), det


def realize_tame(prog: TameProgram) -> tuple[PolyMap, PolyMap, Fraction]:
    """Return ``(F, G_true, M)`` with ``G_true ∘ F = id`` and ``det J_F = M``."""
    n = prog.num_vars
    F = PolyMap.identity(n)
    G = PolyMap.identity(n)
    M = Fraction(1)
    for step in prog.steps:
        fwd, back, det = _step_maps(step, n)
        F = fwd.compose(F)
        G = G.compose(back)
        M *= det
    return F, G, M


# -- random tame programs ---------------------------------------------------

def _random_coeff(rng: random.Random, bound: int) -> int:
    c = 0
    while c == 0:
        c = rng.randint(-bound, bound)
    return c


def random_unimodular(rng: random.Random, n: int, bound: int = 2, shears: int | None = None) -> RationalMatrix:
    """Integer matrix with det ±1: a permutation times ``shears`` random shears (default ``n``)."""
    perm = list(range(n))
    rng.shuffle(perm)
    rows = [[1 if perm[i] == j else 0 for j in range(n)] for i in range(n)]
    for _ in range(shears if shears is not None else n):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if i == j:
            continue
        c = rng.randint(-bound, bound)
        rows[i] = [a + c * b for a, b in zip(rows[i], rows[j])]
    return RationalMatrix(rows)


def random_linear(rng: random.Random, n: int, bound: int = 2, scaled: bool = False) -> RationalMatrix:
    """Unimodular matrix, optionally times a diagonal of small rationals."""
    L = random_unimodular(rng, n, bound)
    if not scaled:
        return L
    diag = [Fraction(_random_coeff(rng, 3), rng.randint(1, 3)) for _ in range(n)]
    return RationalMatrix([[diag[i] * L[i, j] for j in range(n)] for i in range(n)])


def random_shift(rng: random.Random, n: int, target: int, max_degree: int,
                 coeff_bound: int = DEFAULT_COEFF_BOUND, max_terms: int = 2) -> Polynomial:
    """Nonzero polynomial in the variables other than ``target``, degree 2..max_degree."""
    others = [k for k in range(n) if k != target]
    candidates = []
    for d in range(2, max_degree + 1):
        for m in monomials(len(others), d):
            e = [0] * n
            for k, v in zip(others, m):
                e[k] = v
            candidates.append(tuple(e))
    count = rng.randint(1, min(max_terms, len(candidates)))
    chosen = rng.sample(candidates, count)
    return Polynomial(n, {e: _random_coeff(rng, coeff_bound) for e in chosen})


def random_tame_program(num_vars: int, seed: int, *, max_steps: int = DEFAULT_MAX_STEPS,
                        max_step_degree: int = DEFAULT_STEP_DEGREE,
                        coeff_bound: int = DEFAULT_COEFF_BOUND, scaled: bool = False,
                        rng: random.Random | None = None) -> TameProgram:
    """A random program of 1..max_steps elementary steps between linear steps."""
    if num_vars < 2:
        raise ValueError("tame programs need at least two variables")
    rng = rng or random.Random(seed)
    steps: list[Step] = [LinearStep(random_linear(rng, num_vars, scaled=scaled))]
    for _ in range(rng.randint(1, max_steps)):
        target = rng.randrange(num_vars)
        degree = rng.randint(2, max_step_degree)
        steps.append(ElementaryStep(target, random_shift(rng, num_vars, target, degree, coeff_bound)))
    steps.append(LinearStep(random_linear(rng, num_vars, scaled=scaled)))
    return TameProgram(num_vars, tuple(steps), seed)


def sample_tame(num_vars: int, seed: int, *, max_degree: int = 5, **kwargs) -> tuple[TameProgram, PolyMap, PolyMap, Fraction]:
    """Draw programs from one seeded stream until both ``F`` and its inverse have degree ≤ max_degree."""
    rng = random.Random(seed)
    while True:
        prog = random_tame_program(num_vars, seed, rng=rng, **kwargs)
        F, G, M = realize_tame(prog)
        if F.degree <= max_degree and G.degree <= max_degree:
            return prog, F, G, M


def quadratic_tame_program(seed: int) -> TameProgram:
    """``L1 ∘ E ∘ L2`` in two variables with det-1 linear steps and one quadratic shift."""
    rng = random.Random(seed)
    target = rng.randrange(2)
    e = [0, 0]
    e[1 - target] = 2
    shift = Polynomial(2, {tuple(e): _random_coeff(rng, DEFAULT_COEFF_BOUND)})
    L2 = random_det_one(rng, 2)
    L1 = random_det_one(rng, 2)
    return TameProgram(2, (LinearStep(L2), ElementaryStep(target, shift), LinearStep(L1)), seed)


def random_det_one(rng: random.Random, n: int) -> RationalMatrix:
    L = random_unimodular(rng, n)
    if L.det() == -1:
        L = RationalMatrix([[-x for x in L.row(0)]] + [list(L.row(i)) for i in range(1, n)])
    return L


# -- rank-one cubic maps ----------------------------------------------------

def bcw_rank_one_pair(n: int, ell: Sequence, c: Sequence) -> tuple[PolyMap, PolyMap]:
    """``u = x - c (ell·x)^3`` and its inverse ``x = u + c (ell·u)^3``."""
    if len(ell) != n or len(c) != n:
        raise ValueError("ell and c must have length n")
    ell = [Fraction(v) for v in ell]
    c = [Fraction(v) for v in c]
    if sum(a * b for a, b in zip(ell, c)) != 0:
        raise OrthogonalityViolated("ell and c must be orthogonal")
    cube = Polynomial.linear_form(ell) ** 3
    xs = [Polynomial.variable(n, i) for i in range(n)]
    F = PolyMap([xs[i] - cube.scale(c[i]) for i in range(n)])
    G = PolyMap([xs[i] + cube.scale(c[i]) for i in range(n)])
    return F, G


def gen_bcw_rank_one(n: int, ell: Sequence, c: Sequence) -> PolyMap:
    F, G = bcw_rank_one_pair(n, ell, c)
    if not verify_inverse(F, G):
        raise AssertionError("rank-one cubic inverse failed verification")
    return F


def random_bcw_rank_one(n: int, seed: int, bound: int = 3) -> tuple[list[int], list[int]]:
    """Random integer ``ell, c`` with ``ell ⊥ c`` and ``c != 0``."""
    if n < 2:
        raise ValueError("need at least two variables")
    rng = random.Random(seed)
    while True:
        ell = [rng.randint(-bound, bound) for _ in range(n)]
        if not any(ell):
            continue
        c = [0] * n
        # combinations of ell_k e_i - ell_i e_k span the orthogonal complement
        for i in range(n):
            for k in range(i + 1, n):
                t = rng.randint(-1, 1)
                c[i] += t * ell[k]
                c[k] -= t * ell[i]
        if any(c):
            return ell, c


# -- two-variable pairs with g linear ---------------------------------------

def gen_section42(f: Polynomial, g: Polynomial) -> PolyMap:
    """Validate a pair ``(f, g)`` with ``g`` linear and constant Jacobian."""
    if f.num_vars != 2 or g.num_vars != 2:
        raise ValueError("pairs live in two variables")
    if g.degree > 1:
        raise ValueError("g must be linear")
    F = PolyMap([f, g])
    report = check_jacobi(F)
    if report.violations:
        raise NonConstantJacobian(report.violations, report.principle_value)
    require_unit_jacobian(F)
    return F


def random_section42(k: int, seed: int, coeff_bound: int = 3) -> PolyMap:
    """Random pair with ``deg f = k``, ``g`` linear, ``det J = 1``, ``b01 != 0``.

    ``f = a10 x + a01 y + phi(g)``; the Jacobian is constant only when the
    nonlinear part of ``f`` is a polynomial in ``g``.
    """
    if k < 1:
        raise ValueError("degree must be at least 1")
    rng = random.Random(seed)
    while True:
        L = random_det_one(rng, 2)
        if L[1, 1] != 0:
            break
    a10, a01 = L.row(0)
    b10, b01 = L.row(1)
    g = Polynomial.linear_form([b10, b01])
    f = Polynomial.linear_form([a10, a01])
    if k >= 2:
        gp = g
        for r in range(2, k + 1):
            gp = gp * g
            if r == k:
                coef = _random_coeff(rng, coeff_bound)
            else:
                coef = rng.randint(-coeff_bound, coeff_bound)
            f = f + gp.scale(coef)
    return gen_section42(f, g)

