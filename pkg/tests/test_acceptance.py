"""Acceptance suite: one test per criterion, each with its time budget.

The heavy runs are memoized so the consistency criterion can inspect every
inversion made by criteria 1-5 without recomputing them.
"""

from __future__ import annotations

import random
import time
from fractions import Fraction
from functools import lru_cache

import pytest

from jacinv.blocks import (
    build_block,
    block_size,
    det_block,
    det_exponent,
    det_pattern,
    quadratic_system_matrix,
)
from jacinv.errors import MapSyntaxError, NonConstantJacobian
from jacinv.generators import (
    bcw_rank_one_pair,
    gen_bcw_rank_one,
    quadratic_tame_program,
    random_bcw_rank_one,
    random_section42,
    realize_tame,
    sample_tame,
)
from jacinv.inverter import (
    Status,
    invert_block_scheme,
    invert_oracle,
    invert_special_42,
    verify_inverse,
)
from jacinv.jacobi import check_jacobi
from jacinv.matrix import RationalMatrix
from jacinv.poly import PolyMap, Polynomial, jacobian_det
from jacinv.textformat import parse_map

from .oracles import jacobian_det_sympy, quadratic_closed_form


class Timed:
    def __init__(self):
        self.start = time.perf_counter()

    @property
    def elapsed(self) -> float:
        return time.perf_counter() - self.start


# -- criterion 1: quadratic closed form --------------------------------------

@lru_cache(maxsize=None)
def run_quadratic():
    t = Timed()
    maps, results, mismatches = [], [], []
    for seed in range(200):
        F, G_true, M = realize_tame(quadratic_tame_program(seed))
        result = invert_block_scheme(F)
        maps.append(F)
        results.append(result)
        expected = quadratic_closed_form(F[0], F[1])
        if result.status is not Status.CERTIFIED or result.inverse != expected or expected != G_true:
            mismatches.append(seed)
    return maps, results, mismatches, t.elapsed


def test_criterion_1_quadratic_closed_form():
    maps, results, mismatches, elapsed = run_quadratic()
    assert len(maps) == 200
    assert all(F.degree == 2 for F in maps)
    assert all(check_jacobi(F).principle_value == 1 for F in maps)
    assert mismatches == []
    assert elapsed < 5.0, f"{elapsed:.2f}s"


# -- criterion 2: g linear, closed form --------------------------------------

@lru_cache(maxsize=None)
def run_section42():
    t = Timed()
    maps, results, failures = [], [], []
    for k in range(2, 7):
        for seed in range(50):
            F = random_section42(k, seed=1000 * k + seed)
            closed = invert_special_42(F[0], F[1])
            result = invert_block_scheme(F)
            maps.append(F)
            results.append(result)
            if result.status is not Status.CERTIFIED or closed != result.inverse or not verify_inverse(F, closed):
                failures.append((k, seed))
    return maps, results, failures, t.elapsed


def test_criterion_2_closed_form_g_linear():
    maps, results, failures, elapsed = run_section42()
    assert len(maps) == 250
    assert sorted({int(F[0].degree) for F in maps}) == [2, 3, 4, 5, 6]
    assert failures == []
    assert elapsed < 10.0, f"{elapsed:.2f}s"


# -- criterion 3: determinant law --------------------------------------------

def test_criterion_3_determinant_law():
    t = Timed()
    # tables: with det L = 2 the determinant of each block reveals its power
    tables = {2: ([2, 3, 4, 5, 6], [1, 3, 6, 10, 15]), 3: ([3, 6, 10, 15, 21], [1, 4, 10, 20, 35])}
    samples = {2: RationalMatrix([[2, 1], [0, 1]]), 3: RationalMatrix([[1, 1, 0], [0, 2, 1], [0, 0, 1]])}
    for n, (sizes, powers) in tables.items():
        L = samples[n]
        assert L.det() == 2
        assert [(s, p) for _, s, p in det_pattern(n, 5)] == list(zip(sizes, powers))
        for d, size, power in zip(range(1, 6), sizes, powers):
            U = build_block(L, d)
            assert U.size == size
            assert U.entries.det() == 2 ** power
            assert det_block(L, d) == 2 ** power

    rng = random.Random(3)
    for n in range(1, 5):
        for d in range(1, 5):
            for _ in range(50):
                L = RationalMatrix([[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)])
                expected = L.det() ** det_exponent(n, d)
                if L.det():
                    U = build_block(L, d)
                    assert U.size == block_size(n, d)
                    assert U.entries.det() == expected
                else:
                    # singular L: the block is singular too
                    assert det_block(L, d) == 0

    for _ in range(50):
        L = RationalMatrix([[rng.randint(-4, 4) for _ in range(3)] for _ in range(3)])
        assert quadratic_system_matrix(L).det() == L.det() ** 4
    assert t.elapsed < 60.0, f"{t.elapsed:.2f}s"


# -- criterion 4: method agreement and round trip ----------------------------

@lru_cache(maxsize=None)
def run_tame():
    t = Timed()
    maps, results, failures = [], [], []
    for n in (2, 3, 4):
        for s in range(100):
            seed = 1000 * n + s
            _, F, G_true, M = sample_tame(n, seed, scaled=(s % 3 == 0))
            block = invert_block_scheme(F)
            oracle = invert_oracle(F)
            maps.append(F)
            results += [block, oracle]
            ok = (
                block.status is Status.CERTIFIED
                and oracle.status is Status.CERTIFIED
                and block.inverse_blocks == oracle.inverse_blocks
                and block.inverse == G_true
                and verify_inverse(F, block.inverse)
                and jacobian_det(block.inverse) == 1 / M
            )
            if not ok:
                failures.append(seed)
    return maps, results, failures, t.elapsed


def test_criterion_4_method_agreement_round_trip():
    maps, results, failures, elapsed = run_tame()
    assert len(maps) == 300
    assert all(F.degree <= 5 for F in maps)
    assert failures == []
    assert elapsed < 120.0, f"{elapsed:.2f}s"


# -- criterion 5: rank-one cubic maps ----------------------------------------

BCW_CAP = 6


@lru_cache(maxsize=None)
def run_bcw():
    t = Timed()
    maps, results, failures = [], [], []
    touched = 0
    for n in (2, 3, 4, 5):
        for s in range(25):
            ell, c = random_bcw_rank_one(n, seed=100 * n + s)
            F = gen_bcw_rank_one(n, ell, c)
            _, G_true = bcw_rank_one_pair(n, ell, c)
            result = invert_block_scheme(F, cap=BCW_CAP, exhaust=True)
            maps.append(F)
            results.append(result)
            H = result.inverse - PolyMap.identity(n)
            high = [vec for d, table in result.residuum.items() if d >= 3 for vec in table.values()]
            touched += len(high)
            ok = (
                result.status is Status.CERTIFIED
                and result.degree == 3
                and result.inverse == G_true
                and all(h.is_homogeneous() and h.degree == 3 for h in H if not h.is_zero())
                and high
                and all(vec.is_zero for vec in high)
            )
            if not ok:
                failures.append((n, s))
    return maps, results, failures, touched, t.elapsed


def test_criterion_5_rank_one_cubic_probe():
    maps, results, failures, touched, elapsed = run_bcw()
    assert len(maps) == 100
    assert touched > 0
    assert failures == []
    assert elapsed < 60.0, f"{elapsed:.2f}s"


# -- criterion 6: Jacobi-condition soundness ---------------------------------

def test_criterion_6_jacobi_condition_soundness():
    generated = run_quadratic()[0] + run_section42()[0] + run_tame()[0] + run_bcw()[0]
    for F in generated:
        assert check_jacobi(F).violations == ()

    rng = random.Random(6)
    pool = [F for F in generated if F.num_vars <= 3]
    checked = 0
    attempts = 0
    while checked < 100:
        attempts += 1
        assert attempts < 2000, "too few perturbations with a non-constant determinant"
        F = rng.choice(pool)
        n = F.num_vars
        i = rng.randrange(n)
        e = [0] * n
        for _ in range(rng.randint(1, 3)):
            e[rng.randrange(n)] += 1
        delta = Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.randint(1, 2))
        comps = list(F)
        comps[i] = comps[i] + Polynomial(n, {tuple(e): delta})
        P = PolyMap(comps)
        reference = jacobian_det_sympy(P)
        M = reference.constant_term
        expected = reference - M
        if expected.is_zero():
            continue  # the perturbation happens to keep the determinant constant
        report = check_jacobi(P)
        assert report.principle_value == M
        assert report.violations, "perturbation not detected"
        assert dict(report.violations) == dict(expected.terms)
        assert jacobian_det(P) - M == expected
        checked += 1


# -- criterion 7: consistency guard ------------------------------------------

def test_criterion_7_consistency_guard():
    runs = run_quadratic()[1] + run_section42()[1] + run_tame()[1] + run_bcw()[1]
    assert runs
    blocks_used = 0
    for result in runs:
        assert result.status is not Status.INCONSISTENT, result.detail
        if result.method != "block":
            continue
        # every solved degree recorded an exact U·V = I check
        assert set(result.block_checks) == set(result.residuum)
        assert all(result.block_checks.values())
        blocks_used += len(result.block_checks)
    assert blocks_used > 0
    # the check itself, redone independently on a spread of linear parts
    for result in runs[::25]:
        L = result.source.linear_part()
        for d in result.block_checks:
            U = build_block(L, d).entries
            V = build_block(L.inverse(), d).entries
            assert (U @ V).is_identity()


# -- criterion 8: negative paths ---------------------------------------------

def test_criterion_8_negative_paths():
    x = Polynomial.variable(2, 0)
    y = Polynomial.variable(2, 1)
    F = PolyMap([x + x ** 2, y])
    with pytest.raises(NonConstantJacobian) as info:
        invert_block_scheme(F)
    assert info.value.violations == (((1, 0), Fraction(2)),)

    G = PolyMap([x + y ** 2, y + (x + y ** 2) ** 2])  # inverse has degree 4
    for cap in (1, 2, 3):
        result = invert_block_scheme(G, cap=cap)
        assert result.status is Status.CAP_REACHED
        assert result.certificate is False
    assert invert_block_scheme(G, cap=4).status is Status.CERTIFIED

    with pytest.raises(MapSyntaxError) as err:
        parse_map("u1 = x1 + x2^2\nu2 = x2 + 5\n")
    assert err.value.line == 2
    assert "constant term" in err.value.message
