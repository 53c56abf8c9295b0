import pytest

from jacinv.errors import InvalidStep, NonConstantJacobian, OrthogonalityViolated
from jacinv.generators import (
    ElementaryStep,
    LinearStep,
    TameProgram,
    bcw_rank_one_pair,
    gen_bcw_rank_one,
    gen_section42,
    quadratic_tame_program,
    random_bcw_rank_one,
    random_section42,
    random_tame_program,
    realize_tame,
    sample_tame,
)
from jacinv.inverter import verify_inverse
from jacinv.jacobi import check_jacobi
from jacinv.matrix import RationalMatrix
from jacinv.poly import PolyMap, Polynomial, jacobian_det

X = Polynomial.variable(2, 0)
Y = Polynomial.variable(2, 1)


def test_realize_tame_order():
    # shear first, then swap: F = swap ∘ shear
    prog = TameProgram(2, (ElementaryStep(0, Y ** 2), LinearStep(RationalMatrix([[0, 1], [1, 0]]))))
    F, G, M = realize_tame(prog)
    assert F == PolyMap([Y, X + Y ** 2])
    assert M == -1
    assert verify_inverse(F, G)


def test_invalid_steps():
    with pytest.raises(InvalidStep):
        realize_tame(TameProgram(2, (ElementaryStep(0, X ** 2),)))
    with pytest.raises(InvalidStep):
        realize_tame(TameProgram(2, (ElementaryStep(0, Y + 1),)))
    with pytest.raises(InvalidStep):
        realize_tame(TameProgram(2, (LinearStep(RationalMatrix([[1, 1], [1, 1]])),)))
    with pytest.raises(InvalidStep):
        realize_tame(TameProgram(2, (ElementaryStep(3, Y ** 2),)))


def test_random_programs_are_reproducible():
    a = random_tame_program(3, seed=11)
    b = random_tame_program(3, seed=11)
    assert realize_tame(a) == realize_tame(b)
    with pytest.raises(ValueError):
        random_tame_program(1, seed=0)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_sample_tame_ground_truth(n):
    for seed in range(5):
        _, F, G, M = sample_tame(n, seed, scaled=seed % 2 == 1)
        assert F.degree <= 5 and G.degree <= 5
        report = check_jacobi(F)
        assert report.is_constant and report.principle_value == M
        assert verify_inverse(F, G)
        assert jacobian_det(G) == 1 / M


def test_quadratic_tame_program_stays_quadratic():
    for seed in range(20):
        F, G, M = realize_tame(quadratic_tame_program(seed))
        assert F.degree == 2 and G.degree == 2 and M == 1


def test_bcw_pair():
    F, G = bcw_rank_one_pair(3, [1, 1, 0], [1, -1, 2])
    assert verify_inverse(F, G)
    assert (F - PolyMap.identity(3)).homogeneous_part(3) == F - PolyMap.identity(3)
    with pytest.raises(OrthogonalityViolated):
        bcw_rank_one_pair(2, [1, 1], [1, 1])


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_random_bcw_orthogonal(n):
    for seed in range(10):
        ell, c = random_bcw_rank_one(n, seed)
        assert sum(a * b for a, b in zip(ell, c)) == 0 and any(c) and any(ell)
        assert check_jacobi(gen_bcw_rank_one(n, ell, c)).is_constant


def test_section42_generator():
    for k in range(1, 7):
        F = random_section42(k, seed=k)
        assert F[0].degree == k and F[1].degree == 1
        assert F[1].coefficient((0, 1)) != 0
        assert check_jacobi(F).principle_value == 1
    with pytest.raises(NonConstantJacobian):
        gen_section42(X + Y ** 2 + X ** 2, Y)
    with pytest.raises(ValueError):
        gen_section42(X, Y ** 2)


def test_scaled_linear_steps_give_rational_jacobian():
    seen = set()
    for seed in range(30):
        _, F, _, M = sample_tame(2, seed, scaled=True)
        seen.add(M.denominator != 1 or abs(M) != 1)
    assert True in seen
