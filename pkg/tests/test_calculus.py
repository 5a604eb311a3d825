import random

import pytest

from dcubed.freealg import AlgebraElement
from dcubed.bimodule import preset_map
from dcubed.calculus import Calculus
from dcubed.tensoralg import TensorElement, tensor_mul

from conftest import PRESET_NAMES, random_algebra, x


def test_derivative_of_generators_and_unit(preset_calc):
    calc = preset_calc
    for k in (1, 2):
        for i in (1, 2):
            expected = AlgebraElement.one(2) if i == k else AlgebraElement.zero(2)
            assert calc.partial(k, x(2, i)) == expected
        assert calc.partial(k, AlgebraElement.one(2)).is_zero


def test_commutative_square_derivative(commutative_calc):
    # D_1(x1 x1) = D_1(x1) x1 + entry(1,j,1) D_j(x1) = x1 + x1 = 2 x1
    assert commutative_calc.partial(1, x(2, 1, 1)) == x(2, 1).scale(2)
    assert commutative_calc.partial(2, x(2, 1, 1)).is_zero


def test_twisted_product_rule(preset_calc):
    calc = preset_calc
    rng = random.Random(37)
    for _ in range(25):
        u, v = random_algebra(rng, 2), random_algebra(rng, 2)
        mat = calc.bmap.matrix(u)
        for k in (1, 2):
            expected = calc.partial(k, u) * v
            for j in (1, 2):
                expected = expected + mat[k - 1][j - 1] * calc.partial(j, v)
            assert calc.partial(k, u * v) == expected


def test_split_position_independence(preset_calc):
    # computing D_k by splitting a word anywhere must agree with the
    # leading-letter recursion
    calc = preset_calc
    rng = random.Random(41)
    for _ in range(25):
        length = rng.randint(2, 4)
        word = tuple(rng.randint(1, 2) for _ in range(length))
        cut = rng.randint(1, length - 1)
        u = AlgebraElement.monomial(2, word[:cut])
        v = AlgebraElement.monomial(2, word[cut:])
        full = AlgebraElement.monomial(2, word)
        mat = calc.bmap.matrix(u)
        for k in (1, 2):
            expected = calc.partial(k, u) * v
            for j in (1, 2):
                expected = expected + mat[k - 1][j - 1] * calc.partial(j, v)
            assert calc.partial(k, full) == expected


def test_d1_on_generators(preset_calc):
    calc = preset_calc
    for i in (1, 2):
        assert calc.d1(x(2, i)) == TensorElement.of_letter(2, 1, i)
    assert calc.d1(AlgebraElement.one(2)).is_zero


def test_d1_commutative_product(commutative_calc):
    got = commutative_calc.d1(x(2, 1, 2))
    expected = TensorElement.of_letter(2, 1, 1, x(2, 2)) \
        + TensorElement.of_letter(2, 1, 2, x(2, 1))
    assert got == expected


def test_d2_tilde_on_generators(preset_calc):
    calc = preset_calc
    for i in (1, 2):
        assert calc.d2_tilde(x(2, i)) == TensorElement.of_letter(2, 2, i)
    assert calc.d2_tilde(AlgebraElement.one(2)).is_zero


def test_d2_tilde_commutative_product(commutative_calc):
    got = commutative_calc.d2_tilde(x(2, 1, 2))
    expected = TensorElement.of_letter(2, 2, 1, x(2, 2)) \
        + TensorElement.of_letter(2, 2, 2, x(2, 1))
    assert got == expected


@pytest.mark.parametrize("name", PRESET_NAMES)
def test_d1_leibniz_as_tensor_identity(name):
    calc = Calculus(preset_map(name, 2))
    rng = random.Random(43)
    for _ in range(25):
        u, v = random_algebra(rng, 2), random_algebra(rng, 2)
        lhs = calc.d1(u * v)
        rhs = tensor_mul(calc.bmap, calc.d1(u), TensorElement.of_algebra(v)) \
            + tensor_mul(calc.bmap, TensorElement.of_algebra(u), calc.d1(v))
        assert lhs == rhs


@pytest.mark.parametrize("name", PRESET_NAMES)
def test_d2_tilde_leibniz(name):
    calc = Calculus(preset_map(name, 2))
    rng = random.Random(47)
    for _ in range(25):
        u, v = random_algebra(rng, 2), random_algebra(rng, 2)
        lhs = calc.d2_tilde(u * v)
        rhs = tensor_mul(calc.bmap, calc.d2_tilde(u), TensorElement.of_algebra(v)) \
            + tensor_mul(calc.bmap, TensorElement.of_algebra(u), calc.d2_tilde(v))
        assert lhs == rhs


def test_linearity(preset_calc):
    calc = preset_calc
    u, v = x(2, 1, 2), x(2, 2)
    from dcubed.scalar import Q
    assert calc.d1(u.scale(Q) + v) == calc.d1(u).scale(Q) + calc.d1(v)
