from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pseudoalg.hmodule import (
    FiniteDimModule,
    FreeModule,
    HLinearMap,
    HModuleElement,
    ModuleMismatch,
    Unsupported,
    act,
    hlinear_check,
)
from pseudoalg.scalars_hopf import HopfElement, HopfKernel

P1 = HopfKernel.polynomial(1)
Z2 = HopfKernel.group(2)
JORDAN = ([[0, 1], [0, 0]],)


def test_free_action_is_left_multiplication():
    M = FreeModule(P1, 2)
    d = HopfElement.generator(P1, 0)
    m = HModuleElement(M, M.gen_vec(0, (2,)))
    assert act(d, m).vec == {(0, (3,)): 1}


def test_group_swap_action():
    M = FiniteDimModule(Z2, 2, ([[0, 1], [1, 0]],))
    g = HopfElement.generator(Z2, 0)
    assert act(g, HModuleElement(M, {0: 1})).vec == {1: 1}


def test_polynomial_power_acts_by_matrix_power():
    N = ([[0, 1, 0], [0, 0, 1], [0, 0, 0]],)
    M = FiniteDimModule(P1, 3, N)
    d2 = HopfElement.generator(P1, 0) ** 2
    assert act(d2, HModuleElement(M, {2: 1})).vec == {0: 1}
    assert act(d2, HModuleElement(M, {1: 1})).vec == {}


def test_module_validation():
    with pytest.raises(ValueError):
        FiniteDimModule(Z2, 2, ([[1, 1], [0, 1]],))  # order is not 2
    with pytest.raises(ValueError):
        FiniteDimModule(HopfKernel.polynomial(2), 2, ([[0, 1], [0, 0]], [[1, 0], [0, 0]]))  # non-commuting
    with pytest.raises(Unsupported):
        FiniteDimModule.regular(P1)
    with pytest.raises(ModuleMismatch):
        act(HopfElement.generator(Z2, 0), HModuleElement(FreeModule(P1, 1), {}))


def test_regular_representation():
    R = FiniteDimModule.regular(HopfKernel.group(3))
    g = HopfElement.generator(HopfKernel.group(3), 0)
    assert act(g ** 3, HModuleElement(R, {1: 1})).vec == {1: 1}
    assert act(g, HModuleElement(R, {0: 1})).vec == {1: 1}


def test_hlinear_examples():
    M = FiniteDimModule(P1, 2, JORDAN)
    assert hlinear_check(HLinearMap.zero(M)).ok
    assert hlinear_check(HLinearMap.identity(M)).ok
    proj = HLinearMap(M, M, {0: {0: Fraction(1)}})
    rep = hlinear_check(proj)
    assert not rep.ok
    assert rep.failures("hlinear")[0].instance == ("d1", "b2")


def test_free_source_maps_are_hlinear():
    M = FreeModule(P1, 2)
    f = HLinearMap(M, M, {M.gen(0): M.gen_vec(1, (1,)), M.gen(1): M.gen_vec(0)})
    assert hlinear_check(f).ok
    assert f(M.gen_vec(0, (2,))) == {(1, (3,)): 1}


scalars = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@given(scalars, scalars)
def test_action_is_associative_and_unital(a, b):
    M = FiniteDimModule(P1, 3, ([[0, 1, 0], [0, 0, 1], [0, 0, 0]],))
    v = {0: a, 2: b}
    for x in range(4):
        for y in range(4 - x):
            assert M.act((x + y,), v) == M.act((x,), M.act((y,), v))
    assert M.act((0,), v) == {k: c for k, c in v.items() if c}


@given(scalars, scalars, scalars, scalars)
def test_composition_preserves_hlinearity(a, b, c, e):
    # polynomials in the Jordan block commute with it
    M = FiniteDimModule(P1, 2, JORDAN)
    f = HLinearMap(M, M, {0: {0: a}, 1: {0: b, 1: a}})
    g = HLinearMap(M, M, {0: {0: c}, 1: {0: e, 1: c}})
    assert hlinear_check(f).ok and hlinear_check(g).ok
    assert hlinear_check(f.compose(g)).ok
