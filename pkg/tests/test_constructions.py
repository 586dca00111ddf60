from __future__ import annotations

from fractions import Fraction

import pytest

from oracles import rank
from pseudoalg.catalog import dg_affine
from pseudoalg.constructions import (
    BaseAlgebra,
    InvalidBase,
    affine_lie,
    annihilation_report,
    build_annihilation_lie,
    build_annihilation_poisson,
    build_current_lie,
    build_current_poisson,
    build_dual_algebra,
    check_classical,
    check_dual_pairing,
    finite_function_current,
    unital_affine_poisson,
)
from pseudoalg.hmodule import Unsupported
from pseudoalg.polytensor import PolyTensor, straighten
from pseudoalg.pseudo_core import bracket_eval, check_hdifferential, check_leibniz, run_suite
from pseudoalg.scalars_hopf import HopfKernel

P1 = HopfKernel.polynomial(1)
Z2 = HopfKernel.group(2)
Z3 = HopfKernel.group(3)
ONE, D = (0,), (1,)


def abelian(n: int) -> BaseAlgebra:
    return BaseAlgebra(n, None, {}, name="ab")


def truncated_poisson() -> BaseAlgebra:
    """``k[t]/(t^2)`` with zero bracket."""
    return BaseAlgebra(2, {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}}, {}, ("1", "t"), {0: 1})


def zero_product_affine() -> BaseAlgebra:
    return BaseAlgebra(2, {}, {(0, 1): {1: 1}, (1, 0): {1: -1}}, ("a", "b"))


def test_current_lie_examples():
    assert build_current_lie(abelian(2), P1).bracket == {}
    S = build_current_lie(affine_lie(), P1)
    e, f = S.module.gen(0), S.module.gen(1)
    fv = S.module.gen_vec(1)
    assert S.bracket_keys(e, f) == PolyTensor.pure(S.module, fv)
    assert bracket_eval(S, S.module.gen_vec(0, D), fv) == PolyTensor.pure(S.module, fv, slots=(D,))
    bad = BaseAlgebra(2, None, {(0, 1): {1: 1}}, ("e", "f"))
    with pytest.raises(InvalidBase):
        build_current_lie(bad, P1)


def test_current_poisson_examples():
    for base in (truncated_poisson(), zero_product_affine(), unital_affine_poisson()):
        S = build_current_poisson(base, P1)
        assert check_hdifferential(S).ok and check_leibniz(S, "left").ok, base.name
    # {(f x a) * ((g x b)(h x c))} = (f x gh) (x)_H (1 x {a, b c})
    S = build_current_poisson(unital_affine_poisson(), P1)
    M = S.module
    lhs = bracket_eval(S, M.gen_vec(1, D), S.mul(M.gen_vec(0, D), M.gen_vec(2, D)))
    assert lhs == straighten(M, [((D, (2,)), M.gen_vec(2))])


def test_invalid_poisson_base():
    bad = BaseAlgebra(2, {(0, 0): {0: 1}}, {(0, 1): {1: 1}, (1, 0): {1: -1}}, ("e", "f"))
    assert check_classical(bad).failed_laws() == ["classical-leibniz"]
    with pytest.raises(InvalidBase):
        build_current_poisson(bad, P1)


def test_dual_algebra_examples():
    X = build_dual_algebra(Z2)
    u = lambda i: {i: Fraction(1)}  # noqa: E731
    assert X.mul(u(0), u(0)) == u(0) and X.mul(u(1), u(1)) == u(1)
    assert X.mul(u(0), u(1)) == {}
    assert X.unit() == {0: 1, 1: 1}
    for i in range(2):
        assert X.mul(X.unit(), u(i)) == u(i)
    X3 = build_dual_algebra(Z3)
    for i in range(3):
        for j in range(3):
            assert X3.mul(u(i), u(j)) == (u(i) if i == j else {})
    assert check_dual_pairing(X).ok and check_dual_pairing(X3).ok
    assert check_dual_pairing(build_dual_algebra(HopfKernel.group(2, 2))).ok
    with pytest.raises(Unsupported):
        build_dual_algebra(P1)


def _bracket_image_rank(alg: BaseAlgebra) -> int:
    return rank([v for v in alg.bracket.values()])


def test_annihilation_lie_is_two_copies():
    A = build_annihilation_lie(build_current_lie(affine_lie(), Z2))
    assert A.dim == 4
    assert annihilation_report(A).ok
    # g + g has a 2-dim derived algebra and every basis vector brackets nontrivially
    assert _bracket_image_rank(A.algebra) == 2
    assert all(any(v for (i, j), v in A.algebra.bracket.items() if k in (i, j)) for k in range(4))
    assert build_annihilation_lie(build_current_lie(abelian(2), Z2)).algebra.bracket == {}


def test_annihilation_poisson_examples():
    A = build_annihilation_poisson(build_current_poisson(truncated_poisson(), Z2))
    assert A.dim == 4 and A.algebra.bracket == {}
    rep = annihilation_report(A)
    assert rep.ok and "dual actions" in rep.conventions
    B = build_annihilation_poisson(build_current_poisson(unital_affine_poisson(), Z2))
    assert B.dim == 6 and annihilation_report(B).passed("classical-leibniz")
    with pytest.raises(Unsupported):
        build_annihilation_poisson(build_current_poisson(truncated_poisson(), P1))


def test_function_current_is_dgp():
    S = finite_function_current(dg_affine(), Z2)
    assert S.module.dim == 6
    assert run_suite(S).ok


BASES = [affine_lie(), abelian(2), truncated_poisson(), zero_product_affine(), unital_affine_poisson()]


@pytest.mark.parametrize("kernel", [Z2, Z3, HopfKernel.group(2, 2)], ids=lambda k: k.describe())
@pytest.mark.parametrize("base", BASES, ids=lambda b: b.name)
def test_annihilation_outputs_are_classical(kernel, base):
    if base.product is None:
        A = build_annihilation_lie(build_current_lie(base, kernel))
    else:
        A = build_annihilation_poisson(build_current_poisson(base, kernel))
    assert A.dim == base.dim * kernel.order()
    assert annihilation_report(A).ok


@pytest.mark.parametrize("kernel", [P1, Z2, HopfKernel.polynomial(2)], ids=lambda k: k.describe())
@pytest.mark.parametrize("base", BASES, ids=lambda b: b.name)
def test_current_functor_preserves_laws(kernel, base):
    S = build_current_poisson(base, kernel) if base.product is not None else build_current_lie(base, kernel)
    assert run_suite(S).ok
