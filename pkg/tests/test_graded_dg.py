from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pseudoalg.catalog import affine_current, dg_affine, square_zero, tensor_violating_pair, two_term_complex
from pseudoalg.constructions import finite_function_current
from pseudoalg.graded_dg import (
    HomCandidate,
    SuiteFailure,
    basis_keys,
    build_cohomology,
    build_opposite,
    build_quotient,
    build_tensor,
    check_cohomology_invariance,
    check_homomorphism,
    check_subideal,
    check_tensor_compat,
    classify,
    rebase,
    swap_tensor,
)
from pseudoalg.hmodule import FiniteDimModule, FreeModule, HLinearMap, Unsupported
from pseudoalg.polytensor import PolyTensor
from pseudoalg.pseudo_core import PseudoStructure, graded_sign, run_suite
from pseudoalg.scalars_hopf import HopfKernel

P1 = HopfKernel.polynomial(1)
Z2 = HopfKernel.group(2)
F = Fraction


def fun_current() -> PseudoStructure:
    """Function current of the graded affine algebra; basis ``t * 3 + i`` for group element t, letter i in 1, u, v."""
    return finite_function_current(dg_affine(), Z2)


def broken_current() -> PseudoStructure:
    """The function current with a bracket table that is not skew."""
    S = fun_current()
    return S.with_bracket({(1, 2): PolyTensor.pure(S.module, {2: 1})})


def one_dim(name: str, unital: bool) -> PseudoStructure:
    M = FiniteDimModule.trivial(Z2, 1, name=name)
    product = {(0, 0): {0: F(1)}} if unital else {}
    return PseudoStructure(M, product, {}, 0, HLinearMap.zero(M, M, 1, "d"), True, name)


# -- opposite ------------------------------------------------------------------


def test_opposite_examples():
    A = square_zero(Z2)
    assert build_opposite(A).bracket == A.bracket == {}
    S = fun_current()
    op = build_opposite(S)
    assert run_suite(op).ok
    assert op.bracket[(1, 2)] == S.bracket[(1, 2)].scale(-1)
    again = build_opposite(op)
    assert again.bracket == S.bracket and again.product is S.product and again.differential is S.differential


def test_opposite_refuses_invalid_input():
    with pytest.raises(SuiteFailure):
        build_opposite(broken_current())


# -- tensor ----------------------------------------------------------------------


def test_tensor_passes():
    A, C = square_zero(Z2), two_term_complex(Z2)
    assert check_tensor_compat(A, C).ok
    T, rep = build_tensor(A, C)
    assert rep.ok and T.module.dim == 4
    assert run_suite(T).ok


def test_tensor_of_one_dim_factors():
    T, _ = build_tensor(one_dim("A", False), one_dim("B", False))
    assert T.module.dim == 1 and run_suite(T).ok
    # two nonzero products already break the first condition once g is nontrivial
    rep = check_tensor_compat(one_dim("A", True), one_dim("B", True))
    assert rep.failures("tensor-compat-1")[0].instance[:2] == ("1", "g1")


def test_tensor_refuses_violating_pair():
    A, B = tensor_violating_pair()
    rep = check_tensor_compat(A, B)
    assert "tensor-compat-4" in rep.failed_laws()
    assert any(v.instance[0] == "d1" for v in rep.failures("tensor-compat-4"))
    with pytest.raises(SuiteFailure, match="tensor refused: .*tensor-compat-4"):
        build_tensor(A, B)


def test_tensor_needs_degree_zero_bracket():
    A = square_zero(Z2)
    shifted = PseudoStructure(A.module, A.product, {}, 1, A.differential, True, "shifted")
    with pytest.raises(Unsupported):
        check_tensor_compat(shifted, A)


def test_tensor_is_graded_commutative():
    T, _ = build_tensor(square_zero(Z2), two_term_complex(Z2))
    for a in range(T.module.dim):
        for b in range(T.module.dim):
            s = graded_sign("commute", T.deg(a), T.deg(b))
            assert T.product_keys(a, b) == {k: c * s for k, c in T.product_keys(b, a).items()}


# -- ideals and quotients ----------------------------------------------------------


def test_subideal_examples():
    S = fun_current()
    assert check_subideal(S, [], "ideal").ok
    assert check_subideal(S, [{k: 1} for k in range(6)], "ideal").ok
    A = affine_current(Z2)
    e = A.module.gen_vec(1)
    rep = check_subideal(A, [e], "ideal")
    assert "closure-bracket" in rep.failed_laws()
    with pytest.raises(ValueError):
        check_subideal(S, [], "left")


def test_subideal_needs_finite_basis():
    with pytest.raises(Unsupported):
        check_subideal(affine_current(P1), [], "ideal")
    with pytest.raises(Unsupported):
        basis_keys(FreeModule(P1, 1))


def test_quotient_examples():
    S = fun_current()
    same, pi = build_quotient(S, [])
    assert same.module.dim == 6 and classify(HomCandidate(S, same, pi)) == "iso"
    zero, _ = build_quotient(S, [{k: 1} for k in range(6)])
    assert zero.module.dim == 0 and run_suite(zero).ok
    C = two_term_complex(Z2)
    Q, pi = build_quotient(C, [{1: 1}])
    assert Q.module.dim == 1 and Q.d({0: 1}) == {}
    rep = check_homomorphism(HomCandidate(C, Q, pi))
    assert rep.ok and rep.conventions["classification"] == "epi"
    with pytest.raises(SuiteFailure, match="not an ideal"):
        build_quotient(S, [{1: 1}])  # d(u) = v leaves span{u, g u}


def test_quotient_by_v():
    S = fun_current()
    Q, pi = build_quotient(S, [{2: 1}])
    assert Q.module.dim == 4 and run_suite(Q).ok
    assert check_homomorphism(HomCandidate(S, Q, pi)).ok


# -- cohomology and homomorphisms -----------------------------------------------------


def test_cohomology_examples():
    A = square_zero(Z2)
    H = build_cohomology(A)
    assert H.quotient.dim == 2 and run_suite(H.structure).ok
    assert build_cohomology(two_term_complex(Z2)).quotient.dim == 0
    HS = build_cohomology(fun_current())
    assert HS.quotient.dim == 2 and run_suite(HS.structure).ok


def test_cohomology_invariance_along_rebase():
    S = fun_current()
    T, iso = rebase(S, [3, 4, 5, 0, 1, 2], [1, 2, F(-1, 3), 1, 1, 5])
    assert run_suite(T).ok
    rep = check_cohomology_invariance(S, T, iso)
    assert rep.ok, rep.render_text()
    assert rep.conventions["cohomology dimensions"] == "2 -> 2"


def test_homomorphism_examples():
    C = two_term_complex(Z2)
    rep = check_homomorphism(HomCandidate(C, C, HLinearMap.identity(C.module)), require_bijective=True)
    assert rep.ok and rep.conventions["classification"] == "iso"
    flip = HLinearMap(C.module, C.module, {0: {0: F(1)}, 1: {1: F(-1)}}, 0, "flip")
    rep = check_homomorphism(HomCandidate(C, C, flip))
    assert rep.failed_laws() == ["hom-d"]
    assert rep.failures("hom-d")[0].instance == ("e0",)


def test_rebase_validation():
    S = fun_current()
    with pytest.raises(ValueError):
        rebase(S, [0, 0, 1, 2, 3, 4])
    with pytest.raises(ValueError):
        rebase(S, list(range(6)), [0] * 6)
    with pytest.raises(Unsupported):
        rebase(affine_current(Z2), [0, 1, 2])


def test_swap_tensor():
    S = fun_current()
    x = S.bracket_keys(1, 2)
    assert swap_tensor(swap_tensor(x)) == x


# -- properties ---------------------------------------------------------------


CORPUS = [fun_current, lambda: square_zero(Z2), lambda: two_term_complex(Z2), broken_current]


@pytest.mark.parametrize("make", CORPUS)
def test_opposite_and_quotient_preserve_the_suite(make):
    S = make()
    ok = run_suite(S).ok
    assert run_suite(build_opposite(S, validate=False)).ok == ok
    Q, _ = build_quotient(S, [], validate=False)
    assert run_suite(Q).ok == ok


permutations6 = st.permutations(range(6))
scales6 = st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=3).filter(bool), min_size=6, max_size=6)


@given(permutations6, scales6)
@settings(max_examples=15, deadline=None)
def test_rebase_transports_cohomology(order, scales):
    S = fun_current()
    T, iso = rebase(S, order, scales)
    assert check_cohomology_invariance(S, T, iso).ok


@given(scales6, scales6)
@settings(max_examples=10, deadline=None)
def test_induced_maps_compose(s1, s2):
    S = fun_current()
    T, f = rebase(S, [3, 4, 5, 0, 1, 2], s1)
    U, g = rebase(T, [1, 0, 2, 4, 3, 5], s2)
    HS, HT, HU = build_cohomology(S), build_cohomology(T), build_cohomology(U)
    composite = HS.induced(HU, g.compose(f))
    stepwise = HT.induced(HU, g).compose(HS.induced(HT, f))
    for i in range(HS.quotient.dim):
        assert composite({i: 1}) == stepwise({i: 1})
