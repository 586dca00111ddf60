from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pseudoalg.catalog import affine_current, dg_affine, ore_instances, square_zero, truncated_current, two_term_complex
from pseudoalg.constructions import BaseAlgebra, affine_lie, build_current_lie, build_current_poisson, unital_affine_poisson
from pseudoalg.hmodule import FiniteDimModule, FreeModule, Unsupported
from pseudoalg.ore import build_ore_extension
from pseudoalg.polytensor import PolyTensor, straighten
from pseudoalg.pseudo_core import (
    OutsideTruncation,
    PseudoStructure,
    bracket_eval,
    bracket_from_vectors,
    check_assoc,
    check_commutative,
    check_hdifferential,
    check_jacobi,
    check_leibniz,
    check_skew,
    graded_sign,
    negate_bracket,
    run_suite,
)
from pseudoalg.scalars_hopf import HopfKernel

P1 = HopfKernel.polynomial(1)
Z2 = HopfKernel.group(2)
ONE, D = (0,), (1,)


def virasoro(sign: int) -> PseudoStructure:
    """``{e*e} = (1 x d - sign d x 1) (x)_H e`` on a rank-one free module."""
    M = FreeModule(P1, 1, ("e",))
    e = M.gen_vec(0)
    x = straighten(M, [((ONE, D), e)]) - straighten(M, [((D, ONE), e)]).scale(sign)
    return PseudoStructure(M, bracket={(M.gen(0), M.gen(0)): x}, name="Vir")


def truncated_poly(action) -> PseudoStructure:
    """``k[t]/(t^2)`` with the given action matrix for the Hopf generator."""
    M = FiniteDimModule(action[0], 2, action[1], ("1", "t"))
    product = {(0, 0): {0: Fraction(1)}, (0, 1): {1: Fraction(1)}, (1, 0): {1: Fraction(1)}}
    return PseudoStructure(M, product, name="k[t]/t^2")


def test_sign_table():
    table = {
        ("skew", 1, 1, 0): -1, ("skew", 1, 0, 0): 1, ("skew", 0, 0, 1): -1, ("skew", 1, 0, 1): 1,
        ("commute", 1, 1, 0): -1, ("commute", 2, 1, 0): 1,
        ("d-product", 1, 0, 0): -1, ("d-product", 2, 0, 0): 1,
        ("d-bracket", 0, 0, 1): -1, ("d-bracket", 1, 0, 1): 1,
        ("leibniz-left", 1, 1, 0): -1, ("leibniz-left", 0, 1, 1): -1, ("leibniz-left", 1, 1, 1): 1,
        ("leibniz-right", 1, 1, 0): -1, ("mixed", 0, 1, 1): -1,
        ("tensor-product", 1, 1, 0): -1, ("tensor-product", 1, 2, 0): 1,
    }
    for (kind, a, b, p), want in table.items():
        assert graded_sign(kind, a, b, p) == want, (kind, a, b, p)
    with pytest.raises(ValueError):
        graded_sign("nonsense", 0)


def test_bracket_eval_examples():
    M = FreeModule(P1, 3)
    zero = PseudoStructure(M, bracket={})
    assert bracket_eval(zero, M.gen_vec(0), M.gen_vec(0)).is_zero()
    S = PseudoStructure(M, bracket=bracket_from_vectors(M, {(M.gen(0), M.gen(1)): M.gen_vec(2)}))
    assert bracket_eval(S, M.gen_vec(0, D), M.gen_vec(1)) == PolyTensor.pure(M, M.gen_vec(2), slots=(D,))
    got = bracket_eval(S, M.gen_vec(0, D), M.gen_vec(1, D))
    assert got == PolyTensor(M, 2, {(((2,),), (2, ONE)): -1, ((D,), (2, D)): 1})
    with pytest.raises(Unsupported):
        bracket_eval(PseudoStructure(M), M.gen_vec(0), M.gen_vec(0))


def test_skew_examples():
    M = FreeModule(P1, 2, ("e", "f"))
    assert check_skew(PseudoStructure(M, bracket={})).ok
    assert check_skew(build_current_lie(affine_lie(), P1)).ok
    f = M.gen_vec(1)
    bad = PseudoStructure(M, bracket=bracket_from_vectors(M, {(M.gen(0), M.gen(1)): f, (M.gen(1), M.gen(0)): f}))
    rep = check_skew(bad)
    assert not rep.ok
    assert ("e", "f") in [v.instance for v in rep.failures("skew")]


def test_jacobi_examples():
    assert check_jacobi(PseudoStructure(FreeModule(P1, 2), bracket={})).ok
    for kernel in (P1, Z2):
        assert check_jacobi(build_current_lie(affine_lie(), kernel)).ok
    assert run_suite(virasoro(1)).ok
    flipped = run_suite(virasoro(-1))
    assert set(flipped.failed_laws()) == {"skew", "jacobi"}


def test_assoc_and_commutative_examples():
    S = truncated_poly((P1, ([[0, 1], [0, 0]],)))
    assert check_assoc(S).ok and check_commutative(S).ok
    zero = PseudoStructure(FiniteDimModule.trivial(P1, 2), {})
    assert check_assoc(zero).ok
    # e0 e0 = e1, e1 e0 = e0: (e0 e0) e0 = e0 but e0 (e0 e0) = 0
    M = FiniteDimModule.trivial(P1, 2)
    bad = PseudoStructure(M, {(0, 0): {1: Fraction(1)}, (1, 0): {0: Fraction(1)}})
    assert not check_assoc(bad).ok
    assert not check_commutative(bad).ok


def test_hdifferential_examples():
    # d/dt on k[t]/(t^2) is not a derivation: d(t.t) = 0 but 2t.dt = 2
    ddt = check_hdifferential(truncated_poly((P1, ([[0, 1], [0, 0]],))))
    assert [v.instance for v in ddt.failures()] == [("d1", "t", "t")]
    ident = check_hdifferential(truncated_poly((P1, ([[1, 0], [0, 1]],))))
    assert ("d1", "1", "1") in [v.instance for v in ident.failures()]
    assert check_hdifferential(truncated_poly((P1, ([[0, 0], [0, 0]],)))).ok
    # t -> -t is an algebra automorphism, so the group kernel acts compatibly
    assert check_hdifferential(truncated_poly((Z2, ([[1, 0], [0, -1]],)))).ok
    assert check_hdifferential(PseudoStructure(FiniteDimModule.trivial(P1, 2), {})).ok


def test_leibniz_examples():
    zero = PseudoStructure(FiniteDimModule.trivial(P1, 2), {(0, 0): {0: Fraction(1)}}, {})
    assert check_leibniz(zero).ok
    S = build_current_poisson(unital_affine_poisson(), P1)
    assert check_leibniz(S, "left").ok and check_leibniz(S, "right").ok
    # e idempotent, [e, f] = f: {f, e.e} = -f but 2{f, e}.e = 0
    bad_base = BaseAlgebra(2, {(0, 0): {0: 1}}, {(0, 1): {1: 1}, (1, 0): {1: -1}}, ("e", "f"))
    rep = check_leibniz(build_current_poisson(bad_base, P1, validate=False), "left")
    assert ("f", "e", "e") in [v.instance for v in rep.failures()]
    with pytest.raises(ValueError):
        check_leibniz(S, "middle")


def test_run_suite_dispatch():
    S = build_current_poisson(unital_affine_poisson(), Z2)
    rep = run_suite(S)
    assert rep.ok
    for law in ("assoc", "commutative", "hdifferential", "skew", "jacobi", "leibniz-left", "leibniz-right"):
        assert rep.passed(law)
    assert rep.conventions["hdifferential"].startswith("current style")
    C = run_suite(two_term_complex(Z2))
    assert C.ok and C.passed("d-square") and C.passed("grading")
    graded = run_suite(square_zero(Z2))
    assert graded.ok and graded.passed("d-product")
    assert not run_suite(PseudoStructure(FiniteDimModule.trivial(Z2, 1), {})).has("skew")


def test_truncation_guard():
    _, data = ore_instances(P1)[0]
    S = build_ore_extension(data, degree_bound=1)
    x1 = [k for k in S.check_keys() if S.weight(k) == 1]
    with pytest.raises(OutsideTruncation):
        S.product_keys(x1[0], x1[0])


# -- properties ---------------------------------------------------------------

INSTANCES = [
    affine_current(P1), affine_current(Z2), truncated_current(P1),
    build_current_poisson(unital_affine_poisson(), P1), build_current_poisson(dg_affine(), Z2),
    virasoro(1), virasoro(-1),
]


@pytest.mark.parametrize("S", INSTANCES, ids=lambda S: f"{S.name}/{S.kernel.describe()}")
def test_skew_is_sign_symmetric(S):
    assert check_skew(S).ok == check_skew(S.with_bracket(negate_bracket(S))).ok


@pytest.mark.parametrize("S", [s for s in INSTANCES if s.product is not None], ids=lambda S: S.name)
def test_right_leibniz_follows_from_left(S):
    if check_leibniz(S, "left").ok and check_skew(S).ok and check_commutative(S).ok:
        assert check_leibniz(S, "right").ok


coeffs = st.fractions(min_value=-3, max_value=3, max_denominator=3)


@given(st.lists(coeffs, min_size=3, max_size=3), st.lists(coeffs, min_size=3, max_size=3), st.lists(coeffs, min_size=3, max_size=3))
def test_bracket_eval_is_additive(x, y, z):
    S = affine_current(P1)
    vec = lambda cs: {S.module.gen(i): c for i, c in enumerate(cs) if c}  # noqa: E731
    xy = {k: v for k, v in ((S.module.gen(i), x[i] + y[i]) for i in range(3)) if v}
    assert bracket_eval(S, xy, vec(z)) == bracket_eval(S, vec(x), vec(z)) + bracket_eval(S, vec(y), vec(z))
    assert bracket_eval(S, vec(z), xy) == bracket_eval(S, vec(z), vec(x)) + bracket_eval(S, vec(z), vec(y))
