from __future__ import annotations

from fractions import Fraction

import pytest

from oracles import classical_envelope_dimension
from pseudoalg.catalog import affine_current, dg_affine
from pseudoalg.constructions import BaseAlgebra, build_current_poisson, unital_affine_poisson
from pseudoalg.enveloping import (
    RELATIONS,
    NotATriple,
    PTriple,
    build_envelope_truncated,
    build_word_current,
    check_envelope,
    check_ptriple,
    derive_differential,
    endomorphism_triple,
    envelope_relations,
    envelope_triple,
    induce_phi,
)
from pseudoalg.hmodule import FiniteDimModule, FreeModule, HLinearMap, Unsupported
from pseudoalg.pseudo_core import OutsideTruncation, PseudoStructure
from pseudoalg.scalars_hopf import HopfKernel

P1 = HopfKernel.polynomial(1)
Z2 = HopfKernel.group(2)


def oracle(base: BaseAlgebra, bound: int, kernel: HopfKernel = Z2) -> int:
    unit = next(iter(base.unit)) if base.unit else None
    return kernel.order() * classical_envelope_dimension(base.dim, base.product, base.bracket, unit, base.degrees, bound)


def zero_base() -> BaseAlgebra:
    return BaseAlgebra(1, {}, {}, ("a",), name="zero")


@pytest.fixture(scope="module")
def env3():
    return build_envelope_truncated(build_current_poisson(dg_affine(), Z2), 3)


def _gen(A: PseudoStructure, i: int) -> dict:
    return {(i, A.kernel.one()): Fraction(1)}


def test_word_current_shape():
    A = build_current_poisson(dg_affine(), Z2)
    W = build_word_current(A, 2)
    assert len(W.words) == 1 + 6 + 36
    assert W.module.degrees[W.index[(("H", 2),)]] == 1
    with pytest.raises(ValueError):
        build_word_current(A, 1)


def test_relations_cover_every_kind():
    W = build_word_current(build_current_poisson(dg_affine(), Z2), 2)
    rels = envelope_relations(W)
    assert {r.name for r in rels} == set(RELATIONS)
    assert sum(r.name == "M-unit" for r in rels) == 1
    for r in rels:
        for part in r.parts():
            assert W.module.homogeneous_degree(part) is not None, (r.name, r.pair)


def test_zero_structure_has_zero_differential():
    A = build_current_poisson(unital_affine_poisson(), Z2)
    W = build_word_current(A, 2)
    D = derive_differential(W)
    assert all(not D({k: 1}) for k in W.basis())


@pytest.mark.parametrize("bound, dim", [(2, 18), (3, 22)])
def test_envelope_dimension_matches_oracle(bound, dim):
    env = build_envelope_truncated(build_current_poisson(dg_affine(), Z2), bound)
    assert env.dim == dim == oracle(dg_affine(), bound)
    rep = check_envelope(env, oracle(dg_affine(), bound))
    assert rep.ok, rep.failed_laws()
    assert rep.passed("relation-preserved") and rep.passed("D-square")


def test_zero_base_count():
    # words 1, M, H, MM, MH, HM, HH; relations kill MM, MH and HM, leaving 1, M, H, HH
    env = build_envelope_truncated(build_current_poisson(zero_base(), Z2), 2)
    assert env.dim == 4 * 2 == oracle(zero_base(), 2)
    assert check_envelope(env).ok


def test_relation_instances_hold_on_classes(env3):
    W = env3.words
    M = lambda i: W.word((("M", i),))  # noqa: E731
    # 1 * u = u and u * v = 0
    assert env3.project(W.word((("M", 0), ("M", 1)))) == env3.project(M(1))
    assert env3.project(W.word((("M", 1), ("M", 2)))) == {}
    assert env3.project(M(0)) == env3.project(W.word(()))


def test_envelope_triple_and_identity(env3):
    T = envelope_triple(env3)
    assert check_ptriple(T).ok
    phi, rep = induce_phi(env3, T)
    assert rep.ok, rep.failed_laws()
    for i in range(env3.dim):
        assert phi({i: 1}) == {i: 1}


def test_endomorphism_triple(env3):
    A = env3.words.source
    T = endomorphism_triple(A, dg_affine())
    assert check_ptriple(T).ok
    phi, rep = induce_phi(env3, T)
    assert rep.ok, rep.failed_laws()
    for i in range(3):
        assert phi(env3.M(_gen(A, i))) == T.f(_gen(A, i))
        assert phi(env3.H(_gen(A, i))) == T.g(_gen(A, i))


def test_bad_triples(env3):
    A = env3.words.source
    T = envelope_triple(env3)
    zero = HLinearMap.zero(A.module, T.target.module, A.bracket_degree, "0")
    bad = PTriple(A, T.target, T.f, zero, "(U, M, 0)")
    assert "P3" in check_ptriple(bad).failed_laws()
    with pytest.raises(NotATriple, match=r"P3 \(M-bracket\)"):
        induce_phi(env3, bad)
    # negating g on the single generator u breaks {u * v} = v
    images = {g: T.g({g: 1}) for g in A.module.generators()}
    u = (1, A.kernel.one())
    images[u] = {k: -c for k, c in images[u].items()}
    flip = HLinearMap(A.module, T.target.module, images, A.bracket_degree, "g'")
    assert "P2" in check_ptriple(PTriple(A, T.target, T.f, flip)).failed_laws()


def test_zero_triple():
    A = build_current_poisson(zero_base(), Z2)
    Z = FiniteDimModule.trivial(Z2, 0)
    B = PseudoStructure(Z, None, {}, 0, HLinearMap.zero(Z, Z, 1, "d"), True, "0")
    zero = HLinearMap.zero(A.module, Z)
    assert check_ptriple(PTriple(A, B, zero, zero)).ok


def test_unsupported_sources():
    with pytest.raises(Unsupported):
        build_envelope_truncated(build_current_poisson(dg_affine(), P1), 2)
    square = PseudoStructure(FiniteDimModule.trivial(Z2, 1), {}, {})
    with pytest.raises(Unsupported):
        build_word_current(square, 2)
    with pytest.raises(Unsupported):
        endomorphism_triple(affine_current(P1), dg_affine())


def test_products_past_the_bound_are_refused(env3):
    S = env3.structure
    top = [i for i in range(env3.dim) if env3.levels[i] == 3]
    one = [i for i in range(env3.dim) if env3.levels[i] == 1]
    assert top and one
    with pytest.raises(OutsideTruncation):
        S.bracket_keys(top[0], one[0])
    assert isinstance(env3.words.module, FreeModule)
