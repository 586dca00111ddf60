"""Small named instances used by the tests, scripts and documentation."""

from __future__ import annotations

from fractions import Fraction

from .constructions import BaseAlgebra
from .hmodule import FiniteDimModule, FreeModule, HLinearMap
from .ore import OreData
from .pseudo_core import PseudoStructure, bracket_from_vectors
from .scalars_hopf import HopfKernel


def _unital(n: int, nonunit_products: dict | None = None) -> dict:
    product = {(0, i): {i: 1} for i in range(n)}
    product.update({(i, 0): {i: 1} for i in range(1, n)})
    product.update(nonunit_products or {})
    return product


def dg_affine() -> BaseAlgebra:
    """``span{1, u, v}``, ``|v| = 1``, ``du = v``, ``{u, v} = v``, square-zero on ``u, v``."""
    return BaseAlgebra(
        3, _unital(3), {(1, 2): {2: 1}, (2, 1): {2: -1}}, ("1", "u", "v"), {0: Fraction(1)},
        (0, 0, 1), "P'", {1: {2: 1}}, True, 0,
    )


def endomorphism(S: PseudoStructure, images: dict, name: str) -> HLinearMap:
    one = S.kernel.one()
    imgs = {(i, one): {(j, one): Fraction(c) for j, c in v.items()} for i, v in images.items()}
    return HLinearMap(S.module, S.module, imgs, 0, name)


def affine_current(kernel: HopfKernel) -> PseudoStructure:
    """Current of ``k1 + span{e, f}`` with ``{e, f} = f`` (free module, generators 1, e, f)."""
    one = kernel.one()
    M = FreeModule(kernel, 3, ("1", "e", "f"), name="aff")
    g = [(i, one) for i in range(3)]
    product = {(g[i], g[j]): {g[k]: Fraction(c) for k, c in v.items()} for (i, j), v in _unital(3).items()}
    bracket = bracket_from_vectors(M, {(g[1], g[2]): {g[2]: 1}, (g[2], g[1]): {g[2]: -1}})
    return PseudoStructure(M, product, bracket, name="aff", unit={g[0]: Fraction(1)})


def truncated_current(kernel: HopfKernel) -> PseudoStructure:
    """Current of ``k[y]/(y^3)`` with zero bracket."""
    one = kernel.one()
    M = FreeModule(kernel, 3, ("1", "y", "y2"), name="trunc")
    g = [(i, one) for i in range(3)]
    product = {(g[i], g[j]): {g[k]: Fraction(c) for k, c in v.items()} for (i, j), v in _unital(3, {(1, 1): {2: 1}}).items()}
    return PseudoStructure(M, product, {}, name="trunc", unit={g[0]: Fraction(1)})


def ore_instances(kernel: HopfKernel) -> list[tuple[str, OreData]]:
    """Validated (alpha, delta) pairs on two bases."""
    A = affine_current(kernel)
    T = truncated_current(kernel)
    return [
        ("affine", OreData(A, endomorphism(A, {1: {2: 1}, 2: {2: 1}}, "alpha"), endomorphism(A, {1: {2: 2}, 2: {2: -1}}, "delta"))),
        ("affine-inner", OreData(A, endomorphism(A, {}, "0"), endomorphism(A, {1: {2: -1}}, "ad_f"))),
        ("truncated", OreData(T, endomorphism(T, {1: {1: 1}, 2: {2: 2}}, "y d/dy"), endomorphism(T, {1: {2: 1}}, "y^2 d/dy"))),
    ]


def corrupted_ore_instances(kernel: HopfKernel) -> list[tuple[str, OreData]]:
    """Five pairs violating a derivation condition."""
    A = affine_current(kernel)
    T = truncated_current(kernel)
    good_alpha = {1: {2: 1}, 2: {2: 1}}
    return [
        ("alpha e->e", OreData(A, endomorphism(A, {1: {1: 1}}, "alpha"), endomorphism(A, {}, "0"))),
        ("delta e->e", OreData(A, endomorphism(A, good_alpha, "alpha"), endomorphism(A, {1: {1: 1}}, "delta"))),
        ("alpha e->1", OreData(A, endomorphism(A, {1: {0: 1}}, "alpha"), endomorphism(A, {}, "0"))),
        ("alpha = id", OreData(T, endomorphism(T, {0: {0: 1}, 1: {1: 1}, 2: {2: 1}}, "id"), endomorphism(T, {}, "0"))),
        ("delta = d/dy", OreData(T, endomorphism(T, {1: {1: 1}, 2: {2: 2}}, "y d/dy"), endomorphism(T, {1: {0: 1}, 2: {1: 2}}, "d/dy"))),
    ]


def square_zero(kernel: HopfKernel, name: str = "A", action=None) -> PseudoStructure:
    """``span{1, t}`` with ``t^2 = 0``, zero bracket, zero differential; trivial action unless given."""
    if action is None:
        M = FiniteDimModule.trivial(kernel, 2, labels=("1", "t"), name=name)
    else:
        M = FiniteDimModule(kernel, 2, action, ("1", "t"), (0, 0), name)
    product = {(0, 0): {0: Fraction(1)}, (0, 1): {1: Fraction(1)}, (1, 0): {1: Fraction(1)}}
    return PseudoStructure(M, product, {}, 0, HLinearMap.zero(M, M, 1, "d"), True, name, {0: Fraction(1)})


def two_term_complex(kernel: HopfKernel, name: str = "C") -> PseudoStructure:
    """``e0 -> e1`` in degrees 0 and 1, zero product and bracket, trivial action."""
    base = FiniteDimModule.trivial(kernel, 2)
    M = FiniteDimModule(kernel, 2, base.matrices, ("e0", "e1"), (0, 1), name)
    return PseudoStructure(M, {}, {}, 0, HLinearMap(M, M, {0: {1: Fraction(1)}}, 1, "d"), True, name)


def tensor_violating_pair() -> tuple[PseudoStructure, PseudoStructure]:
    """Over ``k[d1]``: ``d1`` scales ``t``, so the fourth compatibility condition fails at ``h = d1``."""
    K = HopfKernel.polynomial(1)
    A = square_zero(K, "A", ([[0, 0], [0, 1]],))
    B = square_zero(K, "B")
    return A, B
