"""Truncated universal enveloping pseudoalgebra of a DG Poisson current.

The free side is the current over H of the word algebra on letters ``M_i``
and ``H_i`` (one pair per module generator of the source), with words of
length at most ``L``. Pseudoproducts concatenate words:
``(f x w1) * (g x w2) = (f x g) (x)_H (1 x w1 w2)``.

Truncation is by filtration: the relation ideal at level ``L`` is spanned by
``u * r * v`` with every word of the product of length at most ``L``. Cutting
off all words longer than ``L`` instead would kill the unit, because the
unit relation makes ``M_1^(L+1)`` equal to ``1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as cartesian
from typing import Mapping

from .hmodule import FiniteDimModule, FreeModule, HLinearMap, Unsupported, hlinear_check
from .linalg import EchelonBasis, QuotientSpace, vec_add
from .polytensor import SWAP, PolyTensor, apply_module_map, apply_perm
from .pseudo_core import PseudoStructure, graded_sign
from .report import Report

RELATIONS = ("M-product", "H-bracket", "M-bracket", "H-product", "M-unit")
PTRIPLE_RELATION = {"P1": "M-product", "P2": "H-bracket", "P3": "M-bracket", "P4": "H-product"}
TRUNCATION_CONVENTION = "relation ideal at length L: saturated span of u*r*v whose words all have length <= L"


class NotATriple(ValueError):
    def __init__(self, report: Report):
        names = ", ".join(f"{law} ({PTRIPLE_RELATION.get(law, law)})" for law in report.failed_laws())
        super().__init__(f"not a P-triple: {names}")
        self.report = report


def _u(k) -> dict:
    return {k: Fraction(1)}


def _require_group_current(A: PseudoStructure) -> None:
    if not isinstance(A.module, FreeModule):
        raise Unsupported("the envelope is built over a current (free module) source")
    if not A.kernel.is_group:
        raise Unsupported("the envelope needs a finite k-basis, so a group kernel")


# -- the free word current -----------------------------------------------------


@dataclass(eq=False)
class WordCurrent:
    """``H (x) T_{<=L}`` on letters ``("M", i)`` and ``("H", i)``."""

    source: PseudoStructure
    bound: int
    words: list
    index: dict
    structure: PseudoStructure
    M: HLinearMap
    H: HLinearMap

    @property
    def module(self) -> FreeModule:
        return self.structure.module

    @property
    def kernel(self):
        return self.source.kernel

    def word(self, w: tuple, h=None) -> dict:
        return {(self.index[w], h if h is not None else self.kernel.one()): Fraction(1)}

    def length(self, vec: Mapping) -> int:
        return max((len(self.words[k[0]]) for k in vec), default=0)

    def words_up_to(self, n: int) -> list[tuple]:
        return [w for w in self.words if len(w) <= n]

    def star(self, x: Mapping, y: Mapping) -> PolyTensor:
        return self.structure.br(x, y)

    def basis(self) -> list:
        """k-basis keys ordered by word length."""
        return [(i, g) for i in range(len(self.words)) for g in self.kernel.basis()]

    def order(self, key) -> tuple:
        return (len(self.words[key[0]]), key[0], self.kernel.sort_key(key[1]))


def build_word_current(A: PseudoStructure, bound: int) -> WordCurrent:
    _require_group_current(A)
    if bound < 2:
        raise ValueError("word bound must be at least 2 to hold the quadratic relations")
    src = A.module
    kernel = A.kernel
    one = kernel.one()
    p = A.bracket_degree
    letters = [("M", i) for i in range(src.rank)] + [("H", i) for i in range(src.rank)]
    words: list[tuple] = []
    for n in range(bound + 1):
        words.extend(cartesian(letters, repeat=n))
    index = {w: t for t, w in enumerate(words)}

    def letter_degree(letter) -> int:
        kind, i = letter
        return src.degrees[i] + (p if kind == "H" else 0)

    labels = tuple(" ".join(f"{k}_{src.labels[i]}" for k, i in w) or "1" for w in words)
    degrees = tuple(sum(letter_degree(x) for x in w) for w in words)
    E = FreeModule(kernel, len(words), labels, degrees, f"T({A.name})")
    table = {}
    for w1 in words:
        for w2 in words:
            if len(w1) + len(w2) <= bound:
                table[((index[w1], one), (index[w2], one))] = PolyTensor.pure(E, {(index[w1 + w2], one): Fraction(1)})
    S = PseudoStructure(
        E, None, table, 0, None, True, E.name, {(index[()], one): Fraction(1)},
        {"truncation": TRUNCATION_CONVENTION}, lambda k: len(words[k[0]]), bound,
    )
    M = HLinearMap(src, E, {(i, one): {(index[(("M", i),)], one): Fraction(1)} for i in range(src.rank)}, 0, "M")
    H = HLinearMap(src, E, {(i, one): {(index[(("H", i),)], one): Fraction(1)} for i in range(src.rank)}, p, "H")
    return WordCurrent(A, bound, words, index, S, M, H)


# -- relations --------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Relation:
    name: str
    pair: tuple
    tensor: PolyTensor

    def parts(self) -> list[dict]:
        return list(self.tensor.module_parts().values())


def envelope_relations(W: WordCurrent) -> list[Relation]:
    """Each relation as ``lhs - rhs`` in ``(H x H) (x)_H T``, on generator pairs."""
    A = W.source
    E = W.module
    p = A.bracket_degree
    M, H = W.M, W.H
    keys = A.check_keys()
    out: list[Relation] = []
    for a in keys:
        for b in keys:
            ua, ub = _u(a), _u(b)
            da, db = A.deg(a), A.deg(b)
            pair = (A.fmt(a), A.fmt(b))
            if A.product is not None:
                lhs = PolyTensor.pure(E, M(A.product_keys(a, b)))
                out.append(Relation("M-product", pair, lhs - W.star(M(ua), M(ub))))
                lhs = PolyTensor.pure(E, H(A.product_keys(a, b)))
                rhs = W.star(M(ua), H(ub)) + W.star(M(ub), H(ua)).scale(graded_sign("commute", da, db))
                out.append(Relation("H-product", pair, lhs - rhs))
            if A.bracket is not None:
                br = A.bracket_keys(a, b)
                rhs = W.star(H(ua), H(ub)) - apply_perm(W.star(H(ub), H(ua)), SWAP).scale(graded_sign("skew", da, db, p))
                out.append(Relation("H-bracket", pair, apply_module_map(br, H) - rhs))
                rhs = W.star(H(ua), M(ub)) - apply_perm(W.star(M(ub), H(ua)), SWAP).scale(graded_sign("mixed", da, db, p))
                out.append(Relation("M-bracket", pair, apply_module_map(br, M) - rhs))
    if A.unit:
        lhs = PolyTensor.pure(E, M(A.unit))
        out.append(Relation("M-unit", ("1",), lhs - PolyTensor.pure(E, W.word(()))))
    return out


def _multiples(W: WordCurrent, x: Mapping, level: int):
    """Components of ``u * x * v`` over words with everything of length at most ``level``."""
    room = level - W.length(x)
    for u in W.words_up_to(room):
        left = [x] if not u else list(W.star(W.word(u), x).module_parts().values())
        for y in left:
            for v in W.words_up_to(room - len(u)):
                if not v:
                    yield y
                else:
                    yield from W.star(y, W.word(v)).module_parts().values()


def _ideal(W: WordCurrent, relations: list[Relation], level: int) -> EchelonBasis:
    """Saturated H-span of ``u * r * v`` with all words of length at most ``level``.

    Saturation repeats the two-sided multiplication on short elements that
    arise by cancellation, so the partial products on classes are well defined.
    """
    ech = EchelonBasis(order=W.order)
    gens = W.kernel.generator_keys()

    def push(v: Mapping) -> bool:
        grew = False
        queue = [dict(v)]
        while queue:
            x = ech.reduce(queue.pop())
            if x and ech.add(x):
                grew = True
                queue.extend(W.module.act(g, x) for g in gens)
        return grew

    for rel in relations:
        for part in rel.parts():
            if W.length(part) <= level:
                for y in _multiples(W, part, level):
                    push(y)
    done: set = set()
    while True:
        grew = False
        for pivot, row in list(ech.rows.items()):
            sig = (pivot, tuple(sorted(row.items(), key=lambda kv: W.order(kv[0]))))
            if sig in done or W.length(row) >= level:
                continue
            done.add(sig)
            for y in _multiples(W, row, level):
                grew |= push(y)
        if not grew:
            return ech


def derive_differential(W: WordCurrent) -> HLinearMap:
    """The derivation of the word current with ``M_a -> M_{da}``, ``H_a -> H_{da}``."""
    A = W.source
    one = W.kernel.one()
    if A.differential is None:
        return HLinearMap.zero(W.module, W.module, 1, "D")
    letter_images = {}
    for kind, f in (("M", W.M), ("H", W.H)):
        for i in range(A.module.rank):
            img = f(A.d(_u((i, one))))
            if any(h != one or len(W.words[w]) != 1 for w, h in img):
                raise Unsupported("letter differentials must be letters with trivial Hopf part")
            letter_images[(kind, i)] = {W.words[w][0]: c for (w, _h), c in img.items()}
    p = A.bracket_degree
    imgs = {}
    for w in W.words:
        out: dict = {}
        sign = 1
        for k, letter in enumerate(w):
            for new, c in letter_images[letter].items():
                vec_add(out, W.word(w[:k] + (new,) + w[k + 1:]), sign * c)
            kind, i = letter
            if (A.module.degrees[i] + (p if kind == "H" else 0)) % 2:
                sign = -sign
        imgs[(W.index[w], one)] = out
    return HLinearMap(W.module, W.module, imgs, 1, "D")


# -- the envelope -----------------------------------------------------------------------


@dataclass(eq=False)
class EnvelopePresentation:
    words: WordCurrent
    relations: list[Relation]
    ideal: EchelonBasis
    quotient: QuotientSpace
    levels: list[int]
    structure: PseudoStructure
    M: HLinearMap
    H: HLinearMap
    free_differential: HLinearMap
    conventions: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.quotient.dim

    def project(self, v: Mapping) -> dict:
        return self.quotient.project(v)

    def lift(self, i: int) -> dict:
        return self.quotient.lift(i)


def build_envelope_truncated(A: PseudoStructure, word_bound: int = 3) -> EnvelopePresentation:
    """Quotient of the length-filtered word current by the envelope relations."""
    W = build_word_current(A, word_bound)
    rels = envelope_relations(W)
    ideal = _ideal(W, rels, word_bound)
    ambient = [_u(k) for k in sorted(W.basis(), key=W.order)]
    Q = QuotientSpace(ideal.basis(), ambient, order=W.order)
    kernel = W.kernel
    n = Q.dim
    levels = [W.length(Q.lift(i)) for i in range(n)]
    mats = []
    for g in kernel.generator_keys():
        m = [[Fraction(0)] * n for _ in range(n)]
        for j in range(n):
            for i, c in Q.project(W.module.act(g, Q.lift(j))).items():
                m[i][j] = c
        mats.append(m)
    E = W.module
    labels = tuple(E.format_vec(Q.lift(i)) for i in range(n))
    degrees = tuple(E.homogeneous_degree(Q.lift(i)) or 0 for i in range(n))
    QM = FiniteDimModule(kernel, n, tuple(mats), labels, degrees, f"U({A.name})")

    def project_tensor(t: PolyTensor) -> PolyTensor:
        acc: dict = {}
        for (hs, mk), c in t.terms.items():
            for q, d in Q.project(_u(mk)).items():
                vec_add(acc, {(hs, q): d}, c)
        return PolyTensor(QM, t.n, acc)

    table = {}
    for i in range(n):
        for j in range(n):
            if levels[i] + levels[j] <= word_bound:
                t = project_tensor(W.star(Q.lift(i), Q.lift(j)))
                if not t.is_zero():
                    table[(i, j)] = t
    D = derive_differential(W)
    d = HLinearMap(QM, QM, {j: Q.project(D(Q.lift(j))) for j in range(n)}, 1, "D")
    conventions = {"truncation": TRUNCATION_CONVENTION, "word bound": str(word_bound)}
    S = PseudoStructure(
        QM, None, table, 0, d, True, QM.name, Q.project(W.word(())), dict(conventions),
        lambda i: levels[i], word_bound,
    )
    Mq = HLinearMap(A.module, QM, {g: Q.project(W.M(_u(g))) for g in A.module.generators()}, 0, "M")
    Hq = HLinearMap(A.module, QM, {g: Q.project(W.H(_u(g))) for g in A.module.generators()}, A.bracket_degree, "H")
    return EnvelopePresentation(W, rels, ideal, Q, levels, S, Mq, Hq, D, conventions)


def check_envelope(env: EnvelopePresentation, oracle_dim: int | None = None) -> Report:
    """Consistency of the truncated relations, and the derived differential."""
    W = env.words
    rep = Report(title=f"envelope of {W.source.name} at word bound {W.bound}", conventions=dict(env.conventions))
    rep.conventions["dimension"] = str(env.dim)
    unit = W.word(())
    rep.add("relation-consistent", ("unit",), not env.ideal.contains(unit), "the unit lies in the relation ideal")
    m_images = EchelonBasis()
    for a in W.source.module.basis():
        m_images.add(env.M(_u(a)))
    rank = m_images.rank
    want = len(W.source.module.basis())
    rep.add("relation-consistent", ("M injective",), rank == want, f"M has rank {rank} on a space of dimension {want}")
    levels = {}
    for level in range(W.bound):
        low = _ideal(W, env.relations, level).rank
        top = sum(1 for piv in env.ideal.rows if len(W.words[piv[0]]) <= level)
        levels[level] = f"{low}/{top}"
    rep.conventions["relation rank by length (own level/cut from top)"] = ", ".join(f"{k}: {v}" for k, v in levels.items())
    for row in env.ideal.basis():
        if W.length(row) < W.bound:
            missing = [y for y in _multiples(W, row, W.bound) if not env.ideal.contains(y)]
            rep.add("relation-consistent", ("saturated", W.module.format_vec(row)[:60]), not missing,
                    f"{len(missing)} multiples leave the ideal")
    D = env.free_differential
    for row in env.ideal.basis():
        img = D(row)
        rep.add("relation-preserved", (W.module.format_vec(row)[:60],), env.ideal.contains(img),
                f"D(r) = {W.module.format_vec(img)} is not a relation")
    d = env.structure.differential
    for i in range(env.dim):
        dd = d(d(_u(i)))
        rep.add("D-square", (env.structure.fmt(i),), not dd, f"D^2 = {env.structure.module.format_vec(dd)}")
    if oracle_dim is not None:
        rep.add("dimension-oracle", ("dim",), env.dim == oracle_dim, f"quotient has dimension {env.dim}, oracle says {oracle_dim}")
    return rep


# -- P-triples and the induced map -------------------------------------------------------


@dataclass(eq=False)
class PTriple:
    """An associative DG pseudoalgebra ``target`` (pseudoproduct in the bracket slot) with ``f`` and ``g``."""

    source: PseudoStructure
    target: PseudoStructure
    f: HLinearMap
    g: HLinearMap
    name: str = "triple"


def check_ptriple(T: PTriple) -> Report:
    A, B, f, g = T.source, T.target, T.f, T.g
    p = A.bracket_degree
    rep = Report(title=f"P-triple {T.name} over {A.name}")
    for law, rel in PTRIPLE_RELATION.items():
        rep.conventions[law] = rel
    keys = A.check_keys()
    star = B.br
    sigma = lambda x: apply_perm(x, SWAP)  # noqa: E731
    for a in keys:
        for b in keys:
            ua, ub = _u(a), _u(b)
            da, db = A.deg(a), A.deg(b)
            inst = (A.fmt(a), A.fmt(b))
            fa, fb, ga, gb = f(ua), f(ub), g(ua), g(ub)
            if A.product is not None:
                diff = PolyTensor.pure(B.module, f(A.product_keys(a, b))) - star(fa, fb)
                rep.add("P1", inst, diff.is_zero(), f"M-product relation: lhs - rhs = {diff}")
                rhs = star(fa, gb) + star(fb, ga).scale(graded_sign("commute", da, db))
                diff = PolyTensor.pure(B.module, g(A.product_keys(a, b))) - rhs
                rep.add("P4", inst, diff.is_zero(), f"H-product relation: lhs - rhs = {diff}")
            if A.bracket is not None:
                br = A.bracket_keys(a, b)
                rhs = star(ga, gb) - sigma(star(gb, ga)).scale(graded_sign("skew", da, db, p))
                diff = apply_module_map(br, g) - rhs
                rep.add("P2", inst, diff.is_zero(), f"H-bracket relation: lhs - rhs = {diff}")
                rhs = star(ga, fb) - sigma(star(fb, ga)).scale(graded_sign("mixed", da, db, p))
                diff = apply_module_map(br, f) - rhs
                rep.add("P3", inst, diff.is_zero(), f"M-bracket relation: lhs - rhs = {diff}")
    fmt = B.module.format_vec
    for a in keys:
        ua = _u(a)
        for name, m in (("f", f), ("g", g)):
            diff = vec_add(m(A.d(ua)), B.d(m(ua)), -1)
            rep.add("P-d", (name, A.fmt(a)), not diff, f"{name}(da) - d{name}(a) = {fmt(diff)}")
    return rep


def _trivial_part(t: PolyTensor, one) -> dict:
    out: dict = {}
    for (hs, k), c in t.terms.items():
        if any(h != one for h in hs):
            raise Unsupported("target products must have trivial Hopf part to evaluate words")
        vec_add(out, {k: c})
    return out


def induce_phi(env: EnvelopePresentation, T: PTriple) -> tuple[HLinearMap, Report]:
    """The map ``U -> B`` with ``M_a -> f(a)``, ``H_a -> g(a)``; refused unless ``T`` is a P-triple."""
    triple = check_ptriple(T)
    if not triple.ok:
        raise NotATriple(triple)
    W = env.words
    B = T.target
    if not B.unit:
        raise Unsupported("target needs a unit for the empty word")
    one = W.kernel.one()
    letters = {}
    for (kind, m) in (("M", T.f), ("H", T.g)):
        for i in range(W.source.module.rank):
            letters[(kind, i)] = m(_u((i, one)))
    cache: dict = {(): dict(B.unit)}

    def evaluate(w: tuple) -> dict:
        if w not in cache:
            cache[w] = _trivial_part(B.br(evaluate(w[:-1]), letters[w[-1]]), one)
        return cache[w]

    free_phi = HLinearMap(W.module, B.module, {(W.index[w], one): evaluate(w) for w in W.words}, 0, "phi~")
    phi = HLinearMap(env.structure.module, B.module, {i: free_phi(env.lift(i)) for i in range(env.dim)}, 0, "phi")
    rep = Report(title=f"induced map to {B.name}")
    rep.extend(triple)
    fmt = B.module.format_vec
    for row in env.ideal.basis():
        img = free_phi(row)
        rep.add("phi-well-defined", (W.module.format_vec(row)[:60],), not img, f"phi(r) = {fmt(img)}")
    for g in W.source.module.generators():
        for name, env_map, want in (("M", env.M, T.f), ("H", env.H, T.g)):
            diff = vec_add(phi(env_map(_u(g))), want(_u(g)), -1)
            rep.add("phi-generators", (name, W.source.fmt(g)), not diff, f"phi({name}(a)) - target = {fmt(diff)}")
    d = env.structure.differential
    for i in range(env.dim):
        diff = vec_add(phi(d(_u(i))), B.d(phi(_u(i))), -1)
        rep.add("phi-d", (env.structure.fmt(i),), not diff, f"phi(Dx) - d phi(x) = {fmt(diff)}")
    S = env.structure
    for (i, j), t in S.bracket.items():
        diff = apply_module_map(t, phi) - B.br(phi(_u(i)), phi(_u(j)))
        rep.add("hom-product", (S.fmt(i), S.fmt(j)), diff.is_zero(), f"phi(x*y) - phi(x)*phi(y) = {diff}")
    for v in hlinear_check(phi).verdicts:
        rep.add(v.law, v.instance, v.passed, v.witness)
    return phi, rep


def envelope_triple(env: EnvelopePresentation) -> PTriple:
    return PTriple(env.words.source, env.structure, env.M, env.H, "(U, M, H)")


def endomorphism_triple(A: PseudoStructure, P) -> PTriple:
    """``(Cur End P, left multiplication, adjoint)`` for a current ``A = Cur P``.

    ``P`` is the classical :class:`~pseudoalg.constructions.BaseAlgebra`.
    The differential on ``End P`` is the graded commutator with ``d``.
    """
    _require_group_current(A)
    kernel = A.kernel
    one = kernel.one()
    n = P.dim
    deg = P.degrees

    def unit_index(r: int, c: int) -> int:
        return r * n + c

    labels = tuple(f"E{P.labels[r]},{P.labels[c]}" for r in range(n) for c in range(n))
    degrees = tuple(deg[r] - deg[c] for r in range(n) for c in range(n))
    E = FreeModule(kernel, n * n, labels, degrees, f"End {P.name}")
    table = {}
    for r in range(n):
        for c in range(n):
            for d in range(n):
                table[((unit_index(r, c), one), (unit_index(c, d), one))] = PolyTensor.pure(E, {(unit_index(r, d), one): Fraction(1)})
    dmat = P.differential or {}
    imgs = {}
    for r in range(n):
        for c in range(n):
            out: dict = {}
            for k, x in dmat.get(r, {}).items():
                vec_add(out, {(unit_index(k, c), one): x})
            s = -1 if (deg[r] - deg[c]) % 2 else 1
            for j in range(n):
                x = dmat.get(j, {}).get(c)
                if x:
                    vec_add(out, {(unit_index(r, j), one): x}, -s)
            imgs[(unit_index(r, c), one)] = out
    B = PseudoStructure(
        E, None, table, 0, HLinearMap(E, E, imgs, 1, "[d,-]"), True, E.name,
        {(unit_index(i, i), one): Fraction(1) for i in range(n)},
    )

    def operator(op) -> HLinearMap:
        images = {}
        for a in range(n):
            out: dict = {}
            for c in range(n):
                for r, x in op({a: Fraction(1)}, {c: Fraction(1)}).items():
                    vec_add(out, {(unit_index(r, c), one): x})
            images[(a, one)] = out
        return images

    f = HLinearMap(A.module, E, operator(P.mul), 0, "L")
    g = HLinearMap(A.module, E, operator(P.br), A.bracket_degree, "ad")
    return PTriple(A, B, f, g, f"(End {P.name}, L, ad)")


__all__ = [
    "EnvelopePresentation",
    "NotATriple",
    "PTriple",
    "PTRIPLE_RELATION",
    "RELATIONS",
    "Relation",
    "WordCurrent",
    "build_envelope_truncated",
    "build_word_current",
    "check_envelope",
    "check_ptriple",
    "derive_differential",
    "endomorphism_triple",
    "envelope_relations",
    "envelope_triple",
    "induce_phi",
]
