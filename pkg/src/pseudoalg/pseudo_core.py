"""Pseudoalgebra structures given by generator tables, and exhaustive law checks.

Two product styles exist:

* ``finite``: structure constants on the k-basis of a :class:`FiniteDimModule`;
* ``current``: a free module ``H (x) A_0`` with ``(f e_i)(g e_j) = fg (e_i e_j)``.

Brackets are stored on generators (free) or basis elements (finite) and
extended by H-bilinearity (free) or k-bilinearity (finite).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as cartesian
from typing import Callable, Iterable, Mapping

from .hmodule import FiniteDimModule, FreeModule, HLinearMap, HModule, Unsupported, hlinear_check
from .linalg import vec_add, vec_scale
from .polytensor import (
    PolyTensor,
    apply_module_map,
    apply_perm,
    compose_bracket,
    multiply_slots,
    slot_mult_left,
    slot_mult_right,
)
from .report import Report

CURRENT_HDIFF_CONVENTION = "current style: h acts on a product of Hopf parts by h(fg) := (h1 f)(h2 g)"


class OutsideTruncation(ArithmeticError):
    """A product or bracket would leave the truncated range of the model."""


def graded_sign(kind: str, a: int, b: int = 0, p: int = 0) -> int:
    """Every sign rule used by the graded checks, in one place.

    ``kind`` names the rule; ``a``, ``b`` are the degrees it mentions.
    """
    if kind == "skew":  # {a*b} vs sigma{b*a}, also the Jacobi swap term
        e = (a + p) * (b + p)
    elif kind == "commute":  # ab vs ba
        e = a * b
    elif kind == "d-product":  # d(ab) = da.b + s a.db, a = |a|
        e = a
    elif kind == "d-bracket":  # d{a*b} = {da*b} + s {a*db}
        e = a + p
    elif kind == "leibniz-left":  # {a*bc}: a = |c|, b = |b|
        e = (a + p) * b
    elif kind == "leibniz-right":  # {(ab)*c}: a = |a|, b = |b|
        e = (a + p) * b
    elif kind == "mixed":  # H_a * M_b vs sigma(M_b * H_a): a = |a|, b = |b|
        e = (a + p) * b
    elif kind == "tensor-product":  # (a x b)(a' x b'): a = |a'|, b = |b|
        e = a * b
    else:
        raise ValueError(f"unknown sign rule {kind!r}")
    return -1 if e % 2 else 1


@dataclass(eq=False)
class PseudoStructure:
    """An H-module with optional product, bracket, grading and differential.

    ``product`` maps pairs of generator keys to module vectors and
    ``bracket`` maps them to two-slot :class:`PolyTensor` values. Generator
    keys are ``(i, one)`` for free modules and basis indices for finite ones.
    ``graded`` switches on the degree checks; degrees themselves live on the
    module and are 0 unless declared.
    """

    module: HModule
    product: dict | None = None
    bracket: dict | None = None
    bracket_degree: int = 0
    differential: HLinearMap | None = None
    graded: bool = False
    name: str = "A"
    unit: dict | None = None
    conventions: dict = field(default_factory=dict)
    weight: Callable[[object], int] | None = None
    weight_bound: int | None = None
    _bracket_cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        if self.bracket is not None:
            for k, v in self.bracket.items():
                if v.module is not self.module or v.n != 2:
                    raise ValueError(f"bracket entry {k} is not a two-slot polytensor over the module")
        if self.differential is not None and (self.differential.source is not self.module or self.differential.target is not self.module):
            raise ValueError("differential must be an endomorphism of the module")
        if self.style == "current":
            self.conventions.setdefault("hdifferential", CURRENT_HDIFF_CONVENTION)

    @property
    def style(self) -> str:
        return "current" if isinstance(self.module, FreeModule) else "finite"

    @property
    def kernel(self):
        return self.module.kernel

    @property
    def p(self) -> int:
        return self.bracket_degree

    def check_keys(self) -> list:
        """Keys the exhaustive checks iterate over."""
        return self.module.generators()

    def deg(self, key) -> int:
        return self.module.degree_of(key)

    def _guard(self, *keys) -> None:
        if self.weight_bound is not None and self.weight is not None:
            if sum(self.weight(k) for k in keys) > self.weight_bound:
                raise OutsideTruncation(f"total weight of {keys} exceeds {self.weight_bound}")

    def _gen(self, key):
        """Split a key into (generator key, Hopf monomial acting on it)."""
        if self.style == "current":
            return (key[0], self.kernel.one()), key[1]
        return key, None

    # -- evaluation ----------------------------------------------------------

    def product_keys(self, a, b) -> dict:
        if self.product is None:
            raise Unsupported(f"{self.name} has no product")
        self._guard(a, b)
        if self.style == "current":
            ga, ha = self._gen(a)
            gb, hb = self._gen(b)
            base = self.product.get((ga, gb), {})
            return self.module.act(self.kernel.mul_key(ha, hb), base)
        return dict(self.product.get((a, b), {}))

    def mul(self, x: Mapping, y: Mapping) -> dict:
        out: dict = {}
        for a, ca in x.items():
            for b, cb in y.items():
                vec_add(out, self.product_keys(a, b), ca * cb)
        return out

    def bracket_keys(self, a, b) -> PolyTensor:
        if self.bracket is None:
            raise Unsupported(f"{self.name} has no bracket")
        self._guard(a, b)
        hit = self._bracket_cache.get((a, b))
        if hit is not None:
            return hit
        if self.style == "current":
            ga, ha = self._gen(a)
            gb, hb = self._gen(b)
            base = self.bracket.get((ga, gb))
            out = PolyTensor(self.module, 2) if base is None else multiply_slots(base, (ha, hb))
        else:
            out = self.bracket.get((a, b)) or PolyTensor(self.module, 2)
        self._bracket_cache[(a, b)] = out
        return out

    def br(self, x: Mapping, y: Mapping) -> PolyTensor:
        out = PolyTensor(self.module, 2)
        for a, ca in x.items():
            for b, cb in y.items():
                out = out + self.bracket_keys(a, b).scale(ca * cb)
        return out

    def d(self, x: Mapping) -> dict:
        if self.differential is None:
            return {}
        return self.differential(x)

    def right(self, t: PolyTensor, c: Mapping) -> PolyTensor:
        return slot_mult_right(t, c, self.product_keys, self.style)

    def left(self, a: Mapping, t: PolyTensor) -> PolyTensor:
        return slot_mult_left(a, t, self.product_keys, self.style)

    def compose(self, x: PolyTensor, y: PolyTensor) -> PolyTensor:
        return compose_bracket(x, y, self.bracket_keys)

    def as_tensor(self, vec: Mapping, n: int = 1) -> PolyTensor:
        return PolyTensor.pure(self.module, vec, n=n)

    def fmt(self, key) -> str:
        return self.module.format_key(key)

    def with_bracket(self, bracket: dict | None, name: str | None = None) -> PseudoStructure:
        return PseudoStructure(
            self.module, self.product, bracket, self.bracket_degree, self.differential,
            self.graded, name or self.name, self.unit, dict(self.conventions), self.weight, self.weight_bound,
        )


def bracket_eval(S: PseudoStructure, a, b) -> PolyTensor:
    """``{a * b}`` for vectors (or :class:`HModuleElement`) by bilinear extension."""
    a = getattr(a, "vec", a)
    b = getattr(b, "vec", b)
    return S.br(a, b)


def _unit(k) -> dict:
    return {k: Fraction(1)}


def _tuples(S: PseudoStructure, arity: int) -> Iterable[tuple]:
    keys = S.check_keys()
    for tup in cartesian(keys, repeat=arity):
        if S.weight_bound is not None and S.weight is not None and sum(S.weight(k) for k in tup) > S.weight_bound:
            continue
        yield tup


def _report(S: PseudoStructure, title: str) -> Report:
    return Report(title=f"{title}: {S.name}", conventions=dict(S.conventions))


def _names(S: PseudoStructure, tup) -> tuple[str, ...]:
    return tuple(S.fmt(k) for k in tup)


def check_assoc(S: PseudoStructure) -> Report:
    rep = _report(S, "associativity")
    for a, b, c in _tuples(S, 3):
        lhs = S.mul(S.product_keys(a, b), _unit(c))
        rhs = S.mul(_unit(a), S.product_keys(b, c))
        diff = vec_add(dict(lhs), rhs, -1)
        rep.add("assoc", _names(S, (a, b, c)), not diff, f"(ab)c - a(bc) = {S.module.format_vec(diff)}")
    return rep


def check_commutative(S: PseudoStructure) -> Report:
    rep = _report(S, "commutativity")
    for a, b in _tuples(S, 2):
        s = graded_sign("commute", S.deg(a), S.deg(b))
        diff = vec_add(S.product_keys(a, b), S.product_keys(b, a), -s)
        rep.add("commutative", _names(S, (a, b)), not diff, f"ab - (+-)ba = {S.module.format_vec(diff)}")
    return rep


def check_hdifferential(S: PseudoStructure) -> Report:
    """``h(ab) = (h1 a)(h2 b)`` on Hopf generators and generator pairs."""
    rep = _report(S, "H-differential")
    kernel = S.kernel
    for h in kernel.generator_keys():
        for a, b in _tuples(S, 2):
            if S.style == "current":
                # the convention acts on the product of Hopf parts leg by leg
                ga, fa = S._gen(a)
                gb, fb = S._gen(b)
                lhs: dict = {}
                base = S.product.get((ga, gb), {})
                for (l1, l2), m in kernel.coproduct_key(h, 2):
                    hk = kernel.mul_key(kernel.mul_key(l1, fa), kernel.mul_key(l2, fb))
                    vec_add(lhs, S.module.act(hk, base), m)
            else:
                lhs = S.module.act(h, S.product_keys(a, b))
            rhs: dict = {}
            for (l1, l2), m in kernel.coproduct_key(h, 2):
                vec_add(rhs, S.mul(S.module.act(l1, _unit(a)), S.module.act(l2, _unit(b))), m)
            diff = vec_add(dict(lhs), rhs, -1)
            rep.add(
                "hdifferential",
                (kernel.format_key(h),) + _names(S, (a, b)),
                not diff,
                f"h(ab) - (h1 a)(h2 b) = {S.module.format_vec(diff)}",
            )
    return rep


def check_hbilinear(S: PseudoStructure) -> Report:
    """Finite tables must already be H-bilinear; free tables are by construction."""
    rep = _report(S, "H-bilinearity")
    if S.style == "current":
        return rep
    one = S.kernel.one()
    for h in S.kernel.generator_keys():
        for a, b in _tuples(S, 2):
            ab = S.bracket_keys(a, b)
            lhs = S.br(S.module.act(h, _unit(a)), _unit(b))
            d1 = lhs - multiply_slots(ab, (h, one))
            lhs2 = S.br(_unit(a), S.module.act(h, _unit(b)))
            d2 = lhs2 - multiply_slots(ab, (one, h))
            inst = (S.kernel.format_key(h),) + _names(S, (a, b))
            rep.add("hbilinear", inst + ("left",), d1.is_zero(), f"{{ha*b}} - (h x 1){{a*b}} = {d1}")
            rep.add("hbilinear", inst + ("right",), d2.is_zero(), f"{{a*hb}} - (1 x h){{a*b}} = {d2}")
    return rep


def check_skew(S: PseudoStructure) -> Report:
    rep = _report(S, "skew-symmetry")
    for a, b in _tuples(S, 2):
        s = graded_sign("skew", S.deg(a), S.deg(b), S.p)
        diff = S.bracket_keys(a, b) + apply_perm(S.bracket_keys(b, a), (1, 0)).scale(s)
        rep.add("skew", _names(S, (a, b)), diff.is_zero(), f"{{a*b}} + (+-)sigma{{b*a}} = {diff}")
    return rep


def check_jacobi(S: PseudoStructure) -> Report:
    rep = _report(S, "Jacobi identity")
    for a, b, c in _tuples(S, 3):
        s = graded_sign("skew", S.deg(a), S.deg(b), S.p)
        ta, tb, tc = (S.as_tensor(_unit(k)) for k in (a, b, c))
        first = S.compose(ta, S.bracket_keys(b, c))
        second = apply_perm(S.compose(tb, S.bracket_keys(a, c)), (1, 0, 2))
        third = S.compose(S.bracket_keys(a, b), tc)
        diff = first - second.scale(s) - third
        rep.add("jacobi", _names(S, (a, b, c)), diff.is_zero(), f"lhs - rhs = {diff}")
    return rep


def check_leibniz(S: PseudoStructure, side: str = "left") -> Report:
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    rep = _report(S, f"{side} Leibniz rule")
    for a, b, c in _tuples(S, 3):
        if side == "left":
            lhs = S.br(_unit(a), S.product_keys(b, c))
            s = graded_sign("leibniz-left", S.deg(c), S.deg(b), S.p)
            rhs = S.right(S.bracket_keys(a, b), _unit(c)) + S.right(S.bracket_keys(a, c), _unit(b)).scale(s)
        else:
            lhs = S.br(S.product_keys(a, b), _unit(c))
            s = graded_sign("leibniz-right", S.deg(a), S.deg(b), S.p)
            rhs = S.left(_unit(a), S.bracket_keys(b, c)) + S.left(_unit(b), S.bracket_keys(a, c)).scale(s)
        diff = lhs - rhs
        rep.add(f"leibniz-{side}", _names(S, (a, b, c)), diff.is_zero(), f"lhs - rhs = {diff}")
    return rep


def check_grading(S: PseudoStructure) -> Report:
    rep = _report(S, "grading")
    fmt = S.module.format_vec

    def off(vec: Mapping, want: int) -> dict:
        return {k: c for k, c in vec.items() if S.deg(k) != want}

    for a, b in _tuples(S, 2):
        want = S.deg(a) + S.deg(b)
        if S.product is not None:
            bad = off(S.product_keys(a, b), want)
            rep.add("grading", ("product",) + _names(S, (a, b)), not bad, f"wrong-degree part {fmt(bad)}")
        if S.bracket is not None:
            parts = {}
            for hs, vec in S.bracket_keys(a, b).module_parts().items():
                vec_add(parts, off(vec, want + S.p))
            rep.add("grading", ("bracket",) + _names(S, (a, b)), not parts, f"wrong-degree part {fmt(parts)}")
    if S.differential is not None:
        for a in S.check_keys():
            bad = off(S.d(_unit(a)), S.deg(a) + 1)
            rep.add("grading", ("d", S.fmt(a)), not bad, f"wrong-degree part {fmt(bad)}")
    return rep


def check_dg(S: PseudoStructure) -> Report:
    """d^2 = 0, H-linearity of d, and the graded product and bracket rules."""
    rep = _report(S, "differential")
    fmt = S.module.format_vec
    for a in S.check_keys():
        dd = S.d(S.d(_unit(a)))
        rep.add("d-square", (S.fmt(a),), not dd, f"d(d(a)) = {fmt(dd)}")
    for v in hlinear_check(S.differential).verdicts:
        rep.add("d-hlinear", v.instance, v.passed, v.witness)
    for a, b in _tuples(S, 2):
        ua, ub = _unit(a), _unit(b)
        if S.product is not None:
            lhs = S.d(S.product_keys(a, b))
            s = graded_sign("d-product", S.deg(a))
            rhs = vec_add(S.mul(S.d(ua), ub), S.mul(ua, S.d(ub)), s)
            diff = vec_add(dict(lhs), rhs, -1)
            rep.add("d-product", _names(S, (a, b)), not diff, f"d(ab) - rhs = {fmt(diff)}")
        if S.bracket is not None:
            lhs = apply_module_map(S.bracket_keys(a, b), S.differential)
            s = graded_sign("d-bracket", S.deg(a), p=S.p)
            diff = lhs - S.br(S.d(ua), ub) - S.br(ua, S.d(ub)).scale(s)
            rep.add("d-bracket", _names(S, (a, b)), diff.is_zero(), f"d{{a*b}} - rhs = {diff}")
    return rep


def run_suite(S: PseudoStructure, skip: Iterable[str] = ()) -> Report:
    """All laws that apply to the fields present on ``S``."""
    skip = set(skip)
    rep = _report(S, "law suite")
    rep.conventions.setdefault("kernel", S.kernel.describe())
    rep.conventions.setdefault("product style", S.style)
    if S.graded:
        rep.conventions.setdefault("bracket degree p", str(S.p))
    if S.weight_bound is not None:
        rep.conventions.setdefault("weight bound", str(S.weight_bound))
    checks: list[tuple[str, Callable[[], Report]]] = []
    if S.product is not None:
        checks += [("assoc", lambda: check_assoc(S)), ("commutative", lambda: check_commutative(S)),
                   ("hdifferential", lambda: check_hdifferential(S))]
    if S.bracket is not None:
        checks += [("hbilinear", lambda: check_hbilinear(S)), ("skew", lambda: check_skew(S)),
                   ("jacobi", lambda: check_jacobi(S))]
    if S.product is not None and S.bracket is not None:
        checks += [("leibniz-left", lambda: check_leibniz(S, "left")), ("leibniz-right", lambda: check_leibniz(S, "right"))]
    if S.differential is not None:
        checks.append(("dg", lambda: check_dg(S)))
    if S.graded:
        checks.append(("grading", lambda: check_grading(S)))
    for law, fn in checks:
        if law not in skip:
            rep.extend(fn())
    return rep


# -- small builders used throughout -------------------------------------------


def bracket_from_vectors(module: HModule, table: Mapping[tuple, Mapping]) -> dict:
    """Bracket table whose entries are all of the form ``(1 x 1) (x)_H v``."""
    return {k: PolyTensor.pure(module, v) for k, v in table.items() if v}


def negate_bracket(S: PseudoStructure) -> dict | None:
    if S.bracket is None:
        return None
    return {k: v.scale(-1) for k, v in S.bracket.items()}


def scale_vec(v: Mapping, c) -> dict:
    return vec_scale(v, Fraction(c))


def is_finite(S: PseudoStructure) -> bool:
    return isinstance(S.module, FiniteDimModule) or S.kernel.is_group
