"""Current pseudoalgebras, the dual algebra of a group kernel, and annihilation algebras."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .hmodule import FiniteDimModule, FreeModule, HLinearMap, Unsupported
from .linalg import QuotientSpace, vec_add
from .polytensor import PolyTensor
from .pseudo_core import PseudoStructure, graded_sign
from .report import Report
from .scalars_hopf import HopfKernel

DUAL_ACTION_CONVENTION = "(h -> x)(l) = x(l h), (x <- h)(l) = x(h l); delta_g <- h = delta_{h^-1 g}"


class InvalidBase(ValueError):
    def __init__(self, report: Report):
        super().__init__(f"base algebra fails {', '.join(report.failed_laws())}")
        self.report = report


def _clean(table: Mapping | None) -> dict | None:
    if table is None:
        return None
    return {k: {i: Fraction(c) for i, c in v.items() if c} for k, v in table.items()}


@dataclass(eq=False)
class BaseAlgebra:
    """Ordinary finite-dimensional algebra by structure constants on basis ``0..dim-1``."""

    dim: int
    product: dict | None = None
    bracket: dict | None = None
    labels: tuple[str, ...] = ()
    unit: dict | None = None
    degrees: tuple[int, ...] = ()
    name: str = "A"
    differential: dict | None = None
    graded: bool = False
    bracket_degree: int = 0

    def __post_init__(self) -> None:
        self.product = _clean(self.product)
        self.bracket = _clean(self.bracket)
        self.differential = _clean(self.differential)
        if not self.labels:
            self.labels = tuple(f"b{i + 1}" for i in range(self.dim))
        if not self.degrees:
            self.degrees = (0,) * self.dim

    def mul(self, x: Mapping, y: Mapping) -> dict:
        out: dict = {}
        for i, a in x.items():
            for j, b in y.items():
                vec_add(out, self.product.get((i, j), {}), a * b)
        return out

    def br(self, x: Mapping, y: Mapping) -> dict:
        out: dict = {}
        for i, a in x.items():
            for j, b in y.items():
                vec_add(out, self.bracket.get((i, j), {}), a * b)
        return out

    def fmt(self, vec: Mapping) -> str:
        if not vec:
            return "0"
        return " + ".join(f"{c}*{self.labels[i]}" for i, c in sorted(vec.items()))


def check_classical(B: BaseAlgebra) -> Report:
    """Exhaustive classical laws over the basis, with Koszul signs from the degrees."""
    rep = Report(title=f"classical laws: {B.name}")
    n = range(B.dim)
    u = lambda i: {i: Fraction(1)}  # noqa: E731
    s = lambda a, b: graded_sign("commute", B.degrees[a], B.degrees[b])  # noqa: E731
    lab = B.labels
    if B.product is not None:
        for a in n:
            for b in n:
                diff = vec_add(B.mul(u(a), u(b)), B.mul(u(b), u(a)), -s(a, b))
                rep.add("classical-commutative", (lab[a], lab[b]), not diff, f"ab - (+-)ba = {B.fmt(diff)}")
                for c in n:
                    diff = vec_add(B.mul(B.mul(u(a), u(b)), u(c)), B.mul(u(a), B.mul(u(b), u(c))), -1)
                    rep.add("classical-assoc", (lab[a], lab[b], lab[c]), not diff, f"(ab)c - a(bc) = {B.fmt(diff)}")
    if B.bracket is not None:
        for a in n:
            for b in n:
                diff = vec_add(B.br(u(a), u(b)), B.br(u(b), u(a)), s(a, b))
                rep.add("classical-antisymmetry", (lab[a], lab[b]), not diff, f"[a,b] + (+-)[b,a] = {B.fmt(diff)}")
                for c in n:
                    j = B.br(u(a), B.br(u(b), u(c)))
                    vec_add(j, B.br(B.br(u(a), u(b)), u(c)), -1)
                    vec_add(j, B.br(u(b), B.br(u(a), u(c))), -s(a, b))
                    rep.add("classical-jacobi", (lab[a], lab[b], lab[c]), not j, f"[a,[b,c]] - [[a,b],c] - (+-)[b,[a,c]] = {B.fmt(j)}")
    if B.product is not None and B.bracket is not None:
        for a in n:
            for b in n:
                for c in n:
                    lhs = B.br(u(a), B.mul(u(b), u(c)))
                    rhs = vec_add(B.mul(B.br(u(a), u(b)), u(c)), B.mul(u(b), B.br(u(a), u(c))), s(a, b))
                    diff = vec_add(lhs, rhs, -1)
                    rep.add("classical-leibniz", (lab[a], lab[b], lab[c]), not diff, f"lhs - rhs = {B.fmt(diff)}")
    return rep


def _current_module(B: BaseAlgebra, kernel: HopfKernel) -> FreeModule:
    return FreeModule(kernel, B.dim, tuple(B.labels), tuple(B.degrees), f"Cur {B.name}")


def _lift(vec: Mapping, one) -> dict:
    return {(i, one): c for i, c in vec.items()}


def build_current_lie(L: BaseAlgebra, kernel: HopfKernel, validate: bool = True) -> PseudoStructure:
    """``Cur L = H (x) L`` with ``{(1 x a) * (1 x b)} = (1 x 1) (x)_H (1 x [a, b])``."""
    if L.bracket is None:
        raise ValueError("base algebra has no bracket")
    if validate:
        rep = check_classical(BaseAlgebra(L.dim, None, L.bracket, L.labels, degrees=L.degrees, name=L.name))
        if not rep.ok:
            raise InvalidBase(rep)
    M = _current_module(L, kernel)
    one = kernel.one()
    bracket = {}
    for (i, j), v in L.bracket.items():
        if v:
            bracket[((i, one), (j, one))] = PolyTensor.pure(M, _lift(v, one))
    differential = None
    if L.differential is not None:
        imgs = {(i, one): _lift(v, one) for i, v in L.differential.items()}
        differential = HLinearMap(M, M, imgs, 1, "d")
    return PseudoStructure(M, bracket=bracket, bracket_degree=L.bracket_degree, differential=differential, graded=L.graded, name=M.name)


def build_current_poisson(P: BaseAlgebra, kernel: HopfKernel, validate: bool = True) -> PseudoStructure:
    """Current Lie bracket plus the current product ``(f x a)(g x b) = fg x ab``."""
    if P.product is None or P.bracket is None:
        raise ValueError("base algebra needs both a product and a bracket")
    if validate:
        rep = check_classical(P)
        if not rep.ok:
            raise InvalidBase(rep)
    S = build_current_lie(P, kernel, validate=False)
    one = kernel.one()
    S.product = {((i, one), (j, one)): _lift(v, one) for (i, j), v in P.product.items() if v}
    S.unit = _lift(P.unit, one) if P.unit else None
    S.conventions.setdefault("hdifferential", "current style: h acts on a product of Hopf parts by h(fg) := (h1 f)(h2 g)")
    return S


# -- dual algebra --------------------------------------------------------------


@dataclass(eq=False)
class DualAlgebra:
    """``X = H*`` for a group kernel, in the basis of delta functions ``delta_g``."""

    kernel: HopfKernel
    elements: list = field(default_factory=list)
    product: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return len(self.elements)

    def index(self, g) -> int:
        return self.elements.index(g)

    def evaluate(self, x: Mapping, h) -> Fraction:
        """``x(h)`` for a group element ``h``."""
        return x.get(self.index(h), Fraction(0))

    def mul(self, x: Mapping, y: Mapping) -> dict:
        out: dict = {}
        for i, a in x.items():
            for j, b in y.items():
                vec_add(out, self.product.get((i, j), {}), a * b)
        return out

    def unit(self) -> dict:
        """The counit, which takes value 1 on every group element."""
        return {i: Fraction(1) for i in range(self.dim)}

    def right_act(self, t: int, h) -> int:
        """``delta_g <- h = delta_{h^-1 g}``."""
        inv, _ = self.kernel.antipode_key(h)
        return self.index(self.kernel.mul_key(inv, self.elements[t]))

    def left_act(self, t: int, h) -> int:
        """``h -> delta_g = delta_{g h^-1}``."""
        inv, _ = self.kernel.antipode_key(h)
        return self.index(self.kernel.mul_key(self.elements[t], inv))

    def label(self, t: int) -> str:
        return f"delta[{self.kernel.format_key(self.elements[t])}]"


def build_dual_algebra(kernel: HopfKernel) -> DualAlgebra:
    """Product dual to the coproduct: ``(xy)(h) = sum x(h1) y(h2)``."""
    if not kernel.is_group:
        raise Unsupported("the dual algebra is only built for finite group kernels")
    X = DualAlgebra(kernel, kernel.basis())
    n = X.dim
    for i in range(n):
        for j in range(n):
            vec: dict = {}
            for t, h in enumerate(X.elements):
                val = Fraction(0)
                for (h1, h2), m in kernel.coproduct_key(h, 2):
                    val += m * (X.index(h1) == i) * (X.index(h2) == j)
                if val:
                    vec[t] = val
            if vec:
                X.product[(i, j)] = vec
    return X


def check_dual_pairing(X: DualAlgebra) -> Report:
    """``<xy, h> = <x (x) y, Delta h>`` plus the unit law, over all basis data."""
    rep = Report(title=f"dual pairing for {X.kernel.describe()}")
    for i in range(X.dim):
        for j in range(X.dim):
            xy = X.mul({i: Fraction(1)}, {j: Fraction(1)})
            for h in X.elements:
                want = sum(
                    (m * (X.index(a) == i) * (X.index(b) == j) for (a, b), m in X.kernel.coproduct_key(h, 2)),
                    Fraction(0),
                )
                rep.add("dual-pairing", (X.label(i), X.label(j), X.kernel.format_key(h)), X.evaluate(xy, h) == want,
                        f"{X.evaluate(xy, h)} != {want}")
        u = X.mul(X.unit(), {i: Fraction(1)})
        rep.add("dual-pairing", ("unit", X.label(i)), u == {i: Fraction(1)}, f"unit * x = {u}")
    return rep


# -- annihilation algebras ------------------------------------------------------


@dataclass(eq=False)
class Annihilation:
    """``X (x)_H L`` with a chosen basis of representatives and the induced algebra."""

    algebra: BaseAlgebra
    quotient: QuotientSpace
    dual: DualAlgebra
    source: PseudoStructure

    @property
    def dim(self) -> int:
        return self.quotient.dim


def _module_basis(S: PseudoStructure) -> list:
    m = S.module
    if isinstance(m, FreeModule):
        return [(i, g) for i in range(m.rank) for g in m.kernel.basis()]
    return list(range(m.dim))


def _annihilate(S: PseudoStructure, with_product: bool) -> Annihilation:
    kernel = S.kernel
    if not kernel.is_group:
        raise Unsupported("annihilation algebras need a finite group kernel")
    X = build_dual_algebra(kernel)
    one = kernel.one()
    mbasis = _module_basis(S)
    ambient = [{(t, k): Fraction(1)} for t in range(X.dim) for k in mbasis]
    relations = []
    for h in kernel.basis():
        for t in range(X.dim):
            for k in mbasis:
                rel = {(X.right_act(t, h), k): Fraction(1)}
                vec_add(rel, {(t, k2): c for k2, c in S.module.act_key(h, k).items()}, -1)
                if rel:
                    relations.append(rel)
    # representatives prefer module keys without a Hopf part
    if isinstance(S.module, FreeModule):
        order = lambda key: (key[1][1] != one, key)  # noqa: E731
    else:
        order = None
    Q = QuotientSpace(relations, ambient, order=order)

    def bracket_terms(x: Mapping, y: Mapping) -> dict:
        out: dict = {}
        for (s, a), ca in x.items():
            for (t, b), cb in y.items():
                for ((f,), e), ce in S.bracket_keys(a, b).terms.items():
                    z = X.mul({X.right_act(s, f): Fraction(1)}, {t: Fraction(1)})
                    for r, cz in z.items():
                        vec_add(out, {(r, e): Fraction(1)}, ca * cb * ce * cz)
        return out

    def product_terms(x: Mapping, y: Mapping) -> dict:
        out: dict = {}
        for (s, a), ca in x.items():
            for (t, b), cb in y.items():
                z = X.mul({s: Fraction(1)}, {t: Fraction(1)})
                ab = S.product_keys(a, b)
                for r, cz in z.items():
                    for e, ce in ab.items():
                        vec_add(out, {(r, e): Fraction(1)}, ca * cb * cz * ce)
        return out

    n = Q.dim
    bracket = {} if S.bracket is not None else None
    product = {} if with_product and S.product is not None else None
    for i in range(n):
        for j in range(n):
            if bracket is not None:
                v = Q.project(bracket_terms(Q.lift(i), Q.lift(j)))
                if v:
                    bracket[(i, j)] = v
            if product is not None:
                v = Q.project(product_terms(Q.lift(i), Q.lift(j)))
                if v:
                    product[(i, j)] = v

    def label(vec: Mapping) -> str:
        parts = []
        for (t, k), c in sorted(vec.items(), key=lambda kv: repr(kv[0])):
            name = f"{X.label(t)}(x){S.module.format_key(k)}"
            parts.append(name if c == 1 else f"{c}*{name}")
        return " + ".join(parts)

    labels = tuple(label(Q.lift(i)) for i in range(n))
    degrees = tuple(S.module.degree_of(next(iter(Q.lift(i)))[1]) for i in range(n))
    alg = BaseAlgebra(n, product, bracket, labels, degrees=degrees, name=f"X(x)_H {S.name}")
    return Annihilation(alg, Q, X, S)


def build_annihilation_lie(L: PseudoStructure) -> Annihilation:
    """Bracket ``{x (x)_H a, y (x)_H b} = sum (x <- f_i)(y <- g_i) (x)_H e_i``."""
    if L.bracket is None:
        raise ValueError("structure has no bracket")
    return _annihilate(L, with_product=False)


def build_annihilation_poisson(L: PseudoStructure) -> Annihilation:
    """Annihilation bracket plus ``(x (x)_H a)(y (x)_H b) = xy (x)_H ab`` on the chosen basis."""
    if L.bracket is None or L.product is None:
        raise ValueError("structure needs a product and a bracket")
    return _annihilate(L, with_product=True)


def annihilation_report(A: Annihilation) -> Report:
    rep = check_classical(A.algebra)
    rep.title = f"classical laws of {A.algebra.name}"
    rep.conventions["dual actions"] = DUAL_ACTION_CONVENTION
    rep.conventions["quotient dimension"] = str(A.dim)
    return rep


def affine_lie(name: str = "aff") -> BaseAlgebra:
    """``span{e, f}`` with ``[e, f] = f``."""
    return BaseAlgebra(2, None, {(0, 1): {1: 1}, (1, 0): {1: -1}}, ("e", "f"), name=name)


def unital_affine_poisson(name: str = "P") -> BaseAlgebra:
    """``k1 + span{e, f}``: square-zero product on ``e, f`` and bracket ``{e, f} = f``."""
    product = {(0, i): {i: 1} for i in range(3)}
    product.update({(i, 0): {i: 1} for i in (1, 2)})
    return BaseAlgebra(3, product, {(1, 2): {2: 1}, (2, 1): {2: -1}}, ("1", "e", "f"), {0: Fraction(1)}, name=name)


def finite_function_current(P: BaseAlgebra, kernel: HopfKernel) -> PseudoStructure:
    """``k^G (x) P`` with G permuting the delta functions.

    H acts by ``g . (delta_t (x) p) = delta_{g t} (x) p``, so the module is free
    on ``delta_1 (x) P``. The product is pointwise in the first factor, which
    makes it an H-module algebra; the bracket is the H-bilinear extension of
    ``{delta_1 p * delta_1 q} = (1 x 1) (x)_H delta_1 {p, q}``.
    """
    if not kernel.is_group:
        raise Unsupported("function currents need a finite group kernel")
    elems = kernel.basis()
    n, d = len(elems), P.dim
    pos = {g: t for t, g in enumerate(elems)}
    mats = []
    for gen in kernel.generator_keys():
        m = [[Fraction(0)] * (n * d) for _ in range(n * d)]
        for t, g in enumerate(elems):
            s = pos[kernel.mul_key(gen, g)]
            for i in range(d):
                m[s * d + i][t * d + i] = Fraction(1)
        mats.append(m)
    labels = tuple(f"{kernel.format_key(g)}:{P.labels[i]}" for g in elems for i in range(d))
    degrees = tuple(P.degrees[i] for _ in elems for i in range(d))
    M = FiniteDimModule(kernel, n * d, tuple(mats), labels, degrees, f"Fun {P.name}")

    def pointwise(table: Mapping | None) -> dict | None:
        if table is None:
            return None
        out = {}
        for t in range(n):
            for (i, j), v in table.items():
                if v:
                    out[(t * d + i, t * d + j)] = {t * d + k: c for k, c in v.items()}
        return out

    product = pointwise(P.product)
    differential = None
    if P.differential is not None:
        imgs = {t * d + i: {t * d + k: c for k, c in v.items()} for t in range(n) for i, v in P.differential.items()}
        differential = HLinearMap(M, M, imgs, 1, "d")
    bracket = None
    if P.bracket is not None:
        # H-bilinear extension of the identity slice: (s t^-1 x 1) (x)_H delta_t (x) {p, q}
        bracket = {}
        for s, gs in enumerate(elems):
            for t, gt in enumerate(elems):
                h = kernel.mul_key(gs, kernel.antipode_key(gt)[0])
                for (i, j), v in P.bracket.items():
                    if v:
                        bracket[(s * d + i, t * d + j)] = PolyTensor.pure(M, {t * d + k: c for k, c in v.items()}, slots=(h,))
    unit = None
    if P.unit:
        unit = {t * d + k: c for t in range(n) for k, c in P.unit.items()}
    return PseudoStructure(M, product, bracket, P.bracket_degree, differential, P.graded, M.name, unit)
