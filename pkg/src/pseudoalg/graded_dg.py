"""Combinators on differential graded Poisson pseudoalgebras.

Everything that needs kernels, images or quotients works on a finite k-basis:
finite-dimensional modules, or free modules over a group kernel.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .hmodule import FiniteDimModule, FreeModule, HLinearMap, HModule, Unsupported, hlinear_check
from .linalg import EchelonBasis, QuotientSpace, kernel_and_image, rank_of, vec_add
from .polytensor import PolyTensor, apply_module_map, apply_perm, straighten_into
from .pseudo_core import PseudoStructure, graded_sign, run_suite
from .report import Report


class SuiteFailure(ValueError):
    def __init__(self, message: str, report: Report):
        super().__init__(message)
        self.report = report


def basis_keys(module: HModule) -> list:
    if isinstance(module, FiniteDimModule):
        return list(range(module.dim))
    if module.kernel.is_group:
        return module.basis()
    raise Unsupported("this operation needs a finite k-basis (finite module or group kernel)")


def _u(k) -> dict:
    return {k: Fraction(1)}


def _project_tensor(x: PolyTensor, target: HModule, project) -> PolyTensor:
    acc: dict = {}
    for (hs, mk), c in x.terms.items():
        for q, d in project(_u(mk)).items():
            vec_add(acc, {(hs, q): d}, c)
    return PolyTensor(target, x.n, acc)


def _require(S: PseudoStructure, validate: bool, what: str) -> None:
    if validate:
        rep = run_suite(S)
        if not rep.ok:
            raise SuiteFailure(f"{what}: input {S.name} fails {', '.join(rep.failed_laws())}", rep)


# -- opposite ------------------------------------------------------------------


def build_opposite(S: PseudoStructure, validate: bool = True) -> PseudoStructure:
    """Same module, product and differential; negated bracket."""
    _require(S, validate, "opposite")
    bracket = None if S.bracket is None else {k: v.scale(-1) for k, v in S.bracket.items()}
    return PseudoStructure(
        S.module, S.product, bracket, S.bracket_degree, S.differential, S.graded,
        f"{S.name}^op", S.unit, dict(S.conventions), S.weight, S.weight_bound,
    )


# -- tensor product --------------------------------------------------------------


@dataclass(eq=False)
class TensorModule:
    """``A (x) B`` as a finite module with ``h(a x b) = h1 a x h2 b``."""

    module: FiniteDimModule
    left: list
    right: list

    def index(self, a, b) -> int:
        return self.left.index(a) * len(self.right) + self.right.index(b)

    def pair(self, va: Mapping, vb: Mapping) -> dict:
        out: dict = {}
        for a, ca in va.items():
            for b, cb in vb.items():
                vec_add(out, {self.index(a, b): Fraction(1)}, ca * cb)
        return out


def tensor_module(A: HModule, B: HModule) -> TensorModule:
    if A.kernel != B.kernel:
        raise Unsupported("tensor factors use different Hopf kernels")
    ka, kb = basis_keys(A), basis_keys(B)
    kernel = A.kernel
    size = len(ka) * len(kb)
    pos_a = {k: i for i, k in enumerate(ka)}
    pos_b = {k: i for i, k in enumerate(kb)}
    mats = []
    for g in kernel.generator_keys():
        m = [[Fraction(0)] * size for _ in range(size)]
        for i, a in enumerate(ka):
            for j, b in enumerate(kb):
                col = i * len(kb) + j
                for (l1, l2), mult in kernel.coproduct_key(g, 2):
                    for a2, c1 in A.act_key(l1, a).items():
                        for b2, c2 in B.act_key(l2, b).items():
                            m[pos_a[a2] * len(kb) + pos_b[b2]][col] += mult * c1 * c2
        mats.append(m)
    labels = tuple(f"{A.format_key(a)}(x){B.format_key(b)}" for a in ka for b in kb)
    degrees = tuple(A.degree_of(a) + B.degree_of(b) for a in ka for b in kb)
    M = FiniteDimModule(kernel, size, tuple(mats), labels, degrees, f"{A.name}(x){B.name}")
    return TensorModule(M, ka, kb)


def _tensor_hypothesis(SA: PseudoStructure, SB: PseudoStructure, rep: Report) -> None:
    for S in (SA, SB):
        rep.add("tensor-hypothesis", (S.name, "p"), S.bracket_degree == 0, f"bracket degree {S.bracket_degree} != 0")
        suite = run_suite(S)
        rep.add("tensor-hypothesis", (S.name, "suite"), suite.ok, f"fails {', '.join(suite.failed_laws())}")
        rep.add("tensor-hypothesis", (S.name, "product"), S.product is not None, "no product")


def check_tensor_compat(SA: PseudoStructure, SB: PseudoStructure) -> Report:
    """The four compatibility conditions on Hopf generators plus the unit.

    Multiplicativity of the actions reduces the universal quantifier over
    ``f, g, h`` to this set; the reduction is recorded as a convention.
    """
    if SA.bracket_degree != 0 or SB.bracket_degree != 0:
        raise Unsupported("tensor products are only defined for bracket degree 0")
    if SA.product is None or SB.product is None:
        raise Unsupported("tensor factors need products")
    T = tensor_module(SA.module, SB.module)
    M = T.module
    kernel = M.kernel
    one = kernel.one()
    hopf = [one] + kernel.generator_keys()
    rep = Report(title=f"tensor compatibility of {SA.name} and {SB.name}")
    rep.conventions["quantifier"] = "f, g, h range over the unit and the Hopf generators"
    A, B = SA.module, SB.module
    ka, kb = T.left, T.right

    def mA(x, y):
        return SA.mul(x, y)

    def mB(x, y):
        return SB.mul(x, y)

    def inv(k):
        return kernel.antipode_key(k)

    def add(acc, slots, va, vb, c):
        straighten_into(acc, M, slots, T.pair(va, vb), c)

    def mul3(x, y, z=one):
        return kernel.mul_key(kernel.mul_key(x, y), z)

    for a in ka:
        for a2 in ka:
            aa = mA(_u(a), _u(a2))
            for b in kb:
                for b2 in kb:
                    bb = mB(_u(b), _u(b2))
                    inst = (A.format_key(a), A.format_key(a2), B.format_key(b), B.format_key(b2))
                    for g in hopf:
                        for h in hopf:
                            # condition 1
                            lhs: dict = {}
                            for (g1, g2, g3), m in kernel.coproduct_key(g, 3):
                                s3, sg = inv(g3)
                                add(lhs, (one, mul3(h, g1), g2), aa, mB(_u(b), B.act_key(s3, b2)), m * sg)
                            rhs: dict = {}
                            for (h1, h2, h3), m in kernel.coproduct_key(h, 3):
                                s3, sg = inv(h3)
                                add(rhs, (h1, mul3(g, h2), one), mA(A.act_key(s3, a), _u(a2)), bb, m * sg)
                            diff = vec_add(lhs, rhs, -1)
                            names = (kernel.format_key(g), kernel.format_key(h))
                            rep.add("tensor-compat-1", names + inst, not diff,
                                    f"lhs - rhs = {PolyTensor(M, 3, diff)}")
                            for f in hopf:
                                # condition 2
                                lhs = {}
                                for (g1, g2, g3), m in kernel.coproduct_key(g, 3):
                                    s3, sg = inv(g3)
                                    add(lhs, (one, mul3(h, g1), mul3(f, g2)), aa, mB(_u(b), B.act_key(s3, b2)), m * sg)
                                rhs = {}
                                for (f1, f2, f3), m in kernel.coproduct_key(f, 3):
                                    s3, sg = inv(f3)
                                    add(rhs, (f1, h, mul3(g, f2)), mA(A.act_key(s3, a), _u(a2)), bb, m * sg)
                                diff = vec_add(lhs, rhs, -1)
                                names3 = (kernel.format_key(f),) + names
                                rep.add("tensor-compat-2", names3 + inst, not diff, f"lhs - rhs = {PolyTensor(M, 3, diff)}")
                                # condition 3
                                lhs = {}
                                for (g1, g2, g3), m in kernel.coproduct_key(g, 3):
                                    s3, sg = inv(g3)
                                    add(lhs, (mul3(f, g1), mul3(h, g2), one), mA(A.act_key(s3, a), _u(a2)), bb, m * sg)
                                rhs = {}
                                for (f1, f2, f3), m in kernel.coproduct_key(f, 3):
                                    s3, sg = inv(f3)
                                    add(rhs, (mul3(g, f1), h, f2), aa, mB(_u(b), B.act_key(s3, b2)), m * sg)
                                diff = vec_add(lhs, rhs, -1)
                                rep.add("tensor-compat-3", names3 + inst, not diff, f"lhs - rhs = {PolyTensor(M, 3, diff)}")
                    for h in hopf:
                        first = T.pair(mA(_u(a), A.act_key(h, a2)), bb)
                        second = T.pair(aa, mB(_u(b), B.act_key(h, b2)))
                        third: dict = {}
                        for (h1, h2), m in kernel.coproduct_key(h, 2):
                            vec_add(third, T.pair(mA(_u(a), A.act_key(h1, a2)), mB(_u(b), B.act_key(h2, b2))), m)
                        d12 = vec_add(dict(first), second, -1)
                        d13 = vec_add(dict(first), third, -1)
                        rep.add("tensor-compat-4", (kernel.format_key(h),) + inst, not d12 and not d13,
                                f"a(ha')(x)bb' - aa'(x)b(hb') = {M.format_vec(d12)}; first - third = {M.format_vec(d13)}")
    return rep


def build_tensor(SA: PseudoStructure, SB: PseudoStructure, validate: bool = True) -> tuple[PseudoStructure, Report]:
    """Tensor DGP pseudoalgebra; refused unless the hypotheses and all four conditions hold."""
    rep = check_tensor_compat(SA, SB)
    if validate:
        hyp = Report()
        _tensor_hypothesis(SA, SB, hyp)
        rep.extend(hyp)
        if not rep.ok:
            bad = [law for law in rep.failed_laws()]
            raise SuiteFailure(f"tensor refused: {', '.join(bad)}", rep)
    T = tensor_module(SA.module, SB.module)
    M = T.module
    A, B = SA.module, SB.module
    ka, kb = T.left, T.right
    product: dict = {}
    bracket: dict = {}
    for a in ka:
        for b in kb:
            for a2 in ka:
                for b2 in kb:
                    s = graded_sign("tensor-product", A.degree_of(a2), B.degree_of(b))
                    aa = SA.mul(_u(a), _u(a2))
                    bb = SB.mul(_u(b), _u(b2))
                    key = (T.index(a, b), T.index(a2, b2))
                    v = {k: c * s for k, c in T.pair(aa, bb).items()}
                    if v:
                        product[key] = v
                    acc: dict = {}
                    if SA.bracket is not None:
                        for (hs, e), c in SA.bracket_keys(a, a2).terms.items():
                            for k, d in T.pair(_u(e), bb).items():
                                vec_add(acc, {(hs, k): d}, c * s)
                    if SB.bracket is not None:
                        for (hs, e), c in SB.bracket_keys(b, b2).terms.items():
                            for k, d in T.pair(aa, _u(e)).items():
                                vec_add(acc, {(hs, k): d}, c * s)
                    if acc:
                        bracket[key] = PolyTensor(M, 2, acc)
    imgs = {}
    for a in ka:
        for b in kb:
            v = T.pair(SA.d(_u(a)), _u(b))
            vec_add(v, T.pair(_u(a), SB.d(_u(b))), graded_sign("d-product", A.degree_of(a)))
            imgs[T.index(a, b)] = v
    d = HLinearMap(M, M, imgs, 1, "d")
    S = PseudoStructure(M, product, bracket, 0, d, True, M.name)
    return S, rep


# -- subalgebras, ideals, quotients ------------------------------------------------


def submodule_closure(module: HModule, span: Sequence[Mapping]) -> EchelonBasis:
    """Smallest H-submodule containing ``span`` (closure under the Hopf generators)."""
    basis_keys(module)
    ech = EchelonBasis()
    queue = [dict(v) for v in span if v]
    while queue:
        v = queue.pop()
        r = ech.reduce(v)
        if not r:
            continue
        ech.add(r)
        for g in module.kernel.generator_keys():
            queue.append(module.act(g, r))
    return ech


def check_subideal(S: PseudoStructure, span: Sequence[Mapping], mode: str = "ideal") -> Report:
    if mode not in ("sub", "ideal"):
        raise ValueError("mode must be 'sub' or 'ideal'")
    M = S.module
    ech = submodule_closure(M, span)
    rows = ech.basis()
    rep = Report(title=f"{mode} check in {S.name}", conventions=dict(S.conventions))
    rep.conventions["closure dimension"] = str(ech.rank)
    fmt = M.format_vec
    for g in M.kernel.generator_keys():
        for r in rows:
            img = M.act(g, r)
            rep.add("closure-hmodule", (M.kernel.format_key(g), fmt(r)), ech.contains(img), f"h.b = {fmt(img)} leaves B")
    for r in rows:
        dv = S.d(r)
        rep.add("closure-d", (fmt(r),), ech.contains(dv), f"d(b) = {fmt(dv)} leaves B")
    if mode == "sub":
        left = right = rows
    else:
        left = [_u(k) for k in basis_keys(M)]
        right = rows
    for x in left:
        for y in right:
            pairs = [(x, y)] if mode == "sub" else [(x, y), (y, x)]
            for p, q in pairs:
                if S.product is not None:
                    v = S.mul(p, q)
                    rep.add("closure-product", (fmt(p), fmt(q)), ech.contains(v), f"product {fmt(v)} leaves B")
                if S.bracket is not None:
                    t = S.br(p, q)
                    bad = {hs: v for hs, v in t.module_parts().items() if not ech.contains(v)}
                    rep.add("closure-bracket", (fmt(p), fmt(q)), not bad, f"bracket {t} leaves (H x H) (x)_H B")
    return rep


def _quotient_structure(S: PseudoStructure, Q: QuotientSpace, name: str, zero_d: bool = False) -> PseudoStructure:
    M = S.module
    kernel = M.kernel
    n = Q.dim
    mats = []
    for g in kernel.generator_keys():
        m = [[Fraction(0)] * n for _ in range(n)]
        for j in range(n):
            for i, c in Q.project(M.act(g, Q.lift(j))).items():
                m[i][j] = c
        mats.append(m)
    labels = tuple(M.format_vec(Q.lift(i)) for i in range(n))
    degrees = tuple(M.homogeneous_degree(Q.lift(i)) or 0 for i in range(n))
    QM = FiniteDimModule(kernel, n, tuple(mats), labels, degrees, name)
    product = None
    if S.product is not None:
        product = {}
        for i in range(n):
            for j in range(n):
                v = Q.project(S.mul(Q.lift(i), Q.lift(j)))
                if v:
                    product[(i, j)] = v
    bracket = None
    if S.bracket is not None:
        bracket = {}
        for i in range(n):
            for j in range(n):
                t = _project_tensor(S.br(Q.lift(i), Q.lift(j)), QM, Q.project)
                if not t.is_zero():
                    bracket[(i, j)] = t
    d = None
    if S.differential is not None:
        imgs = {} if zero_d else {j: Q.project(S.d(Q.lift(j))) for j in range(n)}
        d = HLinearMap(QM, QM, imgs, 1, "d")
    unit = Q.project(S.unit) if S.unit else None
    return PseudoStructure(QM, product, bracket, S.bracket_degree, d, S.graded, name, unit, dict(S.conventions))


def build_quotient(S: PseudoStructure, span: Sequence[Mapping], validate: bool = True) -> tuple[PseudoStructure, HLinearMap]:
    """``S / B`` for the ideal generated by ``span``, with the projection map."""
    if validate:
        rep = check_subideal(S, span, "ideal")
        if not rep.ok:
            raise SuiteFailure(f"not an ideal: {', '.join(rep.failed_laws())}", rep)
    M = S.module
    keys = basis_keys(M)
    ech = submodule_closure(M, span)
    Q = QuotientSpace(ech.basis(), [_u(k) for k in keys])
    out = _quotient_structure(S, Q, f"{S.name}/B")
    gens = M.generators()
    proj = HLinearMap(M, out.module, {g: Q.project(_u(g)) for g in gens}, 0, "pi")
    return out, proj


@dataclass(eq=False)
class Cohomology:
    structure: PseudoStructure
    quotient: QuotientSpace
    source: PseudoStructure

    def induced(self, other: Cohomology, f: HLinearMap, name: str = "H(f)") -> HLinearMap:
        """``a + im d -> f(a) + im d`` between cohomologies."""
        imgs = {i: other.quotient.project(f(self.quotient.lift(i))) for i in range(self.quotient.dim)}
        return HLinearMap(self.structure.module, other.structure.module, imgs, 0, name)


def build_cohomology(S: PseudoStructure) -> Cohomology:
    """``ker d / im d`` with the induced product and bracket, and zero differential."""
    M = S.module
    keys = basis_keys(M)
    cycles, boundaries = kernel_and_image(keys, lambda k: S.d(_u(k)))
    Q = QuotientSpace(boundaries, cycles)
    out = _quotient_structure(S, Q, f"H({S.name})", zero_d=True)
    return Cohomology(out, Q, S)


# -- homomorphisms ---------------------------------------------------------------------


@dataclass(eq=False)
class HomCandidate:
    source: PseudoStructure
    target: PseudoStructure
    map: HLinearMap


def classify(c: HomCandidate) -> str:
    try:
        src = basis_keys(c.source.module)
        tgt = basis_keys(c.target.module)
    except Unsupported:
        return "unknown"
    r = rank_of([c.map(_u(k)) for k in src])
    mono, epi = r == len(src), r == len(tgt)
    return "iso" if mono and epi else "mono" if mono else "epi" if epi else "none"


def check_homomorphism(c: HomCandidate, require_bijective: bool = False) -> Report:
    S, T, f = c.source, c.target, c.map
    rep = Report(title=f"homomorphism {f.name}: {S.name} -> {T.name}")
    for v in hlinear_check(f).verdicts:
        rep.add("hlinear", v.instance, v.passed, v.witness)
    keys = S.check_keys() if S.style == "current" else basis_keys(S.module)
    fmt = T.module.format_vec
    for a in keys:
        fa = f(_u(a))
        bad = {k: x for k, x in fa.items() if T.module.degree_of(k) != S.module.degree_of(a)}
        rep.add("hom-degree", (S.fmt(a),), not bad, f"f(a) has wrong-degree part {fmt(bad)}")
        if S.differential is not None or T.differential is not None:
            diff = vec_add(f(S.d(_u(a))), T.d(fa), -1)
            rep.add("hom-d", (S.fmt(a),), not diff, f"f(da) - d(fa) = {fmt(diff)}")
        for b in keys:
            fb = f(_u(b))
            if S.product is not None:
                diff = vec_add(f(S.product_keys(a, b)), T.mul(fa, fb), -1)
                rep.add("hom-product", (S.fmt(a), S.fmt(b)), not diff, f"f(ab) - f(a)f(b) = {fmt(diff)}")
            if S.bracket is not None:
                lhs = apply_module_map(S.bracket_keys(a, b), f)
                rhs = T.br(fa, fb) if T.bracket is not None else PolyTensor(T.module, 2)
                diff = lhs - rhs
                rep.add("hom-bracket", (S.fmt(a), S.fmt(b)), diff.is_zero(), f"f{{a*b}} - {{fa*fb}} = {diff}")
    kind = classify(c)
    rep.conventions["classification"] = kind
    if require_bijective:
        rep.add("bijective", (f.name,), kind == "iso", f"map is {kind}")
    return rep


def check_cohomology_invariance(S: PseudoStructure, T: PseudoStructure, iso: HLinearMap) -> Report:
    """An isomorphism ``S -> T`` induces an isomorphism ``H(S) -> H(T)``."""
    rep = Report(title=f"cohomology invariance along {iso.name}")
    rep.extend(check_homomorphism(HomCandidate(S, T, iso), require_bijective=True), prefix="")
    HS, HT = build_cohomology(S), build_cohomology(T)
    induced = HS.induced(HT, iso)
    sub = check_homomorphism(HomCandidate(HS.structure, HT.structure, induced), require_bijective=True)
    for v in sub.verdicts:
        rep.add(v.law, ("H",) + v.instance, v.passed, v.witness)
    rep.conventions["cohomology dimensions"] = f"{HS.quotient.dim} -> {HT.quotient.dim}"
    return rep


def swap_tensor(x: PolyTensor) -> PolyTensor:
    return apply_perm(x, (1, 0))


def rebase(S: PseudoStructure, order: Sequence[int], scales: Sequence | None = None) -> tuple[PseudoStructure, HLinearMap]:
    """Present a finite ``S`` in the basis ``e'_i = scales[i] * e_{order[i]}``.

    Returns the new structure and the isomorphism ``S -> S'``.
    """
    M = S.module
    if not isinstance(M, FiniteDimModule):
        raise Unsupported("rebase needs a finite-dimensional module")
    n = M.dim
    if sorted(order) != list(range(n)):
        raise ValueError("order must be a permutation of the basis indices")
    sc = [Fraction(c) for c in (scales or [1] * n)]
    if any(c == 0 for c in sc):
        raise ValueError("scales must be nonzero")
    where = {old: new for new, old in enumerate(order)}

    def to_new(v: Mapping) -> dict:
        return {where[k]: c / sc[where[k]] for k, c in v.items()}

    def to_old(i: int) -> dict:
        return {order[i]: sc[i]}

    mats = []
    for g in M.kernel.generator_keys():
        m = [[Fraction(0)] * n for _ in range(n)]
        for j in range(n):
            for i, c in to_new(M.act(g, to_old(j))).items():
                m[i][j] = c
        mats.append(m)
    labels = tuple(f"{sc[i]}*{M.labels[order[i]]}" if sc[i] != 1 else M.labels[order[i]] for i in range(n))
    N = FiniteDimModule(M.kernel, n, tuple(mats), labels, tuple(M.degrees[order[i]] for i in range(n)), f"{S.name}'")
    product = None
    if S.product is not None:
        product = {}
        for i in range(n):
            for j in range(n):
                v = to_new(S.mul(to_old(i), to_old(j)))
                if v:
                    product[(i, j)] = v
    bracket = None
    if S.bracket is not None:
        bracket = {}
        for i in range(n):
            for j in range(n):
                t = _project_tensor(S.br(to_old(i), to_old(j)), N, to_new)
                if not t.is_zero():
                    bracket[(i, j)] = t
    d = None
    if S.differential is not None:
        d = HLinearMap(N, N, {j: to_new(S.d(to_old(j))) for j in range(n)}, 1, "d")
    unit = to_new(S.unit) if S.unit else None
    T = PseudoStructure(N, product, bracket, S.bracket_degree, d, S.graded, N.name, unit, dict(S.conventions))
    iso = HLinearMap(M, N, {k: to_new({k: Fraction(1)}) for k in range(n)}, 0, "iso")
    return T, iso
