"""Normal forms in ``H^{(x)n} (x)_H M`` and the slot calculus on them.

Every element is stored as a sum of terms ``(h_1 x ... x h_{n-1} x 1) (x)_H m``
keyed by ``((h_1, ..., h_{n-1}), module key)``. The rewrite

    f_1 x ... x f_n (x)_H m = sum (f_1 S(p_1) x ... x f_{n-1} S(p_{n-1}) x 1) (x)_H p_n m,
    p = Delta^{n-1}(f_n),

moves the last slot onto the module part and makes the representation unique.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .hmodule import FreeModule, HLinearMap, HModule, HModuleElement, ModuleMismatch
from .linalg import vec_add
from .scalars_hopf import HopfElement, HopfKernel, Key

Slots = tuple[Key, ...]


class PolyTensor:
    """Normal-form element of ``H^{(x)n} (x)_H M``; ``n`` counts all slots."""

    __slots__ = ("module", "n", "terms")

    def __init__(self, module: HModule, n: int, terms: Mapping | None = None):
        if n < 1:
            raise ValueError("a polytensor needs at least one slot")
        self.module = module
        self.n = n
        self.terms = {k: Fraction(c) for k, c in (terms or {}).items() if c}

    @classmethod
    def zero(cls, module: HModule, n: int = 2) -> PolyTensor:
        return cls(module, n)

    @classmethod
    def pure(cls, module: HModule, vec: Mapping | HModuleElement, slots: Sequence[Key] | None = None, n: int = 2) -> PolyTensor:
        """``(h_1 x ... x h_{n-1} x 1) (x)_H vec``; defaults to all slots equal to 1."""
        if isinstance(vec, HModuleElement):
            vec = vec.vec
        one = module.kernel.one()
        hs = tuple(slots) if slots is not None else (one,) * (n - 1)
        return cls(module, len(hs) + 1, {(hs, k): c for k, c in vec.items()})

    @property
    def kernel(self) -> HopfKernel:
        return self.module.kernel

    def _same(self, other: PolyTensor) -> None:
        if other.module is not self.module or other.n != self.n:
            raise ModuleMismatch("polytensors live in different spaces")

    def __add__(self, other: PolyTensor) -> PolyTensor:
        self._same(other)
        return PolyTensor(self.module, self.n, vec_add(dict(self.terms), other.terms))

    def __sub__(self, other: PolyTensor) -> PolyTensor:
        self._same(other)
        return PolyTensor(self.module, self.n, vec_add(dict(self.terms), other.terms, -1))

    def __neg__(self) -> PolyTensor:
        return self.scale(-1)

    def scale(self, c: Fraction | int) -> PolyTensor:
        return PolyTensor(self.module, self.n, {k: v * c for k, v in self.terms.items()}) if c else PolyTensor(self.module, self.n)

    __mul__ = scale
    __rmul__ = scale

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, PolyTensor)
            and other.module is self.module
            and other.n == self.n
            and other.terms == self.terms
        )

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def module_parts(self) -> dict:
        """Module vectors grouped by Hopf prefix."""
        out: dict = {}
        for (hs, mk), c in self.terms.items():
            vec_add(out.setdefault(hs, {}), {mk: c})
        return out

    def raw_terms(self) -> list[tuple[Slots, dict]]:
        one = self.kernel.one()
        return [(hs + (one,), {mk: c}) for (hs, mk), c in self.terms.items()]

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        k = self.kernel
        parts = []
        for hs, vec in sorted(self.module_parts().items(), key=lambda kv: tuple(k.sort_key(h) for h in kv[0])):
            slots = ",".join(k.format_key(h) for h in hs + (k.one(),))
            parts.append(f"({slots})@({self.module.format_vec(vec)})")
        return " + ".join(parts)

    __repr__ = __str__


def _as_terms(kernel: HopfKernel, slots: Sequence) -> list[tuple[Slots, Fraction]]:
    """Expand a tuple of Hopf elements/keys into monomial tuples with coefficients."""
    out: list[tuple[Slots, Fraction]] = [((), Fraction(1))]
    for s in slots:
        terms = s.terms if isinstance(s, HopfElement) else {tuple(s): Fraction(1)}
        out = [(acc + (k,), c * d) for acc, c in out for k, d in terms.items()]
    return out


def straighten_into(acc: dict, module: HModule, slots: Slots, vec: Mapping, coef: Fraction = Fraction(1)) -> None:
    """Accumulate the normal form of ``coef * (slots) (x)_H vec`` into ``acc``."""
    kernel = module.kernel
    n = len(slots)
    if n == 1:
        for mk, c in module.act(slots[0], vec).items():
            vec_add(acc, {((), mk): c}, coef)
        return
    for legs, m in kernel.coproduct_key(slots[-1], n):
        sign = 1
        new = []
        for f, p in zip(slots[:-1], legs[:-1]):
            sp, s = kernel.antipode_key(p)
            sign *= s
            new.append(kernel.mul_key(f, sp))
        hs = tuple(new)
        for mk, c in module.act(legs[-1], vec).items():
            key = (hs, mk)
            x = acc.get(key, 0) + coef * m * sign * c
            if x:
                acc[key] = x
            else:
                acc.pop(key, None)


def straighten(module: HModule, raw: Iterable[tuple[Sequence, Mapping | HModuleElement]], n: int | None = None) -> PolyTensor:
    """Normal form of ``sum (f_1 x ... x f_n) (x)_H m`` over raw terms.

    Slots may be Hopf elements or monomial keys. An empty input needs ``n``.
    """
    acc: dict = {}
    width = n
    for slots, vec in raw:
        if isinstance(vec, HModuleElement):
            if vec.module is not module:
                raise ModuleMismatch("module part lives in a different module")
            vec = vec.vec
        if width is None:
            width = len(slots)
        elif len(slots) != width:
            raise ValueError("raw terms have different slot counts")
        for mono, c in _as_terms(module.kernel, slots):
            straighten_into(acc, module, mono, vec, c)
    if width is None:
        raise ValueError("cannot infer the slot count of an empty sum")
    return PolyTensor(module, width, acc)


def restraighten(x: PolyTensor) -> PolyTensor:
    return straighten(x.module, x.raw_terms(), x.n)


def multiply_slots(x: PolyTensor, factors: Sequence) -> PolyTensor:
    """``(g_1 x ... x g_n) . x``: slotwise left multiplication, then normal form."""
    if len(factors) != x.n:
        raise ValueError("need one factor per slot")
    kernel = x.kernel
    acc: dict = {}
    for mono, c in _as_terms(kernel, factors):
        for slots, vec in x.raw_terms():
            prod = tuple(kernel.mul_key(a, b) for a, b in zip(mono, slots))
            straighten_into(acc, x.module, prod, vec, c)
    return PolyTensor(x.module, x.n, acc)


def apply_perm(x: PolyTensor, perm: Sequence[int]) -> PolyTensor:
    """Permute Hopf slots: new slot ``i`` receives old slot ``perm[i]`` (0-based)."""
    if sorted(perm) != list(range(x.n)):
        raise ValueError(f"{list(perm)} is not a permutation of {x.n} slots")
    acc: dict = {}
    for slots, vec in x.raw_terms():
        straighten_into(acc, x.module, tuple(slots[p] for p in perm), vec)
    return PolyTensor(x.module, x.n, acc)


SWAP = (1, 0)


def apply_module_map(x: PolyTensor, phi: HLinearMap) -> PolyTensor:
    """``(id x ... x id) (x)_H phi``; normal form is preserved because phi is H-linear."""
    if phi.source is not x.module:
        raise ModuleMismatch("map source differs from the polytensor module")
    acc: dict = {}
    for (hs, mk), c in x.terms.items():
        for tk, d in phi.image(mk).items():
            vec_add(acc, {(hs, tk): d}, c)
    return PolyTensor(phi.target, x.n, acc)


def map_module_parts(x: PolyTensor, target: HModule, fn: Callable[[object], Mapping]) -> PolyTensor:
    """Apply a k-linear ``fn`` on module keys; the caller guarantees H-linearity."""
    acc: dict = {}
    for (hs, mk), c in x.terms.items():
        for tk, d in fn(mk).items():
            vec_add(acc, {(hs, tk): d}, c)
    return PolyTensor(target, x.n, acc)


# -- products of a polytensor with a module element ---------------------------
#
# ``product(a_key, b_key)`` returns the module product of two k-basis keys.
# FINITE style uses the general twisted formulas; CURRENT style (free modules
# over commutative H) moves the Hopf part of the outside factor to the
# adjacent outer slot.


def slot_mult_right(x: PolyTensor, b: Mapping, product: Callable, style: str = "finite") -> PolyTensor:
    """``x . b`` for ``x`` in ``H^n (x)_H A``."""
    return slot_mult_right_raw(x.module, x.raw_terms(), b, product, style, x.n)


def slot_mult_right_raw(module: HModule, raw, b: Mapping, product: Callable, style: str = "finite", n: int = 2) -> PolyTensor:
    kernel = module.kernel
    one = kernel.one()
    acc: dict = {}
    for slots, avec in raw:
        for mono, c0 in _as_terms(kernel, slots):
            if style == "current":
                for (j, hb), cb in b.items():
                    new = mono[:-1] + (kernel.mul_key(mono[-1], hb),)
                    for ak, ca in avec.items():
                        straighten_into(acc, module, new, product(ak, (j, one)), c0 * ca * cb)
            elif len(mono) == 1:
                for ak, ca in module.act(mono[0], avec).items():
                    for bk, cb in b.items():
                        straighten_into(acc, module, mono, product(ak, bk), c0 * ca * cb)
            else:
                # (f1, f2 p1, ..., f_{n-1} p_{n-2}, p_{n-1}) (x)_H a.(S^-1(p_n) b)
                for legs, m in kernel.coproduct_key(mono[-1], len(mono)):
                    mid = tuple(kernel.mul_key(f, p) for f, p in zip(mono[1:-1], legs[:-2]))
                    new = (mono[0],) + mid + (legs[-2],)
                    tw, s = kernel.antipode_key(legs[-1])
                    for ak, ca in avec.items():
                        for bk, cb in module.act(tw, b).items():
                            straighten_into(acc, module, new, product(ak, bk), c0 * m * s * ca * cb)
    return PolyTensor(module, n, acc)


def slot_mult_left(a: Mapping, x: PolyTensor, product: Callable, style: str = "finite") -> PolyTensor:
    """``a . x`` for ``x`` in ``H^n (x)_H A``."""
    return slot_mult_left_raw(x.module, a, x.raw_terms(), product, style, x.n)


def slot_mult_left_raw(module: HModule, a: Mapping, raw, product: Callable, style: str = "finite", n: int = 2) -> PolyTensor:
    kernel = module.kernel
    one = kernel.one()
    acc: dict = {}
    for slots, bvec in raw:
        for mono, c0 in _as_terms(kernel, slots):
            if style == "current":
                for (i, ha), ca in a.items():
                    new = (kernel.mul_key(mono[0], ha),) + mono[1:]
                    for bk, cb in bvec.items():
                        straighten_into(acc, module, new, product((i, one), bk), c0 * ca * cb)
            elif len(mono) == 1:
                for ak, ca in a.items():
                    for bk, cb in module.act(mono[0], bvec).items():
                        straighten_into(acc, module, (one,), product(ak, bk), c0 * ca * cb)
            else:
                # (q1, f2 q2, ..., f_{n-1} q_{n-1}, f_n) (x)_H (S^-1(q_n) a).b
                for legs, m in kernel.coproduct_key(mono[0], len(mono)):
                    mid = tuple(kernel.mul_key(f, q) for f, q in zip(mono[1:-1], legs[1:-1]))
                    new = (legs[0],) + mid + (mono[-1],)
                    tw, s = kernel.antipode_key(legs[-1])
                    for ak, ca in module.act(tw, a).items():
                        for bk, cb in bvec.items():
                            straighten_into(acc, module, new, product(ak, bk), c0 * m * s * ca * cb)
    return PolyTensor(module, n, acc)


def compose_bracket(x: PolyTensor, y: PolyTensor, bracket: Callable[[object, object], PolyTensor]) -> PolyTensor:
    """``{x * y}`` for ``x`` in ``H^n (x)_H A`` and ``y`` in ``H^m (x)_H A``.

    ``bracket(a_key, b_key)`` is the two-slot bracket of module keys. Each
    outer Hopf block is spread by the iterated coproduct of the matching
    bracket slot: ``(F Delta^{n-1}(u) x G Delta^{m-1}(v)) (x)_H w``.
    """
    if x.module is not y.module:
        raise ModuleMismatch("bracket arguments live in different modules")
    module = x.module
    kernel = module.kernel
    n, m = x.n, y.n
    acc: dict = {}
    for fs, avec in x.raw_terms():
        ((ak, ca),) = avec.items()
        for gs, bvec in y.raw_terms():
            ((bk, cb),) = bvec.items()
            br = bracket(ak, bk)
            for (uv_prefix, wk), cw in br.terms.items():
                u = uv_prefix[0]
                v = kernel.one()
                for ulegs, mu in kernel.coproduct_key(u, n):
                    left = tuple(kernel.mul_key(f, p) for f, p in zip(fs, ulegs))
                    for vlegs, mv in kernel.coproduct_key(v, m):
                        right = tuple(kernel.mul_key(g, q) for g, q in zip(gs, vlegs))
                        straighten_into(acc, module, left + right, {wk: Fraction(1)}, ca * cb * cw * mu * mv)
    return PolyTensor(module, n + m, acc)


def free_generator_pairs(module: FreeModule) -> list[tuple]:
    return [(a, b) for a in module.generators() for b in module.generators()]
