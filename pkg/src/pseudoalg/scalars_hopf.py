"""Exact scalars and the two cocommutative Hopf algebra kernels.

Basis monomials are plain tuples of ints:

* polynomial kernel ``k[d1..dn]``: exponent tuple ``(a1, ..., an)``;
* group kernel ``k[Z/m1 x ... x Z/mr]``: residue tuple ``(g1, ..., gr)``.

Both kernels multiply basis monomials to a single basis monomial with
coefficient one, which keeps every slot computation downstream sparse.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product as cartesian
from math import factorial
from typing import Iterable, Iterator, Mapping

Rational = Fraction
Key = tuple[int, ...]


class KernelMismatch(ValueError):
    """Raised when elements over different Hopf kernels are combined."""


def as_rational(value: int | str | Fraction) -> Fraction:
    return value if isinstance(value, Fraction) else Fraction(value)


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _multinomial(parts: tuple[int, ...]) -> int:
    out = factorial(sum(parts))
    for p in parts:
        out //= factorial(p)
    return out


@dataclass(frozen=True)
class HopfKernel:
    """A concrete cocommutative Hopf algebra with a monomial basis.

    Use :meth:`polynomial` or :meth:`group` rather than the raw constructor.
    """

    kind: str
    rank: int = 0
    orders: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.kind == "polynomial":
            if self.rank < 1:
                raise ValueError("polynomial kernel needs at least one generator")
        elif self.kind == "group":
            if not self.orders or any(m < 1 for m in self.orders):
                raise ValueError("group kernel needs cyclic orders >= 1")
        else:
            raise ValueError(f"unknown kernel kind {self.kind!r}")

    @classmethod
    def polynomial(cls, n: int) -> HopfKernel:
        return cls("polynomial", rank=n)

    @classmethod
    def group(cls, *orders: int) -> HopfKernel:
        return cls("group", rank=len(orders), orders=tuple(orders))

    @property
    def is_group(self) -> bool:
        return self.kind == "group"

    @property
    def is_finite(self) -> bool:
        return self.is_group

    def one(self) -> Key:
        return (0,) * self.rank

    def generator_keys(self) -> list[Key]:
        """The algebra generators: each d_i, or each cyclic generator g_i."""
        out = []
        for i in range(self.rank):
            key = [0] * self.rank
            key[i] = 1
            out.append(self.normalize_key(tuple(key)))
        return out

    def normalize_key(self, key: Key) -> Key:
        if self.is_group:
            return tuple(k % m for k, m in zip(key, self.orders))
        if any(k < 0 for k in key):
            raise ValueError(f"negative exponent in {key}")
        return tuple(key)

    def degree(self, key: Key) -> int:
        return sum(key) if not self.is_group else 0

    def order(self) -> int:
        if not self.is_group:
            raise ValueError("polynomial kernel is infinite-dimensional")
        out = 1
        for m in self.orders:
            out *= m
        return out

    def basis(self, max_degree: int | None = None) -> list[Key]:
        """All group elements, or polynomial monomials up to ``max_degree``."""
        if self.is_group:
            return sorted(cartesian(*(range(m) for m in self.orders)), key=self.sort_key)
        if max_degree is None:
            raise ValueError("polynomial basis needs a degree bound")
        keys = [c for t in range(max_degree + 1) for c in _compositions(t, self.rank)]
        return sorted(keys, key=self.sort_key)

    def sort_key(self, key: Key) -> tuple:
        # graded lexicographic: total degree first, then larger leading exponents first
        return (sum(key), tuple(-k for k in key))

    # -- structure maps on basis monomials ---------------------------------

    def mul_key(self, a: Key, b: Key) -> Key:
        if self.is_group:
            return tuple((x + y) % m for x, y, m in zip(a, b, self.orders))
        return tuple(x + y for x, y in zip(a, b))

    def counit_key(self, key: Key) -> int:
        if self.is_group:
            return 1
        return 1 if not any(key) else 0

    def antipode_key(self, key: Key) -> tuple[Key, int]:
        """S on a basis monomial: ``(key', sign)`` with ``S(key) = sign * key'``."""
        if self.is_group:
            return tuple((-k) % m for k, m in zip(key, self.orders)), 1
        return key, -1 if sum(key) % 2 else 1

    def coproduct_key(self, key: Key, legs: int = 2) -> list[tuple[tuple[Key, ...], int]]:
        """Iterated coproduct of a basis monomial into ``legs`` tensor factors."""
        return _coproduct_cached(self, key, legs)

    # -- text form ---------------------------------------------------------

    def format_key(self, key: Key) -> str:
        letter = "g" if self.is_group else "d"
        parts = []
        for i, e in enumerate(key):
            if e == 1:
                parts.append(f"{letter}{i + 1}")
            elif e > 1:
                parts.append(f"{letter}{i + 1}^{e}")
        return "*".join(parts) if parts else "1"

    def parse_key(self, text: str) -> Key:
        text = text.strip()
        letter = "g" if self.is_group else "d"
        key = [0] * self.rank
        if text == "1":
            return self.one()
        for factor in text.split("*"):
            m = re.fullmatch(rf"{letter}(\d+)(?:\^(\d+))?", factor.strip())
            if not m:
                raise ValueError(f"bad Hopf monomial factor {factor!r}")
            idx = int(m.group(1)) - 1
            if not 0 <= idx < self.rank:
                raise ValueError(f"generator {factor!r} out of range")
            key[idx] += int(m.group(2) or 1)
        return self.normalize_key(tuple(key))

    def describe(self) -> str:
        if self.is_group:
            return "group(" + ",".join(str(m) for m in self.orders) + ")"
        return f"polynomial({self.rank})"


@lru_cache(maxsize=None)
def _coproduct_cached(kernel: HopfKernel, key: Key, legs: int) -> list[tuple[tuple[Key, ...], int]]:
    if legs < 1:
        raise ValueError("need at least one leg")
    if kernel.is_group:
        return [((key,) * legs, 1)]
    # each exponent splits independently over the legs with multinomial weight
    per_var = [list(_compositions(e, legs)) for e in key]
    out = []
    for choice in cartesian(*per_var):
        coef = 1
        for parts in choice:
            coef *= _multinomial(parts)
        leg_keys = tuple(tuple(choice[v][leg] for v in range(kernel.rank)) for leg in range(legs))
        out.append((leg_keys, coef))
    return out


class HopfElement:
    """Finite rational combination of basis monomials of one kernel."""

    __slots__ = ("kernel", "terms")

    def __init__(self, kernel: HopfKernel, terms: Mapping[Key, Fraction] | None = None):
        self.kernel = kernel
        clean: dict[Key, Fraction] = {}
        for k, c in (terms or {}).items():
            c = as_rational(c)
            if c:
                k = kernel.normalize_key(k)
                clean[k] = clean.get(k, Fraction(0)) + c
                if not clean[k]:
                    del clean[k]
        self.terms = dict(sorted(clean.items(), key=lambda kv: kernel.sort_key(kv[0])))

    @classmethod
    def monomial(cls, kernel: HopfKernel, key: Key, coef: int | Fraction = 1) -> HopfElement:
        return cls(kernel, {key: as_rational(coef)})

    @classmethod
    def unit(cls, kernel: HopfKernel) -> HopfElement:
        return cls.monomial(kernel, kernel.one())

    @classmethod
    def generator(cls, kernel: HopfKernel, i: int) -> HopfElement:
        return cls.monomial(kernel, kernel.generator_keys()[i])

    def _same(self, other: HopfElement) -> None:
        if self.kernel != other.kernel:
            raise KernelMismatch(f"{self.kernel.describe()} vs {other.kernel.describe()}")

    def __add__(self, other: HopfElement) -> HopfElement:
        self._same(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, Fraction(0)) + c
        return HopfElement(self.kernel, out)

    def __neg__(self) -> HopfElement:
        return HopfElement(self.kernel, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: HopfElement) -> HopfElement:
        return self + (-other)

    def __mul__(self, other: HopfElement | int | Fraction) -> HopfElement:
        if not isinstance(other, HopfElement):
            c = as_rational(other)
            return HopfElement(self.kernel, {k: v * c for k, v in self.terms.items()})
        self._same(other)
        out: dict[Key, Fraction] = {}
        for ka, ca in self.terms.items():
            for kb, cb in other.terms.items():
                k = self.kernel.mul_key(ka, kb)
                out[k] = out.get(k, Fraction(0)) + ca * cb
        return HopfElement(self.kernel, out)

    def __rmul__(self, other: int | Fraction) -> HopfElement:
        return self * other

    def __pow__(self, n: int) -> HopfElement:
        out = HopfElement.unit(self.kernel)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other: object) -> bool:
        return isinstance(other, HopfElement) and self.kernel == other.kernel and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.kernel, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def __repr__(self) -> str:
        return f"HopfElement({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for k, c in self.terms.items():
            mono = self.kernel.format_key(k)
            if mono == "1":
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def hopf_product(a: HopfElement, b: HopfElement) -> HopfElement:
    return a * b


def coproduct_iter(h: HopfElement, k: int) -> dict[tuple[Key, ...], Fraction]:
    """``Delta^k(h)`` as a map from (k+1)-tuples of monomials to coefficients.

    ``k = 0`` returns ``h`` itself with 1-tuples as keys.
    """
    if k < 0:
        raise ValueError("iteration count must be >= 0")
    out: dict[tuple[Key, ...], Fraction] = {}
    for key, c in h.terms.items():
        for legs, m in h.kernel.coproduct_key(key, k + 1):
            out[legs] = out.get(legs, Fraction(0)) + c * m
    return {t: c for t, c in out.items() if c}


def counit(h: HopfElement) -> Fraction:
    return sum((c * h.kernel.counit_key(k) for k, c in h.terms.items()), Fraction(0))


def antipode(h: HopfElement, inverse: bool = False) -> HopfElement:
    """S(h), or S^{-1}(h) when ``inverse``; both kernels have S^2 = id."""
    out: dict[Key, Fraction] = {}
    for k, c in h.terms.items():
        k2, sign = h.kernel.antipode_key(k)
        out[k2] = out.get(k2, Fraction(0)) + sign * c
    return HopfElement(h.kernel, out)


def elements_up_to(kernel: HopfKernel, max_degree: int = 4) -> Iterable[HopfElement]:
    for key in kernel.basis(None if kernel.is_group else max_degree):
        yield HopfElement.monomial(kernel, key)



def _tensor_square_product(x: Mapping, y: Mapping, kernel: HopfKernel) -> dict:
    out: dict = {}
    for (a1, a2), c in x.items():
        for (b1, b2), d in y.items():
            k = (kernel.mul_key(a1, b1), kernel.mul_key(a2, b2))
            out[k] = out.get(k, 0) + c * d
    return {k: v for k, v in out.items() if v}


def check_hopf_laws(kernel: HopfKernel, max_degree: int = 4):
    """Bialgebra, counit, antipode, cocommutativity and involution laws on basis monomials.

    Polynomial kernels use monomials of total degree at most ``max_degree``;
    group kernels use every group element.
    """
    from .report import Report

    rep = Report(title=f"Hopf laws for {kernel.describe()}")
    keys = kernel.basis(None if kernel.is_group else max_degree)
    fmt = kernel.format_key
    one = kernel.one()

    def delta(k: Key) -> dict:
        return {legs: c for legs, c in kernel.coproduct_key(k, 2)}

    for a in keys:
        da = delta(a)
        for b in keys:
            if not kernel.is_group and sum(a) + sum(b) > max_degree:
                continue
            ab = kernel.mul_key(a, b)
            lhs = delta(ab)
            rhs = _tensor_square_product(da, delta(b), kernel)
            rep.add("hopf-bialgebra", (fmt(a), fmt(b)), lhs == rhs, f"D(ab) = {lhs}, D(a)D(b) = {rhs}")
            e_ab = kernel.counit_key(ab)
            e_a_e_b = kernel.counit_key(a) * kernel.counit_key(b)
            rep.add("hopf-counit", ("mult", fmt(a), fmt(b)), e_ab == e_a_e_b, f"e(ab) = {e_ab}, e(a)e(b) = {e_a_e_b}")
        # coassociativity through the three-leg coproduct
        three: dict = {}
        for (l1, l2), c in da.items():
            for (m1, m2), d in delta(l1).items():
                three[(m1, m2, l2)] = three.get((m1, m2, l2), 0) + c * d
        direct = {legs: c for legs, c in kernel.coproduct_key(a, 3)}
        rep.add("hopf-bialgebra", ("coassoc", fmt(a)), {k: v for k, v in three.items() if v} == direct, "(D x id)D != D^2")
        left: dict = {}
        right: dict = {}
        for (l1, l2), c in da.items():
            left[l2] = left.get(l2, 0) + c * kernel.counit_key(l1)
            right[l1] = right.get(l1, 0) + c * kernel.counit_key(l2)
        split = {k: v for k, v in left.items() if v} == {a: 1} == {k: v for k, v in right.items() if v}
        rep.add("hopf-counit", ("split", fmt(a)), split, f"(e x id)D(a) = {left}, (id x e)D(a) = {right}")
        for side in ("left", "right"):
            acc: dict = {}
            for (l1, l2), c in da.items():
                s, sign = kernel.antipode_key(l1 if side == "left" else l2)
                k = kernel.mul_key(s, l2) if side == "left" else kernel.mul_key(l1, s)
                acc[k] = acc.get(k, 0) + c * sign
            acc = {k: v for k, v in acc.items() if v}
            want = {one: kernel.counit_key(a)} if kernel.counit_key(a) else {}
            rep.add("hopf-antipode", (side, fmt(a)), acc == want, f"S(h1)h2 = {acc}, e(h)1 = {want}")
        swapped = {(l2, l1): c for (l1, l2), c in da.items()}
        rep.add("hopf-cocommutative", (fmt(a),), swapped == da, f"D(a) = {da}, swapped {swapped}")
        s1, e1 = kernel.antipode_key(a)
        s2, e2 = kernel.antipode_key(s1)
        rep.add("hopf-involution", (fmt(a),), s2 == a and e1 * e2 == 1, f"S(S(a)) = {e1 * e2}*{fmt(s2)}")
    return rep
