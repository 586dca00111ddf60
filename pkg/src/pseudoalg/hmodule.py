"""Left H-modules in two presentations, their elements, and H-linear maps.

A module exposes a k-basis of *keys*:

* :class:`FreeModule` keys are ``(i, h)``: the Hopf monomial ``h`` times generator ``e_i``;
* :class:`FiniteDimModule` keys are basis indices ``0..d-1``.

Vectors are sparse ``dict[key, Fraction]``. Everything downstream works on
keys and vectors, so both presentations share one code path.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Hashable, Mapping, Sequence

from .linalg import vec_add, vec_scale
from .report import Report
from .scalars_hopf import HopfElement, HopfKernel, Key

Matrix = tuple[tuple[Fraction, ...], ...]


class ModuleMismatch(ValueError):
    pass


class Unsupported(ValueError):
    """Operation not available for this module presentation or kernel."""


def _mat(rows: Sequence[Sequence]) -> Matrix:
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


def _identity(d: int) -> Matrix:
    return tuple(tuple(Fraction(int(i == j)) for j in range(d)) for i in range(d))


def _matmul(a: Matrix, b: Matrix) -> Matrix:
    d = len(a)
    cols = list(zip(*b)) if b else []
    return tuple(tuple(sum((a[i][k] * cols[j][k] for k in range(d)), Fraction(0)) for j in range(d)) for i in range(d))


class HModule:
    kernel: HopfKernel
    name: str

    def act_key(self, hkey: Key, mkey: Hashable) -> dict:
        raise NotImplementedError

    def act(self, h: HopfElement | Key, vec: Mapping) -> dict:
        """``h . vec`` for a Hopf element or a bare monomial key."""
        terms = h.terms if isinstance(h, HopfElement) else {h: Fraction(1)}
        out: dict = {}
        for hk, hc in terms.items():
            for mk, mc in vec.items():
                vec_add(out, self.act_key(hk, mk), hc * mc)
        return out

    def generators(self) -> list:
        raise NotImplementedError

    def basis(self) -> list:
        raise NotImplementedError

    @property
    def is_free(self) -> bool:
        return isinstance(self, FreeModule)

    @property
    def has_finite_basis(self) -> bool:
        return isinstance(self, FiniteDimModule) or self.kernel.is_group

    def degree_of(self, mkey: Hashable) -> int:
        raise NotImplementedError

    def homogeneous_degree(self, vec: Mapping) -> int | None:
        degs = {self.degree_of(k) for k in vec}
        return degs.pop() if len(degs) == 1 else None

    def format_key(self, mkey: Hashable) -> str:
        raise NotImplementedError

    def format_vec(self, vec: Mapping) -> str:
        if not vec:
            return "0"
        parts = []
        for k in sorted(vec, key=self.sort_key):
            c = vec[k]
            name = self.format_key(k)
            parts.append(name if c == 1 else f"-{name}" if c == -1 else f"{c}*{name}")
        return " + ".join(parts).replace("+ -", "- ")

    def sort_key(self, mkey: Hashable):
        return mkey


@dataclass(frozen=True, eq=False)
class FreeModule(HModule):
    """Free module ``H e_1 + ... + H e_r``; H acts by left multiplication."""

    kernel: HopfKernel
    rank: int
    labels: tuple[str, ...] = ()
    degrees: tuple[int, ...] = ()
    name: str = "M"

    def __post_init__(self) -> None:
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"e{i + 1}" for i in range(self.rank)))
        if not self.degrees:
            object.__setattr__(self, "degrees", (0,) * self.rank)
        if len(self.labels) != self.rank or len(self.degrees) != self.rank:
            raise ValueError("labels/degrees must match the rank")

    def gen(self, i: int) -> tuple[int, Key]:
        return (i, self.kernel.one())

    def gen_vec(self, i: int, h: Key | None = None, coef: Fraction | int = 1) -> dict:
        return {(i, h if h is not None else self.kernel.one()): Fraction(coef)}

    def act_key(self, hkey: Key, mkey) -> dict:
        i, k = mkey
        return {(i, self.kernel.mul_key(hkey, k)): Fraction(1)}

    def generators(self) -> list:
        return [self.gen(i) for i in range(self.rank)]

    def basis(self) -> list:
        if not self.kernel.is_group:
            raise Unsupported("free module over the polynomial kernel has no finite k-basis")
        return [(i, g) for i in range(self.rank) for g in self.kernel.basis()]

    def degree_of(self, mkey) -> int:
        return self.degrees[mkey[0]]

    def format_key(self, mkey) -> str:
        i, k = mkey
        mono = self.kernel.format_key(k)
        return self.labels[i] if mono == "1" else f"{mono}*{self.labels[i]}"

    def sort_key(self, mkey):
        return (mkey[0], self.kernel.sort_key(mkey[1]))

    def coefficients(self, vec: Mapping) -> list[HopfElement]:
        """The vector as ``r`` Hopf coefficients, one per generator."""
        out = [dict() for _ in range(self.rank)]
        for (i, k), c in vec.items():
            out[i][k] = out[i].get(k, Fraction(0)) + c
        return [HopfElement(self.kernel, t) for t in out]


@dataclass(frozen=True, eq=False)
class FiniteDimModule(HModule):
    """k^d with one commuting action matrix per Hopf generator.

    ``matrices[g][i][j]`` is the coefficient of basis ``i`` in ``g . b_j``.
    """

    kernel: HopfKernel
    dim: int
    matrices: tuple[Matrix, ...]
    labels: tuple[str, ...] = ()
    degrees: tuple[int, ...] = ()
    name: str = "M"

    def __post_init__(self) -> None:
        object.__setattr__(self, "matrices", tuple(_mat(m) for m in self.matrices))
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"b{i + 1}" for i in range(self.dim)))
        if not self.degrees:
            object.__setattr__(self, "degrees", (0,) * self.dim)
        if len(self.matrices) != self.kernel.rank:
            raise ValueError("need one action matrix per Hopf generator")
        for m in self.matrices:
            if len(m) != self.dim or any(len(r) != self.dim for r in m):
                raise ValueError("action matrix has the wrong shape")
        for a in self.matrices:
            for b in self.matrices:
                if _matmul(a, b) != _matmul(b, a):
                    raise ValueError("action matrices must commute")
        if self.kernel.is_group:
            for m, order in zip(self.matrices, self.kernel.orders):
                p = _identity(self.dim)
                for _ in range(order):
                    p = _matmul(p, m)
                if p != _identity(self.dim):
                    raise ValueError("group generator matrix does not have the right order")

    @classmethod
    def trivial(cls, kernel: HopfKernel, dim: int, **kw) -> FiniteDimModule:
        """H acting through the counit."""
        mats = []
        for _ in range(kernel.rank):
            mats.append(_identity(dim) if kernel.is_group else tuple((Fraction(0),) * dim for _ in range(dim)))
        return cls(kernel, dim, tuple(mats), **kw)

    @classmethod
    def regular(cls, kernel: HopfKernel, rank: int = 1, labels: Sequence[str] = (), degrees: Sequence[int] = (), name: str = "M") -> FiniteDimModule:
        """``rank`` copies of the regular representation of a finite group kernel.

        Basis index ``i * |G| + t`` stands for ``g_t . e_i`` with ``g_t`` the
        ``t``-th group element in canonical order.
        """
        if not kernel.is_group:
            raise Unsupported("regular representation needs a group kernel")
        elems = kernel.basis()
        n = len(elems)
        pos = {g: t for t, g in enumerate(elems)}
        mats = []
        for gen in kernel.generator_keys():
            m = [[Fraction(0)] * (rank * n) for _ in range(rank * n)]
            for i in range(rank):
                for t, g in enumerate(elems):
                    m[i * n + pos[kernel.mul_key(gen, g)]][i * n + t] = Fraction(1)
            mats.append(m)
        base_labels = list(labels) or [f"e{i + 1}" for i in range(rank)]
        lab = tuple(
            base_labels[i] if kernel.format_key(g) == "1" else f"{kernel.format_key(g)}*{base_labels[i]}"
            for i in range(rank)
            for g in elems
        )
        degs = tuple(d for d in (list(degrees) or [0] * rank) for _ in elems)
        return cls(kernel, rank * n, tuple(mats), lab, degs, name)

    def matrix(self, hkey: Key) -> Matrix:
        return _power_matrix(self, hkey)

    def act_key(self, hkey: Key, mkey: int) -> dict:
        return _column(self, hkey, mkey)

    def generators(self) -> list:
        return list(range(self.dim))

    def basis(self) -> list:
        return list(range(self.dim))

    def degree_of(self, mkey: int) -> int:
        return self.degrees[mkey]

    def format_key(self, mkey: int) -> str:
        return self.labels[mkey]


@lru_cache(maxsize=None)
def _power_matrix(mod: FiniteDimModule, hkey: Key) -> Matrix:
    out = _identity(mod.dim)
    for m, e in zip(mod.matrices, hkey):
        for _ in range(e):
            out = _matmul(m, out)
    return out


@lru_cache(maxsize=None)
def _column(mod: FiniteDimModule, hkey: Key, j: int) -> dict:
    m = _power_matrix(mod, hkey)
    return {i: m[i][j] for i in range(mod.dim) if m[i][j]}


class HModuleElement:
    """Convenience wrapper pairing a sparse vector with its module."""

    __slots__ = ("module", "vec")

    def __init__(self, module: HModule, vec: Mapping | None = None):
        self.module = module
        self.vec = {k: Fraction(c) for k, c in (vec or {}).items() if c}

    def __add__(self, other: HModuleElement) -> HModuleElement:
        if other.module is not self.module:
            raise ModuleMismatch("elements of different modules")
        return HModuleElement(self.module, vec_add(dict(self.vec), other.vec))

    def __sub__(self, other: HModuleElement) -> HModuleElement:
        return self + other * -1

    def __mul__(self, c: Fraction | int) -> HModuleElement:
        return HModuleElement(self.module, vec_scale(self.vec, Fraction(c)))

    def __rmul__(self, h):
        if isinstance(h, HopfElement):
            return HModuleElement(self.module, self.module.act(h, self.vec))
        return self * h

    def __eq__(self, other: object) -> bool:
        return isinstance(other, HModuleElement) and other.module is self.module and other.vec == self.vec

    def __hash__(self):
        return hash(frozenset(self.vec.items()))

    def __str__(self) -> str:
        return self.module.format_vec(self.vec)

    __repr__ = __str__


def act(h: HopfElement, m: HModuleElement) -> HModuleElement:
    if h.kernel != m.module.kernel:
        raise ModuleMismatch("kernel mismatch between Hopf element and module")
    return HModuleElement(m.module, m.module.act(h, m.vec))


@dataclass(eq=False)
class HLinearMap:
    """A map given on module generators (free) or on the k-basis (finite).

    Free sources are extended H-linearly, so they are H-linear by
    construction; finite sources are extended k-linearly and may fail
    :func:`hlinear_check`.
    """

    source: HModule
    target: HModule
    images: dict = field(default_factory=dict)
    degree: int = 0
    name: str = "f"

    def image(self, mkey) -> dict:
        if isinstance(self.source, FreeModule):
            i, h = mkey
            return self.target.act(h, self.images.get(self.source.gen(i), {}))
        return dict(self.images.get(mkey, {}))

    def __call__(self, vec: Mapping) -> dict:
        out: dict = {}
        for k, c in vec.items():
            vec_add(out, self.image(k), c)
        return out

    def compose(self, first: HLinearMap) -> HLinearMap:
        """``self o first``."""
        if first.target is not self.source:
            raise ModuleMismatch("maps are not composable")
        imgs = {g: self(first.image(g)) for g in first.source.generators()}
        return HLinearMap(first.source, self.target, imgs, first.degree + self.degree, f"{self.name}.{first.name}")

    def scaled(self, c: Fraction | int) -> HLinearMap:
        return HLinearMap(self.source, self.target, {g: vec_scale(v, Fraction(c)) for g, v in self.images.items()}, self.degree, self.name)

    @classmethod
    def identity(cls, module: HModule, name: str = "id") -> HLinearMap:
        return cls(module, module, {g: {g: Fraction(1)} for g in module.generators()}, 0, name)

    @classmethod
    def zero(cls, source: HModule, target: HModule | None = None, degree: int = 0, name: str = "0") -> HLinearMap:
        return cls(source, target or source, {}, degree, name)


def hlinear_check(phi: HLinearMap) -> Report:
    """Check ``phi(h m) = h phi(m)`` on Hopf generators and module generators."""
    rep = Report(title=f"H-linearity of {phi.name}")
    src = phi.source
    for hk in src.kernel.generator_keys():
        for g in src.generators():
            lhs = phi(src.act_key(hk, g))
            rhs = phi.target.act(hk, phi.image(g))
            diff = vec_add(dict(lhs), rhs, -1)
            rep.add(
                "hlinear",
                (src.kernel.format_key(hk), src.format_key(g)),
                not diff,
                f"phi(h.m) - h.phi(m) = {phi.target.format_vec(diff)}",
            )
    return rep
