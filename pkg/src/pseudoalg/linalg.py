"""Sparse exact linear algebra over Q.

Vectors are ``dict[coordinate, Fraction]`` with no zero entries. The echelon
basis is kept fully reduced, so :meth:`EchelonBasis.reduce` returns a
canonical representative modulo the span.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Hashable, Iterable, Mapping

Vec = dict


def vec_add(acc: dict, v: Mapping, scale: Fraction | int = 1) -> dict:
    """In-place ``acc += scale * v``; returns ``acc``."""
    if not scale:
        return acc
    for k, c in v.items():
        x = acc.get(k, 0) + scale * c
        if x:
            acc[k] = x
        else:
            acc.pop(k, None)
    return acc


def vec_scale(v: Mapping, scale: Fraction | int) -> dict:
    if not scale:
        return {}
    return {k: c * scale for k, c in v.items()}


def vec_clean(v: Mapping) -> dict:
    return {k: Fraction(c) for k, c in v.items() if c}


class EchelonBasis:
    """Incrementally grown reduced row-echelon basis.

    With ``track=True`` every row remembers which combination of the tagged
    input vectors produced it, which is what quotient projections need.
    """

    def __init__(self, order: Callable[[Hashable], object] | None = None, track: bool = False):
        self.order = order or (lambda k: k)
        self.track = track
        self.rows: dict[Hashable, dict] = {}
        self.combos: dict[Hashable, dict] = {}

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, v: Mapping, with_combo: bool = False):
        r = dict(v)
        combo: dict = {}
        for p in [p for p in r if p in self.rows]:
            c = r.get(p)
            if not c:
                continue
            vec_add(r, self.rows[p], -c)
            if with_combo and self.track:
                vec_add(combo, self.combos[p], c)
        return (r, combo) if with_combo else r

    def contains(self, v: Mapping) -> bool:
        return not self.reduce(v)

    def add(self, v: Mapping, tag: Hashable | None = None) -> bool:
        """Insert ``v``; returns False when it was already in the span."""
        r, used = self.reduce(v, with_combo=True)
        if not r:
            return False
        pivot = max(r, key=self.order)
        inv = 1 / Fraction(r[pivot])
        row = {k: c * inv for k, c in r.items()}
        combo = {}
        if self.track:
            combo = vec_add({tag: Fraction(1)} if tag is not None else {}, used, -1)
            combo = vec_scale(combo, inv)
        for p, other in self.rows.items():
            c = other.get(pivot)
            if c:
                vec_add(other, row, -c)
                if self.track:
                    vec_add(self.combos[p], combo, -c)
        self.rows[pivot] = row
        if self.track:
            self.combos[pivot] = combo
        return True

    def extend(self, vectors: Iterable[Mapping]) -> int:
        return sum(1 for v in vectors if self.add(v))

    def combination(self, v: Mapping) -> dict | None:
        """Tag coefficients expressing ``v`` in the span, or None if outside."""
        r, combo = self.reduce(v, with_combo=True)
        return None if r else combo

    def basis(self) -> list[dict]:
        return [dict(self.rows[p]) for p in sorted(self.rows, key=self.order)]


def kernel_and_image(domain: list, apply: Callable[[Hashable], Mapping]) -> tuple[list[dict], list[dict]]:
    """Exact kernel and image bases of the linear map sending basis ``domain[i]`` to ``apply(domain[i])``."""
    ech = EchelonBasis(track=True)
    kernel = []
    image = []
    for j, key in enumerate(domain):
        img = dict(apply(key))
        combo = ech.combination(img)
        if combo is None:
            ech.add(img, tag=j)
            image.append(img)
        else:
            vec = {key: Fraction(1)}
            for t, c in combo.items():
                vec_add(vec, {domain[t]: Fraction(1)}, -c)
            kernel.append(vec)
    return kernel, image


class QuotientSpace:
    """``W / U`` for subspaces ``U <= W`` of a coordinate space.

    Classes are addressed by index ``0..dim-1``; :meth:`lift` gives the chosen
    representative and :meth:`project` returns class coordinates of any
    vector of ``W``.
    """

    def __init__(self, sub: Iterable[Mapping], ambient: Iterable[Mapping], order=None):
        self.echelon = EchelonBasis(order=order, track=True)
        for u in sub:
            self.echelon.add(u)
        self.reps: list[dict] = []
        for w in ambient:
            r = self.echelon.reduce(w)
            if r and self.echelon.add(r, tag=len(self.reps)):
                self.reps.append(r)

    @property
    def dim(self) -> int:
        return len(self.reps)

    def lift(self, i: int) -> dict:
        return dict(self.reps[i])

    def project(self, v: Mapping) -> dict[int, Fraction]:
        combo = self.echelon.combination(v)
        if combo is None:
            raise ValueError("vector lies outside the ambient subspace")
        return {i: c for i, c in combo.items() if c}

    def is_zero(self, v: Mapping) -> bool:
        return not self.project(v)


def rank_of(vectors: Iterable[Mapping]) -> int:
    ech = EchelonBasis()
    ech.extend(vectors)
    return ech.rank
