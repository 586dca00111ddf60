"""Plain-text model definitions: parser, canonical printer and resolver.

A file is a list of sections::

    [hopf]            kernel = polynomial(1) | group(2,3)
    [module NAME]     kind = free|finite|algebra, size = n, labels = a, b, ...,
                      act.d1 = 0 1; 0 0   (finite modules, one matrix per Hopf generator)
    [product NAME]    kind = commutative|pseudo, unit = <vector>, rows ``a * b -> <expr>``
    [bracket NAME]    rows ``a * b -> <expr>``
    [map NAME]        source = A, target = B, degree = 0, rows ``a -> <vector>``
    [grading NAME]    degrees = 0, 1, ...   p = 0   differential = MAPNAME
    [task]            verb = ..., plus verb arguments

Expressions are sums of terms ``(h1,h2)@(coeff m)``; vector-valued rows drop
the slot part and write ``(coeff m)``. ``0`` is the empty sum.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .scalars_hopf import HopfKernel

SECTIONS = ("hopf", "module", "product", "bracket", "map", "grading", "task")
NAMED = {"module", "product", "bracket", "map", "grading"}
_IDENT = re.compile(r"[A-Za-z_][\w'.\-]*")
_RATIONAL = re.compile(r"[+-]?\d+(?:/\d+)?")


class ModelError(ValueError):
    """Syntax or semantic error with a 1-based line and column."""

    def __init__(self, message: str, line: int = 0, col: int = 0):
        where = f"{line}:{col}: " if line else ""
        super().__init__(where + message)
        self.message = message
        self.line = line
        self.col = col


# -- expressions -----------------------------------------------------------------

Term = tuple  # (slots: tuple[str, ...] | None, element: str)


@dataclass(frozen=True)
class Expr:
    """Sum of ``coeff * (slots)@(element)``; ``slots`` is None for plain vectors.

    Terms are merged and sorted, so equal sums compare equal.
    """

    terms: tuple[tuple[tuple[str, ...] | None, str, Fraction], ...] = ()

    @classmethod
    def build(cls, raw) -> Expr:
        acc: dict = {}
        for slots, elem, c in raw:
            acc[(slots, elem)] = acc.get((slots, elem), Fraction(0)) + c
        items = sorted(((s, e, c) for (s, e), c in acc.items() if c), key=lambda t: (t[0] is not None, t[0] or (), t[1]))
        return cls(tuple(items))

    @property
    def is_vector(self) -> bool:
        return all(s is None for s, _e, _c in self.terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for slots, elem, c in self.terms:
            body = f"({c} {elem})"
            parts.append(body if slots is None else f"({','.join(slots)})@{body}")
        return " + ".join(parts)


class _Cursor:
    def __init__(self, text: str, line: int, offset: int):
        self.text = text
        self.pos = 0
        self.line = line
        self.offset = offset

    def error(self, message: str) -> ModelError:
        return ModelError(message, self.line, self.offset + self.pos + 1)

    def skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str) -> None:
        if self.peek() != ch:
            got = self.peek() or "end of line"
            raise self.error(f"expected {ch!r}, found {got!r}")
        self.pos += 1

    def until(self, stops: str) -> str:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos] not in stops:
            self.pos += 1
        return self.text[start:self.pos].strip()

    def done(self) -> bool:
        return self.peek() == ""


def parse_expr(text: str, line: int = 0, offset: int = 0) -> Expr:
    cur = _Cursor(text, line, offset)
    if cur.peek() == "0":
        cur.pos += 1
        if not cur.done():
            raise cur.error("unexpected text after 0")
        return Expr()
    raw = []
    sign = Fraction(1)
    if cur.peek() in "+-":
        sign = Fraction(-1 if cur.peek() == "-" else 1)
        cur.pos += 1
    while True:
        cur.expect("(")
        inner = cur.until(")")
        cur.expect(")")
        slots = None
        if cur.peek() == "@":
            cur.pos += 1
            slots = tuple(s.strip() for s in inner.split(",")) if inner else ()
            if any(not s for s in slots):
                raise cur.error("empty Hopf slot")
            cur.expect("(")
            inner = cur.until(")")
            cur.expect(")")
        coef, elem = _coef_elem(inner, cur)
        raw.append((slots, elem, sign * coef))
        if cur.done():
            return Expr.build(raw)
        op = cur.peek()
        if op not in "+-":
            raise cur.error(f"expected '+' or '-', found {op!r}")
        cur.pos += 1
        sign = Fraction(-1 if op == "-" else 1)


def _coef_elem(inner: str, cur: _Cursor) -> tuple[Fraction, str]:
    parts = inner.split()
    if len(parts) == 1:
        return Fraction(1), parts[0]
    if len(parts) == 2 and _RATIONAL.fullmatch(parts[0]):
        return Fraction(parts[0]), parts[1]
    raise cur.error(f"expected '(coeff element)', found {inner!r}")


def parse_rational(text: str) -> Fraction:
    if not _RATIONAL.fullmatch(text.strip()):
        raise ValueError(f"not a rational: {text!r}")
    return Fraction(text.strip())


# -- the document --------------------------------------------------------------------


@dataclass
class ModuleDecl:
    name: str
    kind: str = "free"
    size: int = 1
    labels: tuple[str, ...] = ()
    actions: dict = field(default_factory=dict)  # Hopf generator name -> matrix rows
    line: int = 0


@dataclass
class TableDecl:
    name: str
    kind: str = "commutative"
    unit: Expr | None = None
    rows: dict = field(default_factory=dict)  # (a, b) -> Expr
    line: int = 0


@dataclass
class MapDecl:
    name: str
    source: str = ""
    target: str = ""
    degree: int = 0
    rows: dict = field(default_factory=dict)  # a -> Expr
    line: int = 0


@dataclass
class GradingDecl:
    name: str
    degrees: tuple[int, ...] = ()
    p: int = 0
    differential: str = ""
    line: int = 0


@dataclass
class ModelFile:
    kernel: str = "polynomial(1)"
    modules: dict = field(default_factory=dict)
    products: dict = field(default_factory=dict)
    brackets: dict = field(default_factory=dict)
    maps: dict = field(default_factory=dict)
    gradings: dict = field(default_factory=dict)
    tasks: list = field(default_factory=list)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ModelFile):
            return NotImplemented
        return format_model(self) == format_model(other)


def _split_list(value: str) -> tuple[str, ...]:
    return tuple(x.strip() for x in value.split(",") if x.strip())


def _matrix(value: str, cur: _Cursor) -> tuple[tuple[Fraction, ...], ...]:
    rows = []
    for r in value.split(";"):
        try:
            rows.append(tuple(parse_rational(x) for x in r.split()))
        except ValueError as e:
            raise cur.error(str(e)) from None
    return tuple(rows)


def parse_kernel(text: str) -> HopfKernel:
    m = re.fullmatch(r"\s*(polynomial|group)\(([\d,\s]+)\)\s*", text)
    if not m:
        raise ValueError(f"kernel must be polynomial(n) or group(m1,...), not {text!r}")
    nums = [int(x) for x in m.group(2).split(",") if x.strip()]
    if m.group(1) == "polynomial":
        if len(nums) != 1 or nums[0] < 1:
            raise ValueError("polynomial(n) needs one n >= 1")
        return HopfKernel.polynomial(nums[0])
    return HopfKernel.group(*nums)


def parse_model(text: str) -> ModelFile:
    model = ModelFile()
    section: object = None
    kind = ""
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip())
        body = line.strip()
        cur = _Cursor(body, lineno, indent)
        if body.startswith("["):
            m = re.fullmatch(r"\[\s*(\w+)(?:\s+(\S+))?\s*\]", body)
            if not m or m.group(1) not in SECTIONS:
                raise ModelError(f"unknown section header {body!r}; expected one of {', '.join(SECTIONS)}", lineno, indent + 1)
            kind, name = m.group(1), m.group(2)
            if (kind in NAMED) != bool(name):
                raise ModelError(f"section [{kind}] {'needs' if kind in NAMED else 'takes no'} a name", lineno, indent + 1)
            if name and not _IDENT.fullmatch(name):
                raise ModelError(f"bad name {name!r}", lineno, indent + 2 + len(kind))
            store = {"module": model.modules, "product": model.products, "bracket": model.brackets,
                     "map": model.maps, "grading": model.gradings}.get(kind)
            if store is not None and name in store:
                raise ModelError(f"duplicate section [{kind} {name}]", lineno, indent + 1)
            if kind == "hopf":
                section = model
            elif kind == "task":
                section = {}
                model.tasks.append(section)
            else:
                cls = {"module": ModuleDecl, "product": TableDecl, "bracket": TableDecl, "map": MapDecl, "grading": GradingDecl}[kind]
                section = cls(name, line=lineno)
                if kind == "bracket":
                    section.kind = "bracket"
                store[name] = section
            continue
        if section is None:
            raise ModelError("entry before any section header", lineno, indent + 1)
        if "->" in body:
            _parse_row(kind, section, body, cur)
        elif "=" in body:
            key, value = body.split("=", 1)
            _parse_entry(kind, section, key.strip(), value.strip(), _Cursor(body, lineno, indent))
        else:
            raise cur.error("expected 'key = value' or a table row 'a * b -> expr'")
    return model


def _parse_row(kind: str, section, body: str, cur: _Cursor) -> None:
    lhs, rhs = body.split("->", 1)
    expr = parse_expr(rhs, cur.line, cur.offset + len(lhs) + 2)
    if kind in ("product", "bracket"):
        parts = [p.strip() for p in lhs.split("*")]
        if len(parts) != 2 or not all(parts):
            raise cur.error("table rows read 'a * b -> expr'")
        key = (parts[0], parts[1])
    elif kind == "map":
        key = lhs.strip()
        if not expr.is_vector:
            raise cur.error("map rows take vector expressions '(coeff m)'")
    else:
        raise cur.error(f"section [{kind}] has no table rows")
    if key in section.rows:
        raise cur.error(f"duplicate row for {key}")
    section.rows[key] = expr


def _parse_entry(kind: str, section, key: str, value: str, cur: _Cursor) -> None:
    try:
        if kind == "hopf":
            if key != "kernel":
                raise cur.error(f"unknown [hopf] key {key!r}")
            parse_kernel(value)
            section.kernel = value.replace(" ", "")
        elif kind == "module":
            if key == "kind":
                if value not in ("free", "finite", "algebra"):
                    raise cur.error("module kind is free, finite or algebra")
                section.kind = value
            elif key == "size":
                section.size = int(value)
            elif key == "labels":
                section.labels = _split_list(value)
            elif key.startswith("act."):
                section.actions[key[4:]] = _matrix(value, cur)
            else:
                raise cur.error(f"unknown module key {key!r}")
        elif kind in ("product", "bracket"):
            if key == "kind" and kind == "product":
                if value not in ("commutative", "pseudo"):
                    raise cur.error("product kind is commutative or pseudo")
                section.kind = value
            elif key == "unit" and kind == "product":
                section.unit = parse_expr(value, cur.line, cur.offset + len(cur.text) - len(value) + 1)
            else:
                raise cur.error(f"unknown [{kind}] key {key!r}")
        elif kind == "map":
            if key in ("source", "target"):
                setattr(section, key, value)
            elif key == "degree":
                section.degree = int(value)
            else:
                raise cur.error(f"unknown map key {key!r}")
        elif kind == "grading":
            if key == "degrees":
                section.degrees = tuple(int(x) for x in _split_list(value))
            elif key == "p":
                section.p = int(value)
            elif key == "differential":
                section.differential = value
            else:
                raise cur.error(f"unknown grading key {key!r}")
        elif kind == "task":
            if key in section:
                raise cur.error(f"duplicate task key {key!r}")
            section[key] = value
    except ValueError as e:
        if isinstance(e, ModelError):
            raise
        raise cur.error(str(e)) from None


def _fmt_matrix(rows) -> str:
    return "; ".join(" ".join(str(x) for x in r) for r in rows)


def format_model(model: ModelFile) -> str:
    """Canonical text: fixed section order, sorted rows, merged terms."""
    out = ["[hopf]", f"kernel = {model.kernel}"]
    for name, m in model.modules.items():
        out += ["", f"[module {name}]", f"kind = {m.kind}", f"size = {m.size}"]
        if m.labels:
            out.append(f"labels = {', '.join(m.labels)}")
        for g in sorted(m.actions):
            out.append(f"act.{g} = {_fmt_matrix(m.actions[g])}")
        if name in model.gradings:
            gr = model.gradings[name]
            out += ["", f"[grading {name}]"]
            if gr.degrees:
                out.append(f"degrees = {', '.join(str(x) for x in gr.degrees)}")
            out.append(f"p = {gr.p}")
            if gr.differential:
                out.append(f"differential = {gr.differential}")
        for header, store in (("product", model.products), ("bracket", model.brackets)):
            if name in store:
                t = store[name]
                out += ["", f"[{header} {name}]"]
                if header == "product":
                    out.append(f"kind = {t.kind}")
                    if t.unit is not None:
                        out.append(f"unit = {t.unit}")
                for (a, b) in sorted(t.rows):
                    out.append(f"{a} * {b} -> {t.rows[(a, b)]}")
    orphans = [n for n in list(model.gradings) + list(model.products) + list(model.brackets) if n not in model.modules]
    if orphans:
        raise ModelError(f"section refers to undeclared module {orphans[0]!r}")
    for name, mp in model.maps.items():
        out += ["", f"[map {name}]", f"source = {mp.source}", f"target = {mp.target}", f"degree = {mp.degree}"]
        for a in sorted(mp.rows):
            out.append(f"{a} -> {mp.rows[a]}")
    for task in model.tasks:
        out += ["", "[task]"]
        out += [f"{k} = {task[k]}" for k in sorted(task)]
    return "\n".join(out) + "\n"
