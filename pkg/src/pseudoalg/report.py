"""Verdict reports shared by every checker, with text and machine renderings."""

from __future__ import annotations

from dataclasses import dataclass, field

VERSION = "0.1.0"
MACHINE_HEADER = "pseudoalg-report v1"

# Law identifier -> human anchor used in both renderings.
ANCHORS: dict[str, str] = {
    "hopf-bialgebra": "coproduct is an algebra map",
    "hopf-counit": "counit is multiplicative and splits the coproduct",
    "hopf-antipode": "antipode convolution identity",
    "hopf-cocommutative": "coproduct is symmetric",
    "hopf-involution": "antipode squares to the identity",
    "hlinear": "map commutes with the H-action",
    "assoc": "product associativity",
    "commutative": "graded commutativity of the product",
    "hdifferential": "h(ab) = (h1 a)(h2 b)",
    "hbilinear": "bracket table is H-bilinear",
    "skew": "skew-symmetry",
    "jacobi": "Jacobi identity",
    "leibniz-left": "left Leibniz rule",
    "leibniz-right": "right Leibniz rule",
    "grading": "product, bracket and differential respect degrees",
    "d-square": "differential squares to zero",
    "d-hlinear": "differential is H-linear",
    "d-product": "differential is a graded derivation of the product",
    "d-bracket": "differential is a graded derivation of the bracket",
    "deriv-product": "map is a derivation of the product",
    "deriv-bracket": "map is a derivation of the bracket",
    "alpha-deriv-bracket": "map is an alpha-twisted derivation of the bracket",
    "ore-equivalence": "extension suite passes iff both derivation checks pass",
    "classical-antisymmetry": "classical bracket antisymmetry",
    "classical-jacobi": "classical Jacobi identity",
    "classical-leibniz": "classical Leibniz rule",
    "classical-assoc": "classical associativity",
    "classical-commutative": "classical commutativity",
    "dual-pairing": "dual product pairs with the coproduct",
    "tensor-compat-1": "tensor compatibility condition 1",
    "tensor-compat-2": "tensor compatibility condition 2",
    "tensor-compat-3": "tensor compatibility condition 3",
    "tensor-compat-4": "tensor compatibility condition 4",
    "tensor-hypothesis": "tensor factors are graded commutative with degree-0 brackets",
    "closure-d": "subspace is stable under d",
    "closure-product": "subspace absorbs products",
    "closure-bracket": "subspace absorbs brackets",
    "closure-hmodule": "subspace is an H-submodule",
    "hom-product": "map preserves products",
    "hom-bracket": "map preserves brackets",
    "hom-d": "map commutes with differentials",
    "hom-degree": "map preserves degrees",
    "bijective": "map is bijective",
    "P1": "M-product relation: f is multiplicative into the pseudoproduct",
    "P2": "H-bracket relation: g preserves the commutator bracket",
    "P3": "M-bracket relation: f of a bracket is the mixed commutator of g and f",
    "P4": "H-product relation: g of a product is the mixed sum of f and g",
    "P-d": "f and g commute with differentials",
    "relation-consistent": "truncated relations keep the unit and M nonzero and agree across length levels",
    "relation-preserved": "differential maps relations into relations",
    "D-square": "envelope differential squares to zero",
    "phi-well-defined": "induced map kills every relation",
    "phi-generators": "induced map restricts to f and g",
    "phi-d": "induced map commutes with differentials",
    "dimension-oracle": "quotient dimension agrees with an independent count",
}


def _escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace("\t", "\\t").replace("\n", "\\n")


def _unescape(text: str) -> str:
    out = []
    it = iter(text)
    for ch in it:
        if ch == "\\":
            nxt = next(it, "")
            out.append({"t": "\t", "n": "\n", "\\": "\\"}.get(nxt, nxt))
        else:
            out.append(ch)
    return "".join(out)


@dataclass(frozen=True)
class Verdict:
    law: str
    anchor: str
    instance: tuple[str, ...]
    passed: bool
    witness: str = ""


@dataclass
class Report:
    title: str = ""
    conventions: dict[str, str] = field(default_factory=dict)
    verdicts: list[Verdict] = field(default_factory=list)
    version: str = VERSION

    def add(self, law: str, instance: tuple | list, passed: bool, witness: str = "", anchor: str | None = None) -> None:
        inst = tuple(str(x) for x in instance)
        self.verdicts.append(Verdict(law, anchor or ANCHORS.get(law, law), inst, bool(passed), "" if passed else witness))

    def extend(self, other: Report, prefix: str = "") -> Report:
        for k, v in other.conventions.items():
            self.conventions.setdefault(k, v)
        for v in other.verdicts:
            law = prefix + v.law if prefix else v.law
            self.verdicts.append(Verdict(law, v.anchor, v.instance, v.passed, v.witness))
        return self

    @property
    def ok(self) -> bool:
        return all(v.passed for v in self.verdicts)

    @property
    def exit_status(self) -> int:
        return 0 if self.ok else 1

    def laws(self) -> list[str]:
        seen: dict[str, None] = {}
        for v in self.verdicts:
            seen.setdefault(v.law, None)
        return list(seen)

    def failures(self, law: str | None = None) -> list[Verdict]:
        return [v for v in self.verdicts if not v.passed and (law is None or v.law == law)]

    def failed_laws(self) -> list[str]:
        return [law for law in self.laws() if self.failures(law)]

    def passed(self, law: str) -> bool:
        """True when the law was checked at least once and never failed."""
        hits = [v for v in self.verdicts if v.law == law]
        return bool(hits) and all(v.passed for v in hits)

    def has(self, law: str) -> bool:
        return any(v.law == law for v in self.verdicts)

    # -- renderings --------------------------------------------------------

    def render_text(self) -> str:
        lines = [f"pseudoalg {self.version} report: {self.title}"]
        if self.conventions:
            lines.append("conventions:")
            lines.extend(f"  {k}: {v}" for k, v in self.conventions.items())
        lines.append("laws:")
        for law in self.laws():
            hits = [v for v in self.verdicts if v.law == law]
            bad = [v for v in hits if not v.passed]
            tag = "FAIL" if bad else "PASS"
            lines.append(f"  [{tag}] {law} ({hits[0].anchor}): {len(hits) - len(bad)}/{len(hits)}")
            for v in bad:
                lines.append(f"      at ({', '.join(v.instance)}): {v.witness}")
        lines.append("verdict: " + ("PASS" if self.ok else "FAIL"))
        return "\n".join(lines) + "\n"

    def render_machine(self) -> str:
        lines = [MACHINE_HEADER, f"version\t{_escape(self.version)}", f"title\t{_escape(self.title)}"]
        for k, v in self.conventions.items():
            lines.append(f"convention\t{_escape(k)}\t{_escape(v)}")
        for v in self.verdicts:
            inst = "\t".join(_escape(x) for x in v.instance)
            lines.append(
                f"verdict\t{_escape(v.law)}\t{_escape(v.anchor)}\t{'pass' if v.passed else 'fail'}"
                f"\t{_escape(v.witness)}\t{len(v.instance)}" + (f"\t{inst}" if v.instance else "")
            )
        lines.append("end")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_machine(cls, text: str) -> Report:
        lines = text.splitlines()
        if not lines or lines[0] != MACHINE_HEADER:
            raise ValueError(f"missing header {MACHINE_HEADER!r}")
        rep = cls()
        for lineno, line in enumerate(lines[1:], start=2):
            fields = line.split("\t")
            tag = fields[0]
            if tag == "end":
                return rep
            if tag == "version":
                rep.version = _unescape(fields[1])
            elif tag == "title":
                rep.title = _unescape(fields[1])
            elif tag == "convention":
                rep.conventions[_unescape(fields[1])] = _unescape(fields[2])
            elif tag == "verdict":
                law, anchor, flag, witness, n = fields[1:6]
                inst = tuple(_unescape(x) for x in fields[6 : 6 + int(n)])
                rep.verdicts.append(Verdict(_unescape(law), _unescape(anchor), inst, flag == "pass", _unescape(witness)))
            else:
                raise ValueError(f"line {lineno}: unknown record {tag!r}")
        raise ValueError("machine report is missing its end record")
