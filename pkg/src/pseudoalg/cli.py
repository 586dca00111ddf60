"""Command line: ``pseudoalg VERB MODEL [flags]`` and ``pseudoalg replay REPORT``.

Exit status is 0 when every verdict passes, 1 when one fails, 2 for a bad
model file and 3 for an unsupported combination.
"""

from __future__ import annotations

import argparse
import random
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .constructions import (
    BaseAlgebra,
    InvalidBase,
    annihilation_report,
    build_annihilation_lie,
    build_annihilation_poisson,
    build_current_lie,
    build_current_poisson,
    check_classical,
)
from .enveloping import PTriple, build_envelope_truncated, check_envelope, check_ptriple, envelope_triple
from .graded_dg import (
    HomCandidate,
    SuiteFailure,
    build_cohomology,
    build_quotient,
    build_tensor,
    check_cohomology_invariance,
    check_homomorphism,
    check_subideal,
    check_tensor_compat,
)
from .hmodule import FiniteDimModule, FreeModule, HLinearMap, HModule, Unsupported
from .modelfile import Expr, ModelError, ModelFile, format_model, parse_kernel, parse_model
from .ore import OreData, verify_ore_theorem
from .polytensor import straighten
from .pseudo_core import PseudoStructure, run_suite
from .report import Report
from .scalars_hopf import HopfElement, HopfKernel, check_hopf_laws, coproduct_iter

VERBS = ("check", "extend-ore", "current", "annihilate", "tensor", "quotient", "cohomology", "envelope", "verify-triple")
EXIT_PASS, EXIT_FAIL, EXIT_MODEL, EXIT_UNSUPPORTED = 0, 1, 2, 3


# -- resolution ------------------------------------------------------------------


@dataclass
class Resolved:
    """Objects built from a :class:`ModelFile`, by declaration name."""

    model: ModelFile
    kernel: HopfKernel
    modules: dict = field(default_factory=dict)
    algebras: dict = field(default_factory=dict)
    structures: dict = field(default_factory=dict)
    maps: dict = field(default_factory=dict)


def _element_key(module: HModule, kernel: HopfKernel, text: str, where: str):
    labels = list(module.labels)
    mono, label = (text.rsplit("*", 1) if "*" in text else ("1", text))
    if label not in labels:
        raise ModelError(f"{where}: undefined generator {label!r} of {module.name}")
    i = labels.index(label)
    if isinstance(module, FreeModule):
        try:
            return (i, kernel.parse_key(mono))
        except ValueError as e:
            raise ModelError(f"{where}: {e}") from None
    if mono != "1":
        raise ModelError(f"{where}: finite module elements take no Hopf prefix ({text!r})")
    return i


def _vector(module: HModule, kernel: HopfKernel, expr: Expr, where: str) -> dict:
    if not expr.is_vector:
        raise ModelError(f"{where}: expected a vector, not a slotted expression")
    out: dict = {}
    for _s, elem, c in expr.terms:
        k = _element_key(module, kernel, elem, where)
        out[k] = out.get(k, Fraction(0)) + c
    return {k: c for k, c in out.items() if c}


def _tensor(module: HModule, kernel: HopfKernel, expr: Expr, where: str):
    raw = []
    for slots, elem, c in expr.terms:
        if slots is None or len(slots) != 2:
            raise ModelError(f"{where}: pseudo table entries need two Hopf slots '(h1,h2)@(c m)'")
        try:
            keys = [kernel.parse_key(s) for s in slots]
        except ValueError as e:
            raise ModelError(f"{where}: {e}") from None
        vec = {_element_key(module, kernel, elem, where): c}
        raw.append((keys, vec))
    return straighten(module, raw, n=2)


def _gen_key(module: HModule, kernel: HopfKernel, label: str, where: str):
    k = _element_key(module, kernel, label, where)
    if isinstance(module, FreeModule) and k[1] != kernel.one():
        raise ModelError(f"{where}: table rows are indexed by generators, not {label!r}")
    return k


def resolve(model: ModelFile) -> Resolved:
    try:
        kernel = parse_kernel(model.kernel)
    except ValueError as e:
        raise ModelError(str(e)) from None
    R = Resolved(model, kernel)
    for name, decl in model.modules.items():
        labels = decl.labels or tuple(f"e{i + 1}" for i in range(decl.size))
        if len(labels) != decl.size:
            raise ModelError(f"module {name}: {len(labels)} labels for size {decl.size}", decl.line)
        gr = model.gradings.get(name)
        degrees = gr.degrees if gr and gr.degrees else (0,) * decl.size
        if len(degrees) != decl.size:
            raise ModelError(f"grading {name}: {len(degrees)} degrees for size {decl.size}", gr.line)
        if decl.kind == "free":
            R.modules[name] = FreeModule(kernel, decl.size, labels, degrees, name)
        elif decl.kind == "finite":
            gens = [kernel.format_key(g) for g in kernel.generator_keys()]
            unknown = set(decl.actions) - set(gens)
            if unknown:
                raise ModelError(f"module {name}: no Hopf generator {sorted(unknown)[0]!r}", decl.line)
            base = FiniteDimModule.trivial(kernel, decl.size)
            mats = tuple(decl.actions.get(g, base.matrices[i]) for i, g in enumerate(gens))
            try:
                R.modules[name] = FiniteDimModule(kernel, decl.size, mats, labels, degrees, name)
            except ValueError as e:
                raise ModelError(f"module {name}: {e}", decl.line) from None
        else:
            R.algebras[name] = _algebra(model, name, decl, labels, degrees)
    for name, mp in model.maps.items():
        if mp.source in R.algebras and mp.target in R.algebras:
            continue
        src, tgt = R.modules.get(mp.source), R.modules.get(mp.target)
        if src is None or tgt is None:
            missing = mp.source if src is None else mp.target
            raise ModelError(f"map {name}: undefined module {missing!r}", mp.line)
        imgs = {}
        for a, expr in mp.rows.items():
            imgs[_gen_key(src, kernel, a, f"map {name}")] = _vector(tgt, kernel, expr, f"map {name}")
        R.maps[name] = HLinearMap(src, tgt, imgs, mp.degree, name)
    for name, module in R.modules.items():
        R.structures[name] = _structure(R, name, module)
    return R


def _algebra(model: ModelFile, name: str, decl, labels, degrees) -> BaseAlgebra:
    idx = {lab: i for i, lab in enumerate(labels)}

    def vec(expr: Expr, where: str) -> dict:
        if not expr.is_vector:
            raise ModelError(f"{where}: algebra tables take vectors")
        out: dict = {}
        for _s, elem, c in expr.terms:
            if elem not in idx:
                raise ModelError(f"{where}: undefined generator {elem!r} of {name}")
            out[idx[elem]] = out.get(idx[elem], 0) + c
        return out

    def table(decl_t, where: str):
        if decl_t is None:
            return None
        out = {}
        for (a, b), expr in decl_t.rows.items():
            for x in (a, b):
                if x not in idx:
                    raise ModelError(f"{where}: undefined generator {x!r} of {name}", decl_t.line)
            out[(idx[a], idx[b])] = vec(expr, where)
        return out

    prod = model.products.get(name)
    gr = model.gradings.get(name)
    unit = vec(prod.unit, f"product {name}") if prod and prod.unit is not None else None
    differential = None
    if gr and gr.differential:
        mp = model.maps.get(gr.differential)
        if mp is None:
            raise ModelError(f"grading {name}: undefined map {gr.differential!r}", gr.line)
        differential = {idx[a]: vec(e, f"map {mp.name}") for a, e in mp.rows.items()}
    return BaseAlgebra(
        len(labels), table(prod, f"product {name}"), table(model.brackets.get(name), f"bracket {name}"),
        tuple(labels), unit, tuple(degrees), name, differential, gr is not None, gr.p if gr else 0,
    )


def _structure(R: Resolved, name: str, module: HModule) -> PseudoStructure:
    model, kernel = R.model, R.kernel
    prod = model.products.get(name)
    br = model.brackets.get(name)
    gr = model.gradings.get(name)
    product = None
    bracket = None
    unit = None
    if prod is not None:
        where = f"product {name}"
        if prod.kind == "pseudo":
            bracket = {}
            for (a, b), e in prod.rows.items():
                bracket[(_gen_key(module, kernel, a, where), _gen_key(module, kernel, b, where))] = _tensor(module, kernel, e, where)
        else:
            product = {}
            for (a, b), e in prod.rows.items():
                product[(_gen_key(module, kernel, a, where), _gen_key(module, kernel, b, where))] = _vector(module, kernel, e, where)
        if prod.unit is not None:
            unit = _vector(module, kernel, prod.unit, where)
    if br is not None:
        if bracket is not None:
            raise ModelError(f"structure {name} has both a pseudoproduct and a bracket", br.line)
        where = f"bracket {name}"
        bracket = {}
        for (a, b), e in br.rows.items():
            bracket[(_gen_key(module, kernel, a, where), _gen_key(module, kernel, b, where))] = _tensor(module, kernel, e, where)
    differential = None
    if gr and gr.differential:
        differential = R.maps.get(gr.differential)
        if differential is None:
            raise ModelError(f"grading {name}: undefined map {gr.differential!r}", gr.line)
        if differential.source is not module or differential.target is not module:
            raise ModelError(f"grading {name}: differential {gr.differential!r} is not an endomorphism of {name}", gr.line)
    return PseudoStructure(module, product, bracket, gr.p if gr else 0, differential, gr is not None, name, unit)


# -- commands ----------------------------------------------------------------------------


@dataclass
class Flags:
    report: str = "text"
    degree_bound: int | None = None
    word_bound: int | None = None
    seed: int | None = None


def _task_int(task: dict, key: str, flag: int | None, default: int) -> int:
    if flag is not None:
        return flag
    return int(task.get(key, default))


def _pick(R: Resolved, task: dict, key: str, kinds=("structure",)):
    name = task.get(key)
    if name is None:
        pool = list(R.structures) if "structure" in kinds else list(R.algebras)
        if len(pool) != 1:
            raise ModelError(f"task needs '{key} = NAME'")
        name = pool[0]
    if "structure" in kinds and name in R.structures:
        return R.structures[name]
    if "algebra" in kinds and name in R.algebras:
        return R.algebras[name]
    raise ModelError(f"task: undefined {'/'.join(kinds)} {name!r}")


def _map(R: Resolved, task: dict, key: str) -> HLinearMap:
    name = task.get(key)
    if name not in R.maps:
        raise ModelError(f"task: undefined map {name!r} for {key!r}")
    return R.maps[name]


def _vectors(R: Resolved, module: HModule, text: str) -> list[dict]:
    from .modelfile import parse_expr

    return [_vector(module, R.kernel, parse_expr(part), "task") for part in text.split(";") if part.strip()]


def _hopf_check(kernel: HopfKernel, degree: int, seed: int | None) -> Report:
    rep = check_hopf_laws(kernel, degree)
    rng = random.Random(seed if seed is not None else 0)
    keys = kernel.basis(None if kernel.is_group else min(degree, 2))
    rep.conventions["seed"] = str(seed if seed is not None else 0)
    for t in range(5):
        terms = {k: Fraction(rng.randint(-3, 3)) for k in rng.sample(keys, min(3, len(keys)))}
        a = HopfElement(kernel, terms)
        b = HopfElement(kernel, {k: Fraction(rng.randint(-3, 3)) for k in rng.sample(keys, min(2, len(keys)))})
        lhs = coproduct_iter(a * b, 1)
        da, db = coproduct_iter(a, 1), coproduct_iter(b, 1)
        rhs: dict = {}
        for (a1, a2), c in da.items():
            for (b1, b2), d in db.items():
                k = (kernel.mul_key(a1, b1), kernel.mul_key(a2, b2))
                rhs[k] = rhs.get(k, 0) + c * d
        rhs = {k: v for k, v in rhs.items() if v}
        rep.add("hopf-bialgebra", (f"random {t}", str(a), str(b)), lhs == rhs, f"D(ab) = {lhs}, D(a)D(b) = {rhs}")
    return rep


def run_task(verb: str, R: Resolved, task: dict, flags: Flags) -> Report:
    N = _task_int(task, "degree-bound", flags.degree_bound, 3)
    L = _task_int(task, "word-bound", flags.word_bound, 3)
    if verb == "check":
        if not R.structures and not R.algebras:
            return _hopf_check(R.kernel, N + 1, flags.seed if flags.seed is not None else (int(task["seed"]) if "seed" in task else None))
        S = _pick(R, task, "structure", ("structure", "algebra"))
        return check_classical(S) if isinstance(S, BaseAlgebra) else run_suite(S)
    if verb == "extend-ore":
        S = _pick(R, task, "structure")
        return verify_ore_theorem(OreData(S, _map(R, task, "alpha"), _map(R, task, "delta")), N)
    if verb == "current":
        P = _pick(R, task, "base", ("algebra",))
        try:
            S = build_current_poisson(P, R.kernel) if P.product is not None else build_current_lie(P, R.kernel)
        except InvalidBase as e:
            return e.report
        rep = run_suite(S)
        rep.title = f"current over {P.name}: " + rep.title
        return rep
    if verb == "annihilate":
        S = _pick(R, task, "structure", ("structure", "algebra"))
        if isinstance(S, BaseAlgebra):
            S = build_current_poisson(S, R.kernel) if S.product is not None else build_current_lie(S, R.kernel)
        if not R.kernel.is_group:
            raise Unsupported("annihilation algebras need a finite group kernel")
        A = build_annihilation_poisson(S) if S.product is not None else build_annihilation_lie(S)
        return annihilation_report(A)
    if verb == "tensor":
        SA, SB = _pick(R, task, "left"), _pick(R, task, "right")
        rep = check_tensor_compat(SA, SB)
        try:
            T, _ = build_tensor(SA, SB)
        except SuiteFailure as e:
            return e.report
        return rep.extend(run_suite(T), prefix="tensor:")
    if verb == "quotient":
        S = _pick(R, task, "structure")
        span = _vectors(R, S.module, task.get("ideal", ""))
        rep = check_subideal(S, span, "ideal")
        if not rep.ok:
            return rep
        Q, pi = build_quotient(S, span, validate=False)
        rep.extend(run_suite(Q), prefix="quotient:")
        rep.extend(check_homomorphism(HomCandidate(S, Q, pi)), prefix="projection:")
        return rep
    if verb == "cohomology":
        S = _pick(R, task, "structure")
        C = build_cohomology(S)
        rep = run_suite(C.structure)
        rep.conventions["cohomology dimension"] = str(C.quotient.dim)
        if "iso" in task:
            T = _pick(R, task, "other")
            rep.extend(check_cohomology_invariance(S, T, _map(R, task, "iso")), prefix="invariance:")
        return rep
    if verb == "envelope":
        S = _pick(R, task, "structure")
        env = build_envelope_truncated(S, L)
        rep = check_envelope(env)
        return rep.extend(check_ptriple(envelope_triple(env)))
    if verb == "verify-triple":
        S = _pick(R, task, "structure")
        if task.get("target", "envelope") == "envelope":
            return check_ptriple(envelope_triple(build_envelope_truncated(S, L)))
        B = _pick(R, task, "target")
        return check_ptriple(PTriple(S, B, _map(R, task, "f"), _map(R, task, "g"), f"({B.name}, f, g)"))
    raise ModelError(f"unknown verb {verb!r}")


def run_command(verb: str, model: ModelFile, flags: Flags | None = None) -> tuple[Report, int]:
    """Run every task of ``model`` that names ``verb`` (or no verb); exit status from the report."""
    flags = flags or Flags()
    if verb not in VERBS:
        raise ModelError(f"unknown verb {verb!r}; expected one of {', '.join(VERBS)}")
    R = resolve(model)
    tasks = [t for t in model.tasks if t.get("verb", verb) == verb] or ([{}] if not model.tasks else [])
    if not tasks:
        raise ModelError(f"no [task] for verb {verb!r}")
    if len(tasks) == 1:
        rep = run_task(verb, R, tasks[0], flags)
    else:
        rep = Report(title=f"{verb}: {len(tasks)} tasks")
        for i, t in enumerate(tasks):
            rep.extend(run_task(verb, R, t, flags), prefix=f"task{i + 1}:")
    return rep, rep.exit_status


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pseudoalg", description="Exact checks for Poisson H-pseudoalgebras.")
    p.add_argument("verb", choices=VERBS + ("replay", "format"), help="command, or 'replay' for a machine report, 'format' to print a model canonically")
    p.add_argument("file", help="model file (or machine report for 'replay'); '-' reads standard input")
    p.add_argument("--report", choices=("text", "machine"), default="text")
    p.add_argument("--output", help="also write the machine report to this file")
    p.add_argument("--degree-bound", type=int, default=None, help="x-degree bound / Hopf degree bound (default 3)")
    p.add_argument("--word-bound", type=int, default=None, help="envelope word length bound (default 3)")
    p.add_argument("--seed", type=int, default=None, help="seed for sampled checks")
    return p


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def main(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = _parser().parse_args(argv)
    try:
        text = _read(args.file)
    except OSError as e:
        print(f"pseudoalg: {e}", file=stderr)
        return EXIT_MODEL
    try:
        if args.verb == "replay":
            rep = Report.from_machine(text)
            stdout.write(rep.render_text())
            return rep.exit_status
        model = parse_model(text)
        if args.verb == "format":
            stdout.write(format_model(model))
            return EXIT_PASS
        flags = Flags(args.report, args.degree_bound, args.word_bound, args.seed)
        rep, status = run_command(args.verb, model, flags)
    except ModelError as e:
        print(f"{args.file}:{e}" if e.line else f"{args.file}: {e}", file=stderr)
        return EXIT_MODEL
    except Unsupported as e:
        print(f"pseudoalg: unsupported: {e}", file=stderr)
        return EXIT_UNSUPPORTED
    except ValueError as e:
        print(f"pseudoalg: {e}", file=stderr)
        return EXIT_MODEL
    stdout.write(rep.render_machine() if args.report == "machine" else rep.render_text())
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(rep.render_machine())
    return status


if __name__ == "__main__":
    sys.exit(main())
