from __future__ import annotations

import io
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pseudoalg.cli import EXIT_FAIL, EXIT_MODEL, EXIT_PASS, EXIT_UNSUPPORTED, main
from pseudoalg.modelfile import ModelError, format_model, parse_model
from pseudoalg.report import MACHINE_HEADER, Report

CORPUS = sorted((Path(__file__).parent / "corpus").glob("*.model"))
EXPECTED_EXIT = {"pass": EXIT_PASS, "fail": EXIT_FAIL, "unsupported": EXIT_UNSUPPORTED, "model-error": EXIT_MODEL}


def run(*argv: str) -> tuple[int, str, str]:
    out, err = io.StringIO(), io.StringIO()
    status = main(list(argv), out, err)
    return status, out.getvalue(), err.getvalue()


def expected(path: Path) -> int:
    return EXPECTED_EXIT[parse_model(path.read_text()).tasks[0]["expect"]]


@pytest.mark.parametrize("path", CORPUS, ids=lambda p: p.stem)
def test_corpus_round_trip(path):
    model = parse_model(path.read_text())
    text = format_model(model)
    assert parse_model(text) == model
    assert format_model(parse_model(text)) == text


@pytest.mark.parametrize("path", CORPUS, ids=lambda p: p.stem)
def test_corpus_exit_codes_and_replay(path, tmp_path):
    verb = parse_model(path.read_text()).tasks[0]["verb"]
    report = tmp_path / "report.txt"
    status, text, _ = run(verb, str(path), "--output", str(report))
    assert status == expected(path)
    if status == EXIT_UNSUPPORTED:
        assert not report.exists()  # refusals produce no verdicts to replay
        return
    machine = report.read_text()
    assert machine.startswith(MACHINE_HEADER)
    replay_status, replayed, _ = run("replay", str(report))
    assert replayed == text and replay_status == status


def test_machine_report_on_stdout():
    path = CORPUS[0]
    status, machine, _ = run("check", str(path), "--report", "machine")
    assert machine.startswith(MACHINE_HEADER)
    assert Report.from_machine(machine).exit_status == status == EXIT_PASS


def test_format_verb(tmp_path):
    path = CORPUS[2]
    status, text, _ = run("format", str(path))
    assert status == EXIT_PASS and text == format_model(parse_model(path.read_text()))


MINIMAL = """[hopf]
kernel = polynomial(1)

[module A]
kind = free
size = 1
labels = e

[bracket A]
e * e -> (1,d1)@(1 {label})

[task]
verb = check
structure = A
"""


def test_semantic_error_names_the_symbol(tmp_path):
    path = tmp_path / "bad.model"
    path.write_text(MINIMAL.format(label="q"))
    status, _, err = run("check", str(path))
    assert status == EXIT_MODEL
    assert "'q'" in err


def test_syntax_error_has_a_position(tmp_path):
    path = tmp_path / "bad.model"
    path.write_text(MINIMAL.format(label="e").replace("(1,d1)@", "(1,d1@"))
    status, _, err = run("check", str(path))
    assert status == EXIT_MODEL
    with pytest.raises(ModelError) as info:
        parse_model(path.read_text())
    assert info.value.line == 10 and f":{info.value.line}:" in err


def test_missing_file():
    status, _, err = run("check", "/nonexistent/file.model")
    assert status == EXIT_MODEL and err


def test_unsupported_exit(tmp_path):
    path = tmp_path / "u.model"
    path.write_text(MINIMAL.format(label="e").replace("verb = check", "verb = annihilate"))
    assert run("annihilate", str(path))[0] == EXIT_UNSUPPORTED


# -- properties ---------------------------------------------------------------

labels = st.lists(st.sampled_from(["a", "b", "c", "e", "f", "x1", "y2"]), min_size=1, max_size=4, unique=True)
slots = st.sampled_from(["1", "d1", "d1^2", "d1^3"])
coefs = st.fractions(min_value=-5, max_value=5, max_denominator=4).filter(bool)


@st.composite
def models(draw):
    names = draw(labels)
    rows = []
    for x in names:
        for y in names:
            if draw(st.booleans()):
                terms = draw(st.lists(st.tuples(slots, slots, coefs, st.sampled_from(names)), min_size=1, max_size=3))
                rhs = " + ".join(f"({s},{t})@({c} {z})" for s, t, c, z in terms)
                rows.append(f"{x} * {y} -> {rhs}")
    return "\n".join([
        "[hopf]", "kernel = polynomial(1)", "",
        "[module A]", "kind = free", f"size = {len(names)}", f"labels = {', '.join(names)}", "",
        "[bracket A]", *rows, "",
        "[task]", "verb = check", "structure = A", "",
    ])


@given(models())
@settings(max_examples=40)
def test_generated_models_round_trip(text):
    model = parse_model(text)
    canonical = format_model(model)
    again = parse_model(canonical)
    assert again.brackets == model.brackets and again.tasks == model.tasks
    assert format_model(again) == canonical
