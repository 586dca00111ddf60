"""Run every model in the corpus through the command line and compare exit codes with the recorded expectation.

    python3 scripts/run_corpus.py [DIR]
"""

from __future__ import annotations

import io
import sys
from pathlib import Path
from time import perf_counter

from pseudoalg.cli import main as cli_main
from pseudoalg.modelfile import parse_model

EXIT = {"pass": 0, "fail": 1, "model-error": 2, "unsupported": 3}


def main() -> int:
    root = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "tests" / "corpus"
    mismatches = 0
    for path in sorted(root.glob("*.model")):
        task = parse_model(path.read_text()).tasks[0]
        start = perf_counter()
        status = cli_main([task["verb"], str(path)], io.StringIO(), io.StringIO())
        want = EXIT[task.get("expect", "pass")]
        mismatches += status != want
        mark = "ok" if status == want else f"MISMATCH (expected {want})"
        print(f"{path.name:28} {task['verb']:14} exit {status}  {perf_counter() - start:5.2f} s  {mark}")
    return 1 if mismatches else 0


if __name__ == "__main__":
    sys.exit(main())
