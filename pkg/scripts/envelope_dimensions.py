"""Truncated envelope dimensions next to the classical word-count oracle.

    python3 scripts/envelope_dimensions.py [--max-bound L]
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from time import perf_counter

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from oracles import classical_envelope_dimension  # noqa: E402
from pseudoalg.catalog import dg_affine  # noqa: E402
from pseudoalg.constructions import BaseAlgebra, build_current_poisson, unital_affine_poisson  # noqa: E402
from pseudoalg.enveloping import build_envelope_truncated, check_envelope  # noqa: E402
from pseudoalg.scalars_hopf import HopfKernel  # noqa: E402

BASES = [dg_affine(), unital_affine_poisson(), BaseAlgebra(1, {}, {}, ("a",), name="zero")]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-bound", type=int, default=3)
    args = ap.parse_args()
    kernel = HopfKernel.group(2)
    print(f"{'base':8} {'L':>2} {'dim':>5} {'oracle':>6} {'checks':>7} {'seconds':>8}")
    for base in BASES:
        unit = next(iter(base.unit)) if base.unit else None
        for bound in range(2, args.max_bound + 1):
            start = perf_counter()
            env = build_envelope_truncated(build_current_poisson(base, kernel), bound)
            want = kernel.order() * classical_envelope_dimension(base.dim, base.product, base.bracket, unit, base.degrees, bound)
            ok = check_envelope(env, want).ok
            print(f"{base.name:8} {bound:>2} {env.dim:>5} {want:>6} {'pass' if ok else 'FAIL':>7} {perf_counter() - start:>8.2f}")


if __name__ == "__main__":
    main()
