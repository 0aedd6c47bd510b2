"""Survey truncated cohomology slices across a small family of algebras.

Prints one table row per (algebra, degree, bound): slice dimensions of
cocycles, coboundaries and cohomology, plus whether the coboundary
dimension stabilized under widening.  Exact arithmetic throughout, so
rows are reproducible.

    python3 scripts/cohomology_survey.py
    python3 scripts/cohomology_survey.py --max-n 3 --deg 2 --margin 2
"""

import argparse
import time
from dataclasses import dataclass, field

from pseudo.cfmodule import BimoduleStructure
from pseudo.classical import current_algebra, matrix_algebra
from pseudo.cohomology import TruncationWindow, cohomology_dimensions
from pseudo.conformal import ConformalAlgebra, free_rank_one
from pseudo.polyring import Poly


@dataclass(frozen=True)
class SurveyConfig:
    max_n: int = 2
    degree_bound: int = 2
    margin: int = 1
    max_rounds: int = 4
    names: tuple[str, ...] = ("unit-current", "zero-product", "mat2-current")


def build_algebra(name: str) -> ConformalAlgebra:
    if name == "unit-current":
        return free_rank_one()
    if name == "zero-product":
        return free_rank_one(Poly.zero(("del", "lam")))
    if name == "mat2-current":
        return current_algebra(matrix_algebra(2))
    raise ValueError(f"unknown algebra {name!r}")


def run(config: SurveyConfig) -> None:
    header = f"{'algebra':<14} {'n':>2} {'deg':>4} {'dim Z':>6} {'dim B':>6} {'dim H':>6}  stabilized  seconds"
    print(header)
    print("-" * len(header))
    window = TruncationWindow(config.degree_bound, config.margin)
    for name in config.names:
        algebra = build_algebra(name)
        module = BimoduleStructure.regular(algebra)
        for n in range(config.max_n + 1):
            started = time.perf_counter()
            report = cohomology_dimensions(
                algebra, module, n, window, max_rounds=config.max_rounds
            )
            elapsed = time.perf_counter() - started
            print(
                f"{name:<14} {n:>2} {report.degree_bound:>4} "
                f"{report.dim_cocycles:>6} {report.dim_coboundaries:>6} "
                f"{report.dim_cohomology:>6}  "
                f"{'yes' if report.stabilized else 'NO ':<10}  {elapsed:7.2f}"
            )


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--max-n", type=int, default=2, help="highest degree n")
    parser.add_argument("--deg", type=int, default=2, help="truncation degree bound")
    parser.add_argument("--margin", type=int, default=1, help="stabilization step")
    parser.add_argument("--max-rounds", type=int, default=4)
    args = parser.parse_args()
    run(
        SurveyConfig(
            max_n=args.max_n,
            degree_bound=args.deg,
            margin=args.margin,
            max_rounds=args.max_rounds,
        )
    )


if __name__ == "__main__":
    main()
