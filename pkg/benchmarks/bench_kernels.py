"""Compare the njit and pure-numpy solver kernels on real workloads.

Three workloads:
  * candidate sweeps: 3-coloring complete graphs K4..K6 (12, 15, 18 free
    atoms -> 4096 to 262144 interpretations, none of which survive, so
    the timing isolates the vectorized model filter);
  * a satisfiable anchor: 3-coloring the 4-cycle, whose 18 proper
    colorings are checked against the closed form 2^n + 2*(-1)^n and
    exercise the per-model stability sweep;
  * the full bounded-equivalence sweep for the bundled maximize-clique
    problem (64 fact sets, each a full enumeration).

Keep satisfiable instances small here: every surviving model pays a
stability sweep over the submasks of its atoms, so sprawling instances
with many models measure that blowup rather than the kernels.

Run:  python benchmarks/bench_kernels.py [--repeat 3] [--sizes 4,5,6]

The same sweep honors the ASPEN_KERNEL environment variable everywhere
else in the package; here both backends run explicitly so one invocation
prints the comparison. The first numba call pays JIT compilation; a
warmup call keeps that out of the timings.
"""

from __future__ import annotations

import argparse
import time

from aspen.asp.parse import parse_program
from aspen.pipeline import bundled_problem
from aspen.solver import HAS_NUMBA, check_uniform_equivalence, solve

COLORING_RULES = """\
col(X,red) | col(X,green) | col(X,blue) :- node(X).
:- link(X,Y), col(X,C), col(Y,C).
"""


def complete_graph(n: int) -> str:
    lines = [f"node({i})." for i in range(1, n + 1)]
    lines += [
        f"link({i},{j})."
        for i in range(1, n + 1)
        for j in range(i + 1, n + 1)
    ]
    return "\n".join(lines)


def cycle_graph(n: int) -> str:
    lines = [f"node({i})." for i in range(1, n + 1)]
    lines += [f"link({i},{i % n + 1})." for i in range(1, n + 1)]
    return "\n".join(lines)


def time_best(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_coloring(facts: str, backend: str, repeat: int, atom_bound: int):
    program = parse_program(COLORING_RULES + facts)
    result = {}

    def run():
        result["value"] = solve(program, atom_bound=atom_bound, backend=backend)

    best = time_best(run, repeat)
    return best, len(result["value"])


def bench_equivalence(backend: str, repeat: int):
    problem = bundled_problem("maximize-clique")
    compiled = problem.gold  # equivalence is reflexive; this sweeps all 64 sets
    result = {}

    def run():
        result["value"] = check_uniform_equivalence(
            compiled, compiled, problem.signature, problem.universe,
            backend=backend,
        )

    best = time_best(run, repeat)
    return best, result["value"].checked


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3, help="best-of repetitions")
    ap.add_argument("--sizes", default="4,5,6",
                    help="complete-graph sizes for the coloring workload")
    # The desk-scale default (22) counts fact atoms too; complete graphs
    # carry many link facts, so the benchmark raises the cap. The sweep
    # itself only ranges over the free (non-fact) atoms.
    ap.add_argument("--atom-bound", type=int, default=60)
    args = ap.parse_args()
    sizes = [int(s) for s in args.sizes.split(",") if s.strip()]

    backends = ["numpy"] + (["numba"] if HAS_NUMBA else [])
    if HAS_NUMBA:  # JIT warmup outside the timings
        bench_coloring(complete_graph(3), "numba", 1, args.atom_bound)
    else:
        print("numba not importable; benchmarking the numpy backend alone")

    rows = []
    for n in sizes:
        for backend in backends:
            best, models = bench_coloring(
                complete_graph(n), backend, args.repeat, args.atom_bound)
            if models != 0:  # K4+ has no proper 3-coloring
                raise SystemExit(f"K{n}/{backend}: {models} models, expected 0")
            rows.append((f"coloring K{n}", backend, best, "sweep only"))

    expected = 2**4 + 2 * (-1) ** 4  # proper 3-colorings of the 4-cycle
    for backend in backends:
        best, models = bench_coloring(
            cycle_graph(4), backend, args.repeat, args.atom_bound)
        if models != expected:
            raise SystemExit(f"C4/{backend}: {models} models, expected {expected}")
        rows.append(("coloring C4", backend, best, f"{models} models"))

    for backend in backends:
        best, checked = bench_equivalence(backend, args.repeat)
        rows.append(("clique equivalence", backend, best, f"{checked} fact sets"))

    width = max(len(r[0]) for r in rows)
    print(f"{'workload'.ljust(width)}  backend  best (s)  detail")
    by_workload: dict[str, dict[str, float]] = {}
    for name, backend, best, detail in rows:
        by_workload.setdefault(name, {})[backend] = best
        print(f"{name.ljust(width)}  {backend:<7}  {best:8.4f}  {detail}")
    if HAS_NUMBA:
        print()
        for name, times in by_workload.items():
            speedup = times["numpy"] / times["numba"]
            print(f"{name.ljust(width)}  numba is {speedup:.1f}x the numpy throughput")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
