"""Command-line entry point.

Subcommands: `generate` writes a synthetic dataset, `train` fits one
learner, `compare` ranks two objects under a model, `eval` scores a
model on an example file, `bench` runs the full experiment grid, and
`verify` checks the learners against the brute-force oracles.

Exit codes: 0 success, 1 usage error, 2 data or validation error.  All
randomness flows from `--seed` flags; nothing is ever seeded from the
clock, so every subcommand is byte-identical on identical inputs (the
wall-clock columns of `bench` being the documented exception, removable
with `--no-timing`).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict
from pathlib import Path

import numpy as np

from . import __version__
from .bench import ExperimentConfig, emit_report, evaluate, run_experiment
from .core import (
    ExampleSet,
    ParseError,
    SchemaError,
    compare,
    count_satisfied,
    load_schema,
    parse_model,
    serialize_model,
)
from .datagen import GenConfig, generate_dataset, write_files
from .learn_dp import compute_lpl, compute_lpo
from .learn_ga import GaConfig, evolve
from .learn_greedy import greedy_lpl
from .oracle import brute_lpl, brute_lpo, random_instance

__all__ = ["main", "entry"]


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default would exit 2
        raise _UsageError(message)


def _add_ga_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--pop", type=int, default=100,
                        help="GA population size (default 100)")
    parser.add_argument("--parents", type=int, default=50,
                        help="GA parents per generation (default 50)")
    parser.add_argument("--gens", type=int, default=100,
                        help="GA generations (default 100)")
    parser.add_argument("--order-crossover", action="store_true",
                        help="use the two-parent order crossover extension "
                             "instead of the attribute shuffle")


def build_parser() -> _Parser:
    parser = _Parser(prog="lplearn",
                     description="Learn lexicographic preference lists "
                                 "from pairwise comparisons.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    p = sub.add_parser("generate", help="write a synthetic dataset",
                       description="Generate schema.json, model.txt (the hidden "
                                   "model), train.csv, test.csv, and manifest.json.")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--m", type=int, required=True, help="number of examples")
    p.add_argument("--n", type=int, default=10, help="attribute count (default 10)")
    p.add_argument("--x", type=int, default=5, help="values per attribute (default 5)")
    p.add_argument("--noise", type=float, default=0.15,
                   help="fraction of examples to flip (default 0.15)")
    p.add_argument("--train-fraction", type=float, default=0.8,
                   help="train split fraction (default 0.8)")
    p.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("train", help="fit a model to a training file",
                       description="Read a schema (JSON) and training examples "
                                   "(CSV), write the learned model text and a "
                                   "stats JSON.")
    p.add_argument("--algo", required=True, choices=["dpa", "ga", "greedy"],
                   help="dpa = exact subset DP, ga = genetic algorithm, "
                        "greedy = one-pass baseline")
    p.add_argument("--schema", required=True, help="schema JSON file")
    p.add_argument("--train", required=True, help="training examples CSV")
    p.add_argument("--model-out", default="model.txt", help="model text output")
    p.add_argument("--stats-out", default=None,
                   help="stats JSON output (default: <model-out>.stats.json)")
    p.add_argument("--history-out", default=None,
                   help="GA only: per-generation fitness CSV")
    p.add_argument("--seed", type=int, default=0, help="GA seed (default 0)")
    _add_ga_flags(p)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("compare", help="rank two objects under a model",
                       description="Print Better, Worse, or Equivalent for the "
                                   "first object relative to the second.")
    p.add_argument("--schema", required=True, help="schema JSON file")
    p.add_argument("--model", required=True, help="model text file")
    p.add_argument("--a", required=True,
                   help="first object: comma-separated value names, schema order")
    p.add_argument("--b", required=True, help="second object, same format")
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("eval", help="score a model on an example file",
                       description="Print the fraction of examples the model "
                                   "satisfies, to 4 decimal places.")
    p.add_argument("--schema", required=True, help="schema JSON file")
    p.add_argument("--model", required=True, help="model text file")
    p.add_argument("--test", required=True, help="examples CSV")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("bench", help="run the benchmark grid",
                       description="Generate datasets across sizes, train each "
                                   "algorithm, and write results.csv, "
                                   "summary.csv, and SVG charts.")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--sizes", default="1000,10000,100000",
                   help="comma-separated m values (default 1000,10000,100000)")
    p.add_argument("--full", action="store_true",
                   help="append m=1000000 to the grid (minutes of runtime)")
    p.add_argument("--algos", default="dpa,ga,greedy",
                   help="comma-separated subset of dpa,ga,greedy")
    p.add_argument("--reps", type=int, default=5,
                   help="repetitions per size (default 5)")
    p.add_argument("--seed", type=int, default=0, help="base seed (default 0)")
    p.add_argument("--n", type=int, default=10, help="attribute count (default 10)")
    p.add_argument("--x", type=int, default=5, help="values per attribute (default 5)")
    p.add_argument("--noise", type=float, default=0.15,
                   help="noise fraction (default 0.15)")
    p.add_argument("--train-fraction", type=float, default=0.8,
                   help="train split fraction (default 0.8)")
    p.add_argument("--threads", type=int, default=1,
                   help="worker threads over (size, repetition) cells; any "
                        "value yields identical results (default 1)")
    p.add_argument("--no-timing", action="store_true",
                   help="write 0.0 in the time columns for byte-stable output")
    _add_ga_flags(p)
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("verify", help="check learners against the oracles",
                       description="Run randomized agreement suites between the "
                                   "exact learners and the brute-force oracles.")
    p.add_argument("--lpo", type=int, default=200,
                   help="value-order agreement instances (default 200)")
    p.add_argument("--lpl", type=int, default=100,
                   help="full-list agreement instances (default 100)")
    p.add_argument("--sublists", type=int, default=50,
                   help="sublist-optimum agreement instances (default 50)")
    p.add_argument("--seed", type=int, default=0, help="suite seed (default 0)")
    p.set_defaults(func=_cmd_verify)
    return parser


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def _cmd_generate(args) -> int:
    config = GenConfig(m=args.m, n=args.n, x=args.x, noise=args.noise,
                       train_fraction=args.train_fraction, seed=args.seed)
    paths = write_files(generate_dataset(config), args.out)
    for path in paths.values():
        print(f"wrote {path}")
    return 0


def _cmd_train(args) -> int:
    schema = load_schema(args.schema)
    train = ExampleSet.from_csv(args.train, schema)
    if len(train) == 0:
        raise SchemaError(f"{args.train}: no training examples")

    history = None
    if args.algo == "dpa":
        result = compute_lpl(train)
        model, satisfied = result.model, result.count
    elif args.algo == "ga":
        config = GaConfig(population_size=args.pop, parent_count=args.parents,
                          generations=args.gens, seed=args.seed,
                          use_order_crossover=args.order_crossover)
        result = evolve(train, config)
        model, satisfied = result.model, result.fitness
        history = result
    else:
        model = greedy_lpl(train)
        satisfied = count_satisfied(model, train)

    model_out = Path(args.model_out)
    model_out.write_text(serialize_model(model, schema) + "\n", encoding="utf-8")
    stats_out = Path(args.stats_out) if args.stats_out else \
        model_out.with_name(model_out.name + ".stats.json")
    stats = {
        "algo": args.algo,
        "train_examples": len(train),
        "satisfied": satisfied,
        "train_accuracy": satisfied / len(train),
    }
    stats_out.write_text(json.dumps(stats, indent=2, sort_keys=True) + "\n",
                         encoding="utf-8")

    if args.history_out and history is not None:
        lines = ["generation,best_fitness,mean_fitness"]
        for gen, (best, mean) in enumerate(zip(history.best_history,
                                               history.mean_history)):
            lines.append(f"{gen},{best},{mean!r}")
        Path(args.history_out).write_text("\n".join(lines) + "\n",
                                          encoding="utf-8")

    print(f"wrote {model_out}")
    print(f"train accuracy {stats['train_accuracy']:.4f}")
    return 0


def _load_model(args):
    schema = load_schema(args.schema)
    text = Path(args.model).read_text(encoding="utf-8").strip()
    return schema, parse_model(text, schema)


def _cmd_compare(args) -> int:
    schema, model = _load_model(args)
    obj_a = schema.object_of([tok.strip() for tok in args.a.split(",")])
    obj_b = schema.object_of([tok.strip() for tok in args.b.split(",")])
    print(compare(model, obj_a, obj_b))
    return 0


def _cmd_eval(args) -> int:
    schema, model = _load_model(args)
    test = ExampleSet.from_csv(args.test, schema)
    print(f"{evaluate(model, test):.4f}")
    return 0


def _cmd_bench(args) -> int:
    sizes = sorted({int(tok) for tok in args.sizes.split(",") if tok.strip()})
    if args.full and 10 ** 6 not in sizes:
        sizes.append(10 ** 6)
    config = ExperimentConfig(
        m_values=tuple(sizes),
        algorithms=tuple(tok.strip() for tok in args.algos.split(",") if tok.strip()),
        repetitions=args.reps,
        seed=args.seed,
        n=args.n, x=args.x, noise=args.noise,
        train_fraction=args.train_fraction,
        ga=GaConfig(population_size=args.pop, parent_count=args.parents,
                    generations=args.gens, seed=args.seed,
                    use_order_crossover=args.order_crossover),
        threads=args.threads,
        record_timing=not args.no_timing,
    )
    records = run_experiment(config)
    paths = emit_report(records, args.out)
    for path in paths.values():
        print(f"wrote {path}")
    return 0


def _cmd_verify(args) -> int:
    rng = np.random.default_rng(np.random.SeedSequence([args.seed, 97]))
    failures = 0

    passed = 0
    for _ in range(args.lpo):
        x = int(rng.integers(2, 6))
        m = int(rng.integers(0, 201))
        instance = random_instance(rng, n=1, x=x, m=m)
        if compute_lpo(instance, 0).count == brute_lpo(instance, 0).count:
            passed += 1
    print(f"value-order agreement: {passed}/{args.lpo}")
    failures += args.lpo - passed

    passed = 0
    for _ in range(args.lpl):
        n = int(rng.integers(2, 4))
        x = int(rng.integers(2, 4))
        m = int(rng.integers(0, 101))
        instance = random_instance(rng, n=n, x=x, m=m)
        if compute_lpl(instance).count == brute_lpl(instance)[1]:
            passed += 1
    print(f"full-list agreement: {passed}/{args.lpl}")
    failures += args.lpl - passed

    passed = 0
    for _ in range(args.sublists):
        n = int(rng.integers(2, 4))
        x = int(rng.integers(2, 4))
        m = int(rng.integers(0, 81))
        instance = random_instance(rng, n=n, x=x, m=m)
        if brute_lpl(instance)[1] == brute_lpl(instance, include_sublists=True)[1]:
            passed += 1
    print(f"sublist-optimum agreement: {passed}/{args.sublists}")
    failures += args.sublists - passed

    print("all checks passed" if failures == 0 else f"{failures} check(s) FAILED")
    return 0 if failures == 0 else 2


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (SchemaError, ParseError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry() -> int:
    return main(sys.argv[1:])
