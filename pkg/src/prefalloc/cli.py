"""Command-line front end: generate profiles, solve instances, benchmark ratios.

Reports are line-oriented ``key=value`` records on standard output (or one
JSON object per record with ``--json``); diagnostics, including wall-clock
times, go to standard error so stdout stays byte-identical across reruns of
the same flags and seed.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from typing import List, Optional

from .core import Profile, ScoringFunction, SolveReport
from .instances import make_cc, make_monroe, parse_instance, write_instance
from .instances import gen_identical, gen_impartial_culture
from .rng import derive_seed
from .solvers import (
    DEFAULT_ENUMERATION_CAP,
    EnumerationCapExceeded,
    SolverConfig,
    combined_monroe,
    exact_enumeration,
    greedy_cc,
    greedy_cc_bound,
    greedy_monroe,
    greedy_monroe_bound,
    maxcover_cc_baseline,
    sample_once_monroe,
)

ALGORITHMS = ("greedy", "sample", "combined", "maxcover", "exact")
OBJECTIVES = ("l1_dec", "l1_inc", "min_dec", "max_inc")


class CLIError(Exception):
    """Inconsistent or missing flags; maps to exit status 2."""


def _psf_for(objective: str) -> ScoringFunction:
    if objective in ("l1_dec", "min_dec"):
        return ScoringFunction.borda_dec()
    return ScoringFunction.borda_inc()


def _instance_for(system: str, profile: Profile, k: int):
    return make_monroe(profile, k) if system == "monroe" else make_cc(profile, k)


def _check_solve_flags(args) -> None:
    randomized = args.algorithm in ("sample", "combined")
    if randomized and args.seed is None:
        raise CLIError(f"--algorithm {args.algorithm} requires an explicit --seed")
    if not randomized and args.seed is not None:
        raise CLIError(f"--seed is meaningless for --algorithm {args.algorithm}")
    if args.algorithm == "combined":
        if args.epsilon is None or args.lambda_ is None:
            raise CLIError("--algorithm combined requires --epsilon and --lambda")
    elif args.epsilon is not None or args.lambda_ is not None:
        raise CLIError("--epsilon/--lambda apply only to --algorithm combined")
    if args.algorithm == "maxcover" and args.system != "cc":
        raise CLIError("--algorithm maxcover requires --system cc")
    if args.algorithm in ("sample", "combined") and args.system != "monroe":
        raise CLIError(f"--algorithm {args.algorithm} requires --system monroe")
    if args.algorithm != "exact" and args.objective != "l1_dec":
        raise CLIError(f"--algorithm {args.algorithm} supports only --objective l1_dec")


def _run_algorithm(
    name: str,
    system: str,
    profile: Profile,
    k: int,
    objective: str,
    seed: Optional[int],
    epsilon: Optional[float],
    lambda_: Optional[float],
    cap: int,
) -> SolveReport:
    if name == "exact":
        return exact_enumeration(
            _instance_for(system, profile, k),
            _psf_for(objective),
            objective,
            config=SolverConfig(enumeration_cap=cap),
        )
    if system == "monroe":
        if name == "greedy":
            return greedy_monroe(profile, k)
        if name == "sample":
            assert seed is not None
            return sample_once_monroe(profile, k, seed)
        if name == "combined":
            assert seed is not None and epsilon is not None and lambda_ is not None
            return combined_monroe(
                profile,
                k,
                SolverConfig(
                    epsilon=epsilon, lambda_=lambda_, seed=seed, enumeration_cap=cap
                ),
            )
    else:
        if name == "greedy":
            return greedy_cc(profile, k)
        if name == "maxcover":
            return maxcover_cc_baseline(profile, k)
    raise CLIError(f"algorithm {name!r} is not available for system {system!r}")


def _bound_for(
    name: str, system: str, n: int, m: int, k: int, oracle: Optional[int]
) -> Optional[float]:
    """Proven lower bound on the l1_dec value, when one applies."""
    if name == "greedy" and system == "monroe" and k >= 3:
        return float(greedy_monroe_bound(n, m, k))
    if name == "greedy" and system == "cc":
        return greedy_cc_bound(n, m, k)
    if name == "maxcover" and oracle is not None:
        return (1.0 - 1.0 / math.e) * oracle
    if name == "exact" and oracle is not None:
        return float(oracle)
    return None


def _record_line(pairs) -> str:
    return " ".join(f"{key}={value}" for key, value in pairs if value is not None)


def _emit_solve(args, descriptor: str, report: SolveReport, bound) -> None:
    committee = sorted(report.assignment.committee)
    if args.json:
        obj = {
            "instance": descriptor,
            "system": args.system,
            "k": args.k,
            "algorithm": report.algorithm,
            "objective": report.objective,
            "value": report.value,
            "committee": committee,
            "targets": list(report.assignment.targets),
        }
        if bound is not None:
            obj["bound"] = bound
        if report.seed is not None:
            obj["seed"] = report.seed
        print(json.dumps(obj))
    else:
        pairs = [
            ("instance", descriptor),
            ("system", args.system),
            ("k", args.k),
            ("algorithm", report.algorithm),
            ("objective", report.objective),
            ("value", report.value),
            ("bound", f"{bound:.6f}" if bound is not None else None),
            ("seed", report.seed),
        ]
        print(_record_line(pairs))
        print("committee: " + " ".join(str(a) for a in committee))
        print("targets: " + " ".join(str(t) for t in report.assignment.targets))
    print(f"elapsed_ms={report.elapsed * 1000.0:.3f}", file=sys.stderr)


def cmd_gen(args) -> int:
    if args.kind == "ic":
        if args.seed is None:
            raise CLIError("gen ic requires an explicit --seed")
        profile = gen_impartial_culture(args.n, args.m, args.seed)
    else:
        if args.seed is not None:
            raise CLIError("gen identical takes no --seed")
        profile = gen_identical(args.n, args.m)
    text = write_instance(profile)
    with open(args.out, "w", newline="\n") as handle:
        handle.write(text)
    digest = hashlib.sha256(text.encode()).hexdigest()
    print(f"path={args.out} sha256={digest}")
    return 0


def cmd_solve(args) -> int:
    _check_solve_flags(args)
    with open(args.path) as handle:
        profile = parse_instance(handle.read()).profile
    if not 1 <= args.k <= profile.m:
        raise CLIError(f"--k must lie in 1..{profile.m} for this profile")
    report = _run_algorithm(
        args.algorithm,
        args.system,
        profile,
        args.k,
        args.objective,
        args.seed,
        args.epsilon,
        args.lambda_,
        args.enumeration_cap,
    )
    bound = None
    if args.objective == "l1_dec":
        bound = _bound_for(
            args.algorithm, args.system, profile.n, profile.m, args.k, None
        )
    _emit_solve(args, args.path, report, bound)
    return 0


def cmd_ratio(args) -> int:
    if (args.path is None) == (args.gen is None):
        raise CLIError("ratio needs exactly one of an instance path or --gen")
    if args.gen is not None and (args.n is None or args.m is None):
        raise CLIError("ratio with --gen requires --n and --m")
    if args.gen == "ic" or any(a in ("sample", "combined") for a in args.algorithms):
        if args.seed is None:
            raise CLIError("ratio with randomized inputs requires --seed")
    seed = args.seed if args.seed is not None else 0
    algorithms = args.algorithms
    for name in algorithms:
        if name in ("sample", "combined") and args.system != "monroe":
            raise CLIError(f"algorithm {name!r} requires --system monroe")
        if name == "maxcover" and args.system != "cc":
            raise CLIError("algorithm 'maxcover' requires --system cc")
    if "combined" in algorithms and (args.epsilon is None or args.lambda_ is None):
        raise CLIError("algorithm 'combined' requires --epsilon and --lambda")

    base_profile = None
    descriptor = None
    if args.path is not None:
        with open(args.path) as handle:
            base_profile = parse_instance(handle.read()).profile
        descriptor = args.path
    elif args.gen == "identical":
        base_profile = gen_identical(args.n, args.m)
        descriptor = f"identical(n={args.n},m={args.m})"

    min_ratio = {name: None for name in algorithms}
    violations = {name: 0 for name in algorithms}
    failed = False
    for trial in range(args.trials):
        trial_seed = derive_seed(seed, trial)
        if base_profile is not None:
            profile = base_profile
            trial_descriptor = descriptor
        else:
            profile_seed = derive_seed(trial_seed, 0)
            profile = gen_impartial_culture(args.n, args.m, profile_seed)
            trial_descriptor = f"ic(n={args.n},m={args.m},seed={profile_seed})"
        if not 1 <= args.k <= profile.m:
            raise CLIError(f"--k must lie in 1..{profile.m} for this profile")
        try:
            oracle = exact_enumeration(
                _instance_for(args.system, profile, args.k),
                ScoringFunction.borda_dec(),
                "l1_dec",
                config=SolverConfig(enumeration_cap=args.enumeration_cap),
            ).value
        except EnumerationCapExceeded as exc:
            failed = True
            if args.json:
                print(json.dumps({"trial": trial, "error": str(exc)}))
            else:
                print(f'trial={trial} error="{exc}"')
            continue
        for index, name in enumerate(algorithms):
            report = _run_algorithm(
                name,
                args.system,
                profile,
                args.k,
                "l1_dec",
                derive_seed(trial_seed, 1 + index),
                args.epsilon,
                args.lambda_,
                args.enumeration_cap,
            )
            ratio = report.value / oracle if oracle else 1.0
            bound = _bound_for(
                name, args.system, profile.n, profile.m, args.k, oracle
            )
            violated = bound is not None and report.value < bound - 1e-9
            if violated:
                violations[name] += 1
                failed = True
            if min_ratio[name] is None or ratio < min_ratio[name]:
                min_ratio[name] = ratio
            if args.json:
                obj = {
                    "trial": trial,
                    "instance": trial_descriptor,
                    "algorithm": name,
                    "value": report.value,
                    "oracle": oracle,
                    "ratio": ratio,
                }
                if bound is not None:
                    obj["bound"] = bound
                    obj["bound_violated"] = violated
                print(json.dumps(obj))
            else:
                pairs = [
                    ("trial", trial),
                    ("instance", trial_descriptor),
                    ("algorithm", name),
                    ("value", report.value),
                    ("oracle", oracle),
                    ("ratio", f"{ratio:.6f}"),
                    ("bound", f"{bound:.6f}" if bound is not None else None),
                    ("bound_violated", "yes" if violated else None),
                ]
                print(_record_line(pairs))
    for name in algorithms:
        if args.json:
            print(
                json.dumps(
                    {
                        "algorithm": name,
                        "min_ratio": min_ratio[name],
                        "bound_violations": violations[name],
                    }
                )
            )
        else:
            ratio_text = (
                f"{min_ratio[name]:.6f}" if min_ratio[name] is not None else "-"
            )
            print(
                f"algorithm={name} min_ratio={ratio_text} "
                f"bound_violations={violations[name]}"
            )
    return 1 if failed else 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="prefalloc",
        description="Budgeted preference-allocation solvers (Monroe / CC)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a profile file")
    gen.add_argument("kind", choices=("ic", "identical"))
    gen.add_argument("--n", type=int, required=True, help="agent count")
    gen.add_argument("--m", type=int, required=True, help="alternative count")
    gen.add_argument("--seed", type=int, help="RNG seed (required for ic)")
    gen.add_argument("--out", required=True, help="output path")
    gen.set_defaults(func=cmd_gen)

    solve = sub.add_parser("solve", help="solve one instance")
    solve.add_argument("path", help="profile file")
    solve.add_argument("--system", choices=("monroe", "cc"), required=True)
    solve.add_argument("--k", type=int, required=True, help="committee size")
    solve.add_argument("--algorithm", choices=ALGORITHMS, required=True)
    solve.add_argument("--objective", choices=OBJECTIVES, default="l1_dec")
    solve.add_argument("--epsilon", type=float)
    solve.add_argument("--lambda", dest="lambda_", type=float)
    solve.add_argument("--seed", type=int)
    solve.add_argument(
        "--enumeration-cap", type=int, default=DEFAULT_ENUMERATION_CAP
    )
    solve.add_argument("--json", action="store_true")
    solve.set_defaults(func=cmd_solve)

    ratio = sub.add_parser(
        "ratio", help="compare algorithms against the exact oracle"
    )
    ratio.add_argument("path", nargs="?", help="profile file (or use --gen)")
    ratio.add_argument("--gen", choices=("ic", "identical"))
    ratio.add_argument("--n", type=int, help="agent count for --gen")
    ratio.add_argument("--m", type=int, help="alternative count for --gen")
    ratio.add_argument("--system", choices=("monroe", "cc"), required=True)
    ratio.add_argument("--k", type=int, required=True)
    ratio.add_argument(
        "--algorithms",
        required=True,
        type=lambda s: tuple(s.split(",")),
        help="comma-separated list from: " + ", ".join(ALGORITHMS),
    )
    ratio.add_argument("--trials", type=int, default=1)
    ratio.add_argument("--seed", type=int)
    ratio.add_argument("--epsilon", type=float)
    ratio.add_argument("--lambda", dest="lambda_", type=float)
    ratio.add_argument(
        "--enumeration-cap", type=int, default=DEFAULT_ENUMERATION_CAP
    )
    ratio.add_argument("--json", action="store_true")
    ratio.set_defaults(func=cmd_ratio)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "algorithms", None):
        unknown = [a for a in args.algorithms if a not in ALGORITHMS]
        if unknown:
            print(f"error: unknown algorithm(s): {', '.join(unknown)}", file=sys.stderr)
            return 2
    try:
        return args.func(args)
    except CLIError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (EnumerationCapExceeded, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
