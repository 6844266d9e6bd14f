"""Command-line frontend emitting machine-readable, diff-stable results.

Every output begins with a ``# meta:`` JSON line echoing the full run
configuration, so files are self-describing and reruns are byte-comparable.
CSV uses '.' decimals, ',' separators, LF endings, 12 significant digits.
Exit codes: 0 success, 2 configuration error, 3 budget/capacity error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import __version__
from .channels import WiretapChannel, degrading_distance, make_channel, marginal
from .errors import CapacityError, QWiretapError
from .labeled import LabeledOperator, Register
from .regions import baseline as regions_baseline
from .regions import classical_signaling_config, dense_coding_config, regularized_points
from .spcsim import evaluate_code, generate_codebook
from .typicality import covering_experiment, verify_projector_properties


def _fmt(v: float) -> str:
    return f"{float(v):.12g}"


def parse_channel(spec: str) -> tuple[WiretapChannel, dict]:
    """Accepts JSON {"name": ..., "params": [...]} or shorthand name:p1:p2."""
    spec = spec.strip()
    if spec.startswith("{"):
        d = json.loads(spec)
        unknown = set(d) - {"name", "params"}
        if unknown:
            raise QWiretapError(f"unknown channel spec keys {sorted(unknown)}")
        name, params = d["name"], d.get("params", [])
    else:
        parts = spec.split(":")
        name = parts[0]
        params = [float(p) for p in parts[1:]]
    return make_channel(name, params), {"name": name, "params": params}


def _meta_line(command: str, args: argparse.Namespace, channel_echo: dict | None, **extra) -> str:
    meta = {
        "tool": "qwiretap",
        "version": __version__,
        "command": command,
        "seed": getattr(args, "seed", None),
        "budget": getattr(args, "budget", None),
        "channel": channel_echo,
    }
    meta.update(extra)
    return "# meta: " + json.dumps(meta, sort_keys=True)


def _emit(lines: list[str], out: str | None) -> None:
    text = "\n".join(lines) + "\n"
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_region(args) -> int:
    channel, echo = parse_channel(args.channel)
    weights = list(np.linspace(0.0, 1.0, args.weights))
    sample = regularized_points(channel, args.n, weights, args.budget, args.seed)
    lines = [
        _meta_line(
            "region",
            args,
            echo,
            n=args.n,
            weights=args.weights,
            note="weighted-sum scalarization traces the convex hull of the frontier",
        ),
        "lambda,R_bits,Rprime_bits,n,objective,evals,seed",
    ]
    for p in sample.points:
        lines.append(
            ",".join(
                [
                    _fmt(p.weight),
                    _fmt(p.rate.r),
                    _fmt(p.rate.rp),
                    str(p.rate.n),
                    _fmt(p.objective),
                    str(p.evals),
                    str(p.seed),
                ]
            )
        )
    _emit(lines, args.out)
    return 0


def _cmd_baseline(args) -> int:
    channel, echo = parse_channel(args.channel)
    value = regions_baseline(args.kind, channel, args.budget, args.seed)
    lines = [_meta_line("baseline", args, echo, kind=args.kind), _fmt(value)]
    _emit(lines, args.out)
    return 0


def _cmd_degraded_check(args) -> int:
    channel, echo = parse_channel(args.channel)
    report = degrading_distance(channel, args.budget, args.seed)
    body = {
        "distance": report.distance,
        "verdict": report.verdict,
        "solver": report.solver,
        "metric": "frobenius-choi (tool convention, not a channel-theoretic standard)",
    }
    lines = [
        _meta_line("degraded-check", args, echo),
        json.dumps(body, sort_keys=True),
    ]
    _emit(lines, args.out)
    return 0


def _cmd_covering(args) -> int:
    channel, echo = parse_channel(args.channel)
    kraus_e = marginal(channel, "eve")
    da = channel.dim_in
    ensemble = []
    for x in range(da):
        basis = np.zeros((da, da), dtype=complex)
        basis[x, x] = 1.0
        ensemble.append((1.0 / da, kraus_e.apply(basis)))
    r0_values = [float(v) for v in args.r0.split(",")]
    lines = [
        _meta_line("covering", args, echo, n=args.n, trials=args.trials, r0=r0_values),
        "trial,R0,n,distance,seed",
    ]
    for r0 in r0_values:
        stats = covering_experiment(ensemble, args.n, r0, args.trials, args.seed)
        for t, d in enumerate(stats.distances):
            lines.append(
                ",".join([str(t), _fmt(r0), str(args.n), _fmt(d), str(args.seed)])
            )
    _emit(lines, args.out)
    return 0


def _cmd_simulate(args) -> int:
    channel, echo = parse_channel(args.channel)
    rates = tuple(float(v) for v in args.rates.split(","))
    if len(rates) != 4:
        raise QWiretapError(f"--rates expects R,RP,R0,R0P; got {args.rates!r}")
    if args.preset == "dense":
        config = dense_coding_config(channel.dim_in)
    else:
        config = classical_signaling_config(channel.dim_in)
    codebook = generate_codebook(config, rates, args.n, args.seed)
    evaluation = evaluate_code(codebook, config, channel)
    lines = [
        _meta_line("simulate", args, echo, n=args.n, preset=args.preset, rates=list(rates)),
        json.dumps(evaluation.to_json_dict(), sort_keys=True),
    ]
    _emit(lines, args.out)
    return 0


def _cmd_typicality(args) -> int:
    p = [float(v) for v in args.p.split(",")]
    rho = LabeledOperator((Register("S", len(p)),), np.diag(p), "state")
    report = verify_projector_properties(rho, args.n, args.delta)
    body = {
        "small_n": report.small_n,
        "all_passed": report.all_passed,
        "checks": [
            {"name": c.name, "measured": c.measured, "bound": c.bound, "passed": c.passed}
            for c in report.checks
        ],
    }
    lines = [
        _meta_line("typicality", args, None, p=p, n=args.n, delta=args.delta),
        json.dumps(body, sort_keys=True),
    ]
    _emit(lines, args.out)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qwiretap")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, channel=True):
        if channel:
            p.add_argument("--channel", required=True, help="JSON spec or name:p1:p2")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default=None)

    p = sub.add_parser("region", help="trace the achievable (R, R') frontier")
    common(p)
    p.add_argument("--weights", type=int, default=11, help="number of scalarization weights")
    p.add_argument("--budget", type=int, default=20000)
    p.add_argument("--n", type=int, default=1, choices=(1, 2))
    p.set_defaults(func=_cmd_region)

    p = sub.add_parser("baseline", help="single-letter reference quantities")
    common(p)
    p.add_argument("--kind", required=True, choices=("holevo", "ea", "private", "sea"))
    p.add_argument("--budget", type=int, default=20000)
    p.set_defaults(func=_cmd_baseline)

    p = sub.add_parser("degraded-check", help="numerical degradedness test")
    common(p)
    p.add_argument("--budget", type=int, default=50000)
    p.set_defaults(func=_cmd_degraded_check)

    p = sub.add_parser("covering", help="random-codebook covering experiment")
    common(p)
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--r0", default="0.25,0.5,0.75,1.0", help="comma-separated rates")
    p.add_argument("--trials", type=int, default=100)
    p.set_defaults(func=_cmd_covering)

    p = sub.add_parser("simulate", help="exact superposition-code evaluation")
    common(p)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--rates", default="0.5,0,0,0", help="R,RP,R0,R0P")
    p.add_argument("--preset", default="classical", choices=("classical", "dense"))
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("typicality", help="typical projector property report")
    common(p, channel=False)
    p.add_argument("--p", required=True, help="comma-separated probabilities")
    p.add_argument("--n", type=int, default=6)
    p.add_argument("--delta", type=float, default=0.3)
    p.set_defaults(func=_cmd_typicality)
    return parser


def run(argv: list[str] | None = None) -> int:
    threads = os.environ.get("QWIRETAP_THREADS")
    if threads:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
            os.environ.setdefault(var, threads)
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except CapacityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (QWiretapError, json.JSONDecodeError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
