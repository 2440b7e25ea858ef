"""Command-line front end.

Subcommands: dist, check-cert, axioms, logic (eval | distance), synth,
catalog.  Reports come as JSON (default) or an aligned text table, both
carrying the tool version, the effective seed, and sha256 digests of all
input files; identical inputs and seed produce byte-identical output.
Exit codes: 0 on success or a holding verdict, 1 when a verdict fails
(certificate violation, law counterexample), 2 on usage or file-format
errors.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import __version__
from .axioms import AxiomConfig, check_axioms
from .core import LaxkitError, ZERO, format_unit, parse_unit
from .distance import behavioural_distance, check_certificate
from .formparse import parse_formula
from .jsonio import (
    JsonFormatError,
    decode_certificate,
    decode_formula,
    decode_functor,
    decode_lifting,
    decode_system,
    dump_json,
    encode_formula,
    encode_rel,
    file_digest,
    load_json,
)
from .liftings import match_lifting
from .logic import evaluate, rank
from .modalities import standard_modalities
from .moss import logical_distance, synthesize
from .systems import validate

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2


@dataclass
class RunConfig:
    seed: int = 0
    tol: Fraction = ZERO
    max_iter: int = 100
    trials: int = 500
    output: str | None = None
    fmt: str = "json"
    jobs: int = 1


class _Inputs:
    """Tracks loaded files and their digests for the report envelope."""

    def __init__(self):
        self.digests = {}

    def record(self, path: str):
        self.digests[path] = file_digest(path)

    def load(self, path: str):
        data = load_json(path)
        self.record(path)
        return data


def _envelope(cfg: RunConfig, inputs: _Inputs, body: dict) -> dict:
    report = {
        "tool": "laxkit",
        "version": __version__,
        "seed": cfg.seed,
        "inputs": inputs.digests,
    }
    report.update(body)
    return report


def _emit(cfg: RunConfig, report: dict) -> None:
    if cfg.fmt == "table":
        text = _render_table(report)
        if cfg.output:
            with open(cfg.output, "w", encoding="utf-8") as handle:
                handle.write(text)
        else:
            sys.stdout.write(text)
        return
    text = dump_json(report, cfg.output)
    if not cfg.output:
        sys.stdout.write(text)


def _matrix_lines(matrix: dict, indent="  "):
    source, target, values = matrix["source"], matrix["target"], matrix["values"]
    width = max(
        [len(str(v)) for row in values for v in row] + [len(str(b)) for b in target] + [1]
    )
    label = max([len(str(a)) for a in source] + [1])
    yield indent + " " * label + "  " + "  ".join(f"{b:>{width}}" for b in target)
    for a, row in zip(source, values):
        yield indent + f"{a:>{label}}  " + "  ".join(f"{v:>{width}}" for v in row)


def _slack_lines(rows, indent="  "):
    for row in rows:
        pair = " -> ".join(row["pair"])
        yield (f"{indent}{pair}: claimed {row['claimed']}, "
               f"lifted {row['lifted']}, slack {row['slack']}")


def _render_table(report: dict) -> str:
    lines = [f"laxkit {report.get('version', '')}  seed={report.get('seed', '')}"]
    for path, digest in sorted(report.get("inputs", {}).items()):
        lines.append(f"  input {path}  sha256:{digest[:12]}")
    special = {"tool", "version", "seed", "inputs", "matrix", "trace",
               "forward", "backward", "checks", "values", "modalities", "formula"}
    for key in sorted(k for k in report if k not in special):
        lines.append(f"{key}: {report[key]}")
    if "checks" in report:
        lines.append("checks:")
        for check in report["checks"]:
            verdict = "pass" if check["passed"] else "FAIL"
            claim = "" if check["claimed"] else "  [not claimed]"
            lines.append(f"  {check['name']:<11} {verdict}{claim}")
            if check["counterexample"]:
                cex = check["counterexample"]
                lines.append(f"    trial {cex['trial']}: {cex['description']}")
                for name, value in cex["data"].items():
                    lines.append(f"      {name} = {value}")
    for direction in ("forward", "backward"):
        if direction in report:
            lines.append(f"{direction}:")
            lines.extend(_slack_lines(report[direction]))
    if "values" in report:
        lines.append("values:")
        for state, value in report["values"].items():
            lines.append(f"  {state}: {value}")
    if "modalities" in report:
        lines.append("modalities:")
        for lam in report["modalities"]:
            dual = f", dual {lam['dual']}" if lam["dual"] else ""
            flags = [name for name in ("monotone", "nonexpansive") if lam[name]]
            lines.append(f"  {lam['name']}/{lam['arity']} ({', '.join(flags)}{dual})")
    if "formula" in report:
        import json as _json

        lines.append("formula: " + _json.dumps(report["formula"], sort_keys=True))
    if "matrix" in report:
        lines.append("matrix:")
        lines.extend(_matrix_lines(report["matrix"]))
    if "trace" in report:
        for n, step in enumerate(report["trace"]):
            lines.append(f"step {n}:")
            lines.extend(_matrix_lines(step))
    return "\n".join(lines) + "\n"


def _load_two_systems(inputs: _Inputs, paths) -> tuple:
    if len(paths) == 1:
        paths = paths * 2
    if len(paths) != 2:
        raise JsonFormatError("give one or two --system files", "--system")
    out = []
    for path in paths:
        system, notes = decode_system(inputs.load(path), path)
        report = validate(system, notes)
        if not report.ok:
            lines = "; ".join(f"{p}: {m}" for _, p, m in report.errors())
            raise JsonFormatError(f"system does not validate: {lines}", path)
        out.append(system)
    return out[0], out[1]


def _load_lifting(inputs: _Inputs, path: str, functor):
    lifting = decode_lifting(inputs.load(path), path)
    problems = match_lifting(lifting, functor)
    if problems:
        lines = "; ".join(f"{p}: {m}" for p, m in problems)
        raise JsonFormatError(f"lifting does not fit the system functor: {lines}", path)
    return lifting


def cmd_dist(cfg: RunConfig, args) -> int:
    inputs = _Inputs()
    sys_a, sys_b = _load_two_systems(inputs, args.system)
    lifting = _load_lifting(inputs, args.lifting, sys_a.functor)
    result = behavioural_distance(
        lifting, sys_a, sys_b, tol=cfg.tol, max_iter=cfg.max_iter,
        keep_trace=args.trace,
    )
    body = {
        "matrix": encode_rel(result.matrix),
        "iterations": result.iterations,
        "residual": format_unit(result.residual),
        "converged": result.converged,
    }
    if result.gap_bound is not None:
        body["gap-bound"] = format_unit(result.gap_bound)
    if args.trace:
        body["trace"] = [encode_rel(step) for step in result.trace]
    _emit(cfg, _envelope(cfg, inputs, body))
    return EXIT_OK


def cmd_check_cert(cfg: RunConfig, args) -> int:
    inputs = _Inputs()
    sys_a, sys_b = _load_two_systems(inputs, args.system)
    lifting = _load_lifting(inputs, args.lifting, sys_a.functor)
    cert = decode_certificate(inputs.load(args.cert), args.cert)
    verdict = check_certificate(lifting, sys_a, sys_b, cert)

    def rows(direction):
        return [
            {
                "pair": list(row.pair),
                "claimed": format_unit(row.claimed),
                "lifted": format_unit(row.lifted),
                "slack": str(row.slack),
            }
            for row in direction
        ]

    body = {
        "verdict": "ok" if verdict.ok else "violation",
        "kind": cert.kind,
        "forward": rows(verdict.forward),
    }
    if verdict.backward is not None:
        body["backward"] = rows(verdict.backward)
    _emit(cfg, _envelope(cfg, inputs, body))
    return EXIT_OK if verdict.ok else EXIT_VIOLATION


def _functor_for_axioms(inputs: _Inputs, args):
    from .functors import DFin, Id, Maybe, Pair, PFin
    from .liftings import (
        ConstLift, Discount, Hausdorff, IdLift, KantorovichD, KantorovichGrid,
        MaybeLift, PairMax, PairSum, WassersteinD,
    )

    if args.functor:
        return decode_functor(inputs.load(args.functor), args.functor)

    def derive(lifting, path="lifting"):
        if isinstance(lifting, IdLift):
            return Id()
        if isinstance(lifting, ConstLift):
            raise JsonFormatError(
                "a label component has no default label metric; pass --functor",
                path,
            )
        if isinstance(lifting, Hausdorff):
            return PFin(derive(lifting.sub, f"{path}.sub"))
        if isinstance(lifting, (KantorovichD, WassersteinD)):
            return DFin(derive(lifting.sub, f"{path}.sub"))
        if isinstance(lifting, PairSum):
            return Pair(derive(lifting.left, f"{path}.left"),
                        derive(lifting.right, f"{path}.right"))
        if isinstance(lifting, PairMax):
            return Pair(derive(lifting.left, f"{path}.left"),
                        derive(lifting.right, f"{path}.right"))
        if isinstance(lifting, Discount):
            return derive(lifting.sub, f"{path}.sub")
        if isinstance(lifting, MaybeLift):
            return Maybe(derive(lifting.sub, f"{path}.sub"))
        if isinstance(lifting, KantorovichGrid):
            raise JsonFormatError(
                "cannot derive the functor under a grid node; pass --functor", path)
        raise JsonFormatError(f"cannot derive a functor for {lifting!r}", path)

    return derive(decode_lifting(load_json(args.lifting), args.lifting))


def cmd_axioms(cfg: RunConfig, args) -> int:
    inputs = _Inputs()
    functor = _functor_for_axioms(inputs, args)
    lifting = _load_lifting(inputs, args.lifting, functor)
    report = check_axioms(
        lifting, functor,
        AxiomConfig(trials=cfg.trials, max_size=args.max_size, seed=cfg.seed),
    )
    body = {
        "trials": cfg.trials,
        "ok": report.ok,
        "consistent": report.consistent,
        "checks": [
            {
                "name": c.name,
                "claimed": c.claimed,
                "trials": c.trials,
                "passed": c.passed,
                "counterexample": None if c.passed else {
                    "trial": c.counterexample.trial,
                    "description": c.counterexample.description,
                    "data": c.counterexample.data,
                },
            }
            for c in report.checks
        ],
    }
    _emit(cfg, _envelope(cfg, inputs, body))
    return EXIT_OK if report.ok else EXIT_VIOLATION


def _load_formula(inputs: _Inputs, path: str, functor):
    if path.endswith(".json"):
        return decode_formula(inputs.load(path), path, functor)
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise JsonFormatError(str(exc), path) from None
    inputs.record(path)
    return parse_formula(text)


def cmd_logic_eval(cfg: RunConfig, args) -> int:
    inputs = _Inputs()
    system, notes = decode_system(inputs.load(args.system), args.system)
    report = validate(system, notes)
    if not report.ok:
        lines = "; ".join(f"{p}: {m}" for _, p, m in report.errors())
        raise JsonFormatError(f"system does not validate: {lines}", args.system)
    lifting = None
    if args.lifting:
        lifting = _load_lifting(inputs, args.lifting, system.functor)
    formula = _load_formula(inputs, args.formula, system.functor)
    value = evaluate(formula, system, args.state, lifting)
    body = {
        "state": args.state,
        "rank": rank(formula),
        "value": format_unit(value),
    }
    _emit(cfg, _envelope(cfg, inputs, body))
    return EXIT_OK


def cmd_logic_distance(cfg: RunConfig, args) -> int:
    inputs = _Inputs()
    sys_a, sys_b = _load_two_systems(inputs, args.system)
    lifting = _load_lifting(inputs, args.lifting, sys_a.functor)
    matrix = logical_distance(sys_a, sys_b, lifting, args.rank)
    _emit(cfg, _envelope(cfg, inputs, {"rank": args.rank, "matrix": encode_rel(matrix)}))
    return EXIT_OK


def cmd_synth(cfg: RunConfig, args) -> int:
    inputs = _Inputs()
    if len(args.system) == 1:
        system, notes = decode_system(inputs.load(args.system[0]), args.system[0])
        report = validate(system, notes)
        if not report.ok:
            lines = "; ".join(f"{p}: {m}" for _, p, m in report.errors())
            raise JsonFormatError(f"system does not validate: {lines}", args.system[0])
    else:
        from .systems import disjoint_union

        sys_a, sys_b = _load_two_systems(inputs, args.system)
        system, _, inj2 = disjoint_union(sys_a, sys_b)
        if args.target in inj2 and inj2[args.target] != args.target:
            args.target = inj2[args.target]
    lifting = _load_lifting(inputs, args.lifting, system.functor)
    formula = synthesize(system, args.target, args.rank)
    table = {
        s: format_unit(evaluate(formula, system, s, lifting))
        for s in system.carrier.elements
    }
    body = {
        "target": args.target,
        "rank": args.rank,
        "formula": encode_formula(formula, system.functor),
        "values": table,
    }
    if args.out:
        dump_json(encode_formula(formula, system.functor), args.out)
        body["out"] = args.out
    _emit(cfg, _envelope(cfg, inputs, body))
    return EXIT_OK


def cmd_catalog(cfg: RunConfig, args) -> int:
    inputs = _Inputs()
    body = {
        "functor-kinds": ["id", "const", "pfin", "dfin", "pair", "maybe"],
        "lifting-kinds": [
            "id", "const", "hausdorff", "kantorovich", "wasserstein",
            "pair-sum", "pair-max", "discount", "maybe", "kantorovich-grid",
        ],
    }
    functor = None
    if args.functor:
        functor = decode_functor(inputs.load(args.functor), args.functor)
    elif args.system:
        system, _ = decode_system(inputs.load(args.system), args.system)
        functor = system.functor
    if functor is not None:
        body["modalities"] = [
            {
                "name": lam.name,
                "arity": lam.arity,
                "monotone": lam.monotone,
                "nonexpansive": lam.nonexpansive,
                "dual": lam.dual_name,
            }
            for _, lam in sorted(standard_modalities(functor).items())
        ]
    _emit(cfg, _envelope(cfg, inputs, body))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="laxkit",
        description="Behavioural distances on finite coalgebras via relation liftings",
    )
    parser.add_argument("--version", action="version", version=f"laxkit {__version__}")

    def common(sub):
        sub.add_argument("--seed", type=int, default=None,
                         help="RNG seed (env LAXKIT_SEED overrides; default 0)")
        sub.add_argument("--output", help="write the report here instead of stdout")
        sub.add_argument("--format", choices=("json", "table"), default="json",
                         help="report format (default json)")
        sub.add_argument("--jobs", type=int, default=1,
                         help="upper bound on worker parallelism (current executor is sequential)")

    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("dist", help="behavioural distance matrix by fixpoint iteration")
    p.add_argument("--system", action="append", required=True)
    p.add_argument("--lifting", required=True)
    p.add_argument("--tol", default="0", help="residual tolerance as p/q (0 = exact)")
    p.add_argument("--max-iter", type=int, default=100)
    p.add_argument("--trace", action="store_true", help="include every iterate")
    common(p)
    p.set_defaults(run=cmd_dist)

    p = subs.add_parser("check-cert", help="verify a (bi)simulation certificate")
    p.add_argument("--cert", required=True)
    p.add_argument("--system", action="append", required=True)
    p.add_argument("--lifting", required=True)
    common(p)
    p.set_defaults(run=cmd_check_cert)

    p = subs.add_parser("axioms", help="randomized law suite for a lifting")
    p.add_argument("--lifting", required=True)
    p.add_argument("--functor", help="functor file; derived from the lifting shape if omitted")
    p.add_argument("--trials", type=int, default=500)
    p.add_argument("--max-size", type=int, default=5)
    common(p)
    p.set_defaults(run=cmd_axioms)

    logic = subs.add_parser("logic", help="formula evaluation and logical distance")
    logic_subs = logic.add_subparsers(dest="logic_command", required=True)

    p = logic_subs.add_parser("eval", help="evaluate a formula at a state")
    p.add_argument("--formula", required=True, help=".txt (text syntax) or .json")
    p.add_argument("--system", required=True)
    p.add_argument("--state", required=True)
    p.add_argument("--lifting", help="needed for structural-modality formulas")
    common(p)
    p.set_defaults(run=cmd_logic_eval)

    p = logic_subs.add_parser("distance", help="rank-n logical distance matrix")
    p.add_argument("--system", action="append", required=True)
    p.add_argument("--lifting", required=True)
    p.add_argument("--rank", type=int, required=True)
    common(p)
    p.set_defaults(run=cmd_logic_distance)

    p = subs.add_parser("synth", help="synthesize a distinguishing formula")
    p.add_argument("--system", action="append", required=True)
    p.add_argument("--lifting", required=True)
    p.add_argument("--target", required=True,
                   help="target state (resolved in the second system when two are given)")
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--out", help="write the formula JSON here")
    common(p)
    p.set_defaults(run=cmd_synth)

    p = subs.add_parser("catalog", help="list supported grammar nodes and modalities")
    p.add_argument("--functor")
    p.add_argument("--system")
    common(p)
    p.set_defaults(run=cmd_catalog)

    return parser


def _config_from(args) -> RunConfig:
    seed = args.seed if getattr(args, "seed", None) is not None else None
    env_seed = os.environ.get("LAXKIT_SEED")
    if env_seed is not None:
        try:
            seed = int(env_seed)
        except ValueError:
            raise LaxkitError(f"LAXKIT_SEED must be an integer, got {env_seed!r}")
    if seed is None:
        seed = 0
    cfg = RunConfig(seed=seed)
    if getattr(args, "tol", None) is not None:
        cfg.tol = parse_unit(args.tol)
    if getattr(args, "max_iter", None) is not None:
        cfg.max_iter = args.max_iter
    if getattr(args, "trials", None) is not None:
        cfg.trials = args.trials
    cfg.output = getattr(args, "output", None)
    if getattr(args, "format", None):
        cfg.fmt = args.format
    if getattr(args, "jobs", None):
        if args.jobs < 1:
            raise LaxkitError("--jobs must be at least 1")
        cfg.jobs = args.jobs
    return cfg


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config_from(args)
        return args.run(cfg, args)
    except JsonFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except LaxkitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
