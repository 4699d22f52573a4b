"""Command-line front end: ``dsr-analyzer check|dot|lint|matrices|oracle``."""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

from .cyclecheck import DEFAULT_CYCLE_CAP
from .dsrgraph import build_dsr, export_dot, graph_to_json
from .netmodel import ParseError, compile_to_matrices, parse_network
from .oracle import SUITES, run_suite
from .qualmat import DEFAULT_MINOR_CAP
from .verdict import AnalysisOptions, analyze, dsr_pair, lint_motifs, report_to_json, report_to_text

__all__ = ["main", "CliConfig", "parse_cap_env"]

CAP_ENV = "DSR_ANALYZER_CAP"
EXIT_USAGE = 1


@dataclass(frozen=True)
class CliConfig:
    command: str
    target: str
    cycle_cap: int
    minor_cap: int
    seed: int
    fmt: str
    out: Optional[str]
    cases: Optional[int]
    genlem: str


class UsageError(Exception):
    pass


def parse_cap_env(value: Optional[str]) -> dict:
    """Read caps from the environment: ``"N"`` sets the cycle cap, or
    ``"cycle=N,minor=M"`` sets either or both."""
    if not value or not value.strip():
        return {}
    value = value.strip()
    if value.isdigit():
        return {"cycle": int(value)}
    caps = {}
    for part in value.split(","):
        key, _, num = part.partition("=")
        key = key.strip()
        if key not in ("cycle", "minor") or not num.strip().isdigit():
            raise UsageError(f"{CAP_ENV}: cannot read {part!r}; use N or cycle=N,minor=M")
        caps[key] = int(num)
    return caps


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cycle-cap", type=_positive, help="maximum number of cycles to enumerate")
    common.add_argument("--minor-cap", type=_positive, help="largest minor expanded by permutations")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", dest="fmt", choices=("text", "json"), default="text")
    common.add_argument("--out", help="write output here instead of stdout")

    p = argparse.ArgumentParser(prog="dsr-analyzer",
                                description="Qualitative injectivity checks for interaction networks.")
    sub = p.add_subparsers(dest="command", required=True)
    for name, text in (("check", "run every check and report a verdict"),
                       ("dot", "write the DSR graph in Graphviz format (json: graph dump)"),
                       ("lint", "list entry patterns that rule out P0^(-) Jacobians"),
                       ("matrices", "print the compiled S and V")):
        sp = sub.add_parser(name, parents=[common], help=text)
        sp.add_argument("target", nargs="?", default="-", metavar="FILE", help="network file, or - for stdin")
        if name == "check":
            sp.add_argument("--genlem", choices=("auto", "on", "off"), default="auto",
                            help="direct minor-sign check (auto: only when small enough)")
    sp = sub.add_parser("oracle", parents=[common], help="run a brute-force verification suite")
    sp.add_argument("target", metavar="SUITE", choices=list(SUITES) + ["all"])
    sp.add_argument("--cases", type=_positive)
    return p


def _config(args, env: dict) -> CliConfig:
    return CliConfig(
        command=args.command,
        target=args.target,
        cycle_cap=args.cycle_cap or env.get("cycle", DEFAULT_CYCLE_CAP),
        minor_cap=args.minor_cap or env.get("minor", DEFAULT_MINOR_CAP),
        seed=args.seed,
        fmt=args.fmt,
        out=args.out,
        cases=getattr(args, "cases", None),
        genlem=getattr(args, "genlem", "auto"),
    )


def _read(target: str) -> str:
    if target == "-":
        return sys.stdin.read()
    with open(target, encoding="utf-8") as fh:
        return fh.read()


def _emit(cfg: CliConfig, text: str) -> None:
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_check(cfg: CliConfig, model) -> int:
    genlem = {"auto": "auto", "on": True, "off": False}[cfg.genlem]
    report = analyze(model, AnalysisOptions(cycle_cap=cfg.cycle_cap, minor_cap=cfg.minor_cap,
                                            genlem=genlem))
    _emit(cfg, report_to_json(report) if cfg.fmt == "json" else report_to_text(report))
    return report.exit_code


def cmd_dot(cfg: CliConfig, model) -> int:
    s, v = compile_to_matrices(model)
    a, b = dsr_pair(s, v)
    g = build_dsr(a, b, model.species_names(), model.interaction_names(), provenance="S, -V^T")
    _emit(cfg, graph_to_json(g) if cfg.fmt == "json" else export_dot(g))
    return 0


def cmd_lint(cfg: CliConfig, model) -> int:
    s, v = compile_to_matrices(model)
    found = lint_motifs(s, v, model.species_names(), model.interaction_names())
    if cfg.fmt == "json":
        _emit(cfg, json.dumps([{"kind": f.kind, "indices": f.indices, "text": f.text,
                                "severity": f.severity} for f in found],
                              indent=2, ensure_ascii=False) + "\n")
    else:
        _emit(cfg, "".join(f"{f.kind}: {f.text}\n" for f in found) or "no findings\n")
    return 0


def cmd_matrices(cfg: CliConfig, model) -> int:
    s, v = compile_to_matrices(model)
    if cfg.fmt == "json":
        _emit(cfg, json.dumps({
            "species": model.species_names(),
            "interactions": model.interaction_names(),
            "S": [[str(e) for e in r] for r in s.entries],
            "V": [[str(e) for e in r] for r in v.entries],
        }, indent=2, ensure_ascii=False) + "\n")
    else:
        _emit(cfg, f"S ({s.rows}x{s.cols}):\n{s}\nV ({v.rows}x{v.cols}):\n{v}\n")
    return 0


def cmd_oracle(cfg: CliConfig) -> int:
    names = list(SUITES) if cfg.target == "all" else [cfg.target]
    results = [run_suite(n, cfg.seed, cfg.cases) for n in names]
    if cfg.fmt == "json":
        _emit(cfg, json.dumps({"seed": cfg.seed, "suites": [r.to_dict() for r in results]},
                              indent=2) + "\n")
    else:
        lines = [f"seed {cfg.seed}"]
        for r in results:
            lines.append(f"{r.name}: {r.passed}/{r.cases} pass ({r.seconds:.2f}s)")
            lines += [f"  {k}: {v}" for k, v in sorted(r.details.items())]
            lines += [f"  FAIL {m}" for m in r.failures]
        _emit(cfg, "\n".join(lines) + "\n")
    return 0 if all(r.ok for r in results) else 2


COMMANDS = {"check": cmd_check, "dot": cmd_dot, "lint": cmd_lint, "matrices": cmd_matrices}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else 0
    try:
        cfg = _config(args, parse_cap_env(os.environ.get(CAP_ENV)))
        if cfg.command == "oracle":
            return cmd_oracle(cfg)
        name = "<stdin>" if cfg.target == "-" else cfg.target
        try:
            model = parse_network(_read(cfg.target))
        except ParseError as exc:
            print(f"{name}:{exc.line}:{exc.col}: {exc.message}", file=sys.stderr)
            return EXIT_USAGE
        return COMMANDS[cfg.command](cfg, model)
    except UsageError as exc:
        print(f"dsr-analyzer: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"dsr-analyzer: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
