"""Command line entry point: ``dserkit verify ...``.

Exit codes: 0 when no case is MatchesNeither, 1 otherwise, 2 on a bad
configuration (including a rank too small for a requested lemma).
"""

from __future__ import annotations

import argparse
import datetime as _dt
import json
import os
import sys
from dataclasses import dataclass
from typing import Mapping, Sequence

from . import __version__
from .errors import ConfigError
from .identities import (FAULTS, MODES, LemmaId, Report, SuiteConfig, enumerate_cases, parse_lemma,
                         random_instance, verify_suite)
from .ring import Modular, Rationals, Ring, is_prime

__all__ = ["Config", "parse_config", "random_instance", "run", "to_json", "to_markdown", "main", "REPORT_SCHEMA"]

_COUNT_KEYS = ["predicate", "cases", "matches_both", "proof_only", "statement_only", "neither", "statement_absent"]

REPORT_SCHEMA = {
    "type": "object",
    "required": ["meta", "lemmas", "failures", "discrepancies"],
    "properties": {
        "meta": {
            "type": "object",
            "required": ["config", "version", "timestamp"],
            "properties": {"config": {"type": "object"}, "version": {"type": "string"},
                           "timestamp": {"type": "string"}},
        },
        "lemmas": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "branches"],
                "properties": {
                    "id": {"enum": [x.value for x in LemmaId]},
                    "branches": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "required": _COUNT_KEYS,
                            "properties": {k: ({"type": "string"} if k == "predicate"
                                               else {"type": "integer", "minimum": 0}) for k in _COUNT_KEYS},
                        },
                    },
                },
            },
        },
        "failures": {"type": "array", "items": {"type": "object", "required": ["lemma", "branch", "lhs"]}},
        "discrepancies": {"type": "array", "items": {"type": "object", "required": ["lemma", "branch", "status"]}},
    },
}


@dataclass(frozen=True)
class Config:
    suite: SuiteConfig
    format: str = "json"
    out: str | None = None


def parse_ring(text: str) -> Ring:
    t = text.strip().lower()
    if t in ("q", "qq", "rationals", "rational"):
        return Rationals()
    if t.startswith("zmod:"):
        try:
            p = int(t[5:])
        except ValueError:
            raise ConfigError(f"bad modulus in {text!r}") from None
        if p < 3 or not is_prime(p):
            raise ConfigError(f"modulus {p} must be an odd prime")
        return Modular(p)
    raise ConfigError(f"unknown ring {text!r} (use zmod:<odd prime> or rationals)")


def parse_lemmas(text: str) -> tuple:
    parts = [x.strip() for x in text.split(",") if x.strip()]
    if not parts:
        raise ConfigError("empty lemma filter")
    if any(x.lower() == "all" for x in parts):
        return tuple(LemmaId)
    out = []
    for x in parts:
        try:
            lid = parse_lemma(x)
        except ValueError:
            raise ConfigError(f"unknown lemma {x!r}") from None
        if lid not in out:
            out.append(lid)
    return tuple(sorted(out, key=list(LemmaId).index))


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(f"{message}\n{self.format_usage()}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="dserkit", description="Verify commutator identities among elementary orthogonal "
                                             "transformations by exact computation.")
    p.add_argument("--version", action="version", version=f"dserkit {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    v = sub.add_parser("verify", help="check identities and emit a report")
    v.add_argument("--lemma", default="all", help="comma separated ids (L01, C04, ...) or 'all'")
    v.add_argument("--ring", default="zmod:10007", help="zmod:<odd prime> or rationals")
    v.add_argument("--m", type=int, default=4, help="rank of P")
    v.add_argument("--n", type=int, default=3, help="rank of Q")
    v.add_argument("--seed", type=int, default=1)
    v.add_argument("--trials", type=int, default=50, help="random instances per branch")
    v.add_argument("--mode", choices=MODES, default="random")
    v.add_argument("--format", choices=("json", "markdown"), default="json")
    v.add_argument("--out", help="write the report here instead of stdout")
    v.add_argument("--inject-fault", choices=FAULTS, help="corrupt a closed form (negative control)")
    return p


def parse_config(argv: Sequence[str], env: Mapping[str, str] | None = None) -> Config:
    env = os.environ if env is None else env
    args = build_parser().parse_args(list(argv))
    ring = parse_ring(args.ring)
    lemmas = parse_lemmas(args.lemma)
    if args.m < 1 or args.n < 1:
        raise ConfigError("m and n must be positive")
    if not 0 <= args.seed < 2 ** 64:
        raise ConfigError("seed must be a 64-bit unsigned integer")
    if args.mode != "symbolic" and args.trials < 1:
        raise ConfigError("trials must be >= 1 in random mode")
    threads = env.get("DSER_THREADS", "1") or "1"
    try:
        threads = max(1, int(threads))
    except ValueError:
        raise ConfigError(f"DSER_THREADS must be an integer, got {threads!r}") from None
    for lid in lemmas:
        enumerate_cases(args.m, args.n, lid)  # RankTooSmall names the unreachable branches
    suite = SuiteConfig(ring=ring, m=args.m, n=args.n, seed=args.seed, trials=args.trials, lemmas=lemmas,
                        mode=args.mode, threads=threads, fault=args.inject_fault)
    return Config(suite, args.format, args.out)


def report_dict(report: Report, timestamp: str | None = None) -> dict:
    if timestamp is None:
        timestamp = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
    return {
        "meta": {"config": report.config.echo(), "version": __version__, "timestamp": timestamp},
        "lemmas": report.lemmas,
        "failures": report.failures,
        "discrepancies": report.discrepancies,
    }


def to_json(report: Report, timestamp: str | None = None) -> str:
    return json.dumps(report_dict(report, timestamp), indent=2) + "\n"


def to_markdown(report: Report, timestamp: str | None = None) -> str:
    d = report_dict(report, timestamp)
    cfg = d["meta"]["config"]
    lines = ["# dserkit verification report", "",
             f"- version: {d['meta']['version']}",
             f"- timestamp: {d['meta']['timestamp']}",
             f"- ring: {cfg['ring']}, m={cfg['m']}, n={cfg['n']}, seed={cfg['seed']}, "
             f"trials={cfg['trials']}, mode={cfg['mode']}"]
    if cfg["fault"]:
        lines.append(f"- injected fault: {cfg['fault']}")
    lines += ["", "| lemma | branch | cases | both | proof only | statement only | neither | statement absent |",
              "|---|---|---|---|---|---|---|---|"]
    for lem in d["lemmas"]:
        for b in lem["branches"]:
            lines.append(f"| {lem['id']} | {b['predicate']} | {b['cases']} | {b['matches_both']} | "
                         f"{b['proof_only']} | {b['statement_only']} | {b['neither']} | {b['statement_absent']} |")
    if d["discrepancies"]:
        lines += ["", "## Discrepancies (first example each)", ""]
        for x in d["discrepancies"]:
            idx = ", ".join(f"{k}={v}" for k, v in x["indices"].items())
            lines.append(f"- {x['lemma']} [{x['branch']}] {x['status']} ({x['mode']}): {idx}")
    lines += ["", "## Failures", ""]
    if not d["failures"]:
        lines.append("none")
    for f in d["failures"]:
        idx = ", ".join(f"{k}={v}" for k, v in f["indices"].items())
        lines.append(f"- {f['lemma']} [{f['branch']}] {idx} ({f['mode']}, trial {f['trial']}); "
                     "matrix dumps are in the JSON report")
    return "\n".join(lines) + "\n"


def run(config: Config, stdout=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    report = verify_suite(config.suite)
    text = to_json(report) if config.format == "json" else to_markdown(report)
    if config.out:
        with open(config.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return 1 if report.neither else 0


def main(argv: Sequence[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        config = parse_config(argv)
        return run(config)
    except ConfigError as exc:
        print(f"dserkit: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
