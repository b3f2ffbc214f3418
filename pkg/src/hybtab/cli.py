"""Command-line front end: ``hybtab prove | check-model | fuzz``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence, TextIO

from . import modelio
from .engine import Budget, Mode, Proved, Refuted, Unknown, prove, sequent_formula
from .fuzz import fuzz
from .modelio import ModelFormatError
from .semantics import UnknownAtomError, evaluate
from .syntax import NamespaceError, ParseError, Vocab, parse, print_formula

EXIT = {"Proved": 0, "Refuted": 1, "Unknown": 2}
USAGE_ERROR = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit with 2, which means Unknown here
        self.print_usage(sys.stderr)
        self.exit(USAGE_ERROR, f"{self.prog}: error: {message}\n")


def _positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError(f"must be positive, got {n}")
    return n


def _bounds(text: str) -> tuple[int, int]:
    try:
        a, b = (int(x) for x in text.replace("x", ",").split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected two sizes like 2,2, got {text!r}") from None
    if a < 1 or b < 1:
        raise argparse.ArgumentTypeError("bounds must be positive")
    return a, b


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hybtab", description="Tableau prover for hybrid product modal logics.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    common = _Parser(add_help=False)
    common.add_argument("--mode", choices=[m.value for m in Mode], default="hpl")
    common.add_argument("--budget", type=_positive, default=10_000, help="rule applications (default 10000)")
    common.add_argument("--max-nominals", type=_positive, default=500, help="fresh nominals per dimension")
    common.add_argument("--format", choices=["text", "json"], default="text")
    common.add_argument("--derived-rules", action="store_true",
                        help="expand |, -> and [k] directly instead of desugaring them")

    pr = sub.add_parser("prove", parents=[common], help="prove a formula or a sequent")
    pr.add_argument("formula", nargs="?", help="formula, or a sequent 'A, B => C, D'")
    pr.add_argument("--file", type=Path, help="read the formula from a file")
    pr.add_argument("--emit", choices=["result", "trace", "model", "all"], default="model",
                    help="what to print besides the verdict (default: model)")
    pr.add_argument("--trace-out", type=Path, help="also write the trace as JSON lines to this file")

    cm = sub.add_parser("check-model", help="evaluate a formula in a model file")
    cm.add_argument("model", type=Path)
    cm.add_argument("formula")
    cm.add_argument("--world", nargs=2, metavar=("X", "Y"),
                    help="world pair (default: the model's designated pair)")
    cm.add_argument("--format", choices=["text", "json"], default="text")

    fz = sub.add_parser("fuzz", parents=[common], help="differential test against brute-force search")
    fz.add_argument("--count", type=_positive, default=100)
    fz.add_argument("--seed", type=int, default=0)
    fz.add_argument("--max-size", type=_positive, default=8)
    fz.add_argument("--oracle-bounds", type=_bounds, default=(2, 2))
    fz.add_argument("--invariants", action="store_true", help="also run the structural invariant checks")
    fz.set_defaults(budget=2000)
    return p


# --- sequents --------------------------------------------------------------

def _split_top(text: str, sep: str) -> list[str]:
    """Split on ``sep`` where it is not nested in parentheses."""
    parts, depth, start, k = [], 0, 0, 0
    while k < len(text):
        c = text[k]
        if c == "(":
            depth += 1
        elif c == ")":
            depth -= 1
        elif depth == 0 and text.startswith(sep, k):
            parts.append(text[start:k])
            start = k + len(sep)
            k = start
            continue
        k += 1
    parts.append(text[start:])
    return parts


def parse_input(text: str):
    sides = _split_top(text, "=>")
    if len(sides) == 1:
        return parse(text)
    if len(sides) != 2:
        raise UsageError("a sequent has exactly one '=>'")
    gamma, delta = ([parse(s) for s in _split_top(side, ",") if s.strip()] for side in sides)
    return sequent_formula(gamma, delta)


# --- prove -----------------------------------------------------------------

def result_dict(v, phi, emit: str) -> dict:
    t = v.tableau
    out = {
        "verdict": v.name,
        "mode": t.mode.value,
        "formula": print_formula(phi),
        "root": str(t.root),
        "rule_applications": t.applications,
        "nominals_allocated": {"1": t.allocator.allocated[1], "2": t.allocator.allocated[2]},
    }
    if isinstance(v, Refuted):
        out["branch"] = v.branch
        out["designated"] = list(v.designated)
        if emit in ("model", "all"):
            out["model"] = modelio.to_json(v.model, v.designated)
    if isinstance(v, Unknown):
        out["report"] = v.report
    if emit in ("trace", "all"):
        out["trace"] = t.trace
    return out


def _trace_line(rec: dict) -> str:
    prem = ",".join(map(str, rec["premises"]))
    line = f"  {rec['step']:>4}  b{rec['branch']:<3} {rec['rule']:<8} ({prem})"
    if rec.get("children"):
        line += f" -> b{rec['children'][0]} | b{rec['children'][1]}"
    if rec["fresh"]:
        line += f" fresh {rec['fresh']}"
    if rec["added"]:
        sep = " | " if rec.get("children") else "; "
        line += ": " + sep.join(rec["added"])
    if rec["accessibility"]:
        line += "  [accessibility]"
    return line


def write_text(d: dict, out: TextIO) -> None:
    out.write(f"verdict: {d['verdict']}\n")
    out.write(f"mode: {d['mode']}\n")
    out.write(f"formula: {d['formula']}\n")
    out.write(f"root: {d['root']}\n")
    out.write(f"rule applications: {d['rule_applications']}\n")
    n = d["nominals_allocated"]
    out.write(f"fresh nominals: {n['1']} first-dimension, {n['2']} second-dimension\n")
    if "report" in d:
        r = d["report"]
        out.write(f"budget exhausted: {r['exhausted']}; open branches {r['open_branches']}\n")
    if "designated" in d:
        out.write(f"countermodel branch: {d['branch']}, designated pair ({d['designated'][0]}, {d['designated'][1]})\n")
    if "model" in d:
        m, designated = modelio.from_json(d["model"])
        out.write("countermodel:\n")
        for line in modelio.dump_text(m, designated).splitlines():
            out.write(f"  {line}\n")
    if "trace" in d:
        out.write("trace:\n")
        for rec in d["trace"]:
            out.write(_trace_line(rec) + "\n")


def cmd_prove(args, out: TextIO, err: TextIO) -> int:
    if (args.formula is None) == (args.file is None):
        raise UsageError("give exactly one of a formula argument or --file")
    text = args.formula if args.file is None else args.file.read_text()
    phi = parse_input(text.strip())
    budget = Budget(args.budget, args.max_nominals)
    v = prove(phi, args.mode, budget, args.derived_rules)
    if isinstance(v, Refuted) and evaluate(v.model, v.designated, phi, strict=True):
        raise AssertionError("countermodel failed verification")  # prove() already guards this
    d = result_dict(v, phi, args.emit)
    if args.trace_out:
        args.trace_out.write_text("".join(json.dumps(r, sort_keys=True) + "\n" for r in v.tableau.trace))
    if args.format == "json":
        out.write(json.dumps(d, indent=2, sort_keys=True) + "\n")
    else:
        write_text(d, out)
    return EXIT[v.name]


# --- check-model -----------------------------------------------------------

def load_model(path: Path):
    text = path.read_text()
    if path.suffix == ".json" or text.lstrip().startswith("{"):
        try:
            return modelio.from_json(json.loads(text))
        except json.JSONDecodeError as e:
            raise ModelFormatError(f"invalid JSON: {e}") from None
    return modelio.parse_text(text)


def cmd_check_model(args, out: TextIO, err: TextIO) -> int:
    m, designated = load_model(args.model)
    phi = parse(args.formula)
    if args.world:
        x, y = args.world
        if x not in m.w1 or y not in m.w2:
            raise UsageError(f"({x}, {y}) is not a world pair of the model")
        w = (x, y)
    elif designated is not None:
        w = tuple(designated)
    else:
        raise UsageError("the model has no designated pair; pass --world X Y")
    holds = evaluate(m, w, phi, strict=True)
    if args.format == "json":
        out.write(json.dumps({"formula": print_formula(phi), "world": list(w), "satisfied": holds}) + "\n")
    else:
        out.write(("true" if holds else "false") + "\n")
    return 0 if holds else 1


# --- fuzz ------------------------------------------------------------------

def cmd_fuzz(args, out: TextIO, err: TextIO) -> int:
    rep = fuzz(
        args.mode, args.count, args.seed, args.max_size, Vocab(),
        Budget(args.budget, args.max_nominals),
        args.oracle_bounds, args.invariants, args.derived_rules,
    )
    if args.format == "json":
        out.write(json.dumps(rep.as_dict(), indent=2) + "\n")
    else:
        out.write(rep.summary() + "\n")
        for line in rep.soundness_failures + rep.refutation_failures + rep.invariant_failures:
            out.write(f"  FAIL {line}\n")
    return 0 if rep.failures == 0 else 1


COMMANDS = {"prove": cmd_prove, "check-model": cmd_check_model, "fuzz": cmd_fuzz}


def main(argv: Sequence[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:  # bad arguments (code 3) or --help (code 0)
        return e.code if isinstance(e.code, int) else USAGE_ERROR
    try:
        return COMMANDS[args.command](args, out, err)
    except ParseError as e:
        err.write(f"parse error: {e}\n")
    except UnknownAtomError as e:
        err.write(f"error: {e.args[0]} is not interpreted by the model\n")
    except (NamespaceError, ModelFormatError, UsageError, OSError) as e:
        err.write(f"error: {e}\n")
    return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
