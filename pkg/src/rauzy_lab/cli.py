"""Command-line front end.

Every subcommand prints one line of JSON on standard output.  Exit status
is 0 on success, 2 on a domain error (with an ``{"error": ...}`` object) and
1 on a usage error (message on standard error, nothing on standard output).
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction
from typing import Sequence

from .exact import ContextError, QuadraticNumber, decode_matrix, decode_scalar, encode_matrix
from .iet import DomainError, ReducibleError, StepCapExceeded, TieError, drive, group_products, make_iet
from .induced import NotAdmissible, ReturnOverflow, natural_decomposition
from .instances import preset
from .permutations import Permutation, irreducible_permutations, is_irreducible
from .recovery import InvalidProduct, realize_interval, recover_strict, recover_weak
from .verify import MAX_CYCLE_LENGTH, enumerate_cycles, run_suite

__all__ = ["main", "dispatch", "dumps"]

SUITES = ("sigma", "cycles", "veech", "mainlemma", "signrows", "exclusion", "pf")


class UsageError(Exception):
    pass


class UpstreamError(Exception):
    """The input file is itself an error report from an earlier command."""

    def __init__(self, payload: dict):
        super().__init__(payload.get("message", ""))
        self.payload = payload


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def dumps(obj) -> str:
    """Canonical one-line JSON: insertion-ordered keys, no spaces."""
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":"))


# ---------------------------------------------------------------------------
# flag parsing
# ---------------------------------------------------------------------------

_QUAD = re.compile(
    r"^\s*(?:(?P<a>[+-]?\d+(?:/\d+)?)\s*)?"
    r"(?:(?P<sign>[+-])?\s*(?:(?P<b>\d+(?:/\d+)?)\s*\*?\s*)?sqrt\(\s*(?P<D>\d+)\s*\))?\s*$"
)


def parse_scalar_text(text: str):
    """``"p/q"``, ``"a+b*sqrt(D)"``, ``"sqrt(D)"`` or a JSON scalar."""
    text = text.strip()
    if text.startswith(("{", '"')):
        try:
            return decode_scalar(json.loads(text))
        except (ValueError, TypeError, KeyError, ZeroDivisionError) as e:
            raise UsageError(f"bad scalar {text!r}: {e}") from None
    m = _QUAD.match(text)
    if not text or not m or (m.group("a") is None and m.group("D") is None):
        raise UsageError(f"bad scalar {text!r}")
    try:
        a = Fraction(m.group("a") or 0)
        if m.group("D") is None:
            return a
        b = Fraction(m.group("b") or 1) * (-1 if m.group("sign") == "-" else 1)
        return a + QuadraticNumber(0, b, int(m.group("D")))
    except (ValueError, ZeroDivisionError) as e:
        raise UsageError(f"bad scalar {text!r}: {e}") from None


def _split_top(text: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in "{[(":
            depth += 1
        elif ch in "}])":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def parse_interval(text: str) -> tuple:
    text = text.strip()
    if text.startswith("["):
        try:
            raw = json.loads(text)
            vals = [decode_scalar(x) for x in raw]
        except (ValueError, TypeError, KeyError, ZeroDivisionError) as e:
            raise UsageError(f"bad interval {text!r}: {e}") from None
    else:
        vals = [parse_scalar_text(p) for p in _split_top(text)]
    if len(vals) != 2:
        raise UsageError(f"interval needs two endpoints, got {len(vals)}")
    return tuple(vals)


def parse_permutation(text: str) -> Permutation:
    try:
        raw = json.loads(text) if text.strip().startswith(("[", "{")) else [int(x) for x in text.split(",")]
        return Permutation.from_json(raw) if isinstance(raw, dict) else Permutation(tuple(int(x) for x in raw))
    except (ValueError, TypeError, KeyError) as e:
        raise UsageError(f"bad permutation {text!r}: {e}") from None


def parse_lengths(text: str, n: int) -> tuple:
    if text in ("golden", "silver"):
        return preset(text, n)
    try:
        raw = json.loads(text)
        if not isinstance(raw, list):
            raise TypeError("expected a JSON array")
        vals = tuple(decode_scalar(x) for x in raw)
    except (ValueError, TypeError, KeyError, ZeroDivisionError) as e:
        raise UsageError(f"bad --lambda {text!r}: {e}") from None
    if len(vals) != n:
        raise UsageError(f"--lambda has {len(vals)} entries for n = {n}")
    return vals


def parse_policy(text: str):
    if text in ("right", "left", "alternate"):
        return text
    if text and set(text.upper()) <= {"R", "L"}:
        return text.upper()
    raise UsageError(f"bad --policy {text!r}; use right, left, alternate or a string of R and L")


def parse_cuts(text: str | None):
    if text is None:
        return None
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"bad --cuts {text!r}") from None


def _read_json(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None
    except ValueError as e:
        raise UsageError(f"{path} is not valid JSON: {e}") from None


def _iet_from_args(args):
    pi = parse_permutation(args.pi)
    lengths = parse_lengths(args.lambda_, pi.n)
    return pi, lengths


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_induce(args) -> dict:
    pi, lengths = _iet_from_args(args)
    policy = parse_policy(args.policy)
    cuts = parse_cuts(args.cuts)
    if args.steps < 1:
        raise UsageError("--steps must be at least 1")
    if policy not in ("right", "left", "alternate"):
        # an explicit side string repeats until the requested number of steps
        policy = (policy * (args.steps // len(policy) + 1))[: args.steps]
    trace = drive(make_iet(pi, lengths), policy, args.steps)
    out = trace.to_json()
    if cuts is not None:
        grouped = group_products(trace, cuts)
        out["cuts"] = list(grouped.cuts)
        out["products"] = [encode_matrix(B) for B in grouped.products]
    return out


def cmd_decompose(args) -> dict:
    pi, lengths = _iet_from_args(args)
    J = parse_interval(args.interval)
    T = make_iet(pi, lengths)
    return natural_decomposition(T, J).to_json(T)


def cmd_realize(args) -> dict:
    pi, lengths = _iet_from_args(args)
    J = parse_interval(args.interval)
    T = make_iet(pi, lengths)
    path = realize_interval(T, J)
    if path is None:
        return {"admissible": False, "path": None, "end": None, "A": None}
    return {
        "admissible": True,
        "path": path.tokens(),
        "end": path.end.to_json(),
        "A": encode_matrix(path.product()),
    }


def _products_from_input(obj, cuts):
    if not isinstance(obj, dict):
        raise UsageError("input must be a JSON object")
    if "error" in obj:
        raise UpstreamError(obj)
    try:
        if "steps" in obj:
            n = Permutation.from_json(obj["pi0"]).n
            mats = [decode_matrix(s["A"], integer=True) for s in obj["steps"]]
            if cuts is None and "cuts" in obj:
                cuts = obj["cuts"]
            products = group_products(mats, cuts).products if cuts is not None else mats
            return n, list(products), None
        products = [decode_matrix(B, integer=True) for B in obj["products"]]
        return obj.get("n"), products, obj.get("mode")
    except (KeyError, TypeError, ValueError) as e:
        raise UsageError(f"malformed recovery input: {e}") from None


def cmd_recover(args) -> dict:
    obj = _read_json(args.input)
    n, products, mode = _products_from_input(obj, parse_cuts(args.cuts))
    n = args.n if args.n is not None else n
    mode = args.mode or mode or "strict"
    if n is None:
        raise UsageError("--n is required when the input does not state n")
    if mode not in ("weak", "strict"):
        raise UsageError(f"bad mode {mode!r}")
    if not products:
        raise UsageError("no products to recover from")
    if mode == "weak":
        try:
            report = recover_weak(products, n)
        except ValueError as e:
            raise InvalidProduct(str(e)) from None
    else:
        report = recover_strict(products, n)
    return report.to_json()


def cmd_verify(args) -> dict:
    if args.jobs < 1:
        raise UsageError("--jobs must be at least 1")
    report = run_suite(args.suite, n=args.n, max_len=args.max_len, sides=args.sides, seed=args.seed, jobs=args.jobs)
    report["passed"] = not report["violations"] and not report.get("partial", False)
    return report


def cmd_enumerate(args) -> dict:
    if args.max_len > MAX_CYCLE_LENGTH or args.max_len < 1:
        raise UsageError(f"--max-len must be between 1 and {MAX_CYCLE_LENGTH}")
    if args.pi is not None:
        perms = [parse_permutation(args.pi)]
        if not is_irreducible(perms[0]):
            raise ReducibleError(f"{perms[0]} is reducible")
    else:
        perms = list(irreducible_permutations(args.n))
    classes = []
    total = 0
    for pi in perms:
        cyc = enumerate_cycles(pi, args.max_len, args.sides)
        total += len(cyc)
        classes.append({"pi": list(pi.image), "count": len(cyc), "cycles": [c.tokens() for c in cyc.cycles]})
    return {"max_len": args.max_len, "sides": args.sides, "total": total, "classes": classes}


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="rauzy-lab", description="Exact Rauzy induction and permutation recovery.")
    sub = p.add_subparsers(dest="command", required=True)

    def with_iet(sp):
        sp.add_argument("--pi", required=True, help='permutation, e.g. "[3,2,1]"')
        sp.add_argument("--lambda", dest="lambda_", default="golden",
                        help="golden, silver, or a JSON array of scalars")

    sp = sub.add_parser("induce", help="run extended Rauzy induction")
    with_iet(sp)
    sp.add_argument("--steps", type=int, required=True)
    sp.add_argument("--policy", default="right", help="right, left, alternate, or a string of R/L")
    sp.add_argument("--cuts", help="comma-separated cut indices for grouped products")
    sp.set_defaults(func=cmd_induce)

    for name, func, helptext in (("decompose", cmd_decompose, "natural decomposition of a sub-interval"),
                                 ("realize", cmd_realize, "Rauzy path reaching a sub-interval")):
        sp = sub.add_parser(name, help=helptext)
        with_iet(sp)
        sp.add_argument("--interval", required=True, help='"a,b" with rational or a+b*sqrt(D) endpoints')
        sp.set_defaults(func=func)

    sp = sub.add_parser("recover", help="recover the starting permutation from products")
    sp.add_argument("--n", type=int)
    sp.add_argument("--mode", choices=("weak", "strict"))
    sp.add_argument("--in", dest="input", default="-", help="recovery or trace JSON file ('-' for stdin)")
    sp.add_argument("--cuts", help="group a trace's step matrices at these indices")
    sp.set_defaults(func=cmd_recover)

    sp = sub.add_parser("verify", help="run a verification suite")
    sp.add_argument("--suite", required=True, choices=SUITES)
    sp.add_argument("--n", type=int, default=3)
    sp.add_argument("--max-len", type=int, default=6)
    sp.add_argument("--sides", choices=("right-only", "extended"), default="extended")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--jobs", type=int, default=1)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("enumerate", help="list Rauzy cycles")
    sp.add_argument("--pi")
    sp.add_argument("--n", type=int, default=3)
    sp.add_argument("--max-len", type=int, default=6)
    sp.add_argument("--sides", choices=("right-only", "extended"), default="right-only")
    sp.set_defaults(func=cmd_enumerate)
    return p


def _error_payload(e: Exception) -> dict:
    if isinstance(e, ReducibleError):
        return {"error": "reducible", "message": str(e)}
    if isinstance(e, TieError):
        return {"error": "tie", "step": e.step, "message": str(e)}
    if isinstance(e, ReturnOverflow):
        return {"error": "return_overflow", "message": str(e)}
    if isinstance(e, InvalidProduct):
        return {"error": "invalid_product", "index": e.index, "message": str(e)}
    if isinstance(e, NotAdmissible):
        return {"error": "not_admissible", "message": str(e)}
    if isinstance(e, StepCapExceeded):
        return {"error": "step_cap", "message": str(e)}
    if isinstance(e, DomainError):
        return {"error": "domain", "message": str(e)}
    if isinstance(e, ContextError):
        return {"error": "mixed_fields", "message": str(e)}
    return {"error": "invalid_input", "message": str(e)}


DOMAIN_ERRORS = (ReducibleError, TieError, ReturnOverflow, InvalidProduct, NotAdmissible,
                 StepCapExceeded, DomainError, ContextError)


def dispatch(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        result = args.func(args)
    except UsageError as e:
        print(f"rauzy-lab {args.command}: error: {e}", file=stderr)
        return 1
    except UpstreamError as e:
        stdout.write(dumps(e.payload) + "\n")
        return 2
    except DOMAIN_ERRORS as e:
        stdout.write(dumps(_error_payload(e)) + "\n")
        return 2
    except ValueError as e:
        # remaining value errors come from inputs that parse but make no sense
        # (e.g. a degenerate interval or non-positive lengths)
        stdout.write(dumps(_error_payload(e)) + "\n")
        return 2
    stdout.write(dumps(result) + "\n")
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    return dispatch(argv)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
