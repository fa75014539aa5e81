"""Command-line front end.

Exit codes: 0 verified or constructed, 1 negative mathematical verdict,
2 usage or input error, 3 internal inconsistency (a theorem-violating
finding, which means a bug).
"""

from __future__ import annotations

import argparse
import json
import sys

from . import constructions as cons
from . import mi_space, numeric_oracle, serialize
from .errors import InjectivityError, IsocalcError, NotIsometryError, NotMIError, WoldUndecided
from .op_algebra import Operator, PrefixOperator
from .wold import default_bound, wold_decompose

OK, NEGATIVE, USAGE, INTERNAL = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE, f"{self.prog}: error: {message}\n")


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--bound", type=int, default=None,
                   help="prefix bound for prefix-tier results (default: $ISOCALC_BOUND or 4096)")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--truncation", type=int, default=64, help="truncation size N")
    p.add_argument("--out", default=None, help="write the report here instead of stdout")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="isocalc", description="Exact calculus for spaces of isometry multiples.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    common = [_common()]
    src = "path, '-' for stdin, or inline JSON"

    p = sub.add_parser("make-shift", parents=common, help="shift with a given wandering index set")
    p.add_argument("wandering", help=f"index set ({src})")
    p = sub.add_parser("make-range-shift", parents=common, help="shift with a given range index set")
    p.add_argument("range", help=f"index set ({src})")
    p = sub.add_parser("make-isometry", parents=common, help="isometry with given unitary part and range")
    p.add_argument("unitary", help=f"unitary spec ({src})")
    p.add_argument("range", help=f"index set ({src})")
    p = sub.add_parser("make-cuntz", parents=common, help="Cuntz generators S_0..S_{n-1}")
    p.add_argument("n", type=int)
    for name, helptext in (("check-mi", "decide whether generators span an MI-space"),
                           ("gram", "Gram matrix and orthogonal basis"),
                           ("audit", "structural self-test of an MI-space")):
        p = sub.add_parser(name, parents=common, help=helptext)
        p.add_argument("generators", help=f"operator list ({src})")
    p = sub.add_parser("wold", parents=common, help="Wold decomposition of a basis-map isometry")
    p.add_argument("operator", help=f"operator ({src})")
    p = sub.add_parser("commutator-check", parents=common, help="verify the Commutator Identity")
    p.add_argument("a")
    p.add_argument("b")
    p = sub.add_parser("truncate", parents=common, help="dense N x N truncation")
    p.add_argument("operator")
    p = sub.add_parser("cross-validate", parents=common, help="compare AB with truncated products")
    p.add_argument("a")
    p.add_argument("b")
    return parser


def _cert(cert) -> object:
    return "exact" if cert == "exact" else {"prefix": cert[1]}


def _op(source, bound):
    return serialize.operator_from_json(serialize.load_json(source), bound=bound)


def _exact(op, what: str) -> Operator:
    if isinstance(op, PrefixOperator):
        raise ValueError(f"{what} needs an exact-tier operator")
    return op


def _gens(source, bound):
    gens = serialize.operators_from_json(serialize.load_json(source), bound=bound)
    return [_exact(g, "this command") for g in gens]


def run(args) -> tuple[dict, int]:
    bound = args.bound or default_bound()
    cmd = args.command
    if cmd == "make-shift":
        op = cons.make_shift_with_wandering(serialize.index_set_from_json(serialize.load_json(args.wandering)), bound)
        return {"operator": serialize.operator_to_json(op), "certificate": _tier(op, bound)}, OK
    if cmd == "make-range-shift":
        op = cons.make_shift_with_range(serialize.index_set_from_json(serialize.load_json(args.range)), bound)
        return {"operator": serialize.operator_to_json(op), "certificate": _tier(op, bound)}, OK
    if cmd == "make-isometry":
        u = serialize.unitary_from_json(serialize.load_json(args.unitary))
        k = serialize.index_set_from_json(serialize.load_json(args.range))
        op = cons.make_isometry_with_parts(u, k, bound)
        return {"operator": serialize.operator_to_json(op), "certificate": _tier(op, bound)}, OK
    if cmd == "make-cuntz":
        ops = cons.make_cuntz(args.n)
        return {"operators": [serialize.operator_to_json(o) for o in ops], "certificate": "exact"}, OK
    if cmd in ("check-mi", "gram", "audit"):
        report = mi_space.check_mi_space(_gens(args.generators, bound))
        out = report.to_json()
        if not report.is_mi:
            return out, NEGATIVE
        if cmd == "gram":
            out["orthogonal_basis"] = [serialize.operator_to_json(v) for v in mi_space.orthogonalize(report)]
        if cmd == "audit":
            findings = mi_space.structural_audit(report)
            out["findings"] = [f.to_json() for f in findings]
            if any(f.internal for f in findings):
                out["verdict"] = "internal-inconsistency"
                return out, INTERNAL
        return out, OK
    if cmd == "wold":
        res = wold_decompose(_op(args.operator, bound), bound)
        return res.to_json(), OK
    if cmd == "commutator-check":
        a = _exact(_op(args.a, bound), "commutator-check")
        b = _exact(_op(args.b, bound), "commutator-check")
        ci = mi_space.commutator_identity_check(a, b)
        cc = mi_space.commutation_check(a, b)
        out = {
            "verdict": ci.code,
            "lhs": serialize.operator_to_json(ci.lhs),
            "rhs_scalar": ci.rhs_scalar.to_json(),
            "commutator": serialize.operator_to_json(ci.commutator),
            "commute": cc.commute,
            "dependent": cc.dependent,
            "certificate": "exact",
        }
        return out, OK if ci.holds and cc.consistent else INTERNAL
    if cmd == "truncate":
        t = numeric_oracle.truncate(_op(args.operator, bound), args.truncation)
        out = {"size": t.size, "safe_columns": sorted(t.safe_columns),
               "entries": [[int(i), int(j), float(t.matrix[i, j].real), float(t.matrix[i, j].imag)]
                           for i, j in zip(*t.matrix.nonzero())]}
        return out, OK
    if cmd == "cross-validate":
        a = _exact(_op(args.a, bound), "cross-validate")
        b = _exact(_op(args.b, bound), "cross-validate")
        cv = numeric_oracle.cross_validate(a, b, args.truncation)
        out = {"size": cv.size, "max_diff": cv.max_diff, "columns": len(cv.columns),
               "verdict": "match" if cv.ok else "mismatch"}
        return out, OK if cv.ok else INTERNAL
    raise AssertionError(cmd)


def _tier(op, bound):
    return "exact" if isinstance(op, Operator) else {"prefix": bound}


def render_text(obj, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.append(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {json.dumps(v)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)):
                lines.append(f"{pad}-")
                lines.append(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}- {json.dumps(v)}")
    else:
        lines.append(f"{pad}{json.dumps(obj)}")
    return "\n".join(lines)


def _emit(out: dict, args) -> None:
    text = json.dumps(out, indent=2) if args.format == "json" else render_text(out)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.bound is not None and args.bound < 1:
        print("isocalc: error: --bound must be positive", file=sys.stderr)
        return USAGE
    if args.truncation < 1:
        print("isocalc: error: --truncation must be positive", file=sys.stderr)
        return USAGE
    try:
        out, code = run(args)
    except InjectivityError as exc:
        out, code = {"error": "injectivity", "message": str(exc), "witness": exc.witness}, USAGE
    except (NotMIError, NotIsometryError) as exc:
        out = {"verdict": "MI-VIOLATION" if isinstance(exc, NotMIError) else "not-isometry",
               "message": str(exc), "witness": getattr(exc, "witness", None)}
        code = NEGATIVE
    except WoldUndecided as exc:
        out, code = {"verdict": "undecided", "message": str(exc)}, NEGATIVE
    except (IsocalcError, ValueError) as exc:
        out, code = {"error": "input", "message": str(exc)}, USAGE
    _emit(out, args)
    return code


if __name__ == "__main__":
    sys.exit(main())
