"""Command line: ``fdapprox scheme|family|verify|dump``.

Exit codes: 0 pass, 1 a check failed, 2 usage or input error, 3 width cap hit.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import io
from .blockop import BlockOperator
from .errors import FDApproxError, WidthCapExceeded
from .report import Report, digest, norm_table_csv

OUT_ENV = "FDAPPROX_OUT"
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _ints(text: str) -> list:
    try:
        return [int(x) for x in str(text).split(",") if x.strip() != ""]
    except ValueError as exc:
        raise UsageError(f"expected comma separated integers, got {text!r}") from exc


def _params(args):
    from .scheme import validate_params
    K = args.K
    n = _ints(args.n)
    if len(n) == 1:
        n = [0] + n * K
    elif len(n) == K:
        n = [0] + n
    r = _ints(args.r)
    if len(r) == 1:
        r = ([0, 0] + r * (K - 1))[: K + 1]
    return validate_params(n, r, K)


def _scheme(args):
    from .scheme import build_scheme, scheme_from_json
    if getattr(args, "scheme", None):
        return scheme_from_json(_read(args.scheme))
    partition = _ints(args.partition) if args.partition else None
    return build_scheme(_params(args), partition)


def _read(path):
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"no such file: {path}")
    try:
        return json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def _out(args) -> Path:
    out = Path(args.out or os.environ.get(OUT_ENV) or ".")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _config(args) -> dict:
    keys = ("K", "n", "r", "partition", "eps", "seed", "width_cap", "trials", "format")
    return {k: getattr(args, k) for k in keys if hasattr(args, k)}


def _emit(args, rep: Report, name: str) -> int:
    rep.inputs = {"config": _config(args), "inputs": rep.inputs}
    path = io.write_json(_out(args) / f"{name}.json", rep)
    print(f"{rep.suite}: {'pass' if rep.passed else 'FAIL'} ({path})")
    return EXIT_OK if rep.passed else EXIT_FAIL


# ---------------------------------------------------------------------------


def cmd_scheme(args) -> int:
    from .scheme import scheme_from_json, verify_scheme_axioms
    if args.action == "build":
        sch = _scheme(args)
        path = io.write_json(_out(args) / "scheme.json", sch.to_json())
        print(f"m = {list(sch.params.m_seq)}; scheme written to {path}")
        return _emit(args, verify_scheme_axioms(sch), "scheme-report")
    if not args.file:
        raise UsageError("scheme verify needs a file")
    try:
        sch = scheme_from_json(_read(args.file))
    except (KeyError, TypeError) as exc:
        raise UsageError(f"{args.file}: not a scheme dump ({exc})") from exc
    return _emit(args, verify_scheme_axioms(sch), "scheme-report")


def _family(args):
    from .limit import build_family
    if getattr(args, "family", None):
        return io.family_from_json(_read(args.family))
    sch = _scheme(args)
    return build_family(sch, width_cap=args.width_cap)


def cmd_family(args) -> int:
    from .limit import check_directed, check_f_richness
    fam = _family(args)
    out = _out(args)
    data = fam.to_json()
    cond_dir = out / "conditions"
    for entry in data["conditions"]:
        name = "F_" + "-".join(str(x) for x in entry["F"]) + ".json"
        io.write_json(cond_dir / name, entry["condition"])
    io.write_json(out / "family.json", data)
    rep = Report("family", inputs={"scheme-ref": data["scheme-ref"], "l_seq": list(fam.l_seq)})
    rep.extend(fam.report)
    rep.extend(check_directed(fam), "directed:")
    rep.extend(check_f_richness(fam), "f-rich:")
    return _emit(args, rep, "family-report")


def _operators(path) -> list:
    data = _read(path)
    items = data["operators"] if isinstance(data, dict) and "operators" in data else data
    try:
        return [BlockOperator.from_dump(d) for d in items]
    except (TypeError, ValueError, AttributeError) as exc:
        raise UsageError(f"{path}: not a list of operator dumps ({exc})") from exc


def _random_family(rng, size, width):
    vals = np.array([0, 0, 1, -1, 1j, -1j])
    return [BlockOperator({0: width}, {0: rng.choice(vals, size=(width, width))}) for _ in range(size)]


def _suite_irr(args) -> Report:
    from .verify import brute_force_irredundance, irredundance_test
    if args.input:
        fams = [_operators(args.input)]
    else:
        rng = np.random.default_rng(args.seed)
        fams = [_random_family(rng, int(rng.integers(1, 6)), int(rng.integers(1, 7))) for _ in range(args.trials)]
    rep = Report("irr", inputs={"families": len(fams)})
    agree = 0
    for i, fam in enumerate(fams):
        res = irredundance_test(fam)
        ref = brute_force_irredundance(fam)
        ok = res.verdicts == ref["verdicts"]
        agree += ok
        if not ok or args.input:
            rep.add("family", i, {"verdicts": res.verdicts, "oracle": ref["verdicts"],
                                  "irredundant": res.irredundant, "marginal": res.marginal}, None, ok)
    rep.add("agreement", None, agree, None, agree == len(fams))
    return rep


def _dichotomy_input(args):
    from .limit import build_family
    from .verify import template_projection
    if args.input:
        return _operators(args.input)
    fam = _family(args) if getattr(args, "family", None) else build_family(_scheme(args), width_cap=args.width_cap)
    top = fam.top
    k = next((k for k, v in sorted(fam.kinds.items()) if v == "type3"), None)
    vec = fam.vectors[k][1] if k is not None else np.array([1.0, 1.0])
    rank = k if k is not None else 1
    ops = []
    for g in fam.scheme.levels[rank]:
        q = template_projection(fam.conditions[g].shape, g[-1], vec)
        ops.append(fam.embedding(top, g).evaluate(q))
    return ops


def cmd_verify(args) -> int:
    from . import verify as V
    suite = args.suite
    if suite == "onehalf":
        return _emit(args, V.onehalf_suite(), "onehalf")
    if suite == "stampfli":
        return _emit(args, V.stampfli_suite(args.trials, args.seed), "stampfli")
    if suite == "irr":
        return _emit(args, _suite_irr(args), "irr")
    if suite == "main":
        fam = _family(args)
        rep = V.theorem_main_suite(fam, args.eps)
        io.write_json(_out(args) / "main-operators.json", rep.artifacts)
        return _emit(args, rep, "main")
    if suite == "dichotomy":
        ops = _dichotomy_input(args)
        g = V.dichotomy_scan(ops, args.eps)
        rep = Report("dichotomy", inputs={"operators": digest([a.to_dump() for a in ops])})
        sym = bool(np.array_equal(g.norms, g.norms.T))
        rep.add("symmetric", None, None, None, sym)
        rep.add("graph", None, g.to_json())
        if args.format == "csv":
            path = _out(args) / "dichotomy-norms.csv"
            path.write_text(norm_table_csv([str(i) for i in g.vertices], g.norms))
        return _emit(args, rep, "dichotomy")
    raise UsageError(f"unknown suite {suite!r}")


def cmd_dump(args) -> int:
    from .limit import materialize_window
    fam = _family(args)
    out = _out(args)
    if args.what == "window":
        w = materialize_window(fam, _ints(args.columns) if args.columns else None, args.width)
        data = {"columns": list(w.columns), "widths": {str(c): x for c, x in w.widths.items()},
                "generators": [{"xi": xi, "m": m, "n": n, "operator": a.to_dump()}
                               for (xi, m, n), a in sorted(w.generators.items())]}
        path = io.write_json(out / "window.json", data)
    elif args.what == "scheme":
        path = io.write_json(out / "scheme.json", fam.scheme.to_json())
    else:
        f = tuple(_ints(args.F)) if args.F else fam.top
        if f not in fam.conditions:
            raise UsageError(f"{list(f)} is not a member of the scheme")
        path = io.write_json(out / ("F_" + "-".join(map(str, f)) + ".json"), io.condition_to_json(fam.conditions[f]))
    print(f"written {path}")
    return EXIT_OK


# ---------------------------------------------------------------------------


def _common(p: argparse.ArgumentParser):
    p.add_argument("--K", "-K", type=int, default=3, help="top rank")
    p.add_argument("--n", default="3", help="n_k for k >= 1, one value or a comma list")
    p.add_argument("--r", default="0", help="r_0..r_K as a comma list, or one value for k >= 2")
    p.add_argument("--partition", default=None, help="class per decomposition rank, e.g. 1,3,2")
    p.add_argument("--eps", type=float, default=0.1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--width-cap", dest="width_cap", type=int, default=1024)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--out", default=None, help=f"output directory (default ${OUT_ENV} or .)")
    p.add_argument("--format", choices=("json", "csv"), default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fdapprox", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("scheme", help="build or verify a construction scheme")
    ps.add_argument("action", choices=("build", "verify"))
    ps.add_argument("file", nargs="?")
    _common(ps)

    pf = sub.add_parser("family", help="build the family of conditions")
    pf.add_argument("action", choices=("build",))
    pf.add_argument("--scheme", default=None, help="scheme JSON (default: build from flags)")
    _common(pf)

    pv = sub.add_parser("verify", help="run a verification suite")
    pv.add_argument("suite")
    pv.add_argument("--family", default=None, help="family JSON (default: build from flags)")
    pv.add_argument("--scheme", default=None)
    pv.add_argument("--input", default=None, help="operator list JSON for irr / dichotomy")
    _common(pv)

    pd = sub.add_parser("dump", help="write a condition, window or scheme")
    pd.add_argument("what", choices=("condition", "window", "scheme"))
    pd.add_argument("--family", default=None)
    pd.add_argument("--scheme", default=None)
    pd.add_argument("--F", default=None, help="member as a comma list (default: top)")
    pd.add_argument("--columns", default=None)
    pd.add_argument("--width", type=int, default=None)
    _common(pd)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = {"scheme": cmd_scheme, "family": cmd_family, "verify": cmd_verify, "dump": cmd_dump}[args.command]
    try:
        return handler(args)
    except WidthCapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FDApproxError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE if isinstance(exc, ValueError) else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
