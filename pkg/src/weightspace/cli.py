"""Command-line interface.

Exit codes: 0 success, 1 malformed input, 2 hypothesis violation,
3 numerical non-convergence.
"""

import argparse
import csv
import json
import math
import sys

import numpy as np

from . import functionals, harness, lacunary
from .errors import SpecError, WeightspaceError
from .functions import FunctionSpec, make_function
from .quadrature import QuadratureConfig
from .weight_classes import classify
from .weights import WeightSpec, make_weight

NORMS = ("J", "H", "S", "A", "D", "I", "hardy", "coeff")
TAIL_RADII = (0.0, 0.5, 0.9, 0.99, 0.999, 1 - 1e-4, 1 - 1e-6, 1 - 1e-8)
MOMENT_ORDERS = (0.0, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0, 1000.0)


# ----- output -------------------------------------------------------------------------


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    return obj


def dumps(obj):
    """JSON with floats at 17 significant digits; non-finite floats become null."""
    obj = _plain(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(k)}: {dumps(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, list):
        return "[" + ", ".join(dumps(v) for v in obj) + "]"
    if isinstance(obj, float):
        return format(obj, ".17g") if math.isfinite(obj) else "null"
    return json.dumps(obj)


def _fmt(x):
    # shortest round-trip form; JSON keeps 17 digits
    return repr(float(x)) if isinstance(x, float) else str(x)


def _emit(args, payload, rows, header, text):
    if args.json:
        print(dumps(payload))
    elif args.csv:
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(_plain(v)) if not isinstance(v, (dict, list)) else dumps(v)
                        for v in row])
    else:
        print(text)


# ----- commands -----------------------------------------------------------------------


def _cfg(args):
    cfg = QuadratureConfig.default()
    return cfg if args.tol is None else cfg.with_tol(args.tol)


def _weight(text, cfg):
    return make_weight(WeightSpec.parse(text), cfg=cfg)


def cmd_weight_info(args):
    cfg = _cfg(args)
    w = _weight(args.spec, cfg)
    tails = [{"r": r, "tail": float(w.tail(r))} for r in TAIL_RADII]
    moments = [{"x": x, "moment": float(w.moment(x))} for x in MOMENT_ORDERS]
    payload = {"weight": w.spec.to_dict(), "label": w.label, "tails": tails,
               "moments": moments}
    rows = [("tail", t["r"], t["tail"]) for t in tails] + \
        [("moment", m["x"], m["moment"]) for m in moments]
    lines = [w.label, f"{'r':>22}  tail"] + [f"{_fmt(t['r']):>22}  {_fmt(t['tail'])}"
                                             for t in tails]
    lines += [f"{'x':>22}  moment"] + [f"{_fmt(m['x']):>22}  {_fmt(m['moment'])}"
                                       for m in moments]
    _emit(args, payload, rows, ("kind", "arg", "value"), "\n".join(lines))


def cmd_classify(args):
    w = _weight(args.spec, _cfg(args))
    c = classify(w)
    rows = []
    lines = [c.weight]
    for name, v in c.classes.items():
        rows.append((name, v.verdict))
        detail = ", ".join(f"{k}: {x}" for k, x in v.characterizations.items())
        lines.append(f"{name}: {v.verdict} ({detail})")
    for k, v in c.consistency.items():
        lines.append(f"{k}: {v}")
    _emit(args, c.to_dict(), rows, ("class", "verdict"), "\n".join(lines))


def _norm(args, cfg):
    f = make_function(FunctionSpec.parse(args.function))
    name = args.functional
    if name == "hardy":
        return functionals.hardy_norm(f, args.p, cfg)
    if args.weight is None:
        raise SpecError(f"{name} needs a weight spec")
    w = _weight(args.weight, cfg)
    up = args.upper
    if name == "J":
        return functionals.j_functional(f, args.p, w, cfg, upper=up)
    if name == "H":
        return functionals.h_class_norm(f, args.p, w, cfg, upper=up)
    if name == "S":
        return functionals.s_class_norm(f, args.p, w, cfg, upper=up)
    if name == "A":
        return functionals.bergman_norm(f, args.p, w, cfg, upper=up)
    if name == "D":
        return functionals.dirichlet_norm(f, args.p, w, cfg, upper=up)
    if name == "I":
        return functionals.i_functional(f, args.p, args.q, w, cfg, upper=up)
    return functionals.coeff_functional(f, args.p, w, args.variant, cfg)


def cmd_norm(args):
    res = _norm(args, _cfg(args))
    row = (args.functional, args.function, args.weight or "", args.p, res.value,
           res.err_est, res.method)
    payload = {"functional": args.functional, **res.to_dict()}
    _emit(args, payload, [row],
          ("functional", "function", "weight", "p", "value", "err_est", "method"),
          _fmt(res.value))


def _load_config(path):
    if path is None:
        return {}
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise SpecError(f"cannot read config {path}: {exc}") from None
    if not isinstance(data, dict):
        raise SpecError("config must be a JSON object")
    return data


def cmd_verify(args):
    config = _load_config(args.config)
    for key in ("p", "q", "pair", "tol"):
        v = getattr(args, key)
        if v is not None:
            config[key] = v
    rep = harness.run_comparability(args.experiment, config)
    rows = [(t["function_label"], t["weight_label"], t["p"], t["q"], t["lhs"], t["rhs"],
             t["ratio"]) for t in rep.tuples]
    lines = [f"{rep.experiment} [{rep.pair}]  lhs: {rep.lhs}  rhs: {rep.rhs}"]
    lines += [f"  {a:<12} {b:<10} p={_fmt(p)} q={_fmt(q)}  ratio={_fmt(r)}"
              for a, b, p, q, _, _, r in rows]
    lines.append(f"min_ratio={_fmt(rep.min_ratio)} max_ratio={_fmt(rep.max_ratio)} "
                 f"spread={_fmt(rep.spread)} skipped={len(rep.skipped)} "
                 f"excluded={len(rep.excluded)} violations={len(rep.violations)}")
    _emit(args, rep.to_dict(), rows,
          ("function", "weight", "p", "q", "lhs", "rhs", "ratio"), "\n".join(lines))


def cmd_counterexample(args):
    rep = harness.run_divergence(args.scenario, args.p, args.epsilons, _cfg(args),
                                 alpha=args.alpha)
    rows = list(zip(rep.epsilons, rep.lhs_partial, rep.rhs_partial, rep.ratio_trend))
    lines = [f"{rep.scenario}  p={_fmt(rep.config['p'])} alpha={_fmt(rep.config['alpha'])}",
             f"  lhs: {rep.lhs}", f"  rhs: {rep.rhs}"]
    lines += [f"  eps={_fmt(e):<8} ratio={_fmt(r)}" for e, _, _, r in rows]
    lines.append(f"verdict: {rep.verdict} (growth {_fmt(rep.growth)})")
    _emit(args, rep.to_dict(), rows, ("epsilon", "lhs", "rhs", "ratio"), "\n".join(lines))


def cmd_lacunary(args):
    dec = lacunary.decompose(_weight(args.spec, _cfg(args)), args.K, args.depth)
    rows = [(n, dec.r[n], dec.M[n], b.start, b.stop) for n, b in enumerate(dec.blocks)]
    lines = [f"{dec.weight_label}  K={_fmt(dec.K)} depth={dec.depth}"]
    for n, b in enumerate(dec.blocks):
        body = "empty" if len(b) == 0 else (f"{{{b.start}..{b.stop - 1}}}"
                                           if len(b) > 2 else
                                           "{" + ",".join(str(k) for k in b) + "}")
        lines.append(f"  I({n}) = {body}")
    _emit(args, dec.to_dict(), rows, ("n", "r", "M", "start", "stop"), "\n".join(lines))


# ----- parser -------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _epsilons(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed epsilon list {text!r}") from None


def build_parser():
    common = _Parser(add_help=False)
    out = common.add_mutually_exclusive_group()
    out.add_argument("--json", action="store_true", help="print JSON")
    out.add_argument("--csv", action="store_true", help="print CSV rows")
    common.add_argument("--tol", type=float, default=None, help="relative quadrature tolerance")

    parser = _Parser(prog="weightspace", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("weight-info", parents=[common], help="tails and moments of a weight")
    p.add_argument("spec")
    p.set_defaults(run=cmd_weight_info)

    p = sub.add_parser("classify", parents=[common], help="class membership verdicts")
    p.add_argument("spec")
    p.set_defaults(run=cmd_classify)

    p = sub.add_parser("norm", parents=[common], help="a norm or functional of a function")
    p.add_argument("functional", choices=NORMS)
    p.add_argument("function")
    p.add_argument("weight", nargs="?")
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--q", type=float, default=2.0)
    p.add_argument("--upper", type=float, default=1.0)
    p.add_argument("--variant", choices=functionals.VARIANTS, default="omega_k")
    p.set_defaults(run=cmd_norm)

    p = sub.add_parser("verify", parents=[common], help="comparability experiment")
    p.add_argument("experiment", choices=sorted(harness.EXPERIMENTS))
    p.add_argument("--config", help="JSON file with the same field names as the flags")
    p.add_argument("--p", type=float, action="append", help="repeatable")
    p.add_argument("--q", type=float, action="append", help="repeatable")
    p.add_argument("--pair")
    p.set_defaults(run=cmd_verify)

    p = sub.add_parser("counterexample", parents=[common], help="divergence scenario")
    p.add_argument("scenario", choices=sorted(harness.SCENARIOS))
    p.add_argument("--p", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--epsilons", type=_epsilons, help="comma-separated, decreasing")
    p.set_defaults(run=cmd_counterexample)

    p = sub.add_parser("lacunary", parents=[common], help="block decomposition of a weight")
    p.add_argument("spec")
    p.add_argument("--K", type=float, default=2.0)
    p.add_argument("--depth", type=int)
    p.set_defaults(run=cmd_lacunary)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.run(args)
    except WeightspaceError as exc:
        print(f"weightspace: {exc}", file=sys.stderr)
        if exc.exit_code == 1:
            parser.print_usage(sys.stderr)
        return exc.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
