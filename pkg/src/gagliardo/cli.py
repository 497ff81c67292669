"""Command-line entry point.

Exit codes: 0 when the verdict passes, 2 when it fails, 1 on an error.

Object specs use ``name:key=value:key=value``; values with commas become
tuples, e.g. ``bump:center=0.5,0.5:width=0.2`` or ``strip:k=1:l=2``.
"""

import argparse
import csv
import json
import math
import sys

from . import __version__
from .domains import Box, Interval, Strip, l_shape, unit_square
from .experiments import REGISTRY, ExperimentSpec, list_experiments, run_experiment
from .functions import TestFunction
from .kernels import ExponentPair, FlatKernel, Kernel, KernelProfile, audit_kernel
from .seminorm import seminorm_set
from .whitney import verify_whitney, whitney_decompose

EXIT_PASS, EXIT_ERROR, EXIT_FAIL = 0, 1, 2


def _value(text):
    if "," in text:
        return tuple(_value(t) for t in text.split(",") if t)
    for conv in (int, float):
        try:
            return conv(text)
        except ValueError:
            pass
    return text


def parse_object(text):
    """``"name:k=v:k=v"`` -> (name, {k: v})."""
    name, *parts = text.split(":")
    kw = {}
    for part in parts:
        if "=" not in part:
            raise ValueError(f"expected key=value in {text!r}, got {part!r}")
        k, v = part.split("=", 1)
        kw[k.strip()] = _value(v.strip())
    return name.strip(), kw


def make_domain(text):
    name, kw = parse_object(text)
    if name == "interval":
        return Interval(kw.get("a", 0.0), kw.get("b", 1.0))
    if name == "square":
        return unit_square()
    if name == "box":
        lo, hi = kw["lo"], kw["hi"]
        lo, hi = (lo if isinstance(lo, tuple) else (lo,)), (hi if isinstance(hi, tuple) else (hi,))
        return Box(list(zip(lo, hi)))
    if name in ("lshape", "l_shape"):
        return l_shape()
    if name == "strip":
        return Strip(kw.get("k", 1), kw.get("l", 1))
    raise ValueError(f"unknown domain {name!r}: use interval, square, box, lshape or strip")


def make_profile(text):
    name, kw = parse_object(text)
    builders = {"power": KernelProfile.power, "stable": KernelProfile.stable,
                "log1p_power": KernelProfile.log1p_power, "constant_one": KernelProfile.constant_one,
                "inv_log_power": KernelProfile.inv_log_power, "tabulated": KernelProfile.tabulated}
    if name not in builders:
        raise ValueError(f"unknown profile {name!r}: use one of {sorted(builders)}")
    return builders[name](**kw)


def make_kernel(text, d, q):
    if text.split(":")[0] == "flat":
        _, kw = parse_object(text)
        return FlatKernel(d, float(kw.get("value", 1.0)))
    return Kernel(d, q, make_profile(text))


def make_function(text, d):
    name, kw = parse_object(text)
    if not hasattr(TestFunction, name) or name.startswith("_") or name in ("scaled", "shifted", "kinks"):
        raise ValueError(f"unknown test function {name!r}")
    ctor = getattr(TestFunction, name)
    if name in ("power_gamma", "strip_ramp", "coordinate", "product", "constant"):
        kw.setdefault("d", d)
    return ctor(**kw)


def read_config(path):
    """Flat ``key=value`` file; blank lines and ``#`` comments are skipped."""
    out = {}
    with open(path) as fh:
        for n, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{n}: expected key=value")
            k, v = line.split("=", 1)
            out[k.strip()] = v.strip()
    return out


def _json_dump(obj):
    def default(o):
        if hasattr(o, "item"):
            return o.item()
        if hasattr(o, "tolist"):
            return o.tolist()
        raise TypeError(type(o))
    return json.dumps(obj, indent=2, default=default, allow_nan=True)


# ---------------------------------------------------------------------------
# subcommands


def cmd_audit(args):
    kernel = Kernel(args.d, args.q, make_profile(args.profile))
    rep = audit_kernel(kernel, ExponentPair(args.p, args.q), diam=args.diam, k_max=args.k_max)
    if args.format == "csv":
        w = csv.writer(sys.stdout, lineterminator="\n")
        for row in rep.csv_rows():
            w.writerow([format(v, ".17g") if isinstance(v, float) else v for v in row])
    else:
        print(rep.to_json(indent=2))
    return EXIT_PASS if rep.passed else EXIT_FAIL


def cmd_whitney(args):
    dom = make_domain(args.domain)
    window = None
    if args.window:
        vals = [float(v) for v in args.window.split(",")]
        window = list(zip(vals[0::2], vals[1::2]))
    dec = whitney_decompose(dom, max_depth=args.depth, window=window)
    rep = verify_whitney(dec)
    if args.out:
        dec.to_jsonl(args.out)
    print(_json_dump({"summary": dec.summary(), "violations": rep.to_dict()}))
    return EXIT_PASS if rep.ok else EXIT_FAIL


def cmd_seminorm(args):
    dom = make_domain(args.domain)
    f = make_function(args.function, dom.d)
    kernel = make_kernel(args.kernel, dom.d, args.q)
    thetas = tuple(args.theta or [1.0])
    s = seminorm_set(f, dom, kernel, ExponentPair(args.p, args.q), thetas)
    out = {"full": s.full.to_dict(), "truncated": {str(t): s.truncated[t].to_dict() for t in sorted(s.truncated)},
           "ratio": {str(t): s.ratio(t) for t in sorted(s.truncated)}, "monotone": s.monotone}
    print(_json_dump(out))
    divergent = any("divergent" in e.flags for e in [s.full, *s.truncated.values()])
    return EXIT_FAIL if divergent or not s.monotone else EXIT_PASS


def cmd_list(args):
    print(_json_dump(list_experiments()))
    return EXIT_PASS


def cmd_experiment(args):
    if args.name not in REGISTRY:
        raise KeyError(f"unknown experiment {args.name!r}; run 'gagliardo list'")
    if args.describe:
        print(REGISTRY[args.name].describe())
        return EXIT_PASS
    params = read_config(args.config) if args.config else {}
    seed = int(params.pop("seed", 0))
    fmt = params.pop("format", "csv")
    out = params.pop("out", None)
    for item in args.param or []:
        if "=" not in item:
            raise ValueError(f"--param expects key=value, got {item!r}")
        k, v = item.split("=", 1)
        params[k.strip()] = v.strip()
    seed = args.seed if args.seed is not None else seed
    fmt = args.format or fmt
    out = args.out or out
    spec = ExperimentSpec(args.name, params, seed, out, fmt)
    report = run_experiment(spec)
    if not out:
        sys.stdout.write(report.to_csv() if fmt == "csv" else report.to_json(indent=2) + "\n")
    verdict = "PASS" if report.verdict else "FAIL"
    failed = [k for k, v in report.checks.items() if not v]
    print(f"{args.name}: {verdict}" + (f" (failed: {', '.join(failed)})" if failed else ""), file=sys.stderr)
    return EXIT_PASS if report.verdict else EXIT_FAIL


def build_parser():
    ap = argparse.ArgumentParser(prog="gagliardo", description=__doc__.split("\n")[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    a = sub.add_parser("audit", help="check the kernel assumptions for a profile")
    a.add_argument("--profile", default="stable:alpha=1.0", help="e.g. stable:alpha=1.0, log1p_power:gamma=0.5")
    a.add_argument("--d", type=int, default=1)
    a.add_argument("--p", type=float, default=2.0)
    a.add_argument("--q", type=float, default=2.0)
    a.add_argument("--diam", type=float, default=math.inf)
    a.add_argument("--k-max", dest="k_max", type=int, default=64)
    a.add_argument("--format", choices=("json", "csv"), default="json")
    a.set_defaults(func=cmd_audit)

    w = sub.add_parser("whitney", help="build and verify a Whitney decomposition")
    w.add_argument("--domain", default="square", help="interval, square, lshape, box:lo=..:hi=.., strip:k=1:l=1")
    w.add_argument("--depth", type=int, default=6)
    w.add_argument("--window", help="lo1,hi1,lo2,hi2,... for strips")
    w.add_argument("--out", help="write cubes as JSON lines")
    w.set_defaults(func=cmd_whitney)

    s = sub.add_parser("seminorm", help="full and truncated seminorms of one function")
    s.add_argument("--domain", default="interval")
    s.add_argument("--function", default="power_gamma:gamma=0.25")
    s.add_argument("--kernel", default="flat", help="flat, or a profile spec such as stable:alpha=1.0")
    s.add_argument("--theta", type=float, action="append")
    s.add_argument("--p", type=float, default=2.0)
    s.add_argument("--q", type=float, default=2.0)
    s.set_defaults(func=cmd_seminorm)

    sub.add_parser("list", help="list registered experiments").set_defaults(func=cmd_list)

    e = sub.add_parser("experiment", help="run a registered experiment")
    e.add_argument("name")
    e.add_argument("--param", action="append", metavar="KEY=VALUE")
    e.add_argument("--config", help="flat key=value file (seed, format, out and parameters)")
    e.add_argument("--out")
    e.add_argument("--format", choices=("csv", "json"))
    e.add_argument("--seed", type=int)
    e.add_argument("--describe", action="store_true", help="print parameters and CSV columns")
    e.set_defaults(func=cmd_experiment)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, TypeError, NotImplementedError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
