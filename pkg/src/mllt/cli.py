"""Batch command line front-end.

Emits CSV (tables) or JSON (single results, errors) with 12 significant
digits and a fixed row order, so identical invocations are byte-identical
and suitable for regression diffing. Exit codes: 0 success, 2 argument
error, 3 size guard, 4 numerical failure.
"""

import argparse
import csv
import io
import json
import math
import os
import sys

import numpy as np

from . import bernstein as bn
from . import exact, expansion, gauss_compare, moments, region
from .errors import MlltError, TooLargeError
from .model import new_model

E_ARGS, E_TOO_LARGE, E_NUMERIC = "E_ARGS", "E_TOO_LARGE", "E_NUMERIC"


class CliError(Exception):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


def _fmt(v) -> str:
    if isinstance(v, float):
        if math.isnan(v):
            raise CliError(E_NUMERIC, "computation produced NaN")
        return format(v, ".12g")
    return str(v)


def _parse_p(text: str) -> np.ndarray:
    try:
        return np.array([float(t) for t in text.split(",")], dtype=np.float64)
    except ValueError:
        raise CliError(E_ARGS, f"could not parse --p value {text!r}") from None


def parse_sweep(text: str) -> list:
    """'start:end:x2' geometric or 'start:end:+k' arithmetic, inclusive."""
    parts = text.split(":")
    if len(parts) != 3 or not parts[2] or parts[2][0] not in "x+":
        raise CliError(E_ARGS, f"bad sweep spec {text!r}, want start:end:x2 or start:end:+k")
    try:
        start, end, step = int(parts[0]), int(parts[1]), int(parts[2][1:])
    except ValueError:
        raise CliError(E_ARGS, f"bad sweep spec {text!r}") from None
    if start < 1 or end < start or step < (2 if parts[2][0] == "x" else 1):
        raise CliError(E_ARGS, f"sweep {text!r} must be strictly increasing")
    out, n = [], start
    while n <= end:
        out.append(n)
        n = n * step if parts[2][0] == "x" else n + step
    return out


def _load_config(path: str) -> dict:
    cfg = {}
    try:
        with open(path) as f:
            for line in f:
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise CliError(E_ARGS, f"bad config line {line!r}")
                key, val = line.split("=", 1)
                cfg[key.strip().replace("-", "_")] = val.strip().strip("\"'")
    except OSError as e:
        raise CliError(E_ARGS, f"cannot read config {path}: {e}") from None
    return cfg


def _resolve(args, cfg: dict, key: str, default=None, cast=str):
    val = getattr(args, key, None)
    if val is not None:
        return val
    if key in cfg:
        try:
            return cast(cfg[key])
        except ValueError:
            raise CliError(E_ARGS, f"bad config value for {key}: {cfg[key]!r}") from None
    return default


def _emit(rows, fields, fmt: str, out_path: str):
    buf = io.StringIO()
    if fmt == "csv":
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(fields)
        for r in rows:
            w.writerow([_fmt(r[f]) for f in fields])
    else:
        clean = [{f: float(_fmt(r[f])) if isinstance(r[f], float) else r[f] for f in fields} for r in rows]
        buf.write(json.dumps({"rows": clean}, indent=2) + "\n")
    if out_path in (None, "-"):
        sys.stdout.write(buf.getvalue())
    else:
        with open(out_path, "w") as f:
            f.write(buf.getvalue())


def _model_from(args, cfg):
    p_text = _resolve(args, cfg, "p")
    n = _resolve(args, cfg, "N", cast=int)
    if p_text is None:
        raise CliError(E_ARGS, "--p is required")
    if n is None:
        raise CliError(E_ARGS, "--N is required")
    return new_model(_parse_p(p_text), int(n))


def _sweep_from(args, cfg, min_len=1):
    spec = _resolve(args, cfg, "N_sweep")
    if spec is not None:
        ns = parse_sweep(spec)
    else:
        n = _resolve(args, cfg, "N", cast=int)
        if n is None:
            raise CliError(E_ARGS, "--N or --N-sweep is required")
        ns = [int(n)]
    if len(ns) < min_len:
        raise CliError(E_ARGS, f"sweep must contain at least {min_len} values")
    return ns


def cmd_pmf(args, cfg):
    m = _model_from(args, cfg)
    if args.k is not None:
        ks = np.array([[int(t) for t in args.k.split(",")]], dtype=np.int64)
        for k in ks:
            from .model import check_in_simplex

            check_in_simplex(m, k)
    elif args.all:
        ks = exact.simplex_lattice(m.d, m.N)
    else:
        eta = float(_resolve(args, cfg, "eta", 0.5, float))
        from .model import bulk_points

        ks = bulk_points(m, eta)
    ex = np.exp(exact.log_pmf_batch(m, ks))
    cols = {}
    for order in (0, "half", "one"):
        cols[order] = expansion.approx_pmf_batch(m, ks, order)[0]
    ratio = expansion.ratio_error_batch(m, ks, "one")
    rows = []
    for j in range(ks.shape[0]):
        rows.append(
            {
                "k": ";".join(str(int(v)) for v in ks[j]),
                "exact": float(ex[j]),
                "approx0": float(cols[0][j]),
                "approx_half": float(cols["half"][j]),
                "approx_one": float(cols["one"][j]),
                "ratio_error_one": float(ratio[j]),
            }
        )
    return rows, ["k", "exact", "approx0", "approx_half", "approx_one", "ratio_error_one"]


def cmd_expand(args, cfg):
    m = _model_from(args, cfg)
    if args.k is not None:
        ks = np.array([[int(t) for t in args.k.split(",")]], dtype=np.int64)
    else:
        eta = float(_resolve(args, cfg, "eta", 0.5, float))
        from .model import bulk_points

        ks = bulk_points(m, eta)
    rows = []
    for j in range(ks.shape[0]):
        t = expansion.expansion_terms_symmetrized(m, ks[j])
        rows.append(
            {
                "k": ";".join(str(int(v)) for v in ks[j]),
                "base": t.base,
                "c_half": t.c_half,
                "c_one": t.c_one,
            }
        )
    return rows, ["k", "base", "c_half", "c_one"]


def _parse_region(args, m):
    if args.box is not None:
        try:
            pairs = [tuple(int(v) for v in part.split(":")) for part in args.box.split(",")]
            lo = [a for a, _ in pairs]
            hi = [b for _, b in pairs]
        except ValueError:
            raise CliError(E_ARGS, f"bad --box spec {args.box!r}, want lo:hi per axis") from None
        if len(pairs) != m.d:
            raise CliError(E_ARGS, f"--box needs {m.d} lo:hi pairs")
        return region.LatticeBox(np.array(lo), np.array(hi))
    if args.halfspace is not None:
        try:
            a_text, b_text = args.halfspace.split(";")
            a = np.array([float(t) for t in a_text.split(",")])
            b = float(b_text)
        except ValueError:
            raise CliError(E_ARGS, f"bad --halfspace spec {args.halfspace!r}, want a1,..,ad;b") from None
        if a.shape[0] != m.d:
            raise CliError(E_ARGS, f"--halfspace needs {m.d} coefficients")
        return region.LatticeHalfSpace(a, b)
    raise CliError(E_ARGS, "region command needs --box or --halfspace")


def cmd_region(args, cfg):
    m = _model_from(args, cfg)
    reg = _parse_region(args, m)
    order = expansion.normalize_order(_resolve(args, cfg, "order", "one"))
    nodes = int(_resolve(args, cfg, "nodes", 12, int))
    ex = region.region_prob_exact(m, reg)
    ap = region.region_prob_approx(m, reg, order, nodes=nodes)
    rows = [{"exact": ex, "approx": ap, "abs_error": abs(ex - ap), "order": str(order)}]
    return rows, ["exact", "approx", "abs_error", "order"]


def cmd_tv(args, cfg):
    p = _parse_p(_resolve(args, cfg, "p") or _die_p())
    ns = _sweep_from(args, cfg)
    rows = []
    for n in ns:
        rep = gauss_compare.tv_distance_numeric(new_model(p, n))
        rows.append({"N": n, "tv": rep.tv, "tv_sqrtN": rep.tv * math.sqrt(n)})
    return rows, ["N", "tv", "tv_sqrtN"]


def _die_p():
    raise CliError(E_ARGS, "--p is required")


def cmd_moments(args, cfg):
    m = _model_from(args, cfg)
    rows = []

    def add(name, spec, *idx):
        val, tag = moments.closed_form_central_moment(m, spec, *idx)
        rows.append({"name": name, "value": float(val), "remainder": tag})

    for i in range(m.d):
        add(f"mean_{i + 1}", "mean", i)
    for i in range(m.d):
        for j in range(i, m.d):
            add(f"cov_{i + 1}{j + 1}", "cov", i, j)
    for i in range(m.d):
        add(f"third_{i + 1}", "third", i, i, i)
        add(f"fourth_{i + 1}", "fourth", i)
        add(f"sixth_{i + 1}", "sixth", i)
    for i in range(m.d):
        for j in range(m.d):
            if i != j:
                add(f"mixed33_{i + 1}{j + 1}", "mixed33", i, j)
    return rows, ["name", "value", "remainder"]


def cmd_bernstein(args, cfg):
    m = _model_from(args, cfg)
    rows = []
    for name, fn in (("sum_sq", bn.limit_constant_sum_sq), ("sum_cube", bn.limit_constant_sum_cube)):
        finite, limit = fn(m)
        rows.append({"name": name, "finite_N": finite, "limit": limit, "rel_gap": abs(finite / limit - 1.0)})
    for i in range(m.d):
        finite, limit = bn.limit_constant_min_cross(m, i)
        rows.append(
            {"name": f"min_cross_{i + 1}", "finite_N": finite, "limit": limit, "rel_gap": abs(finite / limit - 1.0)}
        )
    return rows, ["name", "finite_N", "limit", "rel_gap"]


def cmd_error_table(args, cfg):
    p = _parse_p(_resolve(args, cfg, "p") or _die_p())
    ns = _sweep_from(args, cfg, min_len=4)
    eta = float(_resolve(args, cfg, "eta", 0.5, float))
    errs = {order: [] for order in (0, "half", "one")}
    rows = []
    for n in ns:
        m = new_model(p, n)
        row = {"N": n}
        for order in (0, "half", "one"):
            e = expansion.max_bulk_ratio_error(m, eta, order)
            errs[order].append(e)
            row[f"err_{order}"] = e
        rows.append(row)
    slopes = {
        f"slope_{order}": expansion.loglog_slope(np.array(ns, dtype=float), np.array(errs[order]))
        for order in (0, "half", "one")
    }
    for r in rows:
        r.update(slopes)
    return rows, ["N", "err_0", "err_half", "err_one", "slope_0", "slope_half", "slope_one"]


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mllt", description="multinomial local-limit toolkit")
    sub = ap.add_subparsers(dest="command", required=True)
    handlers = {
        "pmf": cmd_pmf,
        "expand": cmd_expand,
        "region": cmd_region,
        "tv": cmd_tv,
        "moments": cmd_moments,
        "bernstein": cmd_bernstein,
        "error-table": cmd_error_table,
    }
    for name in handlers:
        sp = sub.add_parser(name)
        sp.set_defaults(handler=handlers[name])
        sp.add_argument("--p")
        sp.add_argument("--N", type=int)
        sp.add_argument("--N-sweep", dest="N_sweep")
        sp.add_argument("--eta", type=float)
        sp.add_argument("--order", choices=["0", "half", "one"])
        sp.add_argument("--nodes", type=int)
        sp.add_argument("--format", dest="fmt", choices=["csv", "json"])
        sp.add_argument("--out")
        sp.add_argument("--threads", type=int)
        sp.add_argument("--config")
        if name in ("pmf", "expand"):
            sp.add_argument("--k")
            sp.add_argument("--all", action="store_true")
        if name == "region":
            sp.add_argument("--box")
            sp.add_argument("--halfspace")
        if name == "bernstein":
            sp.add_argument("what", nargs="?", default="constants", choices=["constants"])
    return ap


def main(argv=None) -> int:
    ap = _build_parser()
    try:
        try:
            args = ap.parse_args(argv)
        except SystemExit as e:
            if e.code not in (0, None):
                _error_json(E_ARGS, "argument parsing failed")
                return 2
            return 0
        cfg = _load_config(args.config) if args.config else {}
        threads = args.threads if args.threads is not None else int(os.environ.get("MLLT_THREADS", "0") or 0)
        if threads < 0:
            raise CliError(E_ARGS, "--threads must be nonnegative")
        rows, fields = args.handler(args, cfg)
        fmt = _resolve(args, cfg, "fmt", "csv")
        if fmt not in ("csv", "json"):
            raise CliError(E_ARGS, f"bad format {fmt!r}")
        _emit(rows, fields, fmt, _resolve(args, cfg, "out", "-"))
        return 0
    except CliError as e:
        _error_json(e.code, str(e))
        return {E_ARGS: 2, E_TOO_LARGE: 3, E_NUMERIC: 4}[e.code]
    except TooLargeError as e:
        _error_json(E_TOO_LARGE, str(e))
        return 3
    except MlltError as e:
        _error_json(E_ARGS, str(e))
        return 2
    except (FloatingPointError, OverflowError, ZeroDivisionError) as e:
        _error_json(E_NUMERIC, str(e))
        return 4


def _error_json(code: str, message: str):
    sys.stderr.write(json.dumps({"error": {"code": code, "message": message}}) + "\n")


if __name__ == "__main__":
    sys.exit(main())
