"""Command-line front end: determinant sweeps, regime comparisons, Painleve runs.

Usage::

    fhlab det --config run.json --out dets.csv
    fhlab compare --config run.json --format json
    fhlab pv --alpha 0.3 --beta 0 --out pv.csv
    fhlab ising --n 8 16 32 64 --t 0 0.3 0.6
    fhlab verify

A config is a JSON object with keys ``spec`` (the symbol document),
``n_list``, exactly one of ``t_list``/``x_list`` (x means t = x/2n), and
optionally ``pv`` ({x_min, x_max, tol}), ``t0`` and ``output`` ({path, format}).
"""

import argparse
import concurrent.futures
import csv
import io
import json
import math
import os
import sys
import tempfile
import traceback
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .asymptotics import (DEFAULT_T0, fh_asymptote, ising_correlation, ising_product_d0,
                          phase_distance, szego_asymptote, transition_asymptote)
from .painleve import omega, pv_solve, write_solution_csv
from .specialfn import fh_constant
from .symbol import SymbolSpec, fourier_coeffs, ising_spec
from .toeplitz import log_toeplitz_det

__all__ = ["RunConfig", "SweepReport", "cmd_det", "cmd_compare", "cmd_pv", "cmd_ising",
           "cmd_verify", "main"]

CONFIG_KEYS = {"spec", "n_list", "t_list", "x_list", "pv", "t0", "output"}
PV_KEYS = {"x_min", "x_max", "tol"}
PV_DEFAULTS = {"x_min": 0.01, "x_max": 40.0, "tol": 1e-12}


class CommandError(Exception):
    """A failure to be reported as a JSON error object."""

    def __init__(self, message, module="cli", op=None, params=None):
        super().__init__(message)
        self.module, self.op, self.params = module, op, params or {}


def _fmt(x):
    """Shortest round-trip text for a float (at most 17 significant digits)."""
    if x is None:
        return ""
    x = float(x)
    if math.isnan(x):
        return "nan"
    return repr(x)


def _threads():
    env = os.environ.get("FHLAB_THREADS")
    if env:
        n = int(env)
        if n < 1:
            raise CommandError(f"FHLAB_THREADS must be >= 1 (got {env})", op="threads")
        return n
    return os.cpu_count() or 1


def _pmap(fn, items):
    # executor.map keeps the input order, so the output does not depend on the pool size
    items = list(items)
    nt = min(_threads(), max(1, len(items)))
    if nt == 1:
        return [fn(i) for i in items]
    with concurrent.futures.ThreadPoolExecutor(max_workers=nt) as ex:
        return list(ex.map(fn, items))


@dataclass
class RunConfig:
    spec: SymbolSpec
    n_list: list
    t_list: list = None
    x_list: list = None
    pv: dict = field(default_factory=lambda: dict(PV_DEFAULTS))
    t0: float = DEFAULT_T0
    out_path: str = None
    out_format: str = "csv"

    @classmethod
    def from_json_dict(cls, doc, require_grid=True):
        if not isinstance(doc, dict):
            raise ValueError("config must be a JSON object")
        unknown = set(doc) - CONFIG_KEYS
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        if "spec" not in doc:
            raise ValueError("config needs a 'spec' entry")
        spec = SymbolSpec.from_json_dict(doc["spec"])
        pv = dict(PV_DEFAULTS)
        if "pv" in doc:
            bad = set(doc["pv"]) - PV_KEYS
            if bad:
                raise ValueError(f"unknown pv keys: {sorted(bad)}")
            pv.update({k: float(v) for k, v in doc["pv"].items()})
        out = doc.get("output", {})
        bad = set(out) - {"path", "format"}
        if bad:
            raise ValueError(f"unknown output keys: {sorted(bad)}")
        cfg = cls(spec, [int(n) for n in doc.get("n_list", [])],
                  doc.get("t_list"), doc.get("x_list"), pv, float(doc.get("t0", DEFAULT_T0)),
                  out.get("path"), out.get("format", "csv"))
        cfg.validate(require_grid)
        return cfg

    def validate(self, require_grid=True):
        if self.out_format not in ("csv", "json"):
            raise ValueError(f"format must be csv or json (got {self.out_format!r})")
        if not require_grid:
            return
        if (self.t_list is None) == (self.x_list is None):
            raise ValueError("give exactly one of t_list and x_list")
        grid = self.t_list if self.t_list is not None else self.x_list
        if not self.n_list or not grid:
            raise ValueError("n_list and the t/x grid must be nonempty")
        if any(n < 1 for n in self.n_list):
            raise ValueError("all n must be >= 1")
        if any(float(v) < 0 for v in grid):
            raise ValueError("t and x values must be >= 0")

    def points(self):
        """(n, t) pairs, n-major."""
        out = []
        for n in self.n_list:
            if self.t_list is not None:
                out += [(n, float(t)) for t in self.t_list]
            else:
                out += [(n, float(x) / (2 * n)) for x in self.x_list]
        return out


@dataclass
class SweepReport:
    columns: list
    rows: list
    metadata: dict

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for r in self.rows:
            w.writerow([c if isinstance(c, str) else (str(c) if isinstance(c, int) else _fmt(c))
                        for c in (r.get(k) for k in self.columns)])
        return buf.getvalue()

    def to_json(self):
        return _dumps({"metadata": self.metadata, "columns": self.columns, "rows": self.rows})


def _dumps(obj):
    return json.dumps(obj, indent=1, sort_keys=False, allow_nan=True) + "\n"


def _metadata(cfg, **extra):
    import mpmath
    import scipy
    md = {"spec": cfg.spec.to_json_dict() if cfg else None,
          "versions": {"fhlab": __version__, "numpy": np.__version__,
                       "scipy": scipy.__version__, "mpmath": mpmath.__version__}}
    md.update(extra)
    return md


def _exact(spec, n, t):
    table = fourier_coeffs(spec.with_t(t), n)
    return log_toeplitz_det(table, n)


def cmd_det(cfg):
    """Exact ln D_n over the configured grid."""
    pts = cfg.points()
    recs = _pmap(lambda p: _exact(cfg.spec, *p), pts)
    rows = []
    for (n, t), r in zip(pts, recs):
        rows.append({"n": n, "t": t, "x": 2 * n * t, "re_exact": r.log_det.real,
                     "im_exact": r.log_det.imag, "pivot_min": r.pivot_min})
    cols = ["n", "t", "x", "re_exact", "im_exact", "pivot_min"]
    return SweepReport(cols, rows, _metadata(cfg))


def cmd_compare(cfg):
    """Exact ln D_n next to the Szego, Fisher-Hartwig and transition predictions."""
    spec = cfg.spec
    pts = cfg.points()
    need_pv = any(0 < t < cfg.t0 for _, t in pts)
    sol = None
    if need_pv:
        sol = pv_solve(spec.alpha, spec.beta, cfg.pv["x_min"], cfg.pv["x_max"], cfg.pv["tol"])

    def row(p):
        n, t = p
        sp = spec.with_t(t)
        ex = _exact(spec, n, t).log_det
        r = {"n": n, "t": t, "x": 2 * n * t, "re_exact": ex.real, "im_exact": ex.imag}
        notes = []
        if t > 0:
            s = szego_asymptote(sp, n).value
            r.update(re_szego=s.real, im_szego=s.imag)
            notes.append("fh skipped (t>0)")
        else:
            f = fh_asymptote(sp, n).value
            r.update(re_fh=f.real, im_fh=f.imag)
            notes.append("szego skipped (t=0)")
        if sol is not None and 0 < t < cfg.t0 and sol.x_min <= 2 * n * t <= sol.x_max:
            tr = transition_asymptote(sp, n, sol, cfg.t0).value
            r.update(re_transition=tr.real, im_transition=tr.imag,
                     abs_err_transition=phase_distance(ex, tr))
        else:
            notes.append("transition skipped (t or x out of range)")
        r["note"] = "; ".join(notes)
        return r

    rows = _pmap(row, pts)
    cols = ["n", "t", "x", "re_exact", "im_exact", "re_szego", "im_szego", "re_fh", "im_fh",
            "re_transition", "im_transition", "abs_err_transition", "note"]
    md = _metadata(cfg, t0=cfg.t0, pv=cfg.pv,
                   solver=_clean_report(sol.boundary_report) if sol else None)
    return SweepReport(cols, rows, md)


def _clean_report(rep):
    return {k: (float(v) if isinstance(v, (float, np.floating)) else v) for k, v in rep.items()}


def cmd_pv(alpha, beta, x_min=0.01, x_max=40.0, tol=1e-12):
    """Solve and return (csv text, report dict, solution)."""
    sol = pv_solve(alpha, beta, x_min, x_max, tol)
    om = [omega(sol, x) for x in sol.x_grid]
    buf = io.StringIO()
    write_solution_csv(sol, buf, {"re_omega": [o.real for o in om], "im_omega": [o.imag for o in om]})
    rep = _clean_report(sol.boundary_report)
    rep["fh_constant"] = [fh_constant(alpha, beta).real, fh_constant(alpha, beta).imag]
    rep["omega_xmax"] = [om[-1].real, om[-1].imag]
    return buf.getvalue(), rep, sol


def cmd_ising(n_list, t_list):
    """Diagonal Ising correlations with their large-n limits."""
    # n^{1/4} D_n(0) -> sqrt(pi) G(1/2)^2
    crit = math.exp(fh_constant(0, -0.5).real)

    def row(p):
        n, t = p
        table = fourier_coeffs(ising_spec(t), n)
        c = ising_correlation(n, t, table)
        r = {"n": n, "t": t, "correlation": c}
        if t > 0:
            r["szego_limit"] = (-math.expm1(-2 * t)) ** 0.25
            r["ratio"] = c / r["szego_limit"]
        else:
            r["product_formula"] = math.exp(ising_product_d0(n))
            r["critical_law"] = crit * n ** -0.25
            r["ratio"] = c / r["critical_law"]
        return r

    pts = [(int(n), float(t)) for n in n_list for t in t_list]
    rows = _pmap(row, pts)
    cols = ["n", "t", "correlation", "szego_limit", "product_formula", "critical_law", "ratio"]
    return SweepReport(cols, rows, _metadata(None))


def cmd_verify(quick=False):
    """Differential identity and invariant checks; returns a list of result dicts."""
    from .verify import run_checks
    return run_checks(quick=quick)


def _write(text, path):
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".fhlab-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _load_config(path, require_grid=True):
    if path is None:
        raise CommandError("--config is required for this command", op="load_config")
    try:
        with open(path) as fh:
            doc = json.load(fh)
        return RunConfig.from_json_dict(doc, require_grid)
    except (OSError, ValueError, KeyError, TypeError) as e:
        raise CommandError(str(e), op="load_config", params={"path": path}) from e


def _error_origin(exc):
    # innermost frame inside the package names the module and operation
    module, op = "cli", None
    for frame in traceback.extract_tb(exc.__traceback__):
        fn = frame.filename.replace("\\", "/")
        if "/fhlab/" in fn:
            module = os.path.splitext(os.path.basename(fn))[0]
            op = frame.name
    return module, op


def build_parser():
    p = argparse.ArgumentParser(prog="fhlab", description="Toeplitz determinants with an "
                                "emerging Fisher-Hartwig singularity")
    p.add_argument("--version", action="version", version=f"fhlab {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, config=True):
        if config:
            sp.add_argument("--config", help="JSON run configuration")
        sp.add_argument("--out", help="output path (default: stdout)")
        sp.add_argument("--format", choices=["csv", "json"], help="output format")

    common(sub.add_parser("det", help="exact log-determinants over a grid"))
    common(sub.add_parser("compare", help="exact vs asymptotic regimes"))
    sp = sub.add_parser("pv", help="solve the Painleve V connection problem")
    common(sp)
    sp.add_argument("--alpha", type=complex, help="overrides the config's alpha")
    sp.add_argument("--beta", type=complex, help="overrides the config's beta")
    sp.add_argument("--x-min", type=float)
    sp.add_argument("--x-max", type=float)
    sp.add_argument("--tol", type=float)
    sp.add_argument("--report", help="where to write the boundary report JSON (csv format)")
    sp = sub.add_parser("ising", help="diagonal Ising correlation tables")
    common(sp, config=False)
    sp.add_argument("--n", type=int, nargs="+", default=[8, 16, 32, 64, 128])
    sp.add_argument("--t", type=float, nargs="+", default=[0.0, 0.3, 0.6])
    sp = sub.add_parser("verify", help="run the identity and invariant checks")
    common(sp, config=False)
    sp.add_argument("--quick", action="store_true", help="smaller sample sizes")
    return p


def _run(args):
    if args.command in ("det", "compare"):
        cfg = _load_config(args.config)
        fmt = args.format or cfg.out_format
        out = args.out or cfg.out_path
        rep = cmd_det(cfg) if args.command == "det" else cmd_compare(cfg)
        _write(rep.to_csv() if fmt == "csv" else rep.to_json(), out)
        return 0

    if args.command == "pv":
        pv = dict(PV_DEFAULTS)
        alpha = beta = None
        fmt, out = args.format, args.out
        if args.config:
            cfg = _load_config(args.config, require_grid=False)
            alpha, beta, pv = cfg.spec.alpha, cfg.spec.beta, cfg.pv
            fmt, out = fmt or cfg.out_format, out or cfg.out_path
        alpha = args.alpha if args.alpha is not None else alpha
        beta = args.beta if args.beta is not None else beta
        if alpha is None or beta is None:
            raise CommandError("pv needs alpha and beta (flags or --config)", op="cmd_pv")
        for k in ("x_min", "x_max", "tol"):
            if getattr(args, k) is not None:
                pv[k] = getattr(args, k)
        text, rep, sol = cmd_pv(alpha, beta, pv["x_min"], pv["x_max"], pv["tol"])
        meta = {"alpha": [complex(alpha).real, complex(alpha).imag],
                "beta": [complex(beta).real, complex(beta).imag], "pv": pv}
        if (fmt or "csv") == "csv":
            _write(text, out)
            doc = _dumps({"parameters": meta, "boundary_report": rep})
            if args.report:
                _write(doc, args.report)
            elif out not in (None, "-"):
                sys.stderr.write(doc)
        else:
            cols = {"x": sol.x_grid.tolist(), "v": [[z.real, z.imag] for z in sol.v],
                    "u": [[z.real, z.imag] for z in sol.u],
                    "sigma": [[z.real, z.imag] for z in sol.sigma],
                    "residual": sol.sigma_form_residual.tolist()}
            _write(_dumps({"parameters": meta, "boundary_report": rep, "solution": cols}), out)
        return 0

    if args.command == "ising":
        rep = cmd_ising(args.n, args.t)
        _write(rep.to_csv() if (args.format or "csv") == "csv" else rep.to_json(), args.out)
        return 0

    if args.command == "verify":
        results = cmd_verify(args.quick)
        ok = all(r["passed"] for r in results)
        if (args.format or "json") == "json":
            _write(_dumps({"passed": ok, "checks": results}), args.out)
        else:
            cols = ["check", "value", "threshold", "passed"]
            rows = [{k: (str(r[k]) if k in ("check", "passed") else r[k]) for k in cols}
                    for r in results]
            _write(SweepReport(cols, rows, {}).to_csv(), args.out)
        if not ok:
            failed = [r["check"] for r in results if not r["passed"]]
            raise CommandError(f"{len(failed)} verification check(s) failed", module="verify",
                               op="cmd_verify", params={"failed": failed})
        return 0
    raise CommandError(f"unknown command {args.command}")


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return _run(args)
    except CommandError as e:
        err = {"error": type(e).__name__, "message": str(e), "module": e.module,
               "op": e.op or args.command, "params": e.params}
    except Exception as e:  # any module error becomes a machine-readable object
        module, op = _error_origin(e)
        params = {k: v for k, v in vars(args).items() if v is not None and k != "command"}
        err = {"error": type(e).__name__, "message": str(e), "module": module,
               "op": op or args.command, "params": _jsonable(params)}
    sys.stderr.write(json.dumps(err, sort_keys=True) + "\n")
    return 2


def _jsonable(d):
    out = {}
    for k, v in d.items():
        if isinstance(v, complex):
            v = [v.real, v.imag]
        out[k] = v
    return out


if __name__ == "__main__":
    sys.exit(main())
