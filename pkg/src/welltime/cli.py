"""Command-line front end.

Subcommands::

    welltime refraction  [params]            JSON RefractionResult on stdout
    welltime traversal   [params]            JSON TraversalReport on stdout
    welltime figure --id N [--out F]         figure data as CSV
    welltime sweep --axis SPEC [...]         parameter sweep as CSV
    welltime selftest                        invariant checks, JSON report

Exit codes: 0 success, 1 selftest failure, 2 configuration error,
3 numerical failure, 4 output path not writable. Data goes to stdout,
diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import csv
import io
import itertools
import json
import math
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from . import __version__, kernels
from .classical import KernelRegion, classical_limit_series, classical_toa
from .domain import (ConfigError, DomainError, PhysicalConstants, WellGeometry, kappa_from_depth,
                     load_config, parse_config)
from .packet import GaussianPacket, SupportError
from .quadrature import DEFAULT_SPEC, AccuracyError, QuadSpec, integrate_adaptive
from .refraction import (ConsistencyError, barrier_well_continuation_check, direct_r_kappa_mantissa,
                         deep_well_mantissa, free_q, r_kappa_log, well_refraction,
                         zeta_oracle_refraction)
from .traversal import traversal_times, weighted_sum_traversal

EXIT_OK = 0
EXIT_SELFTEST = 1
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_UNWRITABLE = 4

DEFAULT_POINTS = 200
MAX_SWEEP_POINTS = 10**6

_NUMERIC_ERRORS = (AccuracyError, OverflowError, ConsistencyError, FloatingPointError, ZeroDivisionError)
_CONFIG_ERRORS = (ConfigError, DomainError, SupportError)


class OutputError(OSError):
    """The requested output path cannot be written."""


# --------------------------------------------------------------------------
# sweep tables


@dataclass(frozen=True)
class Axis:
    name: str
    lo: float
    hi: float
    count: int
    scale: str = "linear"

    def __post_init__(self):
        if self.count < 1:
            raise ConfigError("axis %r needs at least one point" % self.name)
        if self.scale not in ("linear", "log"):
            raise ConfigError("axis scale must be 'linear' or 'log'")
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise ConfigError("axis %r bounds must be finite" % self.name)
        if self.scale == "log" and not (self.lo > 0 and self.hi > 0):
            raise ConfigError("log axis %r needs positive bounds" % self.name)

    def values(self) -> np.ndarray:
        if self.scale == "log":
            return np.geomspace(self.lo, self.hi, self.count)
        return np.linspace(self.lo, self.hi, self.count)

    def as_dict(self) -> dict:
        return {"name": self.name, "min": self.lo, "max": self.hi, "count": self.count, "scale": self.scale}

    @classmethod
    def parse(cls, text: str) -> "Axis":
        """``name:min:max:count[:log]``."""
        parts = text.split(":")
        if len(parts) not in (4, 5):
            raise ConfigError("axis spec must be name:min:max:count[:linear|log], got %r" % text)
        try:
            lo, hi, count = float(parts[1]), float(parts[2]), int(parts[3])
        except ValueError as exc:
            raise ConfigError("bad axis spec %r: %s" % (text, exc)) from exc
        return cls(parts[0], lo, hi, count, parts[4] if len(parts) == 5 else "linear")


def _fmt(x) -> str:
    if isinstance(x, str):
        return x
    return format(float(x), ".17g")


@dataclass
class SweepTable:
    """Rows of computed values over a grid of at most two axes.

    ``text_columns`` lists the columns holding strings (status,
    classification); every other column is a float.
    """

    axes: list
    columns: tuple
    rows: list
    metadata: dict = field(default_factory=dict)
    text_columns: tuple = ("status",)

    def __post_init__(self):
        expected = math.prod(a.count for a in self.axes)
        if len(self.rows) != expected:
            raise ValueError("row count %d != product of axis counts %d" % (len(self.rows), expected))
        has_status = "status" in self.columns
        for row in self.rows:
            if len(row) != len(self.columns):
                raise ValueError("row width does not match the column schema")
            if not has_status:
                for name, cell in zip(self.columns, row):
                    if name not in self.text_columns and not math.isfinite(cell):
                        raise ValueError("non-finite cell without a status column")

    def column(self, name: str) -> np.ndarray:
        i = self.columns.index(name)
        vals = [r[i] for r in self.rows]
        return np.array(vals, dtype=object if name in self.text_columns else float)

    def to_csv(self) -> str:
        buf = io.StringIO()
        meta = dict(self.metadata)
        meta.setdefault("version", __version__)
        buf.write("# axes: %s\n" % json.dumps([a.as_dict() for a in self.axes]))
        buf.write("# text_columns: %s\n" % json.dumps(list(self.text_columns)))
        for key in sorted(meta):
            buf.write("# %s: %s\n" % (key, json.dumps(meta[key], sort_keys=True)))
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for row in self.rows:
            w.writerow([_fmt(c) for c in row])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "SweepTable":
        meta = {}
        body = []
        for line in text.splitlines():
            if line.startswith("# "):
                key, _, val = line[2:].partition(": ")
                meta[key] = json.loads(val)
            elif line:
                body.append(line)
        reader = csv.reader(body)
        columns = tuple(next(reader))
        axes = [Axis(a["name"], a["min"], a["max"], a["count"], a["scale"]) for a in meta.pop("axes")]
        text_cols = tuple(meta.pop("text_columns"))
        kinds = [c in text_cols for c in columns]
        rows = [tuple(c if is_text else float(c) for c, is_text in zip(r, kinds)) for r in reader]
        return cls(axes, columns, rows, meta, text_cols)

    def write(self, path) -> None:
        text = self.to_csv()
        if path is None or str(path) == "-":
            sys.stdout.write(text)
            return
        try:
            with open(path, "w", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            raise OutputError("cannot write %s: %s" % (path, exc)) from exc


# --------------------------------------------------------------------------
# parameter resolution


PARAM_FLAGS = ("k0", "sigma", "kappa", "V0", "L", "a", "b", "q0")


@dataclass(frozen=True)
class Params:
    k0: float
    sigma: float
    kappa: float
    length: float
    q0: float
    edge_far: float
    constants: PhysicalConstants
    quad: QuadSpec

    def packet(self) -> GaussianPacket:
        return GaussianPacket(self.q0, self.sigma, self.k0)

    def echo(self) -> dict:
        return {"k0": self.k0, "sigma": self.sigma, "kappa": self.kappa, "L": self.length,
                "q0": self.q0, "a": self.edge_far, "mass": self.constants.mass,
                "hbar": self.constants.hbar, "abs_tol": self.quad.abs_tol, "rel_tol": self.quad.rel_tol}

    def replace(self, **kw) -> "Params":
        d = dict(self.__dict__)
        d.update(kw)
        return Params(**d)


def make_quad(tol) -> QuadSpec:
    if tol is None:
        return DEFAULT_SPEC
    try:
        return QuadSpec(abs_tol=tol, rel_tol=tol)
    except ValueError as exc:
        raise ConfigError("--tol: %s" % exc) from exc


def resolve_params(args, overrides: dict | None = None) -> Params:
    """Merge defaults, the JSON config and command-line flags (flags win).

    ``--kappa`` takes precedence over the depth ``V0``; ``--L`` moves the far
    edge so that a - b = L.
    """
    cfg = load_config(args.config) if getattr(args, "config", None) else parse_config({})
    for key, val in (overrides or {}).items():
        if getattr(args, key, None) is None:
            cfg[key] = val
    for key in ("k0", "sigma", "V0", "a", "b", "q0"):
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = float(val)
    c = PhysicalConstants(cfg["mass"], cfg["hbar"])
    length = getattr(args, "L", None)
    if length is not None:
        cfg["a"] = cfg["b"] + float(length)
    well = WellGeometry(cfg["V0"], cfg["a"], cfg["b"])
    kap = getattr(args, "kappa", None)
    if kap is None:
        kap = (overrides or {}).get("kappa")
    if kap is None:
        kap = kappa_from_depth(cfg["V0"], c)
    if not kap >= 0:
        raise ConfigError("kappa must be non-negative")
    if not cfg["k0"] > 0:
        raise ConfigError("k0 must be positive")
    if not cfg["sigma"] > 0:
        raise ConfigError("sigma must be positive")
    return Params(cfg["k0"], cfg["sigma"], float(kap), well.width, cfg["q0"], cfg["a"], c,
                  make_quad(getattr(args, "tol", None)))


def _support_note(p: Params) -> None:
    try:
        p.packet().check_support(p.edge_far)
    except SupportError as exc:
        print("warning: %s" % exc, file=sys.stderr)


# --------------------------------------------------------------------------
# single-point commands


def _refraction_payload(p: Params) -> dict:
    r = well_refraction(p.packet(), p.k0, p.kappa, p.quad)
    return {"params": p.echo(), **r.as_dict()}


def _traversal_payload(p: Params) -> dict:
    rep = traversal_times(p.packet(), p.k0, p.kappa, p.length, p.constants, p.quad)
    return {"params": p.echo(), **rep.as_dict()}


def cmd_refraction(args) -> int:
    p = resolve_params(args)
    print(json.dumps(_refraction_payload(p), indent=2))
    return EXIT_OK


def cmd_traversal(args) -> int:
    p = resolve_params(args)
    _support_note(p)
    print(json.dumps(_traversal_payload(p), indent=2))
    return EXIT_OK


# --------------------------------------------------------------------------
# point evaluators shared by figures and sweeps


REFRACTION_COLUMNS = ("r_plus", "r_minus", "r_kappa", "total", "q_free", "error_estimate")
TRAVERSAL_COLUMNS = ("tau_well", "tau_free", "delta_tau", "classical_tau", "tolerance")
Z_COLUMNS = ("re_z", "im_z", "error_estimate")
LOG_COLUMNS = ("q_free", "log_q_over_10", "r_kappa", "log_r_kappa_over_10", "log_abs_r_kappa_over_10")


def _eval_refraction(p: Params) -> tuple:
    r = well_refraction(p.packet(), p.k0, p.kappa, p.quad)
    return (r.r_plus, r.r_minus, r.r_kappa, r.total, r.q_free, r.error_estimate), (), "ok"


def _eval_traversal(p: Params) -> tuple:
    rep = traversal_times(p.packet(), p.k0, p.kappa, p.length, p.constants, p.quad)
    vals = (rep.tau_well, rep.tau_free, rep.delta_tau, rep.classical_tau, rep.tolerance)
    return vals, (rep.classification.value,), "ok"


def _eval_z(u: float, v: float, quad: QuadSpec) -> tuple:
    z, err = kernels.deep_z(u, v, quad.abs_tol, quad.rel_tol, quad.max_subdivisions)
    return (z.real, z.imag, err), (), "ok"


def _eval_log(p: Params) -> tuple:
    """Q and R_kappa with natural logs divided by ten; negative R_kappa flagged."""
    pk = p.packet()
    q = free_q(pk, p.k0, p.quad)
    log_abs, sign = r_kappa_log(pk, p.k0, p.kappa, p.quad)
    r_k = sign * math.exp(log_abs) if log_abs < 709 else sign * math.inf
    log_r = log_abs / 10.0 if sign > 0 else math.nan
    status = "ok" if sign > 0 else ("negative_r_kappa" if sign < 0 else "zero_r_kappa")
    return (q, math.log(q) / 10.0, r_k, log_r, log_abs / 10.0), (), status


QUANTITIES = {
    "refraction": REFRACTION_COLUMNS,
    "traversal": TRAVERSAL_COLUMNS,
    "im_z": Z_COLUMNS,
    "log_compare": LOG_COLUMNS,
}
TEXT_COLUMNS = {"traversal": ("classification",)}

_POINT_AXES = ("k0", "sigma", "kappa", "V0", "L", "q0")
AXIS_NAMES = {"refraction": _POINT_AXES, "traversal": _POINT_AXES, "log_compare": _POINT_AXES,
              "im_z": ("u", "v")}


def _evaluate(task):
    """Evaluate one grid point; ``task`` is picklable for the process pool."""
    index, quantity, base, point = task
    ncols = len(QUANTITIES[quantity])
    ntext = len(TEXT_COLUMNS.get(quantity, ()))
    try:
        if quantity == "im_z":
            vals, texts, status = _eval_z(point["u"], point["v"], base.quad)
        else:
            kw = {}
            for name, val in point.items():
                if name == "L":
                    kw["length"] = val
                elif name == "V0":
                    kw["kappa"] = kappa_from_depth(val, base.constants)
                else:
                    kw[name] = val
            p = base.replace(**kw)
            fn = {"refraction": _eval_refraction, "traversal": _eval_traversal,
                  "log_compare": _eval_log}[quantity]
            vals, texts, status = fn(p)
    except (*_NUMERIC_ERRORS, DomainError) as exc:
        vals, texts, status = (math.nan,) * ncols, ("",) * ntext, "error: %s" % type(exc).__name__
    return index, tuple(float(v) for v in vals) + tuple(texts), status


def run_grid(quantity: str, axes: list, base: Params, workers: int = 1, metadata=None,
             fixed: dict | None = None) -> SweepTable:
    """Evaluate ``quantity`` on the product grid of ``axes``.

    Rows are sorted by axis indices, so the table does not depend on the
    number of workers or on completion order.
    """
    if quantity not in QUANTITIES:
        raise ConfigError("unknown quantity %r" % quantity)
    if not 1 <= len(axes) <= 2:
        raise ConfigError("a sweep takes one or two axes")
    names = [a.name for a in axes]
    if len(set(names)) != len(names):
        raise ConfigError("duplicate axis names")
    for n in names:
        if n not in AXIS_NAMES[quantity]:
            raise ConfigError("axis %r is not valid for %s (use one of %s)"
                              % (n, quantity, ", ".join(AXIS_NAMES[quantity])))
    total = math.prod(a.count for a in axes)
    if total > MAX_SWEEP_POINTS:
        raise ConfigError("sweep has %d points, limit is %d" % (total, MAX_SWEEP_POINTS))
    grids = [a.values() for a in axes]
    tasks = []
    for idx in itertools.product(*(range(a.count) for a in axes)):
        point = dict(fixed or {})
        point.update({a.name: float(g[i]) for a, g, i in zip(axes, grids, idx)})
        tasks.append((idx, quantity, base, point))
    if workers > 1 and len(tasks) > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_evaluate, tasks, chunksize=max(1, len(tasks) // (8 * workers))))
    else:
        results = [_evaluate(t) for t in tasks]
    results.sort(key=lambda r: r[0])
    rows = []
    for idx, vals, status in results:
        axis_vals = tuple(float(g[i]) for g, i in zip(grids, idx))
        rows.append(axis_vals + vals + (status,))
    text_cols = TEXT_COLUMNS.get(quantity, ())
    columns = tuple(names) + QUANTITIES[quantity] + text_cols + ("status",)
    meta = {"quantity": quantity, "params": base.echo(), "backend": kernels.BACKEND}
    if fixed:
        meta["fixed"] = fixed
    meta.update(metadata or {})
    return SweepTable(list(axes), columns, rows, meta, text_cols + ("status",))


# --------------------------------------------------------------------------
# figures


@dataclass(frozen=True)
class FigureSpec:
    quantity: str
    axes: tuple  # (name, lo, hi, scale)
    params: dict
    fixed: dict = field(default_factory=dict)
    caption: str = ""


FIGURES = {
    4: FigureSpec("refraction", (("sigma", 0.1, 10.0, "linear"),), {"k0": 5.0, "kappa": 1.0},
                  caption="terms of R against sigma, k0 = 5, kappa = 1"),
    5: FigureSpec("refraction", (("k0", 0.1, 30.0, "linear"),), {"sigma": 0.1, "kappa": 5.0},
                  caption="terms of R against k0, sigma = 0.1, kappa = 5"),
    6: FigureSpec("refraction", (("sigma", 0.2, 2.0, "linear"),), {"k0": 5.0, "kappa": 5.0},
                  caption="terms of R against sigma, k0 = kappa = 5"),
    7: FigureSpec("im_z", (("u", 1.0, 10.0, "linear"),), {}, {"v": 1.0},
                  caption="z against u = sigma kappa at v = sigma k0 = 1"),
    8: FigureSpec("im_z", (("u", 0.5, 10.0, "linear"), ("v", 0.5, 3.0, "linear")), {},
                  caption="z over the (u, v) plane"),
    9: FigureSpec("log_compare", (("sigma", 0.2, 2.0, "linear"),), {"k0": 5.0, "kappa": 5.0},
                  caption="log(Q)/10 and log(R_kappa)/10 against sigma, k0 = kappa = 5"),
}


def figure_table(fig_id: int, args, points: int = DEFAULT_POINTS, workers: int = 1) -> SweepTable:
    spec = FIGURES[fig_id]
    base = resolve_params(args, spec.params)
    axes = [Axis(name, lo, hi, points, scale) for name, lo, hi, scale in spec.axes]
    # flags that name the swept quantity are ignored; they are listed in the header
    return run_grid(spec.quantity, axes, base, workers,
                    {"figure": fig_id, "caption": spec.caption}, spec.fixed)


def cmd_figure(args) -> int:
    points = args.points if args.points is not None else DEFAULT_POINTS
    if points < 1:
        raise ConfigError("--points must be at least 1")
    table = figure_table(args.id, args, points, args.workers)
    table.write(args.out)
    if args.out not in (None, "-"):
        print("wrote %d rows to %s" % (len(table.rows), args.out), file=sys.stderr)
    return EXIT_OK


# --------------------------------------------------------------------------
# sweeps


def _sweep_spec(args):
    """Axes and quantity from ``--axis`` flags or a ``sweep`` block in the config."""
    axes = [Axis.parse(t) for t in (args.axis or [])]
    quantity = args.quantity
    if args.sweep_config:
        try:
            with open(args.sweep_config) as fh:
                block = json.load(fh)
        except OSError as exc:
            raise ConfigError("cannot read %s: %s" % (args.sweep_config, exc)) from exc
        except json.JSONDecodeError as exc:
            raise ConfigError("malformed JSON in %s: %s" % (args.sweep_config, exc)) from exc
        if not isinstance(block, dict) or not isinstance(block.get("axes", []), list):
            raise ConfigError("sweep config must be an object with an 'axes' list")
        for a in block.get("axes", []):
            try:
                axes.append(Axis(str(a["name"]), float(a["min"]), float(a["max"]), int(a["count"]),
                                 a.get("scale", "linear")))
            except (KeyError, TypeError, ValueError) as exc:
                raise ConfigError("bad axis entry %r: %s" % (a, exc)) from exc
        quantity = block.get("quantity", quantity)
    if not axes:
        raise ConfigError("a sweep needs at least one axis")
    return axes, quantity


def cmd_sweep(args) -> int:
    axes, quantity = _sweep_spec(args)
    base = resolve_params(args)
    fixed = {}
    if quantity == "im_z":
        fixed = {"u": base.sigma * base.kappa, "v": base.sigma * base.k0}
    table = run_grid(quantity, axes, base, args.workers, {}, fixed)
    table.write(args.out)
    return EXIT_OK


# --------------------------------------------------------------------------
# selftest


def _check(name, fn):
    t0 = time.perf_counter()
    try:
        ok, detail = fn()
    except (*_NUMERIC_ERRORS, DomainError) as exc:
        ok, detail = False, "%s: %s" % (type(exc).__name__, exc)
    return {"name": name, "passed": bool(ok), "detail": detail, "seconds": time.perf_counter() - t0}


def selftest_checks(quad: QuadSpec = DEFAULT_SPEC, branch_sign: int = 1):
    """(name, callable) pairs; each callable returns (passed, detail)."""

    def oracle():
        worst = 0.0
        grid = itertools.product((1, 2, 3, 5, 8), (0.3, 0.5, 1, 2, 4), (0.2, 0.5, 1, 1.5, 2))
        for k0, sigma, kap in ((k, s, q) for k, s, q in grid if s * q <= 2):
            p = GaussianPacket(-30.0, sigma, k0)
            r = well_refraction(p, k0, kap, quad).total
            worst = max(worst, abs(r - zeta_oracle_refraction(p, k0, kap, quad)))
        return worst <= 1e-7, "max |R - R_zeta| = %.3e" % worst

    def cancellation():
        worst = 0.0
        for k0, sigma, kap0 in [(2, 1, 1), (5, 0.5, 2)]:
            rep = barrier_well_continuation_check(GaussianPacket(-30.0, sigma, k0), kap0, quad,
                                                  branch_sign=branch_sign, raise_on_failure=False)
            worst = max(worst, rep.max_deviation)
        return worst <= 1e-7, "max deviation = %.3e (branch sign %+d)" % (worst, branch_sign)

    def deep_forms():
        worst = 0.0
        for u, v in [(0.5, 0.5), (2.0, 1.0), (4.0, 2.0)]:
            p = GaussianPacket(0.0, 1.0, v)
            a = deep_well_mantissa(p, u, quad)
            b = direct_r_kappa_mantissa(p, u, quad)
            worst = max(worst, abs(a - b))
        return worst <= 1e-7, "max mantissa mismatch = %.3e" % worst

    def classical_limit():
        well = WellGeometry(0.5, 3.0, 1.0)
        worst = 0.0
        for y in (0.1, 0.3, 0.5):
            p0 = math.sqrt(2 * well.depth / y)
            s = classical_limit_series(KernelRegion.REGION3, -10.0, p0, well, n_terms=60).value
            worst = max(worst, abs(s - classical_toa(KernelRegion.REGION3, -10.0, p0, well)))
        p = GaussianPacket(-200.0, 10.0, 5.0)
        dev = abs(well_refraction(p, 5.0, 1.0, quad).total - 5 / math.sqrt(26))
        return worst <= 1e-10 and dev <= 1e-4, "series %.2e, R(sigma=10) - 5/sqrt(26) = %.2e" % (worst, dev)

    def normalization():
        p = GaussianPacket(-30.0, 0.7, 2.0)
        norm = integrate_adaptive(lambda k: p.momentum_density(k) + p.momentum_density(-k), 0.0,
                                  math.inf, quad, points=[p.k0], label="norm").value
        phi0 = complex(p.autocorrelation(0.0))
        r1 = well_refraction(GaussianPacket(-30.0, 0.7, 2.0), 2.0, 1.3, quad)
        r2 = well_refraction(GaussianPacket(-500.0, 0.7, 2.0), 2.0, 1.3, quad)
        q0_dev = abs(r1.r_kappa - r2.r_kappa) / abs(r1.r_kappa)
        tau_w = weighted_sum_traversal(p, 1.3, 2.0, quad=quad)
        ws_dev = abs(tau_w - 2.0 / 2.0 * r1.total)
        book = abs(r1.r_plus + r1.r_minus + r1.r_kappa - r1.total)
        ok = abs(norm - 1) <= 1e-10 and abs(phi0 - 1) <= 1e-14 and q0_dev <= 1e-12 \
            and ws_dev <= 1e-10 and book <= 1e-12
        return ok, ("norm-1 %.1e, Phi(0)-1 %.1e, q0 %.1e, weighted sum %.1e, sum %.1e"
                    % (norm - 1, abs(phi0 - 1), q0_dev, ws_dev, book))

    return [("oracle_equivalence", oracle), ("cancellation_identity", cancellation),
            ("deep_well_forms", deep_forms), ("classical_limit", classical_limit),
            ("normalization", normalization)]


def cmd_selftest(args) -> int:
    quad = make_quad(args.tol)
    t0 = time.perf_counter()
    results = [_check(name, fn) for name, fn in selftest_checks(quad, args.branch_sign)]
    report = {"passed": all(r["passed"] for r in results), "checks": results,
              "seconds": time.perf_counter() - t0, "backend": kernels.BACKEND, "version": __version__}
    print(json.dumps(report, indent=2))
    for r in results:
        if not r["passed"]:
            print("FAILED %s: %s" % (r["name"], r["detail"]), file=sys.stderr)
    return EXIT_OK if report["passed"] else EXIT_SELFTEST


# --------------------------------------------------------------------------


def _add_params(sp):
    g = sp.add_argument_group("parameters (atomic units)")
    g.add_argument("--k0", type=float, help="central wave number")
    g.add_argument("--sigma", type=float, help="position spread of the packet")
    g.add_argument("--kappa", type=float, help="well wave number sqrt(2 mu V0)/hbar; overrides --V0")
    g.add_argument("--V0", type=float, help="well depth")
    g.add_argument("--L", type=float, help="well width; sets a = b + L")
    g.add_argument("--a", type=float, help="far edge distance")
    g.add_argument("--b", type=float, help="near edge distance")
    g.add_argument("--q0", type=float, help="packet centre")
    g.add_argument("--config", help="JSON config file")
    g.add_argument("--tol", type=float, help="quadrature tolerance (absolute and relative)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="welltime", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("refraction", help="refraction index terms at one point")
    _add_params(sp)
    sp.set_defaults(func=cmd_refraction)

    sp = sub.add_parser("traversal", help="traversal times at one point")
    _add_params(sp)
    sp.set_defaults(func=cmd_traversal)

    sp = sub.add_parser("figure", help="figure data as CSV")
    _add_params(sp)
    sp.add_argument("--id", type=int, required=True, choices=sorted(FIGURES))
    sp.add_argument("--out", help="output CSV path (default stdout)")
    sp.add_argument("--points", type=int, help="points per axis (default %d)" % DEFAULT_POINTS)
    sp.add_argument("--workers", type=int, default=1)
    sp.set_defaults(func=cmd_figure)

    sp = sub.add_parser("sweep", help="parameter sweep as CSV")
    _add_params(sp)
    sp.add_argument("--axis", action="append", help="name:min:max:count[:linear|log], up to two")
    sp.add_argument("--sweep-config", help="JSON file with 'axes' and optional 'quantity'")
    sp.add_argument("--quantity", default="refraction", choices=sorted(QUANTITIES))
    sp.add_argument("--out", help="output CSV path (default stdout)")
    sp.add_argument("--workers", type=int, default=1)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("selftest", help="run the invariant checks")
    sp.add_argument("--tol", type=float, help="quadrature tolerance (absolute and relative)")
    sp.add_argument("--branch-sign", type=int, default=1, choices=(1, -1),
                    help=argparse.SUPPRESS)  # debug: -1 injects the wrong branch
    sp.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        if getattr(args, "workers", 1) < 1:
            raise ConfigError("--workers must be at least 1")
        return args.func(args)
    except OutputError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_UNWRITABLE
    except _CONFIG_ERRORS as exc:
        print("configuration error: %s" % exc, file=sys.stderr)
        return EXIT_CONFIG
    except _NUMERIC_ERRORS as exc:
        print("numerical failure: %s: %s" % (type(exc).__name__, exc), file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
