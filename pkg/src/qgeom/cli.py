"""Command-line front end.

Subcommands: eval (QGT at points), sweep (grids -> CSV/JSON), check (the
acceptance suite), curvature (FD Riemannian geometry of a model metric),
entangle (covariance-based measures).

Configuration may come from an INI file (sections [job], [gaussian]) with
command-line flags taking precedence. Exit codes: 0 success, 1 check failure,
2 usage/domain error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone

import numpy as np

from . import __version__, acceptance, gauss, geometry, qgt
from .errors import DomainError, NumericalError
from .exprs import ExpressionError, compile_expression
from .fock import eigh
from .models import MODEL_NAMES, get_model
from .models.gaussian import GaussianModel

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3

MIN_CUTOFF = 8


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# config plumbing

@dataclass
class JobConfig:
    model: str = ""
    point: tuple[float, ...] = ()
    quantum_numbers: tuple[int, ...] = (0,)
    methods: tuple[str, ...] = ("perturbative",)
    cutoff: int = 0  # 0 -> per-model default
    out: str = "-"
    fmt: str = "csv"
    workers: int = 1
    timestamp: bool = True
    fd_step: float | None = None
    quantities: tuple[str, ...] = ()
    axes: tuple[tuple[str, float, float, int], ...] = ()
    fixed: dict[str, float] = field(default_factory=dict)
    sigma: str = ""
    mu: str = ""
    param_names: tuple[str, ...] = ()
    which: str = "metric"
    tolerance: float = 1e-6

    def validate(self):
        if self.cutoff and self.cutoff < MIN_CUTOFF:
            raise UsageError(f"cutoff must be >= {MIN_CUTOFF}")
        if self.tolerance <= 0:
            raise UsageError("tolerances must be positive")
        if any(count < 1 for *_rest, count in self.axes):
            raise UsageError("grid counts must be >= 1")
        if self.workers < 1:
            raise UsageError("workers must be >= 1")
        if self.fmt not in ("csv", "json"):
            raise UsageError(f"unknown format {self.fmt!r}")


def _parse_floats(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.replace(" ", "").split(",") if v != "")
    except ValueError:
        raise UsageError(f"cannot parse numbers from {text!r}") from None


def _parse_ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.replace(" ", "").split(",") if v != "")
    except ValueError:
        raise UsageError(f"cannot parse integers from {text!r}") from None


def _parse_axis(text: str) -> tuple[str, float, float, int]:
    # name=start:stop:count
    try:
        name, spec = text.split("=", 1)
        start, stop, count = spec.split(":")
        return name.strip(), float(start), float(stop), int(count)
    except ValueError:
        raise UsageError(
            f"bad axis {text!r}; expected name=start:stop:count") from None


def _parse_assign(text: str) -> tuple[str, float]:
    try:
        name, value = text.split("=", 1)
        return name.strip(), float(value)
    except ValueError:
        raise UsageError(f"bad assignment {text!r}; expected name=value") from None


def load_config(path: str) -> dict:
    """Flatten an INI config; [job] holds the main keys, [gaussian] sigma/mu."""
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise UsageError(f"config file {path!r} not found")
    flat: dict = {}
    if parser.has_section("job"):
        flat.update(dict(parser.items("job")))
    if parser.has_section("gaussian"):
        for key, value in parser.items("gaussian"):
            flat[f"gaussian.{key}"] = value
    return flat


def build_config(args: argparse.Namespace) -> JobConfig:
    cfg = JobConfig()
    file_values = load_config(args.config) if getattr(args, "config", None) else {}

    def pick(flag_value, file_key):
        return flag_value if flag_value is not None else file_values.get(file_key)

    model = pick(getattr(args, "model", None), "model")
    if model:
        cfg.model = model
    point = pick(getattr(args, "point", None), "point")
    if point:
        cfg.point = _parse_floats(point)
    qn = pick(getattr(args, "n", None), "n")
    if qn is not None:
        cfg.quantum_numbers = _parse_ints(str(qn))
    methods = pick(getattr(args, "method", None), "method")
    if methods:
        names = tuple(m.strip() for m in str(methods).split(",") if m.strip())
        cfg.methods = (("perturbative", "overlap-fd", "covariance", "closed-form")
                       if "all" in names else names)
    cutoff = pick(getattr(args, "cutoff", None), "cutoff")
    if cutoff is not None:
        cfg.cutoff = int(cutoff)
    out = pick(getattr(args, "out", None), "out")
    if out:
        cfg.out = out
    fmt = pick(getattr(args, "format", None), "format")
    if fmt:
        cfg.fmt = str(fmt)
    workers = pick(getattr(args, "workers", None), "workers")
    if workers is not None:
        cfg.workers = int(workers)
    if getattr(args, "no_header_timestamp", False) or \
            str(file_values.get("timestamp", "true")).lower() in ("0", "false", "no"):
        cfg.timestamp = False
    step = pick(getattr(args, "fd_step", None), "fd_step")
    if step is not None:
        cfg.fd_step = float(step)
    quantities = pick(getattr(args, "quantities", None), "quantities")
    if quantities:
        cfg.quantities = tuple(q.strip() for q in str(quantities).split(",") if q.strip())
    file_axes = [chunk.strip() for chunk in file_values.get("axis", "").split(";")
                 if chunk.strip()]
    for axis in (getattr(args, "axis", None) or file_axes):
        cfg.axes = cfg.axes + (_parse_axis(axis),)
    for assign in (getattr(args, "fix", None) or []):
        name, value = _parse_assign(assign)
        cfg.fixed[name] = value
    if "fix" in file_values:
        for chunk in file_values["fix"].split(","):
            if chunk.strip():
                name, value = _parse_assign(chunk)
                cfg.fixed.setdefault(name, value)
    sigma = pick(getattr(args, "sigma", None), "gaussian.sigma")
    if sigma:
        cfg.sigma = sigma
    mu = pick(getattr(args, "mu", None), "gaussian.mu")
    if mu:
        cfg.mu = mu
    params = pick(getattr(args, "params", None), "gaussian.params")
    if params:
        cfg.param_names = tuple(p.strip() for p in str(params).split(",") if p.strip())
    which = pick(getattr(args, "which", None), "which")
    if which:
        cfg.which = which
    tol = pick(getattr(args, "tolerance", None), "tolerance")
    if tol is not None:
        cfg.tolerance = float(tol)
    cfg.validate()
    return cfg


def resolve_model(cfg: JobConfig):
    if not cfg.model:
        raise UsageError("a model name is required (--model)")
    if cfg.model == "gaussian" and cfg.sigma:
        if not cfg.mu:
            raise UsageError("gaussian model needs both --sigma and --mu")
        names = cfg.param_names or ("l1", "l2")
        if len(names) != 2:
            raise UsageError("gaussian model uses exactly two parameter names")
        try:
            sigma = compile_expression(cfg.sigma, names)
            mu = compile_expression(cfg.mu, names)
        except ExpressionError as exc:
            raise UsageError(str(exc)) from None
        return GaussianModel(sigma, mu, param_names=names)
    try:
        return get_model(cfg.model)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def model_cutoff(cfg: JobConfig, model) -> int:
    if cfg.cutoff:
        return cfg.cutoff
    return 80 if model.dof == 1 else 40


# ---------------------------------------------------------------------------
# output

def _num(x) -> str:
    return format(float(x), ".17e")


class Writer:
    """Collects column-oriented rows and emits deterministic CSV or JSON."""

    def __init__(self, cfg: JobConfig, meta: dict):
        self.cfg = cfg
        self.meta = meta
        self.rows: list[dict] = []

    def add(self, row: dict):
        self.rows.append(row)

    def _columns(self) -> list[str]:
        cols: list[str] = []
        for row in self.rows:
            for key in row:
                if key not in cols:
                    cols.append(key)
        return cols

    def _render_csv(self) -> str:
        buf = io.StringIO()
        if self.cfg.timestamp:
            stamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
            buf.write(f"# generated {stamp}\n")
        cols = self._columns()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(cols)
        for row in self.rows:
            cells = []
            for col in cols:
                value = row.get(col, "")
                if isinstance(value, float):
                    value = _num(value)
                cells.append(str(value))
            writer.writerow(cells)
        return buf.getvalue()

    def _render_json(self) -> str:
        doc = {"meta": dict(self.meta), "rows": self.rows}
        if self.cfg.timestamp:
            doc["generated"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
        return json.dumps(doc, indent=2, sort_keys=True, default=float) + "\n"

    def flush(self):
        text = self._render_csv() if self.cfg.fmt == "csv" else self._render_json()
        if self.cfg.out in ("-", ""):
            sys.stdout.write(text)
        else:
            with open(self.cfg.out, "w") as fh:
                fh.write(text)


def _matrix_columns(prefix: str, labels, matrix: np.ndarray) -> dict:
    # '|' keeps index pairs out of the CSV delimiter's way
    out = {}
    for i, a in enumerate(labels):
        for j, b in enumerate(labels):
            value = matrix[i, j]
            out[f"{prefix}_re[{a}|{b}]"] = float(np.real(value))
            if np.iscomplexobj(matrix):
                out[f"{prefix}_im[{a}|{b}]"] = float(np.imag(value))
    return out


# ---------------------------------------------------------------------------
# commands

def cmd_eval(cfg: JobConfig) -> int:
    model = resolve_model(cfg)
    point = model.point(*cfg.point)
    cutoff = model_cutoff(cfg, model)
    fb = model.default_basis(point, cutoff)
    sel = qgt.StateSelector(cfg.quantum_numbers)
    meta = {"command": "eval", "model": model.name, "point": list(point.values),
            "n": list(sel.quantum_numbers), "cutoff": cutoff,
            "methods": list(cfg.methods), "tolerance": cfg.tolerance,
            "version": __version__}
    writer = Writer(cfg, meta)
    spectrum = eigh(model.hamiltonian(point, fb))
    results: dict[str, qgt.QGTResult] = {}
    base = {"model": model.name, "n": ",".join(map(str, sel.quantum_numbers))}
    base.update({f"point[{name}]": value
                 for name, value in zip(point.names, point.values)})
    for method in cfg.methods:
        row = dict(base)
        row["method"] = method
        if method == "perturbative":
            res = qgt.qgt_perturbative(model, point, sel, fb, spectrum=spectrum)
            results[method] = res
            row.update(_matrix_columns("G", res.labels, res.values))
            metric, berry = qgt.split(res)
            row.update(_matrix_columns("metric", res.labels, metric))
            row.update(_matrix_columns("berry", res.labels, berry))
        elif method == "overlap-fd":
            res = qgt.qgt_overlap_fd(model, point, sel, fb, step=cfg.fd_step,
                                     spectrum=spectrum)
            results[method] = res
            row.update(_matrix_columns("G", res.labels, res.values))
        elif method == "covariance":
            cov = qgt.covariance_from_state(model, point, sel, fb, spectrum=spectrum)
            res = qgt.phase_block_from_covariance(cov, sel.quantum_numbers)
            results[method] = res
            row.update(_matrix_columns("G", res.labels, res.values))
            row.update(_matrix_columns("sigma", res.labels, cov.entries))
        elif method == "closed-form":
            qn = model._check_qn(sel.quantum_numbers)
            blocks = {}
            if "qgt" in model._closed:
                blocks["G"] = (model.param_names,
                               np.asarray(model.closed_form("qgt", point, qn)))
            if "phase_qgt" in model._closed:
                blocks["Gphase"] = (model.phase_labels,
                                    np.asarray(model.closed_form("phase_qgt", point, qn)))
            for prefix, (labels, matrix) in blocks.items():
                row.update(_matrix_columns(prefix, labels, matrix))
        else:
            raise UsageError(f"unknown method {method!r}")
        writer.add(row)
    if len([m for m in cfg.methods if m in results]) > 1:
        row = dict(base)
        row["method"] = "agreement"
        if "perturbative" in results and "overlap-fd" in results:
            blk = results["perturbative"].parameter_block(model)
            row["dev[perturbative-vs-overlap-fd]"] = float(
                np.abs(blk - results["overlap-fd"].values).max())
        if "perturbative" in results and "covariance" in results:
            blk = results["perturbative"].phase_block(model)
            row["dev[perturbative-vs-covariance]"] = float(
                np.abs(blk - results["covariance"].values).max())
        writer.add(row)
    writer.flush()
    return EXIT_OK


def _grid_points(cfg: JobConfig, model):
    """Lexicographic grid over 1-2 axes with the rest pinned by --fix."""
    if not cfg.axes:
        raise UsageError("sweep needs at least one --axis name=start:stop:count")
    if len(cfg.axes) > 2:
        raise UsageError("sweep supports at most two axes")
    names = [axis[0] for axis in cfg.axes]
    for name in names:
        if name not in model.param_names:
            raise UsageError(f"axis {name!r} is not a parameter of {model.name}")
    grids = [np.linspace(start, stop, count) for _, start, stop, count in cfg.axes]
    fixed = dict(cfg.fixed)
    missing = [p for p in model.param_names if p not in names and p not in fixed]
    if missing:
        raise UsageError(f"fix the non-axis parameters: {missing}")
    shape = [len(g) for g in grids]
    for flat in range(int(np.prod(shape))):
        idx = np.unravel_index(flat, shape)
        values = dict(fixed)
        for axis_i, name in enumerate(names):
            values[name] = float(grids[axis_i][idx[axis_i]])
        yield values


def _sweep_one(model, values: dict, cfg: JobConfig):
    point = model.point(**values)
    row: dict = {f"point[{name}]": value for name, value in zip(point.names, point.values)}
    qn = model._check_qn(cfg.quantum_numbers)
    quantities = cfg.quantities or ("det_metric", "scalar", "purity", "entropy", "nu")
    cutoff = model_cutoff(cfg, model)
    need_state = any(q in ("purity", "entropy", "nu") for q in quantities) \
        and model.dof == 2
    red = None
    if need_state:
        fb = model.default_basis(point, cutoff)
        cov = qgt.covariance_from_state(model, point, qgt.StateSelector(qn), fb)
        red = gauss.reduce(cov, [0])
    for quantity in quantities:
        if quantity == "det_metric":
            if "metric_det" in model._closed:
                row["det_metric"] = float(model.closed_form("metric_det", point, qn))
            else:
                row["det_metric"] = float(np.linalg.det(
                    np.asarray(model.closed_form("metric", point, qn))))
        elif quantity == "scalar":
            row["scalar"] = float(model.closed_form(cfg.which if ":" in cfg.which
                                                    else "scalar:param", point, qn))
        elif quantity.startswith("scalar:"):
            row[quantity] = float(model.closed_form(quantity, point, qn))
        elif quantity == "purity":
            row["purity"] = gauss.purity(red) if red is not None else \
                float(model.closed_form("purity", point, qn))
        elif quantity == "entropy":
            row["entropy"] = gauss.von_neumann_entropy(red) if red is not None \
                else float(model.closed_form("entropy", point, qn))
        elif quantity == "nu":
            row["nu"] = float(gauss.symplectic_eigenvalues(red)[0]) \
                if red is not None else 0.5
        else:
            row[quantity] = float(model.closed_form(quantity, point, qn))
    return row


def cmd_sweep(cfg: JobConfig) -> int:
    model = resolve_model(cfg)
    meta = {"command": "sweep", "model": model.name,
            "axes": [list(a) for a in cfg.axes], "fixed": cfg.fixed,
            "n": list(cfg.quantum_numbers), "quantities": list(cfg.quantities),
            "workers": cfg.workers, "tolerance": cfg.tolerance,
            "version": __version__}
    writer = Writer(cfg, meta)
    points = list(_grid_points(cfg, model))

    def work(values):
        try:
            return _sweep_one(model, values, cfg)
        except (DomainError, NumericalError, ValueError) as exc:
            row = {f"point[{name}]": values[name] for name in model.param_names}
            row["error"] = f"{type(exc).__name__}: {exc}"
            return row

    if cfg.workers > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            rows = list(pool.map(work, points))
    else:
        rows = [work(values) for values in points]
    for row in rows:  # buffered: deterministic grid order regardless of workers
        writer.add(row)
    writer.flush()
    return EXIT_OK


def cmd_check(cfg: JobConfig) -> int:
    config = acceptance.AcceptanceConfig()
    if cfg.cutoff:
        config = acceptance.AcceptanceConfig(cutoff_1mode=cfg.cutoff,
                                             cutoff_2mode=cfg.cutoff)
    results = acceptance.run_checks(config, printer=print)
    failed = [r for r in results if not r.passed]
    print(f"\n{len(results) - len(failed)}/{len(results)} checks passed")
    for r in failed:
        note = " (known source inconsistency)" \
            if r.name in acceptance.KNOWN_SOURCE_INCONSISTENT else ""
        print(f"  FAILED: {r.name}{note}")
    return EXIT_CHECK_FAILED if failed else EXIT_OK


def cmd_curvature(cfg: JobConfig) -> int:
    model = resolve_model(cfg)
    point = model.point(*cfg.point)
    qn = model._check_qn(cfg.quantum_numbers)
    which = cfg.which
    mapping = {
        "param": ("metric", None),
        "param-z1": ("metric_z1", ("W", "X", "Y")),
        "phase-reduced": ("phase_metric_reduced", None),
    }
    coords = None
    if which in mapping:
        quantity, coords = mapping[which]
    elif which.startswith("phase:"):
        quantity = "phase_metric"
        coords = tuple(which.split(":", 1)[1])
    else:
        quantity = which
    fixed = {name: point[name] for name in model.param_names
             if coords is not None and name not in coords}
    field_coords = coords if coords is not None else model.param_names
    f = geometry.metric_field(model, quantity, qn, coords=field_coords, fixed=fixed)
    x = np.array([point[name] for name in field_coords])
    report = geometry.curvature_report(f, x)
    meta = {"command": "curvature", "model": model.name, "which": which,
            "point": list(point.values), "n": list(qn), "version": __version__}
    writer = Writer(cfg, meta)
    row = {f"point[{name}]": point[name] for name in field_coords}
    row["scalar"] = report.scalar
    row["flat"] = report.flat
    row["max_riemann"] = float(np.abs(report.riemann).max())
    row["flat_threshold"] = report.flat_threshold
    if f.dim == 2:
        row["scalar_2d_direct"] = geometry.scalar_2d_direct(f, x)
    for i in range(f.dim):
        for j in range(f.dim):
            for k in range(j, f.dim):
                row[f"christoffel[{i}|{j}|{k}]"] = float(report.christoffel[i, j, k])
    writer.add(row)
    writer.flush()
    return EXIT_OK


def cmd_entangle(cfg: JobConfig) -> int:
    model = resolve_model(cfg)
    if model.dof != 2:
        raise UsageError("entangle needs a two-mode model (sym-coupled, lin-coupled)")
    point = model.point(*cfg.point)
    qn = model._check_qn(cfg.quantum_numbers)
    cutoff = model_cutoff(cfg, model)
    fb = model.default_basis(point, cutoff)
    cov = qgt.covariance_from_state(model, point, qgt.StateSelector(qn), fb)
    red = gauss.reduce(cov, [0])
    meta = {"command": "entangle", "model": model.name, "point": list(point.values),
            "n": list(qn), "cutoff": cutoff, "version": __version__}
    writer = Writer(cfg, meta)
    row = {f"point[{name}]": value for name, value in zip(point.names, point.values)}
    row["nu"] = float(gauss.symplectic_eigenvalues(red)[0])
    row["purity"] = gauss.purity(red)
    row["entropy"] = gauss.von_neumann_entropy(red)
    row.update(_matrix_columns("sigma_reduced", ("q1", "p1"), red.entries))
    if qn == (0, 0):
        row["purity_closed"] = float(model.closed_form("purity", point, qn))
        row["entropy_closed"] = float(model.closed_form("entropy", point, qn))
    writer.add(row)
    writer.flush()
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing

def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--config", help="INI config file; flags override it")
    p.add_argument("--model", choices=list(MODEL_NAMES))
    p.add_argument("--point", help="comma-separated parameter values")
    p.add_argument("--n", help="quantum numbers, comma-separated (one per mode)")
    p.add_argument("--cutoff", type=int, help="Fock cutoff per mode")
    p.add_argument("--method", help="perturbative,overlap-fd,covariance,closed-form|all")
    p.add_argument("--out", help="output path ('-' for stdout)")
    p.add_argument("--format", choices=["csv", "json"], dest="format")
    p.add_argument("--workers", type=int)
    p.add_argument("--no-header-timestamp", action="store_true",
                   help="suppress the timestamp header line")
    p.add_argument("--fd-step", type=float, dest="fd_step")
    p.add_argument("--sigma", help="gaussian model: sigma(lambda) expression")
    p.add_argument("--mu", help="gaussian model: mu(lambda) expression")
    p.add_argument("--params", help="gaussian model: parameter names")
    p.add_argument("--tolerance", type=float)


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qgeom",
        description="quantum geometric tensor, curvature and entanglement "
                    "for oscillator models")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="QGT blocks at a parameter point")
    _add_common(p)

    p = sub.add_parser("sweep", help="quantities over a parameter grid")
    _add_common(p)
    p.add_argument("--axis", action="append",
                   help="grid axis name=start:stop:count (repeatable, max 2)")
    p.add_argument("--fix", action="append", help="pin a parameter name=value")
    p.add_argument("--quantities",
                   help="comma list: det_metric,scalar,purity,entropy,nu,...")

    p = sub.add_parser("check", help="run the acceptance suite")
    _add_common(p)

    p = sub.add_parser("curvature", help="FD curvature of a model metric")
    _add_common(p)
    p.add_argument("--which", help="param | param-z1 | phase:XY | phase-reduced "
                                   "| any closed-form metric name")

    p = sub.add_parser("entangle", help="reduced-state entanglement measures")
    _add_common(p)
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        cfg = build_config(args)
        handler = {
            "eval": cmd_eval,
            "sweep": cmd_sweep,
            "check": cmd_check,
            "curvature": cmd_curvature,
            "entangle": cmd_entangle,
        }[args.command]
        return handler(cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
