"""``covosc`` command line: sample, verify, scan, decompose, parton.

Tabular output is CSV (leading ``#`` lines carry the metadata block),
reports are JSON. Outputs depend only on the resolved configuration, so
repeated runs are byte-identical.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import warnings
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Optional

import numpy as np

from . import CONVENTION_SIGNS, __version__
from . import analysis as an
from . import numerics as nm
from .oscillator import OscillatorState

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
COMMANDS = ("sample", "verify", "scan", "decompose", "parton")


class ConfigError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str = "verify"
    n_u: int = 0
    n_t: int = 0
    eta: float = 0.0
    eta_list: tuple = (0.0, 0.5, 1.0, 1.5, 2.0)
    grid: int = 256
    extent: Optional[float] = None
    quad_nodes: int = 64
    metric: str = "mink"
    format: Optional[str] = None
    out: Optional[str] = None
    order: int = 40
    momentum: bool = False
    allow_large_eta: bool = False

    @property
    def state(self) -> OscillatorState:
        return OscillatorState(self.n_u, self.n_t, self.eta)

    @property
    def output_format(self) -> str:
        if self.format:
            return self.format
        return "json" if self.command == "verify" else "csv"

    def validate(self) -> "RunConfig":
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if self.metric not in an.METRICS:
            raise ConfigError(f"metric must be one of {an.METRICS}")
        if self.output_format not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.format!r}")
        if not self.eta_list:
            raise ConfigError("eta list is empty")
        if self.grid < 8 or self.grid % 2:
            raise ConfigError(f"--grid must be even and >= 8, got {self.grid}")
        if self.extent is not None and not self.extent > 0:
            raise ConfigError(f"--extent must be positive, got {self.extent}")
        if self.order < 0:
            raise ConfigError(f"--order must be >= 0, got {self.order}")
        try:
            self.state
            for eta in (self.eta, *self.eta_list):
                an.check_eta(eta, self.allow_large_eta)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        return self

    def resolved(self) -> dict:
        d = asdict(self)
        d["eta_list"] = list(self.eta_list)
        d.pop("out")
        return d


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, str):
        return x
    if x is None:
        return ""
    return format(float(x), ".17g")


def _parse_eta_list(text: str) -> tuple:
    try:
        values = tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"invalid eta list {text!r}") from exc
    if not values:
        raise argparse.ArgumentTypeError("eta list is empty")
    return values


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="covosc",
        description="Covariant oscillator: sample, verify and scan Lorentz-squeezed wave functions.",
    )
    p.add_argument("command", choices=COMMANDS)
    eta = p.add_mutually_exclusive_group()
    eta.add_argument("--eta", type=float, help="rapidity of the frame")
    eta.add_argument("--eta-list", type=_parse_eta_list, help="comma-separated rapidities (scan)")
    p.add_argument("--n-u", type=int, help="longitudinal rest-mode excitation")
    p.add_argument("--n-t", type=int, help="time-like rest-mode excitation")
    p.add_argument("--grid", type=int, help="nodes per grid axis (default 256)")
    p.add_argument("--extent", type=float, help="rest-frame box half-width before squeezing")
    p.add_argument("--quad-nodes", type=int, help="Gauss-Hermite nodes (default 64)")
    p.add_argument(
        "--metric",
        type=lambda m: "pp" if m == "++" else m,
        choices=an.METRICS,
        help="reading of the oscillator operator (mink, or pp / ++)",
    )
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--out", help="output path (stdout if omitted)")
    p.add_argument("--config", help="JSON config file, or any covosc JSON output")
    p.add_argument("--order", type=int, help="truncation order for decompose (default 40)")
    p.add_argument("--momentum", action="store_true", default=None, help="sample |phi|^2 instead of |psi|^2")
    p.add_argument("--allow-large-eta", action="store_true", default=None)
    return p


def load_config_file(path: str) -> dict:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError(f"config {path} must hold a JSON object")
    block = {k: v for k, v in doc.get("config", doc).items() if k != "command"}
    known = {f.name for f in fields(RunConfig)} - {"command"}
    unknown = set(block) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    if "eta_list" in block:
        block = dict(block, eta_list=tuple(block["eta_list"]))
    return block


def resolve_config(args: argparse.Namespace) -> tuple[RunConfig, dict]:
    """Defaults, then the config file, then explicit flags."""
    file_doc: dict = {}
    cfg = RunConfig(command=args.command)
    if args.config:
        file_block = load_config_file(args.config)
        cfg = replace(cfg, **file_block)
        file_doc = json.loads(Path(args.config).read_text(encoding="utf-8"))
    flags = {
        k: v
        for k, v in vars(args).items()
        if v is not None and k not in ("command", "config")
    }
    cfg = replace(cfg, **flags)
    return cfg.validate(), file_doc


# --- checks -----------------------------------------------------------------------


@dataclass
class Check:
    name: str
    value: float
    expected: float
    tolerance: float
    passed: bool
    detail: str = ""

    def as_dict(self) -> dict:
        d = {
            "name": self.name,
            "value": float(self.value),
            "expected": float(self.expected),
            "tolerance": float(self.tolerance),
            "pass": bool(self.passed),
        }
        if self.detail:
            d["detail"] = self.detail
        return d


def _close(name, value, expected, tol) -> Check:
    value = float(value)
    return Check(name, value, expected, tol, bool(abs(value - expected) <= tol))


def _at_least(name, value, bound) -> Check:
    return Check(name, float(value), bound, 0.0, bool(value >= bound))


def _guarded(name, fn) -> list:
    try:
        out = fn()
    except nm.GridError as exc:
        return [Check(name, float("nan"), float("nan"), 0.0, False, str(exc))]
    return out if isinstance(out, list) else [out]


def _grid_for(cfg: RunConfig, s: OscillatorState, domain=nm.SPACETIME, base=None) -> nm.Grid2D:
    base = cfg.extent if cfg.extent is not None else base
    return an.auto_grid(s, cfg.grid, base, domain)


def state_normalization(cfg: RunConfig) -> float:
    domain = nm.MOMENTUM if cfg.momentum else nm.SPACETIME
    return an.normalization(cfg.state, _grid_for(cfg, cfg.state, domain), domain)


def run_checks(cfg: RunConfig, reference: Optional[dict] = None) -> list[Check]:
    checks: list[Check] = []
    add = checks.extend

    s = cfg.state
    add(_guarded("normalization/state", lambda: _close(
        "normalization/state", state_normalization(cfg), 1.0, 1e-8)))
    if reference and "normalization" in reference.get("metadata", {}):
        ref = reference["metadata"]["normalization"]
        add(_guarded("normalization/reproduced", lambda: Check(
            "normalization/reproduced", state_normalization(cfg), ref, 0.0,
            state_normalization(cfg) == ref)))

    for eta in (0.0, 0.5, 1.0, 2.0):
        g = OscillatorState(0, 0, eta)
        for domain, tag in ((nm.SPACETIME, "space"), (nm.MOMENTUM, "momentum")):
            name = f"normalization/{tag}/eta={eta:g}"
            add(_guarded(name, lambda g=g, d=domain, name=name: _close(
                name, an.normalization(g, _grid_for(cfg, g, d), d), 1.0, 1e-8)))

    def pde(state, label, tol_lambda=1e-4, tol_resid=None):
        name = f"pde/{cfg.metric}/{label}"

        def run():
            r = an.pde_residual(state, cfg.metric, _grid_for(cfg, state), cfg.allow_large_eta)
            out = [_close(name + "/lambda", r.lambda_best, an.expected_eigenvalue(state, cfg.metric), tol_lambda)]
            if tol_resid is not None:
                out.append(_close(name + "/residual", r.residual_l2, 0.0, tol_resid))
            return out

        add(_guarded(name, run))

    pde(OscillatorState(), "ground", tol_resid=1e-5)
    for n, m in ((1, 0), (2, 0), (1, 1)):
        pde(OscillatorState(n, m), f"n={n},m={m}")
    # only the Minkowski reading is boost invariant
    if cfg.metric == "mink":
        for eta in (1.0, 2.0):
            pde(OscillatorState(0, 0, eta), f"ground/eta={eta:g}", tol_resid=1e-4)
    if (s.n_u, s.n_t, s.eta) != (0, 0, 0.0) and (cfg.metric == "mink" or s.eta == 0):
        pde(s, f"state/n={s.n_u},m={s.n_t},eta={s.eta:g}")

    for eta in (0.0, 1.0):
        name = f"fourier/eta={eta:g}"

        def fourier(eta=eta, name=name):
            st = OscillatorState(0, 0, eta)
            g = nm.sample(an.amplitude(st), _grid_for(cfg, st, base=an.AMPLITUDE_EXTENT))
            F = nm.fourier2d(g, CONVENTION_SIGNS)
            ref = an.amplitude(st, nm.MOMENTUM)(*F.physical())
            return [
                _close(name + "/max_error", np.abs(F.values.real - ref).max(), 0.0, 1e-6),
                _close(name + "/imaginary", np.abs(F.values.imag).max(), 0.0, 1e-10),
            ]

        add(_guarded(name, fourier))

    def widths():
        rows = an.width_scan((0.0, 0.5, 1.0, 1.5, 2.0), cfg.grid)
        out = []
        for r in rows:
            out.append(_close(f"width/sigma_z^2/eta={r.eta:g}", r.sigma_z**2, np.cosh(2 * r.eta) / 2, 1e-6))
            out.append(_close(f"width/duality/eta={r.eta:g}", r.sigma_z - r.sigma_qz, 0.0, 1e-8))
        steps = np.diff([r.sigma_z for r in rows])
        out.append(Check("width/monotone", float(steps.min()), 0.0, 0.0, bool(np.all(steps > 0))))
        return out

    add(_guarded("width", widths))

    rest = an.ellipse(OscillatorState())
    checks.append(_close("ellipse/circle", rest.semi_axis_u - rest.semi_axis_v, 0.0, 1e-12))
    for eta in (0.5, 1.0, 2.0):
        e = an.ellipse(OscillatorState(0, 0, eta))
        checks.append(_close(f"ellipse/ratio/eta={eta:g}", e.ratio, np.exp(2 * eta), 1e-6))
        checks.append(_close(f"ellipse/area/eta={eta:g}", e.area, rest.area, 1e-10))

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for eta in (0.5, 1.0):
            d = an.decompose(eta, cfg.order)
            err = np.abs(d.weights[:11] - an.mehler_weights(eta, min(10, cfg.order))).max()
            checks.append(_close(f"decompose/weights/eta={eta:g}", err, 0.0, 1e-8))
        d = an.decompose(0.5, cfg.order)
        checks.append(_at_least("decompose/completeness/eta=0.5", d.weights.sum(), 1 - 1e-10))
        d = an.decompose(1.0, cfg.order)
        checks.append(_at_least("decompose/completeness/eta=1", d.weights.sum(), 0.9999999))

    add(_guarded("parton", lambda: [
        _at_least("parton/concentration/eta=3",
                  an.light_cone_concentration(OscillatorState(0, 0, 3.0), nm.MOMENTUM), 0.99),
        _close("parton/excess_kurtosis/eta=3", an.parton_curve(3.0).excess_kurtosis, 0.0, 1e-6),
    ]))

    c = an.boundary_contrast(6.0)
    checks.append(_at_least("contrast/invariant_max", c.invariant_max, 1e6))
    checks.append(Check("contrast/covariant_max", c.covariant_max, 1.0, 0.0, c.covariant_max <= 1.0))
    return checks


# --- output -------------------------------------------------------------------------


def metadata(cfg: RunConfig, **extra) -> dict:
    return {"version": __version__, "convention_signs": list(CONVENTION_SIGNS), **extra}


def render_csv(header: list, rows, meta: dict, cfg: RunConfig) -> str:
    buf = io.StringIO()
    buf.write("# config: " + json.dumps(cfg.resolved()) + "\n")
    buf.write("# metadata: " + json.dumps(meta) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(x) for x in row])
    return buf.getvalue()


def render_json(doc: dict) -> str:
    return json.dumps(doc, indent=2, allow_nan=True) + "\n"


def emit(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    try:
        Path(out).write_text(text, encoding="utf-8", newline="\n")
    except OSError as exc:
        raise ConfigError(f"cannot write {out}: {exc}") from exc


def cmd_sample(cfg: RunConfig) -> int:
    domain = nm.MOMENTUM if cfg.momentum else nm.SPACETIME
    s = cfg.state
    grid = nm.sample(an.density(s, domain), _grid_for(cfg, s, domain))
    meta = metadata(
        cfg,
        eta=s.eta,
        domain=domain,
        grid=grid.describe(),
        normalization=nm.integrate2d(grid),
        concentration=an.light_cone_concentration(s, domain) if s.is_ground else None,
    )
    x0, x1 = grid.physical()
    names = ["z", "t"] if domain == nm.SPACETIME else ["q_z", "q_0"]
    if cfg.output_format == "csv":
        rows = zip(x0.ravel(), x1.ravel(), grid.values.ravel())
        emit(render_csv(names + ["density"], rows, meta, cfg), cfg.out)
    else:
        doc = {
            "config": cfg.resolved(),
            "metadata": meta,
            names[0]: x0.tolist(),
            names[1]: x1.tolist(),
            "density": grid.values.tolist(),
        }
        emit(render_json(doc), cfg.out)
    return EXIT_OK


def cmd_verify(cfg: RunConfig, reference: Optional[dict] = None) -> int:
    checks = run_checks(cfg, reference)
    ok = all(c.passed for c in checks)
    if cfg.output_format == "json":
        doc = {
            "config": cfg.resolved(),
            "checks": [c.as_dict() for c in checks],
            "metadata": metadata(cfg, passed=ok),
        }
        emit(render_json(doc), cfg.out)
    else:
        rows = [(c.name, c.value, c.expected, c.tolerance, c.passed) for c in checks]
        emit(render_csv(["name", "value", "expected", "tolerance", "pass"], rows, metadata(cfg, passed=ok), cfg), cfg.out)
    for c in checks:
        if not c.passed:
            msg = f"FAILED {c.name}: value={c.value!r} expected={c.expected!r} tol={c.tolerance!r}"
            print(msg + (f" ({c.detail})" if c.detail else ""), file=sys.stderr)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_scan(cfg: RunConfig) -> int:
    rows = []
    for r in an.width_scan(cfg.eta_list, cfg.grid):
        st = OscillatorState(0, 0, r.eta)
        rows.append((r.eta, r.sigma_z, r.sigma_qz, r.sigma_u, r.sigma_v,
                     an.light_cone_concentration(st, nm.SPACETIME),
                     an.light_cone_concentration(st, nm.MOMENTUM)))
    header = ["eta", "sigma_z", "sigma_qz", "sigma_u", "sigma_v", "concentration_zt", "concentration_q"]
    _emit_table(cfg, header, rows, metadata(cfg))
    return EXIT_OK


def cmd_decompose(cfg: RunConfig) -> int:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        d = an.decompose(cfg.eta, cfg.order, cfg.allow_large_eta)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    cum = d.cumulative
    # stop once the remaining weight is below rounding
    done = np.nonzero(1.0 - cum <= 1e-14)[0]
    last = int(done[0]) if done.size else d.order
    rows = [(n, d.coefficients[n], d.weights[n], cum[n]) for n in range(last + 1)]
    meta = metadata(cfg, eta=d.eta, order=d.order, defect=d.defect, off_diagonal_max=d.off_diagonal_max)
    _emit_table(cfg, ["n", "c_n", "c_n_sq", "cumulative"], rows, meta)
    return EXIT_OK


def cmd_parton(cfg: RunConfig) -> int:
    try:
        p = an.parton_curve(cfg.eta, allow_large_eta=cfg.allow_large_eta)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    st = OscillatorState(0, 0, cfg.eta)
    meta = metadata(
        cfg,
        eta=cfg.eta,
        fraction_variable="x = q_z * exp(-eta)",
        mass=p.mass,
        variance=p.variance,
        excess_kurtosis=p.excess_kurtosis,
        concentration=an.light_cone_concentration(st, nm.MOMENTUM),
    )
    _emit_table(cfg, ["x", "density"], zip(p.nodes, p.density), meta)
    return EXIT_OK


def _emit_table(cfg: RunConfig, header, rows, meta) -> None:
    rows = list(rows)
    if cfg.output_format == "csv":
        emit(render_csv(header, rows, meta, cfg), cfg.out)
    else:
        doc = {
            "config": cfg.resolved(),
            "metadata": meta,
            "columns": header,
            "rows": [[float(x) if not isinstance(x, (int, np.integer)) else int(x) for x in r] for r in rows],
        }
        emit(render_json(doc), cfg.out)


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg, file_doc = resolve_config(args)
    except (ConfigError, TypeError, ValueError) as exc:
        print(f"covosc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        if cfg.command == "sample":
            return cmd_sample(cfg)
        if cfg.command == "verify":
            return cmd_verify(cfg, file_doc)
        if cfg.command == "scan":
            return cmd_scan(cfg)
        if cfg.command == "decompose":
            return cmd_decompose(cfg)
        return cmd_parton(cfg)
    except ConfigError as exc:
        print(f"covosc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except nm.GridError as exc:
        print(f"covosc: unresolved grid: {exc}", file=sys.stderr)
        return EXIT_FAIL
