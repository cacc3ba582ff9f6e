"""Command-line front end: ``fraczero <command> ...``.

Exit codes: 0 success, 1 usage error (bad flags, bad input, unsupported
request), 2 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from . import closed_forms
from .complex_poly import load_poly, monic, poly_from_json, poly_to_json, recenter
from .frac_calculus import DomainError, Kind, frac_derivative
from .mahler import bound_report, bound_sweep, mahler_of_frac
from .path_tracker import CollisionError, TrackOptions, classify_paths, track
from .root_solver import ConvergenceError, oracle_solve, pairing_distance, solve_all
from .svg import StyleOptions, SweepTable, emit_paths_svg, emit_sweep_svg

COMMANDS = ("deriv", "roots", "track", "classify", "mahler", "bounds-sweep", "closed-form",
            "figures")


class UsageError(Exception):
    pass


class NumericalError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    poly_path: str | None = None
    kind: str = "rl"
    alpha: float | None = None
    alpha_min: float | None = None
    alpha_max: float | None = None
    step: float = 1 / 256
    steps: int = 101
    out: str | None = None
    svg: str | None = None
    out_dir: str | None = None
    verify: bool = False
    continue_past_origin: bool = False
    json: bool = False
    report: bool = False

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.alpha_min is not None and self.alpha_max is not None:
            if not self.alpha_min < self.alpha_max:
                raise UsageError("need --alpha-min < --alpha-max")


# -- output helpers ----------------------------------------------------------


def fmt(x: float) -> str:
    """17 significant digits: lossless for doubles."""
    return format(float(x), ".17g")


def pair(z) -> list[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def write_atomic(path: str | os.PathLike, data: bytes | str):
    """Write via a temporary file in the target directory, then rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if isinstance(data, str):
        data = data.encode("utf-8")
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def paths_csv(ps) -> str:
    lines = ["path_id,alpha,re,im,event"]
    for k, p in enumerate(ps.paths):
        for a, z in zip(p.alphas, p.zs):
            lines.append(f"{k},{fmt(a)},{fmt(z.real)},{fmt(z.imag)},{p.event_at(float(a))}")
    return "\n".join(lines) + "\n"


def sweep_rows(reports) -> list[tuple[float, float, str, float | None, bool | None]]:
    rows = []
    for r in reports:
        if not r.bounds:
            rows.append((r.alpha, r.measure, "", None, None))
        for b in r.bounds:
            if b.applicable:
                rows.append((r.alpha, r.measure, b.name, b.value, b.satisfied))
    return rows


def sweep_csv(reports) -> str:
    lines = ["alpha,measure,bound_name,bound_value,satisfied"]
    for a, m, name, val, ok in sweep_rows(reports):
        v = "" if val is None else fmt(val)
        s = "" if ok is None else str(ok).lower()
        lines.append(f"{fmt(a)},{fmt(m)},{name},{v},{s}")
    return "\n".join(lines) + "\n"


def sweep_table(reports) -> SweepTable:
    names: list[str] = []
    for r in reports:
        for b in r.bounds:
            if b.applicable and b.name not in names:
                names.append(b.name)
    curves = []
    for name in names:
        vals = []
        for r in reports:
            hit = [b.value for b in r.bounds if b.name == name and b.applicable]
            vals.append(hit[0] if hit else float("nan"))
        curves.append((name, tuple(vals)))
    return SweepTable(tuple(r.alpha for r in reports), tuple(r.measure for r in reports),
                      tuple(curves))


def _emit(text: str, out: str | None):
    if out:
        write_atomic(out, text)
    else:
        sys.stdout.write(text)


def _threads() -> int:
    raw = os.environ.get("FRACZERO_THREADS", "")
    try:
        cap = int(raw) if raw else (os.cpu_count() or 1)
    except ValueError:
        raise UsageError(f"FRACZERO_THREADS must be an integer, got {raw!r}")
    return max(1, cap)


# -- commands ----------------------------------------------------------------


def _poly(cfg: RunConfig):
    if not cfg.poly_path:
        raise UsageError("--poly is required")
    try:
        return load_poly(cfg.poly_path)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {cfg.poly_path}: {exc}")


def _need(value, flag: str):
    if value is None:
        raise UsageError(f"{flag} is required")
    return value


def _cmd_deriv(cfg: RunConfig) -> str:
    p = _poly(cfg)
    d = frac_derivative(p, _need(cfg.alpha, "--alpha"), cfg.kind)
    obj = {"kind": d.kind.value, "alpha": d.alpha, "center": pair(d.center),
           "prefactor_exponent": d.prefactor_exponent, "prefactor_scale": pair(d.prefactor_scale)}
    if d.is_zero:
        obj["zero"] = True
    else:
        obj.update(poly_to_json(d.bracket))
    if cfg.json:
        return json.dumps(obj) + "\n"
    if d.is_zero:
        return f"D^{d.alpha} p = 0 (Caputo, order exceeds degree)\n"
    terms = " + ".join(f"({c.real:.6g}{c.imag:+.6g}j) y^{j}" for j, c in enumerate(d.bracket.coeffs))
    return (f"D^{d.alpha} p = ({d.prefactor_scale:.6g}) y^{d.prefactor_exponent:g} * [{terms}]"
            f"  with y = x - ({d.center:.6g})\n")


def _cmd_roots(cfg: RunConfig) -> str:
    p = _poly(cfg)
    rs = solve_all(p, warn=False)
    if not rs.converged:
        raise NumericalError("root iteration did not converge")
    obj = {"roots": [pair(z) for z in rs.roots], "residuals": rs.residuals.tolist(),
           "ill_conditioned": rs.ill_conditioned}
    if cfg.verify:
        ref = oracle_solve(p)
        obj["oracle_max_pairing_distance"] = pairing_distance(rs.roots, ref.roots)
    return json.dumps(obj) + "\n"


def _track(cfg: RunConfig):
    p = _poly(cfg)
    lo = cfg.alpha_min if cfg.alpha_min is not None else 0.0
    opts = TrackOptions(step=cfg.step, continue_past_origin=cfg.continue_past_origin)
    return track(p, cfg.kind, lo, cfg.alpha_max, opts)


def _cmd_track(cfg: RunConfig) -> str:
    ps = _track(cfg)
    _emit(paths_csv(ps), cfg.out)
    if cfg.svg:
        write_atomic(cfg.svg, emit_paths_svg(ps))
    return ""


def _cmd_classify(cfg: RunConfig) -> str:
    ps = _track(cfg)
    rows = [{"path_index": s.path_index, "terminal_integer": s.terminal_integer,
             "derivative_zero_count": s.derivative_zero_count, "arc_length": s.arc_length,
             "start_root": pair(ps.paths[s.path_index].start_root)}
            for s in classify_paths(ps)]
    return json.dumps(rows) + "\n"


def _cmd_mahler(cfg: RunConfig) -> str:
    p = _poly(cfg)
    a = _need(cfg.alpha, "--alpha")
    if cfg.report:
        return json.dumps(bound_report(p, a, cfg.kind).to_json()) + "\n"
    return json.dumps({"alpha": a, "kind": Kind.parse(cfg.kind).value,
                       "measure": mahler_of_frac(p, a, cfg.kind)}) + "\n"


def _sweep(p, kind, lo, hi, steps):
    if steps < 1:
        raise UsageError("--steps must be positive")
    alphas = np.linspace(lo, hi, steps) if steps > 1 else np.array([lo])
    return bound_sweep(monic(p), alphas.tolist(), kind)


def _cmd_bounds_sweep(cfg: RunConfig) -> str:
    p = _poly(cfg)
    reports = _sweep(p, cfg.kind, _need(cfg.alpha_min, "--alpha-min"),
                     _need(cfg.alpha_max, "--alpha-max"), cfg.steps)
    _emit(sweep_csv(reports), cfg.out)
    if cfg.svg:
        write_atomic(cfg.svg, emit_sweep_svg(sweep_table(reports)))
    return ""


def _cmd_closed_form(cfg: RunConfig) -> str:
    p = monic(_poly(cfg))
    a = _need(cfg.alpha, "--alpha")
    if p.degree == 1:
        z = closed_forms.linear_path(p.coeffs[0], p.center, a)
        return json.dumps({"alpha": a, "roots": [pair(z)]}) + "\n"
    if p.degree == 2:
        q = closed_forms.quad_paths(p.coeffs[1], p.coeffs[0], p.center, a)
        return json.dumps({"alpha": a, "roots": [pair(q.z1), pair(q.z2)],
                           "discriminant": pair(q.discriminant)}) + "\n"
    raise UsageError(f"no closed form for degree {p.degree}; use track")


def _figure_job(job: dict, out_dir: Path, data) -> list[str]:
    p = poly_from_json(json.loads(data.joinpath(job["poly"]).read_text()))
    if "recenter" in job:
        p = recenter(p, complex(*job["recenter"]))
    name, kind = job["name"], job["kind"]
    written = []
    if "sweep" in job:
        lo, hi, steps = job["sweep"]
        reports = _sweep(p, kind, lo, hi, steps)
        write_atomic(out_dir / f"{name}.csv", sweep_csv(reports))
        write_atomic(out_dir / f"{name}.svg",
                     emit_sweep_svg(sweep_table(reports), StyleOptions(title=name)))
        written += [f"{name}.csv", f"{name}.svg"]
    else:
        lo, hi = job["alpha"]
        opts = TrackOptions(continue_past_origin=job.get("continue", False))
        ps = track(p, kind, lo, hi, opts)
        write_atomic(out_dir / f"{name}.csv", paths_csv(ps))
        style = StyleOptions(title=name, mode=job.get("mode", "plane"))
        write_atomic(out_dir / f"{name}.svg", emit_paths_svg(ps, style))
        written += [f"{name}.csv", f"{name}.svg"]
    return written


def _cmd_figures(cfg: RunConfig) -> str:
    out_dir = Path(_need(cfg.out_dir, "--out-dir"))
    data = resources.files("fraczero").joinpath("data")
    jobs = json.loads(data.joinpath("figures.json").read_text())
    with ThreadPoolExecutor(max_workers=min(_threads(), len(jobs))) as pool:
        done = list(pool.map(lambda j: _figure_job(j, out_dir, data), jobs))
    return "".join(f"{out_dir / f}\n" for files in done for f in files)


HANDLERS = {
    "deriv": _cmd_deriv,
    "roots": _cmd_roots,
    "track": _cmd_track,
    "classify": _cmd_classify,
    "mahler": _cmd_mahler,
    "bounds-sweep": _cmd_bounds_sweep,
    "closed-form": _cmd_closed_form,
    "figures": _cmd_figures,
}


def run(config: RunConfig) -> int:
    """Execute one command; returns the process exit code."""
    try:
        text = HANDLERS[config.command](config)
    except (UsageError, DomainError, ValueError) as exc:
        print(f"fraczero {config.command}: {exc}", file=sys.stderr)
        return 1
    except (NumericalError, ConvergenceError, CollisionError, FloatingPointError) as exc:
        print(f"fraczero {config.command}: numerical failure: {exc}", file=sys.stderr)
        return 2
    if text:
        sys.stdout.write(text)
    return 0


# -- argument parsing --------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="fraczero", description="Zeros of fractional derivatives of polynomials.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def poly(sp):
        sp.add_argument("--poly", required=True, dest="poly_path", help="polynomial JSON file")

    def kind(sp):
        sp.add_argument("--kind", default="rl", choices=["rl", "caputo"])

    sp = sub.add_parser("deriv", help="bracket polynomial and prefactor of D^alpha p")
    poly(sp), kind(sp)
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--json", action="store_true")

    sp = sub.add_parser("roots", help="roots of p")
    poly(sp)
    sp.add_argument("--verify", action="store_true", help="cross-check with the companion oracle")

    for name in ("track", "classify"):
        sp = sub.add_parser(name, help="follow zero paths in alpha" if name == "track"
                            else "terminal integer and arc length per path")
        poly(sp), kind(sp)
        sp.add_argument("--alpha-min", type=float, default=0.0)
        sp.add_argument("--alpha-max", type=float, default=None)
        sp.add_argument("--step", type=float, default=1 / 256)
        sp.add_argument("--continue-past-origin", action="store_true")
        if name == "track":
            sp.add_argument("--out", help="CSV output (default: stdout)")
            sp.add_argument("--svg")

    sp = sub.add_parser("mahler", help="Mahler measure of D^alpha p")
    poly(sp), kind(sp)
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--report", action="store_true", help="include every applicable bound")

    sp = sub.add_parser("bounds-sweep", help="measure and bounds over an alpha grid")
    poly(sp), kind(sp)
    sp.add_argument("--alpha-min", type=float, required=True)
    sp.add_argument("--alpha-max", type=float, required=True)
    sp.add_argument("--steps", type=int, default=101)
    sp.add_argument("--out")
    sp.add_argument("--svg")

    sp = sub.add_parser("closed-form", help="exact zeros for degree 1 and 2")
    poly(sp)
    sp.add_argument("--alpha", type=float, required=True)

    sp = sub.add_parser("figures", help="write the bundled figure reproductions")
    sp.add_argument("--out-dir", required=True)
    return ap


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    fields = RunConfig.__dataclass_fields__
    kwargs = {k: v for k, v in vars(ns).items() if k in fields and v is not None}
    return RunConfig(**kwargs)


def main(argv: list[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(ns)
    except UsageError as exc:
        print(f"fraczero: {exc}", file=sys.stderr)
        return 1
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
