"""Command-line interface: DOS tables, point classification, sweeps, boundaries.

Options read ``HHF_<NAME>`` environment variables when the flag is absent.
Exit codes: 0 success, 2 invalid arguments, 3 numerical failure (partial
output is still written).
"""

from __future__ import annotations

import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import click
import numpy as np

from . import asymptotics as asy
from . import dos
from .boundary import (
    BoundaryConfig,
    BoundaryKind,
    BoundaryPoint,
    find_crossing,
    trace,
)
from .errors import DomainError
from .free_energy import PhaseLabel, PhaseRecord, classify
from .meanfield import DEFAULT_SOLVER, ModelPoint, SolverConfig

EXIT_INVALID = 2
EXIT_NUMERICAL = 3

DOS_HEADER = ("eps", "n0", "series_near0", "series_near4")
SWEEP_HEADER = ("U", "mu", "nu", "phase", "f_p", "f_f", "f_af", "m_winner",
                "n_f_solutions", "n_af_solutions", "error")
BOUNDARY_HEADER = ("U", "mu_star", "nu_low", "nu_high", "f_crossing", "mu_app", "abs_err",
                   "error")
REPORT_HEADER = ("U", "quantity", "numeric", "asymptotic", "abs_err", "nominal_order")

MIXED = "MIXED"
# Doping tolerance for accepting a bracket endpoint as attaining nu.
NU_TOL = 1e-7
# d(nu)/d(mu) above which a stalled bracket is treated as a doping jump.
_JUMP_SLOPE = 1e3
# Chemical potential beyond which every phase is completely filled.
_FULL_MARGIN = 1.0


def fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return "%.17g" % value
    return str(value)


def _json_value(value) -> str:
    if isinstance(value, (float, np.floating)) and not math.isfinite(value):
        return "null"
    if value is None:
        return "null"
    if isinstance(value, (bool, np.bool_, int, np.integer, float, np.floating)):
        return fmt(value)
    return json.dumps(str(value))


def render(header, rows, output_format: str) -> str:
    """CSV or JSON text for a list of row dicts keyed by ``header``."""
    if output_format == "csv":
        buf = io.StringIO()
        buf.write(",".join(header) + "\n")
        for row in rows:
            buf.write(",".join(_csv_cell(fmt(row.get(k))) for k in header) + "\n")
        return buf.getvalue()
    items = []
    for row in rows:
        fields = ", ".join(f"{json.dumps(k)}: {_json_value(row.get(k))}" for k in header)
        items.append("  {" + fields + "}")
    return "[\n" + ",\n".join(items) + "\n]\n" if items else "[]\n"


def _csv_cell(text: str) -> str:
    if any(ch in text for ch in ',"\n'):
        return '"' + text.replace('"', '""') + '"'
    return text


# Grids


def parse_values(text: str) -> tuple[float, ...]:
    """``lo:hi:count`` (inclusive linspace) or a comma list; ``4pi-x`` allowed."""
    text = text.strip()
    if not text:
        raise DomainError("empty grid")
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise DomainError(f"range {text!r} must be lo:hi:count")
        lo, hi = _number(parts[0]), _number(parts[1])
        try:
            count = int(parts[2])
        except ValueError:
            raise DomainError(f"count in {text!r} is not an integer") from None
        _check_range(lo, hi, count)
        return tuple(float(v) for v in np.linspace(lo, hi, count))
    return tuple(_number(t) for t in text.split(","))


def _number(token: str) -> float:
    token = token.strip().lower()
    try:
        if token.startswith("4pi-"):
            return asy.FOUR_PI - float(token[4:])
        if token == "4pi":
            return asy.FOUR_PI
        value = float(token)
    except ValueError:
        raise DomainError(f"cannot read {token!r} as a number") from None
    if not math.isfinite(value):
        raise DomainError(f"{token!r} is not finite")
    return value


def _check_range(lo: float, hi: float, count: int) -> None:
    if count < 1:
        raise DomainError("counts must be at least 1")
    if lo > hi:
        raise DomainError(f"range needs lo <= hi, got {lo!r} > {hi!r}")
    if count == 1 and lo != hi:
        raise DomainError("a single-point range needs lo == hi")


@dataclass(frozen=True)
class SweepSpec:
    """A rectangular (U, mu) or (U, nu) grid and how to emit it."""

    u_range: tuple[float, float, int]
    mu_range: tuple[float, float, int] | None = None
    nu_range: tuple[float, float, int] | None = None
    output_format: str = "csv"
    parallelism: int = 1

    def __post_init__(self) -> None:
        if (self.mu_range is None) == (self.nu_range is None):
            raise DomainError("exactly one of mu_range and nu_range is required")
        for r in (self.u_range, self.mu_range, self.nu_range):
            if r is not None:
                _check_range(float(r[0]), float(r[1]), int(r[2]))
        if self.u_range[0] <= 0:
            raise DomainError("U must be positive")
        if self.nu_range is not None and not (-1.0 <= self.nu_range[0] and self.nu_range[1] <= 1.0):
            raise DomainError("nu must lie in [-1, 1]")
        if self.output_format not in ("csv", "json"):
            raise DomainError(f"unknown format {self.output_format!r}")
        if self.parallelism < 0:
            raise DomainError("parallelism must be nonnegative")

    @property
    def coordinate(self) -> str:
        return "mu" if self.mu_range is not None else "nu"

    def points(self) -> list[tuple[float, float]]:
        """Grid points in U-major order."""
        second = self.mu_range if self.mu_range is not None else self.nu_range
        us = np.linspace(*self.u_range[:2], int(self.u_range[2]))
        xs = np.linspace(*second[:2], int(second[2]))
        return [(float(u), float(x)) for u in us for x in xs]


@dataclass(frozen=True)
class ReportRow:
    U: float
    quantity: str
    numeric: float
    asymptotic: float
    abs_err: float
    nominal_order: str


# Doping inversion


@dataclass(frozen=True)
class Inversion:
    """Result of solving winner doping = nu for mu.

    For a mixed target, ``mu`` is the jump location, ``gap`` the doping
    interval no pure phase attains, and ``crossing`` the refined boundary
    when the phases on the two sides form a known pair.
    """

    U: float
    nu: float
    mu: float
    mixed: bool
    record: PhaseRecord
    gap: tuple[float, float] | None = None
    crossing: BoundaryPoint | None = None


_PAIR_KIND = {
    (PhaseLabel.AF, PhaseLabel.F): BoundaryKind.AF_F,
    (PhaseLabel.F, PhaseLabel.P): BoundaryKind.F_P,
    (PhaseLabel.AF, PhaseLabel.P): BoundaryKind.AF_P,
}


def invert_doping(U: float, nu: float, tol: float = 1e-11,
                  cfg: SolverConfig = DEFAULT_SOLVER, refine: bool = True) -> Inversion:
    """Solve for mu on the winner's doping, which is nondecreasing in mu.

    Negative targets use the particle-hole mirror.  If the two final
    endpoints straddle nu by more than NU_TOL the target lies in a mixed
    region.
    """
    if not (math.isfinite(U) and U > 0):
        raise DomainError(f"U must be finite and positive, got {U!r}")
    if not -1.0 <= nu <= 1.0:
        raise DomainError(f"nu must lie in [-1, 1], got {nu!r}")
    if not tol > 0:
        raise DomainError("tol must be positive")
    if nu < 0:
        inv = invert_doping(U, -nu, tol, cfg, refine)
        gap = None if inv.gap is None else (-inv.gap[1], -inv.gap[0])
        return Inversion(U, nu, -inv.mu, inv.mixed, classify(ModelPoint(U, -inv.mu), cfg),
                         gap, inv.crossing)
    if nu == 0:
        return Inversion(U, nu, 0.0, False, classify(ModelPoint(U, 0.0), cfg))

    lo, hi = 0.0, 0.5 * U + dos.BAND_EDGE + _FULL_MARGIN
    rec_lo = classify(ModelPoint(U, lo), cfg)
    rec_hi = classify(ModelPoint(U, hi), cfg)
    # Illinois false position on winner doping - nu, keeping the bracket.  A
    # bisection step is forced whenever two steps fail to halve the bracket;
    # after two such steps across a steep bracket the target is taken to sit
    # at a doping jump and plain bisection finishes the job.
    g_lo, g_hi = rec_lo.winner_doping - nu, rec_hi.winner_doping - nu
    kept, stalled, forced, ref = 0, 0, 0, hi - lo
    while hi - lo > tol:
        w = hi - lo
        mid = 0.5 * (lo + hi)
        if stalled >= 2 and g_hi - g_lo > _JUMP_SLOPE * w:
            forced += 1
        if stalled < 2 and forced < 2 and g_hi > g_lo:
            mid = min(max(lo - g_lo * w / (g_hi - g_lo), lo + 0.25 * tol), hi - 0.25 * tol)
        if not lo < mid < hi:
            break
        rec = classify(ModelPoint(U, mid), cfg)
        g = rec.winner_doping - nu
        if g < 0:
            lo, rec_lo, g_lo = mid, rec, g
            if kept == -1:
                g_hi *= 0.5
            kept = -1
        else:
            hi, rec_hi, g_hi = mid, rec, g
            if kept == 1:
                g_lo *= 0.5
            kept = 1
        if hi - lo <= 0.5 * ref:
            ref, stalled = hi - lo, 0
        else:
            stalled += 1
    d_lo, d_hi = rec_lo.winner_doping, rec_hi.winner_doping
    if abs(d_hi - nu) <= NU_TOL or abs(d_lo - nu) <= NU_TOL:
        if abs(d_hi - nu) <= abs(d_lo - nu):
            return Inversion(U, nu, hi, False, rec_hi)
        return Inversion(U, nu, lo, False, rec_lo)
    crossing = None
    gap = (d_lo, d_hi)
    kind = _PAIR_KIND.get((rec_lo.phase, rec_hi.phase))
    if refine and kind is not None:
        bcfg = BoundaryConfig(tol=tol, exploratory=True, solver=cfg)
        # Winner labels tie within rounding near the crossing, so the label
        # bracket can miss it by a few ulps of F; pad before refining.
        pad = 4.0 * max(hi - lo, tol)
        try:
            crossing = find_crossing(U, kind, (lo - pad, hi + pad), tol, bcfg)
        except (ArithmeticError, DomainError):
            crossing = None
        if crossing is not None:
            gap = (crossing.doping_low, crossing.doping_high)
    mu = crossing.mu_star if crossing is not None else 0.5 * (lo + hi)
    return Inversion(U, nu, mu, True, rec_lo, gap, crossing)


# Commands


def cmd_dos(eps_grid, output_format: str = "csv") -> str:
    rows = []
    for eps in eps_grid:
        eps = float(eps)
        if eps == 0.0:
            raise DomainError("the DOS grid must avoid eps = 0")
        a = abs(eps)
        rows.append({
            "eps": eps,
            "n0": float(dos.n0(eps)),
            "series_near0": dos.n0_series_near0(eps) if a <= dos.NEAR0_WINDOW else None,
            "series_near4": (dos.n0_series_near4(eps)
                             if dos.NEAR4_WINDOW <= a < dos.BAND_EDGE else None),
        })
    return render(DOS_HEADER, rows, output_format)


def sector_memberships(at: ModelPoint, delta: float | None = None,
                       m_bound: float | None = None) -> dict[str, bool]:
    out = {}
    for which, base in asy.FIGURE_PARAMS.items():
        params = asy.SectorParams(
            delta=base.delta if delta is None else delta,
            u0=base.u0,
            m_bound=base.m_bound if m_bound is None else m_bound,
        )
        out[which.value] = asy.in_sector(at, which, params)
    return out


def classify_report(U: float, mu: float | None = None, nu: float | None = None,
                    tol: float = 1e-11, delta: float | None = None,
                    m_bound: float | None = None) -> dict:
    """Fields describing one point, given mu or a target doping nu."""
    if (mu is None) == (nu is None):
        raise DomainError("give exactly one of mu and nu")
    report: dict = {"U": U}
    if nu is not None:
        inv = invert_doping(U, nu, tol)
        rec, mu = inv.record, inv.mu
        report["nu_target"] = nu
        if inv.mixed:
            report.update(phase=MIXED, mu=mu, gap_low=inv.gap[0], gap_high=inv.gap[1])
            if inv.crossing is not None:
                bp = inv.crossing
                report.update(boundary=bp.kind.value, mu_star=bp.mu_star,
                              f_crossing=bp.f_at_crossing)
            report["sectors"] = sector_memberships(ModelPoint(U, mu), delta, m_bound)
            return report
    else:
        rec = classify(ModelPoint(U, mu))
    report.update(
        phase=rec.phase.value, mu=mu, f_p=rec.f_p, f_f=rec.f_f, f_af=rec.f_af,
        doping=rec.winner_doping, magnetization=rec.winner_magnetization, tie=rec.tie,
        solutions=dict(rec.solution_inventory),
        sectors=sector_memberships(ModelPoint(U, mu), delta, m_bound),
    )
    return report


def cmd_classify(U: float, mu: float | None = None, nu: float | None = None,
                 tol: float = 1e-11, output_format: str = "text",
                 delta: float | None = None, m_bound: float | None = None) -> str:
    report = classify_report(U, mu, nu, tol, delta, m_bound)
    if output_format == "json":
        return _json_object(report) + "\n"
    lines = []
    for key, value in report.items():
        if isinstance(value, dict):
            value = " ".join(f"{k}={fmt(v)}" for k, v in value.items()) or "-"
        else:
            value = fmt(value) if value is not None else "-"
        lines.append(f"{key}: {value}")
    return "\n".join(lines) + "\n"


def _json_object(obj: dict) -> str:
    parts = []
    for k, v in obj.items():
        text = _json_object(v) if isinstance(v, dict) else _json_value(v)
        parts.append(f"{json.dumps(k)}: {text}")
    return "{" + ", ".join(parts) + "}"


def _sweep_row(args: tuple[float, float, str, float]) -> dict:
    U, x, coordinate, tol = args
    row: dict = {"U": U, "mu": x if coordinate == "mu" else None,
                 "nu": x if coordinate == "nu" else None}
    try:
        if coordinate == "mu":
            rec = classify(ModelPoint(U, x))
            row["nu"] = rec.winner_doping
            phase = rec.phase.value
        else:
            inv = invert_doping(U, x, tol, refine=False)
            rec = inv.record
            row["mu"] = inv.mu
            phase = MIXED if inv.mixed else rec.phase.value
        inv_counts = rec.solution_inventory
        row.update(
            phase=phase, f_p=rec.f_p, f_f=rec.f_f, f_af=rec.f_af,
            m_winner=None if phase == MIXED else rec.winner_magnetization,
            n_f_solutions=sum(v for k, v in inv_counts.items() if k.startswith("F.")),
            n_af_solutions=sum(v for k, v in inv_counts.items() if k.startswith("AF.")),
        )
    except (ArithmeticError, DomainError) as exc:
        row["error"] = f"{type(exc).__name__}: {exc}"
    return row


def resolve_parallelism(n: int) -> int:
    if n == 0:
        return os.cpu_count() or 1
    return n


def sweep_rows(spec: SweepSpec, tol: float = 1e-11) -> list[dict]:
    """Rows in U-major order; the worker count does not affect the result."""
    tasks = [(u, x, spec.coordinate, tol) for u, x in spec.points()]
    workers = resolve_parallelism(spec.parallelism)
    if workers == 1:
        return [_sweep_row(t) for t in tasks]
    chunk = max(1, len(tasks) // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_sweep_row, tasks, chunksize=chunk))


def cmd_sweep(spec: SweepSpec, tol: float = 1e-11) -> tuple[str, int]:
    """Rendered sweep and the number of failed points."""
    rows = sweep_rows(spec, tol)
    failed = sum(1 for r in rows if r.get("error"))
    return render(SWEEP_HEADER, rows, spec.output_format), failed


def _boundary_row(U: float, bp: BoundaryPoint | None, kind: BoundaryKind,
                  error: str | None) -> dict:
    row: dict = {"U": U}
    try:
        row["mu_app"] = asy_prediction(U, kind)
    except DomainError:
        row["mu_app"] = None
    if bp is not None:
        row.update(mu_star=bp.mu_star, nu_low=bp.doping_low, nu_high=bp.doping_high,
                   f_crossing=bp.f_at_crossing)
        if row["mu_app"] is not None:
            row["abs_err"] = abs(bp.mu_star - row["mu_app"])
    row["error"] = error
    return row


def asy_prediction(U: float, kind: BoundaryKind) -> float:
    if kind is BoundaryKind.AF_F:
        return asy.mu_I_app(U).value
    if kind is BoundaryKind.F_P:
        return asy.mu_II_app(U).value
    return asy.mu_III_app(U).value


def boundary_trace(kind: BoundaryKind, u_grid, tol: float, exploratory: bool = False):
    cfg = BoundaryConfig(tol=tol, exploratory=exploratory)
    tr = trace(kind, sorted(set(u_grid)), tol, cfg)
    by_u = {bp.U: bp for bp in tr.points}
    return [(U, by_u.get(U), tr.errors.get(U)) for U in tr.u_grid]


def cmd_boundary(kind: BoundaryKind | str, u_grid, tol: float = 1e-11,
                 output_format: str = "csv", exploratory: bool = False) -> tuple[str, int]:
    kind = BoundaryKind(kind)
    results = boundary_trace(kind, u_grid, tol, exploratory)
    rows = [_boundary_row(U, bp, kind, err) for U, bp, err in results]
    return render(BOUNDARY_HEADER, rows, output_format), sum(1 for _, _, e in results if e)


def small_parameter(U: float, kind: BoundaryKind) -> float:
    if kind is BoundaryKind.AF_F:
        return U
    if kind is BoundaryKind.F_P:
        return asy.FOUR_PI - U
    return math.exp(-2.0 * math.pi / math.sqrt(U))


def fit_slope(xs, ys) -> float | None:
    """Least-squares slope of log|y| against log x; None for fewer than two points."""
    pairs = [(x, y) for x, y in zip(xs, ys) if y > 0 and x > 0]
    if len(pairs) < 2:
        return None
    lx = np.log([p[0] for p in pairs])
    ly = np.log([p[1] for p in pairs])
    return float(np.polyfit(lx, ly, 1)[0])


def compare_rows(kind: BoundaryKind | str, u_grid, tol: float = 1e-11,
                 exploratory: bool = False) -> tuple[list[ReportRow], dict, int]:
    """Numeric boundary against its expansion, with a convergence fit.

    The fit is the log-log slope of abs_err against the small parameter
    (U for AF_F, 4 pi - U for F_P).  For AF_P the remainder constant
    C = abs_err / (U^{5/2} e^{-2 pi / sqrt(U)}) is reported per U together
    with its max/min spread.
    """
    kind = BoundaryKind(kind)
    results = boundary_trace(kind, u_grid, tol, exploratory)
    rows: list[ReportRow] = []
    for U, bp, _ in results:
        if bp is None:
            continue
        app = asy_prediction(U, kind)
        order = {BoundaryKind.AF_F: asy.MU_I.error, BoundaryKind.F_P: asy.MU_II.error,
                 BoundaryKind.AF_P: asy.MU_III.error}[kind]
        rows.append(ReportRow(U, "mu_star", bp.mu_star, app, abs(bp.mu_star - app), order))
        for name, num, ref in _doping_refs(U, bp, kind):
            rows.append(ReportRow(U, name, num, ref.value, abs(num - ref.value),
                                  ref.nominal_error_order))
    mu_rows = [r for r in rows if r.quantity == "mu_star"]
    fit: dict = {"kind": kind.value, "n_points": len(mu_rows)}
    if kind is BoundaryKind.AF_P:
        cs = [r.abs_err / (r.U**2.5 * small_parameter(r.U, kind)) for r in mu_rows]
        fit["C"] = cs
        fit["C_spread"] = max(cs) / min(cs) if cs and min(cs) > 0 else None
    else:
        fit["slope"] = fit_slope([small_parameter(r.U, kind) for r in mu_rows],
                                 [r.abs_err for r in mu_rows])
        fit["expected_slope"] = -4.5 if kind is BoundaryKind.AF_F else 7.0
    return rows, fit, sum(1 for _, _, e in results if e)


def _doping_refs(U: float, bp: BoundaryPoint, kind: BoundaryKind):
    if kind is BoundaryKind.AF_F:
        return [("nu_high", bp.doping_high, asy.nu_I_F(U))]
    if kind is BoundaryKind.F_P:
        return [("nu_low", bp.doping_low, asy.nu_II_F(U)),
                ("nu_high", bp.doping_high, asy.nu_II_P(U))]
    return [("nu_high", bp.doping_high, asy.nu_III_P(U)),
            ("nu_high_full_series", bp.doping_high, asy.d0P_sector_III(U))]


def cmd_compare(kind: BoundaryKind | str, u_grid, tol: float = 1e-11,
                output_format: str = "csv", exploratory: bool = False) -> tuple[str, int]:
    rows, fit, failed = compare_rows(kind, u_grid, tol, exploratory)
    dict_rows = [r.__dict__ for r in rows]
    if output_format == "json":
        body = render(REPORT_HEADER, dict_rows, "json").rstrip("\n")
        fit_text = _json_object({k: (fmt_list(v) if isinstance(v, list) else v)
                                 for k, v in fit.items()})
        return '{"rows": ' + body + ', "fit": ' + fit_text + "}\n", failed
    text = render(REPORT_HEADER, dict_rows, "csv")
    lines = [f"# {k}: {fmt_list(v) if isinstance(v, list) else fmt(v)}" for k, v in fit.items()]
    return text + "\n".join(lines) + "\n", failed


def fmt_list(values) -> str:
    return " ".join(fmt(v) for v in values)


# Click wiring


def _parse(text: str | None, name: str) -> tuple[float, ...] | None:
    if text is None:
        return None
    try:
        return parse_values(text)
    except DomainError as exc:
        raise click.BadParameter(str(exc), param_hint=f"--{name}") from None


def _range_of(text: str | None, name: str) -> tuple[float, float, int] | None:
    vals = _parse(text, name)
    if vals is None:
        return None
    if any(b < a for a, b in zip(vals[:-1], vals[1:])):
        raise click.BadParameter("grid must be nondecreasing", param_hint=f"--{name}")
    return vals[0], vals[-1], len(vals)


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        click.echo(text, nl=False)
        return
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _run(fn):
    """Map library errors to exit codes."""
    try:
        return fn()
    except DomainError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_INVALID)
    except ArithmeticError as exc:
        click.echo(f"numerical failure: {type(exc).__name__}: {exc}", err=True)
        sys.exit(EXIT_NUMERICAL)


def _finish(failed: int) -> None:
    if failed:
        click.echo(f"{failed} point(s) failed; see the error column", err=True)
        sys.exit(EXIT_NUMERICAL)


_out = click.option("--out", envvar="HHF_OUT", default=None, help="Output path (default stdout).")
_tol = click.option("--tol", envvar="HHF_TOL", type=float, default=1e-11, show_default=True,
                    help="Absolute tolerance in mu for root finding.")
_format = click.option("--format", "output_format", envvar="HHF_FORMAT",
                       type=click.Choice(["csv", "json"]), default="csv", show_default=True)
_kind = click.option("--kind", envvar="HHF_KIND", required=True,
                     type=click.Choice([k.value for k in BoundaryKind]))
_explore = click.option("--exploratory", is_flag=True, envvar="HHF_EXPLORATORY",
                        help="Allow U outside the window where the crossing is known.")


@click.group()
def main() -> None:
    """Hartree-Fock phase diagram of the 2D Hubbard model."""


@main.command("dos")
@click.option("--eps", envvar="HHF_EPS", default="-4.5:4.5:19", show_default=True,
              help="Grid as lo:hi:count or a comma list; must avoid 0.")
@_format
@_out
def dos_command(eps: str, output_format: str, out: str | None) -> None:
    """Tabulate N0 with its two series expansions."""
    grid = _parse(eps, "eps")
    _emit(_run(lambda: cmd_dos(grid, output_format)), out)


@main.command("classify")
@click.option("--U", "U", envvar="HHF_U", type=float, required=True)
@click.option("--mu", envvar="HHF_MU", type=float, default=None)
@click.option("--nu", envvar="HHF_NU", type=float, default=None)
@_tol
@click.option("--format", "output_format", envvar="HHF_FORMAT",
              type=click.Choice(["text", "json"]), default="text", show_default=True)
@click.option("--delta", envvar="HHF_DELTA", type=float, default=None,
              help="Sector margin delta.")
@click.option("--M", "m_bound", envvar="HHF_M", type=float, default=None,
              help="Sector II width constant.")
@_out
def classify_command(U, mu, nu, tol, output_format, delta, m_bound, out) -> None:
    """Classify one point given mu, or the doping nu."""
    if (mu is None) == (nu is None):
        raise click.UsageError("give exactly one of --mu and --nu")
    _emit(_run(lambda: cmd_classify(U, mu, nu, tol, output_format, delta, m_bound)), out)


@main.command("sweep")
@click.option("--U", "U", envvar="HHF_U", required=True, help="U grid, lo:hi:count.")
@click.option("--mu", envvar="HHF_MU", default=None, help="mu grid, lo:hi:count.")
@click.option("--nu", envvar="HHF_NU", default=None, help="Doping grid, lo:hi:count.")
@_tol
@_format
@click.option("--parallelism", envvar="HHF_PARALLELISM", type=int, default=1,
              show_default=True, help="Worker processes (0 = one per CPU).")
@_out
def sweep_command(U, mu, nu, tol, output_format, parallelism, out) -> None:
    """Classify every point of a (U, mu) or (U, nu) grid."""
    if (mu is None) == (nu is None):
        raise click.UsageError("give exactly one of --mu and --nu")
    try:
        spec = SweepSpec(u_range=_range_of(U, "U"), mu_range=_range_of(mu, "mu"),
                         nu_range=_range_of(nu, "nu"), output_format=output_format,
                         parallelism=parallelism)
    except DomainError as exc:
        raise click.UsageError(str(exc)) from None
    text, failed = _run(lambda: cmd_sweep(spec, tol))
    _emit(text, out)
    _finish(failed)


@main.command("boundary")
@_kind
@click.option("--U", "U", envvar="HHF_U", required=True,
              help="U values: lo:hi:count or a comma list (4pi-x accepted).")
@_tol
@_format
@_explore
@_out
def boundary_command(kind, U, tol, output_format, exploratory, out) -> None:
    """Trace a phase boundary over a U grid."""
    grid = _parse(U, "U")
    text, failed = _run(lambda: cmd_boundary(kind, grid, tol, output_format, exploratory))
    _emit(text, out)
    _finish(failed)


@main.command("compare")
@_kind
@click.option("--U", "U", envvar="HHF_U", required=True,
              help="U values: lo:hi:count or a comma list (4pi-x accepted).")
@_tol
@_format
@_explore
@_out
def compare_command(kind, U, tol, output_format, exploratory, out) -> None:
    """Compare a traced boundary with its asymptotic expansion."""
    grid = _parse(U, "U")
    text, failed = _run(lambda: cmd_compare(kind, grid, tol, output_format, exploratory))
    _emit(text, out)
    _finish(failed)


if __name__ == "__main__":
    main()
