"""Command-line front end.

Subcommands
-----------
fig       Sweep eta and emit the comparison curve family (rotating-wave
          doublet branches n = 0..6 for the resonance scheme nearest the
          requested rabi frequency, the order-1 energy identity curve, and the
          order-2 constraint-root curves where real) as CSV or JSON, plus a
          crossings sidecar locating intersections between rotating-wave and
          series curves.
solve     Emit one terminated-series solution (closed form for orders 1-2,
          numeric solver above) as JSON, with oracle validation attached.
validate  Run the invariant suite (identity grid, constraint-root set
          equality, oracle membership, rotating-wave sector agreement, cat
          identity) and write a JSON report; exit 1 naming any failing check.
cat       Construct the displaced-even-coherent target state and report
          parity, identity overlap, and leading amplitudes; optionally emit a
          Wigner grid.
oracle    Diagonalize the transformed Hamiltonian and print interior
          eigenvalues near a target.

Conventions: floats are written with %.12g so identical configurations give
byte-identical files; infeasible parameter regions produce no rows (never
placeholder zeros); exit codes are 0 success, 1 validation failure, 2 bad
arguments/paths, 3 solver non-convergence. The environment variable
IONTRAP_CUTOFF overrides the default basis cutoff of 150; an explicit
--cutoff flag overrides both.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import (
    ConstraintInfeasibleError,
    DegenerateQuadraticError,
    IonSeriesError,
    NoSolutionFoundError,
    PoleError,
    SingularRecurrenceError,
)
from .model import FockBasis, ModelParams, build_h_transformed
from .oracle import (
    hermitian_eigensystem,
    nearest_eigenpair,
    validate_series_solution,
)
from .rwa import RwaQuery, rwa_energy, rwa_hamiltonian, rwa_resonant_rabi
from .series import (
    SeriesSolution,
    appendix_quadratic,
    case1_closed_form,
    case2_closed_form,
    energy_identity_case1,
    eq7_residual,
    implied_detuning_case1,
    terminate_general,
)
from .states import cat_state, coherent_state, fidelity, parity, wigner_grid

DEFAULT_CUTOFF = 150
MIN_CUTOFF = 60

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_USAGE = 2
EXIT_NO_CONVERGENCE = 3


def _fmt(x: float) -> str:
    """Deterministic float rendering used for every emitted number."""
    x = float(x)
    if x == 0.0:
        x = 0.0  # canonicalize negative zero
    return f"{x:.12g}"


def _jfloat(x: float) -> float:
    """Round-trip a float through the deterministic rendering for JSON."""
    return float(_fmt(x))


class CliError(Exception):
    """Usage-level error carrying the exit code."""

    def __init__(self, message: str, code: int = EXIT_USAGE):
        super().__init__(message)
        self.code = code


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------

@dataclass
class RunConfig:
    """Validated run parameters shared by the subcommands."""

    command: str
    omega: Optional[float] = None
    eta_range: Optional[Tuple[float, float, float]] = None
    cutoff: int = DEFAULT_CUTOFF
    branches: Tuple[int, ...] = (1, -1)
    output_path: Optional[str] = None
    format: str = "csv"

    def __post_init__(self):
        if self.command not in ("fig", "solve", "validate", "cat", "oracle"):
            raise CliError(f"unknown command {self.command!r}")
        if self.cutoff < MIN_CUTOFF:
            raise CliError(f"cutoff must be >= {MIN_CUTOFF}, got {self.cutoff}")
        if self.eta_range is not None:
            lo, hi, step = self.eta_range
            if not (step > 0):
                raise CliError(f"eta step must be > 0, got {step}")
            if not (lo <= hi):
                raise CliError(f"eta range must have min <= max, got {lo} > {hi}")
        if self.format not in ("csv", "json"):
            raise CliError(f"format must be csv or json, got {self.format!r}")


def _parse_eta_range(text: str) -> Tuple[float, float, float]:
    parts = text.split(":")
    try:
        if len(parts) == 1:
            v = float(parts[0])
            return (v, v, 1.0)
        if len(parts) == 3:
            return (float(parts[0]), float(parts[1]), float(parts[2]))
    except ValueError:
        pass
    raise CliError(f"eta range must be 'min:max:step' or a single value, got {text!r}")


def _eta_points(rng: Tuple[float, float, float]) -> List[float]:
    lo, hi, step = rng
    if hi == lo:
        return [lo]
    n = int(round((hi - lo) / step))
    if abs(lo + n * step - hi) > 1e-9 * max(1.0, abs(hi)):
        n = int(math.floor((hi - lo) / step + 1e-12))
    return [lo + i * step for i in range(n + 1)]


def _default_cutoff() -> int:
    raw = os.environ.get("IONTRAP_CUTOFF")
    if raw is None:
        return DEFAULT_CUTOFF
    try:
        return int(raw)
    except ValueError:
        raise CliError(f"IONTRAP_CUTOFF must be an integer, got {raw!r}")


def _parse_branches(text: str) -> Tuple[int, ...]:
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if tok in ("+", "+1", "plus"):
            out.append(1)
        elif tok in ("-", "-1", "minus"):
            out.append(-1)
        else:
            raise CliError(f"branch must be + or -, got {tok!r}")
    return tuple(dict.fromkeys(out))


def _load_config_overrides(args: argparse.Namespace) -> None:
    """Fill unset CLI options from a JSON config file (flags win)."""
    if not getattr(args, "config", None):
        return
    try:
        with open(args.config, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(f"cannot read config {args.config}: {exc}")
    if not isinstance(data, dict):
        raise CliError("config file must hold a JSON object")
    mapping = {
        "omega": "omega",
        "eta": "eta",
        "cutoff": "cutoff",
        "out": "out",
        "output_path": "out",
        "format": "format",
        "branches": "branches",
        "order": "order",
        "branch": "branch",
        "detuning": "detuning",
        "suite": "suite",
        "grid": "grid",
    }
    for key, attr in mapping.items():
        if key in data and hasattr(args, attr) and getattr(args, attr) is None:
            value = data[key]
            if attr == "eta" and isinstance(value, (list, tuple)) and len(value) == 3:
                value = f"{value[0]}:{value[1]}:{value[2]}"
            setattr(args, attr, value)


def _write_text(path: Optional[str], text: str) -> None:
    if path is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
        return
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc}")


# ---------------------------------------------------------------------------
# fig
# ---------------------------------------------------------------------------

def _nearest_scheme(omega: float) -> RwaQuery:
    """Resonance nearest the requested rabi frequency; ties prefer M-scheme."""
    best = None
    for m in range(1, 7):
        cand = ("M", m, abs(omega - 2.0 ** (-m)))
        if best is None or cand[2] < best[2] - 1e-15:
            best = cand
    for k in range(1, 7):
        cand = ("K", k, abs(omega - float(k)))
        if best is None or cand[2] < best[2] - 1e-15:
            best = cand
    return RwaQuery(scheme=best[0], index=best[1])


@dataclass
class CurvePoint:
    eta: float
    energy: float
    source: str
    branch_label: str
    n_or_index: int


def _fig_curves(cfg: RunConfig, etas: List[float]):
    """All curve samples for the figure sweep.

    Returns (points, rwa_curves, other_curves) where the curve dicts map a
    label to per-eta values (None marks an infeasible gap).
    """
    omega = cfg.omega
    scheme = _nearest_scheme(omega)
    src_rwa = "rwa_eq10" if scheme.scheme == "M" else "rwa_eq12"
    points: List[CurvePoint] = []
    rwa_curves: Dict[str, List[Optional[float]]] = {}
    other_curves: Dict[str, List[Optional[float]]] = {}

    for n in range(0, 7):
        for sign in (1, -1):
            label = f"{src_rwa}[n={n},{'+' if sign == 1 else '-'}]"
            rwa_curves[label] = []
    other_curves["eq13"] = []
    for idx in (0, 1):
        other_curves[f"appendix_a3[{idx}]"] = []
        other_curves[f"appendix_a4[{idx}]"] = []

    for eta in etas:
        for n in range(0, 7):
            for sign in (1, -1):
                q = RwaQuery(scheme=scheme.scheme, index=scheme.index, n=n, sign=sign)
                e = rwa_energy(q, eta)
                label = f"{src_rwa}[n={n},{'+' if sign == 1 else '-'}]"
                rwa_curves[label].append(e)
                points.append(
                    CurvePoint(eta, e, src_rwa, "+" if sign == 1 else "-", n)
                )
        e13 = energy_identity_case1(omega, eta)
        other_curves["eq13"].append(e13)
        points.append(CurvePoint(eta, e13, "eq13", "", 0))
        try:
            q2 = appendix_quadratic(omega, eta)
        except DegenerateQuadraticError:
            q2 = None
        if q2 is not None and q2.discriminant >= 0:
            g2 = (eta / 2.0) ** 2
            root = math.sqrt(q2.discriminant)
            xs = [(-q2.B + root) / (2 * q2.A), (-q2.B - root) / (2 * q2.A)]
            ys = [(q2.B + root) / (2 * q2.A), (q2.B - root) / (2 * q2.A)]
            for idx, x in enumerate(xs):
                e = 2.0 + g2 + x
                other_curves[f"appendix_a3[{idx}]"].append(e)
                points.append(CurvePoint(eta, e, "appendix_a3", "+", idx))
            for idx, y in enumerate(ys):
                e = 2.0 + g2 - y
                other_curves[f"appendix_a4[{idx}]"].append(e)
                points.append(CurvePoint(eta, e, "appendix_a4", "-", idx))
        else:
            for idx in (0, 1):
                other_curves[f"appendix_a3[{idx}]"].append(None)
                other_curves[f"appendix_a4[{idx}]"].append(None)
    return points, rwa_curves, other_curves, scheme


def _curve_value(label: str, scheme: RwaQuery, omega: float, eta: float) -> Optional[float]:
    """Re-evaluate one labelled curve at arbitrary eta (None in a gap)."""
    if label.startswith("rwa_"):
        inside = label[label.index("[") + 1 : -1]
        n_part, sign_part = inside.split(",")
        q = RwaQuery(
            scheme=scheme.scheme,
            index=scheme.index,
            n=int(n_part.split("=")[1]),
            sign=1 if sign_part == "+" else -1,
        )
        return rwa_energy(q, eta)
    if label == "eq13":
        return energy_identity_case1(omega, eta)
    idx = int(label[label.index("[") + 1 : -1])
    try:
        q2 = appendix_quadratic(omega, eta)
    except DegenerateQuadraticError:
        return None
    if q2.discriminant < 0:
        return None
    root = math.sqrt(q2.discriminant)
    g2 = (eta / 2.0) ** 2
    if label.startswith("appendix_a3"):
        x = (-q2.B + root) / (2 * q2.A) if idx == 0 else (-q2.B - root) / (2 * q2.A)
        return 2.0 + g2 + x
    y = (q2.B + root) / (2 * q2.A) if idx == 0 else (q2.B - root) / (2 * q2.A)
    return 2.0 + g2 - y


def _find_crossings(cfg, etas, rwa_curves, other_curves, scheme) -> List[dict]:
    """Bracket sign changes of (rwa - other) on the grid and bisect to 1e-8."""
    crossings = []
    for rl, rvals in rwa_curves.items():
        for ol, ovals in other_curves.items():
            for i in range(len(etas) - 1):
                a, b = rvals[i], rvals[i + 1]
                c, d = ovals[i], ovals[i + 1]
                if None in (a, b, c, d):
                    continue
                f0, f1 = a - c, b - d
                if f0 == 0.0:
                    eta_c, e_c = etas[i], a
                elif f0 * f1 < 0:
                    lo, hi = etas[i], etas[i + 1]
                    flo = f0
                    for _ in range(200):
                        mid = 0.5 * (lo + hi)
                        rv = _curve_value(rl, scheme, cfg.omega, mid)
                        ov = _curve_value(ol, scheme, cfg.omega, mid)
                        if rv is None or ov is None:
                            break
                        fm = rv - ov
                        if flo * fm <= 0:
                            hi = mid
                        else:
                            lo, flo = mid, fm
                        if hi - lo < 1e-8:
                            break
                    eta_c = 0.5 * (lo + hi)
                    e_c = _curve_value(rl, scheme, cfg.omega, eta_c)
                    if e_c is None:
                        continue
                else:
                    continue
                crossings.append(
                    {
                        "eta": _jfloat(eta_c),
                        "energy": _jfloat(e_c),
                        "rwa": rl,
                        "other": ol,
                    }
                )
    crossings.sort(key=lambda r: (r["eta"], r["rwa"], r["other"]))
    return crossings


def run_figure(cfg: RunConfig) -> int:
    if cfg.omega is None:
        raise CliError("fig requires --omega")
    if cfg.eta_range is None:
        cfg.eta_range = (0.0, 1.0, 0.01)
    etas = _eta_points(cfg.eta_range)
    points, rwa_curves, other_curves, scheme = _fig_curves(cfg, etas)

    if cfg.format == "csv":
        lines = ["eta,energy,source,branch,n"]
        for p in points:
            lines.append(
                f"{_fmt(p.eta)},{_fmt(p.energy)},{p.source},{p.branch_label},{p.n_or_index}"
            )
        _write_text(cfg.output_path, "\n".join(lines) + "\n")
    else:
        rows = [
            {
                "eta": _jfloat(p.eta),
                "energy": _jfloat(p.energy),
                "source": p.source,
                "branch": p.branch_label,
                "n": p.n_or_index,
            }
            for p in points
        ]
        _write_text(cfg.output_path, json.dumps(rows, indent=1) + "\n")

    crossings = _find_crossings(cfg, etas, rwa_curves, other_curves, scheme)
    if cfg.output_path is not None:
        _write_text(cfg.output_path + ".crossings.json", json.dumps(crossings, indent=1) + "\n")
    scheme_label = f"{scheme.scheme}={scheme.index}"
    print(
        f"fig: omega={_fmt(cfg.omega)} scheme={scheme_label} rows={len(points)} "
        f"etas={len(etas)} crossings={len(crossings)}"
    )
    for c in crossings:
        print(
            f"crossing: eta={_fmt(c['eta'])} energy={_fmt(c['energy'])} "
            f"{c['rwa']} x {c['other']}"
        )
    return EXIT_OK


# ---------------------------------------------------------------------------
# solve
# ---------------------------------------------------------------------------

def _solution_payload(sol: SeriesSolution, cutoff: int, with_eq7: bool) -> dict:
    basis = FockBasis(cutoff=cutoff, spin_dim=2)
    report = validate_series_solution(sol, basis)
    d_eps = -sol.params.detuning / 2.0
    payload = {
        "order": sol.order,
        "branch": "+" if sol.branch == 1 else "-",
        "rabi": _jfloat(sol.params.rabi),
        "lamb_dicke": _jfloat(sol.params.lamb_dicke),
        "detuning": _jfloat(sol.params.detuning),
        "eps": _jfloat(d_eps),
        "energy": _jfloat(sol.energy),
        "z": _jfloat(sol.coeffs.z),
        "c0": _jfloat(sol.c0),
        "b": [_jfloat(v) for v in sol.coeffs.b],
        "c": [_jfloat(v) for v in sol.coeffs.c],
        "termination_residual": _jfloat(sol.termination_residual),
        "oracle": {
            "residual": _jfloat(report.residual),
            "eigen_gap": _jfloat(report.eigen_gap),
            "overlap": _jfloat(report.overlap),
            "passed": bool(report.passed),
            "inconclusive": bool(report.inconclusive),
        },
    }
    if with_eq7:
        payload["eq7_residual"] = _jfloat(
            eq7_residual(sol.params.rabi, sol.params.lamb_dicke, d_eps, sol.branch)
        )
    if sol.jacobian_rank is not None:
        payload["jacobian_rank"] = int(sol.jacobian_rank)
    if sol.oracle_gap is not None:
        payload["solver_oracle_gap"] = _jfloat(sol.oracle_gap)
    return payload


def run_solve(args: argparse.Namespace, cfg: RunConfig) -> int:
    order = args.order
    if order is None:
        raise CliError("solve requires --order")
    if cfg.eta_range is None:
        raise CliError("solve requires --eta")
    eta = _eta_points(cfg.eta_range)[0]
    branches = cfg.branches

    try:
        if order == 1:
            detuning = args.detuning if args.detuning is not None else 0.0
            eps = -detuning / 2.0
            sols = [case1_closed_form(eta, eps, b) for b in branches]
        elif order == 2:
            if cfg.omega is None:
                raise CliError("solve --order 2 requires --omega")
            sols = case2_closed_form(cfg.omega, eta, branches=branches)
        else:
            guess = None
            if args.guess:
                vals = [float(t) for t in args.guess.split(",")]
                if len(vals) != 3:
                    raise CliError("--guess needs rabi,eps,c0")
                guess = tuple(vals)
            sols = [
                terminate_general(
                    order,
                    b,
                    eta,
                    guess=guess,
                    fix=args.fix,
                    cutoff=cfg.cutoff,
                )
                for b in branches
            ]
    except (ConstraintInfeasibleError, SingularRecurrenceError, PoleError, DegenerateQuadraticError) as exc:
        raise CliError(f"solve: {exc}")
    except NoSolutionFoundError as exc:
        trace = ", ".join(_fmt(t) for t in (exc.residual_trace or []))
        raise CliError(
            f"solve: no convergence ({exc}); residual trace: [{trace}]",
            code=EXIT_NO_CONVERGENCE,
        )

    payloads = [_solution_payload(s, cfg.cutoff, with_eq7=(order == 2)) for s in sols]
    doc = {"command": "solve", "solutions": payloads}
    _write_text(cfg.output_path, json.dumps(doc, indent=1) + "\n")
    for p in payloads:
        print(
            f"solve: order={p['order']} branch={p['branch']} "
            f"rabi={_fmt(p['rabi'])} eps={_fmt(p['eps'])} energy={_fmt(p['energy'])} "
            f"oracle_gap={_fmt(p['oracle']['eigen_gap'])} passed={p['oracle']['passed']}"
        )
    return EXIT_OK


# ---------------------------------------------------------------------------
# validate
# ---------------------------------------------------------------------------

def _check_eq13(grid: Tuple[int, int]) -> dict:
    n_eta, n_eps = grid
    worst = 0.0
    count = 0
    for eta in np.linspace(0.01, 1.0, n_eta):
        for eps in np.linspace(-1.0, 1.0, n_eps):
            for branch in (1, -1):
                if 1.0 + 2.0 * branch * eps - eta * eta <= 1e-9:
                    continue
                sol = case1_closed_form(eta, eps, branch)
                ident = energy_identity_case1(sol.params.rabi, eta)
                worst = max(worst, abs(sol.energy - ident))
                count += 1
    return {"passed": bool(worst < 1e-12 and count > 0), "points": count, "max_error": _jfloat(worst)}


def _check_a3a4(n_draws: int = 100, seed: int = 12345) -> dict:
    rng = np.random.default_rng(seed)
    worst = 0.0
    evaluated = 0
    for _ in range(n_draws):
        omega = float(rng.uniform(0.0, 3.0))
        eta = float(rng.uniform(0.05, 1.2))
        q = appendix_quadratic(omega, eta)
        if q.discriminant < 0:
            continue
        g2 = (eta / 2.0) ** 2
        root = math.sqrt(q.discriminant)
        set_a3 = sorted([2 + g2 + (-q.B + s * root) / (2 * q.A) for s in (1, -1)])
        set_a4 = sorted([2 + g2 - (q.B + s * root) / (2 * q.A) for s in (1, -1)])
        worst = max(worst, max(abs(x - y) for x, y in zip(set_a3, set_a4)))
        evaluated += 1
    return {
        "passed": bool(worst < 1e-12 and evaluated > 0),
        "draws": n_draws,
        "real_root_draws": evaluated,
        "max_set_difference": _jfloat(worst),
    }


def _case_solutions(cutoff: int) -> List[SeriesSolution]:
    sols = [
        case1_closed_form(0.2, 0.0, 1),
        case1_closed_form(0.3, 0.1, 1),
        case1_closed_form(0.25, -0.05, -1),
    ]
    sols += case2_closed_form(0.5, 0.1)
    return sols


def _check_oracle_membership(cutoff: int, perturb: float) -> dict:
    results = []
    passed = True
    for sol in _case_solutions(cutoff):
        H = build_h_transformed(sol.params, FockBasis(cutoff))
        spec = hermitian_eigensystem(H)
        target = sol.energy + perturb
        gap = abs(nearest_eigenpair(spec, target).value - target)
        ok = gap < 1e-6
        passed = passed and ok
        results.append(
            {
                "order": sol.order,
                "branch": "+" if sol.branch == 1 else "-",
                "energy": _jfloat(target),
                "eigen_gap": _jfloat(gap),
                "passed": bool(ok),
            }
        )
    return {"passed": bool(passed), "solutions": results}


def _check_case_oracle(order: int, cutoff: int) -> dict:
    if order == 1:
        sols = [case1_closed_form(0.2, 0.0, 1), case1_closed_form(0.3, 0.1, -1)]
    else:
        sols = case2_closed_form(0.5, 0.1)
    basis = FockBasis(cutoff=cutoff, spin_dim=2)
    results = []
    passed = True
    for sol in sols:
        rep = validate_series_solution(sol, basis)
        ok = rep.passed
        if order == 2:
            r7 = eq7_residual(
                sol.params.rabi, sol.params.lamb_dicke, -sol.params.detuning / 2.0, sol.branch
            )
            ok = ok and r7 < 1e-9
        passed = passed and ok
        results.append(
            {
                "branch": "+" if sol.branch == 1 else "-",
                "energy": _jfloat(sol.energy),
                "residual": _jfloat(rep.residual),
                "eigen_gap": _jfloat(rep.eigen_gap),
                "overlap": _jfloat(rep.overlap),
                "passed": bool(ok),
            }
        )
    return {"passed": bool(passed), "solutions": results}


def _check_rwa(cutoff: int = 60) -> dict:
    worst = 0.0
    basis = FockBasis(cutoff=cutoff, spin_dim=2)
    for scheme, indices in (("M", (1, 2)), ("K", (2, 3))):
        for index in indices:
            for eta in (0.1, 0.5):
                q0 = RwaQuery(scheme=scheme, index=index)
                H = rwa_hamiltonian(q0, eta, basis).entries
                for n in range(0, 21):
                    i_dn = 2 * (n + 1)
                    i_up = 2 * n + 1
                    sub = H[np.ix_([i_dn, i_up], [i_dn, i_up])]
                    evals = np.linalg.eigvalsh(sub)
                    for sign, e_sec in ((-1, evals[0]), (1, evals[1])):
                        q = RwaQuery(scheme=scheme, index=index, n=n, sign=sign)
                        worst = max(worst, abs(rwa_energy(q, eta) - e_sec))
    return {"passed": bool(worst < 1e-10), "max_error": _jfloat(worst)}


def _check_cat(cutoff: int = 100) -> dict:
    worst = 1.0
    for eta in (0.2, 0.8):
        v = cat_state(eta, FockBasis(cutoff=cutoff, spin_dim=1))
        worst = min(worst, v.meta["identity_overlap"])
    return {"passed": bool(worst > 1.0 - 1e-9), "min_identity_overlap": _jfloat(worst)}


SUITES = {
    "eq13": ("eq13_identity",),
    "a3a4": ("a3a4_set_equality",),
    "case1": ("case1_oracle",),
    "case2": ("case2_oracle",),
    "rwa": ("rwa_sector_agreement",),
    "cat": ("cat_identity",),
    "oracle": ("oracle_membership",),
    "all": (
        "eq13_identity",
        "a3a4_set_equality",
        "case1_oracle",
        "case2_oracle",
        "rwa_sector_agreement",
        "cat_identity",
        "oracle_membership",
    ),
}


def run_validate(args: argparse.Namespace, cfg: RunConfig) -> int:
    suite = args.suite or "all"
    if suite not in SUITES:
        raise CliError(f"unknown suite {suite!r}; choose from {sorted(SUITES)}")
    grid = (50, 50)
    if args.grid:
        try:
            a, b = args.grid.lower().split("x")
            grid = (int(a), int(b))
        except ValueError:
            raise CliError(f"--grid must look like 50x50, got {args.grid!r}")
    perturb = args.perturb_energy or 0.0

    checks = {}
    for name in SUITES[suite]:
        if name == "eq13_identity":
            checks[name] = _check_eq13(grid)
        elif name == "a3a4_set_equality":
            checks[name] = _check_a3a4()
        elif name == "case1_oracle":
            checks[name] = _check_case_oracle(1, cfg.cutoff)
        elif name == "case2_oracle":
            checks[name] = _check_case_oracle(2, cfg.cutoff)
        elif name == "rwa_sector_agreement":
            checks[name] = _check_rwa()
        elif name == "cat_identity":
            checks[name] = _check_cat()
        elif name == "oracle_membership":
            checks[name] = _check_oracle_membership(cfg.cutoff, perturb)

    all_passed = bool(all(c["passed"] for c in checks.values()))
    report = {"command": "validate", "suite": suite, "passed": all_passed, "checks": checks}
    _write_text(cfg.output_path, json.dumps(report, indent=1) + "\n")
    failing = [name for name, c in checks.items() if not c["passed"]]
    if failing:
        print(f"validate: FAILED checks: {', '.join(failing)}")
        return EXIT_VALIDATION
    print(f"validate: all {len(checks)} check(s) passed (suite={suite})")
    return EXIT_OK


# ---------------------------------------------------------------------------
# cat / oracle
# ---------------------------------------------------------------------------

def run_cat(args: argparse.Namespace, cfg: RunConfig) -> int:
    if cfg.eta_range is None:
        raise CliError("cat requires --eta")
    eta = _eta_points(cfg.eta_range)[0]
    basis = FockBasis(cutoff=cfg.cutoff, spin_dim=1)
    v = cat_state(eta, basis)
    coh = coherent_state(1j * eta, basis)  # the displaced lobe, for reference
    n_show = min(basis.cutoff, 16)
    doc = {
        "command": "cat",
        "eta": _jfloat(eta),
        "cutoff": basis.cutoff,
        "identity_overlap": _jfloat(v.meta["identity_overlap"]),
        "parity": _jfloat(parity(v)),
        "fidelity_vs_coherent": _jfloat(fidelity(v, coh)),
        "amplitudes": [[_jfloat(a.real), _jfloat(a.imag)] for a in v.amplitudes[:n_show]],
    }
    _write_text(cfg.output_path, json.dumps(doc, indent=1) + "\n")
    if args.wigner:
        rng_w = _parse_eta_range(args.wigner)
        axis = _eta_points((rng_w[0], rng_w[1], rng_w[2]))
        W = wigner_grid(v, np.array(axis), np.array(axis))
        lines = ["x,p,w"]
        for i, p in enumerate(axis):
            for j, x in enumerate(axis):
                lines.append(f"{_fmt(x)},{_fmt(p)},{_fmt(W[i, j])}")
        out = (cfg.output_path or "cat") + ".wigner.csv"
        _write_text(out, "\n".join(lines) + "\n")
        print(f"cat: wigner grid {len(axis)}x{len(axis)} -> {out}")
    print(
        f"cat: eta={_fmt(eta)} parity={_fmt(doc['parity'])} "
        f"identity_overlap={_fmt(doc['identity_overlap'])}"
    )
    return EXIT_OK


def run_oracle(args: argparse.Namespace, cfg: RunConfig) -> int:
    if cfg.omega is None or cfg.eta_range is None:
        raise CliError("oracle requires --omega and --eta")
    eta = _eta_points(cfg.eta_range)[0]
    detuning = args.detuning if args.detuning is not None else 0.0
    p = ModelParams(rabi=cfg.omega, lamb_dicke=eta, detuning=detuning)
    H = build_h_transformed(p, FockBasis(cfg.cutoff))
    spec = hermitian_eigensystem(H)
    interior = spec.interior()
    count = min(args.count or 20, interior.size)
    doc = {
        "command": "oracle",
        "rabi": _jfloat(cfg.omega),
        "lamb_dicke": _jfloat(eta),
        "detuning": _jfloat(detuning),
        "cutoff": cfg.cutoff,
        "interior_eigenvalues": [_jfloat(v) for v in interior[:count]],
    }
    if args.target is not None:
        pair = nearest_eigenpair(spec, args.target)
        doc["nearest"] = {
            "target": _jfloat(args.target),
            "eigenvalue": _jfloat(pair.value),
            "gap_to_next": _jfloat(pair.gap_to_next),
        }
    _write_text(cfg.output_path, json.dumps(doc, indent=1) + "\n")
    print(
        f"oracle: cutoff={cfg.cutoff} interior={interior.size} "
        f"lowest={_fmt(interior[0])}"
    )
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing and dispatch
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ionseries",
        description="Terminated-series spectra of a laser-driven trapped ion, "
        "with rotating-wave references and a diagonalization oracle.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="JSON file with run parameters (flags win)")
        sp.add_argument("--cutoff", type=int, default=None, help="basis cutoff (>= 60)")
        sp.add_argument("--out", default=None, help="output path (default stdout)")
        sp.add_argument("--format", choices=("csv", "json"), default=None)
        sp.add_argument("--eta", default=None, help="eta value or min:max:step range")

    sp = sub.add_parser("fig", help="emit comparison curve family over an eta sweep")
    common(sp)
    sp.add_argument("--omega", type=float, default=None, help="rabi frequency for the sweep")
    sp.add_argument("--branches", default=None, help="comma list of + and -")

    sp = sub.add_parser("solve", help="emit one terminated-series solution")
    common(sp)
    sp.add_argument("--order", type=int, default=None, help="termination order N >= 1")
    sp.add_argument("--branch", default=None, help="+ or - (default both)")
    sp.add_argument("--omega", type=float, default=None, help="rabi frequency (order 2)")
    sp.add_argument("--detuning", type=float, default=None, help="detuning (order 1)")
    sp.add_argument("--guess", default=None, help="rabi,eps,c0 start (order >= 3)")
    sp.add_argument("--fix", choices=("eps", "rabi"), default=None)

    sp = sub.add_parser("validate", help="run the invariant suite")
    common(sp)
    sp.add_argument("--suite", default=None, help=f"one of {sorted(SUITES)}")
    sp.add_argument("--grid", default=None, help="identity grid size, e.g. 50x50")
    sp.add_argument(
        "--perturb-energy",
        type=float,
        default=None,
        help="negative-control hook: offset added to energies in oracle_membership",
    )

    sp = sub.add_parser("cat", help="construct the displaced-even-coherent state")
    common(sp)
    sp.add_argument("--wigner", default=None, help="grid min:max:step for a Wigner CSV")

    sp = sub.add_parser("oracle", help="diagonalize the transformed Hamiltonian")
    common(sp)
    sp.add_argument("--omega", type=float, default=None, help="rabi frequency")
    sp.add_argument("--detuning", type=float, default=None)
    sp.add_argument("--count", type=int, default=None, help="how many eigenvalues to list")
    sp.add_argument("--target", type=float, default=None, help="report nearest eigenvalue")

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        _load_config_overrides(args)
        branches = (1, -1)
        if getattr(args, "branch", None):
            branches = _parse_branches(args.branch)
        elif getattr(args, "branches", None):
            branches = _parse_branches(args.branches)
        fmt = args.format
        if fmt is None:
            out = args.out
            fmt = "json" if (out and out.endswith(".json")) else "csv"
        cfg = RunConfig(
            command=args.command,
            omega=getattr(args, "omega", None),
            eta_range=_parse_eta_range(args.eta) if args.eta else None,
            cutoff=args.cutoff if args.cutoff is not None else _default_cutoff(),
            branches=branches,
            output_path=args.out,
            format=fmt,
        )
        if args.command == "fig":
            return run_figure(cfg)
        if args.command == "solve":
            return run_solve(args, cfg)
        if args.command == "validate":
            return run_validate(args, cfg)
        if args.command == "cat":
            return run_cat(args, cfg)
        if args.command == "oracle":
            return run_oracle(args, cfg)
        raise CliError(f"unknown command {args.command!r}")
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except IonSeriesError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
