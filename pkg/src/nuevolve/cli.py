"""Command line interface: configuration, scenario orchestration, and reports.

Runs are described by a single JSON config file; flags only select the
command, paths, and tolerance overrides, so a run is reproducible from its
config alone.  Commands:

    decompose   sample (eps, mu) and tabulate the triangular factorization
                together with identity-check residuals
    flow        integrate the constraint flow and tabulate the trajectory
                with its certification residuals
    evolve      tabulate closed-form state amplitudes and metric norms
    verify      compare the closed form against the direct propagator and
                write a JSON report
    spectrum    eigenvalues of the constant-coefficient Hamiltonian

Exit codes: 0 success, 2 certification failure (residuals or oracle error
above thresholds), 1 any other error.  CSV/JSON outputs are byte-stable for
identical configs; figures are rendered alongside them unless --no-plot is
given.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .algebra import AlgebraKind, Representation, build_su2_rep, build_su11_boson_rep
from .decomposition import CanonicalParams, canonical_exponential, gauss_decompose, build_group_element
from .errors import ConfigError, NuevolveError
from .flow import FlowState, IntegratorConfig, flow_rhs, integrate_flow, stationary_state
from .model import (
    CoefficientSet,
    ConstantProfile,
    SinusoidProfile,
    TableProfile,
    eval_coeffs,
    h_matrix,
)
from .oracle import boson_exponential_columns, propagate_direct, state_error, swanson_spectrum
from .solution import (
    closed_form_state,
    eigen_index,
    metric_overlap,
    naive_norm_drift,
    phase_integral,
    sign_convention_audit,
)
from .transform import gauss_params_at, re_w, residual_scan, transformed_coeffs

_FLOAT_FMT = "%.16e"


@dataclass
class Thresholds:
    certification: float = 1e-6
    oracle: float = 1e-6
    metric: float = 1e-8


@dataclass
class DecomposeSpec:
    count: int = 200
    eps_max: float = 1.0
    mu_max: float = 0.4


@dataclass
class RunConfig:
    algebra: AlgebraKind
    representation: dict
    coefficients: CoefficientSet
    initial_mode: str
    initial_values: dict
    t0: float
    t1: float
    samples: int
    rtol: float
    atol: float
    indices: list
    sign_convention: str | int
    seed: int
    thresholds: Thresholds = field(default_factory=Thresholds)
    decompose: DecomposeSpec = field(default_factory=DecomposeSpec)
    config_sha256: str = ""

    def build_representation(self) -> Representation:
        if self.algebra is AlgebraKind.SU2:
            return build_su2_rep(self.representation["j"])
        return build_su11_boson_rep(self.representation["cutoff"])


def _parse_profile(spec, base_dir: Path, name: str):
    if not isinstance(spec, dict) or "type" not in spec:
        raise ConfigError(f"coefficients.{name}: expected an object with a 'type' field")
    kind = spec["type"]
    if kind == "constant":
        return ConstantProfile(complex(spec.get("re", 0.0), spec.get("im", 0.0)))
    if kind == "sinusoid":
        return SinusoidProfile(
            amplitude=complex(spec.get("amp_re", 0.0), spec.get("amp_im", 0.0)),
            frequency=float(spec.get("frequency", 1.0)),
            phase0=float(spec.get("phase0", 0.0)),
            offset=complex(spec.get("offset_re", 0.0), spec.get("offset_im", 0.0)),
        )
    if kind == "table":
        path = Path(spec["path"])
        if not path.is_absolute():
            path = base_dir / path
        if not path.exists():
            raise ConfigError(f"coefficients.{name}: table file not found: {path}")
        try:
            return TableProfile.from_csv(path, order=spec.get("interpolation", "cubic"))
        except ValueError as exc:
            raise ConfigError(f"coefficients.{name}: {exc}") from exc
    raise ConfigError(f"coefficients.{name}: unknown profile type {kind!r}")


def load_config(path) -> RunConfig:
    """Parse and validate a JSON run configuration."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    raw_bytes = path.read_bytes()
    try:
        raw = json.loads(raw_bytes)
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"{path}: JSON parse error at line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from exc

    try:
        algebra = AlgebraKind.from_name(raw["algebra"])
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"field 'algebra': {exc}") from exc

    rep_spec = raw.get("representation", {})
    if algebra is AlgebraKind.SU2:
        if "j" not in rep_spec:
            raise ConfigError("field 'representation.j' is required for su2")
        rep = {"j": float(rep_spec["j"])}
    else:
        if "cutoff" not in rep_spec:
            raise ConfigError("field 'representation.cutoff' is required for su11")
        rep = {"cutoff": int(rep_spec["cutoff"])}

    coeff_spec = raw.get("coefficients", {})
    for name in ("omega", "alpha", "beta"):
        if name not in coeff_spec:
            raise ConfigError(f"field 'coefficients.{name}' is missing")
    coeffs = CoefficientSet(
        omega=_parse_profile(coeff_spec["omega"], path.parent, "omega"),
        alpha=_parse_profile(coeff_spec["alpha"], path.parent, "alpha"),
        beta=_parse_profile(coeff_spec["beta"], path.parent, "beta"),
    )

    initial = raw.get("initial", {"mode": "stationary"})
    mode = initial.get("mode", "stationary")
    if mode not in ("stationary", "explicit"):
        raise ConfigError(f"field 'initial.mode': unknown mode {mode!r}")
    if mode == "explicit":
        for key in ("phi", "varphi", "theta_zero"):
            if key not in initial:
                raise ConfigError(f"field 'initial.{key}' is required in explicit mode")

    tspec = raw.get("time", {})
    t0 = float(tspec.get("t0", 0.0))
    t1 = float(tspec.get("t1", 1.0))
    samples = int(tspec.get("samples", 11))
    if t1 <= t0:
        raise ConfigError("field 'time': t1 must exceed t0")
    if samples < 2:
        raise ConfigError("field 'time.samples': must be at least 2")

    tol = raw.get("tolerances", {})
    rtol = float(tol.get("rtol", 1e-10))
    atol = float(tol.get("atol", 1e-12))

    indices = raw.get("indices", [])
    build = build_su2_rep(rep["j"]) if algebra is AlgebraKind.SU2 else build_su11_boson_rep(rep["cutoff"])
    for n in indices:
        try:
            eigen_index(build, n)
        except ValueError as exc:
            raise ConfigError(f"field 'indices': index out of range: {exc}") from exc

    sign = raw.get("sign_convention", "auto")
    if sign not in ("auto", 1, -1, "+1", "-1"):
        raise ConfigError("field 'sign_convention': expected 'auto', +1 or -1")
    if sign in ("+1", "-1"):
        sign = int(sign)

    th = raw.get("thresholds", {})
    thresholds = Thresholds(
        certification=float(th.get("certification", 1e-6)),
        oracle=float(th.get("oracle", 1e-6)),
        metric=float(th.get("metric", 1e-8)),
    )
    dec = raw.get("decompose", {})
    decompose = DecomposeSpec(
        count=int(dec.get("count", 200)),
        eps_max=float(dec.get("eps_max", 1.0)),
        mu_max=float(dec.get("mu_max", 0.4)),
    )

    return RunConfig(
        algebra=algebra,
        representation=rep,
        coefficients=coeffs,
        initial_mode=mode,
        initial_values={k: float(initial[k]) for k in ("phi", "varphi", "theta_zero") if k in initial},
        t0=t0,
        t1=t1,
        samples=samples,
        rtol=rtol,
        atol=atol,
        indices=list(indices),
        sign_convention=sign,
        seed=int(raw.get("seed", 0)),
        thresholds=thresholds,
        decompose=decompose,
        config_sha256=hashlib.sha256(raw_bytes).hexdigest(),
    )


def _write_csv(path: Path, header: list[str], rows) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(row) + "\n")


def _fmt(x: float) -> str:
    return _FLOAT_FMT % float(x)


def _fmt_index(n) -> str:
    return "%g" % float(n)


def _json_ready(obj):
    if isinstance(obj, dict):
        return {k: _json_ready(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_ready(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def _write_report(path: Path, report: dict) -> None:
    payload = json.dumps(_json_ready(report), indent=2, sort_keys=True) + "\n"
    path.write_text(payload, encoding="utf-8")


def _initial_state(cfg: RunConfig):
    if cfg.initial_mode == "explicit":
        v = cfg.initial_values
        return FlowState(
            t=cfg.t0, phi=v["phi"], varphi=v["varphi"], theta_zero=v["theta_zero"]
        )
    _, polar = eval_coeffs(cfg.coefficients, cfg.t0)
    return stationary_state(polar, cfg.algebra, t=cfg.t0)


def _integrator(cfg: RunConfig) -> IntegratorConfig:
    return IntegratorConfig(rtol=cfg.rtol, atol=cfg.atol)


def _flow_rows(cfg: RunConfig, traj):
    ts = np.linspace(cfg.t0, cfg.t1, cfg.samples)
    rows = []
    arrays = {k: [] for k in ("phi", "varphi", "theta0", "re_w", "abs_q", "abs_y", "abs_im_w")}
    for t in ts:
        s = traj.state_at(float(t))
        values, polar = eval_coeffs(cfg.coefficients, float(t))
        sdot = flow_rhs(s, polar, cfg.algebra)
        tc = transformed_coeffs(s, sdot, values, cfg.algebra)
        rw = re_w(s, polar, cfg.algebra)
        rows.append(
            [
                _fmt(t),
                _fmt(s.phi),
                _fmt(s.varphi),
                _fmt(s.theta_zero),
                _fmt(rw),
                _fmt(abs(tc.Q)),
                _fmt(abs(tc.Y)),
                _fmt(abs(tc.W.imag)),
            ]
        )
        arrays["phi"].append(s.phi)
        arrays["varphi"].append(s.varphi)
        arrays["theta0"].append(s.theta_zero)
        arrays["re_w"].append(rw)
        arrays["abs_q"].append(abs(tc.Q))
        arrays["abs_y"].append(abs(tc.Y))
        arrays["abs_im_w"].append(abs(tc.W.imag))
    return ts, rows, arrays


def cmd_flow(cfg: RunConfig, out: Path, plot: bool) -> tuple[dict, int]:
    rep = cfg.build_representation()
    traj = integrate_flow(cfg.coefficients, cfg.algebra, _initial_state(cfg), cfg.t1, _integrator(cfg))
    scan = residual_scan(traj, cfg.coefficients, cfg.algebra)
    ts, rows, arrays = _flow_rows(cfg, traj)
    _write_csv(
        out / "flow.csv",
        ["t", "phi", "varphi", "theta0", "re_w", "abs_q", "abs_y", "abs_im_w"],
        rows,
    )
    if plot:
        from . import plots

        plots.save_flow_figure(
            ts,
            arrays["phi"],
            arrays["varphi"],
            arrays["theta0"],
            arrays["abs_q"],
            arrays["abs_y"],
            arrays["abs_im_w"],
            out / "flow.png",
        )
    report = {
        "command": "flow",
        "residuals": _scan_dict(scan),
        "nodes": int(len(traj.ts)),
        "representation": cfg.representation,
    }
    return report, 0


def _scan_dict(scan) -> dict:
    return {
        "max_abs_q": scan.max_abs_q,
        "max_abs_y": scan.max_abs_y,
        "max_abs_im_w": scan.max_abs_im_w,
        "argmax_q": scan.argmax_q,
        "argmax_y": scan.argmax_y,
        "argmax_im_w": scan.argmax_im_w,
    }


def _resolve_sigma(cfg: RunConfig, traj, rep):
    if cfg.sign_convention == "auto":
        sigma, residuals = sign_convention_audit(traj, cfg.coefficients, rep)
        return sigma, {str(k): float(v) for k, v in residuals.items()}
    return int(cfg.sign_convention), None


def cmd_evolve(cfg: RunConfig, out: Path, plot: bool) -> tuple[dict, int]:
    rep = cfg.build_representation()
    if not cfg.indices:
        raise ConfigError("evolve requires a non-empty 'indices' list")
    traj = integrate_flow(cfg.coefficients, cfg.algebra, _initial_state(cfg), cfg.t1, _integrator(cfg))
    scan = residual_scan(traj, cfg.coefficients, cfg.algebra)
    certified = scan.worst < cfg.thresholds.certification
    sigma, sigma_resid = _resolve_sigma(cfg, traj, rep)
    phase = phase_integral(traj, cfg.coefficients, cfg.algebra, sigma=sigma)

    ts = np.linspace(cfg.t0, cfg.t1, cfg.samples)
    v_mats = [
        build_group_element(gauss_params_at(traj.state_at(float(t)), cfg.algebra), rep)
        for t in ts
    ]
    header = (
        ["t", "index"]
        + [f"re_{k}" for k in range(rep.dim)]
        + [f"im_{k}" for k in range(rep.dim)]
        + ["metric_norm"]
    )
    rows = []
    per_index = {}
    for n in cfg.indices:
        idx = eigen_index(rep, n)
        mods = np.zeros((len(ts), rep.dim))
        mnorm = np.zeros(len(ts))
        for k, t in enumerate(ts):
            sv = closed_form_state(idx, float(t), traj, cfg.coefficients, rep, phase=phase)
            norm = metric_overlap(sv, sv, v_mats[k]).real
            mods[k] = np.abs(sv.amplitudes)
            mnorm[k] = norm
            rows.append(
                [_fmt(t), _fmt_index(n)]
                + [_fmt(x) for x in sv.amplitudes.real]
                + [_fmt(x) for x in sv.amplitudes.imag]
                + [_fmt(norm)]
            )
        per_index[n] = (mods, mnorm)
    _write_csv(out / "evolve.csv", header, rows)
    if plot:
        from . import plots

        plots.save_evolve_figure(ts, per_index, out / "evolve.png")
    report = {
        "command": "evolve",
        "residuals": _scan_dict(scan),
        "certified": bool(certified),
        "sigma": sigma,
        "representation": cfg.representation,
    }
    if sigma_resid:
        report["sigma_residuals"] = sigma_resid
    return report, 0 if certified else 2


def _verify_report(
    cfg, scan, residuals_ok, sigma, sigma_resid, index_reports, max_err, max_drift,
    offdiag_drift, phase, certified, warnings,
) -> dict:
    report = {
        "command": "verify",
        "algebra": "su2" if cfg.algebra is AlgebraKind.SU2 else "su11",
        "representation": cfg.representation,
        "time": {"t0": cfg.t0, "t1": cfg.t1, "samples": cfg.samples},
        "tolerances": {"rtol": cfg.rtol, "atol": cfg.atol},
        "thresholds": {
            "certification": cfg.thresholds.certification,
            "oracle": cfg.thresholds.oracle,
            "metric": cfg.thresholds.metric,
        },
        "sigma": sigma,
        "residuals": _scan_dict(scan),
        "residuals_certified": bool(residuals_ok),
        "indices": index_reports,
        "max_state_error": max_err,
        "max_metric_drift": max_drift,
        "offdiag_metric_drift": offdiag_drift,
        "phase_law": {"total": phase.value(cfg.t1)},
        "certified": bool(certified),
        "warnings": warnings,
        "seed": cfg.seed,
        "config_sha256": cfg.config_sha256,
    }
    if sigma_resid:
        report["sigma_residuals"] = sigma_resid
    return report


def cmd_verify(cfg: RunConfig, out: Path, plot: bool) -> tuple[dict, int]:
    rep = cfg.build_representation()
    if not cfg.indices:
        raise ConfigError("verify requires a non-empty 'indices' list")
    timings = {}
    tic = time.monotonic()
    traj = integrate_flow(cfg.coefficients, cfg.algebra, _initial_state(cfg), cfg.t1, _integrator(cfg))
    scan = residual_scan(traj, cfg.coefficients, cfg.algebra)
    timings["flow"] = time.monotonic() - tic
    residuals_ok = scan.worst < cfg.thresholds.certification

    sigma, sigma_resid = _resolve_sigma(cfg, traj, rep)
    phase = phase_integral(traj, cfg.coefficients, cfg.algebra, sigma=sigma)
    ts = np.linspace(cfg.t0, cfg.t1, cfg.samples)
    v_mats = [
        build_group_element(gauss_params_at(traj.state_at(float(t)), cfg.algebra), rep)
        for t in ts
    ]

    tic = time.monotonic()
    index_reports = []
    warnings = []
    per_index_errors = {}
    closed_states = {}
    oracle_contaminated = False
    max_err_all = 0.0
    max_drift_all = 0.0
    if not residuals_ok:
        # an uncertified flow is not entitled to the oracle comparison; the
        # dressing can be arbitrarily wrong and would only trip truncation
        # guards downstream
        warnings.append(
            "residual scan above certification threshold; oracle comparison skipped"
        )
        report = _verify_report(
            cfg, scan, residuals_ok, sigma, sigma_resid, [], None, None,
            None, phase, False, warnings,
        )
        _write_report(out / "verify_report.json", report)
        print(
            f"verify: residuals worst={scan.worst:.3e} -> NOT CERTIFIED (oracle skipped)",
            file=sys.stderr,
        )
        return report, 2
    for n in cfg.indices:
        idx = eigen_index(rep, n)
        cf = [
            closed_form_state(idx, float(t), traj, cfg.coefficients, rep, phase=phase)
            for t in ts
        ]
        closed_states[n] = cf
        prop = propagate_direct(
            cfg.coefficients, rep, cf[0].amplitudes, ts, _integrator(cfg)
        )
        if prop.truncation_contaminated:
            oracle_contaminated = True
            warnings.append(
                f"index {n}: oracle propagation truncation-contaminated "
                f"(max leakage {prop.max_leakage:.2e})"
            )
        errs = np.array([state_error(a, b) for a, b in zip(cf, prop.states)])
        per_index_errors[n] = errs
        norms = np.array(
            [metric_overlap(sv, sv, v_mats[k]).real for k, sv in enumerate(cf)]
        )
        drift = float(np.abs(norms - norms[0]).max() / abs(norms[0]))
        nnd = naive_norm_drift(idx, traj, cfg.coefficients, rep, float(ts[-1]), sigma=sigma)
        index_reports.append(
            {
                "n": float(n),
                "max_state_error": float(errs.max()),
                "metric_drift": drift,
                "metric_norm_initial": float(norms[0]),
                "naive_norm_drift_t1": nnd,
                "oracle_steps": prop.n_steps,
                "oracle_rhs_evaluations": prop.n_rhs_evaluations,
                "oracle_max_leakage": prop.max_leakage,
            }
        )
        max_err_all = max(max_err_all, float(errs.max()))
        max_drift_all = max(max_drift_all, drift)
    timings["oracle"] = time.monotonic() - tic

    # off-diagonal metric overlaps must stay put as well
    offdiag_drift = 0.0
    ns = list(cfg.indices)
    for i in range(len(ns)):
        for jj in range(i + 1, len(ns)):
            vals = np.array(
                [
                    metric_overlap(closed_states[ns[i]][k], closed_states[ns[jj]][k], v_mats[k])
                    for k in range(len(ts))
                ]
            )
            offdiag_drift = max(offdiag_drift, float(np.abs(vals - vals[0]).max()))

    certified = (
        residuals_ok
        and max_err_all < cfg.thresholds.oracle
        and max_drift_all < cfg.thresholds.metric
        and offdiag_drift < cfg.thresholds.metric
        and not oracle_contaminated
    )
    report = _verify_report(
        cfg, scan, residuals_ok, sigma, sigma_resid, index_reports, max_err_all,
        max_drift_all, offdiag_drift, phase, certified, warnings,
    )
    _write_report(out / "verify_report.json", report)
    if plot:
        from . import plots

        plots.save_verify_figure(ts, per_index_errors, out / "verify.png")
    print(
        f"verify: residuals worst={scan.worst:.3e} oracle worst={max_err_all:.3e} "
        f"metric drift={max_drift_all:.3e} -> {'certified' if certified else 'NOT CERTIFIED'}",
        file=sys.stderr,
    )
    print(f"timings: {timings}", file=sys.stderr)
    return report, 0 if certified else 2


def cmd_spectrum(cfg: RunConfig, out: Path, plot: bool) -> tuple[dict, int]:
    for name in ("omega", "alpha", "beta"):
        if not isinstance(getattr(cfg.coefficients, name), ConstantProfile):
            raise ConfigError("spectrum requires constant coefficient profiles")
    rep = cfg.build_representation()
    (omega, alpha, beta), _ = eval_coeffs(cfg.coefficients, cfg.t0)
    if cfg.algebra is AlgebraKind.SU11:
        vals, trusted = swanson_spectrum(omega, alpha, beta, rep.dim)
    else:
        vals = np.linalg.eigvals(h_matrix(cfg.coefficients, rep, cfg.t0))
        order = np.lexsort((vals.imag, vals.real))
        vals = vals[order]
        trusted = np.ones(rep.dim, dtype=bool)
    rows = [
        [str(k), _fmt(v.real), _fmt(v.imag), "1" if tr else "0"]
        for k, (v, tr) in enumerate(zip(vals, trusted))
    ]
    _write_csv(out / "spectrum.csv", ["n", "re_eig", "im_eig", "trusted"], rows)
    if plot:
        from . import plots

        plots.save_spectrum_figure(vals, trusted, out / "spectrum.png")
    report = {
        "command": "spectrum",
        "n_trusted": int(trusted.sum()),
        "representation": cfg.representation,
    }
    return report, 0


def cmd_decompose(cfg: RunConfig, out: Path, plot: bool) -> tuple[dict, int]:
    rep = cfg.build_representation()
    rng = np.random.default_rng(cfg.seed)
    spec = cfg.decompose
    rows = []
    eps_list, mu_list, resid_list = [], [], []
    n_trusted = 0
    for _ in range(spec.count):
        eps = rng.uniform(-spec.eps_max, spec.eps_max)
        mu = rng.uniform(0, spec.mu_max) * np.exp(1j * rng.uniform(-np.pi, np.pi))
        p = CanonicalParams(eps, mu)
        g = gauss_decompose(p, cfg.algebra)
        if cfg.algebra is AlgebraKind.SU2:
            direct = canonical_exponential(p, rep)
            prod = build_group_element(g, rep)
            resid = float(np.abs(prod - direct).max() / np.abs(direct).max())
            ok = True
        else:
            ncols = rep.dim // 2
            direct, ok = boson_exponential_columns(p, rep.dim, ncols)
            if ok:
                prod = build_group_element(g, rep)[:, :ncols]
                resid = float(np.abs(prod - direct).max() / np.abs(direct).max())
            else:
                resid = math.nan
        n_trusted += int(ok)
        rows.append(
            [
                _fmt(eps),
                _fmt(mu.real),
                _fmt(mu.imag),
                _fmt(g.theta_plus.real),
                _fmt(g.theta_plus.imag),
                _fmt(g.theta_zero.real),
                _fmt(g.theta_zero.imag),
                _fmt(g.theta_minus.real),
                _fmt(g.theta_minus.imag),
                _fmt(resid) if ok else "nan",
                "1" if ok else "0",
            ]
        )
        eps_list.append(eps)
        mu_list.append(abs(mu))
        resid_list.append(resid if ok else math.nan)
    _write_csv(
        out / "decompose.csv",
        [
            "eps",
            "mu_re",
            "mu_im",
            "theta_plus_re",
            "theta_plus_im",
            "theta0_re",
            "theta0_im",
            "theta_minus_re",
            "theta_minus_im",
            "identity_residual",
            "oracle_trusted",
        ],
        rows,
    )
    if plot:
        from . import plots

        finite = [
            (e, m, r)
            for e, m, r in zip(eps_list, mu_list, resid_list)
            if not math.isnan(r)
        ]
        if finite:
            es, ms, rs = zip(*finite)
            plots.save_decompose_figure(es, ms, rs, out / "decompose.png")
    trusted_resids = [r for r in resid_list if not math.isnan(r)]
    report = {
        "command": "decompose",
        "count": spec.count,
        "oracle_trusted": n_trusted,
        "max_identity_residual_trusted": max(trusted_resids) if trusted_resids else None,
        "seed": cfg.seed,
    }
    return report, 0


_COMMANDS = {
    "decompose": cmd_decompose,
    "flow": cmd_flow,
    "evolve": cmd_evolve,
    "verify": cmd_verify,
    "spectrum": cmd_spectrum,
}


def run(cmd: str, cfg: RunConfig, out_dir, plot: bool = True) -> tuple[dict, int]:
    """Execute one command; returns (report, exit_code)."""
    if cmd not in _COMMANDS:
        raise ConfigError(f"unknown command {cmd!r}")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return _COMMANDS[cmd](cfg, out, plot)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="nuevolve",
        description="Evolve and verify time-dependent non-Hermitian su(1,1)/su(2) systems.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="JSON run configuration")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--rtol", type=float, default=None, help="override flow/oracle rtol")
        p.add_argument("--atol", type=float, default=None, help="override flow/oracle atol")
        p.add_argument("--no-plot", action="store_true", help="skip figure rendering")
    args = parser.parse_args(argv)

    try:
        cfg = load_config(args.config)
        if args.rtol is not None:
            cfg.rtol = args.rtol
        if args.atol is not None:
            cfg.atol = args.atol
        t_start = time.monotonic()
        report, code = run(args.command, cfg, args.out, plot=not args.no_plot)
        print(
            f"{args.command}: done in {time.monotonic() - t_start:.2f}s (exit {code})",
            file=sys.stderr,
        )
        return code
    except NuevolveError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
