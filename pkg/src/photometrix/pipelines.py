"""Figure-reproduction pipelines.

Each pipeline evaluates one figure's worth of engine sweeps and writes
deterministic CSV files (17 significant digits, LF line endings, no
timestamps) plus a JSON run manifest into the output directory.
"""

import json
import time
from pathlib import Path

import numpy as np

from . import __version__
from .core import LossChannel
from .dicke import (
    DickeConfig,
    ac_precision,
    p_error,
    peak_mean_photons,
    photon_pmf,
    switch_time,
    switch_time_formula,
    t_prep,
)
from .errors import ConfigError
from .fisher import (
    TwinFock,
    cfi_nrm,
    cfi_nrm_g0_closed,
    cfi_nrm_gstar,
    cfi_nrm_poisson,
    cfi_nrm_poisson_gstar,
    optimize_squeezed,
    per_test_cfi_nrm_g0,
    per_test_qfi,
    qfi_noon_poisson,
    qfi_tfs_exact,
    qfi_tfs_poisson,
)
from .protocol import (
    Budget,
    advantage_boundary,
    general_boundary,
    optimize_nu,
)

__all__ = ["PIPELINES", "SWEEP_ENGINES", "run_pipeline", "run_sweep", "pipeline_names"]


def _fmt(v):
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".17g")


def write_csv(path, header, rows):
    """Write rows with full double round-trip precision and LF endings.

    Returns the number of data rows written.
    """
    count = 0
    with open(path, "w", newline="") as f:
        f.write(",".join(header) + "\n")
        for row in rows:
            f.write(",".join(_fmt(v) for v in row) + "\n")
            count += 1
    return count


def _geom_grid(params, prefix="nabs"):
    return np.geomspace(
        params[f"{prefix}_min"], params[f"{prefix}_max"], int(params[f"{prefix}_points"])
    )


# ---------------------------------------------------------------------------
# pipeline bodies: each returns [(filename, header, rows)]
# ---------------------------------------------------------------------------

def _run_fig1(p):
    gamma = p["gamma"]
    grid = _geom_grid(p)
    rows = []
    for na in grid:
        g0 = cfi_nrm_poisson(na, 0.0, gamma, n=int(p["n_poisson"]), q_max=int(p["q_max"]))
        _, gstar_val = cfi_nrm_poisson_gstar(
            na, gamma, n=int(p["n_poisson"]), q_max=int(p["q_max"]),
            n_scan=int(p["gstar_scan"]),
        )
        rows.append((
            na,
            qfi_tfs_poisson(na, gamma),
            qfi_noon_poisson(na, gamma),
            g0,
            max(gstar_val, g0),
            optimize_squeezed(na, gamma)[2],
            na / gamma**2,
        ))
    header = ["N_abs", "qfi_tfs", "qfi_noon", "cfi_nrm_g0", "cfi_nrm_gstar",
              "cfi_squeezed", "upper_bound"]
    return [("fig1.csv", header, rows)]


def _tfs_precision_rows(p, fisher_fn):
    gamma, T = p["gamma"], p["T"]
    rows = []
    for N in p["N_list"]:
        probe = TwinFock(int(N) // 2)
        for na in _geom_grid(p):
            budget = Budget(T, na, p["t_ext"], p["eta"])
            res = optimize_nu(probe, budget, gamma, fisher_fn)
            rows.append((na, int(N), res.accumulated / (gamma * T), res.nu, na / gamma**2))
    return rows


def _run_fig2(p):
    header = ["N_abs", "N", "dg2_per_gT", "nu_opt", "classical"]
    return [("fig2.csv", header, _tfs_precision_rows(p, per_test_qfi))]


def _run_fig3a(p):
    header = ["N_abs", "N", "dg2_per_gT", "nu_opt", "classical"]
    return [("fig3a.csv", header, _tfs_precision_rows(p, per_test_qfi))]


def _run_fig3b(p):
    gamma, T = p["gamma"], p["T"]
    t_grid = np.geomspace(p["text_min"], p["text_max"], int(p["text_points"])) / gamma
    curves = []
    for N in p["N_list"]:
        _, etas = advantage_boundary(
            TwinFock(int(N) // 2), p["n_abs"], t_grid, gamma, T, tol=p["bisect_tol"]
        )
        curves.append(etas)
    env = np.full(len(t_grid), np.nan)
    for N in p["N_env"]:
        _, etas = advantage_boundary(
            TwinFock(int(N) // 2), p["n_abs"], t_grid, gamma, T, tol=p["bisect_tol"]
        )
        env = np.where(np.isnan(env), etas, np.where(np.isnan(etas), env, np.minimum(env, etas)))
    header = ["gamma_t_ext"] + [f"eta_N{int(N)}" for N in p["N_list"]] + ["eta_any"]
    rows = [
        (gamma * t_grid[i], *(c[i] for c in curves), env[i]) for i in range(len(t_grid))
    ]
    return [("fig3b.csv", header, rows)]


def _run_cavity_perror(p):
    rows = []
    for N_at in p["N_at_list"]:
        cfg = DickeConfig(int(N_at), p["J"], p["omega"], 1)
        for rounds in p["rounds_list"]:
            for n in range(int(p["n_min"]), int(p["n_max"]) + 1):
                rows.append((n, int(N_at), int(rounds), p_error(cfg, n, int(rounds))))
    return [("cavity_perror.csv", ["n", "N_at", "rounds", "p_error"], rows)]


def _run_cavity_ac(p):
    gamma, T = p["gamma"], p["T"]
    rows = []
    for eta in p["eta_list"]:
        for n in range(int(p["n_min"]), int(p["n_max"]) + 1):
            cfg = DickeConfig(int(p["N_at"]), p["J"], p["omega"], n)
            budget = Budget(T, p["n_abs"], p["t_ext"], eta)
            ac = ac_precision(cfg, budget, gamma, kind="cfi-nrm-g0",
                              q_cutoff_factor=p["cutoff_factor"])
            ac_exact = ac_precision(cfg, budget, gamma, kind="cfi-nrm-g0",
                                    q_cutoff_factor=p["cutoff_factor"],
                                    use_exact_prep_time=True)
            tfs = optimize_nu(TwinFock(n), budget, gamma, per_test_cfi_nrm_g0)
            rows.append((
                n, eta, ac / (gamma * T), ac_exact / (gamma * T),
                tfs.accumulated / (gamma * T),
            ))
    header = ["n", "eta", "dg2_ac_per_gT", "dg2_ac_exact_tprep_per_gT", "dg2_tfs_per_gT"]
    return [("cavity_ac.csv", header, rows)]


def _run_app_cfi(p):
    n = int(p["N"]) // 2
    t = p["t"]
    mu = p["mu"]
    gamma = -np.log1p(-mu) / t
    ch = LossChannel(gamma, t)
    qfi = qfi_tfs_exact(n, ch).value
    snl = t * t * p["N"] * (1 - mu)
    phi_rows = []
    for phi in np.linspace(p["phi_min"], p["phi_max"], int(p["phi_points"])):
        phi_rows.append((phi, cfi_nrm(n, n, ch, phi / t).value, qfi, snl))
    n_rows = []
    for N in p["N_list"]:
        nn = int(N) // 2
        _, best = cfi_nrm_gstar(nn, nn, ch, n_scan=int(p["gstar_scan"]))
        n_rows.append((
            int(N),
            cfi_nrm_g0_closed(nn, nn, ch).value,
            best.value,
            qfi_tfs_exact(nn, ch).value,
            t * t * N * (1 - mu),
        ))
    return [
        ("app_cfi_vs_phi.csv", ["phi", "cfi_nrm", "qfi", "snl"], phi_rows),
        ("app_cfi_vs_N.csv", ["N", "cfi_nrm_g0", "cfi_nrm_gstar", "qfi", "snl"], n_rows),
    ]


def _run_app_regions(p):
    gamma = p["gamma"]
    t_grid = np.geomspace(p["text_min"], p["text_max"], int(p["text_points"])) / gamma
    _, eta_any = general_boundary(t_grid, gamma, N=None, tol=p["bisect_tol"])
    curves = [
        general_boundary(t_grid, gamma, N=float(N), n_abs_max=p["n_abs"],
                         tol=p["bisect_tol"])[1]
        for N in p["N_list"]
    ]
    header = ["gamma_t_ext", "eta_max_t"] + [f"eta_N{int(N)}" for N in p["N_list"]]
    rows = [
        (gamma * t_grid[i], eta_any[i], *(c[i] for c in curves))
        for i in range(len(t_grid))
    ]
    return [("app_regions.csv", header, rows)]


def _run_app_tfs_noise(p):
    gamma, T = p["gamma"], p["T"]
    rows = []
    for N in p["N_list"]:
        probe = TwinFock(int(N) // 2)
        for na in _geom_grid(p):
            budget = Budget(T, na, p["t_ext"], p["eta"])
            qfi_res = optimize_nu(probe, budget, gamma, per_test_qfi)
            nrm_res = optimize_nu(probe, budget, gamma, per_test_cfi_nrm_g0)
            rows.append((
                na, int(N),
                qfi_res.accumulated / (gamma * T),
                nrm_res.accumulated / (gamma * T),
                na / gamma**2,
            ))
    header = ["N_abs", "N", "dg2_qfi_per_gT", "dg2_nrm_per_gT", "classical"]
    return [("app_tfs_noise.csv", header, rows)]


def _run_app_dicke_prep(p):
    cfg = DickeConfig(int(p["N_at"]), p["J"], p["omega"], 1)
    t_star, _ = peak_mean_photons(cfg, window_factor=p["window"])
    ts = np.linspace(0.0, p["window"] * switch_time_formula(cfg.N_at) / cfg.J,
                     int(p["t_points"]))
    n_rows = [(t, photon_pmf(cfg, t).mean()) for t in ts]
    pmf = photon_pmf(cfg, t_star).probs
    pmf_rows = [(k, pmf[k]) for k in range(len(pmf))]
    return [
        ("app_dicke_prep_meanphotons.csv", ["t", "mean_photons"], n_rows),
        ("app_dicke_prep_pmf.csv", ["k", "prob"], pmf_rows),
    ]


def _run_app_timescale(p):
    rows = []
    for N in p["N_list"]:
        N = int(N)
        t_mf = switch_time(N)
        t_form = switch_time_formula(N)
        if N <= int(p["exact_max"]):
            t_exact = peak_mean_photons(DickeConfig(N, 1.0, 0.0, 1))[0]
        else:
            t_exact = np.nan
        rows.append((N, t_mf, t_form, t_exact))
    header = ["N", "t_switch_meanfield", "t_switch_formula", "t_peak_exact"]
    return [("app_timescale.csv", header, rows)]


PIPELINES = {
    "fig1": (
        dict(gamma=1.0, nabs_min=0.05, nabs_max=5.0, nabs_points=25,
             n_poisson=500, q_max=10, gstar_scan=24),
        _run_fig1,
    ),
    "fig2": (
        dict(T=10.0, gamma=1.0, eta=1.0, t_ext=0.0, N_list=[2, 4, 6, 8],
             nabs_min=0.05, nabs_max=10.0, nabs_points=40),
        _run_fig2,
    ),
    "fig3a": (
        dict(T=10.0, gamma=1.0, eta=0.96, t_ext=0.04, N_list=[2, 4, 6, 8],
             nabs_min=0.05, nabs_max=10.0, nabs_points=40),
        _run_fig3a,
    ),
    "fig3b": (
        dict(T=10.0, gamma=1.0, n_abs=1.0, N_list=[2, 8, 20],
             N_env=[2, 4, 8, 12, 16, 20, 32, 64, 128, 200],
             text_min=1e-3, text_max=1.0, text_points=200, bisect_tol=1e-6),
        _run_fig3b,
    ),
    "cavity-perror": (
        dict(J=1.0, omega=1.0, N_at_list=[20, 40, 100], n_min=1, n_max=12,
             rounds_list=[1, 2]),
        _run_cavity_perror,
    ),
    "cavity-ac": (
        dict(N_at=100, J=1.0, omega=1.0, n_min=1, n_max=10,
             eta_list=[0.8, 0.9, 0.95, 1.0], n_abs=1.0, T=10.0, gamma=1.0,
             t_ext=0.0, cutoff_factor=12.0),
        _run_cavity_ac,
    ),
    "app-cfi": (
        dict(N=12, mu=0.2, t=1.0, phi_min=0.02, phi_max=3.12, phi_points=80,
             N_list=list(range(2, 26, 2)), gstar_scan=48),
        _run_app_cfi,
    ),
    "app-regions": (
        dict(gamma=1.0, n_abs=1.0, N_list=[2, 4, 8, 16, 64],
             text_min=1e-3, text_max=1.0, text_points=200, bisect_tol=1e-6),
        _run_app_regions,
    ),
    "app-tfs-noise": (
        dict(T=10.0, gamma=1.0, eta=0.95, t_ext=0.05, N_list=[2, 4, 8, 16],
             nabs_min=0.05, nabs_max=10.0, nabs_points=40),
        _run_app_tfs_noise,
    ),
    "app-dicke-prep": (
        dict(N_at=50, J=1.0, omega=1.0, window=3.0, t_points=300),
        _run_app_dicke_prep,
    ),
    "app-timescale": (
        dict(N_list=[100, 316, 1000, 3162, 10000], exact_max=1000),
        _run_app_timescale,
    ),
}


def pipeline_names():
    return sorted(PIPELINES)


def _coerce(key, value, default):
    try:
        if isinstance(default, list):
            if isinstance(value, list):
                return [type(default[0])(v) for v in value]
            parts = [s for s in str(value).split(",") if s.strip() != ""]
            elem = type(default[0]) if default else float
            return [elem(s) for s in parts]
        if isinstance(default, bool):
            return str(value).lower() in ("1", "true", "yes")
        return type(default)(value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad value for {key!r}: {value!r}") from exc


def resolve_params(defaults, *override_layers):
    """Defaults overlaid by config-file and flag layers; unknown keys fail."""
    params = dict(defaults)
    for layer in override_layers:
        for key, value in layer.items():
            if key not in params:
                raise ConfigError(f"unknown parameter {key!r}")
            params[key] = _coerce(key, value, defaults[key])
    return params


def run_pipeline(name, overrides=(), out_dir="."):
    """Run one pipeline and write its CSVs plus a run manifest.

    ``overrides`` is a sequence of dict layers applied on top of the
    pipeline defaults (config file first, command-line flags last).
    """
    if name not in PIPELINES:
        raise ConfigError(
            f"unknown pipeline {name!r}; choose from {', '.join(pipeline_names())}"
        )
    defaults, runner = PIPELINES[name]
    params = resolve_params(defaults, *overrides)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    start = time.time()
    outputs = []
    for filename, header, rows in runner(params):
        n_rows = write_csv(out / filename, header, rows)
        outputs.append({"file": filename, "rows": n_rows})
    manifest = {
        "pipeline": name,
        "parameters": params,
        "version": __version__,
        "duration_seconds": time.time() - start,
        "outputs": outputs,
    }
    with open(out / f"manifest_{name}.json", "w", newline="") as f:
        json.dump(manifest, f, indent=2, sort_keys=True)
        f.write("\n")
    return manifest


# ---------------------------------------------------------------------------
# parameter sweeps
# ---------------------------------------------------------------------------

def _engine_tfs_qfi(p):
    res = optimize_nu(
        TwinFock(int(p["N"]) // 2),
        Budget(p["T"], p["n_abs"], p["t_ext"], p["eta"]),
        p["gamma"],
        per_test_qfi,
    )
    return {
        "dg2": res.accumulated,
        "dg2_per_gT": res.accumulated / (p["gamma"] * p["T"]),
        "nu_opt": res.nu,
    }


def _engine_tfs_nrm(p):
    res = optimize_nu(
        TwinFock(int(p["N"]) // 2),
        Budget(p["T"], p["n_abs"], p["t_ext"], p["eta"]),
        p["gamma"],
        per_test_cfi_nrm_g0,
    )
    return {
        "dg2": res.accumulated,
        "dg2_per_gT": res.accumulated / (p["gamma"] * p["T"]),
        "nu_opt": res.nu,
    }


def _engine_boundary_eta(p):
    from .errors import NoCrossing
    from .protocol import advantage_eta_threshold

    try:
        eta = advantage_eta_threshold(
            TwinFock(int(p["N"]) // 2), p["n_abs"], p["t_ext"], p["gamma"], p["T"],
            tol=p["tol"],
        )
    except NoCrossing:
        eta = np.nan
    return {"eta_star": eta}


def _engine_j_max(p):
    from .protocol import j_max

    return {"j_max": j_max(p["gamma"], p["eta"], p["t_ext"])}


SWEEP_ENGINES = {
    "tfs-qfi-precision": (
        dict(N=8, n_abs=1.0, T=10.0, gamma=1.0, eta=1.0, t_ext=0.0),
        _engine_tfs_qfi,
        ["dg2", "dg2_per_gT", "nu_opt"],
    ),
    "tfs-nrm-precision": (
        dict(N=8, n_abs=1.0, T=10.0, gamma=1.0, eta=1.0, t_ext=0.0),
        _engine_tfs_nrm,
        ["dg2", "dg2_per_gT", "nu_opt"],
    ),
    "boundary-eta": (
        dict(N=8, n_abs=1.0, T=10.0, gamma=1.0, t_ext=0.01, tol=1e-6),
        _engine_boundary_eta,
        ["eta_star"],
    ),
    "j-max": (
        dict(gamma=1.0, eta=0.95, t_ext=0.05),
        _engine_j_max,
        ["j_max"],
    ),
}


def parse_grid(spec):
    """Parse one grid axis: ``name=start:stop:step`` (inclusive stop within
    a half-step tolerance), ``name=v1,v2,...``, or ``name=v``."""
    if "=" not in spec:
        raise ConfigError(f"grid spec {spec!r} must look like name=values")
    name, _, body = spec.partition("=")
    name = name.strip()
    body = body.strip()
    if body == "":
        return name, np.array([])
    if ":" in body:
        parts = body.split(":")
        if len(parts) != 3:
            raise ConfigError(f"range spec {spec!r} must be start:stop:step")
        try:
            start, stop, step = (float(s) for s in parts)
        except ValueError as exc:
            raise ConfigError(f"bad number in {spec!r}") from exc
        if step <= 0:
            raise ConfigError(f"step must be positive in {spec!r}")
        count = int(np.floor((stop - start) / step + 0.5 * 1e-9 / step + 1e-9)) + 1
        if count < 1:
            return name, np.array([])
        return name, start + step * np.arange(count)
    try:
        return name, np.array([float(s) for s in body.split(",") if s.strip() != ""])
    except ValueError as exc:
        raise ConfigError(f"bad number in {spec!r}") from exc


def run_sweep(engine, grid_specs, overrides=(), out_dir="."):
    """Cartesian sweep of an engine over named parameter grids.

    Rows stream in row-major grid order; fixed parameters come from the
    engine defaults overlaid by ``overrides``.
    """
    if engine not in SWEEP_ENGINES:
        raise ConfigError(
            f"unknown engine {engine!r}; choose from {', '.join(sorted(SWEEP_ENGINES))}"
        )
    start = time.time()
    defaults, fn, out_cols = SWEEP_ENGINES[engine]
    axes = [parse_grid(s) for s in grid_specs]
    for name, _ in axes:
        if name not in defaults:
            raise ConfigError(f"engine {engine!r} has no parameter {name!r}")
    base = resolve_params(defaults, *overrides)
    header = [name for name, _ in axes] + out_cols
    rows = []
    if all(len(vals) > 0 for vals in (v for _, v in axes)) and axes:
        mesh = np.meshgrid(*[v for _, v in axes], indexing="ij")
        points = np.stack([m.ravel() for m in mesh], axis=-1) if mesh else []
        for point in points:
            p = dict(base)
            for (name, _), v in zip(axes, point):
                p[name] = float(v)
            out = fn(p)
            rows.append(tuple(point) + tuple(out[c] for c in out_cols))
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    n_rows = write_csv(out / "sweep.csv", header, rows)
    manifest = {
        "pipeline": "sweep",
        "parameters": {
            "engine": engine,
            "grids": list(grid_specs),
            "fixed": base,
        },
        "version": __version__,
        "duration_seconds": time.time() - start,
        "outputs": [{"file": "sweep.csv", "rows": n_rows}],
    }
    with open(out / "manifest_sweep.json", "w", newline="") as f:
        json.dump(manifest, f, indent=2, sort_keys=True)
        f.write("\n")
    return manifest
