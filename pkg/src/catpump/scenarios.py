"""
Scenario runner: each scenario wires configuration -> device model ->
dynamics / semiclassical / tomography -> CSV files in the output directory.

Every run is deterministic given --seed (all sampling goes through one
numpy Generator) and every output file header carries the fully resolved
parameter set. Steady-state grid points are pure functions of their
parameters, so the spectroscopy sweep can fan out over processes
(`--set workers=N`); results are keyed by index and identical for any
worker count, and all file writes stay in the parent process.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import device as dev
from . import semiclassical as sc
from . import serialize as ser
from . import tomography as tomo
from .device import DeviceParams, DerivedParams, TWO_PI
from .dynamics import SteadyStateConvergenceError, evolve, steady_state
from .fock import (QuantumState, annihilation, coherent_state, expect,
                   fock_state, number_op, parity_op, single_mode)

SCENARIO_NAMES = ("spectroscopy", "bistability", "cat-evolution",
                  "fock-evolution", "flowfield", "tomography-roundtrip")

# device keys accepted by --set, with the parameter-file unit conventions
_DEVICE_HZ = {"omega_q", "omega_r", "omega_s", "chi_qq", "chi_qr", "chi_qs",
              "chi_rr", "chi_rs", "chi_ss", "chi_rq3", "omega_p", "omega_d",
              "eps_p", "eps_d"}
_DEVICE_S = {"T1_q", "T2_q", "T1_s", "T1_r"}
_DEVICE_PLAIN = {"n_q", "n_r", "n_s"}


@dataclass(frozen=True)
class Scenario:
    name: str
    params_path: str | None = None
    out_dir: str = "out"
    overrides: dict = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        if self.name not in SCENARIO_NAMES:
            raise ValueError(f"unknown scenario {self.name!r}; "
                             f"choose from {', '.join(SCENARIO_NAMES)}")


def _apply_device_overrides(params: DeviceParams, overrides: dict):
    """Split overrides into device-parameter updates and scenario knobs.

    Device keys use the parameter-file unit conventions (Hz, s,
    dimensionless); everything else passes through to the scenario.
    """
    kw = params.as_dict()
    rest = {}
    touched = False
    for key, raw in overrides.items():
        if key in _DEVICE_HZ:
            val = complex(raw) * TWO_PI
            if key in ("eps_p", "eps_d"):
                kw[key] = val
            else:
                kw[key] = float(val.real)
            touched = True
        elif key == "T1_s":
            kw["kappa_s"] = 1.0 / float(raw)
            touched = True
        elif key == "T1_r":
            kw["kappa_r"] = 1.0 / float(raw)
            touched = True
        elif key in _DEVICE_S:
            kw[key] = float(raw)
            touched = True
        elif key in _DEVICE_PLAIN:
            kw[key] = float(raw)
            touched = True
        else:
            rest[key] = raw
    return (DeviceParams(**kw) if touched else params), rest


def _knob(rest: dict, key: str, default, cast=float):
    if key not in rest:
        return default
    val = rest.pop(key)
    if cast is bool:
        return str(val).strip().lower() in ("1", "true", "yes", "on")
    return cast(val)


def _times_us(rest: dict, default: str) -> np.ndarray:
    raw = str(rest.pop("times_us", default))
    return np.array([float(t) for t in raw.split(",")])


def _meta(params: DeviceParams, derived: DerivedParams, scenario: Scenario,
          **extra) -> dict:
    m = {"scenario": scenario.name, "seed": scenario.seed}
    for k, v in sorted(scenario.overrides.items()):
        m[f"override.{k}"] = v
    for k, v in params.as_dict().items():
        m[f"device.{k}"] = v if v is not None else "matched"
    for k in ("xi_p", "g2", "eps2", "kappa_2", "alpha_inf", "delta_d", "delta_p"):
        m[f"derived.{k}"] = getattr(derived, k)
    m["derived.xi_p_sq"] = abs(derived.xi_p) ** 2
    m.update(extra)
    return m


def _load(scenario: Scenario):
    params = (dev.load_params(scenario.params_path) if scenario.params_path
              else dev.paper_params())
    params, rest = _apply_device_overrides(params, dict(scenario.overrides))
    return params, rest


def _single_mode_observables(state: QuantumState, label: str = "s") -> dict:
    space = state.space
    a = annihilation(space, label)
    ad = a.dag()
    x_op = 0.5 * (a + ad)
    p_op = 0.5j * (a - ad)
    n = ad @ a
    out = {
        "nbar": expect(state, n).real,
        "parity": expect(state, parity_op(space, label)).real,
    }
    for name, q in (("X", x_op), ("P", p_op)):
        q = q.as_hermitian()
        m1 = expect(state, q).real
        q2 = q @ q
        m2 = expect(state, q2).real
        var = m2 - m1 ** 2
        m4 = expect(state, q2 @ q2).real
        m3 = expect(state, q2 @ q).real
        # central fourth moment from raw moments
        c4 = m4 - 4 * m1 * m3 + 6 * m1 ** 2 * m2 - 3 * m1 ** 4
        out[f"mean_{name}"] = m1
        out[f"var_{name}"] = var
        out[f"cum4_{name}"] = c4 - 3 * var ** 2
    return out


def _wigner_file(path: Path, state: QuantumState, extent: float, grid_n: int,
                 meta: dict) -> tomo.TomographyGrid:
    alphas = tomo.square_grid(extent, grid_n)
    grid = tomo.wigner(state, alphas)
    ser.write_tomography_csv(path, grid, {**meta, "grid_extent": extent,
                                          "grid_n": grid_n})
    return grid


# ---------------------------------------------------------------------------
# spectroscopy (conversion dip vs pump frequency)
# ---------------------------------------------------------------------------

def _steady_readout_point(args):
    """Worker: steady-state readout/storage occupation at one grid point."""
    params, n_r, n_s, omega_d, omega_p = args
    pk = replace(params, omega_p=omega_p, omega_d=omega_d)
    dk = dev.derive_params(pk)
    space = dev.FockSpace([("r", n_r), ("s", n_s)])
    model = dev.two_mode_model(pk, dk, space)
    try:
        rho = steady_state(model, check_degenerate=False)
    except SteadyStateConvergenceError as exc:
        return None, str(exc)
    return (expect(rho, number_op(space, "r")).real,
            expect(rho, number_op(space, "s")).real), None


def run_spectroscopy(scenario: Scenario) -> list[Path]:
    params, rest = _load(scenario)
    probe_eps = _knob(rest, "probe_eps_d_hz", 1e6 / TWO_PI) * TWO_PI
    n_probe = int(_knob(rest, "n_probe", 60))
    n_pump = int(_knob(rest, "n_pump", 40))
    probe_span = _knob(rest, "probe_span_hz", 12e6) * TWO_PI
    pump_span = _knob(rest, "pump_span_hz", 10e6) * TWO_PI
    n_r = int(_knob(rest, "fock_r", 4))
    n_s = int(_knob(rest, "fock_s", 12))
    fine_window = _knob(rest, "fine_window_hz", 0.3e6) * TWO_PI
    fine_points = int(_knob(rest, "fine_points", 41))
    depth_window = _knob(rest, "depth_window_hz", 30e3) * TWO_PI
    depth_points = int(_knob(rest, "depth_points", 13))
    workers = int(_knob(rest, "workers", 1))
    _reject_unknown(rest)

    params = replace(params, eps_d=-probe_eps)
    out = Path(scenario.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    derived0 = dev.derive_params(params)
    meta = _meta(params, derived0, scenario, probe_eps_d=probe_eps)

    xi2_0 = abs(derived0.xi_p) ** 2
    omega_r_stark = params.stark_shifted_omega_r(xi2_0)
    pump_axis = params.omega_p + np.linspace(-pump_span, pump_span, n_pump)
    probe_axis = omega_r_stark + np.linspace(-probe_span, probe_span, n_probe)
    probe_step = probe_axis[1] - probe_axis[0]

    def detunings(omega_d, omega_p, xi2):
        dd = params.stark_shifted_omega_r(xi2) - omega_d
        dsum = 2.0 * params.stark_shifted_omega_s(xi2) - omega_p - omega_d
        return dd, dsum - dd

    # (i) semi-classical min() map over the experimental axes
    power = np.empty((n_pump, n_probe))
    for i, wp in enumerate(pump_axis):
        pk = replace(params, omega_p=wp)
        dk = dev.derive_params(pk)
        xi2 = abs(dk.xi_p) ** 2
        g2 = abs(dk.g2)
        for j, wd in enumerate(probe_axis):
            dd, dp = detunings(wd, wp, xi2)
            lor = abs(params.eps_d) ** 2 / (params.kappa_r ** 2 / 4 + dd ** 2)
            if g2 == 0:
                power[i, j] = lor        # no conversion: no dip anywhere
                continue
            parab = ((dp + dd) ** 2 + params.kappa_s ** 2) / (16 * g2 ** 2)
            power[i, j] = min(lor, parab)
    ser.write_map_csv(out / "semiclassical_map.csv",
                      probe_axis / TWO_PI, pump_axis / TWO_PI, power,
                      {**meta, "content": "min-model readout power |a_r|^2"},
                      x_label="f_probe_hz", y_label="f_pump_hz")

    failures = []

    def solve_points(points):
        """Steady-state solves for (omega_d, omega_p) pairs, fanned out to
        worker processes when requested; failures recorded, run continues."""
        tasks = [(params, n_r, n_s, wd, wp) for wd, wp in points]
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(_steady_readout_point, tasks,
                                        chunksize=4))
        else:
            results = [_steady_readout_point(t) for t in tasks]
        values = np.full((len(points), 2), np.nan)
        for k, (res, err) in enumerate(results):
            if err is not None:
                failures.append((points[k][1], points[k][0], err))
            else:
                values[k] = res
        return values

    # (ii) quantum cut along the probe axis at the nominal pump frequency
    cut = solve_points([(wd, params.omega_p) for wd in probe_axis])
    ser.write_table_csv(out / "quantum_cut.csv",
                        {"f_probe_hz": probe_axis / TWO_PI, "n_r": cut[:, 0],
                         "n_s": cut[:, 1], "semiclassical": power[np.argmin(
                             np.abs(pump_axis - params.omega_p))]},
                        {**meta, "content": "steady-state readout photons, "
                                            "fixed pump"})

    # (iii) dip location vs pump: fine local scans around the matching point
    g2_0 = abs(derived0.g2)
    floor = params.kappa_s ** 2 / (16 * g2_0 ** 2) if g2_0 else math.inf
    locals_per_pump = []
    for wp in pump_axis:
        pk = replace(params, omega_p=wp)
        dk = dev.derive_params(pk)
        xi2 = abs(dk.xi_p) ** 2
        w_theory = 2.0 * params.stark_shifted_omega_s(xi2) - wp
        locals_per_pump.append(
            (w_theory,
             w_theory + np.linspace(-fine_window, fine_window, fine_points)))
    all_points = [(wd, wp) for wp, (_, local) in zip(pump_axis, locals_per_pump)
                  for wd in local]
    all_vals = solve_points(all_points)[:, 0].reshape(n_pump, fine_points)

    dip_f, dip_theory, dip_depth, dip_ok = [], [], [], []
    for (w_theory, local), vals in zip(locals_per_pump, all_vals):
        if np.all(np.isnan(vals)):
            dip_f.append(np.nan); dip_theory.append(w_theory / TWO_PI)
            dip_depth.append(np.nan); dip_ok.append(0)
            continue
        jmin = int(np.nanargmin(vals))
        interior = 0 < jmin < fine_points - 1
        dip_f.append(local[jmin] / TWO_PI)
        dip_theory.append(w_theory / TWO_PI)
        dip_depth.append(vals[jmin])
        dip_ok.append(int(interior))
    ser.write_table_csv(out / "dip_trace.csv",
                        {"f_pump_hz": pump_axis / TWO_PI,
                         "f_dip_hz": np.array(dip_f),
                         "f_theory_hz": np.array(dip_theory),
                         "deviation_hz": np.array(dip_f) - np.array(dip_theory),
                         "dip_n_r": np.array(dip_depth),
                         "dip_interior": np.array(dip_ok)},
                        {**meta, "semiclassical_floor": floor,
                         "probe_step_hz": probe_step / TWO_PI,
                         "n_solver_failures": len(failures)})

    # (iv) dip depth at the nominal pump point, sampled finely enough that
    # the parabola contributes nothing at the resolved minimum
    xi2_n = abs(derived0.xi_p) ** 2
    w_theory = 2.0 * params.stark_shifted_omega_s(xi2_n) - params.omega_p
    local = w_theory + np.linspace(-depth_window, depth_window, depth_points)
    depth_vals = solve_points([(wd, params.omega_p) for wd in local])[:, 0]
    ser.write_table_csv(out / "dip_depth.csv",
                        {"f_probe_hz": local / TWO_PI, "n_r": depth_vals},
                        {**meta, "semiclassical_floor": floor,
                         "quantum_dip_depth": float(np.nanmin(depth_vals)),
                         "depth_ratio": float(np.nanmin(depth_vals) / floor)})
    if failures:
        ser.write_table_csv(out / "solver_failures.csv",
                            {"f_pump_hz": np.array([f[0] for f in failures]) / TWO_PI,
                             "f_probe_hz": np.array([f[1] for f in failures]) / TWO_PI},
                            {**meta, "content": "steady-state solver failures"})
    return sorted(out.glob("*.csv"))


def _reject_unknown(rest: dict):
    if rest:
        raise ValueError(f"unknown override keys: {', '.join(sorted(rest))}")


# ---------------------------------------------------------------------------
# bistability (Fig-3 style panels)
# ---------------------------------------------------------------------------

_PHASE_LABELS = {0.0: "arg0", 0.25: "arg+45", -0.25: "arg-45",
                 0.5: "arg+90", -0.5: "arg-90", 0.75: "arg+135",
                 -0.75: "arg-135", 1.0: "arg180"}


def run_bistability(scenario: Scenario) -> list[Path]:
    params, rest = _load(scenario)
    n_s = int(_knob(rest, "fock_s", 40))
    amp = _knob(rest, "amp", 2.6)
    t_us = _knob(rest, "t_us", 10.0)
    grid_n = int(_knob(rest, "grid_n", 41))
    extent = _knob(rest, "extent", 3.5)
    kappa_s = _knob(rest, "kappa_s", None,
                    cast=lambda v: None if v is None else float(v))
    _reject_unknown(rest)

    derived = dev.derive_params(params)
    out = Path(scenario.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    meta = _meta(params, derived, scenario, init_amp=amp, t_us=t_us)

    model = dev.reduced_model(params, derived, n_s, kappa_s=kappa_s)
    files = []
    for frac, label in _PHASE_LABELS.items():
        alpha0 = amp * np.exp(1j * math.pi * frac)
        init = coherent_state(model.space, "s", alpha0)
        res = evolve(model, init, [t_us * 1e-6])
        _wigner_file(out / f"wigner_{label}.csv", res.states[-1], extent,
                     grid_n, {**meta, "init_phase_pi": frac, "t_us": t_us})
        files.append(out / f"wigner_{label}.csv")

    field = sc.flow_field_grid(derived, params.kappa_s, params.chi_ss,
                               extent=extent, n_grid=61)
    files += _write_flow_files(out, field, meta)
    return files


def _write_flow_files(out: Path, field: sc.FlowField, meta: dict) -> list[Path]:
    ser.write_map_csv(out / "flow_field.csv", field.x, field.y, field.speed,
                      {**meta, "content": "|d alpha/dt| classical flow speed"},
                      x_label="re_alpha", y_label="im_alpha")
    tid, step, re, im = [], [], [], []
    for i, path in enumerate(field.trajectories):
        for j, z in enumerate(path):
            tid.append(i); step.append(j); re.append(z.real); im.append(z.imag)
    ser.write_table_csv(out / "flow_trajectories.csv",
                        {"trajectory": np.array(tid), "step": np.array(step),
                         "re_alpha": np.array(re), "im_alpha": np.array(im)},
                        {**meta, "n_trajectories": len(field.trajectories),
                         "all_converged": int(all(field.converged))})
    fps = field.fixed_points
    ser.write_table_csv(out / "fixed_points.csv",
                        {"re_alpha": np.array([z.real for z in fps.amplitudes]),
                         "im_alpha": np.array([z.imag for z in fps.amplitudes]),
                         "stable": np.array([int(s == "stable")
                                             for s in fps.stability])},
                        {**meta, "r_inf": fps.r_inf,
                         "theta_minus": fps.theta_minus,
                         "theta_plus": fps.theta_plus, "phi_K": fps.phi_K,
                         "above_threshold": int(fps.above_threshold)})
    return [out / "flow_field.csv", out / "flow_trajectories.csv",
            out / "fixed_points.csv"]


# ---------------------------------------------------------------------------
# cat / Fock evolution (Fig-4 and Fig-S7 style)
# ---------------------------------------------------------------------------

def _run_evolution_scenario(scenario: Scenario, init_fock: int,
                            default_times: str, prefix: str) -> list[Path]:
    params, rest = _load(scenario)
    n_s = int(_knob(rest, "fock_s", 40))
    times_us = _times_us(rest, default_times)
    grid_n = int(_knob(rest, "grid_n", 41))
    extent = _knob(rest, "extent", 3.5)
    kappa_s = _knob(rest, "kappa_s", None,
                    cast=lambda v: None if v is None else float(v))
    include_thermal = _knob(rest, "thermal", False, cast=bool)
    _reject_unknown(rest)

    derived = dev.derive_params(params)
    out = Path(scenario.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    meta = _meta(params, derived, scenario, init_fock=init_fock,
                 n_s=n_s, kappa_s_override="none" if kappa_s is None else kappa_s)

    model = dev.reduced_model(params, derived, n_s, kappa_s=kappa_s,
                              include_thermal=include_thermal)
    init = fock_state(model.space, "s", init_fock)
    positive = times_us[times_us > 0]
    res = evolve(model, init, positive * 1e-6)
    by_time = dict(zip(positive, res.states))
    if np.any(times_us == 0):
        by_time[0.0] = init

    files = []
    rows = {k: [] for k in ("t_us", "nbar", "parity", "min_W", "max_W",
                            "mean_X", "mean_P", "var_X", "var_P",
                            "cum4_X", "cum4_P")}
    for t in times_us:
        state = by_time[float(t)]
        tag = f"{prefix}_t{t:g}us"
        grid = _wigner_file(out / f"wigner_{tag}.csv", state, extent, grid_n,
                            {**meta, "t_us": float(t)})
        files.append(out / f"wigner_{tag}.csv")
        p_n = tomo.photon_distribution(state)
        ser.write_table_csv(out / f"photon_{tag}.csv",
                            {"n": np.arange(p_n.size), "p": p_n},
                            {**meta, "t_us": float(t)})
        files.append(out / f"photon_{tag}.csv")
        obs = _single_mode_observables(state)
        rows["t_us"].append(float(t))
        rows["min_W"].append(float(grid.values.min()))
        rows["max_W"].append(float(grid.values.max()))
        for key in ("nbar", "parity", "mean_X", "mean_P", "var_X", "var_P",
                    "cum4_X", "cum4_P"):
            rows[key].append(obs[key])
    summary = out / "summary.csv"
    ser.write_table_csv(summary, {k: np.array(v) for k, v in rows.items()},
                        {**meta, "integrator": res.stats})
    files.append(summary)
    return files


def run_cat_evolution(scenario: Scenario) -> list[Path]:
    return _run_evolution_scenario(scenario, init_fock=0,
                                   default_times="0,2,7,19", prefix="cat")


def run_fock_evolution(scenario: Scenario) -> list[Path]:
    return _run_evolution_scenario(scenario, init_fock=1,
                                   default_times="0,1,2,3,5,7,10",
                                   prefix="fock")


# ---------------------------------------------------------------------------
# flow field only (Fig-3 central panel)
# ---------------------------------------------------------------------------

def run_flowfield(scenario: Scenario) -> list[Path]:
    params, rest = _load(scenario)
    extent = _knob(rest, "extent", 3.0)
    n_grid = int(_knob(rest, "grid_n", 61))
    n_seeds = int(_knob(rest, "seeds", 24))
    _reject_unknown(rest)
    derived = dev.derive_params(params)
    out = Path(scenario.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    meta = _meta(params, derived, scenario)
    field = sc.flow_field_grid(derived, params.kappa_s, params.chi_ss,
                               extent=extent, n_grid=n_grid, n_seeds=n_seeds)
    if not all(field.converged):
        bad = [i for i, ok in enumerate(field.converged) if not ok]
        warnings.warn(f"{len(bad)} trajectories did not converge "
                      f"(seed indices {bad})", stacklevel=2)
    return _write_flow_files(out, field, meta)


# ---------------------------------------------------------------------------
# tomography round trip (Fig-S6/S10 style)
# ---------------------------------------------------------------------------

def run_tomography_roundtrip(scenario: Scenario) -> list[Path]:
    params, rest = _load(scenario)
    n_s = int(_knob(rest, "fock_s", 40))
    times_us = _times_us(rest, "2,7,19")
    grid_n = int(_knob(rest, "grid_n", 41))
    extent = _knob(rest, "extent", 3.5)
    dim = int(_knob(rest, "dim", 16))
    shots = int(_knob(rest, "shots", 10000))
    n_max = _knob(rest, "n_max", 20, cast=lambda v: None if v == "inf" else int(v))
    p_gg = _knob(rest, "p_gg", 0.99)
    p_ee = _knob(rest, "p_ee", 0.99)
    _reject_unknown(rest)

    rng = np.random.default_rng(scenario.seed)
    derived = dev.derive_params(params)
    out = Path(scenario.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    model_meas = tomo.MeasurementModel(n_max=n_max, p_gg=p_gg, p_ee=p_ee,
                                       shots=shots)
    meta = _meta(params, derived, scenario, dim=dim, shots=shots,
                 n_max="inf" if n_max is None else n_max, p_gg=p_gg, p_ee=p_ee)

    model = dev.reduced_model(params, derived, n_s)
    init = fock_state(model.space, "s", 0)
    res = evolve(model, init, np.asarray(times_us) * 1e-6)

    alphas = tomo.square_grid(extent, grid_n)
    files = []
    fid_rows = {"t_us": [], "fidelity": [], "residual": [], "iterations": []}
    for t, true_state in zip(times_us, res.states):
        measured = tomo.simulate_wigner_grid(true_state, alphas, model_meas, rng)
        mpath = out / f"measured_t{t:g}us.csv"
        ser.write_tomography_csv(mpath, measured,
                                 {**meta, "t_us": float(t),
                                  "grid_extent": extent, "grid_n": grid_n})
        files.append(mpath)
        try:
            recon, report = tomo.reconstruct_density_matrix(
                measured, dim, reference=_truncate_state(true_state, dim))
        except tomo.ReconstructionError as exc:
            fid_rows["t_us"].append(float(t))
            fid_rows["fidelity"].append(np.nan)
            fid_rows["residual"].append(np.nan)
            fid_rows["iterations"].append(-1)
            warnings.warn(f"t = {t} us: {exc}", stacklevel=2)
            continue
        fid_rows["t_us"].append(float(t))
        fid_rows["fidelity"].append(report.fidelity)
        fid_rows["residual"].append(report.residual)
        fid_rows["iterations"].append(report.iterations)
        p_true = tomo.photon_distribution(true_state)[:dim]
        p_recon = tomo.photon_distribution(recon)
        ppath = out / f"photon_compare_t{t:g}us.csv"
        ser.write_table_csv(ppath, {"n": np.arange(dim), "p_true": p_true,
                                    "p_reconstructed": p_recon},
                            {**meta, "t_us": float(t)})
        files.append(ppath)
    fpath = out / "fidelity_vs_time.csv"
    ser.write_table_csv(fpath, {k: np.array(v) for k, v in fid_rows.items()},
                        meta)
    files.append(fpath)
    return files


def _truncate_state(state: QuantumState, dim: int) -> QuantumState:
    """Project a single-mode state onto the lowest `dim` levels."""
    rho = state.rho()[:dim, :dim]
    tr = np.trace(rho).real
    if tr < 0.5:
        raise ValueError(f"truncation to dim {dim} keeps only {tr:.3f} of the state")
    space = single_mode(dim, state.space.labels[0])
    return QuantumState.from_density_matrix(space, rho / tr, atol=1e-8)


_RUNNERS = {
    "spectroscopy": run_spectroscopy,
    "bistability": run_bistability,
    "cat-evolution": run_cat_evolution,
    "fock-evolution": run_fock_evolution,
    "flowfield": run_flowfield,
    "tomography-roundtrip": run_tomography_roundtrip,
}


def run(scenario: Scenario) -> list[Path]:
    return _RUNNERS[scenario.name](scenario)
