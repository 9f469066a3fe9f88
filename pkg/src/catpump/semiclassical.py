"""
Classical-limit analysis of the pumped system.

Single-mode flow for the coherent amplitude alpha of the storage:

    d(alpha)/dt = -2i eps2 alpha* - (-i chi_ss + kappa_2) |alpha|^2 alpha
                  - (kappa_s / 2) alpha

with fixed points alpha = 0 and alpha_inf e^{i theta+-} (theta+ = theta- + pi)
above the drive threshold |eps2| > kappa_s / 4. The two-mode section gives
the readout spectroscopy response: a Lorentzian clipped by the dark-state
parabola, i.e. the conversion dip.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .device import DerivedParams, DeviceParams


def flow(alpha: complex, derived: DerivedParams, kappa_s: float,
         chi_ss: float = 0.0) -> complex:
    """d(alpha)/dt of the classical single-mode limit."""
    damp = (-1j * chi_ss + derived.kappa_2)
    return (-2j * derived.eps2 * np.conj(alpha)
            - damp * abs(alpha) ** 2 * alpha
            - 0.5 * kappa_s * alpha)


@dataclass(frozen=True)
class FixedPointSet:
    """Roots of the flow with their polar data and linear stability."""

    amplitudes: tuple[complex, ...]       # 0 first, then the two lobes
    r_inf: float
    theta_minus: float
    theta_plus: float
    phi_K: float
    stability: tuple[str, ...]            # per amplitude: stable / saddle / unstable
    above_threshold: bool
    threshold: float                      # |eps2| at the bifurcation


def _jacobian_eigs(alpha0: complex, derived: DerivedParams, kappa_s: float,
                   chi_ss: float, scale: float):
    """Eigenvalues of the real 2-D linearization at alpha0 (numeric)."""
    h = max(scale, 1.0) * 1e-6

    def f(x, y):
        v = flow(x + 1j * y, derived, kappa_s, chi_ss)
        return np.array([v.real, v.imag])

    x0, y0 = alpha0.real, alpha0.imag
    J = np.empty((2, 2))
    J[:, 0] = (f(x0 + h, y0) - f(x0 - h, y0)) / (2 * h)
    J[:, 1] = (f(x0, y0 + h) - f(x0, y0 - h)) / (2 * h)
    return np.linalg.eigvals(J)


def _classify(eigs) -> str:
    re = np.real(eigs)
    if np.all(re < 0):
        return "stable"
    if np.all(re > 0):
        return "unstable"
    return "saddle"


def fixed_points(derived: DerivedParams, kappa_s: float,
                 chi_ss: float = 0.0) -> FixedPointSet:
    """Closed-form roots of the flow.

    r_inf^2 solves the quadratic r2^2 x^2 + r2 kappa_s cos(phi2) x
    + kappa_s^2/4 - 4|eps2|^2 = 0; the phases are theta- = theta2/2 + 3pi/4
    - phi_K/2 and theta+ = theta- + pi. Below |eps2| = kappa_s/4 only the
    vacuum root exists.
    """
    eps2 = derived.eps2
    kappa_2 = derived.kappa_2
    r2c = -1j * chi_ss + kappa_2
    r2, phi2 = abs(r2c), math.atan2(r2c.imag, r2c.real)
    threshold = kappa_s / 4.0
    zero_eigs = _jacobian_eigs(0j, derived, kappa_s, chi_ss, scale=1.0)

    disc = (r2 * kappa_s * math.cos(phi2)) ** 2 \
        - 4.0 * r2 ** 2 * (kappa_s ** 2 / 4.0 - 4.0 * abs(eps2) ** 2)
    if abs(eps2) <= threshold or disc < 0 or r2 == 0:
        return FixedPointSet(
            amplitudes=(0j,), r_inf=0.0, theta_minus=0.0, theta_plus=math.pi,
            phi_K=0.0, stability=(_classify(zero_eigs),),
            above_threshold=False, threshold=threshold)

    r_inf2 = (-r2 * kappa_s * math.cos(phi2) + math.sqrt(disc)) / (2.0 * r2 ** 2)
    r_inf = math.sqrt(r_inf2)
    theta2 = math.atan2(eps2.imag, eps2.real)
    phi_K = math.atan(r_inf2 * r2 * math.sin(phi2)
                      / (r_inf2 * r2 * math.cos(phi2) + kappa_s / 2.0))
    theta_minus = theta2 / 2.0 + 3.0 * math.pi / 4.0 - phi_K / 2.0
    theta_plus = theta_minus + math.pi

    lobes = (r_inf * np.exp(1j * theta_minus), r_inf * np.exp(1j * theta_plus))
    amps = (0j,) + tuple(complex(z) for z in lobes)
    stab = [_classify(zero_eigs)]
    for z in lobes:
        stab.append(_classify(_jacobian_eigs(complex(z), derived, kappa_s,
                                             chi_ss, scale=r_inf)))
    return FixedPointSet(
        amplitudes=amps, r_inf=r_inf, theta_minus=theta_minus,
        theta_plus=theta_plus, phi_K=phi_K, stability=tuple(stab),
        above_threshold=True, threshold=threshold)


@dataclass(frozen=True)
class FlowField:
    """|flow| on a grid plus border-seeded trajectories."""

    x: np.ndarray            # grid axes (re alpha / im alpha)
    y: np.ndarray
    speed: np.ndarray        # |d alpha/dt|, shape (len(y), len(x))
    trajectories: tuple[np.ndarray, ...]   # complex paths
    endpoints: tuple[complex, ...]
    converged: tuple[bool, ...]
    fixed_points: FixedPointSet


def flow_field_grid(derived: DerivedParams, kappa_s: float,
                    chi_ss: float = 0.0, extent: float = 3.0,
                    n_grid: int = 61, n_seeds: int = 24,
                    t_max: float | None = None,
                    endpoint_tol: float = 1e-3) -> FlowField:
    """Sample |d alpha/dt| and integrate trajectories from the panel border."""
    x = np.linspace(-extent, extent, n_grid)
    y = np.linspace(-extent, extent, n_grid)
    X, Y = np.meshgrid(x, y)
    A = X + 1j * Y
    damp = (-1j * chi_ss + derived.kappa_2)
    F = (-2j * derived.eps2 * np.conj(A) - damp * np.abs(A) ** 2 * A
         - 0.5 * kappa_s * A)
    speed = np.abs(F)

    fps = fixed_points(derived, kappa_s, chi_ss)
    stable = [z for z, s in zip(fps.amplitudes, fps.stability) if s == "stable"]
    targets = stable if stable else list(fps.amplitudes)
    rate_scale = derived.kappa_2 * max(fps.r_inf, 1e-3) ** 2 + kappa_s / 2.0
    if t_max is None:
        t_max = 200.0 / rate_scale

    # seeds uniformly spaced along the border
    per_side = max(n_seeds // 4, 1)
    ts = np.linspace(-extent, extent, per_side + 1)[:-1]
    seeds = ([complex(t, -extent) for t in ts] + [complex(extent, t) for t in ts]
             + [complex(-t, extent) for t in ts] + [complex(-extent, -t) for t in ts])

    def rhs(t, u):
        v = flow(u[0] + 1j * u[1], derived, kappa_s, chi_ss)
        return [v.real, v.imag]

    def near_target(t, u):
        z = u[0] + 1j * u[1]
        return min(abs(z - w) for w in targets) - endpoint_tol / 4.0
    near_target.terminal = True
    near_target.direction = -1

    trajs, ends, ok = [], [], []
    for seed in seeds:
        sol = solve_ivp(rhs, (0.0, t_max), [seed.real, seed.imag],
                        method="RK45", rtol=1e-8, atol=1e-10,
                        events=near_target, dense_output=False, max_step=t_max / 50)
        path = sol.y[0] + 1j * sol.y[1]
        end = complex(path[-1])
        dist = min(abs(end - w) for w in targets)
        trajs.append(path)
        ends.append(end)
        ok.append(bool(dist < endpoint_tol))
    return FlowField(x=x, y=y, speed=speed, trajectories=tuple(trajs),
                     endpoints=tuple(ends), converged=tuple(ok),
                     fixed_points=fps)


@dataclass(frozen=True)
class ReadoutResponse:
    """Spectroscopy model over (probe detuning, pump detuning)."""

    delta_d: np.ndarray            # probe axis (rad/s)
    delta_p: np.ndarray            # pump axis (rad/s)
    power: np.ndarray              # min() model |a_r|^2, shape (len(dp), len(dd))
    lorentzian: np.ndarray
    dark_branch: np.ndarray        # complex a_r of the dark-state solution
    dark_exists: np.ndarray        # per-point existence condition <= 1
    dip_floor: float               # kappa_s^2 / 16 |g2|^2


def readout_response(params: DeviceParams, derived: DerivedParams,
                     delta_d_range, delta_p_range) -> ReadoutResponse:
    """Semi-classical |a_r|^2 response map with the dark-state branch."""
    dd = np.asarray(delta_d_range, dtype=float)
    dp = np.asarray(delta_p_range, dtype=float)
    DD, DP = np.meshgrid(dd, dp)
    g2 = derived.g2
    eps_d = derived.eps_d
    kr, ks = params.kappa_r, params.kappa_s

    lor = np.abs(eps_d) ** 2 / (kr ** 2 / 4.0 + DD ** 2)
    if g2 == 0:
        # no conversion: plain Lorentzian, no dark state anywhere
        return ReadoutResponse(
            delta_d=dd, delta_p=dp, power=lor, lorentzian=lor,
            dark_branch=np.full_like(lor, np.nan, dtype=complex),
            dark_exists=np.zeros_like(lor, dtype=bool), dip_floor=np.inf)
    parab = ((DP + DD) ** 2 + ks ** 2) / (16.0 * abs(g2) ** 2)
    power = np.minimum(lor, parab)

    # dark branch with theta_s = 0 phase reference
    dark = (-(DP + DD) + 1j * ks) / (4.0 * g2)
    if eps_d == 0:
        exists = np.zeros_like(lor, dtype=bool)
    else:
        exists = (np.abs(DD - 1j * kr / 2.0) * np.abs(DP + DD - 1j * ks)
                  / (4.0 * abs(g2 * eps_d))) <= 1.0
    return ReadoutResponse(
        delta_d=dd, delta_p=dp, power=power, lorentzian=lor,
        dark_branch=dark, dark_exists=exists,
        dip_floor=ks ** 2 / (16.0 * abs(g2) ** 2))
