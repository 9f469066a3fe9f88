"""
Lindblad dynamics: Liouvillian construction, time evolution, steady states
and the adiabatic elimination of a fast readout mode.

The master equation is
    drho/dt = -i [H, rho] + sum_k D[c_k] rho,
    D[c] rho = c rho c^dag - (c^dag c rho + rho c^dag c) / 2,
with rate-weighted collapse operators c_k (e.g. sqrt(kappa) a). The
Liouvillian acts on column-stacked density matrices: vec(A X B) =
(B^T kron A) vec(X).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse
from scipy.integrate import solve_ivp
from scipy.sparse.linalg import splu

from .fock import (
    FockSpace, Operator, QuantumState, SpaceMismatchError,
    annihilation, max_abs, single_mode,
)

DIM_SQ_CAP = 512 ** 2        # refuse Liouvillians above this vectorized size
DEGENERACY_PROBE_DIM = 64    # run the two-constraint degeneracy probe up to here


class StiffIntegrationError(RuntimeError):
    """Integrator step size underflowed; names the fastest rate in the model."""


class DegenerateSteadyStateError(RuntimeError):
    """Liouvillian null space is (numerically) more than one-dimensional."""


class SteadyStateConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class LindbladModel:
    """Hamiltonian (rad/s) plus rate-weighted collapse operators."""

    hamiltonian: Operator
    collapse_ops: tuple[Operator, ...]
    space: FockSpace = field(init=False)

    def __init__(self, hamiltonian: Operator, collapse_ops):
        if not hamiltonian.hermitian_hint:
            hamiltonian = hamiltonian.as_hermitian()
        collapse_ops = tuple(collapse_ops)
        for c in collapse_ops:
            if c.space != hamiltonian.space:
                raise SpaceMismatchError("collapse operator on a different space")
        object.__setattr__(self, "hamiltonian", hamiltonian)
        object.__setattr__(self, "collapse_ops", collapse_ops)
        object.__setattr__(self, "space", hamiltonian.space)

    def fastest_rate(self) -> float:
        """Magnitude estimate of the stiffest rate (for diagnostics)."""
        rates = [max_abs(self.hamiltonian.matrix)]
        for c in self.collapse_ops:
            cdc = c.matrix.conj().T @ c.matrix
            rates.append(max_abs(cdc))
        return float(max(rates))


@dataclass(frozen=True, eq=False)
class Liouvillian:
    """Sparse superoperator L with L vec(rho) = vec(drho/dt)."""

    space: FockSpace
    superoperator: sparse.csr_matrix

    def trace_row_residual(self) -> float:
        """max |vec(I)^T L|; zero for a trace-preserving generator."""
        d = self.space.dim
        tr = np.zeros(d * d)
        tr[np.arange(d) * (d + 1)] = 1.0
        return float(np.max(np.abs(tr @ self.superoperator)))


def vec(rho: np.ndarray) -> np.ndarray:
    """Column-stacking vectorization."""
    return np.asarray(rho).flatten(order="F")


def unvec(v: np.ndarray, d: int) -> np.ndarray:
    return np.asarray(v).reshape((d, d), order="F")


def build_liouvillian(model: LindbladModel, dim_sq_cap: int = DIM_SQ_CAP) -> Liouvillian:
    """Assemble the sparse Lindblad superoperator."""
    d = model.space.dim
    if d * d > dim_sq_cap:
        raise MemoryError(
            f"Liouvillian size {d*d}^2 exceeds cap {dim_sq_cap}^2; "
            f"raise dim_sq_cap to proceed")
    I = sparse.identity(d, format="csr", dtype=complex)
    H = sparse.csr_matrix(model.hamiltonian.matrix)
    L = -1j * (sparse.kron(I, H) - sparse.kron(H.T, I))
    for c_op in model.collapse_ops:
        c = sparse.csr_matrix(c_op.matrix)
        cdc = (c.conj().T @ c).tocsr()
        L = L + sparse.kron(c.conj(), c) \
            - 0.5 * (sparse.kron(I, cdc) + sparse.kron(cdc.T, I))
    return Liouvillian(model.space, L.tocsr())


def apply_rhs(model: LindbladModel, rho: np.ndarray) -> np.ndarray:
    """Direct evaluation of -i[H, rho] + sum_k D[c_k] rho (oracle path)."""
    H = model.hamiltonian.dense()
    out = -1j * (H @ rho - rho @ H)
    for c_op in model.collapse_ops:
        c = c_op.dense()
        cd = c.conj().T
        cdc = cd @ c
        out += c @ rho @ cd - 0.5 * (cdc @ rho + rho @ cdc)
    return out


@dataclass(frozen=True, eq=False)
class EvolutionResult:
    times: np.ndarray
    states: tuple[QuantumState, ...]
    stats: dict


def evolve(model: LindbladModel, initial: QuantumState, times,
           rtol: float = 1e-8, atol: float = 1e-10,
           state_atol: float = 1e-6) -> EvolutionResult:
    """Adaptive RK45 integration of the vectorized master equation.

    `times` are the output times in seconds (first may be > 0; integration
    starts at t=0 from `initial`).
    """
    if initial.space != model.space:
        raise SpaceMismatchError("initial state not in the model space")
    times = np.atleast_1d(np.asarray(times, dtype=float))
    if np.any(np.diff(times) <= 0):
        raise ValueError("times must be strictly increasing")
    d = model.space.dim
    liou = build_liouvillian(model)
    L = liou.superoperator
    y0 = vec(initial.rho()).astype(complex)

    sol = solve_ivp(lambda t, y: L @ y, (0.0, float(times[-1])), y0,
                    t_eval=times, method="RK45", rtol=rtol, atol=atol)
    if not sol.success:
        raise StiffIntegrationError(
            f"integration failed ({sol.message}); fastest model rate "
            f"~ {model.fastest_rate():.3e} rad/s suggests a stiff term")

    states = []
    max_trace_drift = 0.0
    for i in range(len(times)):
        rho = unvec(sol.y[:, i], d)
        tr = np.trace(rho).real
        max_trace_drift = max(max_trace_drift, abs(tr - 1.0))
        rho = 0.5 * (rho + rho.conj().T)
        states.append(QuantumState.from_density_matrix(
            model.space, rho / tr, atol=state_atol, psd_atol=state_atol))
    stats = {"nfev": int(sol.nfev), "n_steps": len(sol.t),
             "rtol": rtol, "atol": atol, "max_trace_drift": max_trace_drift}
    if max_trace_drift > 1e-6:
        warnings.warn(f"trace drift {max_trace_drift:.2e} exceeds 1e-6; "
                      f"tighten integrator tolerances", stacklevel=2)
    return EvolutionResult(times=times, states=tuple(states), stats=stats)


def _direct_solve(L: sparse.csr_matrix, d: int, constraint_row: int):
    """Replace one row with the trace constraint and sparse-solve."""
    M = L.tolil(copy=True)
    weight = max(1.0, abs(L).sum() / (d * d))
    tr = np.zeros(d * d)
    tr[np.arange(d) * (d + 1)] = weight
    M[constraint_row, :] = tr
    b = np.zeros(d * d, dtype=complex)
    b[constraint_row] = weight
    lu = splu(sparse.csc_matrix(M))
    return lu.solve(b)


def steady_state(model: LindbladModel, residual_rtol: float = 1e-9,
                 check_degenerate: bool | None = None) -> QuantumState:
    """Null vector of the Liouvillian with unit trace.

    Solves by replacing one row of L with the trace constraint; falls back
    to shifted inverse iteration if the direct residual is poor. A
    degeneracy probe (two independent constraint placements) runs by
    default for small systems, where e.g. kappa_s -> 0 makes the null
    space two-dimensional and the solver must say so.
    """
    d = model.space.dim
    liou = build_liouvillian(model)
    L = liou.superoperator
    L_scale = max_abs(L)

    x = _direct_solve(L, d, 0)
    resid = np.linalg.norm(L @ x) / np.linalg.norm(x)
    if resid > residual_rtol * L_scale:
        # shifted inverse iteration fallback
        shift = residual_rtol * L_scale
        A = sparse.csc_matrix(L + shift * sparse.identity(d * d, dtype=complex))
        try:
            lu = splu(A)
            y = x if np.linalg.norm(x) > 0 else np.random.default_rng(0).normal(size=d * d)
            for _ in range(50):
                y = lu.solve(y)
                y = y / np.linalg.norm(y)
                r = np.linalg.norm(L @ y)
                if r < residual_rtol * L_scale:
                    break
            x = y
            resid = np.linalg.norm(L @ x) / np.linalg.norm(x)
        except RuntimeError as exc:
            raise SteadyStateConvergenceError(f"sparse factorization failed: {exc}")
    if resid > residual_rtol * L_scale:
        raise SteadyStateConvergenceError(
            f"steady-state residual {resid:.2e} exceeds "
            f"{residual_rtol:.1e} * |L| = {residual_rtol * L_scale:.2e}")

    rho = unvec(x, d)
    rho = 0.5 * (rho + rho.conj().T)
    tr = np.trace(rho).real
    if abs(tr) < 1e-300:
        raise SteadyStateConvergenceError("steady-state solution has zero trace")
    rho = rho / tr

    if check_degenerate is None:
        check_degenerate = d <= DEGENERACY_PROBE_DIM
    if check_degenerate:
        x2 = _direct_solve(L, d, d + 1)  # constraint on a different row
        rho2 = unvec(x2, d)
        rho2 = 0.5 * (rho2 + rho2.conj().T)
        tr2 = np.trace(rho2).real
        if abs(tr2) > 1e-300:
            rho2 = rho2 / tr2
            dev = np.max(np.abs(rho2 - rho))
            if dev > 1e-6:
                raise DegenerateSteadyStateError(
                    f"two constraint placements disagree by {dev:.2e}: the "
                    f"null space is at least two-dimensional")

    # small negative eigenvalues from rounding are clipped, large ones are real
    evs, U = np.linalg.eigh(rho)
    if evs.min() < -1e-6:
        raise SteadyStateConvergenceError(
            f"steady-state solution has eigenvalue {evs.min():.2e} < -1e-6")
    evs = np.clip(evs, 0.0, None)
    rho = (U * (evs / evs.sum())) @ U.conj().T
    return QuantumState.from_density_matrix(model.space, rho, atol=1e-8)


# ---------------------------------------------------------------------------
# adiabatic elimination of the readout
# ---------------------------------------------------------------------------

def _identify_single_mode_ops(model: LindbladModel, readout: str, storage: str):
    """Match each collapse operator to sqrt(rate) * a_mode; return the rates."""
    rates = {}
    for c_op in model.collapse_ops:
        c = c_op.dense()
        for mode in (readout, storage):
            a = annihilation(model.space, mode).dense()
            # coefficient from the largest entry of a
            ij = np.unravel_index(np.argmax(np.abs(a)), a.shape)
            coef = c[ij] / a[ij]
            if max_abs(c - coef * a) <= 1e-9 * max(1.0, abs(coef)):
                rates[mode] = abs(coef) ** 2
                break
        else:
            raise ValueError("collapse operator is not a single-mode annihilator; "
                             "cannot reduce this model")
    return rates


def adiabatic_reduce(two_mode: LindbladModel, derived, storage: str = "s",
                     readout: str = "r", regime_ratio: float = 10.0,
                     storage_dim: int | None = None) -> LindbladModel:
    """Eliminate the fast readout: single-mode model with two-photon loss.

    Returns the storage-only model with
        H = eps2* a^2 + eps2 a^dag^2 - (chi_ss/2) a^dag^2 a^2,
        collapse ops sqrt(kappa_2) a^2 and sqrt(kappa_s) a,
    where kappa_2 = 4|g2|^2/kappa_r and eps2 = -2i g2 eps_d / kappa_r come
    from `derived`. Validity needs kappa_r >> |g2|, |eps_d|, chi_rs; a
    failed check attaches a warning instead of silently proceeding.
    """
    space = two_mode.space
    rates = _identify_single_mode_ops(two_mode, readout, storage)
    kappa_r = rates.get(readout, 0.0)
    kappa_s = rates.get(storage, 0.0)
    if kappa_r <= 0:
        raise ValueError("two-mode model has no readout decay; nothing to eliminate")

    # probe chi_ss from <0_r 2_s| H |0_r 2_s> = Delta_s*2 - chi_ss (Delta_s from n=1)
    H = two_mode.hamiltonian.dense()
    i_s1 = _basis_index(space, {storage: 1})
    i_s2 = _basis_index(space, {storage: 2})
    i_r1 = _basis_index(space, {readout: 1})
    i_rs = _basis_index(space, {readout: 1, storage: 1})
    delta_s = H[i_s1, i_s1].real
    chi_ss = 2 * delta_s - H[i_s2, i_s2].real
    chi_rs = H[i_r1, i_r1].real + delta_s - H[i_rs, i_rs].real

    checks = {
        "|g2|/kappa_r": abs(derived.g2) / kappa_r,
        "|eps_d|/kappa_r": abs(derived.eps_d) / kappa_r,
        "chi_rs/kappa_r": abs(chi_rs) / kappa_r,
    }
    bad = {k: v for k, v in checks.items() if v > 1.0 / regime_ratio}
    if bad:
        warnings.warn(
            "adiabatic regime violated: " +
            ", ".join(f"{k} = {v:.3g} > {1/regime_ratio:.3g}" for k, v in bad.items()),
            stacklevel=2)

    n_s = storage_dim or space.mode_dim(storage)
    red_space = single_mode(n_s, storage)
    a = annihilation(red_space, storage)
    a2 = a @ a
    ad2 = a2.dag()
    eps2 = derived.eps2
    H_red = (np.conj(eps2) * a2 + eps2 * ad2
             - (chi_ss / 2) * (ad2 @ a2))
    if abs(delta_s) > 0:
        H_red = H_red + delta_s * (a.dag() @ a)
    c_ops = []
    if derived.kappa_2 > 0:
        c_ops.append(np.sqrt(derived.kappa_2) * a2)
    if kappa_s > 0:
        c_ops.append(np.sqrt(kappa_s) * a)
    return LindbladModel(H_red.as_hermitian(), c_ops)


def _basis_index(space: FockSpace, occupations: dict) -> int:
    idx = 0
    for lbl, n in space.modes:
        idx = idx * n + occupations.get(lbl, 0)
    return idx


def trace_distance(a: QuantumState, b: QuantumState) -> float:
    """T(a, b) = ||a - b||_1 / 2."""
    delta = a.rho() - b.rho()
    evs = np.linalg.eigvalsh(0.5 * (delta + delta.conj().T))
    return float(0.5 * np.sum(np.abs(evs)))
