"""
Wigner tomography: displaced-parity evaluation, the two-angle parity
measurement model and constrained least-squares density-matrix
reconstruction.

W(alpha) = (2/pi) Tr[D(-alpha) rho D(alpha) P]. Using P D(-alpha) =
D(alpha) P this equals (2/pi) Tr[rho D(2 alpha) P], so each grid point
needs only the exact Laguerre matrix elements of one displacement over
the state's support; no truncation enters the evaluation itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .fock import QuantumState, displaced_matrix_elements, single_mode

WIGNER_BOUND = 2.0 / math.pi


@dataclass(frozen=True)
class MeasurementModel:
    """Two-angle parity measurement imperfections.

    n_max: highest photon number the qubit pulses still address (None for
    fully selective pulses); confusion entries p(measured|true) for the
    thresholded readout; shots: repetitions per grid point (None for the
    noiseless expectation).
    """

    n_max: int | None = None
    p_gg: float = 1.0
    p_ee: float = 1.0
    shots: int | None = None

    def __post_init__(self):
        if self.n_max is not None and self.n_max < 0:
            raise ValueError("n_max must be >= 0")
        for name in ("p_gg", "p_ee"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} = {v} outside [0, 1]")
        if self.shots is not None and self.shots <= 0:
            raise ValueError("shots must be positive")

    @property
    def p_eg(self) -> float:
        return 1.0 - self.p_gg

    @property
    def p_ge(self) -> float:
        return 1.0 - self.p_ee

    @property
    def contrast(self) -> float:
        """C = (p(g|g) + p(e|e) - p(e|g) - p(g|e)) / 2."""
        return 0.5 * (self.p_gg + self.p_ee - self.p_eg - self.p_ge)


@dataclass(frozen=True)
class TomographyGrid:
    """Sampled Wigner or parity values over complex-plane points."""

    alphas: np.ndarray                 # complex grid points (flat)
    values: np.ndarray                 # real W or P per point
    kind: str                          # "wigner" | "parity"
    model: MeasurementModel = field(default_factory=MeasurementModel)

    def __post_init__(self):
        if self.kind not in ("wigner", "parity"):
            raise ValueError(f"kind must be wigner or parity, got {self.kind!r}")
        if self.alphas.shape != self.values.shape:
            raise ValueError("alphas and values must have matching shapes")
        bound = WIGNER_BOUND if self.kind == "wigner" else 1.0
        allowance = _noise_allowance(self.model, self.kind)
        worst = float(np.max(np.abs(self.values))) if self.values.size else 0.0
        if worst > bound + allowance:
            raise ValueError(
                f"{self.kind} value {worst:.4f} exceeds bound {bound:.4f} "
                f"+ noise allowance {allowance:.4f}")


def _noise_allowance(model: MeasurementModel, kind: str) -> float:
    if model.shots is None:
        return 1e-9
    scale = WIGNER_BOUND if kind == "wigner" else 1.0
    return scale * 8.0 / math.sqrt(model.shots)


def square_grid(extent: float = 3.5, n: int = 41) -> np.ndarray:
    """Default alpha grid: n x n points over [-extent, extent]^2, flattened."""
    xs = np.linspace(-extent, extent, n)
    X, Y = np.meshgrid(xs, xs)
    return (X + 1j * Y).ravel()


def _state_rho_weighted(state: QuantumState):
    """rho with the parity signs folded in: returns rho and (-1)^m row signs."""
    rho = state.rho()
    signs = (-1.0) ** np.arange(rho.shape[0])
    return rho, signs


def parity_values(state: QuantumState, alphas) -> np.ndarray:
    """P(alpha) = Tr[D(-alpha) rho D(alpha) P], exact per point."""
    alphas = np.atleast_1d(np.asarray(alphas, dtype=complex))
    rho, signs = _state_rho_weighted(state)
    d = rho.shape[0]
    out = np.empty(alphas.shape, dtype=float)
    weighted = rho * signs[:, None]        # rho[m, n] (-1)^m
    for i, al in enumerate(alphas.ravel()):
        D2 = displaced_matrix_elements(2.0 * al, d, d)
        out.ravel()[i] = float(np.einsum("mn,nm->", weighted, D2).real)
    return out


def wigner(state: QuantumState, alphas,
           model: MeasurementModel | None = None) -> TomographyGrid:
    """Wigner function on the given grid points."""
    vals = (2.0 / math.pi) * parity_values(state, alphas)
    return TomographyGrid(alphas=np.atleast_1d(np.asarray(alphas, dtype=complex)),
                          values=vals, kind="wigner",
                          model=model or MeasurementModel())


def photon_distribution(state: QuantumState) -> np.ndarray:
    """p_n = <n|rho|n>."""
    p = np.real(np.diag(state.rho())).copy()
    p[np.abs(p) < 1e-30] = 0.0
    s = p.sum()
    if abs(s - 1.0) > 1e-9:
        raise ValueError(f"photon distribution sums to {s}, not 1")
    return p


def displaced_photon_distribution(state: QuantumState, alpha: complex,
                                  n_levels: int) -> np.ndarray:
    """q_k = <k| D(-alpha) rho D(alpha) |k> for k < n_levels, exact."""
    rho = state.rho()
    d = rho.shape[0]
    B = displaced_matrix_elements(-complex(alpha), n_levels, d)
    return np.real(np.einsum("km,mn,kn->k", B, rho, B.conj()))


def simulate_parity_measurement(state: QuantumState, alpha: complex,
                                model: MeasurementModel,
                                rng: np.random.Generator | None = None):
    """Two-angle parity measurement: returns (<sz>+, <sz>-, delta).

    The displaced state splits into even / odd / beyond-n_max photon
    sectors; the qubit ends in e for the even sector under the +pi/2 pair
    and in g under the -pi/2 pair, while the unaddressed sector always
    reports g. The two expectation values (in the +-1 convention) share
    that third term, and their half-difference
        delta = C_alpha (||P_even psi||^2 - ||P_odd psi||^2) = C_alpha P(alpha)
    cancels it exactly. With finite shots, both branches are sampled
    binomially.
    """
    if model.n_max is None:
        p_par = float(parity_values(state, alpha)[0])
        s_even = 0.5 * (1.0 + p_par)
        s_odd = 0.5 * (1.0 - p_par)
        s_over = 0.0
    else:
        n_eval = model.n_max + 1
        q = displaced_photon_distribution(state, alpha, n_eval)
        ks = np.arange(n_eval)
        s_even = float(q[ks % 2 == 0].sum())
        s_odd = float(q[ks % 2 == 1].sum())
        s_over = max(0.0, 1.0 - s_even - s_odd)

    # probability of reporting e under each pulse-phase branch
    pe_plus = s_even * model.p_ee + (s_odd + s_over) * model.p_eg
    pe_minus = s_odd * model.p_ee + (s_even + s_over) * model.p_eg

    if model.shots is not None:
        rng = rng or np.random.default_rng()
        pe_plus = rng.binomial(model.shots, min(max(pe_plus, 0.0), 1.0)) / model.shots
        pe_minus = rng.binomial(model.shots, min(max(pe_minus, 0.0), 1.0)) / model.shots

    sz_plus = 2.0 * pe_plus - 1.0
    sz_minus = 2.0 * pe_minus - 1.0
    delta = 0.5 * (sz_plus - sz_minus)
    return sz_plus, sz_minus, delta


def simulate_wigner_grid(state: QuantumState, alphas, model: MeasurementModel,
                         rng: np.random.Generator | None = None) -> TomographyGrid:
    """Measured Wigner map: (2/pi) * delta<sigma_z> / C_alpha per point."""
    alphas = np.atleast_1d(np.asarray(alphas, dtype=complex))
    contrast = model.contrast
    if contrast == 0:
        raise ValueError("uninformative readout: contrast is zero")
    vals = np.empty(alphas.shape, dtype=float)
    for i, al in enumerate(alphas.ravel()):
        _, _, delta = simulate_parity_measurement(state, al, model, rng)
        vals.ravel()[i] = (2.0 / math.pi) * delta / contrast
    return TomographyGrid(alphas=alphas, values=vals, kind="wigner", model=model)


# ---------------------------------------------------------------------------
# reconstruction
# ---------------------------------------------------------------------------

class ReconstructionError(RuntimeError):
    pass


@dataclass(frozen=True)
class ReconstructionReport:
    residual: float
    iterations: int
    converged: bool
    fidelity: float | None
    underdetermined: bool


def _project_simplex(ev: np.ndarray) -> np.ndarray:
    """Euclidean projection of eigenvalues onto {x >= 0, sum x = 1}."""
    mu = np.sort(ev)[::-1]
    cs = np.cumsum(mu) - 1.0
    idx = np.arange(1, len(mu) + 1)
    rho_idx = idx[mu - cs / idx > 0][-1]
    tau = cs[rho_idx - 1] / rho_idx
    return np.maximum(ev - tau, 0.0)


def _project_density(rho: np.ndarray) -> np.ndarray:
    rho = 0.5 * (rho + rho.conj().T)
    ev, U = np.linalg.eigh(rho)
    lam = _project_simplex(ev)
    return (U * lam) @ U.conj().T


def measurement_operators(alphas, dim: int, kind: str = "wigner") -> np.ndarray:
    """Hermitian M_k with Tr[M_k rho] = W(alpha_k) (or P for kind=parity)."""
    alphas = np.atleast_1d(np.asarray(alphas, dtype=complex))
    signs = (-1.0) ** np.arange(dim)
    pref = (2.0 / math.pi) if kind == "wigner" else 1.0
    Ms = np.empty((alphas.size, dim, dim), dtype=complex)
    for i, al in enumerate(alphas.ravel()):
        D2 = displaced_matrix_elements(2.0 * al, dim, dim)
        M = pref * (D2 * signs[None, :])
        Ms[i] = 0.5 * (M + M.conj().T)
    return Ms


def reconstruct_density_matrix(grid: TomographyGrid, dim: int,
                               reference: QuantumState | None = None,
                               max_iter: int = 2000, tol: float = 1e-10):
    """Accelerated projected-gradient solve of
        min_rho sum_k (Tr[M_k rho] - w_k)^2,  rho >= 0, Tr rho = 1.

    Projection onto the feasible set goes through the eigendecomposition
    with a simplex projection of the spectrum, so every iterate is a valid
    density matrix. Returns (QuantumState, ReconstructionReport).
    """
    n_pts = grid.alphas.size
    underdetermined = n_pts < dim * dim
    Ms = measurement_operators(grid.alphas.ravel(), dim, grid.kind)
    w = grid.values.ravel().astype(float)

    A = Ms.reshape(n_pts, -1)
    smax = np.linalg.svd(A, compute_uv=False)[0]
    step = 1.0 / (2.0 * smax * smax)

    rho = np.eye(dim, dtype=complex) / dim
    z = rho.copy()
    t_k = 1.0
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        resid = np.einsum("kij,ji->k", Ms, z).real - w
        grad = 2.0 * np.einsum("k,kij->ij", resid, Ms)
        rho_new = _project_density(z - step * grad)
        t_new = 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * t_k * t_k))
        z = rho_new + ((t_k - 1.0) / t_new) * (rho_new - rho)
        delta = np.max(np.abs(rho_new - rho))
        rho, t_k = rho_new, t_new
        if delta < tol:
            converged = True
            break
    if not converged and max_iter > 0:
        final_res = np.linalg.norm(np.einsum("kij,ji->k", Ms, rho).real - w)
        noise_floor = _noise_allowance(grid.model, grid.kind) * math.sqrt(n_pts)
        if final_res > max(1e-6, 10.0 * noise_floor):
            raise ReconstructionError(
                f"projected gradient did not converge in {max_iter} iterations "
                f"(residual {final_res:.3e})")

    residual = float(np.linalg.norm(np.einsum("kij,ji->k", Ms, rho).real - w))
    space = single_mode(dim, "s")
    state = QuantumState.from_density_matrix(space, rho, atol=1e-8)
    fid = None
    if reference is not None:
        from .fock import fidelity as _fid
        fid = float(_fid(state, reference))
    report = ReconstructionReport(residual=residual, iterations=it,
                                  converged=converged, fidelity=fid,
                                  underdetermined=underdetermined)
    return state, report
