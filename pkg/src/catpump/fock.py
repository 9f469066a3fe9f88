"""
Truncated Fock-space representation: mode spaces, operators and states.

Conventions
-----------
- A space is an ordered list of modes; the full matrix of a single-mode
  operator is the Kronecker product taken in listed order (first mode
  varies slowest), so for modes (r, s) an operator on s is I ⊗ m.
- All operators are plain matrices on the truncated space. Storage is
  sparse CSR for total dimension >= DENSE_CUTOFF and dense below it;
  Liouvillians are sparse regardless (see dynamics).
- Displacement operators use the exact associated-Laguerre closed form
  for the matrix elements <k|D(beta)|n>, not a matrix exponential. Each
  element is exact; truncation only enters through products of matrices.
- Coherent-like constructions guard against silent truncation: they
  refuse |alpha|^2 > N/4 (TruncationError).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import sparse
from scipy.special import eval_genlaguerre, gammaln

DENSE_CUTOFF = 64          # below this total dimension, operators stay dense
NORM_ATOL = 1e-10          # state-vector norm / trace tolerance
HERM_ATOL = 1e-12          # hermiticity tolerance for hermitian_hint
PSD_ATOL = 1e-8            # allowed negative eigenvalue magnitude


class TruncationError(ValueError):
    """Operation would push significant amplitude past the truncation level."""


class SpaceMismatchError(ValueError):
    """Operands live on different Fock spaces."""


def _as_dense(m):
    return m.toarray() if sparse.issparse(m) else np.asarray(m)


def _store(m, dim: int):
    """Apply the storage policy: sparse at/above the cutoff, dense below."""
    if dim >= DENSE_CUTOFF:
        out = sparse.csr_matrix(m)
    else:
        out = np.asarray(_as_dense(m), dtype=complex)
        out.setflags(write=False)
    return out


def max_abs(m) -> float:
    if sparse.issparse(m):
        return 0.0 if m.nnz == 0 else float(np.max(np.abs(m.data)))
    return float(np.max(np.abs(m))) if np.asarray(m).size else 0.0


@dataclass(frozen=True)
class FockSpace:
    """Ordered collection of truncated bosonic modes."""

    modes: tuple[tuple[str, int], ...]

    def __init__(self, modes: Sequence[tuple[str, int]]):
        modes = tuple((str(lbl), int(n)) for lbl, n in modes)
        labels = [lbl for lbl, _ in modes]
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate mode labels in {labels}")
        for lbl, n in modes:
            if n < 1:
                raise ValueError(f"mode {lbl!r} has truncation {n} < 1")
        object.__setattr__(self, "modes", modes)

    @property
    def dim(self) -> int:
        d = 1
        for _, n in self.modes:
            d *= n
        return d

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(lbl for lbl, _ in self.modes)

    def mode_index(self, label: str) -> int:
        for i, (lbl, _) in enumerate(self.modes):
            if lbl == label:
                return i
        raise KeyError(f"unknown mode label {label!r}; have {self.labels}")

    def mode_dim(self, label: str) -> int:
        return self.modes[self.mode_index(label)][1]

    def __repr__(self):
        inner = ", ".join(f"{lbl}:{n}" for lbl, n in self.modes)
        return f"FockSpace({inner})"


def single_mode(n: int, label: str = "s") -> FockSpace:
    return FockSpace([(label, n)])


@dataclass(frozen=True, eq=False)
class Operator:
    """Matrix acting on a FockSpace, with an optional hermiticity promise."""

    space: FockSpace
    matrix: object
    hermitian_hint: bool = False

    def __post_init__(self):
        d = self.space.dim
        if self.matrix.shape != (d, d):
            raise ValueError(
                f"matrix shape {self.matrix.shape} does not match space dim {d}")
        if self.hermitian_hint:
            dev = max_abs(self.matrix - self.matrix.conj().T)
            if dev >= HERM_ATOL:
                raise ValueError(
                    f"hermitian_hint set but max |A - A^dag| = {dev:.2e}")

    def dense(self) -> np.ndarray:
        return _as_dense(self.matrix)

    def dag(self) -> "Operator":
        return Operator(self.space, _store(self.matrix.conj().T, self.space.dim),
                        hermitian_hint=self.hermitian_hint)

    def _check(self, other: "Operator"):
        if self.space != other.space:
            raise SpaceMismatchError(f"{self.space} vs {other.space}")

    def __add__(self, other: "Operator") -> "Operator":
        self._check(other)
        return Operator(self.space, _store(self.matrix + other.matrix, self.space.dim))

    def __sub__(self, other: "Operator") -> "Operator":
        self._check(other)
        return Operator(self.space, _store(self.matrix - other.matrix, self.space.dim))

    def __mul__(self, scalar) -> "Operator":
        return Operator(self.space, _store(self.matrix * scalar, self.space.dim))

    __rmul__ = __mul__

    def __matmul__(self, other: "Operator") -> "Operator":
        self._check(other)
        return Operator(self.space, _store(self.matrix @ other.matrix, self.space.dim))

    def as_hermitian(self) -> "Operator":
        """Re-tag with the hermiticity promise (validates it)."""
        return Operator(self.space, self.matrix, hermitian_hint=True)


@dataclass(frozen=True, eq=False)
class QuantumState:
    """Pure state vector or density matrix on a FockSpace."""

    space: FockSpace
    payload: np.ndarray
    is_pure: bool = field(default=True)

    @staticmethod
    def from_vector(space: FockSpace, vec, atol: float = NORM_ATOL) -> "QuantumState":
        vec = np.asarray(vec, dtype=complex).ravel()
        if vec.shape != (space.dim,):
            raise ValueError(f"vector length {vec.shape} != space dim {space.dim}")
        nrm = np.linalg.norm(vec)
        if abs(nrm - 1.0) > atol:
            raise ValueError(f"state vector norm {nrm} deviates from 1 by > {atol}")
        vec = vec.copy()
        vec.setflags(write=False)
        return QuantumState(space, vec, is_pure=True)

    @staticmethod
    def from_density_matrix(space: FockSpace, rho, atol: float = NORM_ATOL,
                            psd_atol: float = PSD_ATOL) -> "QuantumState":
        rho = _as_dense(rho).astype(complex)
        d = space.dim
        if rho.shape != (d, d):
            raise ValueError(f"density matrix shape {rho.shape} != ({d}, {d})")
        herm_dev = np.max(np.abs(rho - rho.conj().T))
        if herm_dev > atol:
            raise ValueError(f"density matrix not hermitian: max dev {herm_dev:.2e}")
        tr = np.trace(rho).real
        if abs(tr - 1.0) > atol:
            raise ValueError(f"density matrix trace {tr} deviates from 1 by > {atol}")
        min_eig = float(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min())
        if min_eig < -psd_atol:
            raise ValueError(f"density matrix min eigenvalue {min_eig:.2e} < -{psd_atol}")
        rho = rho.copy()
        rho.setflags(write=False)
        return QuantumState(space, rho, is_pure=False)

    def rho(self) -> np.ndarray:
        """Density matrix view (outer product for pure states)."""
        if self.is_pure:
            return np.outer(self.payload, self.payload.conj())
        return np.asarray(self.payload)

    def vector(self) -> np.ndarray:
        if not self.is_pure:
            raise ValueError("state is a density matrix, not a vector")
        return np.asarray(self.payload)

    @property
    def dim(self) -> int:
        return self.space.dim


# ---------------------------------------------------------------------------
# single-mode building blocks and their promotion to the full space
# ---------------------------------------------------------------------------

def _ladder(n: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, n, dtype=float)), 1).astype(complex)


def promote(space: FockSpace, mode: str, small: np.ndarray) -> np.ndarray:
    """Embed a single-mode matrix into the full space (identity elsewhere)."""
    idx = space.mode_index(mode)
    out = np.array([[1.0 + 0j]])
    for i, (_, n) in enumerate(space.modes):
        blk = small if i == idx else np.eye(n, dtype=complex)
        out = np.kron(out, blk)
    return out


def annihilation(space: FockSpace, mode: str) -> Operator:
    """Mode annihilation operator: <n-1|a|n> = sqrt(n) on the named mode."""
    n = space.mode_dim(mode)
    return Operator(space, _store(promote(space, mode, _ladder(n)), space.dim))


def creation(space: FockSpace, mode: str) -> Operator:
    n = space.mode_dim(mode)
    return Operator(space, _store(promote(space, mode, _ladder(n).conj().T), space.dim))


def number_op(space: FockSpace, mode: str) -> Operator:
    n = space.mode_dim(mode)
    mat = promote(space, mode, np.diag(np.arange(n, dtype=float)).astype(complex))
    return Operator(space, _store(mat, space.dim), hermitian_hint=True)


def identity_op(space: FockSpace) -> Operator:
    return Operator(space, _store(np.eye(space.dim, dtype=complex), space.dim),
                    hermitian_hint=True)


def parity_op(space: FockSpace, mode: str) -> Operator:
    """Photon-number parity exp(i pi a^dag a): +1 even, -1 odd."""
    n = space.mode_dim(mode)
    mat = promote(space, mode, np.diag((-1.0) ** np.arange(n)).astype(complex))
    return Operator(space, _store(mat, space.dim), hermitian_hint=True)


def _check_truncation(alpha: complex, n: int, what: str):
    if abs(alpha) ** 2 > n / 4:
        raise TruncationError(
            f"{what}: |alpha|^2 = {abs(alpha)**2:.3g} exceeds N/4 = {n/4:.3g}; "
            f"raise the truncation (need N >= 4|alpha|^2)")


def displaced_matrix_elements(beta: complex, rows: int, cols: int) -> np.ndarray:
    """Exact <k|D(beta)|n> block, k < rows, n < cols.

    Closed form (k >= n):
        <k|D|n> = sqrt(n!/k!) beta^(k-n) e^(-|b|^2/2) L_n^(k-n)(|b|^2)
    and <k|D|n> = <n|D(-beta)|k>^* for k < n. Every element is the exact
    infinite-dimensional value, so traces against states supported inside
    the block are exact.
    """
    if beta == 0:
        return np.eye(rows, cols, dtype=complex)
    x = abs(beta) ** 2
    k = np.arange(rows)[:, None]
    n = np.arange(cols)[None, :]
    lo = np.minimum(k, n)
    hi = np.maximum(k, n)
    d = hi - lo
    logmag = 0.5 * (gammaln(lo + 1) - gammaln(hi + 1)) - x / 2 + d * np.log(abs(beta))
    lag = eval_genlaguerre(lo, d, x)
    unit = beta / abs(beta)
    phase = np.where(k >= n, unit ** d.astype(complex),
                     (-np.conj(unit)) ** d.astype(complex))
    return np.exp(logmag) * lag * phase


def displacement(space: FockSpace, mode: str, alpha: complex) -> Operator:
    """Displacement D(alpha) from the analytic Laguerre elements."""
    n = space.mode_dim(mode)
    _check_truncation(alpha, n, "displacement")
    small = displaced_matrix_elements(complex(alpha), n, n)
    return Operator(space, _store(promote(space, mode, small), space.dim))


# ---------------------------------------------------------------------------
# states (vacuum on all unnamed modes)
# ---------------------------------------------------------------------------

def _lift_vector(space: FockSpace, mode: str, small_vec: np.ndarray) -> np.ndarray:
    idx = space.mode_index(mode)
    out = np.array([1.0 + 0j])
    for i, (_, n) in enumerate(space.modes):
        if i == idx:
            blk = small_vec
        else:
            blk = np.zeros(n, dtype=complex)
            blk[0] = 1.0
        out = np.kron(out, blk)
    return out


def fock_state(space: FockSpace, mode: str, n: int) -> QuantumState:
    nd = space.mode_dim(mode)
    if not 0 <= n < nd:
        raise ValueError(f"Fock level {n} outside truncation {nd}")
    v = np.zeros(nd, dtype=complex)
    v[n] = 1.0
    return QuantumState.from_vector(space, _lift_vector(space, mode, v))


def coherent_state(space: FockSpace, mode: str, alpha: complex) -> QuantumState:
    nd = space.mode_dim(mode)
    _check_truncation(alpha, nd, "coherent_state")
    v = displaced_matrix_elements(complex(alpha), nd, 1)[:, 0] if alpha else None
    if v is None:
        return fock_state(space, mode, 0)
    v = v / np.linalg.norm(v)  # renormalize the truncated tail (guard keeps it tiny)
    return QuantumState.from_vector(space, _lift_vector(space, mode, v))


def cat_state(space: FockSpace, mode: str, alpha: complex, sign: int = +1) -> QuantumState:
    """N(|alpha> + sign |-alpha>), N = 1/sqrt(2(1 + sign e^{-2|a|^2}))."""
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    nd = space.mode_dim(mode)
    _check_truncation(alpha, nd, "cat_state")
    if alpha == 0:
        if sign == -1:
            raise ValueError("odd cat is undefined at alpha = 0")
        return fock_state(space, mode, 0)
    vp = displaced_matrix_elements(complex(alpha), nd, 1)[:, 0]
    vm = displaced_matrix_elements(-complex(alpha), nd, 1)[:, 0]
    v = vp + sign * vm
    norm = np.sqrt(2.0 * (1.0 + sign * np.exp(-2.0 * abs(alpha) ** 2)))
    v = v / norm
    v = v / np.linalg.norm(v)
    return QuantumState.from_vector(space, _lift_vector(space, mode, v))


def thermal_state(space: FockSpace, mode: str, nbar: float) -> QuantumState:
    """Thermal mixture p_n = nbar^n / (1+nbar)^(n+1), renormalized in truncation."""
    if nbar < 0:
        raise ValueError("nbar must be >= 0")
    nd = space.mode_dim(mode)
    if nbar > nd / 4:
        raise TruncationError(f"thermal_state: nbar = {nbar} exceeds N/4 = {nd/4}")
    n = np.arange(nd)
    if nbar == 0:
        p = np.zeros(nd)
        p[0] = 1.0
    else:
        logp = n * np.log(nbar) - (n + 1) * np.log(1.0 + nbar)
        p = np.exp(logp)
        p = p / p.sum()
    small = np.diag(p).astype(complex)
    idx = space.mode_index(mode)
    rho = np.array([[1.0 + 0j]])
    for i, (_, m) in enumerate(space.modes):
        if i == idx:
            blk = small
        else:
            blk = np.zeros((m, m), dtype=complex)
            blk[0, 0] = 1.0
        rho = np.kron(rho, blk)
    return QuantumState.from_density_matrix(space, rho, atol=1e-9)


# ---------------------------------------------------------------------------
# composite operations
# ---------------------------------------------------------------------------

def expect(state: QuantumState, op: Operator) -> complex:
    """<A> = Tr[A rho] (or <psi|A|psi> for pure states)."""
    if state.space != op.space:
        raise SpaceMismatchError(f"{state.space} vs {op.space}")
    m = op.matrix
    if state.is_pure:
        v = state.vector()
        return complex(np.vdot(v, m @ v))
    rho = state.rho()
    if sparse.issparse(m):
        return complex((m @ rho).trace())
    return complex(np.trace(m @ rho))


def tensor(op_a: Operator, op_b: Operator) -> Operator:
    """Kronecker product; the result lives on the concatenated space."""
    joint = FockSpace(op_a.space.modes + op_b.space.modes)
    if sparse.issparse(op_a.matrix) or sparse.issparse(op_b.matrix):
        mat = sparse.kron(sparse.csr_matrix(op_a.matrix),
                          sparse.csr_matrix(op_b.matrix), format="csr")
    else:
        mat = np.kron(op_a.matrix, op_b.matrix)
    return Operator(joint, _store(mat, joint.dim))


def ptrace(state: QuantumState, keep_modes: Sequence[str]) -> QuantumState:
    """Partial trace down to the named modes (in their original order)."""
    keep_idx = sorted(state.space.mode_index(m) for m in keep_modes)
    if not keep_idx:
        raise ValueError("keep_modes must name at least one mode")
    dims = [n for _, n in state.space.modes]
    k = len(dims)
    rho = state.rho().reshape(dims + dims)
    traced = [i for i in range(k) if i not in keep_idx]
    for off, i in enumerate(traced):
        ax = i - off
        rho = np.trace(rho, axis1=ax, axis2=ax + (k - off))
        # note: after each trace both the bra and ket copies of axis i vanish
    new_modes = [state.space.modes[i] for i in keep_idx]
    new_space = FockSpace(new_modes)
    d = new_space.dim
    rho = rho.reshape(d, d)
    return QuantumState.from_density_matrix(new_space, rho, atol=1e-9)


def fidelity(a: QuantumState, b: QuantumState) -> float:
    """Uhlmann fidelity F = (Tr sqrt(sqrt(ra) rb sqrt(ra)))^2."""
    if a.space.dim != b.space.dim:
        raise SpaceMismatchError("states have different dimensions")
    if a.is_pure:
        return float(np.real(np.vdot(a.vector(), b.rho() @ a.vector())))
    if b.is_pure:
        return fidelity(b, a)
    ra = a.rho()
    ev, U = np.linalg.eigh(0.5 * (ra + ra.conj().T))
    ev = np.clip(ev, 0.0, None)
    sq = (U * np.sqrt(ev)) @ U.conj().T
    inner = sq @ b.rho() @ sq
    ev2 = np.linalg.eigvalsh(0.5 * (inner + inner.conj().T))
    return float(np.sum(np.sqrt(np.clip(ev2, 0.0, None))) ** 2)
