import numpy as np
import pytest
from scipy.linalg import expm

from catpump.fock import (
    FockSpace, Operator, QuantumState, SpaceMismatchError, TruncationError,
    annihilation, cat_state, coherent_state, creation, displaced_matrix_elements,
    displacement, expect, fidelity, fock_state, identity_op, number_op,
    parity_op, ptrace, single_mode, tensor, thermal_state,
)


def test_space_validation():
    with pytest.raises(ValueError):
        FockSpace([("a", 3), ("a", 4)])
    with pytest.raises(ValueError):
        FockSpace([("a", 0)])
    sp = FockSpace([("r", 2), ("s", 3)])
    assert sp.dim == 6
    assert sp.mode_dim("s") == 3
    with pytest.raises(KeyError):
        sp.mode_index("q")


def test_ladder_action():
    sp = single_mode(3)
    a = annihilation(sp, "s").dense()
    v2 = np.zeros(3); v2[2] = 1
    out = a @ v2
    assert np.allclose(out, np.sqrt(2) * np.eye(3)[1])
    v0 = np.zeros(3); v0[0] = 1
    assert np.allclose(a @ v0, 0)


def test_two_mode_annihilation_matches_kron_oracle():
    sp = FockSpace([("r", 2), ("s", 3)])
    a_small = np.diag(np.sqrt([1, 2]), 1)
    oracle = np.kron(np.eye(2), a_small)
    assert np.array_equal(annihilation(sp, "s").dense(), oracle)
    oracle_r = np.kron(np.diag([1.0], 1), np.eye(3))
    assert np.array_equal(annihilation(sp, "r").dense(), oracle_r)


def test_commutator_invariant():
    for n in (5, 17, 40):
        sp = single_mode(n)
        a = annihilation(sp, "s").dense()
        comm = a @ a.conj().T - a.conj().T @ a
        dev = np.abs(comm - np.eye(n))[: n - 1, : n - 1].max()
        assert dev < 1e-12


def test_parity_properties():
    sp = single_mode(12)
    P = parity_op(sp, "s").dense()
    assert np.array_equal(P @ P, np.eye(12))
    a = annihilation(sp, "s").dense()
    assert np.abs(P @ a @ P + a).max() < 1e-12


def test_parity_anchors():
    sp = single_mode(40)
    P = parity_op(sp, "s")
    coh = coherent_state(sp, "s", np.sqrt(2.4))
    assert abs(expect(coh, P).real - np.exp(-2 * 2.4)) < 1e-10
    th = thermal_state(sp, "s", 2.4)
    assert abs(expect(th, P).real - 1.0 / (2 * 2.4 + 1)) < 1e-5
    assert abs(expect(fock_state(sp, "s", 0), P).real - 1.0) < 1e-14


def test_displacement_identity_and_expm_agreement():
    sp = single_mode(30)
    assert np.allclose(displacement(sp, "s", 0.0).dense(), np.eye(30))
    alpha = 0.8 - 0.4j
    a = annihilation(sp, "s").dense()
    D_exp = expm(alpha * a.conj().T - np.conj(alpha) * a)
    D_an = displacement(sp, "s", alpha).dense()
    assert np.abs(D_an - D_exp)[:12, :12].max() < 1e-12


def test_displacement_round_trip_on_safe_subspace():
    # D(a) D(-a) = I away from the truncation edge; the top levels are
    # inherently truncated and excluded from the check
    sp = single_mode(30)
    prod = (displacement(sp, "s", 1.0) @ displacement(sp, "s", -1.0)).dense()
    err = np.abs(prod - np.eye(30))
    assert err[:12, :12].max() < 1e-8
    for n in range(8):       # these columns round-trip as full state vectors
        assert np.linalg.norm(err[:, n]) < 1e-8


def test_displaced_vacuum_poisson():
    sp = single_mode(60)
    st = coherent_state(sp, "s", 2.6)
    p = np.abs(st.vector()) ** 2
    mean = float(np.sum(np.arange(60) * p))
    assert abs(mean - 6.76) < 1e-9
    from scipy.stats import poisson
    assert np.abs(p - poisson.pmf(np.arange(60), 6.76)).max() < 1e-10


def test_displacement_guard():
    sp = single_mode(10)
    with pytest.raises(TruncationError):
        displacement(sp, "s", 2.0)        # |a|^2 = 4 > 10/4
    with pytest.raises(TruncationError):
        coherent_state(sp, "s", 2.0)


def test_displaced_matrix_elements_rectangular():
    B = displaced_matrix_elements(0.7 + 0.2j, 25, 10)
    sp = single_mode(25)
    full = displacement(sp, "s", 0.7 + 0.2j).dense()
    assert np.abs(B - full[:, :10]).max() < 1e-13


def test_cat_states():
    sp = single_mode(40)
    even = cat_state(sp, "s", 2.0, +1)
    v = even.vector()
    assert np.abs(v[1::2]).max() < 1e-14
    odd = cat_state(sp, "s", 2.0, -1)
    assert np.abs(odd.vector()[0::2]).max() < 1e-14
    # norm constant: overlap with |alpha> must be N (1 + e^{-2|a|^2})
    coh = coherent_state(sp, "s", 2.0)
    n_const = 1.0 / np.sqrt(2 * (1 + np.exp(-8.0)))
    assert abs(np.vdot(coh.vector(), v) - n_const * (1 + np.exp(-8.0))) < 1e-12
    small = cat_state(sp, "s", 1e-4, +1)
    assert fidelity(small, fock_state(sp, "s", 0)) > 1 - 1e-7


def test_thermal_state_geometric_oracle():
    sp = single_mode(40)
    th = thermal_state(sp, "s", 2.4)
    p = np.real(np.diag(th.rho()))
    nbar = 2.4
    oracle = nbar ** np.arange(40) / (1 + nbar) ** (np.arange(40) + 1.0)
    assert np.abs(p - oracle).max() < 2e-6
    assert abs(p.sum() - 1.0) < 1e-12
    assert abs(expect(th, number_op(sp, "s")).real - nbar) < 1e-4


def test_expect_and_tensor():
    sp = single_mode(6)
    one = fock_state(sp, "s", 1)
    n = number_op(sp, "s")
    assert abs(expect(one, n) - 1.0) < 1e-14
    A = annihilation(sp, "s")
    B = number_op(sp, "s")
    left = tensor(A, identity_op(single_mode(4, "r")))
    right = tensor(identity_op(sp), number_op(single_mode(4, "r"), "r"))
    both = tensor(A, number_op(single_mode(4, "r"), "r"))
    assert np.abs((left @ right).dense() - both.dense()).max() < 1e-12


def test_ptrace_product_state():
    sp = FockSpace([("r", 3), ("s", 8)])
    rho_s = thermal_state(single_mode(8), "s", 1.0).rho()
    vac_r = np.zeros((3, 3), dtype=complex)
    vac_r[0, 0] = 1
    full = QuantumState.from_density_matrix(sp, np.kron(vac_r, rho_s))
    red = ptrace(full, ["s"])
    assert np.abs(red.rho() - rho_s).max() < 1e-12
    red_r = ptrace(full, ["r"])
    assert np.abs(red_r.rho() - vac_r).max() < 1e-12


def test_ptrace_bell_state():
    sp = FockSpace([("r", 2), ("s", 2)])
    v = np.zeros(4, dtype=complex)
    v[0] = v[3] = 1 / np.sqrt(2)       # (|00> + |11>)/sqrt(2)
    bell = QuantumState.from_vector(sp, v)
    red = ptrace(bell, ["s"])
    evs = np.linalg.eigvalsh(red.rho())
    assert np.allclose(evs, [0.5, 0.5], atol=1e-12)


def test_state_invariants_enforced():
    sp = single_mode(4)
    with pytest.raises(ValueError):
        QuantumState.from_vector(sp, [1.0, 1.0, 0, 0])
    bad = np.diag([0.7, 0.4, -0.1, 0.0]).astype(complex)
    with pytest.raises(ValueError):
        QuantumState.from_density_matrix(sp, bad)
    nonherm = np.diag([0.5, 0.5, 0, 0]).astype(complex)
    nonherm[0, 1] = 0.2
    with pytest.raises(ValueError):
        QuantumState.from_density_matrix(sp, nonherm)


def test_operator_hints_and_mismatch():
    sp = single_mode(5)
    a = annihilation(sp, "s")
    with pytest.raises(ValueError):
        Operator(sp, a.dense(), hermitian_hint=True)
    other = annihilation(single_mode(6), "s")
    with pytest.raises(SpaceMismatchError):
        a + other
    n = number_op(sp, "s")
    assert n.hermitian_hint
    assert (creation(sp, "s") @ a).dense()[1, 1] == pytest.approx(1.0)


def test_storage_policy():
    from scipy import sparse
    small = annihilation(single_mode(10), "s")
    assert isinstance(small.matrix, np.ndarray)
    big = annihilation(single_mode(80), "s")
    assert sparse.issparse(big.matrix)
