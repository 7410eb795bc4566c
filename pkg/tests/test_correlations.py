import numpy as np
import pytest

from lechain import correlations as co
from lechain import hilbert as hb
from lechain import measures as ms
from lechain import mps as mp
from lechain.errors import DimMismatch, OutOfRange

from conftest import random_pure, random_unitary


def embed_pair_state(pair_amps, n, i, j):
    """Two-qubit amplitudes on sites (i, j) of an n-qubit chain, |0> elsewhere."""
    dims = hb.SiteDims.qubits(n)
    amps = np.zeros(dims.dim, dtype=complex)
    for a in range(2):
        for b in range(2):
            assign = [0] * n
            assign[i], assign[j] = a, b
            amps[dims.index_of(assign)] = pair_amps[2 * a + b]
    return hb.PureState(amps, dims)


def test_direction_observable_validation():
    with pytest.raises(OutOfRange):
        co.direction_observable([1, 1, 0])
    assert np.allclose(co.direction_observable([0, 0, 1]), hb.SZ)


def test_ghz_zz_connected_correlation():
    ghz = hb.build_named_state("ghz", 3)
    assert co.connected_correlation(ghz, 0, 1, hb.SZ, hb.SZ) == pytest.approx(1.0, abs=1e-12)


def test_product_state_all_observables_vanish(rng):
    state = hb.build_named_state("productallzero", 4)
    for _ in range(20):
        a = rng.normal(size=3)
        b = rng.normal(size=3)
        sa = co.direction_observable(a / np.linalg.norm(a))
        sb = co.direction_observable(b / np.linalg.norm(b))
        assert abs(co.connected_correlation(state, 1, 3, sa, sb)) < 1e-12


def test_cluster_distant_pairs_uncorrelated():
    cluster = hb.build_named_state("cluster", 5)
    for i in range(5):
        for j in range(i + 2, 5):
            assert np.max(np.abs(co.q_matrix(cluster, i, j))) < 1e-12
    # sanity: the state is not trivial - the boundary stabilizer sx sz shows up
    assert co.connected_correlation(cluster, 0, 1, hb.SX, hb.SZ) == pytest.approx(1.0, abs=1e-12)


def test_q_matrix_embedded_bell_against_brute_force(rng):
    pair = np.array([0, 1, 1, 0], dtype=complex) / np.sqrt(2)
    state = embed_pair_state(pair, 4, 1, 3)
    q = co.q_matrix(state, 1, 3)
    # brute-force oracle: dense kron expectation values on the full register
    oracle = np.empty((3, 3))
    paulis = (hb.SX, hb.SY, hb.SZ)
    dense = state.amps
    for a in range(3):
        for b in range(3):
            op_ab = hb.op_at(state.dims, {1: paulis[a], 3: paulis[b]}).toarray()
            op_a = hb.op_at(state.dims, {1: paulis[a]}).toarray()
            op_b = hb.op_at(state.dims, {3: paulis[b]}).toarray()
            oracle[a, b] = (np.vdot(dense, op_ab @ dense)
                            - np.vdot(dense, op_a @ dense) * np.vdot(dense, op_b @ dense)).real
    assert np.allclose(q, oracle, atol=1e-12)
    assert np.allclose(np.diag(q), [1, 1, -1], atol=1e-12)


def test_q_matrix_site_exchange_symmetry():
    h = hb.build_hamiltonian(hb.ModelSpec.ising(1.0, 12))
    state = hb.ground_state(h).states[0]
    q01 = co.q_matrix(state, 0, 1)
    q10 = co.q_matrix(state, 1, 0)
    assert np.allclose(q01, q10.T, atol=1e-12)
    assert np.allclose(q01, q01.T, atol=1e-10)


def test_max_correlation_equals_concurrence_for_pure_pairs(rng):
    for _ in range(200):
        pair = random_pure(rng, 4)
        state = embed_pair_state(pair, 3, 0, 2)
        value, a, b = co.max_correlation_qubits(state, 0, 2)
        assert value == pytest.approx(ms.concurrence_pure(pair), abs=1e-8)
        # the returned directions attain the value
        sa = co.direction_observable(a)
        sb = co.direction_observable(b)
        assert co.connected_correlation(state, 0, 2, sa, sb) == pytest.approx(value, abs=1e-9)


def test_max_correlation_ghz_and_mixed_lower_bound(rng):
    ghz = hb.build_named_state("ghz", 3)
    value, a, b = co.max_correlation_qubits(ghz, 0, 2)
    assert value == pytest.approx(1.0, abs=1e-10)
    assert abs(a[2]) == pytest.approx(1.0, abs=1e-8)  # attained by zz
    for _ in range(50):
        rho = hb.DensityOperator(
            np.kron(np.eye(1), _random_two_qubit_density(rng)), hb.SiteDims((2, 2)))
        val, _, _ = co.max_correlation_qubits(rho, 0, 1)
        q = co.q_matrix(rho, 0, 1)
        assert val >= abs(q[2, 2]) - 1e-12


def _random_two_qubit_density(rng):
    from conftest import random_density

    return random_density(rng, 4)


def test_q_matrix_singular_values_invariant_under_local_unitaries(rng):
    dims = hb.SiteDims((2, 2))
    for _ in range(100):
        psi = hb.PureState(random_pure(rng, 4), dims)
        s0 = np.linalg.svd(co.q_matrix(psi, 0, 1), compute_uv=False)
        rotated = psi.apply_site_unitary(0, random_unitary(rng, 2))
        rotated = rotated.apply_site_unitary(1, random_unitary(rng, 2))
        s1 = np.linalg.svd(co.q_matrix(rotated, 0, 1), compute_uv=False)
        assert np.allclose(s0, s1, atol=1e-10)


# ---------------------------------------------------------------------------
# two-qutrit bound
# ---------------------------------------------------------------------------


def qutrit_state_from_schmidt(lams):
    psi = np.zeros(9, dtype=complex)
    psi[[0, 4, 8]] = lams
    return psi / np.linalg.norm(psi)


def test_qutrit_bell_limit():
    # coefficients (0, 1/sqrt2, 1/sqrt2): the symmetric closed form degenerates
    # to the qubit value 1 and the bound is saturated
    psi = qutrit_state_from_schmidt([0.0, 1 / np.sqrt(2), 1 / np.sqrt(2)])
    q_max, e_lower = co.qutrit_correlation_bound(psi)
    assert q_max == pytest.approx(1.0, abs=1e-9)
    assert e_lower == pytest.approx(1.0, abs=1e-9)


def test_qutrit_symmetric_form_consistent_with_angle_family():
    lams = np.sort(np.array([0.2, 0.5, np.sqrt(1 - 0.04 - 0.25)]))
    forms = co.qutrit_closed_forms(lams)
    assert forms["sym"] is not None
    l1, l2, l3 = lams
    den = (l2 - l3) ** 2 - (l2 ** 2 - l3 ** 2) ** 2
    cos_opt = l1 ** 2 * (l2 ** 2 - l3 ** 2) / den
    theta = np.arccos(np.clip(cos_opt, -1, 1))
    val = co.qutrit_angle_correlation(lams, theta, theta)
    assert forms["sym"] == pytest.approx(val, abs=1e-12)


def test_qutrit_flat_spectrum_diagonal_form():
    lams = np.array([1, 1, 1]) / np.sqrt(3)
    forms = co.qutrit_closed_forms(lams)
    assert forms["diag"] == pytest.approx(8 / 9, abs=1e-12)
    psi = qutrit_state_from_schmidt(lams)
    q_max, _ = co.qutrit_correlation_bound(psi)
    # oracle: dense grid over both angles and the azimuth
    grid = np.linspace(0, np.pi, 60)
    phis = np.linspace(0, 2 * np.pi, 60, endpoint=False)
    vals = co.qutrit_angle_correlation(
        lams, grid[:, None, None], grid[None, :, None], phis[None, None, :])
    assert q_max == pytest.approx(max(vals.max(), forms["diag"]), abs=2e-3)
    assert q_max == pytest.approx(8 / 9, abs=1e-9)


def test_qutrit_upper_bound_holds(rng):
    for _ in range(300):
        psi = random_pure(rng, 9)
        lams = np.sort(ms.schmidt(psi, 3, 3).coeffs)
        q_max, e_lower = co.qutrit_correlation_bound(psi)
        assert q_max <= co.qutrit_upper_bound(lams) + 1e-9
        assert e_lower <= ms.entropy_of_entanglement(psi, 3, 3) + 1e-9


# ---------------------------------------------------------------------------
# parity bounds
# ---------------------------------------------------------------------------


def test_parity_bounds_ghz_and_product():
    ghz = hb.build_named_state("ghz", 3)
    lower, upper = co.le_bounds_parity(ghz, 0, 2)
    assert lower == pytest.approx(1.0, abs=1e-10)
    assert upper == pytest.approx(1.0, abs=1e-10)
    prod = hb.build_named_state("productallzero", 3)
    lower, upper = co.le_bounds_parity(prod, 0, 2)
    assert lower == pytest.approx(0.0, abs=1e-12)
    assert upper >= -1e-12


def test_parity_bounds_sandwich_on_ground_states():
    for spec in (hb.ModelSpec.ising(0.8, 10), hb.ModelSpec.xxz(0.5, 1.0, 10)):
        state = hb.ground_state(hb.build_hamiltonian(spec)).states[0]
        for j in (1, 3, 5):
            lower, upper = co.le_bounds_parity(state, 0, j)
            assert lower <= upper + 1e-9


# ---------------------------------------------------------------------------
# string order
# ---------------------------------------------------------------------------


def test_string_order_adjacent_reduces_to_zz(rng):
    dims = hb.SiteDims((3, 3, 3))
    psi = hb.PureState(random_pure(rng, dims.dim), dims)
    sz = hb.spin_matrices(3)[2]
    direct = psi.expectation({0: sz, 1: sz}).real
    assert co.string_order(psi, 0, 1) == pytest.approx(direct, abs=1e-12)


def test_string_order_product_state_is_disconnected():
    dims = hb.SiteDims((3, 3, 3, 3))
    amps = np.zeros(dims.dim, dtype=complex)
    amps[0] = 1.0  # all sites in m = +1
    psi = hb.PureState(amps, dims)
    val = co.string_order(psi, 0, 3)
    sz = hb.spin_matrices(3)[2]
    r = hb.string_rotation(3)
    parts = psi.expectation({0: sz}).real * psi.expectation({3: sz}).real
    for k in (1, 2):
        parts *= psi.expectation({k: r}).real
    assert val == pytest.approx(parts, abs=1e-12)
    assert val - parts == pytest.approx(0.0, abs=1e-12)  # connected part vanishes


def test_string_order_aklt_matches_transfer_route():
    # densified chain (8 body sites) against the closed transfer formula
    chain = mp.mps_named("aklt")
    state = mp.densify(chain, 8)
    value = co.string_order(state, 0, 9)
    analytic = mp.string_order_analytic(chain, hb.string_rotation(3), lengths=(8,))
    assert value == pytest.approx(analytic.finite[8], abs=1e-6)
    assert analytic.xi == pytest.approx(1.0, abs=1e-12)


def test_string_order_hamiltonian_ground_state_matches_chain():
    # the capped Hamiltonian ground state is the valence-bond chain
    h = hb.build_hamiltonian(hb.ModelSpec.aklt(4))
    ground = hb.ground_state(h).states[0]
    dense = mp.densify(mp.aklt_standard_basis(), 4)
    overlap = abs(np.vdot(ground.amps, dense.amps))
    assert overlap == pytest.approx(1.0, abs=1e-8)
    assert co.string_order(ground, 0, 5) == pytest.approx(
        co.string_order(dense, 0, 5), abs=1e-8)


# ---------------------------------------------------------------------------
# connected-string-order necessary condition
# ---------------------------------------------------------------------------


def test_cso_condition_aklt_holds():
    res = co.cso_necessary_condition_mps(mp.mps_named("aklt"), search_budget=4000)
    assert res.holds
    assert res.best_ratio == pytest.approx(1.0, abs=1e-6)
    # the string rotation is not identity-like
    assert abs(np.trace(res.best_unitary)) <= 2 + 1e-6


def test_cso_condition_counterexample_fails():
    res = co.cso_necessary_condition_mps(mp.mps_named("counterexample"), search_budget=6000)
    assert not res.holds
    assert res.best_ratio < 1 - 1e-3


def test_cso_identity_excluded_by_construction():
    # identity would trivially attain ratio 1; the accepted optimum must stay
    # away from phase multiples of the identity
    res = co.cso_necessary_condition_mps(mp.mps_named("aklt"), search_budget=3000)
    d = 3
    assert abs(np.trace(res.best_unitary)) <= (d - 1) + 1e-6
