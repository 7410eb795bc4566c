import numpy as np
import pytest

from lechain import measures as ms
from lechain.errors import DimMismatch, NumericalFailure, OutOfRange

from conftest import random_density, random_pure, random_unitary

BELL = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
PSI_PLUS = np.array([0, 1, 1, 0], dtype=complex) / np.sqrt(2)
TILTED = np.array([np.sqrt(0.9), 0, 0, np.sqrt(0.1)], dtype=complex)

# direct Shannon-entropy evaluation of H(0.9)
H09 = -(0.9 * np.log2(0.9) + 0.1 * np.log2(0.1))


def test_concurrence_examples():
    assert ms.concurrence_pure(PSI_PLUS) == pytest.approx(1.0, abs=1e-12)
    assert ms.concurrence_pure(np.array([1, 0, 0, 0], dtype=complex)) == pytest.approx(0.0, abs=1e-12)
    # 2 l1 l2 = 2 sqrt(0.9) sqrt(0.1) = 0.6
    assert ms.concurrence_pure(TILTED) == pytest.approx(0.6, abs=1e-12)


def test_concurrence_rejects_wrong_dimension():
    with pytest.raises(DimMismatch):
        ms.concurrence_pure(np.ones(9) / 3)


def test_entropy_examples():
    assert ms.entropy_of_entanglement(BELL) == pytest.approx(1.0, abs=1e-12)
    qutrit = np.zeros(9, dtype=complex)
    qutrit[[0, 4, 8]] = 1 / np.sqrt(3)
    assert ms.entropy_of_entanglement(qutrit, 3, 3) == pytest.approx(np.log2(3), abs=1e-12)
    assert ms.entropy_of_entanglement(TILTED) == pytest.approx(H09, abs=1e-12)


def test_f_examples():
    assert ms.f_of_c(0.0) == pytest.approx(0.0, abs=1e-15)
    assert ms.f_of_c(1.0) == pytest.approx(1.0, abs=1e-12)
    assert ms.f_of_c(0.6) == pytest.approx(H09, abs=1e-12)
    with pytest.raises(OutOfRange):
        ms.f_of_c(1.5)


def test_f_monotone_and_convex():
    c = np.linspace(0, 1, 201)
    v = np.array([ms.f_of_c(x) for x in c])
    assert np.all(np.diff(v) > -1e-12)
    assert np.all(np.diff(v, 2) > -1e-9)


def test_negativity_bell_projector_against_pt_eigenvalue_oracle():
    rho = np.outer(BELL, BELL.conj())
    pt = ms.partial_transpose(rho, 2, 2)
    w = np.sort(np.linalg.eigvalsh(pt))
    assert np.allclose(w, [-0.5, 0.5, 0.5, 0.5], atol=1e-12)
    assert ms.negativity(rho) == pytest.approx(0.5, abs=1e-12)


def test_negativity_maximally_mixed_and_werner():
    assert ms.negativity(np.eye(4) / 4) == pytest.approx(0.0, abs=1e-14)
    werner = 0.5 * np.outer(BELL, BELL.conj()) + 0.5 * np.eye(4) / 4
    # oracle: dense eigenvalues of the partial transpose
    w = np.linalg.eigvalsh(ms.partial_transpose(werner, 2, 2))
    assert ms.negativity(werner) == pytest.approx(-w[w < 0].sum(), abs=1e-14)
    assert ms.negativity(werner) == pytest.approx(1 / 8, abs=1e-12)


def test_negativity_zero_on_random_separable_mixtures(rng):
    for _ in range(500):
        terms = rng.integers(1, 5)
        rho = np.zeros((4, 4), dtype=complex)
        weights = rng.dirichlet(np.ones(terms))
        for p in weights:
            a = random_pure(rng, 2)
            b = random_pure(rng, 2)
            v = np.kron(a, b)
            rho += p * np.outer(v, v.conj())
        assert ms.negativity(rho) < 1e-10


def test_eoa_examples():
    assert ms.entanglement_of_assistance(np.outer(BELL, BELL.conj())) == pytest.approx(1.0, abs=1e-10)
    e00 = np.zeros((4, 4), dtype=complex)
    e00[0, 0] = 1.0
    assert ms.entanglement_of_assistance(e00) == pytest.approx(0.0, abs=1e-12)


def test_eoa_maximally_mixed_via_bell_decomposition():
    # the maximally mixed state is an equal mixture of the four Bell states,
    # each of concurrence 1, so its assistance reaches 1
    bells = [
        np.array([1, 0, 0, 1]) / np.sqrt(2),
        np.array([1, 0, 0, -1]) / np.sqrt(2),
        np.array([0, 1, 1, 0]) / np.sqrt(2),
        np.array([0, 1, -1, 0]) / np.sqrt(2),
    ]
    mix = sum(np.outer(b, b.conj()) for b in bells) / 4
    assert np.allclose(mix, np.eye(4) / 4, atol=1e-15)
    avg = np.mean([ms.concurrence_pure(b) for b in bells])
    assert avg == pytest.approx(1.0, abs=1e-12)
    assert ms.entanglement_of_assistance(np.eye(4) / 4) == pytest.approx(1.0, abs=1e-10)


def test_eoa_square_root_independent(rng):
    for _ in range(100):
        rho = random_density(rng, 4)
        ref = ms.entanglement_of_assistance(rho)
        w, v = np.linalg.eigh(rho)
        x = v * np.sqrt(np.clip(w, 0, None))
        for _ in range(10):
            u = random_unitary(rng, 4)
            val = float(np.linalg.svd((x @ u).T @ ms.SYSY @ (x @ u), compute_uv=False).sum())
            assert val == pytest.approx(ref, abs=1e-9)


def test_eoa_upper_bounds_random_decompositions(rng):
    for _ in range(100):
        rho = random_density(rng, 4)
        ea = ms.entanglement_of_assistance(rho)
        w, v = np.linalg.eigh(rho)
        x = v * np.sqrt(np.clip(w, 0, None))
        # batched random decompositions: columns of x @ u are unnormalized members
        us = np.stack([random_unitary(rng, 4) for _ in range(1000)])
        cols = np.einsum("ij,njk->nik", x, us)
        avg = np.abs(np.einsum("nik,il,nlk->nk", cols, ms.SYSY, cols)).sum(axis=1)
        assert np.all(avg <= ea + 1e-9)


def test_eoa_rejects_non_psd():
    bad = np.diag([1.5, -0.5, 0, 0]).astype(complex)
    with pytest.raises(NumericalFailure):
        ms.entanglement_of_assistance(bad)


def test_schmidt_examples(rng):
    dec = ms.schmidt(np.array([1, 0, 0, 0], dtype=complex))
    assert np.allclose(dec.coeffs, [1, 0], atol=1e-14)
    dec = ms.schmidt(BELL)
    assert np.allclose(dec.coeffs, [1 / np.sqrt(2)] * 2, atol=1e-12)
    psi = random_pure(rng, 9)
    dec = ms.schmidt(psi, 3, 3)
    assert np.sum(dec.coeffs ** 2) == pytest.approx(1.0, abs=1e-12)
    assert np.all(np.diff(dec.coeffs) <= 1e-15)
    assert np.linalg.norm(dec.reconstruct() - psi) < 1e-10


def test_concurrence_equals_two_l1_l2_and_f_chain(rng):
    for _ in range(1000):
        psi = random_pure(rng, 4)
        dec = ms.schmidt(psi)
        c = ms.concurrence_pure(psi)
        assert c == pytest.approx(2 * dec.coeffs[0] * dec.coeffs[1], abs=1e-10)
        assert ms.entropy_of_entanglement(psi) == pytest.approx(ms.f_of_c(c), abs=1e-10)


def test_mixed_concurrence_limits():
    rho_bell = np.outer(BELL, BELL.conj())
    assert ms.concurrence_mixed(rho_bell) == pytest.approx(1.0, abs=1e-10)
    prod = np.zeros((4, 4), dtype=complex)
    prod[0, 0] = 1.0
    assert ms.concurrence_mixed(prod) == pytest.approx(0.0, abs=1e-12)
    # two-qubit separability boundary p = 1/3 (negativity and concurrence agree)
    for p, entangled in ((0.2, False), (1 / 3, False), (0.5, True)):
        werner = p * rho_bell + (1 - p) * np.eye(4) / 4
        c = ms.concurrence_mixed(werner)
        n = ms.negativity(werner)
        assert (c > 1e-8) == entangled
        assert (n > 1e-8) == entangled
