"""Bipartite entanglement measures for two-site pure and mixed states.

All entropies are base-2.  Two-qubit conventions: concurrence of a pure state
is |<psi*| sy x sy |psi>|, assistance uses an eigen-square-root of the density
operator (the result is square-root independent).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimMismatch, NumericalFailure, OutOfRange
from .hilbert import SY

SYSY = np.kron(SY, SY)
_EIG_CLIP = 1e-15  # spectra are clipped here before logs


def shannon_entropy(x: float) -> float:
    """H(x) = -x log2 x - (1-x) log2 (1-x), with 0 log 0 = 0."""
    if x < -1e-12 or x > 1 + 1e-12:
        raise OutOfRange(f"probability {x} outside [0, 1]")
    x = min(max(x, 0.0), 1.0)
    out = 0.0
    if x > _EIG_CLIP:
        out -= x * np.log2(x)
    if 1 - x > _EIG_CLIP:
        out -= (1 - x) * np.log2(1 - x)
    return out


def _check_pure(psi: np.ndarray, d: int) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    if psi.size != d:
        raise DimMismatch(f"expected a vector of length {d}, got {psi.size}")
    nrm = np.linalg.norm(psi)
    if abs(nrm - 1.0) > 1e-8:
        raise NumericalFailure(f"state norm {nrm} is not 1")
    return psi


def concurrence_pure(psi: np.ndarray) -> float:
    """Concurrence |<psi*| sy x sy |psi>| of a normalized two-qubit pure state."""
    psi = _check_pure(psi, 4)
    return float(abs(psi @ SYSY @ psi))


def schmidt(psi: np.ndarray, d_a: int = 2, d_b: int = 2) -> "SchmidtDecomp":
    """Schmidt decomposition via SVD of the d_a x d_b amplitude matrix."""
    psi = _check_pure(psi, d_a * d_b)
    u, s, vh = np.linalg.svd(psi.reshape(d_a, d_b))
    r = min(d_a, d_b)
    return SchmidtDecomp(coeffs=s[:r], left=u[:, :r], right=vh[:r].conj().T)


@dataclass
class SchmidtDecomp:
    """Nonincreasing Schmidt coefficients with matching orthonormal vectors."""

    coeffs: np.ndarray
    left: np.ndarray   # columns are the A-side vectors
    right: np.ndarray  # columns are the B-side vectors

    def reconstruct(self) -> np.ndarray:
        m = (self.left * self.coeffs) @ self.right.conj().T
        return m.reshape(-1)


def entropy_of_entanglement(psi: np.ndarray, d_a: int = 2, d_b: int = 2) -> float:
    """Von Neumann entropy (base 2) of the one-side reduction of a pure state."""
    dec = schmidt(psi, d_a, d_b)
    p = np.clip(dec.coeffs ** 2, 0.0, 1.0)
    p = p[p > _EIG_CLIP]
    return float(-(p * np.log2(p)).sum())


def f_of_c(c: float) -> float:
    """Entropy of entanglement of a two-qubit pure state with concurrence c."""
    if c < -1e-12 or c > 1 + 1e-9:
        raise OutOfRange(f"concurrence {c} outside [0, 1]")
    c = min(max(c, 0.0), 1.0)
    return shannon_entropy((1 + np.sqrt(1 - c * c)) / 2)


def _check_density(rho: np.ndarray, d: int) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (d, d):
        raise DimMismatch(f"expected a {d} x {d} matrix, got {rho.shape}")
    if abs(np.trace(rho) - 1.0) > 1e-8:
        raise NumericalFailure(f"trace {np.trace(rho)} is not 1")
    return rho


def partial_transpose(rho: np.ndarray, d_a: int, d_b: int) -> np.ndarray:
    """Transpose on the B factor."""
    t = rho.reshape(d_a, d_b, d_a, d_b)
    return t.transpose(0, 3, 2, 1).reshape(d_a * d_b, d_a * d_b)


def negativity(rho: np.ndarray, d_a: int = 2, d_b: int = 2) -> float:
    """N(rho) = (||rho^Tb||_1 - 1)/2, the absolute sum of negative PT eigenvalues.

    Normalized so a two-qubit Bell projector gives 1/2.
    """
    rho = _check_density(rho, d_a * d_b)
    w = np.linalg.eigvalsh(partial_transpose(rho, d_a, d_b))
    return float(-w[w < 0].sum())


def concurrence_mixed(rho: np.ndarray) -> float:
    """Two-qubit mixed-state concurrence max(0, r1 - r2 - r3 - r4)."""
    rho = _check_density(rho, 4)
    m = rho @ SYSY @ rho.conj() @ SYSY
    w = np.linalg.eigvals(m)
    r = np.sqrt(np.clip(w.real, 0.0, None))
    r.sort()
    return float(max(0.0, r[-1] - r[-2] - r[-3] - r[-4]))


def _eigen_square_root(rho: np.ndarray, psd_tol: float = 1e-8) -> np.ndarray:
    w, v = np.linalg.eigh(rho)
    if w[0] < -psd_tol:
        raise NumericalFailure(f"density operator has negative eigenvalue {w[0]:.3e}")
    return v * np.sqrt(np.clip(w, 0.0, None))


def entanglement_of_assistance(rho: np.ndarray) -> float:
    """Assistance of a two-qubit state: sum of singular values of X^T (sy x sy) X.

    X is any square root rho = X X^dagger; an eigen-square-root is used here,
    and the value does not depend on this choice.
    """
    rho = _check_density(rho, 4)
    x = _eigen_square_root(rho)
    return float(np.linalg.svd(x.T @ SYSY @ x, compute_uv=False).sum())
