"""Connected correlation functions, their maximization, and string-order diagnostics.

Two-qubit correlations are organised in the 3x3 matrix Q_ab of connected
Pauli-Pauli correlators; its largest singular value is the maximal connected
correlation over all directions.  For two qutrits the maximum is assembled
from two closed forms plus a bounded two-angle search.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.optimize

from .errors import DimMismatch, NumericalFailure, OutOfRange
from .hilbert import PAULIS, SX, SY, SZ, spin_matrices, string_rotation
from .measures import f_of_c, schmidt

_IMAG_TOL = 1e-9


def direction_observable(a) -> np.ndarray:
    """a . sigma for a unit 3-vector a."""
    a = np.asarray(a, dtype=float)
    if a.shape != (3,):
        raise DimMismatch("direction must be a 3-vector")
    if abs(np.linalg.norm(a) - 1.0) > 1e-12:
        raise OutOfRange(f"direction norm {np.linalg.norm(a)} is not 1")
    return a[0] * SX + a[1] * SY + a[2] * SZ


def validate_observable(m: np.ndarray) -> np.ndarray:
    """Check hermiticity and that the spectrum lies in [-1, 1]."""
    m = np.asarray(m, dtype=complex)
    if np.max(np.abs(m - m.conj().T)) > 1e-10:
        raise NumericalFailure("observable is not Hermitian")
    w = np.linalg.eigvalsh(m)
    if w[0] < -1 - 1e-9 or w[-1] > 1 + 1e-9:
        raise OutOfRange(f"observable spectrum [{w[0]}, {w[-1]}] exceeds [-1, 1]")
    return m


def _real(x: complex) -> float:
    if abs(x.imag) > _IMAG_TOL * max(1.0, abs(x.real)):
        raise NumericalFailure(f"expected a real expectation value, got {x}")
    return float(x.real)


def connected_correlation(state, i: int, j: int, s_a: np.ndarray, s_b: np.ndarray) -> float:
    """Q = <S_a^i S_b^j> - <S_a^i><S_b^j> for a pure or mixed state."""
    if i == j:
        raise DimMismatch("sites i and j must differ")
    two = _real(state.expectation({i: s_a, j: s_b}))
    one_a = _real(state.expectation({i: s_a}))
    one_b = _real(state.expectation({j: s_b}))
    return two - one_a * one_b


def q_matrix(state, i: int, j: int) -> np.ndarray:
    """3x3 matrix of connected Pauli correlators between two qubit sites."""
    if state.dims.dims[i] != 2 or state.dims.dims[j] != 2:
        raise DimMismatch("q_matrix needs qubit sites")
    q = np.empty((3, 3))
    for a, sa in enumerate(PAULIS):
        for b, sb in enumerate(PAULIS):
            q[a, b] = connected_correlation(state, i, j, sa, sb)
    return q


def max_correlation_qubits(state, i: int, j: int) -> tuple[float, np.ndarray, np.ndarray]:
    """Largest connected correlation over directions, with its maximizers.

    Returns (sigma_max(Q), a, b) where a, b are the left/right singular
    vectors, so a.Q.b = sigma_max.
    """
    q = q_matrix(state, i, j)
    u, s, vh = np.linalg.svd(q)
    return float(s[0]), u[:, 0], vh[0]


# ---------------------------------------------------------------------------
# Two-qutrit closed forms
# ---------------------------------------------------------------------------


def qutrit_angle_correlation(lams, theta, theta2, phi=0.0):
    """Connected correlation of the one-parameter observable family on a pure
    two-qutrit state with ascending Schmidt coefficients ``lams``.

    Both observables have spectrum {+1, -1, -1}; theta/theta2 rotate in the
    subspace of the two largest coefficients, phi is the relative azimuth
    (phi = 0 maximizes).  Arguments may be arrays (broadcast).
    """
    l1, l2, l3 = lams
    ct, ct2 = np.cos(theta), np.cos(theta2)
    st, st2 = np.sin(theta), np.sin(theta2)
    return (l1 ** 2 + ct * ct2 * (l2 ** 2 + l3 ** 2)
            + 2 * st * st2 * l2 * l3 * np.cos(phi)
            - (l1 ** 2 + (l2 ** 2 - l3 ** 2) * ct)
            * (l1 ** 2 + (l2 ** 2 - l3 ** 2) * ct2))


def qutrit_closed_forms(lams) -> dict[str, float | None]:
    """The two analytic candidates for the maximal two-qutrit correlation.

    ``diag`` is the value for diagonal observables diag(1, 1, -1); ``sym`` is
    the symmetric stationary point, present only when its optimal angle exists.
    """
    l1, l2, l3 = lams
    out: dict[str, float | None] = {
        "diag": float(1 - (l3 ** 2 - (l2 ** 2 + l1 ** 2)) ** 2),
        "sym": None,
    }
    den_angle = (l2 - l3) ** 2 - (l2 ** 2 - l3 ** 2) ** 2
    den_val = 2 * l2 * l3 - l1 ** 2
    if abs(den_angle) > 1e-12 and den_val > 1e-12:
        cos_opt = l1 ** 2 * (l2 ** 2 - l3 ** 2) / den_angle
        if abs(cos_opt) <= 1 + 1e-9:
            out["sym"] = float(4 * l2 ** 2 * l3 ** 2 / den_val)
    return out


def qutrit_correlation_bound(psi: np.ndarray) -> tuple[float, float]:
    """(Q_max, E_lower) for a pure two-qutrit state.

    Q_max is the maximal connected correlation over observables with spectrum
    in [-1, 1]: the best of the closed forms and a polished two-angle search.
    E_lower = f(Q_max) lower-bounds the entropy of entanglement.
    """
    dec = schmidt(psi, 3, 3)
    lams = np.sort(dec.coeffs)  # ascending: smallest first
    forms = qutrit_closed_forms(lams)
    candidates = [v for v in forms.values() if v is not None]

    grid = np.linspace(0.0, np.pi, 121)
    vals = qutrit_angle_correlation(lams, grid[:, None], grid[None, :])
    k = np.unravel_index(np.argmax(vals), vals.shape)
    res = scipy.optimize.minimize(
        lambda x: -qutrit_angle_correlation(lams, x[0], x[1]),
        x0=[grid[k[0]], grid[k[1]]],
        method="Nelder-Mead",
        options={"xatol": 1e-10, "fatol": 1e-12},
    )
    candidates.append(float(-res.fun))

    q_max = min(max(candidates), 1.0)
    return q_max, f_of_c(q_max)


def qutrit_upper_bound(lams) -> float:
    """Two-qubit-limit bound on the maximal correlation: 2 l2 l3 after
    renormalizing with the smallest coefficient removed."""
    _, l2, l3 = lams
    return float(2 * l2 * l3 / (l2 ** 2 + l3 ** 2))


# ---------------------------------------------------------------------------
# Bounds from parity symmetry
# ---------------------------------------------------------------------------


def le_bounds_parity(state, i: int, j: int) -> tuple[float, float]:
    """(lower, upper) bounds on the concurrence-localizable entanglement.

    lower = max(|Qxx|, |Qyy|, |Qzz|);
    upper = (sqrt(s+) + sqrt(s-))/2 with
    s_pm = (1 +- <sz sz>)^2 - (<sz_i> +- <sz_j>)^2.
    Valid as a sandwich when the state is parity symmetric; tiny negative
    s_pm from roundoff are clipped to zero.
    """
    q = q_matrix(state, i, j)
    lower = float(max(abs(q[0, 0]), abs(q[1, 1]), abs(q[2, 2])))
    zz = _real(state.expectation({i: SZ, j: SZ}))
    zi = _real(state.expectation({i: SZ}))
    zj = _real(state.expectation({j: SZ}))
    s_plus = (1 + zz) ** 2 - (zi + zj) ** 2
    s_minus = (1 - zz) ** 2 - (zi - zj) ** 2
    upper = (np.sqrt(max(s_plus, 0.0)) + np.sqrt(max(s_minus, 0.0))) / 2
    return lower, float(upper)


# ---------------------------------------------------------------------------
# String order
# ---------------------------------------------------------------------------


def _end_z(d: int) -> np.ndarray:
    """Sz scaled to unit maximal eigenvalue (sigma_z for qubits, Sz for spin 1)."""
    _, _, sz = spin_matrices(d)
    return sz / ((d - 1) / 2)


def string_order(state, i: int, j: int, rotation=None) -> float:
    """String correlator <Z_i [prod_k R_k] Z_j> over strictly interior sites k.

    R defaults to exp(i*pi*Sz) of each interior site's dimension; Z is the
    unit-normalized Sz of the end sites.  Adjacent i, j give the plain
    <Z_i Z_j> (empty product).
    """
    if i == j:
        raise DimMismatch("sites i and j must differ")
    i, j = min(i, j), max(i, j)
    ops = {i: _end_z(state.dims.dims[i]), j: _end_z(state.dims.dims[j])}
    for k in range(i + 1, j):
        r = rotation if rotation is not None else string_rotation(state.dims.dims[k])
        if r.shape != (state.dims.dims[k],) * 2:
            raise DimMismatch(f"rotation shape {r.shape} does not match site {k}")
        ops[k] = r
    return _real(state.expectation(ops))


# ---------------------------------------------------------------------------
# Necessary condition for connected string order of a qubit-bond MPS
# ---------------------------------------------------------------------------


def _traceless_hermitian_basis(d: int) -> list[np.ndarray]:
    basis = []
    for a in range(d):
        for b in range(a + 1, d):
            m = np.zeros((d, d), dtype=complex)
            m[a, b] = m[b, a] = 1
            basis.append(m)
            m = np.zeros((d, d), dtype=complex)
            m[a, b] = -1j
            m[b, a] = 1j
            basis.append(m)
    for a in range(1, d):
        m = np.zeros((d, d), dtype=complex)
        m[:a, :a] = np.eye(a)
        m[a, a] = -a
        basis.append(m * np.sqrt(2.0 / (a * (a + 1))))
    return basis


@dataclass
class CsoSearchResult:
    holds: bool
    best_ratio: float
    best_unitary: np.ndarray
    budget_exhausted: bool


def cso_necessary_condition_mps(mps, search_budget: int = 20000,
                                tol: float = 1e-6, seed: int = 0) -> CsoSearchResult:
    """Search for a non-identity site unitary whose transfer operator has the
    same spectral radius as the identity one.

    Nonzero connected string order requires such a unitary to exist.  The
    search runs over SU(d) with the identity-like region |tr U| > d - 1
    excluded (a unitary near a phase multiple of the identity saturates the
    ratio trivially while carrying no connected correlation).
    ``holds`` is true when the best ratio reaches 1 - tol.
    """
    from . import mps as mpsmod

    if mps.bond_dim != 2:
        from .errors import WrongBondDim
        raise WrongBondDim(f"qubit-bond chains only (D = 2), got D = {mps.bond_dim}")
    tensors = mps.site_tensors(0)
    d = tensors.shape[0]
    rho_one = mpsmod.spectral_radius(mpsmod.transfer_operator(tensors, np.eye(d)))
    basis = _traceless_hermitian_basis(d)
    trace_cap = d - 1.0

    def ratio_of(x):
        h = sum(c * g for c, g in zip(x, basis))
        u = scipy.linalg.expm(1j * h)
        r = mpsmod.spectral_radius(mpsmod.transfer_operator(tensors, u)) / rho_one
        return u, r

    evals = 0

    def objective(x):
        nonlocal evals
        evals += 1
        u, r = ratio_of(x)
        overlap = abs(np.trace(u))
        return -(r - 10.0 * max(0.0, overlap - trace_cap))

    rng = np.random.default_rng(seed)
    starts = [np.zeros(len(basis))]
    # exp(i*pi*Sz) expressed in this basis, the natural string rotation
    _, _, sz = spin_matrices(d)
    target = np.pi * sz
    starts[0] = np.array([np.trace(g @ target).real / np.trace(g @ g).real for g in basis])
    starts += [rng.normal(scale=1.5, size=len(basis)) for _ in range(11)]

    best_ratio, best_u = -np.inf, np.eye(d, dtype=complex)
    exhausted = False
    for x0 in starts:
        if evals >= search_budget:
            exhausted = True
            break
        res = scipy.optimize.minimize(
            objective, x0, method="Nelder-Mead",
            options={"xatol": 1e-9, "fatol": 1e-10,
                     "maxfev": max(100, (search_budget - evals))},
        )
        u, r = ratio_of(res.x)
        if abs(np.trace(u)) <= trace_cap + 1e-9 and r > best_ratio:
            best_ratio, best_u = r, u
    return CsoSearchResult(holds=bool(best_ratio >= 1 - tol),
                           best_ratio=float(best_ratio),
                           best_unitary=best_u,
                           budget_exhausted=exhausted)
