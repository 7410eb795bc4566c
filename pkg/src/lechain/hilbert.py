"""Dense states, spin operators, model Hamiltonians and exact solvers for short chains.

Index convention (fixed, bit-exact): the chain is a mixed-radix register in
which site 0 is the most significant digit.  A basis index therefore equals
``np.ravel_multi_index(assignment, dims)`` and reshaping an amplitude vector
to ``dims`` puts site k on axis k.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import (
    ConvergenceFailure,
    DimensionCap,
    DimMismatch,
    InvalidSpec,
    NumericalFailure,
)

AMPLITUDE_CAP = 2 ** 22      # largest dense state vector we will materialise
DENSE_SOLVER_CUTOFF = 2 ** 12  # full diagonalization below, Lanczos above
GIBBS_CAP = 2 ** 12          # thermal states need a full dense eigendecomposition

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
ID2 = np.eye(2, dtype=complex)
PAULIS = (SX, SY, SZ)


def spin_matrices(d: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Spin operators (Sx, Sy, Sz) for local dimension d, spin s = (d-1)/2.

    Basis ordering is m = +s, +s-1, ..., -s, so for d = 3 one gets
    Sz = diag(1, 0, -1) and exp(i*pi*Sz) = diag(-1, 1, -1) exactly.
    """
    s = (d - 1) / 2
    m = s - np.arange(d)
    sz = np.diag(m).astype(complex)
    raise_ = np.zeros((d, d), dtype=complex)
    for k in range(d - 1):
        raise_[k, k + 1] = np.sqrt(s * (s + 1) - m[k + 1] * (m[k + 1] + 1))
    sx = (raise_ + raise_.conj().T) / 2
    sy = (raise_ - raise_.conj().T) / 2j
    return sx, sy, sz


def string_rotation(d: int) -> np.ndarray:
    """exp(i*pi*Sz) for local dimension d; exactly diag(-1, 1, -1) for spin 1."""
    _, _, sz = spin_matrices(d)
    # magnetic numbers are integer or half-integer: 2m is an exact integer,
    # so the phases i^(2m) can be written down without rounding error
    two_m = np.round(2 * np.diag(sz).real).astype(int)
    return np.diag(1j ** (two_m % 4)).astype(complex)


@dataclass(frozen=True)
class SiteDims:
    """Per-site local dimensions of a product Hilbert space."""

    dims: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        if any(d < 2 for d in self.dims):
            raise InvalidSpec(f"all local dimensions must be >= 2, got {self.dims}")
        if self.dim > AMPLITUDE_CAP:
            raise DimensionCap(
                f"product dimension {self.dim} exceeds cap {AMPLITUDE_CAP}"
            )

    @classmethod
    def qubits(cls, n: int) -> "SiteDims":
        return cls((2,) * n)

    @classmethod
    def uniform(cls, d: int, n: int) -> "SiteDims":
        return cls((d,) * n)

    @property
    def n(self) -> int:
        return len(self.dims)

    @property
    def dim(self) -> int:
        return int(np.prod(self.dims, dtype=np.int64))

    def index_of(self, assignment: Sequence[int]) -> int:
        """Flat basis index of a per-site assignment (site 0 most significant)."""
        return int(np.ravel_multi_index(tuple(assignment), self.dims))

    def assignment_of(self, index: int) -> tuple[int, ...]:
        """Per-site assignment of a flat basis index."""
        return tuple(int(x) for x in np.unravel_index(index, self.dims))


def _apply_site_vec(amps: np.ndarray, dims: SiteDims, site: int, op: np.ndarray) -> np.ndarray:
    d = dims.dims[site]
    left = int(np.prod(dims.dims[:site], dtype=np.int64))
    t = amps.reshape(left, d, -1)
    return np.einsum("ab,lbr->lar", op, t).reshape(-1)


@dataclass
class PureState:
    """Dense complex amplitude vector over a product space."""

    amps: np.ndarray
    dims: SiteDims

    def __post_init__(self):
        self.amps = np.asarray(self.amps, dtype=complex).reshape(-1)
        if self.amps.size != self.dims.dim:
            raise DimMismatch(
                f"amplitude vector of length {self.amps.size} does not match dims {self.dims.dims}"
            )

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def normalized(self) -> "PureState":
        n = self.norm
        if n == 0:
            raise NumericalFailure("cannot normalize the zero vector")
        return PureState(self.amps / n, self.dims)

    def tensor(self) -> np.ndarray:
        return self.amps.reshape(self.dims.dims)

    def apply_site_unitary(self, site: int, u: np.ndarray) -> "PureState":
        if u.shape != (self.dims.dims[site],) * 2:
            raise DimMismatch(f"operator shape {u.shape} does not match site {site}")
        return PureState(_apply_site_vec(self.amps, self.dims, site, u), self.dims)

    def expectation(self, ops: dict[int, np.ndarray]) -> complex:
        """<psi| prod_k O_k |psi> for operators acting on distinct sites."""
        x = self.amps
        for site, op in ops.items():
            if op.shape != (self.dims.dims[site],) * 2:
                raise DimMismatch(f"operator shape {op.shape} does not match site {site}")
            x = _apply_site_vec(x, self.dims, site, op)
        return complex(np.vdot(self.amps, x))

    def reduced_density(self, keep: Sequence[int]) -> "DensityOperator":
        """Partial trace down to the sites in `keep` (in the given order)."""
        keep = list(keep)
        rest = [k for k in range(self.dims.n) if k not in keep]
        t = self.tensor().transpose(keep + rest)
        dk = int(np.prod([self.dims.dims[k] for k in keep], dtype=np.int64))
        m = t.reshape(dk, -1)
        return DensityOperator(m @ m.conj().T, SiteDims(tuple(self.dims.dims[k] for k in keep)))

    def to_density(self) -> "DensityOperator":
        return DensityOperator(np.outer(self.amps, self.amps.conj()), self.dims)


@dataclass
class DensityOperator:
    """Hermitian, unit-trace matrix on a product space."""

    mat: np.ndarray
    dims: SiteDims

    def __post_init__(self):
        self.mat = np.asarray(self.mat, dtype=complex)
        if self.mat.shape != (self.dims.dim,) * 2:
            raise DimMismatch(
                f"matrix shape {self.mat.shape} does not match dims {self.dims.dims}"
            )

    def validate(self, herm_tol: float = 1e-10, trace_tol: float = 1e-10, psd_tol: float = 1e-9):
        """Check hermiticity, unit trace and positivity; raises NumericalFailure."""
        herm = np.max(np.abs(self.mat - self.mat.conj().T))
        if herm > herm_tol:
            raise NumericalFailure(f"not Hermitian: max deviation {herm:.3e}")
        tr = complex(np.trace(self.mat))
        if abs(tr - 1.0) > trace_tol:
            raise NumericalFailure(f"trace {tr} is not 1")
        w = np.linalg.eigvalsh(self.mat)
        if w[0] < -psd_tol:
            raise NumericalFailure(f"negative eigenvalue {w[0]:.3e}")

    def apply_site_unitary(self, site: int, u: np.ndarray) -> "DensityOperator":
        """U rho U^dagger with U acting on one site."""
        d = self.dims.dims[site]
        if u.shape != (d, d):
            raise DimMismatch(f"operator shape {u.shape} does not match site {site}")
        left = int(np.prod(self.dims.dims[:site], dtype=np.int64))
        dim = self.dims.dim
        m = self.mat.reshape(left, d, -1)
        m = np.einsum("ab,lbr->lar", u, m).reshape(dim, dim)
        m = m.T.reshape(left, d, -1)
        m = np.einsum("ab,lbr->lar", u.conj(), m).reshape(dim, dim).T
        return DensityOperator(m, self.dims)

    def expectation(self, ops: dict[int, np.ndarray]) -> complex:
        """tr(rho prod_k O_k) for operators acting on distinct sites."""
        m = self.mat
        dim = self.dims.dim
        for site, op in ops.items():
            d = self.dims.dims[site]
            if op.shape != (d, d):
                raise DimMismatch(f"operator shape {op.shape} does not match site {site}")
            left = int(np.prod(self.dims.dims[:site], dtype=np.int64))
            t = m.reshape(left, d, -1)
            m = np.einsum("ab,lbr->lar", op, t).reshape(dim, dim)
        return complex(np.trace(m))

    def reduced(self, keep: Sequence[int]) -> "DensityOperator":
        """Partial trace down to the sites in `keep` (in the given order)."""
        keep = list(keep)
        n = self.dims.n
        t = self.mat.reshape(self.dims.dims + self.dims.dims)
        # trace out the complement pairwise, highest site first so lower axis
        # positions stay valid
        m = n
        for k in sorted((k for k in range(n) if k not in keep), reverse=True):
            t = np.trace(t, axis1=k, axis2=k + m)
            m -= 1
        # remaining axes follow the original site order; permute to `keep` order
        src = sorted(keep)
        perm = [src.index(k) for k in keep]
        t = t.transpose(perm + [p + len(keep) for p in perm])
        dk_dims = tuple(self.dims.dims[k] for k in keep)
        dk = int(np.prod(dk_dims, dtype=np.int64))
        return DensityOperator(t.reshape(dk, dk), SiteDims(dk_dims))


def op_at(dims: SiteDims, ops: dict[int, np.ndarray]) -> sp.csr_matrix:
    """Sparse embedding of a product of single-site operators into the full space."""
    out = sp.identity(1, format="csr", dtype=complex)
    for k, d in enumerate(dims.dims):
        local = ops.get(k)
        if local is None:
            local = sp.identity(d, format="csr", dtype=complex)
        else:
            if local.shape != (d, d):
                raise DimMismatch(f"operator at site {k} has shape {local.shape}, expected {(d, d)}")
            local = sp.csr_matrix(local)
        out = sp.kron(out, local, format="csr")
    return out


def parity_z(dims: SiteDims) -> sp.csr_matrix:
    """Global parity operator: tensor product of sigma_z over all (qubit) sites."""
    return op_at(dims, {k: SZ for k in range(dims.n)})


# ---------------------------------------------------------------------------
# Model Hamiltonians
# ---------------------------------------------------------------------------

_FAMILIES = ("ising", "xxz", "heisenberg", "aklt", "custom")


@dataclass(frozen=True)
class ModelSpec:
    """A named spin-chain Hamiltonian with its parameters.

    ``n_sites`` counts the chain body; for spin-1 families with ``end_caps``
    two spin-1/2 sites are appended at the ends (so the register is
    2, 3, ..., 3, 2).  Sign conventions: the qubit families carry an overall
    minus sign on couplings and field; the spin-1 family is
    sum_bonds [S.S - beta (S.S)^2].
    """

    family: str
    n_sites: int
    boundary: str = "periodic"
    lam: float | None = None        # transverse-field coupling (ising)
    delta: float | None = None      # anisotropy (xxz)
    h_over_j: float | None = None   # field in units of the exchange (xxz)
    beta: float | None = None       # biquadratic weight (heisenberg)
    end_caps: bool = False          # spin-1/2 spins attached at both ends
    couplings: tuple = ()           # custom: (i, j, axis, strength)
    fields: tuple = ()              # custom: per-site sigma_z field strength

    @classmethod
    def ising(cls, lam: float, n: int, boundary: str = "periodic") -> "ModelSpec":
        return cls(family="ising", n_sites=n, boundary=boundary, lam=float(lam))

    @classmethod
    def xxz(cls, delta: float, h_over_j: float, n: int, boundary: str = "periodic") -> "ModelSpec":
        return cls(family="xxz", n_sites=n, boundary=boundary,
                   delta=float(delta), h_over_j=float(h_over_j))

    @classmethod
    def heisenberg(cls, beta: float, n: int, boundary: str = "open",
                   end_caps: bool = True) -> "ModelSpec":
        return cls(family="heisenberg", n_sites=n, boundary=boundary,
                   beta=float(beta), end_caps=end_caps)

    @classmethod
    def aklt(cls, n: int, boundary: str = "open", end_caps: bool = True) -> "ModelSpec":
        return cls(family="aklt", n_sites=n, boundary=boundary,
                   beta=-1.0 / 3.0, end_caps=end_caps)

    @classmethod
    def custom(cls, n: int, couplings: Iterable[tuple], fields: Iterable[float] = (),
               boundary: str = "open") -> "ModelSpec":
        return cls(family="custom", n_sites=n, boundary=boundary,
                   couplings=tuple(tuple(c) for c in couplings),
                   fields=tuple(float(f) for f in fields))

    def site_dims(self) -> SiteDims:
        if self.family in ("heisenberg", "aklt"):
            body = (3,) * self.n_sites
            return SiteDims((2,) + body + (2,)) if self.end_caps else SiteDims(body)
        return SiteDims.qubits(self.n_sites)

    def validate(self):
        if self.family not in _FAMILIES:
            raise InvalidSpec(f"unknown family {self.family!r}")
        if self.boundary not in ("open", "periodic"):
            raise InvalidSpec(f"boundary must be open or periodic, got {self.boundary!r}")
        if self.n_sites < 2:
            raise InvalidSpec("need at least two sites")
        params = [p for p in (self.lam, self.delta, self.h_over_j, self.beta) if p is not None]
        if not all(np.isfinite(params)):
            raise InvalidSpec("model parameters must be finite")
        if self.end_caps and self.boundary == "periodic":
            raise InvalidSpec("end caps require an open chain")
        if self.family == "custom":
            n = self.n_sites
            for c in self.couplings:
                if len(c) != 4:
                    raise InvalidSpec(f"coupling entry {c!r} is not (i, j, axis, strength)")
                i, j, axis, strength = c
                if not (0 <= i < n and 0 <= j < n) or i == j:
                    raise InvalidSpec(f"coupling sites ({i}, {j}) out of range")
                if axis not in ("x", "y", "z"):
                    raise InvalidSpec(f"coupling axis {axis!r} must be x, y or z")
                if not np.isfinite(strength):
                    raise InvalidSpec("coupling strengths must be finite")
            if self.fields and len(self.fields) != n:
                raise InvalidSpec(f"need {n} field values, got {len(self.fields)}")
            if self.fields and not all(np.isfinite(self.fields)):
                raise InvalidSpec("field strengths must be finite")


@dataclass
class Hamiltonian:
    """Sparse Hermitian operator together with its site dimensions."""

    matrix: sp.csr_matrix
    dims: SiteDims

    def dense(self) -> np.ndarray:
        return self.matrix.toarray()


def _bonds(n: int, boundary: str) -> list[tuple[int, int]]:
    bonds = [(k, k + 1) for k in range(n - 1)]
    if boundary == "periodic":
        bonds.append((n - 1, 0))
    return bonds


def _exchange_terms(dA: int, dB: int, beta: float) -> list[tuple[np.ndarray, np.ndarray, float]]:
    """S.S - beta (S.S)^2 expanded as sums of single-site operator products."""
    SA = spin_matrices(dA)
    SB = spin_matrices(dB)
    terms = [(SA[a], SB[a], 1.0) for a in range(3)]
    if beta != 0.0:
        terms += [(SA[a] @ SA[b], SB[a] @ SB[b], -beta)
                  for a in range(3) for b in range(3)]
    return terms


def build_hamiltonian(spec: ModelSpec) -> Hamiltonian:
    """Assemble the sparse Hamiltonian for a model specification."""
    spec.validate()
    dims = spec.site_dims()
    if dims.dim > AMPLITUDE_CAP:
        raise DimensionCap(f"Hilbert dimension {dims.dim} exceeds cap")
    h = sp.csr_matrix((dims.dim, dims.dim), dtype=complex)
    pauli = {"x": SX, "y": SY, "z": SZ}

    if spec.family == "ising":
        for i, j in _bonds(spec.n_sites, spec.boundary):
            h = h - spec.lam * op_at(dims, {i: SX, j: SX})
        for i in range(spec.n_sites):
            h = h - op_at(dims, {i: SZ})

    elif spec.family == "xxz":
        for i, j in _bonds(spec.n_sites, spec.boundary):
            h = h - op_at(dims, {i: SX, j: SX}) - op_at(dims, {i: SY, j: SY}) \
                - spec.delta * op_at(dims, {i: SZ, j: SZ})
        for i in range(spec.n_sites):
            h = h - spec.h_over_j * op_at(dims, {i: SZ})

    elif spec.family in ("heisenberg", "aklt"):
        for i, j in _bonds(dims.n, spec.boundary):
            dA, dB = dims.dims[i], dims.dims[j]
            for (oa, ob, c) in _exchange_terms(dA, dB, spec.beta):
                h = h + c * op_at(dims, {i: oa, j: ob})

    else:  # custom
        for (i, j, axis, strength) in spec.couplings:
            h = h - strength * op_at(dims, {i: pauli[axis], j: pauli[axis]})
        for i, gamma in enumerate(spec.fields):
            h = h - gamma * op_at(dims, {i: SZ})

    return Hamiltonian(h.tocsr(), dims)


# ---------------------------------------------------------------------------
# Solvers
# ---------------------------------------------------------------------------


@dataclass
class Spectrum:
    """Lowest eigenpairs, sorted ascending, with a degeneracy grouping."""

    energies: np.ndarray
    states: list[PureState]
    degeneracy_tol: float
    next_energy: float | None = None

    def degenerate_blocks(self) -> list[list[int]]:
        blocks: list[list[int]] = [[0]]
        for k in range(1, len(self.energies)):
            if self.energies[k] - self.energies[k - 1] < self.degeneracy_tol:
                blocks[-1].append(k)
            else:
                blocks.append([k])
        return blocks

    @property
    def ground_degenerate(self) -> bool:
        block = self.degenerate_blocks()[0]
        if len(block) > 1:
            return True
        if len(self.energies) == 1 and self.next_energy is not None:
            return bool(self.next_energy - self.energies[0] < self.degeneracy_tol)
        return False

    @property
    def ground_block_size(self) -> int:
        return len(self.degenerate_blocks()[0])

    def ground_block_mixture(self) -> DensityOperator:
        """Equal mixture over the degenerate ground block (thermal default policy)."""
        block = self.degenerate_blocks()[0]
        dim = self.states[0].dims.dim
        m = np.zeros((dim, dim), dtype=complex)
        for k in block:
            m += np.outer(self.states[k].amps, self.states[k].amps.conj())
        return DensityOperator(m / len(block), self.states[0].dims)


def _fix_phase(v: np.ndarray) -> np.ndarray:
    pivot = int(np.argmax(np.abs(v)))
    ph = v[pivot] / abs(v[pivot])
    return v / ph


def _canonical_subspace_basis(vecs: np.ndarray) -> np.ndarray:
    """Deterministic orthonormal basis of the column span of `vecs`.

    Depends only on the spanned subspace (via its projector) plus greedy
    coordinate pivoting with lowest-index tie-breaks, so degenerate blocks
    come out solver-independent.
    """
    dim, g = vecs.shape
    chosen: list[np.ndarray] = []
    proj_row = np.sum(np.abs(vecs) ** 2, axis=1)  # ||P e_j||^2
    for _ in range(g):
        weights = proj_row - sum(np.abs(v) ** 2 for v in chosen)
        pivot = int(np.argmax(weights))
        v = vecs @ vecs[pivot].conj()
        for u in chosen:
            v = v - u * (np.vdot(u, v))
        nrm = np.linalg.norm(v)
        if nrm < 1e-12:
            raise NumericalFailure("degenerate block canonicalization broke down")
        v = _fix_phase(v / nrm)
        chosen.append(v)
    return np.column_stack(chosen)


def _canonicalize(energies: np.ndarray, vecs: np.ndarray, tol: float) -> np.ndarray:
    out = vecs.copy()
    start = 0
    k = len(energies)
    while start < k:
        stop = start + 1
        while stop < k and energies[stop] - energies[stop - 1] < tol:
            stop += 1
        if stop - start == 1:
            out[:, start] = _fix_phase(out[:, start])
        else:
            out[:, start:stop] = _canonical_subspace_basis(out[:, start:stop])
        start = stop
    return out


def ground_state(h: Hamiltonian, k: int = 1, degeneracy_tol: float = 1e-8) -> Spectrum:
    """Lowest k eigenpairs of a Hermitian model operator.

    Dense below 2^12 amplitudes, Lanczos above (with a seeded generic start
    vector; a uniform start can be exactly orthogonal to a singlet ground
    state).  Returned eigenvectors are deterministic: phases are pinned and
    degenerate blocks are canonicalized.
    """
    dims = h.dims
    dim = dims.dim
    k = min(k, dim)
    if dim <= DENSE_SOLVER_CUTOFF:
        w, v = np.linalg.eigh(h.dense())
        energies, vecs = w[:k], v[:, :k]
        next_energy = float(w[k]) if dim > k else None
    else:
        nev = min(k + 4, dim - 2)
        v0 = np.random.default_rng(1234).normal(size=dim)
        try:
            w, v = spla.eigsh(h.matrix, k=nev, which="SA", v0=v0)
        except spla.ArpackNoConvergence as exc:  # pragma: no cover - rare
            raise ConvergenceFailure(f"Lanczos did not converge: {exc}") from exc
        order = np.argsort(w)
        w, v = w[order], v[:, order]
        energies, vecs = w[:k], v[:, :k]
        next_energy = float(w[k]) if nev > k else None

    scale = max(1.0, float(np.abs(energies).max()))
    for i in range(k):
        resid = np.linalg.norm(h.matrix @ vecs[:, i] - energies[i] * vecs[:, i])
        if resid > 1e-8 * scale:
            raise ConvergenceFailure(f"eigenpair {i} residual {resid:.3e} exceeds tolerance")

    vecs = _canonicalize(energies, vecs, degeneracy_tol)
    states = [PureState(vecs[:, i], dims).normalized() for i in range(k)]
    return Spectrum(np.asarray(energies, dtype=float), states, degeneracy_tol, next_energy)


def gibbs_state(h: Hamiltonian, temperature: float) -> DensityOperator:
    """Thermal state exp(-H/T)/Z at temperature T in coupling units."""
    if temperature <= 0:
        raise InvalidSpec("temperature must be positive")
    dim = h.dims.dim
    if dim > GIBBS_CAP:
        raise DimensionCap(f"dense thermal state of dimension {dim} exceeds cap {GIBBS_CAP}")
    w, v = np.linalg.eigh(h.dense())
    weights = np.exp(-(w - w[0]) / temperature)
    weights /= weights.sum()
    keep = weights > 1e-18
    m = (v[:, keep] * weights[keep]) @ v[:, keep].conj().T
    m = (m + m.conj().T) / 2
    return DensityOperator(m, h.dims)


# ---------------------------------------------------------------------------
# Named states and state files
# ---------------------------------------------------------------------------


def build_named_state(name: str, n: int) -> PureState:
    """GHZ, Cluster (open-chain controlled-phase on |+...+>) or ProductAllZero."""
    key = name.strip().lower()
    if n < 2:
        raise InvalidSpec("named states need at least two sites")
    dims = SiteDims.qubits(n)
    if key == "ghz":
        amps = np.zeros(dims.dim, dtype=complex)
        amps[0] = amps[-1] = 1 / np.sqrt(2)
    elif key == "cluster":
        if n < 3:
            raise InvalidSpec("cluster state needs at least three sites")
        idx = np.arange(dims.dim)
        bits = (idx[:, None] >> np.arange(n - 1, -1, -1)[None, :]) & 1
        pairs = np.sum(bits[:, :-1] * bits[:, 1:], axis=1)  # open chain: bonds (k, k+1)
        amps = ((-1.0) ** pairs) / np.sqrt(dims.dim)
    elif key in ("productallzero", "product_all_zero"):
        amps = np.zeros(dims.dim, dtype=complex)
        amps[0] = 1.0
    else:
        raise InvalidSpec(f"unknown named state {name!r}")
    return PureState(amps, dims)


def save_state(state: PureState, path) -> None:
    """Write a pure state as JSON {dims: [...], amps: [[re, im], ...]}."""
    payload = {
        "dims": list(state.dims.dims),
        "amps": [[float(a.real), float(a.imag)] for a in state.amps],
    }
    with open(path, "w") as fh:
        json.dump(payload, fh)


def load_state(path) -> PureState:
    """Read a pure state written by save_state."""
    from .errors import ParseError, SchemaError

    try:
        with open(path) as fh:
            payload = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not valid JSON: {exc}") from exc
    if not isinstance(payload, dict) or "dims" not in payload or "amps" not in payload:
        raise SchemaError("state file must carry 'dims' and 'amps'")
    dims = SiteDims(tuple(payload["dims"]))
    amps = np.array([complex(re, im) for re, im in payload["amps"]])
    if amps.size != dims.dim:
        raise SchemaError(f"field 'amps': expected {dims.dim} entries, got {amps.size}")
    return PureState(amps, dims)
