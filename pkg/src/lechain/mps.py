"""Matrix-product chains: contraction, conditional post-measurement states,
and closed forms for qubit-bond chains.

A chain is a per-site family of D x D matrices A^s.  Three boundaries are
supported: ``periodic`` (amplitudes are traces of matrix products), ``open``
(a fixed left row and right column vector), and ``qubit_ends`` (the bond
indices at both ends are physical spin-1/2 sites, so the register is
2, d, ..., d, 2 and the amplitude for (alpha, s_1..s_N, beta) is the
(alpha, beta) entry of the matrix product).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import (
    DimensionCap,
    DimMismatch,
    InvalidSpec,
    ParseError,
    SchemaError,
    UnknownFamily,
    WrongBondDim,
)
from .hilbert import AMPLITUDE_CAP, SX, SY, SZ, PureState, SiteDims

SYSY = np.kron(SY, SY)

U_CARTESIAN = np.array(
    [[1, 0, 1],
     [0, np.sqrt(2), 0],
     [-1, 0, 1]], dtype=complex) / np.sqrt(2)
"""Spin-1 basis change to the cartesian basis {x, y, z} (up to column phases).

Measuring a spin-1 site in the columns of this unitary is the swapping
measurement that makes valence-bond chains distribute end-to-end Bell pairs.
"""


@dataclass
class Boundary:
    kind: str                     # periodic | open | qubit_ends
    a: np.ndarray | None = None   # left row vector (open)
    b: np.ndarray | None = None   # right column vector (open)

    def __post_init__(self):
        if self.kind not in ("periodic", "open", "qubit_ends"):
            raise InvalidSpec(f"unknown boundary kind {self.kind!r}")
        if self.kind == "open":
            if self.a is None or self.b is None:
                raise InvalidSpec("open boundary needs both a and b vectors")
            self.a = np.asarray(self.a, dtype=complex).reshape(-1)
            self.b = np.asarray(self.b, dtype=complex).reshape(-1)


@dataclass
class MatrixProductState:
    """Per-site D x D matrices with a boundary condition.

    ``tensors`` has shape (d, D, D) for a translation-invariant family, or
    (N, d, D, D) for a site-dependent chain with ``n_sites = N``.
    """

    tensors: np.ndarray
    boundary: Boundary
    translation_invariant: bool = True
    n_sites: int | None = None

    def __post_init__(self):
        self.tensors = np.asarray(self.tensors, dtype=complex)
        expect_ndim = 3 if self.translation_invariant else 4
        if self.tensors.ndim != expect_ndim:
            raise InvalidSpec(f"tensor array must have {expect_ndim} axes")
        if not self.translation_invariant:
            self.n_sites = self.tensors.shape[0]
        if self.tensors.shape[-1] != self.tensors.shape[-2]:
            raise InvalidSpec("site matrices must be square")
        if not np.all(np.isfinite(self.tensors.view(float))):
            raise InvalidSpec("tensors must be finite")
        if self.boundary.kind == "open":
            if self.boundary.a.size != self.bond_dim or self.boundary.b.size != self.bond_dim:
                raise DimMismatch("boundary vectors must have length D")

    @property
    def d(self) -> int:
        return self.tensors.shape[-3]

    @property
    def bond_dim(self) -> int:
        return self.tensors.shape[-1]

    def site_tensors(self, k: int) -> np.ndarray:
        """The (d, D, D) stack at body site k (0-based, ends excluded)."""
        return self.tensors if self.translation_invariant else self.tensors[k]

    def body_length(self, n: int | None = None) -> int:
        if n is None:
            n = self.n_sites
        if n is None:
            raise InvalidSpec("chain length required for a translation-invariant family")
        return n

    def physical_dims(self, n: int | None = None) -> SiteDims:
        n = self.body_length(n)
        body = (self.d,) * n
        if self.boundary.kind == "qubit_ends":
            return SiteDims((self.bond_dim,) + body + (self.bond_dim,))
        return SiteDims(body)


def mps_named(family: str) -> MatrixProductState:
    """Exact translation-invariant families used throughout the tests."""
    key = family.strip().lower()
    if key == "aklt":
        tensors = np.array([1j * SY, SZ, SX])  # spin-1 site in the cartesian basis
        return MatrixProductState(tensors, Boundary("qubit_ends"))
    if key in ("counterexample", "counterexamplec"):
        tensors = np.array([SZ + SY, SZ - 1j * np.eye(2)])
        return MatrixProductState(tensors, Boundary("qubit_ends"))
    if key == "ghz":
        tensors = np.array([np.diag([1.0, 0.0]), np.diag([0.0, 1.0])]).astype(complex)
        return MatrixProductState(tensors, Boundary("periodic"))
    raise UnknownFamily(f"unknown family {family!r}")


def aklt_standard_basis() -> MatrixProductState:
    """The same chain with site matrices in the Sz basis (m = +1, 0, -1)."""
    cart = mps_named("aklt")
    tensors = np.einsum("ms,sab->mab", U_CARTESIAN, cart.tensors)
    return MatrixProductState(tensors, Boundary("qubit_ends"))


# ---------------------------------------------------------------------------
# Transfer operators and expectation values
# ---------------------------------------------------------------------------


def transfer_operator(tensors: np.ndarray, op: np.ndarray) -> np.ndarray:
    """E_O = sum_{s s'} <s|O|s'> A^s (x) conj(A^s') as a D^2 x D^2 matrix."""
    d = tensors.shape[0]
    if op.shape != (d, d):
        raise DimMismatch(f"operator shape {op.shape} does not match local dimension {d}")
    dd = tensors.shape[-1] ** 2
    e = np.zeros((dd, dd), dtype=complex)
    for s in range(d):
        for t in range(d):
            if op[s, t] != 0:
                e += op[s, t] * np.kron(tensors[s], tensors[t].conj())
    return e


def spectral_radius(e: np.ndarray) -> float:
    return float(np.max(np.abs(np.linalg.eigvals(e))))


def _boundary_row(mps: MatrixProductState, op: np.ndarray | None) -> np.ndarray:
    """Left boundary contraction as a D^2 row vector, with an optional end operator."""
    dd = mps.bond_dim
    if mps.boundary.kind == "qubit_ends":
        o = np.eye(dd, dtype=complex) if op is None else op
        return o.reshape(-1)
    if mps.boundary.kind == "open":
        if op is not None:
            raise DimMismatch("plain open boundary carries no end site")
        return np.kron(mps.boundary.a, mps.boundary.a.conj())
    raise InvalidSpec("no boundary row for a periodic chain")


def _boundary_col(mps: MatrixProductState, op: np.ndarray | None) -> np.ndarray:
    dd = mps.bond_dim
    if mps.boundary.kind == "qubit_ends":
        o = np.eye(dd, dtype=complex) if op is None else op
        return o.reshape(-1)
    if mps.boundary.kind == "open":
        if op is not None:
            raise DimMismatch("plain open boundary carries no end site")
        return np.kron(mps.boundary.b, mps.boundary.b.conj())
    raise InvalidSpec("no boundary column for a periodic chain")


def expectation(mps: MatrixProductState, ops: dict[int, np.ndarray],
                n: int | None = None) -> complex:
    """Normalized expectation of a product of single-site operators.

    Keys of ``ops`` are physical sites: for ``qubit_ends`` site 0 is the left
    end spin, sites 1..N the body, site N+1 the right end.
    """
    n = mps.body_length(n)
    offset = 1 if mps.boundary.kind == "qubit_ends" else 0
    body_ops = {}
    end_left = end_right = None
    n_phys = n + 2 * offset
    for site, op in ops.items():
        if not 0 <= site < n_phys:
            raise DimMismatch(f"site {site} out of range")
        if offset and site == 0:
            end_left = op
        elif offset and site == n_phys - 1:
            end_right = op
        else:
            body_ops[site - offset] = op

    ident = np.eye(mps.d, dtype=complex)

    def fold(with_ops: bool):
        mats = [transfer_operator(mps.site_tensors(k),
                                  body_ops.get(k, ident) if with_ops else ident)
                for k in range(n)]
        if mps.boundary.kind == "periodic":
            cur = np.eye(mps.bond_dim ** 2, dtype=complex)
            for m in mats:
                cur = cur @ m
            return complex(np.trace(cur))
        row = _boundary_row(mps, end_left if with_ops else None)
        col = _boundary_col(mps, end_right if with_ops else None)
        cur = row
        for m in mats:
            cur = cur @ m
        return complex(cur @ col)

    return fold(True) / fold(False)


# ---------------------------------------------------------------------------
# Densification and conditional states
# ---------------------------------------------------------------------------


def densify(mps: MatrixProductState, n: int | None = None) -> PureState:
    """Materialise the chain as a normalized dense state vector."""
    n = mps.body_length(n)
    dims = mps.physical_dims(n)
    if dims.dim > AMPLITUDE_CAP:
        raise DimensionCap(f"dense dimension {dims.dim} exceeds cap")
    d, dd = mps.d, mps.bond_dim
    cur = mps.site_tensors(0)  # (d, D, D)
    for k in range(1, n):
        nxt = mps.site_tensors(k)
        cur = np.einsum("fab,sbc->fsac", cur, nxt).reshape(-1, dd, dd)
    if mps.boundary.kind == "periodic":
        amps = np.trace(cur, axis1=1, axis2=2)
    elif mps.boundary.kind == "open":
        amps = np.einsum("a,fab,b->f", mps.boundary.a, cur, mps.boundary.b)
    else:  # qubit_ends: amplitude (alpha, body, beta) = product entry
        amps = np.transpose(cur, (1, 0, 2)).reshape(-1)
    return PureState(amps, dims).normalized()


def conditional_amplitudes(mps: MatrixProductState, i: int, j: int,
                           outcome: dict[int, int],
                           bases: dict[int, np.ndarray],
                           n: int | None = None) -> tuple[np.ndarray, float]:
    """Unnormalized two-site amplitudes after measuring all other sites.

    ``outcome[k]`` is the result index at measured physical site k and
    ``bases[k]`` the local unitary whose columns define that measurement;
    omitted bases mean the computational basis.  Returns (phi, weight) with
    phi of shape (d_i, d_j) and weight = <phi|phi>.
    """
    n = mps.body_length(n)
    dims = mps.physical_dims(n)
    n_phys = dims.n
    if not (0 <= i < n_phys and 0 <= j < n_phys) or i == j:
        raise DimMismatch(f"invalid free pair ({i}, {j})")
    swap = i > j
    if swap:
        i, j = j, i
    measured = [k for k in range(n_phys) if k not in (i, j)]
    if set(outcome) != set(measured):
        raise DimMismatch("outcome must cover exactly the measured sites")
    for k in measured:
        if not 0 <= outcome[k] < dims.dims[k]:
            raise DimMismatch(f"outcome {outcome[k]} out of range at site {k}")

    offset = 1 if mps.boundary.kind == "qubit_ends" else 0
    dd = mps.bond_dim

    def body_stack(k_phys: int) -> np.ndarray:
        a = mps.site_tensors(k_phys - offset)
        if k_phys in (i, j):
            return a
        u = bases.get(k_phys)
        vec = np.zeros(mps.d, dtype=complex)
        vec[outcome[k_phys]] = 1.0
        if u is not None:
            vec = u[:, outcome[k_phys]].conj()
        return np.einsum("s,sab->ab", vec, a)[None]

    def end_vectors(k_phys: int) -> np.ndarray:
        """Stack of bond-space vectors for an end spin (free: all, measured: one)."""
        if k_phys in (i, j):
            return np.eye(dd, dtype=complex)
        u = bases.get(k_phys)
        vec = np.zeros(dd, dtype=complex)
        vec[outcome[k_phys]] = 1.0
        if u is not None:
            vec = u[:, outcome[k_phys]].conj()
        return vec[None]

    if mps.boundary.kind == "periodic":
        cur = np.eye(dd, dtype=complex)[None]  # (F, D, D)
        for k in range(n):
            cur = np.einsum("fab,gbc->fgac", cur, body_stack(k)).reshape(-1, dd, dd)
        phi = np.trace(cur, axis1=1, axis2=2)
    else:
        if mps.boundary.kind == "open":
            rows = mps.boundary.a[None]
            cols = mps.boundary.b[None]
        else:
            rows = end_vectors(0)
            cols = end_vectors(n_phys - 1)
        cur = rows  # (F, D)
        for k in range(offset, n + offset):
            cur = np.einsum("fa,gab->fgb", cur, body_stack(k)).reshape(-1, dd)
        phi = np.einsum("fa,ga->fg", cur, cols).reshape(-1)

    phi = phi.reshape(dims.dims[i], dims.dims[j])
    if swap:
        phi = phi.T
    weight = float(np.vdot(phi, phi).real)
    return phi, weight


# ---------------------------------------------------------------------------
# Closed forms for qubit bonds (D = 2)
# ---------------------------------------------------------------------------


def _require_qubit_bond(mps: MatrixProductState):
    if mps.bond_dim != 2:
        raise WrongBondDim(f"requires bond dimension 2, got {mps.bond_dim}")


def _rows(tensors: np.ndarray) -> np.ndarray:
    """Site matrices flattened to a d x D^2 array (one row per basis state)."""
    d = tensors.shape[0]
    return tensors.reshape(d, -1)


def assistance_of_bond(tensors: np.ndarray) -> float:
    """Largest basis-average of 2|det A^s| over all measurement bases (D = 2).

    Equals the assistance of the (unnormalized) bond-space state A A^dagger:
    half the trace norm of A (sy x sy) A^T with A the d x 4 row matrix.
    """
    a = _rows(tensors)
    tau = a @ SYSY @ a.T
    return float(0.5 * np.linalg.svd(tau, compute_uv=False).sum())


def _takagi(tau: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Symmetric SVD tau = U diag(s) U^T for complex symmetric tau."""
    u, s, vh = np.linalg.svd(tau)
    c = u.conj().T @ vh.T  # unitary, symmetric on the support of s
    u_full = u @ scipy.linalg.sqrtm(c)
    return u_full, s


def optimal_bond_basis(mps: MatrixProductState) -> tuple[np.ndarray, float]:
    """Measurement basis maximizing sum_s |det A^s|, and the achieved value.

    The maximizing rotation diagonalizes the complex symmetric matrix
    A (sy x sy) A^T; its Takagi factor is the optimal local basis (D = 2).
    """
    _require_qubit_bond(mps)
    a = _rows(mps.site_tensors(0))
    tau = a @ SYSY @ a.T
    u, s = _takagi(tau)
    return u, float(0.5 * s.sum())


def det_sum(tensors: np.ndarray, basis: np.ndarray | None = None) -> float:
    """sum_s |det(rotated A^s)|; the basis rotation mixes the site index."""
    t = tensors
    if basis is not None:
        t = np.einsum("ms,mab->sab", basis.conj(), tensors)
    return float(sum(abs(np.linalg.det(m)) for m in t))


def le_analytic_qubit_bond(mps: MatrixProductState, n: int | None = None,
                           basis: np.ndarray | None = None) -> float:
    """Exact basis-average concurrence between the two end spins (D = 2).

    For a chain of N body sites measured site-by-site in ``basis`` the
    average concurrence is 2 prod_k (sum_s |det A_k^s|) divided by the norm
    (the determinant of a matrix product factorizes).
    """
    _require_qubit_bond(mps)
    if mps.boundary.kind != "qubit_ends":
        raise InvalidSpec("end-to-end average needs qubit ends")
    n = mps.body_length(n)
    num = 2.0
    for k in range(n):
        num *= det_sum(mps.site_tensors(k), basis)
    ident = np.eye(mps.d, dtype=complex)
    row, col = _boundary_row(mps, None), _boundary_col(mps, None)
    cur = row
    for k in range(n):
        cur = cur @ transfer_operator(mps.site_tensors(k), ident)
    denom = float((cur @ col).real)
    return num / denom


def long_range_criterion(mps: MatrixProductState) -> tuple[bool, float, float]:
    """(holds, assistance, lambda_1): end-to-end entanglement survives N -> inf
    iff the bond assistance equals the top eigenvalue of the identity transfer
    operator."""
    _require_qubit_bond(mps)
    e_a = assistance_of_bond(mps.site_tensors(0))
    lam1 = spectral_radius(transfer_operator(mps.site_tensors(0), np.eye(mps.d)))
    return bool(abs(e_a - lam1) <= 1e-9 * max(1.0, lam1)), e_a, lam1


# ---------------------------------------------------------------------------
# String order from transfer spectra
# ---------------------------------------------------------------------------


@dataclass
class StringOrderAnalytic:
    ratio: float                 # |lambda_R| / |lambda_1|
    xi: float | None             # N -> inf limit of the end-to-end correlator
    diagonalizable: bool
    finite: dict[int, float]     # end-to-end value at the requested lengths


def string_order_analytic(mps: MatrixProductState, rotation: np.ndarray,
                          lengths: tuple[int, ...] = ()) -> StringOrderAnalytic:
    """End-to-end string correlator of a qubit-bond chain.

    The interior carries ``rotation`` at every body site and sigma_z acts on
    the end spins.  The asymptotic value follows from the dominant
    eigenvalue/eigenvector pairs of the two transfer operators; when the
    rotated operator is too ill-conditioned to diagonalize only the finite
    lengths are reported.
    """
    _require_qubit_bond(mps)
    tensors = mps.site_tensors(0)
    e_one = transfer_operator(tensors, np.eye(mps.d))
    e_rot = transfer_operator(tensors, rotation)
    ratio = spectral_radius(e_rot) / spectral_radius(e_one)

    has_row = mps.boundary.kind != "periodic"
    finite = {}
    if has_row:
        end = SZ if mps.boundary.kind == "qubit_ends" else None
        row, col = _boundary_row(mps, end), _boundary_col(mps, end)
        row1, col1 = _boundary_row(mps, None), _boundary_col(mps, None)
        for n in lengths:
            num = row @ np.linalg.matrix_power(e_rot, n) @ col
            den = row1 @ np.linalg.matrix_power(e_one, n) @ col1
            finite[n] = float((num / den).real)

    conds = [np.linalg.cond(np.linalg.eig(e)[1]) for e in (e_rot, e_one)]
    diagonalizable = all(c < 1e8 for c in conds)
    if not diagonalizable or not has_row:
        return StringOrderAnalytic(float(ratio), None, diagonalizable, finite)
    if ratio < 1 - 1e-12:
        return StringOrderAnalytic(float(ratio), 0.0, True, finite)

    def dominant(e):
        w, v = np.linalg.eig(e)
        k = int(np.argmax(np.abs(w)))
        right = v[:, k]
        lw, lv = np.linalg.eig(e.T)
        kl = int(np.argmin(np.abs(lw - w[k])))
        left = lv[:, kl]
        return w[k], left / (left @ right), right

    lam_r, left_r, right_r = dominant(e_rot)
    lam_1, left_1, right_1 = dominant(e_one)
    prefactor = ((row @ right_r) * (left_r @ col)) / ((row1 @ right_1) * (left_1 @ col1))
    # equal magnitudes: the limit exists only when the dominant eigenvalues agree
    phase = lam_r / lam_1
    xi = float(prefactor.real) if abs(phase - 1) < 1e-9 else None
    return StringOrderAnalytic(float(ratio), xi, True, finite)


# ---------------------------------------------------------------------------
# Dense-state compression and file I/O
# ---------------------------------------------------------------------------


def mps_from_dense(state: PureState, svd_tol: float = 1e-10,
                   max_bond: int = 128) -> MatrixProductState:
    """Compress a dense state into an open-boundary chain by sweeping SVDs.

    All sites must share one local dimension.  Bond spectra are truncated at
    relative weight ``svd_tol``; tensors are zero-padded to the largest kept
    bond so the result has a uniform D.
    """
    dims = state.dims.dims
    d = dims[0]
    if any(x != d for x in dims):
        raise InvalidSpec("compression needs a uniform local dimension")
    n = len(dims)
    rest = state.amps.reshape(1, -1)
    raw = []
    bond = 1
    for k in range(n - 1):
        m = rest.reshape(bond * d, -1)
        u, s, vh = np.linalg.svd(m, full_matrices=False)
        keep = int(np.sum(s > svd_tol * s[0]))
        keep = max(1, min(keep, max_bond))
        raw.append(u[:, :keep].reshape(bond, d, keep).transpose(1, 0, 2))
        rest = (s[:keep, None] * vh[:keep])
        bond = keep
    raw.append(rest.reshape(bond, d, 1).transpose(1, 0, 2))
    dmax = max(t.shape[2] for t in raw)
    tensors = np.zeros((n, d, dmax, dmax), dtype=complex)
    for k, t in enumerate(raw):
        tensors[k, :, :t.shape[1], :t.shape[2]] = t
    a = np.zeros(dmax, dtype=complex)
    a[0] = 1.0
    b = np.zeros(dmax, dtype=complex)
    b[0] = 1.0
    return MatrixProductState(tensors, Boundary("open", a, b),
                              translation_invariant=False)


def _complex_out(x: np.ndarray):
    return [[float(v.real), float(v.imag)] for v in np.asarray(x).reshape(-1)]


def save_mps(mps: MatrixProductState, path) -> None:
    d, dd = mps.d, mps.bond_dim
    payload = {
        "d": d,
        "D": dd,
        "boundary": {"kind": mps.boundary.kind},
        "translation_invariant": mps.translation_invariant,
    }
    if mps.boundary.kind == "open":
        payload["boundary"]["a"] = _complex_out(mps.boundary.a)
        payload["boundary"]["b"] = _complex_out(mps.boundary.b)
    if mps.translation_invariant:
        payload["tensors"] = [
            [[[float(mps.tensors[s, a, b].real), float(mps.tensors[s, a, b].imag)]
              for b in range(dd)] for a in range(dd)] for s in range(d)]
    else:
        payload["n"] = mps.n_sites
        payload["tensors"] = [
            [[[[float(mps.tensors[k, s, a, b].real), float(mps.tensors[k, s, a, b].imag)]
               for b in range(dd)] for a in range(dd)] for s in range(d)]
            for k in range(mps.n_sites)]
    with open(path, "w") as fh:
        json.dump(payload, fh)


def _parse_complex(entry, where: str) -> complex:
    if (not isinstance(entry, (list, tuple))) or len(entry) != 2:
        raise SchemaError(f"field '{where}': expected [re, im]")
    try:
        return complex(float(entry[0]), float(entry[1]))
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"field '{where}': not numeric") from exc


def ingest_mps(path) -> MatrixProductState:
    """Read and strictly validate a chain description written by save_mps."""
    try:
        with open(path) as fh:
            payload = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not valid JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise SchemaError("top level must be an object")
    for key in ("d", "D", "boundary", "tensors"):
        if key not in payload:
            raise SchemaError(f"field '{key}': missing")
    d, dd = payload["d"], payload["D"]
    if not (isinstance(d, int) and isinstance(dd, int) and d >= 2 and dd >= 1):
        raise SchemaError("field 'd'/'D': need integer d >= 2, D >= 1")
    bnd = payload["boundary"]
    if not isinstance(bnd, dict) or "kind" not in bnd:
        raise SchemaError("field 'boundary.kind': missing")
    ti = bool(payload.get("translation_invariant", False))

    def parse_site(entry, where: str) -> np.ndarray:
        if not isinstance(entry, list) or len(entry) != d:
            raise SchemaError(f"field '{where}': expected {d} site matrices")
        out = np.zeros((d, dd, dd), dtype=complex)
        for s, mat in enumerate(entry):
            if not isinstance(mat, list) or len(mat) != dd:
                raise SchemaError(f"field '{where}[{s}]': bond dimension mismatch, expected {dd} rows")
            for a, rowv in enumerate(mat):
                if not isinstance(rowv, list) or len(rowv) != dd:
                    raise SchemaError(f"field '{where}[{s}][{a}]': bond dimension mismatch, expected {dd} columns")
                for b, cell in enumerate(rowv):
                    out[s, a, b] = _parse_complex(cell, f"{where}[{s}][{a}][{b}]")
        return out

    if ti:
        tensors = parse_site(payload["tensors"], "tensors")
    else:
        if "n" not in payload:
            raise SchemaError("field 'n': missing for a site-dependent chain")
        n = payload["n"]
        raw = payload["tensors"]
        if not isinstance(raw, list) or len(raw) != n:
            raise SchemaError(f"field 'tensors': expected {n} sites")
        tensors = np.stack([parse_site(raw[k], f"tensors[{k}]") for k in range(n)])

    if bnd["kind"] == "open":
        for key in ("a", "b"):
            if key not in bnd:
                raise SchemaError(f"field 'boundary.{key}': missing")
        a = np.array([_parse_complex(x, f"boundary.a[{k}]") for k, x in enumerate(bnd["a"])])
        b = np.array([_parse_complex(x, f"boundary.b[{k}]") for k, x in enumerate(bnd["b"])])
        boundary = Boundary("open", a, b)
    else:
        try:
            boundary = Boundary(bnd["kind"])
        except InvalidSpec as exc:
            raise SchemaError(f"field 'boundary.kind': {exc}") from exc
    if not np.all(np.isfinite(tensors.view(float))):
        raise SchemaError("field 'tensors': entries must be finite")
    return MatrixProductState(tensors, boundary, translation_invariant=ti,
                              n_sites=None if ti else payload["n"])
