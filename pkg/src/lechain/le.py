"""Localizable entanglement: measurement ensembles, basis optimization, exact
and Monte Carlo estimators, fluctuations, and the entanglement length.

A measurement strategy assigns a local orthonormal basis (columns of a
unitary) to every measured site.  Exact enumeration rotates the state into
the measurement basis once and buckets amplitudes by outcome; sampling runs
a Metropolis chain over outcome tuples with single-site proposals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
import scipy.optimize

from .errors import (
    DimensionCap,
    DimMismatch,
    InsufficientData,
    InvalidSpec,
    MeasureMismatch,
    NumericalFailure,
    ZeroProbabilityStart,
)
from .hilbert import SX, SY, SZ, DensityOperator, PureState, SiteDims
from .measures import (
    concurrence_pure,
    entropy_of_entanglement,
    negativity,
)
from .mps import U_CARTESIAN, MatrixProductState
from .correlations import connected_correlation, direction_observable

ENUMERATION_CAP = 2 ** 20  # largest outcome count for exact enumeration
P_FLOOR = 1e-14            # outcomes below this weight are dropped

SYSY = np.kron(SY, SY)


# ---------------------------------------------------------------------------
# Strategies
# ---------------------------------------------------------------------------


@dataclass
class MeasurementStrategy:
    """Per-measured-site local unitaries; columns define the projective basis."""

    unitaries: dict[int, np.ndarray]
    label: str = ""

    def validate(self, tol: float = 1e-10):
        for site, u in self.unitaries.items():
            d = u.shape[0]
            if u.shape != (d, d):
                raise DimMismatch(f"unitary at site {site} is not square")
            dev = np.max(np.abs(u.conj().T @ u - np.eye(d)))
            if dev > tol:
                raise NumericalFailure(f"site {site}: U^dag U deviates from 1 by {dev:.2e}")

    def sites(self):
        return sorted(self.unitaries)

    def unitary(self, site: int) -> np.ndarray:
        return self.unitaries[site]


def standard_strategy(dims: SiteDims, i: int, j: int) -> MeasurementStrategy:
    us = {k: np.eye(dims.dims[k], dtype=complex)
          for k in range(dims.n) if k not in (i, j)}
    return MeasurementStrategy(us, label="standard")


SIGMA_X_BASIS = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


def sigma_x_strategy(dims: SiteDims, i: int, j: int) -> MeasurementStrategy:
    us = {}
    for k in range(dims.n):
        if k in (i, j):
            continue
        if dims.dims[k] != 2:
            raise DimMismatch(f"sigma_x basis needs qubits, site {k} has d={dims.dims[k]}")
        us[k] = SIGMA_X_BASIS.copy()
    return MeasurementStrategy(us, label="sigma_x")


def cartesian_strategy(dims: SiteDims, i: int, j: int) -> MeasurementStrategy:
    """Cartesian (swap) basis on every measured spin-1 site, standard elsewhere."""
    us = {}
    for k in range(dims.n):
        if k in (i, j):
            continue
        d = dims.dims[k]
        us[k] = U_CARTESIAN.copy() if d == 3 else np.eye(d, dtype=complex)
    return MeasurementStrategy(us, label="cartesian")


def window_strategy(dims: SiteDims, i: int, j: int) -> MeasurementStrategy:
    """Cartesian basis strictly between i and j, standard basis everywhere else."""
    lo, hi = min(i, j), max(i, j)
    us = {}
    for k in range(dims.n):
        if k in (i, j):
            continue
        d = dims.dims[k]
        inside = lo < k < hi
        us[k] = U_CARTESIAN.copy() if (inside and d == 3) else np.eye(d, dtype=complex)
    return MeasurementStrategy(us, label="cartesian_window")


# ---------------------------------------------------------------------------
# Basis parameterization (one point per basis, phases removed)
# ---------------------------------------------------------------------------


def basis_param_count(d: int) -> int:
    return d * (d - 1)


def basis_unitary(d: int, params) -> np.ndarray:
    """Unitary from d(d-1) real parameters: exp(iH) with H zero-diagonal Hermitian.

    Diagonal phases of H would only re-phase basis vectors, so this chart walks
    the set of measurement bases without that redundancy.
    """
    params = np.asarray(params, dtype=float)
    if params.size != basis_param_count(d):
        raise DimMismatch(f"need {basis_param_count(d)} parameters for d={d}")
    h = np.zeros((d, d), dtype=complex)
    idx = 0
    for a in range(d):
        for b in range(a + 1, d):
            z = params[idx] + 1j * params[idx + 1]
            h[a, b] = z
            h[b, a] = z.conjugate()
            idx += 2
    return scipy.linalg.expm(1j * h)


def basis_warm_starts(d: int) -> list[np.ndarray]:
    """Standard basis plus the bases that are typically optimal for spin chains."""
    starts = [np.zeros(basis_param_count(d))]
    if d == 2:
        starts.append(np.array([0.0, -np.pi / 4]))      # sigma_x basis
    if d == 3:
        starts.append(np.array([0.0, 0.0, 0.0, -np.pi / 4, 0.0, 0.0]))  # cartesian
    return starts


def bases_equivalent(u: np.ndarray, v: np.ndarray, tol: float = 1e-6) -> bool:
    """True when the two unitaries define the same projective basis
    (columns equal up to permutation and phases)."""
    overlap = np.abs(u.conj().T @ v)
    d = u.shape[0]
    for axis in (0, 1):
        if not np.allclose(overlap.max(axis=axis), 1.0, atol=tol):
            return False
    # each row/column must contain exactly one near-unit entry
    return bool(np.all((overlap > 1 - tol).sum(axis=0) == 1)
                and np.all((overlap > 1 - tol).sum(axis=1) == 1))


# ---------------------------------------------------------------------------
# Ensembles
# ---------------------------------------------------------------------------


@dataclass
class EnsembleMember:
    p: float
    dims: tuple[int, int]
    pure: np.ndarray | None = None    # normalized two-site amplitudes
    mixed: np.ndarray | None = None   # normalized two-site density matrix

    @property
    def is_pure(self) -> bool:
        return self.pure is not None

    def density(self) -> np.ndarray:
        if self.mixed is not None:
            return self.mixed
        return np.outer(self.pure, self.pure.conj())


@dataclass
class OutcomeEnsemble:
    members: list[EnsembleMember]
    pair_dims: tuple[int, int]
    source: str = "exact"   # exact | sampled

    def total_probability(self) -> float:
        return float(sum(m.p for m in self.members))


def _rotated_amps(state: PureState, strategy: MeasurementStrategy) -> np.ndarray:
    amps = state.amps
    dims = state.dims
    for k in strategy.sites():
        u = strategy.unitary(k)
        d = dims.dims[k]
        if u.shape != (d, d):
            raise DimMismatch(f"strategy unitary at site {k} has shape {u.shape}")
        left = int(np.prod(dims.dims[:k], dtype=np.int64))
        t = amps.reshape(left, d, -1)
        amps = np.einsum("ab,lbr->lar", u.conj().T, t).reshape(-1)
    return amps


def measurement_ensemble(state, i: int, j: int,
                         strategy: MeasurementStrategy) -> OutcomeEnsemble:
    """Exact outcome ensemble after measuring every site except i and j.

    Pure input: one pass, O(total dimension) — rotate into the measurement
    basis and bucket amplitudes by the measured sites' mixed-radix outcome
    index (measured sites in increasing order).  Mixed input: the diagonal
    blocks <s|rho|s> with probabilities tr<s|rho|s>.  Zero-probability
    outcomes are dropped.
    """
    dims = state.dims
    n = dims.n
    if not (0 <= i < n and 0 <= j < n) or i == j:
        raise DimMismatch(f"invalid pair ({i}, {j})")
    measured = [k for k in range(n) if k not in (i, j)]
    if set(strategy.unitaries) != set(measured):
        raise DimMismatch("strategy must cover exactly the measured sites")
    n_outcomes = int(np.prod([dims.dims[k] for k in measured], dtype=np.int64))
    if n_outcomes > ENUMERATION_CAP:
        raise DimensionCap(f"{n_outcomes} outcomes exceed the enumeration cap")
    pair = (dims.dims[i], dims.dims[j])
    dpair = pair[0] * pair[1]

    if isinstance(state, PureState):
        amps = _rotated_amps(state, strategy)
        t = amps.reshape(dims.dims).transpose(measured + [i, j]).reshape(n_outcomes, dpair)
        w = np.einsum("sk,sk->s", t, t.conj()).real
        members = [
            EnsembleMember(p=float(w[s]), dims=pair, pure=t[s] / np.sqrt(w[s]))
            for s in np.flatnonzero(w > P_FLOOR)
        ]
        return OutcomeEnsemble(members, pair, "exact")

    if not isinstance(state, DensityOperator):
        raise DimMismatch("state must be a PureState or DensityOperator")
    rho = state
    for k in measured:
        rho = rho.apply_site_unitary(k, strategy.unitary(k).conj().T)
    strides = np.ones(n, dtype=np.int64)
    for k in range(n - 2, -1, -1):
        strides[k] = strides[k + 1] * dims.dims[k + 1]
    pair_offsets = (np.arange(pair[0])[:, None] * strides[i]
                    + np.arange(pair[1])[None, :] * strides[j]).reshape(-1)
    meas_dims = [dims.dims[k] for k in measured]
    members = []
    for flat in range(n_outcomes):
        assign = np.unravel_index(flat, meas_dims) if measured else ()
        base = int(sum(int(s) * strides[k] for s, k in zip(assign, measured)))
        idx = base + pair_offsets
        block = rho.mat[np.ix_(idx, idx)]
        p = float(np.trace(block).real)
        if p > P_FLOOR:
            blk = block / p
            members.append(EnsembleMember(p=p, dims=pair, mixed=(blk + blk.conj().T) / 2))
    return OutcomeEnsemble(members, pair, "exact")


# ---------------------------------------------------------------------------
# Measures on ensemble members
# ---------------------------------------------------------------------------

MEASURES = ("concurrence", "entropy", "negativity")


def member_entanglement(member: EnsembleMember, measure: str) -> float:
    da, db = member.dims
    if measure == "concurrence":
        if not member.is_pure:
            raise MeasureMismatch("concurrence needs pure ensemble members")
        if (da, db) != (2, 2):
            raise MeasureMismatch("concurrence needs a qubit pair")
        return concurrence_pure(member.pure)
    if measure == "entropy":
        if not member.is_pure:
            raise MeasureMismatch("entropy of entanglement needs pure ensemble members")
        return entropy_of_entanglement(member.pure, da, db)
    if measure == "negativity":
        return negativity(member.density(), da, db)
    raise MeasureMismatch(f"unknown measure {measure!r}")


@dataclass
class LeEstimate:
    mean: float
    fluctuation: float
    std_error: float
    samples: int
    measure: str
    strategy: MeasurementStrategy | None = None
    autocorr_time: float | None = None


def average_entanglement(ensemble: OutcomeEnsemble, measure: str,
                         strategy: MeasurementStrategy | None = None) -> LeEstimate:
    """Probability-weighted mean entanglement and its fluctuation."""
    values = np.array([member_entanglement(m, measure) for m in ensemble.members])
    probs = np.array([m.p for m in ensemble.members])
    mean = float(probs @ values)
    var = float(probs @ values ** 2) - mean ** 2
    fluctuation = math.sqrt(max(var, 0.0))
    return LeEstimate(mean=mean, fluctuation=fluctuation, std_error=0.0,
                      samples=len(ensemble.members), measure=measure,
                      strategy=strategy)


# ---------------------------------------------------------------------------
# Basis optimization
# ---------------------------------------------------------------------------


def _strategy_from_params(dims: SiteDims, i: int, j: int, params: np.ndarray,
                          blocks: list[tuple[tuple[int, ...], int, int]]) -> MeasurementStrategy:
    us = {}
    for sites, lo, hi in blocks:
        d = dims.dims[sites[0]]
        u = basis_unitary(d, params[lo:hi])
        for k in sites:
            us[k] = u
    return MeasurementStrategy(us, label="optimized")


def _param_blocks(dims: SiteDims, measured: list[int], per_site: bool):
    """Group measured sites into parameter blocks: one block per local dimension
    (uniform mode) or one per site."""
    blocks = []
    lo = 0
    if per_site:
        groups = [(k,) for k in measured]
    else:
        by_dim: dict[int, list[int]] = {}
        for k in measured:
            by_dim.setdefault(dims.dims[k], []).append(k)
        groups = [tuple(v) for _, v in sorted(by_dim.items())]
    for sites in groups:
        n_par = basis_param_count(dims.dims[sites[0]])
        blocks.append((sites, lo, lo + n_par))
        lo += n_par
    return blocks, lo


@dataclass
class OptimizeOptions:
    restarts: int = 20
    per_site: bool = False
    seed: int = 0
    fatol: float = 1e-8
    xatol: float = 1e-6
    maxfev: int | None = None


def _pure_pair_mean(state: PureState, i: int, j: int,
                    strategy: MeasurementStrategy, measure: str) -> float | None:
    """Vectorized mean for pure states and qubit pairs (the optimizer hot path)."""
    dims = state.dims
    if not isinstance(state, PureState) or (dims.dims[i], dims.dims[j]) != (2, 2):
        return None
    if measure not in ("concurrence", "entropy"):
        return None
    measured = [k for k in range(dims.n) if k not in (i, j)]
    amps = _rotated_amps(state, strategy)
    t = amps.reshape(dims.dims).transpose(measured + [i, j]).reshape(-1, 4)
    w = np.einsum("sk,sk->s", t, t.conj()).real
    keep = w > P_FLOOR
    t, w = t[keep], w[keep]
    conc = np.abs(np.einsum("sk,kl,sl->s", t, SYSY, t)) / w
    if measure == "entropy":
        x = (1 + np.sqrt(np.clip(1 - conc ** 2, 0.0, 1.0))) / 2
        vals = np.zeros_like(x)
        for p in (x, 1 - x):
            mask = p > 1e-15
            vals[mask] -= p[mask] * np.log2(p[mask])
    else:
        vals = conc
    return float(w @ vals)


def optimize_le(state, i: int, j: int, measure: str = "concurrence",
                options: OptimizeOptions | None = None) -> LeEstimate:
    """Maximize the average entanglement over measurement bases.

    Multi-start Nelder-Mead over the basis chart; site-independent bases per
    local dimension by default (``per_site`` switches to independent bases).
    Warm starts include the standard, sigma_x and cartesian bases; remaining
    restarts are seeded random.  Ties break to the lexicographically smallest
    parameter vector.  The search is heuristic: the achieved value is reported.
    """
    opts = options or OptimizeOptions()
    dims = state.dims
    measured = [k for k in range(dims.n) if k not in (i, j)]
    blocks, n_params = _param_blocks(dims, measured, opts.per_site)

    def run(params):
        strat = _strategy_from_params(dims, i, j, params, blocks)
        ens = measurement_ensemble(state, i, j, strat)
        return average_entanglement(ens, measure, strat)

    def objective(params):
        strat = _strategy_from_params(dims, i, j, params, blocks)
        fast = _pure_pair_mean(state, i, j, strat, measure)
        if fast is not None:
            return -fast
        return -run(params).mean

    starts: list[np.ndarray] = []
    zero = np.zeros(n_params)
    starts.append(zero)
    warm = []
    for sites, lo, hi in blocks:
        d = dims.dims[sites[0]]
        warm.append([w for w in basis_warm_starts(d)])
    # combine per-block warm starts positionally (standard with standard, etc.)
    max_warm = max(len(w) for w in warm) if warm else 0
    for t in range(1, max_warm):
        params = zero.copy()
        for (sites, lo, hi), options_ in zip(blocks, warm):
            pick = options_[min(t, len(options_) - 1)]
            params[lo:hi] = pick
        starts.append(params)
    rng = np.random.default_rng(opts.seed)
    while len(starts) < opts.restarts:
        starts.append(rng.uniform(-np.pi / 2, np.pi / 2, size=n_params))

    best: tuple[tuple, np.ndarray] | None = None
    for x0 in starts[: opts.restarts]:
        res = scipy.optimize.minimize(
            objective, x0, method="Nelder-Mead",
            options={"fatol": opts.fatol, "xatol": opts.xatol,
                     "maxfev": opts.maxfev or 400 * (n_params + 1)})
        # ties (to 1e-9 in the objective) break to the smallest parameter vector
        key = (round(float(res.fun), 9), tuple(np.round(res.x, 9)))
        if best is None or key < best[0]:
            best = (key, res.x)
    est = run(best[1])
    return est


# ---------------------------------------------------------------------------
# Metropolis sampling over measurement outcomes of a matrix-product chain
# ---------------------------------------------------------------------------


class _Segment:
    """A maximal run of measured sites; keeps prefix/suffix products so a
    single-site change costs O(D^3)."""

    def __init__(self, dd: int):
        self.mats: list[np.ndarray] = []
        self.dd = dd
        self.prefix: list[np.ndarray] = [np.eye(dd, dtype=complex)]
        self.suffix: list[np.ndarray] = [np.eye(dd, dtype=complex)]

    def rebuild(self):
        dd = self.dd
        n = len(self.mats)
        self.prefix = [np.eye(dd, dtype=complex)]
        for m in self.mats:
            self.prefix.append(self.prefix[-1] @ m)
        self.suffix = [np.eye(dd, dtype=complex)] * (n + 1)
        for t in range(n - 1, -1, -1):
            self.suffix[t] = self.mats[t] @ self.suffix[t + 1]

    @property
    def product(self) -> np.ndarray:
        return self.prefix[-1]

    def trial(self, t: int, new_mat: np.ndarray) -> np.ndarray:
        return self.prefix[t] @ new_mat @ self.suffix[t + 1]

    def commit(self, t: int, new_mat: np.ndarray):
        self.mats[t] = new_mat
        for u in range(t, len(self.mats)):
            self.prefix[u + 1] = self.prefix[u] @ self.mats[u]
        for u in range(t, -1, -1):
            self.suffix[u] = self.mats[u] @ self.suffix[u + 1]


class _ChainSampler:
    """Conditional two-site amplitudes of a matrix-product chain as a function
    of the measurement outcome tuple, with O(D^3) single-site updates.

    Supported layouts: periodic chain with a body pair; open chain (boundary
    vectors) with a body pair; qubit-end chain with the two end spins as the
    free pair.
    """

    def __init__(self, mps: MatrixProductState, n: int, i: int, j: int,
                 strategy: MeasurementStrategy):
        n = mps.body_length(n)
        self.mps = mps
        self.n = n
        dims = mps.physical_dims(n)
        self.pair = (i, j)
        self.pair_dims = (dims.dims[i], dims.dims[j])
        dd = mps.bond_dim
        offset = 1 if mps.boundary.kind == "qubit_ends" else 0
        n_phys = dims.n
        if i >= j:
            raise InvalidSpec("need i < j")
        if mps.boundary.kind == "qubit_ends":
            if (i, j) != (0, n_phys - 1):
                raise InvalidSpec("sampling on a qubit-end chain supports the end pair only")
            self.layout = "ends"
        elif mps.boundary.kind == "periodic":
            self.layout = "periodic"
        else:
            self.layout = "line"

        self.sites = [k for k in range(n_phys) if k not in (i, j)]
        self.site_dim = [dims.dims[k] for k in self.sites]
        # rotated tensor stacks: R[s] = sum_m conj(U[m, s]) A^m
        self.rotated: list[np.ndarray] = []
        for k in self.sites:
            u = strategy.unitary(k)
            a = mps.site_tensors(k - offset)
            self.rotated.append(np.einsum("ms,mab->sab", u.conj(), a))

        if self.layout == "ends":
            seg_slices = [list(range(len(self.sites)))]
        elif self.layout == "periodic":
            seg1 = [p for p, k in enumerate(self.sites) if i < k < j]
            seg2 = ([p for p, k in enumerate(self.sites) if k > j]
                    + [p for p, k in enumerate(self.sites) if k < i])
            seg_slices = [seg1, seg2]
        else:
            ib, jb = i, j
            seg0 = [p for p, k in enumerate(self.sites) if k < ib]
            seg1 = [p for p, k in enumerate(self.sites) if ib < k < jb]
            seg2 = [p for p, k in enumerate(self.sites) if k > jb]
            seg_slices = [seg0, seg1, seg2]
            self.free_stacks = (mps.site_tensors(ib - offset), mps.site_tensors(jb - offset))
        if self.layout == "periodic":
            self.free_stacks = (mps.site_tensors(i), mps.site_tensors(j))

        self.segments = [_Segment(dd) for _ in seg_slices]
        self.where: list[tuple[int, int]] = [None] * len(self.sites)
        for si, positions in enumerate(seg_slices):
            for t, p in enumerate(positions):
                self.where[p] = (si, t)
        self.outcome = np.zeros(len(self.sites), dtype=int)

    def set_outcome(self, outcome):
        self.outcome = np.asarray(outcome, dtype=int).copy()
        for seg in self.segments:
            seg.mats = []
        for p in range(len(self.sites)):
            si, t = self.where[p]
            self.segments[si].mats.append(None)
        for p in range(len(self.sites)):
            si, t = self.where[p]
            self.segments[si].mats[t] = self.rotated[p][self.outcome[p]]
        for seg in self.segments:
            seg.rebuild()

    def _phi_from(self, products: list[np.ndarray]) -> np.ndarray:
        if self.layout == "ends":
            return products[0]
        ai, aj = self.free_stacks
        if self.layout == "periodic":
            g1, g2 = products
            z = g1 @ aj @ g2
            return np.einsum("apq,bqp->ab", ai, z)
        g0, g1, g2 = products
        row = self.mps.boundary.a @ g0
        w = np.einsum("p,apq->aq", row, ai) @ g1
        v = np.einsum("bpq,q->bp", aj, g2 @ self.mps.boundary.b)
        return np.einsum("ap,bp->ab", w, v)

    def amplitudes(self) -> np.ndarray:
        return self._phi_from([seg.product for seg in self.segments])

    def weight(self) -> float:
        phi = self.amplitudes()
        return float(np.vdot(phi, phi).real)

    def trial_weight(self, p: int, new_s: int) -> tuple[float, np.ndarray]:
        si, t = self.where[p]
        products = [seg.product for seg in self.segments]
        products[si] = self.segments[si].trial(t, self.rotated[p][new_s])
        phi = self._phi_from(products)
        return float(np.vdot(phi, phi).real), phi

    def commit(self, p: int, new_s: int):
        si, t = self.where[p]
        self.segments[si].commit(t, self.rotated[p][new_s])
        self.outcome[p] = new_s


def _integrated_autocorr(series: np.ndarray) -> float:
    x = series - series.mean()
    var = float(x @ x) / len(x)
    if var <= 0:
        return 1.0
    tau = 1.0
    for lag in range(1, min(len(x) // 2, 1000)):
        c = float(x[:-lag] @ x[lag:]) / ((len(x) - lag) * var)
        if c < 0.0:
            break
        tau += 2.0 * c
        if lag > 10 * tau:
            break
    return tau


def le_monte_carlo(mps: MatrixProductState, n: int, i: int, j: int,
                   strategy: MeasurementStrategy, measure: str = "concurrence",
                   sweeps: int = 10000, burn_in: int | None = None,
                   seed: int = 0, chains: int = 1) -> LeEstimate:
    """Metropolis estimate of the average entanglement for a fixed strategy.

    Proposals pick a random measured site and shift its outcome by +-1 mod d
    (a spin flip for qubits), accepted with min(1, p_new/p_old); one sweep is
    one proposal per measured site, and the entanglement of the current
    conditional state is recorded once per sweep after burn-in (default 10%).
    The reported error is fluctuation/sqrt(samples); the integrated
    autocorrelation time of the series is attached alongside.
    """
    if burn_in is None:
        burn_in = max(1, sweeps // 10)
    seed_seq = np.random.SeedSequence(seed)
    all_samples = []
    for child in seed_seq.spawn(chains):
        rng = np.random.default_rng(child)
        sampler = _ChainSampler(mps, n, i, j, strategy)
        n_meas = len(sampler.sites)
        dmax = sampler.site_dim

        weight = 0.0
        for attempt in range(1000):
            outcome = [int(rng.integers(d)) for d in dmax]
            sampler.set_outcome(outcome)
            weight = sampler.weight()
            if weight > 1e-300:
                break
        else:
            raise ZeroProbabilityStart("no starting outcome with nonzero probability")

        samples = np.empty(sweeps)
        for sweep in range(burn_in + sweeps):
            for _ in range(n_meas):
                p = int(rng.integers(n_meas))
                d = dmax[p]
                step = 1 if (d == 2 or rng.integers(2) == 0) else -1
                new_s = (sampler.outcome[p] + step) % d
                w_new, _ = sampler.trial_weight(p, new_s)
                if w_new >= weight or rng.random() < w_new / weight:
                    sampler.commit(p, new_s)
                    weight = w_new
            if sweep >= burn_in:
                phi = sampler.amplitudes().reshape(-1)
                nrm = np.linalg.norm(phi)
                member = EnsembleMember(p=1.0, dims=sampler.pair_dims, pure=phi / nrm)
                samples[sweep - burn_in] = member_entanglement(member, measure)
        all_samples.append(samples)

    pooled = np.concatenate(all_samples)
    mean = float(pooled.mean())
    fluc = float(pooled.std())
    return LeEstimate(mean=mean, fluctuation=fluc,
                      std_error=fluc / math.sqrt(len(pooled)),
                      samples=len(pooled), measure=measure, strategy=strategy,
                      autocorr_time=_integrated_autocorr(pooled))


# ---------------------------------------------------------------------------
# Entanglement length
# ---------------------------------------------------------------------------


@dataclass
class FitResult:
    xi: float
    window: tuple[int, int]
    residual: float
    saturating: bool
    slope: float
    intercept: float


def entanglement_length_fit(samples, window: tuple[int, int] | None = None,
                            zero_tol: float = 1e-12,
                            saturation_slope: float = 1e-3) -> FitResult:
    """Entanglement length from a linear fit of -ln L against the distance n.

    ``samples`` is a sequence of (n, L).  A tail of zeros gives xi = 0; a tail
    slope below ``saturation_slope`` flags saturation (xi = inf).  The residual
    is the RMS deviation of -ln L from the fitted line.
    """
    pts = sorted((int(n), float(v)) for n, v in samples)
    if window is not None:
        pts = [(n, v) for n, v in pts if window[0] <= n <= window[1]]
    if not pts:
        raise InsufficientData("no points in the fit window")
    win = (pts[0][0], pts[-1][0])
    if all(v <= zero_tol for _, v in pts):
        return FitResult(xi=0.0, window=win, residual=0.0, saturating=False,
                         slope=math.inf, intercept=0.0)
    pos = [(n, v) for n, v in pts if v > zero_tol]
    if len(pos) < 3:
        raise InsufficientData(f"need at least 3 positive points, got {len(pos)}")
    ns = np.array([n for n, _ in pos], dtype=float)
    ys = -np.log([v for _, v in pos])
    a = np.vstack([np.ones_like(ns), ns]).T
    coef, *_ = np.linalg.lstsq(a, ys, rcond=None)
    resid = ys - a @ coef
    rms = float(np.sqrt(np.mean(resid ** 2)))
    slope = float(coef[1])
    if slope < saturation_slope:
        return FitResult(xi=math.inf, window=win, residual=rms, saturating=True,
                         slope=slope, intercept=float(coef[0]))
    return FitResult(xi=1.0 / slope, window=win, residual=rms, saturating=False,
                     slope=slope, intercept=float(coef[0]))


# ---------------------------------------------------------------------------
# Correlation witness: a measurement direction that cannot decrease |Q|
# ---------------------------------------------------------------------------

_M4 = np.kron(SY, SY).real


@dataclass
class WitnessResult:
    direction: np.ndarray      # Bloch vector of the measurement on site 3
    basis: np.ndarray          # the 2x2 measurement unitary (columns)
    gain: float                # average |Q| after measuring minus |Q| before
    used_fallback: bool


def _basis_from_angles(theta: float, phi: float) -> np.ndarray:
    return np.array(
        [[np.cos(theta / 2), -np.sin(theta / 2) * np.exp(-1j * phi)],
         [np.sin(theta / 2) * np.exp(1j * phi), np.cos(theta / 2)]], dtype=complex)


def _average_abs_q(rho: DensityOperator, s_a, s_b, basis: np.ndarray) -> float:
    m = rho.mat.reshape(4, 2, 4, 2)
    total = 0.0
    for o in range(2):
        v = basis[:, o]
        block = np.einsum("s,isjt,t->ij", v.conj(), m, v)
        p = float(np.trace(block).real)
        if p <= P_FLOOR:
            continue
        member = DensityOperator(block / p, SiteDims((2, 2)))
        total += p * abs(connected_correlation(member, 0, 1, s_a, s_b))
    return total


def _direction_to_basis(x_first: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """x = (cos t, sin t cos f, sin t sin f) -> measurement basis and Bloch vector."""
    theta = math.acos(min(1.0, max(-1.0, float(x_first[0]))))
    phi = math.atan2(float(x_first[2]), float(x_first[1]))
    bloch = np.array([math.sin(theta) * math.cos(phi),
                      math.sin(theta) * math.sin(phi),
                      math.cos(theta)])
    return _basis_from_angles(theta, phi), bloch


def nondecreasing_direction_witness(rho: DensityOperator, a, b) -> WitnessResult:
    """Measurement direction on the third qubit that does not decrease, on
    average, the connected correlation between qubits 1 and 2 along (a, b).

    The construction rotates (a, b) to the z axes, packs the diagonal data of
    the third-site blocks into a real 4x4 matrix R, forms
    S = R^T (sy x sy) R = [[alpha, beta^T], [beta, Q]], and picks the top
    eigenvector of  Q - beta c^T - c beta^T + alpha c c^T  (c holds the block
    traces).  When the construction degenerates (|alpha| ~ 0, singular R, or
    no nonnegative eigenvalue) a direct search over the direction sphere is
    used instead and flagged.
    """
    if rho.dims.dims != (2, 2, 2):
        raise DimMismatch("witness needs a three-qubit state")
    s_a = direction_observable(a)
    s_b = direction_observable(b)
    q0 = abs(connected_correlation(rho, 0, 1, s_a, s_b))

    # rotate a.sigma -> sigma_z on both tracked sites
    def z_rotation(direction):
        wval, wvec = np.linalg.eigh(direction_observable(direction))
        # columns ordered (+1, -1) so U sz U^dag = a.sigma
        return wvec[:, ::-1]

    rot = rho.apply_site_unitary(0, z_rotation(a).conj().T)
    rot = rot.apply_site_unitary(1, z_rotation(b).conj().T)

    m = rot.mat
    rho1 = m[0::2, 0::2]
    rho2 = m[1::2, 1::2]
    sig = m[0::2, 1::2]
    r = np.column_stack([
        np.diag(rho1 + rho2).real,
        np.diag(rho1 - rho2).real,
        np.diag(sig + sig.conj().T).real,
        np.diag(1j * (sig - sig.conj().T)).real,
    ])
    s_mat = r.T @ _M4 @ r
    alpha = s_mat[0, 0]
    fallback = False
    direction_first = None
    if abs(alpha) >= 1e-12:
        # x^T M x >= 0 is sufficient for a nondecreasing direction x whatever
        # the rank of R; nonsingular R only guarantees the eigenvalue exists
        if alpha < 0:
            s_mat = -s_mat
            alpha = -alpha
        beta = s_mat[1:, 0]
        qq = s_mat[1:, 1:]
        c = r[:, 1:].sum(axis=0)
        mat = qq - np.outer(beta, c) - np.outer(c, beta) + alpha * np.outer(c, c)
        w, v = np.linalg.eigh(mat)
        if w[-1] >= -1e-10:
            direction_first = v[:, -1]

    if direction_first is None:
        # degenerate construction (|Q| ~ 0 or no nonnegative eigenvalue):
        # search the direction sphere directly
        fallback = True

        def neg_avg(angles):
            return -_average_abs_q(rho, s_a, s_b, _basis_from_angles(*angles))

        best = (np.inf, (0.0, 0.0))
        for theta in np.linspace(0, np.pi, 13):
            for phi in np.linspace(0, 2 * np.pi, 24, endpoint=False):
                val = neg_avg((theta, phi))
                if val < best[0]:
                    best = (val, (theta, phi))
        res = scipy.optimize.minimize(neg_avg, best[1], method="Nelder-Mead",
                                      options={"fatol": 1e-12, "xatol": 1e-8})
        theta, phi = res.x
        direction_first = np.array([np.cos(theta), np.sin(theta) * np.cos(phi),
                                    np.sin(theta) * np.sin(phi)])

    basis, bloch = _direction_to_basis(direction_first)
    gain = _average_abs_q(rho, s_a, s_b, basis) - q0
    return WitnessResult(direction=bloch, basis=basis, gain=float(gain),
                         used_fallback=fallback)


# ---------------------------------------------------------------------------
# Thermal states
# ---------------------------------------------------------------------------


def le_thermal_exact(hamiltonian, temperature: float, i: int, j: int,
                     strategy: MeasurementStrategy | None = None,
                     measure: str = "negativity",
                     optimize: bool = False,
                     options: OptimizeOptions | None = None) -> LeEstimate:
    """Average entanglement of the thermal state at temperature T.

    The ensemble members are the normalized diagonal blocks <s|rho|s> with
    probabilities tr<s|rho|s>.  A fixed strategy may be supplied; with
    ``optimize`` the basis is searched as for pure states.
    """
    from .hilbert import gibbs_state

    rho = gibbs_state(hamiltonian, temperature)
    if optimize:
        return optimize_le(rho, i, j, measure, options)
    if strategy is None:
        strategy = standard_strategy(rho.dims, i, j)
    ens = measurement_ensemble(rho, i, j, strategy)
    return average_entanglement(ens, measure, strategy)
