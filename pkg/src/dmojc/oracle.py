"""Brute-force reference: dense Hamiltonians on the truncated product space.

The dense matrix is assembled directly from the isospin raising/lowering
operators and the chain ladder, without any knowledge of invariant subspaces,
and diagonalized with LAPACK.  Block results are checked against it.
"""

from __future__ import annotations

import warnings
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable

import numpy as np
import scipy.linalg

from .blocks import HermitianBlock, eig_block, extended_block, simple_block
from .dynamics import initial_atomic_state, propagate_many
from .entanglement import ATOM_ORDER, FIELD_ORDER
from .errors import UsageError
from .qnums import BasisKet, LabeledState, ModelSpec, SubspaceBasis, invariant_of, ladder_coefficient

STATE_TOL = 1e-10
SPECTRAL_TOL = 1e-10
INVARIANT_TOL = 1e-12


class TruncationWarning(UserWarning):
    """Initial state reaches the top of the truncated chain."""


@dataclass(frozen=True, eq=False)
class FullSpace:
    spec: ModelSpec
    nmax: int
    kets: tuple[BasisKet, ...]
    index: dict = field(repr=False)

    @property
    def dimension(self) -> int:
        return len(self.kets)

    def invariant_diagonal(self) -> np.ndarray:
        return np.array([invariant_of(k) for k in self.kets])

    def embed(self, state: LabeledState) -> np.ndarray:
        psi = np.zeros(self.dimension, dtype=complex)
        for ket, amp in zip(state.basis.kets, state.amplitudes):
            psi[self.index[ket]] = amp
        return psi


def full_space(spec: ModelSpec, nmax: int) -> FullSpace:
    if int(nmax) != nmax or nmax < 1:
        raise UsageError(f"nmax must be an integer >= 1, got {nmax!r}")
    nmax = int(nmax)
    signs = (-1, +1)
    if spec.extended:
        kets = tuple(BasisKet(s1, k, s2) for s1 in signs for s2 in signs for k in range(nmax + 1))
    else:
        kets = tuple(BasisKet(s1, k) for s1 in signs for k in range(nmax + 1))
    return FullSpace(spec, nmax, kets, {k: i for i, k in enumerate(kets)})


def build_full(spec: ModelSpec, nmax: int) -> tuple[FullSpace, np.ndarray]:
    """Dense ``H`` for ``eta(s-A^+ + s+A) + chi(s'-A^+ + s'+A) + mc2 s_z + gamma s'_z``."""
    space = full_space(spec, nmax)
    dim = space.dimension
    h = np.zeros((dim, dim))
    for i, ket in enumerate(space.kets):
        h[i, i] = spec.mc2 * ket.iso1 + (spec.gamma * ket.iso2 if ket.iso2 is not None else 0.0)
    for i, ket in enumerate(space.kets):
        if ket.osc == 0:
            continue
        f = ladder_coefficient(spec, ket.osc)
        # sigma_+ A: |-, k> -> f(k) |+, k-1>
        if ket.iso1 == -1:
            j = space.index[BasisKet(+1, ket.osc - 1, ket.iso2)]
            h[j, i] += spec.eta * f
            h[i, j] += spec.eta * f
        if ket.iso2 == -1:
            j = space.index[BasisKet(ket.iso1, ket.osc - 1, +1)]
            h[j, i] += spec.chi * f
            h[i, j] += spec.chi * f
    return space, h


@dataclass(frozen=True, eq=False)
class FullTrajectory:
    times: np.ndarray
    states: np.ndarray
    edge_warning: bool


def evolve_full(space: FullSpace, h: np.ndarray, psi0, times) -> FullTrajectory:
    """``exp(-iHt) psi0`` on every time in ``times`` by full diagonalization.

    A non-Hermitian ``h`` is exponentiated directly so that negative controls
    can be run through the same path.
    """
    psi0 = np.asarray(psi0, dtype=complex)
    if abs(np.linalg.norm(psi0) - 1.0) > 1e-12:
        raise UsageError("initial state is not normalized")
    times = np.atleast_1d(np.asarray(times, dtype=float))
    osc = np.array([k.osc for k in space.kets])
    edge = bool(np.any(np.abs(psi0[osc >= space.nmax - 1]) > 0))
    if edge:
        warnings.warn("initial state has support on the top two chain levels", TruncationWarning)
    if np.array_equal(h, h.conj().T):
        w, v = np.linalg.eigh(h)
        overlaps = v.conj().T @ psi0
        states = (np.exp(-1j * np.outer(times, w)) * overlaps) @ v.T
    else:
        states = np.array([scipy.linalg.expm(-1j * h * t) @ psi0 for t in times])
    states[times == 0] = psi0
    return FullTrajectory(times, states, edge)


def invariant_moments(space: FullSpace, states: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Mean and variance of ``I`` for each state (rows of ``states``)."""
    probs = np.abs(np.atleast_2d(states)) ** 2
    probs = probs / probs.sum(axis=1, keepdims=True)
    diag = space.invariant_diagonal()
    mean = probs @ diag
    var = probs @ diag**2 - mean**2
    return mean, var


def check_invariant(space: FullSpace, trajectory: FullTrajectory) -> float:
    mean, _ = invariant_moments(space, trajectory.states)
    return float(np.max(np.abs(mean - mean[0])))


def check_invariant_variance(space: FullSpace, trajectory: FullTrajectory) -> float:
    _, var = invariant_moments(space, trajectory.states)
    return float(np.max(np.abs(var - var[0])))


def full_field_density(space: FullSpace, psi: np.ndarray) -> np.ndarray:
    """Second-isospin density matrix in ``(+', -')`` order."""
    m = space.nmax + 1
    t = np.asarray(psi).reshape(2, 2, m)  # (iso1, iso2, osc) with index 0 = '-'
    rho = np.einsum("abk,ack->bc", t, t.conj())
    order = [1 if s > 0 else 0 for s in FIELD_ORDER]
    return rho[np.ix_(order, order)]


def full_atom_density(space: FullSpace, psi: np.ndarray) -> np.ndarray:
    """Two-isospin density matrix in ``(--, +-, -+, ++)`` order."""
    m = space.nmax + 1
    t = np.asarray(psi).reshape(4, m)
    rho = t @ t.conj().T
    order = [(2 if s1 > 0 else 0) + (1 if s2 > 0 else 0) for s1, s2 in ATOM_ORDER]
    return rho[np.ix_(order, order)]


def full_oscillator_density(space: FullSpace, psi: np.ndarray) -> np.ndarray:
    t = np.asarray(psi).reshape(-1, space.nmax + 1)
    return t.T @ t.conj()


@dataclass
class Check:
    name: str
    value: float
    tolerance: float
    passed: bool = field(init=False)

    def __post_init__(self):
        self.value = float(self.value)
        self.passed = bool(self.value <= self.tolerance)


@dataclass
class ValidationReport:
    label: str
    max_state_error: float
    max_spectral_error: float
    invariant_drift: float
    variance_drift: float
    edge_warning: bool
    checks: list[Check]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        return d


def _truncated(block: HermitianBlock, nmax: int) -> HermitianBlock | None:
    keep = [i for i, k in enumerate(block.basis.kets) if k.osc <= nmax]
    if not keep:
        return None
    if len(keep) == block.size:
        return block
    basis = SubspaceBasis(block.basis.invariant_value, tuple(block.basis.kets[i] for i in keep))
    return HermitianBlock(basis, block.entries[np.ix_(keep, keep)])


BlockBuilder = Callable[[ModelSpec, int], HermitianBlock]


def block_for(spec: ModelSpec, basis_value: float, builder: BlockBuilder | None = None) -> HermitianBlock:
    """Block on the subspace with excitation number ``basis_value``."""
    if spec.extended:
        return (builder or extended_block)(spec, int(basis_value))
    return (builder or simple_block)(spec, int(basis_value + 0.5))


def all_block_eigenvalues(spec: ModelSpec, nmax: int, builder: BlockBuilder | None = None) -> np.ndarray:
    """Union of block spectra covering the truncated space, edge blocks truncated."""
    values = []
    lo, hi = (-1, nmax + 1) if spec.extended else (-0.5, nmax + 0.5)
    inv = lo
    while inv <= hi:
        block = _truncated(block_for(spec, inv, builder), nmax)
        if block is not None:
            values.extend(eig_block(block).values)
        inv += 1
    return np.sort(np.array(values))


def compare_block_vs_full(
    spec: ModelSpec,
    t_grid: Iterable[float],
    nmax: int,
    alpha: float | None = None,
    psi0: LabeledState | None = None,
    builder: BlockBuilder | None = None,
    label: str = "block-vs-full",
) -> ValidationReport:
    """Differential check of block propagation and spectra against the dense oracle.

    Give either ``alpha`` (two-isospin model, ``I = 0`` initial state) or an
    explicit block state ``psi0``.
    """
    times = np.asarray(list(t_grid), dtype=float)
    if psi0 is None:
        if alpha is None:
            raise UsageError("compare_block_vs_full needs alpha or psi0")
        psi0 = initial_atomic_state(spec, alpha)
    block = block_for(spec, psi0.basis.invariant_value, builder)
    if block.basis != psi0.basis:
        raise UsageError("builder returned a block on a different basis")

    space, h = build_full(spec, nmax)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        traj = evolve_full(space, h, space.embed(psi0), times)
    block_amps = propagate_many(block, psi0, times)
    embedded = np.zeros_like(traj.states)
    cols = [space.index[k] for k in psi0.basis.kets]
    embedded[:, cols] = block_amps
    state_err = float(np.max(np.abs(embedded - traj.states))) if len(times) else 0.0

    block_vals = all_block_eigenvalues(spec, nmax, builder)
    full_vals = np.linalg.eigvalsh(h)
    if block_vals.shape != full_vals.shape:
        spectral_err = float("inf")
    else:
        spectral_err = float(np.max(np.abs(block_vals - full_vals)))

    drift = check_invariant(space, traj)
    var_drift = check_invariant_variance(space, traj)
    checks = [
        Check(f"{label}:state", state_err, STATE_TOL),
        Check(f"{label}:spectrum", spectral_err, SPECTRAL_TOL),
        Check(f"{label}:invariant-drift", drift, INVARIANT_TOL),
        Check(f"{label}:invariant-variance-drift", var_drift, INVARIANT_TOL),
    ]
    return ValidationReport(label, state_err, spectral_err, drift, var_drift, traj.edge_warning, checks)
