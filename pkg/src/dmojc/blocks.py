"""Block Hamiltonians on invariant subspaces, their spectra and the DMO/JCM map.

Simple subspaces use the ket order ``[|+, n-1>, |-, n>]`` so that the
detuning appears with a plus sign in the top-left entry.  Extended subspaces
use the order of :func:`dmojc.qnums.basis_extended`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateInputError, DomainError, UsageError
from .jacobi import jacobi_eigh
from .qnums import (
    BasisKet,
    BranchD3,
    Dimensionality,
    LabeledState,
    ModelSpec,
    SubspaceBasis,
    basis_extended,
    basis_simple,
    ladder_coefficient,
    mu,
    radial_to_chain,
)


@dataclass(frozen=True, eq=False)
class HermitianBlock:
    basis: SubspaceBasis
    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        h = np.array(self.entries, dtype=complex)
        k = len(self.basis)
        if h.shape != (k, k):
            raise UsageError(f"block of shape {h.shape} does not match {k} kets")
        if not np.array_equal(h, h.conj().T):
            raise UsageError("block entries are not Hermitian")
        h.setflags(write=False)
        object.__setattr__(self, "entries", h)

    @property
    def size(self) -> int:
        return len(self.basis)


@dataclass(frozen=True, eq=False)
class EigenSystem:
    values: np.ndarray
    vectors: np.ndarray


@dataclass(frozen=True)
class MappingReport:
    dim: Dimensionality
    omega_equivalent: float
    delta_equivalent: float
    exact: bool
    notes: str = ""
    branch: BranchD3 | None = None


def jc_block(omega: float, delta: float, n_excitations: int) -> HermitianBlock:
    """Jaynes-Cummings block ``[[delta, omega*sqrt(n)], [omega*sqrt(n), -delta]]``."""
    n = int(n_excitations)
    if n != n_excitations or n < 0:
        raise DomainError(f"excitation number must be a non-negative integer, got {n_excitations!r}")
    if n == 0:
        return HermitianBlock(SubspaceBasis(-0.5, (BasisKet(-1, 0),)), [[-delta]])
    basis = SubspaceBasis(n - 0.5, (BasisKet(+1, n - 1), BasisKet(-1, n)))
    g = omega * math.sqrt(n)
    return HermitianBlock(basis, [[delta, g], [g, -delta]])


def _chain_index(spec: ModelSpec, index: int) -> int:
    # D3 blocks are addressed by the radial quantum number on spec.branch
    if int(index) != index or index < 0:
        raise DomainError(f"block index must be a non-negative integer, got {index!r}")
    if spec.dim is Dimensionality.D3:
        return radial_to_chain(int(index), spec.branch)
    return int(index)


def dmo_block(spec: ModelSpec, N: int) -> HermitianBlock:
    """Dirac-Moshinsky block ``[[mc2, eta*sqrt(mu)], [eta*sqrt(mu), -mc2]]``.

    ``N`` is the oscillator quantum number for 1+1 and 2+1 (``n``, ``n_r``).
    For 3+1 it is the radial number ``n`` on ``spec.branch``, so that
    ``mu = 2n`` (infinite branch) or ``2n + 2j + 2`` (finite branch).
    """
    if spec.extended:
        raise UsageError("dmo_block needs a single-isospin model")
    return simple_block(spec, _chain_index(spec, N))


def simple_block(spec: ModelSpec, osc: int) -> HermitianBlock:
    """Single-isospin block on ``[|+, osc-1>, |-, osc>]`` addressed by chain index."""
    if spec.extended:
        raise UsageError("simple_block needs a single-isospin model")
    basis = basis_simple(spec, osc)
    if osc == 0:
        return HermitianBlock(basis, [[-spec.mc2]])
    if spec.dim is Dimensionality.D2:
        # grouped as (sqrt(2) eta) sqrt(n) so the block equals the mapped JC block bit for bit
        g = (math.sqrt(2.0) * spec.eta) * math.sqrt(osc)
    else:
        g = spec.eta * ladder_coefficient(spec, osc)
    return HermitianBlock(basis, [[spec.mc2, g], [g, -spec.mc2]])


def extended_block(spec: ModelSpec, invariant_value: int) -> HermitianBlock:
    """Block of the two-isospin Hamiltonian on the subspace ``I = invariant_value``.

    Diagonal entries are ``mc2*s1 + gamma*s2`` for ket signs ``(s1, s2)``; the
    first isospin couples to the chain with ``eta``, the second with ``chi``.
    """
    basis = basis_extended(spec, invariant_value)
    kets = basis.kets
    k = len(kets)
    h = np.zeros((k, k))
    for a, ket in enumerate(kets):
        h[a, a] = spec.mc2 * ket.iso1 + spec.gamma * ket.iso2
    for a in range(k):
        for b in range(a + 1, k):
            lo, hi = kets[a], kets[b]
            if hi.osc == lo.osc - 1:
                lo, hi = hi, lo
            if lo.osc != hi.osc - 1:
                continue
            # lo has one quantum less: exactly one isospin went - -> +
            if lo.iso1 == +1 and hi.iso1 == -1 and lo.iso2 == hi.iso2:
                coupling = spec.eta
            elif lo.iso2 == +1 and hi.iso2 == -1 and lo.iso1 == hi.iso1:
                coupling = spec.chi
            else:
                continue
            h[a, b] = h[b, a] = coupling * ladder_coefficient(spec, hi.osc)
    return HermitianBlock(basis, h)


def eig_block(block: HermitianBlock) -> EigenSystem:
    values, vectors = jacobi_eigh(block.entries)
    values.setflags(write=False)
    vectors.setflags(write=False)
    return EigenSystem(values, vectors)


def analytic_energies(spec: ModelSpec, N: int) -> tuple[float, float]:
    """``(-E, +E)`` with ``E = sqrt(mc2**2 + eta**2 * mu(N))``."""
    if spec.extended:
        raise UsageError("analytic_energies needs a single-isospin model")
    osc = _chain_index(spec, N)
    if spec.dim is Dimensionality.D3:
        coupling_sq = mu(int(N), spec.j, spec.branch)
    elif spec.dim is Dimensionality.D2:
        coupling_sq = 2.0 * osc
    else:
        coupling_sq = float(osc)
    e = math.sqrt(spec.mc2**2 + spec.eta**2 * coupling_sq)
    return -e, e


def jc_energies(omega: float, delta: float, n_excitations: int) -> tuple[float, float]:
    if n_excitations < 0:
        raise DomainError("excitation number must be non-negative")
    e = math.sqrt(delta**2 + omega**2 * n_excitations)
    return -e, e


def mixing_angle(omega: float, delta: float, n_excitations: int) -> float:
    """Dressed-state angle with ``tan(theta) = sqrt((E - delta) / (E + delta))``."""
    g = omega * math.sqrt(n_excitations)
    if g == 0.0 and delta == 0.0:
        raise DegenerateInputError("dressed states are undefined when E = 0")
    # half-angle form: equal to the arctan expression for g >= 0, and keeps the
    # eigenvector property for g < 0
    return 0.5 * math.atan2(g, delta)


def dressed_states(
    omega: float, delta: float, n_excitations: int
) -> tuple[LabeledState, LabeledState]:
    """``(|phi_+>, |phi_->)`` on the basis ``[|+, n-1>, |-, n>]``."""
    if int(n_excitations) != n_excitations or n_excitations < 1:
        raise DomainError("dressed states need n_excitations >= 1")
    theta = mixing_angle(omega, delta, n_excitations)
    basis = jc_block(omega, delta, n_excitations).basis
    c, s = math.cos(theta), math.sin(theta)
    return LabeledState(basis, [c, s]), LabeledState(basis, [-s, c])


def parameter_mapping(spec: ModelSpec) -> MappingReport:
    """JCM parameters ``(Omega, delta)`` reproducing the single-isospin DMO blocks."""
    if spec.extended:
        raise UsageError("parameter_mapping needs a single-isospin model")
    if spec.dim is Dimensionality.D1:
        return MappingReport(spec.dim, spec.eta, spec.mc2, True,
                             "Omega = eta = sqrt(2 mc2 hbar omega); isospin <-> atom, x-mode <-> cavity")
    if spec.dim is Dimensionality.D2:
        return MappingReport(spec.dim, math.sqrt(2.0) * spec.eta, spec.mc2, True,
                             "Omega = sqrt(2) eta = 2 sqrt(mc2 hbar omega); "
                             "left-chiral sector inert (infinitely degenerate in n_l)")
    if spec.branch is BranchD3.INFINITE:
        return MappingReport(spec.dim, math.sqrt(2.0) * spec.eta, spec.mc2, True,
                             "Omega = sqrt(2) eta with cavity number = radial n; "
                             "energies independent of j", spec.branch)
    return MappingReport(spec.dim, spec.eta, spec.mc2, False,
                         "mu = 2n + 2j + 2 is not linear in a photon number; only one "
                         "block at a time matches, via eta*sqrt(2n+2j+2) = Omega*sqrt(n_cav) "
                         "with Omega = eta and n_cav = 2n + 2j + 2", spec.branch)
