"""Quantum-number bookkeeping.

Every model in the package is a two-level system (optionally two of them)
coupled to a single bosonic chain through a ladder operator ``A`` with
``A|k> = f(k)|k-1>``.  The chain index ``osc`` is

* ``n`` for the 1+1 oscillator,
* ``n_r`` (right-chiral quanta) for the 2+1 oscillator,
* ``N - N_min`` for the 3+1 oscillator, where ``N_min = j - 1/2``.

The excitation number ``I = A^dagger A + (sigma_z + sigma_z')/2`` is conserved,
so every invariant subspace is spanned by a handful of labeled kets.  Values of
``I`` are reported relative to the chain bottom (``osc = 0``).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import DomainError, UsageError


class Dimensionality(enum.Enum):
    D1 = 1
    D2 = 2
    D3 = 3


class BranchD3(enum.Enum):
    """Parity family of the 3+1 oscillator number ``N`` relative to ``j``.

    ``FINITE``   : N = 2n + j + 1/2, mu = 2n + 2j + 2 (degeneracy 2j+1)
    ``INFINITE`` : N = 2n + j - 1/2, mu = 2n (energies independent of j)
    """

    FINITE = "finite"
    INFINITE = "infinite"


def _check_half_integer(j: float) -> None:
    twice = 2 * Fraction(j).limit_denominator(1000)
    if twice.denominator != 1 or twice.numerator < 1 or twice.numerator % 2 == 0:
        raise DomainError(f"j must be a positive half-integer, got {j!r}")
    if abs(float(twice) - 2 * j) > 1e-12:
        raise DomainError(f"j must be a positive half-integer, got {j!r}")


@dataclass(frozen=True)
class ModelSpec:
    """Which Hamiltonian is being simulated.

    ``mc2`` is the rest energy (detuning of the first two-level system) and
    ``gamma`` the splitting of the second one.  ``hbar = 1`` throughout, all
    energies share one arbitrary unit and time is measured in its inverse.
    """

    dim: Dimensionality = Dimensionality.D1
    eta: float = 1.0
    chi: float = 0.0
    mc2: float = 0.0
    gamma: float = 0.0
    j: float | None = None
    branch: BranchD3 | None = None
    extended: bool = False

    def __post_init__(self):
        if not isinstance(self.dim, Dimensionality):
            object.__setattr__(self, "dim", Dimensionality(self.dim))
        if self.branch is not None and not isinstance(self.branch, BranchD3):
            object.__setattr__(self, "branch", BranchD3(self.branch))
        for name in ("eta", "chi", "mc2", "gamma"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise DomainError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)
        if self.eta < 0 or self.chi < 0:
            raise DomainError("couplings eta and chi must be non-negative")
        if not self.extended and self.chi != 0.0:
            raise UsageError("chi must be 0 for the single-isospin model")
        if self.dim is Dimensionality.D3:
            if self.j is None:
                raise UsageError("the 3+1 model needs an angular momentum j")
            _check_half_integer(self.j)
            object.__setattr__(self, "j", float(self.j))
            if self.branch is None:
                object.__setattr__(self, "branch", BranchD3.INFINITE)

    @property
    def n_min(self) -> float:
        """Lowest physical oscillator number of the chain (0 except for D3)."""
        if self.dim is Dimensionality.D3:
            return self.j - 0.5
        return 0.0


Sign = int  # +1 or -1


@dataclass(frozen=True, order=True)
class BasisKet:
    iso1: Sign
    osc: int
    iso2: Sign | None = None

    def __post_init__(self):
        if self.iso1 not in (-1, 1) or self.iso2 not in (None, -1, 1):
            raise DomainError(f"isospin labels must be +1 or -1: {self!r}")
        if self.osc < 0:
            raise DomainError(f"oscillator index must be >= 0, got {self.osc}")

    @property
    def extended(self) -> bool:
        return self.iso2 is not None

    def label(self) -> str:
        s = "+" if self.iso1 > 0 else "-"
        if self.iso2 is not None:
            s += ",+'" if self.iso2 > 0 else ",-'"
        return f"|{s},{self.osc}>"


@dataclass(frozen=True)
class SubspaceBasis:
    invariant_value: float
    kets: tuple[BasisKet, ...]

    def __post_init__(self):
        object.__setattr__(self, "kets", tuple(self.kets))
        for ket in self.kets:
            if invariant_of(ket) != self.invariant_value:
                raise DomainError(
                    f"{ket.label()} has I={invariant_of(ket)}, "
                    f"expected {self.invariant_value}"
                )

    def __len__(self) -> int:
        return len(self.kets)

    def index(self, ket: BasisKet) -> int:
        return self.kets.index(ket)

    def labels(self) -> list[str]:
        return [k.label() for k in self.kets]


@dataclass(frozen=True, eq=False)
class LabeledState:
    """Normalized amplitude vector over the kets of one invariant subspace."""

    basis: SubspaceBasis
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex)
        if amps.shape != (len(self.basis),):
            raise UsageError(
                f"expected {len(self.basis)} amplitudes, got shape {amps.shape}"
            )
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > 1e-12:
            raise DomainError(f"state is not normalized (norm={norm!r})")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    def amplitude(self, ket: BasisKet) -> complex:
        return complex(self.amplitudes[self.basis.index(ket)])


def mu(n: int, j: float, branch: BranchD3) -> float:
    """Squared matrix element of ``s.a`` between neighbouring 3+1 oscillator states.

    Returns the linear value (``2n`` or ``2n + 2j + 2``); the square root is
    taken once, where the matrix element is built.
    """
    if int(n) != n or n < 0:
        raise DomainError(f"radial quantum number must be a non-negative integer, got {n!r}")
    _check_half_integer(j)
    branch = BranchD3(branch)
    if branch is BranchD3.FINITE:
        return 2.0 * n + 2.0 * j + 2.0
    return 2.0 * n


def radial_to_chain(n: int, branch: BranchD3) -> int:
    """Chain index ``N - N_min`` of the 3+1 state with radial number ``n``."""
    if int(n) != n or n < 0:
        raise DomainError(f"radial quantum number must be a non-negative integer, got {n!r}")
    return 2 * int(n) + (1 if BranchD3(branch) is BranchD3.FINITE else 0)


def chain_to_radial(osc: int) -> tuple[int, BranchD3]:
    """Inverse of :func:`radial_to_chain`.

    Along the chain the parity class of ``N`` alternates: ``N_min`` itself
    belongs to the infinitely degenerate family (n = 0), ``N_min + 1`` to the
    finite one, and so on.
    """
    if osc < 0:
        raise DomainError(f"chain index must be >= 0, got {osc}")
    if osc % 2 == 0:
        return osc // 2, BranchD3.INFINITE
    return (osc - 1) // 2, BranchD3.FINITE


def ladder_coefficient(spec: ModelSpec, osc_upper: int) -> float:
    """Matrix element ``f(k)`` of ``A`` between chain states ``k-1`` and ``k``."""
    if int(osc_upper) != osc_upper or osc_upper < 1:
        raise DomainError(f"osc_upper must be an integer >= 1, got {osc_upper!r}")
    k = int(osc_upper)
    if spec.dim is Dimensionality.D1:
        return math.sqrt(k)
    if spec.dim is Dimensionality.D2:
        return math.sqrt(2.0) * math.sqrt(k)
    n, branch = chain_to_radial(k)
    return math.sqrt(mu(n, spec.j, branch))


def invariant_of(ket: BasisKet) -> float:
    value = ket.osc + 0.5 * ket.iso1
    if ket.iso2 is not None:
        value += 0.5 * ket.iso2
    return value


def basis_simple(spec: ModelSpec, n_excitations: int) -> SubspaceBasis:
    """Invariant subspace ``[|+, n-1>, |-, n>]`` of the single-isospin model."""
    if spec.extended:
        raise UsageError("basis_simple needs a single-isospin model")
    if int(n_excitations) != n_excitations or n_excitations < 0:
        raise DomainError(f"excitation number must be a non-negative integer, got {n_excitations!r}")
    n = int(n_excitations)
    if n == 0:
        return SubspaceBasis(-0.5, (BasisKet(-1, 0),))
    return SubspaceBasis(n - 0.5, (BasisKet(+1, n - 1), BasisKet(-1, n)))


def basis_extended(spec: ModelSpec, invariant_value: int) -> SubspaceBasis:
    """Invariant subspace of the two-isospin model, in the order

    ``|-,-',N+1>, |+,-',N>, |-,+',N>, |+,+',N-1>``

    with kets of negative oscillator index dropped.
    """
    if not spec.extended:
        raise UsageError("basis_extended needs the two-isospin model")
    if int(invariant_value) != invariant_value:
        raise DomainError(f"invariant value must be an integer, got {invariant_value!r}")
    big_n = int(invariant_value)
    if big_n < -1:
        raise DomainError(f"no kets have I = {big_n}")
    candidates = [
        (-1, -1, big_n + 1),
        (+1, -1, big_n),
        (-1, +1, big_n),
        (+1, +1, big_n - 1),
    ]
    kets = tuple(BasisKet(s1, k, s2) for s1, s2, k in candidates if k >= 0)
    return SubspaceBasis(float(big_n), kets)
