"""Exact evolution inside invariant subspaces and the closed-form populations.

The closed forms hold for the two-isospin model on the ``I = 0`` subspace with
equal effective couplings ``eta*f(1) = chi*f(1) = 1`` and ``mc2 = gamma``.
There the three populations are

    |c1|^2 = f_alpha(t)
    |c2|^2 = (1 - f_alpha(t) - g(t) cos 2a) / 2
    |c3|^2 = (1 - f_alpha(t) + g(t) cos 2a) / 2

with ``f_alpha = (1 + sin 2a) sin^2(gt t) / gt^2``, ``gt = sqrt(gamma^2 + 2)``
and ``g`` the two-frequency cosine sum of :class:`AnalyticKernel`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .blocks import EigenSystem, HermitianBlock, eig_block, extended_block
from .errors import UsageError
from .qnums import LabeledState, ModelSpec, basis_extended, ladder_coefficient

CONTRACT_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class CoefficientSet:
    t: float
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex)
        norm_sq = float(np.sum(np.abs(amps) ** 2))
        if abs(norm_sq - 1.0) > 1e-10:
            raise UsageError(f"coefficients are not normalized (sum |c|^2 = {norm_sq!r})")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def c1(self) -> complex:
        return complex(self.amplitudes[0])

    @property
    def c2(self) -> complex:
        return complex(self.amplitudes[1])

    @property
    def c3(self) -> complex:
        return complex(self.amplitudes[2])

    @property
    def c4(self) -> complex | None:
        return complex(self.amplitudes[3]) if len(self.amplitudes) > 3 else None

    def populations(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


def _spectral_data(block: HermitianBlock, eigensystem: EigenSystem | None):
    es = eigensystem if eigensystem is not None else eig_block(block)
    return es.values, es.vectors


def propagate(
    block: HermitianBlock,
    initial: LabeledState,
    t: float,
    eigensystem: EigenSystem | None = None,
) -> LabeledState:
    """``exp(-i H t)`` applied to ``initial`` through the block's eigenbasis."""
    if initial.basis != block.basis:
        raise UsageError("initial state and block live on different subspaces")
    if not math.isfinite(t):
        raise UsageError(f"time must be finite, got {t!r}")
    if t == 0:
        return initial
    return LabeledState(block.basis, _evolve(block, initial, np.array([t]), eigensystem)[0])


def _evolve(block, initial, times, eigensystem=None) -> np.ndarray:
    values, vectors = _spectral_data(block, eigensystem)
    overlaps = vectors.conj().T @ initial.amplitudes
    phases = np.exp(-1j * np.outer(times, values))
    out = (phases * overlaps) @ vectors.T
    out[np.asarray(times) == 0] = initial.amplitudes
    return out


def propagate_many(
    block: HermitianBlock, initial: LabeledState, times: Iterable[float]
) -> np.ndarray:
    """Amplitude array of shape ``(len(times), k)``; rows ordered as ``times``."""
    if initial.basis != block.basis:
        raise UsageError("initial state and block live on different subspaces")
    times = np.asarray(list(times), dtype=float)
    if not np.all(np.isfinite(times)):
        raise UsageError("times must be finite")
    return _evolve(block, initial, times)


def initial_atomic_state(spec: ModelSpec, alpha: float) -> LabeledState:
    """``(cos a |-,+'> + sin a |+,-'>) |0>`` on the ``I = 0`` subspace."""
    basis = basis_extended(spec, 0)
    return LabeledState(basis, [0.0, math.sin(alpha), math.cos(alpha)])


def evolve_extended(spec: ModelSpec, alpha: float, t_grid: Iterable[float]) -> list[CoefficientSet]:
    if not spec.extended:
        raise UsageError("evolve_extended needs the two-isospin model")
    times = np.asarray(list(t_grid), dtype=float)
    block = extended_block(spec, 0)
    amps = propagate_many(block, initial_atomic_state(spec, alpha), times)
    return [CoefficientSet(float(t), a) for t, a in zip(times, amps)]


def check_analytic_contract(spec: ModelSpec) -> None:
    """Raise :class:`UsageError` unless the closed forms apply to ``spec``."""
    if not spec.extended:
        raise UsageError("closed forms describe the two-isospin model")
    f1 = ladder_coefficient(spec, 1)
    problems = []
    if abs(spec.eta * f1 - 1.0) > CONTRACT_TOL:
        problems.append(f"eta*f(1) = {spec.eta * f1!r} != 1")
    if abs(spec.chi * f1 - 1.0) > CONTRACT_TOL:
        problems.append(f"chi*f(1) = {spec.chi * f1!r} != 1")
    if abs(spec.mc2 - spec.gamma) > CONTRACT_TOL:
        problems.append(f"mc2 = {spec.mc2!r} != gamma = {spec.gamma!r}")
    if problems:
        raise UsageError("closed forms need " + "; ".join(problems))


def analytic_contract_holds(spec: ModelSpec) -> bool:
    try:
        check_analytic_contract(spec)
    except UsageError:
        return False
    return True


@dataclass(frozen=True)
class AnalyticKernel:
    gamma: float

    @property
    def gamma_tilde(self) -> float:
        return math.sqrt(self.gamma**2 + 2.0)

    def f0(self, t):
        gt = self.gamma_tilde
        return np.sin(gt * np.asarray(t, dtype=float)) ** 2 / gt**2

    def g(self, t):
        gm, gt = self.gamma, self.gamma_tilde
        t = np.asarray(t, dtype=float)
        slow = (gm + gt) / (2 * gt)
        # 1/(gt (gm + gt)) == 1 - slow identically; the subtraction is exact
        # (slow lies in [1/2, 1)) and keeps g(0) == 1 in floating point
        fast = 1.0 - slow
        return slow * np.cos((gt - gm) * t) + fast * np.cos((gt + gm) * t)

    def g_printed(self, t):
        """``g`` with the fast amplitude written as ``1 / (gt (gamma + gt))``."""
        gm, gt = self.gamma, self.gamma_tilde
        t = np.asarray(t, dtype=float)
        return ((gm + gt) / (2 * gt)) * np.cos((gt - gm) * t) + np.cos((gt + gm) * t) / (
            gt * (gm + gt)
        )

    def f_alpha(self, t, alpha: float):
        return (1.0 + math.sin(2 * alpha)) * self.f0(t)


def analytic_kernel(gamma: float) -> AnalyticKernel:
    if not math.isfinite(gamma):
        raise UsageError("gamma must be finite")
    return AnalyticKernel(float(gamma))


def coefficient_formulas(kernel: AnalyticKernel, alpha: float, t):
    """Closed-form populations ``(|c1|^2, |c2|^2, |c3|^2)`` at time(s) ``t``."""
    f = kernel.f_alpha(t, alpha)
    gc = kernel.g(t) * math.cos(2 * alpha)
    return f, 0.5 * (1.0 - f - gc), 0.5 * (1.0 - f + gc)
