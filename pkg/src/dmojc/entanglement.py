"""Reduced density matrices, purity, Wootters concurrence and the CP plane.

Orderings used for reduced matrices:

* field (second isospin): ``(+', -')``
* two isospins / two atoms: ``(--, +-, -+, ++)``
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

import mpmath
import numpy as np

from .dynamics import AnalyticKernel, CoefficientSet, check_analytic_contract, evolve_extended
from .errors import DomainError, UsageError, ValidationError
from .qnums import LabeledState, ModelSpec, basis_extended

DENSITY_TOL = 1e-12
EIGEN_CLAMP = 1e-12

FIELD_ORDER = (+1, -1)
ATOM_ORDER = ((-1, -1), (+1, -1), (-1, +1), (+1, +1))

SIGMA_YY = np.array(
    [[0, 0, 0, -1], [0, 0, 1, 0], [0, 1, 0, 0], [-1, 0, 0, 0]], dtype=complex
)


@dataclass(frozen=True, eq=False)
class ReducedDensity:
    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        rho = np.array(self.entries, dtype=complex)
        if rho.shape not in ((2, 2), (4, 4)):
            raise ValidationError(f"expected a 2x2 or 4x4 matrix, got {rho.shape}")
        if np.abs(rho - rho.conj().T).max() > DENSITY_TOL:
            raise ValidationError("density matrix is not Hermitian")
        if abs(np.trace(rho) - 1.0) > DENSITY_TOL:
            raise ValidationError(f"density matrix has trace {np.trace(rho)!r}")
        if np.linalg.eigvalsh(rho).min() < -DENSITY_TOL:
            raise ValidationError("density matrix is not positive semidefinite")
        rho.setflags(write=False)
        object.__setattr__(self, "entries", rho)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class CPPoint:
    t: float
    purity: float
    concurrence: float


def _as_labeled(state) -> LabeledState:
    if isinstance(state, LabeledState):
        if not state.basis.kets or state.basis.kets[0].iso2 is None:
            raise UsageError("reduction needs a two-isospin state")
        return state
    amps = np.asarray(state.amplitudes if isinstance(state, CoefficientSet) else state)
    # the relative ket pattern is the same for every I >= 0, so a template basis suffices
    template = {3: 0, 4: 1}.get(len(amps))
    if template is None:
        raise UsageError(f"cannot infer the subspace of a {len(amps)}-component state")
    spec = ModelSpec(extended=True)
    return LabeledState(basis_extended(spec, template), amps)


def _partial(state: LabeledState, kept, order) -> np.ndarray:
    index = {label: i for i, label in enumerate(order)}
    rho = np.zeros((len(order), len(order)), dtype=complex)
    kets, amps = state.basis.kets, state.amplitudes
    for a, ka in enumerate(kets):
        for b, kb in enumerate(kets):
            ka_keep, ka_rest = kept(ka)
            kb_keep, kb_rest = kept(kb)
            if ka_rest == kb_rest:
                rho[index[ka_keep], index[kb_keep]] += amps[a] * np.conj(amps[b])
    return rho


def reduce_to_field(state) -> ReducedDensity:
    """Trace out the first isospin and the oscillator."""
    labeled = _as_labeled(state)
    rho = _partial(labeled, lambda k: (k.iso2, (k.iso1, k.osc)), FIELD_ORDER)
    return ReducedDensity(rho)


def reduce_to_atoms(state) -> ReducedDensity:
    """Trace out the oscillator, keeping both isospins."""
    labeled = _as_labeled(state)
    rho = _partial(labeled, lambda k: ((k.iso1, k.iso2), k.osc), ATOM_ORDER)
    return ReducedDensity(rho)


def reduce_to_oscillator(state) -> np.ndarray:
    labeled = _as_labeled(state)
    levels = sorted({k.osc for k in labeled.basis.kets})
    return _partial(labeled, lambda k: (k.osc, (k.iso1, k.iso2)), levels)


def purity(rho) -> float:
    m = rho.entries if isinstance(rho, ReducedDensity) else np.asarray(rho)
    return float(np.sum(np.abs(m) ** 2))


def concurrence(rho) -> float:
    """Wootters concurrence ``max(0, l1 - l2 - l3 - l4)``.

    The ``l_i`` are the singular values of ``W^T (sigma_y x sigma_y) W`` with
    ``rho = W W^dagger``; they equal the square roots of the eigenvalues of
    ``rho (sigma_y x sigma_y) rho* (sigma_y x sigma_y)``.  Working with singular
    values avoids taking square roots of eigenvalues that are zero up to
    rounding.  Eigenvalues of ``rho`` below ``1e-12`` are treated as zero.
    """
    if not isinstance(rho, ReducedDensity):
        rho = ReducedDensity(rho)
    if rho.dim != 4:
        raise ValidationError("concurrence needs a two-qubit (4x4) density matrix")
    p, v = np.linalg.eigh(rho.entries)
    keep = p > EIGEN_CLAMP
    w = v[:, keep] * np.sqrt(p[keep])
    if w.shape[1] == 0:
        return 0.0
    lam = np.linalg.svd(w.T @ SIGMA_YY @ w, compute_uv=False)
    lam = np.concatenate([np.sort(lam)[::-1], np.zeros(4)])[:4]
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def closed_form_concurrence(
    kernel: AnalyticKernel, alpha: float, t, spec: ModelSpec | None = None
):
    """``sqrt((1 - f_alpha)^2 - g^2 cos^2 2a)``, clamped at zero."""
    if spec is not None:
        check_analytic_contract(spec)
        if abs(spec.gamma - kernel.gamma) > 1e-12:
            raise UsageError("kernel gamma does not match the model")
    f = kernel.f_alpha(t, alpha)
    gc = kernel.g(t) * math.cos(2 * alpha)
    lo, hi = 1.0 - f - gc, 1.0 - f + gc
    out = np.sqrt(np.clip(lo * hi, 0.0, None))
    # a factor near zero carries an O(eps) absolute error that the square root
    # inflates to O(sqrt(eps)); redo those points in extended precision
    bad = np.minimum(np.abs(lo), np.abs(hi)) < ILL_CONDITIONED
    if np.any(bad):
        tt = np.broadcast_to(np.asarray(t, dtype=float), out.shape)
        out = np.array(out, dtype=float)
        out[bad] = [_concurrence_mp(kernel.gamma, alpha, x) for x in tt[bad]]
    return out if np.ndim(out) else float(out)


ILL_CONDITIONED = 1e-6


def _concurrence_mp(gamma: float, alpha: float, t: float) -> float:
    with mpmath.workdps(40):
        gm, a, t = mpmath.mpf(gamma), mpmath.mpf(alpha), mpmath.mpf(t)
        gt = mpmath.sqrt(gm**2 + 2)
        f = (1 + mpmath.sin(2 * a)) * mpmath.sin(gt * t) ** 2 / gt**2
        g = (gm + gt) / (2 * gt) * mpmath.cos((gt - gm) * t) + mpmath.cos((gt + gm) * t) / (gt * (gm + gt))
        gc = g * mpmath.cos(2 * a)
        radicand = (1 - f) ** 2 - gc**2
        return float(mpmath.sqrt(radicand)) if radicand > 0 else 0.0


def closed_form_purities(kernel: AnalyticKernel, alpha: float, t):
    """``(P_field, P_atoms)`` from the closed-form populations."""
    f = kernel.f_alpha(t, alpha)
    gc = kernel.g(t) * math.cos(2 * alpha)
    return 0.5 + 0.5 * (gc - f) ** 2, 1.0 - 2.0 * f + 2.0 * f**2


def _frontier_root(purity_value):
    p = np.asarray(purity_value, dtype=float)
    if np.any(p < 0.5 - 1e-12) or np.any(p > 1.0 + 1e-12):
        raise DomainError("frontier needs purity in [1/2, 1]")
    return np.sqrt(np.clip(2.0 * p - 1.0, 0.0, None))


def cp_frontier(purity_value, alpha: float):
    """Zero-detuning curves ``C_pm(P; a) = |1 pm sqrt(2P - 1) - 2 sin 2a| / 2``."""
    x = _frontier_root(purity_value)
    s = 2.0 * math.sin(2 * alpha)
    c_plus = 0.5 * np.abs(1.0 + x - s)
    c_minus = 0.5 * np.abs(1.0 - x - s)
    if np.ndim(c_plus) == 0:
        return float(c_plus), float(c_minus)
    return c_plus, c_minus


def cp_envelope(purity_value, alpha: float):
    """Region of the CP plane reachable from the initial state with angle ``a``.

    Lower edge: the lower zero-detuning curve for the same ``a``.  Upper edge:
    the zero-detuning curve for ``a = pi/4``, i.e. ``(1 + sqrt(2P - 1)) / 2``.
    """
    c_plus, c_minus = cp_frontier(purity_value, alpha)
    upper = 0.5 * (1.0 + _frontier_root(purity_value))
    return np.minimum(c_plus, c_minus), upper


def cp_trajectory(spec: ModelSpec, alpha: float, t_grid: Iterable[float]) -> list[CPPoint]:
    if not spec.extended:
        raise UsageError("cp_trajectory needs the two-isospin model")
    points = []
    for cs in evolve_extended(spec, alpha, t_grid):
        rho = reduce_to_atoms(cs)
        points.append(CPPoint(cs.t, purity(rho), concurrence(rho)))
    return points
