"""Cyclic Jacobi diagonalization for small dense Hermitian matrices."""

from __future__ import annotations

import numpy as np

from .errors import ValidationError

HERMITIAN_TOL = 1e-12
MAX_SWEEPS = 64


def _offdiag_max(a: np.ndarray) -> float:
    off = np.abs(a - np.diag(np.diag(a)))
    return float(off.max()) if off.size else 0.0


def _fix_phase(v: np.ndarray) -> np.ndarray:
    # largest-magnitude component real and positive; ties go to the lowest index
    mags = np.abs(v)
    k = int(np.flatnonzero(mags >= mags.max() - 1e-12)[0])
    return v * (np.conj(v[k]) / mags[k])


def _gram_schmidt(vectors: np.ndarray) -> np.ndarray:
    q = np.array(vectors, dtype=complex)
    for i in range(q.shape[1]):
        for _ in range(2):
            for k in range(i):
                q[:, i] -= np.vdot(q[:, k], q[:, i]) * q[:, k]
        q[:, i] /= np.linalg.norm(q[:, i])
    return q


def jacobi_eigh(h, tol: float = 1e-14) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian matrix.

    Sweeps over all (p, q) pairs in row order, annihilating each off-diagonal
    element with a complex Jacobi rotation, until every off-diagonal magnitude
    is below ``tol * max(1, ||H||_F)``.  Columns of the returned matrix are
    eigenvectors, re-orthonormalized in index order, with their largest
    component made real and positive.
    """
    a = np.array(h, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {a.shape}")
    n = a.shape[0]
    scale = max(1.0, float(np.linalg.norm(a)))
    if np.abs(a - a.conj().T).max(initial=0.0) > HERMITIAN_TOL * scale:
        raise ValidationError("matrix is not Hermitian")
    a = 0.5 * (a + a.conj().T)
    v = np.eye(n, dtype=complex)
    threshold = tol * scale

    for _ in range(MAX_SWEEPS):
        if _offdiag_max(a) < threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag < threshold * 1e-3:
                    continue
                phase = apq / mag
                app, aqq = a[p, p].real, a[q, q].real
                tau = (aqq - app) / (2.0 * mag)
                if tau == 0.0:
                    t = 1.0
                else:
                    t = np.sign(tau) / (abs(tau) + np.hypot(1.0, tau))
                c = 1.0 / np.hypot(1.0, t)
                s = t * c
                # J = diag(1, conj(phase)) on (p, q), followed by a real rotation
                rot = np.eye(n, dtype=complex)
                rot[p, p] = c
                rot[p, q] = s
                rot[q, p] = -s * np.conj(phase)
                rot[q, q] = c * np.conj(phase)
                a = rot.conj().T @ a @ rot
                a[p, q] = a[q, p] = 0.0
                a = 0.5 * (a + a.conj().T)
                v = v @ rot
    else:
        if _offdiag_max(a) >= threshold:
            raise ValidationError("Jacobi iteration did not converge")

    values = np.diag(a).real.copy()
    order = np.argsort(values, kind="stable")
    values = values[order]
    v = _gram_schmidt(v[:, order])
    for i in range(n):
        v[:, i] = _fix_phase(v[:, i])
    return values, v
