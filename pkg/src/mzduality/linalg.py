"""Dense complex-matrix kernel for the small dimensions used here (<= 16).

The eigensolver is a cyclic Jacobi iteration with complex plane rotations,
kept self-contained so that eigenbases (and everything derived from them,
such as measurement strategies) are bit-reproducible across platforms.
Everything else is thin, validated plumbing on top of numpy arrays.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import (
    DimensionMismatch,
    InvalidState,
    NoConvergence,
    NotHermitian,
    NotUnitary,
)

HERMITICITY_TOL = 1e-10
UNITARITY_TOL = 1e-10
PSD_TOL = 1e-10
OFF_DIAGONAL_TOL = 1e-12
MAX_JACOBI_SWEEPS = 100


class EigDecomposition(NamedTuple):
    """Eigenvalues in ascending order and matching orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def as_complex_matrix(a) -> np.ndarray:
    """Coerce to a square complex ndarray with finite entries."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
        raise DimensionMismatch("matrix entries must be finite")
    return m


def is_hermitian(a, tol: float = HERMITICITY_TOL) -> bool:
    m = np.asarray(a, dtype=complex)
    return m.ndim == 2 and m.shape[0] == m.shape[1] and np.max(np.abs(m - m.conj().T)) <= tol


def require_hermitian(a, tol: float = HERMITICITY_TOL) -> np.ndarray:
    m = as_complex_matrix(a)
    dev = float(np.max(np.abs(m - m.conj().T)))
    if dev > tol:
        raise NotHermitian(f"max |A - A^dag| = {dev:.3e} exceeds {tol:.1e}")
    return m


def require_unitary(a, tol: float = UNITARITY_TOL) -> np.ndarray:
    m = as_complex_matrix(a)
    dev = float(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))))
    if dev > tol:
        raise NotUnitary(f"max |U^dag U - I| = {dev:.3e} exceeds {tol:.1e}")
    return m


def require_density(a, dim: int | None = None, tol: float = PSD_TOL) -> np.ndarray:
    """Validate a density operator: Hermitian, unit trace, positive semidefinite."""
    try:
        m = require_hermitian(a, tol)
    except NotHermitian as exc:
        raise InvalidState(str(exc)) from None
    if dim is not None and m.shape[0] != dim:
        raise InvalidState(f"expected a {dim}x{dim} density matrix, got {m.shape[0]}x{m.shape[0]}")
    tr = complex(np.trace(m))
    if abs(tr - 1.0) > tol:
        raise InvalidState(f"trace {tr} differs from 1 beyond {tol:.1e}")
    lo = float(hermitian_eig(m).eigenvalues[0])
    if lo < -tol:
        raise InvalidState(f"smallest eigenvalue {lo:.3e} below -{tol:.1e}")
    return m


def hermitian_eig(a, tol: float = OFF_DIAGONAL_TOL, max_sweeps: int = MAX_JACOBI_SWEEPS) -> EigDecomposition:
    """Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.

    Returns eigenvalues sorted ascending with orthonormal eigenvector columns.
    The result is deterministic for a fixed input: rotations are applied in a
    fixed row-cyclic order and each eigenvector is rephased so that its first
    component larger than 1e-12 in modulus is real positive.

    Raises NotHermitian on asymmetric input and NoConvergence if the
    off-diagonal norm has not dropped below ``tol * ||A||_F`` after
    ``max_sweeps`` sweeps.
    """
    work = require_hermitian(a).copy()
    n = work.shape[0]
    vecs = np.eye(n, dtype=complex)
    scale = float(np.sqrt(np.sum(np.abs(work) ** 2)))
    if scale == 0.0 or n == 1:
        return _finalize_eig(work, vecs)
    threshold = tol * scale
    # rotating below this pivot size cannot help; keeps sweeps finite
    pivot_floor = threshold / max(n, 2)

    for _ in range(max_sweeps):
        if _off_diagonal_norm(work) <= threshold:
            return _finalize_eig(work, vecs)
        for p in range(n - 1):
            for q in range(p + 1, n):
                w = work[p, q]
                b = abs(w)
                if b <= pivot_floor:
                    continue
                phase = w / b
                app = work[p, p].real
                aqq = work[q, q].real
                tau = (aqq - app) / (2.0 * b)
                if tau >= 0.0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c

                colp = work[:, p].copy()
                colq = work[:, q].copy()
                work[:, p] = c * colp - s * np.conj(phase) * colq
                work[:, q] = s * colp + c * np.conj(phase) * colq
                rowp = work[p, :].copy()
                rowq = work[q, :].copy()
                work[p, :] = c * rowp - s * phase * rowq
                work[q, :] = s * rowp + c * phase * rowq
                # exact by construction; clears rounding residue
                work[p, q] = 0.0
                work[q, p] = 0.0
                work[p, p] = work[p, p].real
                work[q, q] = work[q, q].real

                vp = vecs[:, p].copy()
                vq = vecs[:, q].copy()
                vecs[:, p] = c * vp - s * np.conj(phase) * vq
                vecs[:, q] = s * vp + c * np.conj(phase) * vq
    if _off_diagonal_norm(work) <= threshold:
        return _finalize_eig(work, vecs)
    raise NoConvergence(f"Jacobi iteration did not converge in {max_sweeps} sweeps")


def _off_diagonal_norm(m: np.ndarray) -> float:
    off = m - np.diag(np.diag(m))
    return float(np.sqrt(np.sum(np.abs(off) ** 2)))


def _finalize_eig(work: np.ndarray, vecs: np.ndarray) -> EigDecomposition:
    vals = np.real(np.diag(work)).copy()
    order = np.argsort(vals, kind="stable")
    vals = vals[order]
    vecs = vecs[:, order]
    for k in range(vecs.shape[1]):
        col = vecs[:, k]
        nz = np.flatnonzero(np.abs(col) > 1e-12)
        if nz.size:
            lead = col[nz[0]]
            vecs[:, k] = col * (np.conj(lead) / abs(lead))
    return EigDecomposition(vals, vecs)


def trace_norm(a) -> float:
    """Sum of the absolute eigenvalues of a Hermitian matrix."""
    vals = hermitian_eig(a).eigenvalues
    return float(np.sum(np.abs(vals)))


def kron(a, b) -> np.ndarray:
    """Tensor product with the quanton as the first factor."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def partial_trace_detector(m) -> np.ndarray:
    """Trace out the detector from an operator on quanton (dim 2) x detector.

    The input dimension must be 2*d for some detector dimension d >= 1.
    """
    full = as_complex_matrix(m)
    dim = full.shape[0]
    if dim % 2 != 0 or dim == 0:
        raise DimensionMismatch(f"dimension {dim} is not 2 x detector dimension")
    d = dim // 2
    blocks = full.reshape(2, d, 2, d)
    return np.einsum("ijkj->ik", blocks)


def fidelity_unitary_pair(rho_d, u) -> float:
    """Fidelity between a qubit state and its conjugation by a unitary.

    For 2x2 density matrices this has the closed form
    ``sqrt(tr(rho U rho U^dag) + 2 det(rho))``, which is what is computed
    here (no matrix square roots needed).
    """
    rho = require_density(rho_d, dim=2)
    uu = require_unitary(u)
    if uu.shape[0] != 2:
        raise NotUnitary("expected a 2x2 unitary")
    rotated = uu @ rho @ uu.conj().T
    overlap = float(np.real(np.trace(rho @ rotated)))
    det = float(np.real(np.linalg.det(rho)))
    value = np.sqrt(max(overlap + 2.0 * det, 0.0))
    return float(min(value, 1.0))
