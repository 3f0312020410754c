"""Dense Hermitian linear algebra at small dimension.

Eigendecompositions, trace/operator norms, spectral matrix functions, and the
vectorization helpers used by the superoperator route. Eigenvalues are always
reported in descending order; column k of the eigenvector matrix pairs with
eigenvalue k.
"""

from __future__ import annotations

from typing import Callable, NamedTuple

import numpy as np

HERMITICITY_TOL = 1e-12
ORTHONORMALITY_TOL = 1e-10
RECONSTRUCTION_TOL = 1e-10
# Eigenvalues at or below this threshold count as zero when ranks matter.
ZERO_EIG_THRESHOLD = 1e-10


class SpectralDomainError(ValueError):
    """A scalar function was applied to a spectrum outside its domain."""


def hermitian_part(a: np.ndarray, tol: float = HERMITICITY_TOL) -> np.ndarray:
    """Validate that ``a`` is Hermitian within ``tol`` and return (A + A†)/2.

    The symmetrized form is exactly Hermitian, so downstream spectral code
    never sees asymmetry beyond floating-point addition error.
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    deviation = np.max(np.abs(a - a.conj().T)) if a.size else 0.0
    if deviation > tol:
        raise ValueError(
            f"matrix is not Hermitian: max |A - A^dag| = {deviation:.3e} exceeds {tol:.1e}"
        )
    return (a + a.conj().T) / 2.0


class EigenSystem(NamedTuple):
    eigenvalues: np.ndarray  # real, descending
    eigenvectors: np.ndarray  # unitary; column k pairs with eigenvalues[k]


def eigh(a: np.ndarray) -> EigenSystem:
    """Spectral decomposition of a Hermitian matrix with descending eigenvalues."""
    h = hermitian_part(a)
    vals, vecs = np.linalg.eigh(h)
    return EigenSystem(vals[::-1].copy(), vecs[:, ::-1].copy())


def eigvalsh_desc(a: np.ndarray) -> np.ndarray:
    """Descending eigenvalues of a Hermitian matrix (no eigenvectors)."""
    return np.linalg.eigvalsh(hermitian_part(a))[::-1].copy()


def trace_norm(a: np.ndarray) -> float:
    """Trace norm of a Hermitian matrix: the sum of absolute eigenvalues."""
    return float(np.sum(np.abs(np.linalg.eigvalsh(hermitian_part(a)))))


def operator_norm(a: np.ndarray) -> float:
    """Operator norm of a Hermitian matrix: the largest absolute eigenvalue."""
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(np.linalg.eigvalsh(hermitian_part(a)))))


def mat_func(a: np.ndarray, f: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """Apply a scalar function to a Hermitian matrix through its spectrum: V f(Λ) V†.

    ``f`` must accept a 1-d real array. Raises SpectralDomainError if any
    eigenvalue falls outside f's domain (detected as a non-finite or
    non-real value in f's output).
    """
    vals, vecs = eigh(a)
    with np.errstate(all="ignore"):
        fv = np.asarray(f(vals))
    if np.iscomplexobj(fv):
        if np.max(np.abs(fv.imag)) > 1e-12:
            raise SpectralDomainError(
                f"function returned complex values on spectrum {vals}"
            )
        fv = fv.real
    fv = fv.astype(float)
    if not np.all(np.isfinite(fv)):
        raise SpectralDomainError(
            f"function returned non-finite values on spectrum {vals}"
        )
    out = (vecs * fv) @ vecs.conj().T
    return (out + out.conj().T) / 2.0


class HolderCheck(NamedTuple):
    lhs: float
    rhs: float
    ok: bool


def holder3_check(x: np.ndarray, y: np.ndarray, z: np.ndarray,
                  slack: float = 1e-12) -> HolderCheck:
    """Check the three-factor Hoelder bound |Tr(XYZ)| <= ||X||_inf ||Z||_inf ||Y||_1.

    Returns both sides along with the verdict; ``ok`` allows ``slack``
    (scaled by the bound's magnitude) for floating-point noise.
    """
    lhs = abs(complex(np.trace(x @ y @ z)))
    rhs = operator_norm(x) * operator_norm(z) * trace_norm(y)
    return HolderCheck(lhs, rhs, lhs <= rhs + slack * max(1.0, rhs))


def vec(x: np.ndarray) -> np.ndarray:
    """Row-major vectorization of a d x d matrix into a length-d^2 vector."""
    return np.asarray(x).reshape(-1)


def unvec(v: np.ndarray, dim: int) -> np.ndarray:
    """Inverse of :func:`vec`."""
    return np.asarray(v).reshape(dim, dim)


def left_mult_matrix(a: np.ndarray) -> np.ndarray:
    """Matrix of X -> AX acting on row-major vectorized X: kron(A, I)."""
    d = a.shape[0]
    return np.kron(a, np.eye(d))


def right_mult_matrix(b: np.ndarray) -> np.ndarray:
    """Matrix of X -> XB acting on row-major vectorized X: kron(I, B^T)."""
    d = b.shape[0]
    return np.kron(np.eye(d), b.T)
