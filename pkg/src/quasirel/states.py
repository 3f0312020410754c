"""Validated density matrices, state pairs, random generators, and summaries.

A StatePair carries both states' spectral data plus the matrix of squared
eigenvector overlaps, which is everything the spectral divergence route and
the scalar bounds consume.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .linalg import (
    ZERO_EIG_THRESHOLD,
    EigenSystem,
    eigh,
    hermitian_part,
    trace_norm,
)

TRACE_TOL = 1e-12
EIGENVALUE_FLOOR = -1e-12
DOUBLE_STOCHASTIC_TOL = 1e-10


@dataclass(frozen=True)
class DensityMatrix:
    """A trace-one positive-semidefinite matrix with cached spectral data."""

    matrix: np.ndarray
    spectral: EigenSystem
    strictly_positive: bool

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def eigenvalues(self) -> np.ndarray:
        return self.spectral.eigenvalues

    @property
    def eigenvectors(self) -> np.ndarray:
        return self.spectral.eigenvectors


def density_matrix(mat: np.ndarray) -> DensityMatrix:
    """Validate and wrap a density matrix.

    Checks Hermiticity, unit trace (1e-12), and positivity up to -1e-12 on the
    spectrum. The strictly_positive flag is set iff the smallest eigenvalue
    exceeds the rank threshold, separating deliberately singular states from
    numerical noise.
    """
    h = hermitian_part(mat)
    tr = float(np.trace(h).real)
    if abs(tr - 1.0) > TRACE_TOL:
        raise ValueError(f"trace is {tr!r}, not 1 within {TRACE_TOL:.1e}")
    spectral = eigh(h)
    min_eig = float(spectral.eigenvalues[-1])
    if min_eig < EIGENVALUE_FLOOR:
        raise ValueError(f"negative eigenvalue {min_eig!r} below floor {EIGENVALUE_FLOOR:.1e}")
    h.setflags(write=False)
    return DensityMatrix(h, spectral, min_eig > ZERO_EIG_THRESHOLD)


@dataclass(frozen=True)
class StatePair:
    """An ordered pair (rho, sigma) with squared eigenvector overlaps.

    overlaps[k, j] = |<phi_k|psi_j>|^2 where psi are rho's eigenvectors and
    phi are sigma's; the matrix is doubly stochastic.
    """

    rho: DensityMatrix
    sigma: DensityMatrix
    overlaps: np.ndarray

    @property
    def dim(self) -> int:
        return self.rho.dim


def state_pair(rho: DensityMatrix | np.ndarray, sigma: DensityMatrix | np.ndarray) -> StatePair:
    """Build a StatePair, computing and validating the overlap matrix."""
    if not isinstance(rho, DensityMatrix):
        rho = density_matrix(rho)
    if not isinstance(sigma, DensityMatrix):
        sigma = density_matrix(sigma)
    if rho.dim != sigma.dim:
        raise ValueError(f"dimension mismatch: {rho.dim} vs {sigma.dim}")
    amp = sigma.eigenvectors.conj().T @ rho.eigenvectors
    overlaps = np.abs(amp) ** 2
    for axis, label in ((0, "column"), (1, "row")):
        sums = overlaps.sum(axis=axis)
        worst = float(np.max(np.abs(sums - 1.0)))
        if worst > DOUBLE_STOCHASTIC_TOL:
            raise ValueError(f"overlap {label} sums off by {worst:.3e}; eigenbasis not unitary?")
    overlaps.setflags(write=False)
    return StatePair(rho, sigma, overlaps)


def swapped(pair: StatePair) -> StatePair:
    """The pair with rho and sigma exchanged (overlaps transpose)."""
    overlaps = pair.overlaps.T.copy()
    overlaps.setflags(write=False)
    return StatePair(pair.sigma, pair.rho, overlaps)


@dataclass(frozen=True)
class ScalarSummary:
    """The scalar ingredients every bound consumes.

    alpha_rho and alpha_sigma are the smallest eigenvalues strictly above the
    rank threshold (the "minimal non-zero eigenvalue" convention), so they are
    well defined for rank-deficient states.
    """

    dim: int
    lambda_rho: float
    lambda_sigma: float
    alpha_rho: float
    alpha_sigma: float
    alpha: float
    trace_distance_1: float
    T: float
    commutator_norm: float  # ||[rho, sigma]||_F; gates the commuting-pair bounds


def _min_positive(eigs: np.ndarray) -> float:
    positive = eigs[eigs > ZERO_EIG_THRESHOLD]
    if positive.size == 0:
        raise ValueError("state has no eigenvalue above the rank threshold")
    return float(positive[-1])


def summarize(pair: StatePair) -> ScalarSummary:
    """Scalar summary of a pair: extreme eigenvalues and trace distance."""
    dist = trace_norm(pair.rho.matrix - pair.sigma.matrix)
    product = pair.rho.matrix @ pair.sigma.matrix
    commutator = float(np.linalg.norm(product - product.conj().T))
    alpha_rho = _min_positive(pair.rho.eigenvalues)
    alpha_sigma = _min_positive(pair.sigma.eigenvalues)
    s = ScalarSummary(
        dim=pair.dim,
        lambda_rho=float(pair.rho.eigenvalues[0]),
        lambda_sigma=float(pair.sigma.eigenvalues[0]),
        alpha_rho=alpha_rho,
        alpha_sigma=alpha_sigma,
        alpha=min(alpha_rho, alpha_sigma),
        trace_distance_1=dist,
        T=dist / 2.0,
        commutator_norm=commutator,
    )
    if not (0.0 < s.alpha <= s.lambda_rho <= 1.0 + 1e-12):
        raise ValueError(f"summary invariant violated: alpha={s.alpha}, lambda_rho={s.lambda_rho}")
    if not (-1e-12 <= s.trace_distance_1 <= 2.0 + 1e-12):
        raise ValueError(f"trace distance out of range: {s.trace_distance_1}")
    return s


def default_rng(seed) -> np.random.Generator:
    """The package-wide RNG: PCG64, seedable and portable across platforms."""
    return np.random.Generator(np.random.PCG64(seed))


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex Gaussian with phase fixing."""
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(g)
    # Making R's diagonal positive removes the QR phase ambiguity; without it
    # the distribution is not Haar.
    phases = np.diagonal(r).copy()
    phases /= np.abs(phases)
    return q * phases


def random_state(dim: int, rng: np.random.Generator) -> DensityMatrix:
    """Full-rank random density matrix G G†/Tr(G G†) with complex Gaussian G.

    Resamples on the (measure-tiny) event that an eigenvalue lands at or
    below the rank threshold, so the result is always strictly positive.
    """
    if dim < 1:
        raise ValueError(f"dim must be >= 1, got {dim}")
    while True:
        g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        m = g @ g.conj().T
        m /= np.trace(m).real
        dm = density_matrix(m)
        if dm.strictly_positive:
            return dm


def random_pair(dim: int, rng: np.random.Generator) -> StatePair:
    """Two independent random states as a pair."""
    return state_pair(random_state(dim, rng), random_state(dim, rng))


def _random_full_probabilities(dim: int, rng: np.random.Generator) -> np.ndarray:
    while True:
        p = rng.dirichlet(np.ones(dim))
        if p.min() > ZERO_EIG_THRESHOLD:
            return np.sort(p)[::-1]


def random_classical_pair(dim: int, rng: np.random.Generator,
                          shuffle: bool = False) -> StatePair:
    """A commuting pair: both states diagonal in one shared random basis.

    By default both spectra are laid out in descending order on the shared
    basis, so the overlap matrix is the identity. With shuffle=True sigma's
    spectrum is randomly permuted against rho's, giving a general commuting
    pair whose overlaps form a permutation matrix.
    """
    if dim < 1:
        raise ValueError(f"dim must be >= 1, got {dim}")
    u = haar_unitary(dim, rng)
    p = _random_full_probabilities(dim, rng)
    q = _random_full_probabilities(dim, rng)
    if shuffle:
        q = q[rng.permutation(dim)]
    rho = (u * p) @ u.conj().T
    sigma = (u * q) @ u.conj().T
    return state_pair(rho, sigma)


def example_pair(dim: int) -> StatePair:
    """Maximally mixed state against a rank-two state on two basis vectors.

    rho = I/d; sigma has eigenvalues 1/d and 1 - 1/d on the first two basis
    vectors and is zero elsewhere, so sigma is deliberately rank-deficient
    and the pair's trace distance is exactly 2 - 4/d.
    """
    if dim < 3:
        raise ValueError(f"dim must be >= 3, got {dim}")
    rho = np.eye(dim, dtype=complex) / dim
    sigma = np.zeros((dim, dim), dtype=complex)
    sigma[0, 0] = 1.0 / dim
    sigma[1, 1] = 1.0 - 1.0 / dim
    return state_pair(rho, sigma)


# ---------------------------------------------------------------------------
# JSON serialization. Floats survive exactly: json emits repr, the shortest
# decimal (<= 17 significant digits) that round-trips to the same double.

def _matrix_to_json(m: np.ndarray) -> list:
    return [[[float(v.real), float(v.imag)] for v in row] for row in m]


def _matrix_from_json(rows: Sequence) -> np.ndarray:
    return np.array([[complex(re, im) for re, im in row] for row in rows])


def pair_to_dict(pair: StatePair, seed=None, tags: Optional[list[str]] = None) -> dict:
    return {
        "dim": pair.dim,
        "rho": _matrix_to_json(pair.rho.matrix),
        "sigma": _matrix_to_json(pair.sigma.matrix),
        "seed": seed,
        "tags": list(tags) if tags else [],
    }


def pair_from_dict(doc: dict) -> StatePair:
    dim = int(doc["dim"])
    rho = _matrix_from_json(doc["rho"])
    sigma = _matrix_from_json(doc["sigma"])
    if rho.shape != (dim, dim) or sigma.shape != (dim, dim):
        raise ValueError(f"matrix shapes {rho.shape}/{sigma.shape} disagree with dim {dim}")
    return state_pair(rho, sigma)


def save_pair(path, pair: StatePair, seed=None, tags=None) -> None:
    with open(path, "w") as fh:
        json.dump(pair_to_dict(pair, seed=seed, tags=tags), fh, indent=1)
        fh.write("\n")


def load_pair(path) -> StatePair:
    with open(path) as fh:
        return pair_from_dict(json.load(fh))
