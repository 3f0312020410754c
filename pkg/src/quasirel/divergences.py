"""Quasi-relative entropies computed three independent ways.

The spectral route sums lambda_j f(mu_k/lambda_j) |<phi_k|psi_j>|^2 over both
eigensystems. The direct route uses trace formulas special to the Umegaki and
Tsallis families. The superoperator route materializes the d^2 x d^2 matrix
of the relative modular operator X -> sigma X rho^{-1} and pairs f of it with
vec(sqrt(rho)); it never touches the overlap sum, so the two routes check one
another.

Rank-deficient sigma follows the kernel convention: when ker(sigma) is not
contained in ker(rho) and f blows up at 0+, the divergence is +inf, reported
as a value rather than an error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .functions import OMDFunction
from .linalg import ZERO_EIG_THRESHOLD, eigh, mat_func, vec
from .states import ScalarSummary, StatePair, summarize, swapped

OVERLAP_SKIP = 1e-16
SUPEROP_DIM_CAP = 12

ScalarMap = Union[OMDFunction, Callable]


@dataclass(frozen=True)
class DivergenceResult:
    value: float  # finite or +inf
    method: str  # "spectral" | "direct" | "superoperator"
    f_name: str
    pair_summary: ScalarSummary

    @property
    def finite(self) -> bool:
        return math.isfinite(self.value)


def _as_callable(f: ScalarMap) -> tuple[str, Callable]:
    if isinstance(f, OMDFunction):
        return f.name, f.eval
    return getattr(f, "__name__", "<callable>"), f


def _zero_limit(f: ScalarMap) -> float:
    """Limit of f at 0+; exact for descriptors, probed for bare callables.

    The probe compares f at two tiny arguments and declares +inf when they
    disagree; it is a heuristic that can misfire for functions converging
    slower than any power visible at 1e-12. Descriptors carry the exact limit.
    """
    if isinstance(f, OMDFunction):
        return f.value_at_zero
    with np.errstate(all="ignore"):
        y1, y2 = float(f(1e-20)), float(f(1e-12))
    if math.isfinite(y1) and math.isfinite(y2) and abs(y1 - y2) <= 1e-6 * max(1.0, abs(y1)):
        return y1
    return math.inf


def quasi_entropy_spectral(pair: StatePair, f: ScalarMap) -> DivergenceResult:
    """The closed-form double sum over both eigensystems.

    Terms whose overlap weight is below 1e-16 are skipped. A zero eigenvalue
    of sigma with surviving weight contributes f's limit at 0+ when that is
    finite and makes the whole divergence +inf when it is not.
    """
    name, func = _as_callable(f)
    rho, sigma = pair.rho, pair.sigma
    if not rho.strictly_positive:
        raise ValueError("spectral route requires a strictly positive rho")
    summ = summarize(pair)

    lam = rho.eigenvalues  # descending, all > threshold
    mu = sigma.eigenvalues
    weights = pair.overlaps * lam[np.newaxis, :]  # [k, j] = overlap * lambda_j
    live = pair.overlaps >= OVERLAP_SKIP

    positive_mu = mu > ZERO_EIG_THRESHOLD
    total = 0.0
    zero_rows = ~positive_mu
    if np.any(zero_rows):
        zero_live = live[zero_rows, :]
        if np.any(zero_live):
            limit = _zero_limit(f)
            if not math.isfinite(limit):
                return DivergenceResult(math.inf, "spectral", name, summ)
            total += limit * float(np.sum(weights[zero_rows, :][zero_live]))

    rows = np.where(positive_mu)[0]
    if rows.size:
        ratios = mu[rows, np.newaxis] / lam[np.newaxis, :]
        mask = live[rows, :]
        with np.errstate(all="ignore"):
            fvals = np.asarray(func(ratios[mask]), dtype=float)
        if not np.all(np.isfinite(fvals)):
            return DivergenceResult(math.inf, "spectral", name, summ)
        total += float(np.sum(fvals * weights[rows, :][mask]))
    return DivergenceResult(total, "spectral", name, summ)


def _support_violated(pair: StatePair) -> bool:
    """True when sigma's kernel carries rho-mass above the rank threshold."""
    mu = pair.sigma.eigenvalues
    zero_rows = mu <= ZERO_EIG_THRESHOLD
    if not np.any(zero_rows):
        return False
    lam = pair.rho.eigenvalues
    # <phi_k| rho |phi_k> via the overlap matrix.
    rho_mass = pair.overlaps[zero_rows, :] @ lam
    return bool(np.any(rho_mass > ZERO_EIG_THRESHOLD))


def umegaki(pair: StatePair) -> DivergenceResult:
    """Relative entropy Tr(rho (log rho - log sigma)), natural log."""
    summ = summarize(pair)
    if _support_violated(pair):
        return DivergenceResult(math.inf, "direct", "neg-log", summ)
    rho, sigma = pair.rho, pair.sigma
    if rho.strictly_positive and sigma.strictly_positive:
        inner = mat_func(rho.matrix, np.log) - mat_func(sigma.matrix, np.log)
        value = float(np.trace(rho.matrix @ inner).real)
        return DivergenceResult(value, "direct", "neg-log", summ)
    # Singular but kernel-compatible: work on the supports.
    lam, mu = rho.eigenvalues, sigma.eigenvalues
    lam_pos = lam > ZERO_EIG_THRESHOLD
    mu_pos = mu > ZERO_EIG_THRESHOLD
    ent = float(np.sum(lam[lam_pos] * np.log(lam[lam_pos])))
    rho_mass = pair.overlaps[mu_pos, :] @ lam
    cross = float(np.sum(rho_mass * np.log(mu[mu_pos])))
    return DivergenceResult(ent - cross, "direct", "neg-log", summ)


def _psd_power(dm, exponent: float) -> np.ndarray:
    """Support-convention power of a density matrix: zero eigenvalues map to 0."""
    vals, vecs = dm.spectral
    powered = np.where(vals > ZERO_EIG_THRESHOLD,
                       np.power(np.clip(vals, ZERO_EIG_THRESHOLD, None), exponent),
                       0.0)
    out = (vecs * powered) @ vecs.conj().T
    return (out + out.conj().T) / 2.0


def tsallis_direct(pair: StatePair, q: float) -> DivergenceResult:
    """Tsallis relative entropy (1 - Tr(rho^q sigma^(1-q)))/(1-q)."""
    if not 0.0 < q <= 2.0 or q == 1.0:
        raise ValueError(f"q must lie in (0, 2] excluding 1, got {q}")
    summ = summarize(pair)
    name = f"tsallis:q={q:g}"
    if q > 1.0 and _support_violated(pair):
        return DivergenceResult(math.inf, "direct", name, summ)
    overlap_trace = float(
        np.trace(_psd_power(pair.rho, q) @ _psd_power(pair.sigma, 1.0 - q)).real
    )
    return DivergenceResult((1.0 - overlap_trace) / (1.0 - q), "direct", name, summ)


def relative_modular_matrix(pair: StatePair) -> np.ndarray:
    """The d^2 x d^2 matrix of X -> sigma X rho^{-1} on row-major vec(X).

    Equals kron(sigma, transpose(rho^{-1})); its spectrum is exactly the set
    of ratios mu_k/lambda_j.
    """
    if not pair.rho.strictly_positive:
        raise ValueError("modular matrix requires a strictly positive rho")
    rho_inv = mat_func(pair.rho.matrix, lambda x: 1.0 / x)
    return np.kron(pair.sigma.matrix, rho_inv.T)


def quasi_entropy_superoperator(pair: StatePair, f: ScalarMap) -> DivergenceResult:
    """Oracle route through the materialized relative modular operator.

    Computes <vec(sqrt rho), f(M) vec(sqrt rho)> with M the modular matrix;
    independent of the overlap sum by construction. Dimension is capped
    because M is d^2 x d^2.
    """
    name, func = _as_callable(f)
    if pair.dim > SUPEROP_DIM_CAP:
        raise ValueError(f"superoperator route capped at dim {SUPEROP_DIM_CAP}, got {pair.dim}")
    if not (pair.rho.strictly_positive and pair.sigma.strictly_positive):
        raise ValueError("superoperator route requires strictly positive states")
    summ = summarize(pair)
    # Diagonalize the half power kron(sqrt sigma, rho^{-1/2 T}) and square its
    # spectrum: plain eigh of the modular matrix only reaches absolute
    # accuracy eps*||M|| on the small eigenvalues, which generators singular
    # at 0+ amplify past the 1e-9 cross-route contract.
    half = np.kron(
        mat_func(pair.sigma.matrix, np.sqrt),
        mat_func(pair.rho.matrix, lambda x: 1.0 / np.sqrt(x)).T,
    )
    half_vals, vecs = eigh(half)
    vals = half_vals ** 2
    v = vec(mat_func(pair.rho.matrix, np.sqrt))
    coeffs = vecs.conj().T @ v
    with np.errstate(all="ignore"):
        fvals = np.asarray(func(vals), dtype=float)
    if not np.all(np.isfinite(fvals)):
        return DivergenceResult(math.inf, "superoperator", name, summ)
    value = float(np.sum(fvals * np.abs(coeffs) ** 2))
    return DivergenceResult(value, "superoperator", name, summ)


def swapped_entropy(pair: StatePair, f: ScalarMap) -> DivergenceResult:
    """The divergence with the states' roles exchanged: S_f(sigma||rho)."""
    return quasi_entropy_spectral(swapped(pair), f)
