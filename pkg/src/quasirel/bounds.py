"""Trace-distance continuity bounds on quasi-relative entropies.

Every evaluator consumes a ScalarSummary (extreme eigenvalues, trace
distance, commutator norm) and returns BoundReports. Inapplicable inputs
produce applicable=False reports with a reason, never a silent number.

All the tight forms contain divided differences that degenerate to 0/0 when
the two eigenvalues coincide; those are guarded: below a gap of 1e-8 the
mean-value limit is substituted (continuous extension), evaluated at the
arithmetic midpoint.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

from .divergences import (
    DivergenceResult,
    quasi_entropy_spectral,
    tsallis_direct,
)
from .functions import OMDFunction, tsallis_f
from .states import ScalarSummary, StatePair

COMMUTING_TOL = 1e-10
DIVIDED_DIFF_GAP = 1e-8
SLACK_FLOOR = -1e-10


@dataclass(frozen=True)
class BoundReport:
    """One bound evaluation.

    ``slack`` is the signed margin by which the bound holds once a divergence
    is known: bound - divergence for upper bounds, divergence - bound for
    lower bounds, so a sound report always has slack >= -1e-10 regardless of
    orientation. ``alt_value`` carries a second reading where the source
    formula is ambiguous (only the affine-part variant of the
    qubit/commuting bound uses it).
    """

    bound_name: str
    value: float
    summary: ScalarSummary
    applicable: bool
    reason: str = ""
    f_name: Optional[str] = None
    q: Optional[float] = None
    is_lower: bool = False
    slack: Optional[float] = None
    alt_value: Optional[float] = None

    def with_divergence(self, divergence: float) -> "BoundReport":
        if not math.isfinite(divergence) or not math.isfinite(self.value):
            return self
        margin = (divergence - self.value) if self.is_lower else (self.value - divergence)
        return replace(self, slack=margin)


def guarded_log_diff_quot(x: float, y: float) -> float:
    """(log x - log y)/(x - y), with the 1/midpoint limit under the gap guard."""
    if abs(x - y) < DIVIDED_DIFF_GAP:
        return 2.0 / (x + y)
    return (math.log(x) - math.log(y)) / (x - y)


def guarded_power_diff_quot(x: float, y: float, q: float) -> float:
    """(x^(1-q) - y^(1-q))/(x - y), limit (1-q) c^(-q) at the midpoint."""
    if abs(x - y) < DIVIDED_DIFF_GAP:
        c = 0.5 * (x + y)
        return (1.0 - q) * c ** (-q)
    s = 1.0 - q
    return (x ** s - y ** s) / (x - y)


def _bracket_core(summary: ScalarSummary, f: OMDFunction) -> float:
    """lambda_rho/(lambda_rho - alpha_sigma) * f(alpha_sigma/lambda_rho).

    Tends to -f'(1) as alpha_sigma -> lambda_rho; guarded accordingly.
    """
    lam, alph = summary.lambda_rho, summary.alpha_sigma
    if abs(lam - alph) < DIVIDED_DIFF_GAP:
        return -f.d1_at_1
    x = alph / lam
    return float(f.eval(x)) / (1.0 - x)


def pinsker_lower(summary: ScalarSummary, f: OMDFunction) -> BoundReport:
    """Lower bound f''(1)/2 * ||rho - sigma||_1^2."""
    value = 0.5 * f.d2_at_1 * summary.trace_distance_1 ** 2
    return BoundReport("pinsker_lower", value, summary, True,
                       f_name=f.name, is_lower=True)


def qubit_classical_upper(summary: ScalarSummary, f: OMDFunction) -> BoundReport:
    """Upper bound for qubit or commuting pairs.

    ||rho - sigma||_1 [lambda_rho/(lambda_rho - alpha_sigma)
    f(alpha_sigma/lambda_rho) - a]. With an affine part (a != 0) the source
    admits a second reading that scales a by (1 - alpha_sigma/lambda_rho);
    the displayed form is the value, the other reading rides in alt_value.
    """
    applicable = summary.dim == 2 or summary.commutator_norm < COMMUTING_TOL
    reason = "" if applicable else "requires a qubit or commuting pair"
    core = _bracket_core(summary, f)
    value = summary.trace_distance_1 * (core - f.a)
    alt = None
    if f.a != 0.0:
        x = summary.alpha_sigma / summary.lambda_rho
        alt = summary.trace_distance_1 * (core - f.a * (1.0 - x))
    return BoundReport("qubit_classical_upper", value, summary, applicable,
                       reason, f_name=f.name, alt_value=alt)


def general_sqrt_d_upper(summary: ScalarSummary, f: OMDFunction) -> BoundReport:
    """The dimension-penalized upper bound: sqrt(d) times the bracket form."""
    core = _bracket_core(summary, f)
    value = math.sqrt(summary.dim) * summary.trace_distance_1 * (core - f.a)
    return BoundReport("sqrt_d_upper", value, summary, True, f_name=f.name)


def relative_entropy_upper(summary: ScalarSummary) -> list[BoundReport]:
    """Tight and loose upper bounds on the relative entropy (natural log).

    Tight: ||rho-sigma||_1 lambda_rho (log a_r - log a_s)/(a_r - a_s);
    loose: ||rho-sigma||_1 lambda_rho / alpha. Tight <= loose always.
    """
    dist, lam = summary.trace_distance_1, summary.lambda_rho
    tight = dist * lam * guarded_log_diff_quot(summary.alpha_rho, summary.alpha_sigma)
    loose = dist * lam / summary.alpha
    return [
        BoundReport("relative_entropy_tight_upper", tight, summary, True, f_name="neg-log"),
        BoundReport("relative_entropy_loose_upper", loose, summary, True, f_name="neg-log"),
    ]


def ae11_upper(summary: ScalarSummary, base: str = "e") -> BoundReport:
    """The known logarithmic upper bound on relative entropy.

    (alpha_sigma + T) log(1 + T/alpha_sigma) - alpha_rho log(1 + T/alpha_rho)
    with T half the trace distance. ``base`` selects the logarithm ("e" or
    "2") because the source comparison is ambiguous about it; computation is
    natural-log with a final rescale.
    """
    if base not in ("e", "2"):
        raise ValueError(f"base must be 'e' or '2', got {base!r}")
    t = summary.T
    value = ((summary.alpha_sigma + t) * math.log1p(t / summary.alpha_sigma)
             - summary.alpha_rho * math.log1p(t / summary.alpha_rho))
    if base == "2":
        value /= math.log(2.0)
    name = "ae11_upper" if base == "e" else "ae11_upper_base2"
    return BoundReport(name, value, summary, True, f_name="neg-log")


def qubit_relative_upper(summary: ScalarSummary) -> list[BoundReport]:
    """Qubit-only tight/loose upper bounds on the relative entropy."""
    applicable = summary.dim == 2
    reason = "" if applicable else "requires a qubit pair"
    dist, lam, alph = summary.trace_distance_1, summary.lambda_rho, summary.alpha_sigma
    tight = dist * lam * guarded_log_diff_quot(lam, alph)
    loose = dist * lam / alph
    return [
        BoundReport("qubit_relative_tight_upper", tight, summary, applicable,
                    reason, f_name="neg-log"),
        BoundReport("qubit_relative_loose_upper", loose, summary, applicable,
                    reason, f_name="neg-log"),
    ]


def tsallis_bounds(summary: ScalarSummary, q: float) -> list[BoundReport]:
    """Every Tsallis-order bound applicable at this q, one report each.

    q in (1, 2]: the ceil-q bound (joint largest eigenvalue over both
    spectra), the prior 1/(q-1) bound, and its improved form, smaller by
    exactly the factor q-1. q in (0, 1): the prior 1/(1-q) bound, the
    divided-difference tight bound, and its loose companion. Qubit pairs
    additionally get a dedicated tight/loose pair at any valid q.
    """
    if not 0.0 < q <= 2.0 or q == 1.0:
        return [BoundReport("tsallis_bounds", math.nan, summary, False,
                            f"q={q:g} outside (0,2)\\{{1}}", q=q)]
    dist, lam_r = summary.trace_distance_1, summary.lambda_rho
    alpha, alph_s = summary.alpha, summary.alpha_sigma
    reports = []
    if q > 1.0:
        lam_joint = max(summary.lambda_rho, summary.lambda_sigma)
        ceil_coeff = (math.ceil(q) - 1.0) / (q - 1.0)
        reports.append(BoundReport(
            "tsallis_ceil_upper",
            ceil_coeff * (lam_joint / alph_s) ** (q - 1.0) * dist,
            summary, True, q=q))
        prior = dist * lam_r ** q / alpha ** q / (q - 1.0)
        reports.append(BoundReport("tsallis_prior_upper", prior, summary, True, q=q))
        reports.append(BoundReport("tsallis_improved_upper", prior * (q - 1.0),
                                   summary, True, q=q))
    else:
        reports.append(BoundReport(
            "tsallis_prior_upper", dist * lam_r ** q / alph_s ** q / (1.0 - q),
            summary, True, q=q))
        diff_quot = guarded_power_diff_quot(summary.alpha_rho, alph_s, q)
        reports.append(BoundReport(
            "tsallis_tight_upper", dist * lam_r ** q * diff_quot / (1.0 - q),
            summary, True, q=q))
        reports.append(BoundReport(
            "tsallis_loose_upper", dist * lam_r ** q / alpha ** q,
            summary, True, q=q))
    qubit_ok = summary.dim == 2
    qubit_reason = "" if qubit_ok else "requires a qubit pair"
    qubit_quot = guarded_power_diff_quot(lam_r, alph_s, q)
    reports.append(BoundReport(
        "tsallis_qubit_tight_upper",
        dist * lam_r ** q * qubit_quot / (1.0 - q),
        summary, qubit_ok, qubit_reason, q=q))
    reports.append(BoundReport(
        "tsallis_qubit_loose_upper", dist * lam_r ** q / alph_s ** q,
        summary, qubit_ok, qubit_reason, q=q))
    return reports


@dataclass(frozen=True)
class SandwichReport:
    divergence: DivergenceResult
    reports: list
    vacuous: bool  # divergence infinite: uppers evaluated but uncheckable
    violations: list


def sandwich(pair: StatePair, f: Optional[OMDFunction] = None,
             q: Optional[float] = None, ae11_base: str = "e") -> SandwichReport:
    """Divergence plus every applicable bound, with signed slacks.

    Exactly one of ``f`` and ``q`` must be given; q selects the Tsallis
    generator of that order and additionally attaches the Tsallis-specific
    bounds. The relative-entropy-specific bounds attach only to neg-log.
    """
    if (f is None) == (q is None):
        raise ValueError("pass exactly one of f or q")
    if f is None:
        gen = tsallis_f(q)
        divergence = tsallis_direct(pair, q)
    else:
        gen = f
        divergence = quasi_entropy_spectral(pair, f)
    summary = divergence.pair_summary

    reports = [
        pinsker_lower(summary, gen),
        qubit_classical_upper(summary, gen),
        general_sqrt_d_upper(summary, gen),
    ]
    if gen.name == "neg-log":
        reports.extend(relative_entropy_upper(summary))
        reports.append(ae11_upper(summary, base=ae11_base))
        reports.extend(qubit_relative_upper(summary))
    if q is not None:
        reports.extend(tsallis_bounds(summary, q))

    filled = []
    violations = []
    for rep in reports:
        rep = rep.with_divergence(divergence.value)
        filled.append(rep)
        if rep.applicable and rep.slack is not None and rep.slack < SLACK_FLOOR:
            violations.append(rep.bound_name)
    return SandwichReport(divergence, filled, not divergence.finite, violations)
