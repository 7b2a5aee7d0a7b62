"""Weighted sums of i.i.d. stable draws: closure law, moment ratios, truncation.

The central fact exercised here: for independent copies X_1..X_K of a
symmetric centered stable law and real coefficients v, the weighted sum
``sum_k v_k X_k`` is again a draw of the same family with scale multiplied
by the coefficient p-norm.  Everything else in this module measures that
identity (two-sample KS), the resulting moment proportionality
``(E|sum v_k X_k|^r)^(1/r) = c_{p,r} * ||v||_p``, and how fast truncating the
coefficient sequence converges.

Scale convention: moment-ratio estimates are taken against the unit-scale
law S(p, 0, 1, 0) (i.e. sigma = 2^(1/p)), so the reciprocal of the r = 1
ratio is directly the multiplier used by the complexity harness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .rng import CounterStream
from .results import StatResult, VerificationReport, ks_report
from .stable_core import (DomainError, StableParams, abs_moment, sample_range,
                          scale_shift)

__all__ = [
    "CoefVector",
    "p_norm",
    "equivalent_single",
    "kolmogorov_sf",
    "ks_two_sample",
    "verify_stability_law",
    "c_pr_estimate",
    "contraction_constant",
    "lr_truncation_convergence",
]


def p_norm(entries: Sequence[float], p: float) -> float:
    """(sum |v_k|^p)^(1/p), accumulated order-independently.

    Terms are sorted by magnitude and added with exact compensated summation
    (math.fsum), so permuting the entries can never change the result bit.
    """
    if not (1.0 <= p <= 2.0):
        raise DomainError("p must lie in [1, 2]")
    mags = np.sort(np.abs(np.asarray(entries, dtype=np.float64)))
    if mags.size == 0:
        raise DomainError("need at least one entry")
    if not np.isfinite(mags[-1]):
        raise DomainError("entries must be finite")
    return math.fsum(mags ** p) ** (1.0 / p)


@dataclass(frozen=True)
class CoefVector:
    """A finite real coefficient vector paired with its norm exponent p."""

    entries: tuple
    p: float

    def __post_init__(self):
        entries = tuple(float(v) for v in self.entries)
        object.__setattr__(self, "entries", entries)
        if len(entries) == 0:
            raise DomainError("need at least one coefficient")
        if not all(math.isfinite(v) for v in entries):
            raise DomainError("coefficients must be finite")
        if not (1.0 < self.p <= 2.0):
            raise DomainError("p must lie in (1, 2]")

    @property
    def norm(self) -> float:
        return p_norm(self.entries, self.p)

    def __len__(self) -> int:
        return len(self.entries)


def equivalent_single(v: CoefVector, base: StableParams) -> StableParams:
    """Law of sum_k v_k X_k for i.i.d. X_k ~ base (symmetric centered).

    The sum collapses to a single scaled copy: scale is multiplied by
    ||v||_p.  This is only the distribution of the weighted sum when the
    base law is symmetric about zero, hence beta = delta = 0 is enforced.
    """
    if base.alpha != v.p:
        raise DomainError("base.alpha must equal the vector's exponent p")
    if base.beta != 0.0 or base.delta != 0.0:
        raise DomainError("base law must be symmetric centered "
                          "(beta = 0 and delta = 0)")
    norm = v.norm
    if norm == 0.0:
        raise DomainError("coefficient vector must have a nonzero entry")
    return scale_shift(base, norm, 0.0)


# ---------------------------------------------------------------------
# two-sample Kolmogorov-Smirnov with the asymptotic null distribution
# ---------------------------------------------------------------------


def kolmogorov_sf(y: float) -> float:
    """Survival function of the Kolmogorov distribution.

    Two classical series: the alternating form for moderate-to-large y and
    the theta-transformed form near zero where the alternating series
    converges too slowly.
    """
    if y <= 0.0:
        return 1.0
    if y < 1.18:
        # Q(y) = 1 - sqrt(2 pi)/y * sum_{j odd} exp(-j^2 pi^2 / (8 y^2))
        t = math.pi * math.pi / (8.0 * y * y)
        total = 0.0
        for j in (1, 3, 5, 7, 9):
            total += math.exp(-j * j * t)
        return min(1.0, max(0.0, 1.0 - math.sqrt(2.0 * math.pi) / y * total))
    total = 0.0
    sign = 1.0
    for j in range(1, 101):
        term = sign * math.exp(-2.0 * j * j * y * y)
        total += term
        if abs(term) < 1e-17:
            break
        sign = -sign
    return min(1.0, max(0.0, 2.0 * total))


def ks_two_sample(a: Sequence[float], b: Sequence[float]) -> tuple:
    """Two-sample KS statistic and its asymptotic p-value.

    Returns (statistic, p_value) where the p-value uses the limiting
    Kolmogorov distribution at sqrt(n1*n2/(n1+n2)) * D.
    """
    xs = np.sort(np.asarray(a, dtype=np.float64))
    ys = np.sort(np.asarray(b, dtype=np.float64))
    n1, n2 = xs.size, ys.size
    if n1 == 0 or n2 == 0:
        raise DomainError("both samples must be nonempty")
    grid = np.concatenate([xs, ys])
    cdf1 = np.searchsorted(xs, grid, side="right") / n1
    cdf2 = np.searchsorted(ys, grid, side="right") / n2
    d = float(np.max(np.abs(cdf1 - cdf2)))
    en = math.sqrt(n1 * n2 / (n1 + n2))
    return d, kolmogorov_sf(en * d)


def verify_stability_law(v: CoefVector, base: StableParams, n: int,
                         seed: int) -> VerificationReport:
    """KS check that sum_k v_k X_k and its single-law reduction agree.

    Draws n weighted sums and n draws of the reduced law from disjoint
    substreams of the given seed, then runs the two-sample test; passes when
    the p-value clears the fixed 0.01 level.
    """
    if n < 2:
        raise DomainError("need at least two draws per side")
    law = equivalent_single(v, base)
    stream = CounterStream(seed)
    k = len(v)
    weights = np.asarray(v.entries, dtype=np.float64)
    mat = sample_range(base, stream.child(0).seed, 0, n * k).reshape(n, k)
    combined = mat @ weights
    single = sample_range(law, stream.child(1).seed, 0, n)
    stat, p = ks_two_sample(combined, single)
    return ks_report("stability-law", statistic=stat, p_value=p, seed=seed,
                     lhs_trials=n, rhs_trials=n)


# ---------------------------------------------------------------------
# moment ratios and truncation error
# ---------------------------------------------------------------------


def _jackknife_root_mean(powers: np.ndarray, r: float, scale: float,
                         trials: int, seed: int) -> StatResult:
    """StatResult for (mean powers)^(1/r) / scale with leave-one-out stderr."""
    n = powers.size
    total = float(powers.sum())
    est = (total / n) ** (1.0 / r) / scale
    if n < 2:
        return StatResult(estimate=est, stderr=0.0, trials=trials, seed=seed)
    loo = ((total - powers) / (n - 1)) ** (1.0 / r) / scale
    se = math.sqrt((n - 1) / n * float(((loo - loo.mean()) ** 2).sum()))
    return StatResult(estimate=est, stderr=se, trials=trials, seed=seed)


def c_pr_estimate(p: float, r: float, v: CoefVector, trials: int,
                  seed: int) -> StatResult:
    """Monte Carlo (E|sum_k v_k X_k|^r)^(1/r) / ||v||_p, X_k unit-scale p-stable.

    The target is the same for every nonzero v; jackknife gives the
    standard error of the nonlinear root-mean functional.
    """
    if v.p != p:
        raise DomainError("vector exponent must equal p")
    if not (0.0 < r < p):
        raise DomainError("need 0 < r < p")
    if trials < 2:
        raise DomainError("need at least two trials")
    norm = v.norm
    if norm == 0.0:
        raise DomainError("coefficient vector must have a nonzero entry")
    base = StableParams(alpha=p, beta=0.0, gamma=1.0, delta=0.0)
    k = len(v)
    weights = np.asarray(v.entries, dtype=np.float64)
    mat = sample_range(base, seed, 0, trials * k).reshape(trials, k)
    powers = np.abs(mat @ weights) ** r
    return _jackknife_root_mean(powers, r, norm, trials, seed)


def contraction_constant(p: float) -> float:
    """1 / E|X| for the unit-scale p-stable law, by deterministic quadrature.

    By the first-absolute-moment identity
    ``E|sum v_k X_k| = c_{p,1} * ||v||_p`` this is the sharp multiplier with
    ``||v||_p = contraction_constant(p) * E|sum v_k X_k|``, and it is the
    constant the complexity comparisons carry on their stable side.
    """
    if not (1.0 < p < 2.0):
        raise DomainError("p must lie strictly inside (1, 2)")
    unit = StableParams(alpha=p, beta=0.0, gamma=1.0, delta=0.0)
    return 1.0 / abs_moment(unit, 1.0)


def lr_truncation_convergence(v: CoefVector, r: float, cutoffs: Sequence[int],
                              trials: int, seed: int,
                              chunk: int = 512) -> list:
    """L_r error of truncating the weighted sum after K terms, per cutoff.

    Estimates ``(E|sum_{k<=len} v_k X_k - sum_{k<=K} v_k X_k|^r)^(1/r)`` for
    each K with a single shared set of draws (the same X matrix serves every
    cutoff), so the estimates differ only through the tail terms themselves
    and the sequence decreases without independent-sampling noise between
    rows.  Returns [(K, StatResult), ...] in the given cutoff order.
    """
    k_len = len(v)
    cuts = [int(c) for c in cutoffs]
    if len(cuts) == 0:
        raise DomainError("need at least one cutoff")
    if any(c < 0 or c > k_len for c in cuts):
        raise DomainError("cutoffs must lie in [0, len(v)]")
    if not (0.0 < r < v.p):
        raise DomainError("need 0 < r < p")
    if trials < 2:
        raise DomainError("need at least two trials")
    base = StableParams(alpha=v.p, beta=0.0, gamma=1.0, delta=0.0)
    weights = np.asarray(v.entries, dtype=np.float64)
    powers = {c: np.empty(trials, dtype=np.float64) for c in cuts}
    done = 0
    while done < trials:
        m = min(chunk, trials - done)
        mat = sample_range(base, seed, done * k_len, (done + m) * k_len)
        terms = mat.reshape(m, k_len) * weights
        np.cumsum(terms, axis=1, out=terms)
        full = terms[:, -1]
        for c in cuts:
            partial = terms[:, c - 1] if c > 0 else 0.0
            powers[c][done:done + m] = np.abs(full - partial) ** r
        done += m
    return [(c, _jackknife_root_mean(powers[c], r, 1.0, trials, seed))
            for c in cuts]
