"""Empirical comparison of sign-based and stable-based complexity functionals.

A problem instance is a finite table: ``n`` slots, ``m`` hypotheses, and for
each slot a scalar row ``psi[i][s]`` together with a vector row
``phi[i][:, s]`` in R^K, coupled by the Lipschitz condition

    psi[i][s] - psi[i][s'] <= || phi[i][:, s] - phi[i][:, s'] ||_p .

The quantity on the sign side is the exact Rademacher functional
``2^-n sum_eps max_s sum_i eps_i psi[i][s]``; on the stable side each sign
is replaced by a fresh vector of i.i.d. unit-scale p-stable multipliers
applied to phi.  The comparison multiplies the stable side by
``contraction_constant(p)`` and passes when the sign side does not exceed it
beyond three standard errors.

With p = 2 the stable multipliers can be replaced by doubly indexed signs at
the cost of a fixed sqrt(2) factor; that variant is checked separately.

Monte Carlo standard errors on stable functionals use batch means (100
batches) instead of the plain variance estimate: per-trial sups of stable
sums are heavy-tailed and the plain estimate is badly behaved.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .empirical_sums import contraction_constant
from .results import StatResult, VerificationReport, inequality_report
from .rng import CounterStream
from .stable_core import DomainError, StableParams, sample_range

__all__ = [
    "TableFormatError",
    "FunctionClassTable",
    "PiecewiseLinear",
    "check_lipschitz",
    "rademacher_complexity_exact",
    "rademacher_complexity_mc",
    "stable_complexity_mc",
    "verify_lemma_instance",
    "verify_vector_contraction",
    "verify_scalar_contraction",
    "verify_corollary_p2",
    "gen_instance",
    "gen_offset",
    "table_to_json",
    "table_from_json",
    "EXACT_ENUM_MAX",
]


class TableFormatError(ValueError):
    """A serialized instance table is malformed or violates an invariant."""


# exhaustive sign enumeration is 2^n; past this n the caller must sample
EXACT_ENUM_MAX = 22

# slack for floating-point noise when checking Lipschitz couplings exactly
_COUPLING_TOL = 1e-9


@dataclass(frozen=True)
class FunctionClassTable:
    """An (n, m, K, p) instance: psi is n x m, phi is n x K x m."""

    psi: np.ndarray
    phi: np.ndarray
    p: float

    def __post_init__(self):
        psi = np.array(self.psi, dtype=np.float64)
        phi = np.array(self.phi, dtype=np.float64)
        if psi.ndim != 2:
            raise TableFormatError("psi must be a 2-d array (n x m)")
        if phi.ndim != 3:
            raise TableFormatError("phi must be a 3-d array (n x K x m)")
        if phi.shape[0] != psi.shape[0] or phi.shape[2] != psi.shape[1]:
            raise TableFormatError("psi and phi disagree on n or m")
        if psi.shape[0] < 1 or psi.shape[1] < 1 or phi.shape[1] < 1:
            raise TableFormatError("n, m and K must all be at least 1")
        if not (np.isfinite(psi).all() and np.isfinite(phi).all()):
            raise TableFormatError("table entries must be finite")
        if not (1.0 < self.p <= 2.0):
            raise TableFormatError("p must lie in (1, 2]")
        psi.setflags(write=False)
        phi.setflags(write=False)
        object.__setattr__(self, "psi", psi)
        object.__setattr__(self, "phi", phi)

    @property
    def n(self) -> int:
        return self.psi.shape[0]

    @property
    def m(self) -> int:
        return self.psi.shape[1]

    @property
    def K(self) -> int:
        return self.phi.shape[1]


def check_lipschitz(table: FunctionClassTable, max_report: int = 100) -> list:
    """Full pairwise scan of the coupling; returns violations, empty if none.

    Each violation is (i, s, s_prime, gap) with
    gap = psi[i][s] - psi[i][s'] - ||phi[i][:,s] - phi[i][:,s']||_p > 0
    beyond floating-point slack.
    """
    out = []
    for i in range(table.n):
        row = table.psi[i]
        slab = table.phi[i]
        dpsi = row[:, None] - row[None, :]
        dphi = np.abs(slab[:, :, None] - slab[:, None, :])
        norms = (dphi ** table.p).sum(axis=0) ** (1.0 / table.p)
        gaps = dpsi - norms
        bad = np.argwhere(gaps > _COUPLING_TOL)
        for s, s2 in bad:
            out.append((i, int(s), int(s2), float(gaps[s, s2])))
            if len(out) >= max_report:
                return out
    return out


# ---------------------------------------------------------------------
# complexity functionals
# ---------------------------------------------------------------------

_ENUM_BLOCK = 1 << 16  # fixed block size keeps the reduction order stable


def rademacher_complexity_exact(values) -> float:
    """2^-n * sum over all sign vectors of max_s sum_i eps_i values[i][s].

    Exhaustive enumeration; rejects n > EXACT_ENUM_MAX (use the Monte Carlo
    variant there).  Blocks of sign vectors are visited in a fixed order so
    repeated calls return the identical float.
    """
    a = np.asarray(values, dtype=np.float64)
    if a.ndim != 2:
        raise DomainError("values must be a 2-d table (n x m)")
    n, _ = a.shape
    if n > EXACT_ENUM_MAX:
        raise DomainError(
            f"exact enumeration is limited to n <= {EXACT_ENUM_MAX}; "
            "use rademacher_complexity_mc")
    count = 1 << n
    bits = np.arange(n, dtype=np.uint32)
    total = 0.0
    for lo in range(0, count, _ENUM_BLOCK):
        codes = np.arange(lo, min(lo + _ENUM_BLOCK, count), dtype=np.uint32)
        signs = (((codes[:, None] >> bits) & 1) * 2.0 - 1.0)
        total += float((signs @ a).max(axis=1).sum())
    return total / count


def rademacher_complexity_mc(values, trials: int, seed: int) -> StatResult:
    """Monte Carlo version of the sign functional with plain stderr.

    Per-trial sups are bounded by sum_i max_s |values[i][s]|, so the usual
    sample standard error is reliable here.
    """
    a = np.asarray(values, dtype=np.float64)
    if a.ndim != 2:
        raise DomainError("values must be a 2-d table (n x m)")
    if trials < 2:
        raise DomainError("need at least two trials")
    n, _ = a.shape
    signs = CounterStream(seed).signs(0, trials * n).reshape(trials, n)
    sups = (signs @ a).max(axis=1)
    se = float(sups.std(ddof=1)) / math.sqrt(trials)
    return StatResult(estimate=float(sups.mean()), stderr=se,
                      trials=trials, seed=seed)


_BATCHES = 100


def _batch_stderr(sups: np.ndarray) -> float:
    """Standard error of the mean from batch means (heavy-tail robust)."""
    b = min(_BATCHES, sups.size)
    if b < 2:
        return 0.0
    means = np.array([chunk.mean() for chunk in np.array_split(sups, b)])
    return float(means.std(ddof=1)) / math.sqrt(b)


_MC_CHUNK = 1 << 14


def stable_complexity_mc(table: FunctionClassTable, params: StableParams,
                         trials: int, seed: int) -> StatResult:
    """E max_s sum_{i,k} X_{ik} phi[i][k][s] by Monte Carlo.

    The multipliers X are i.i.d. draws of the given symmetric centered law,
    whose index must match the table exponent.  Stderr from 100 batch means.
    """
    if params.alpha != table.p:
        raise DomainError("multiplier law must have alpha equal to table.p")
    if params.beta != 0.0 or params.delta != 0.0:
        raise DomainError("multiplier law must be symmetric centered")
    if trials < 2:
        raise DomainError("need at least two trials")
    flat = table.phi.reshape(table.n * table.K, table.m)
    width = flat.shape[0]
    sups = np.empty(trials, dtype=np.float64)
    done = 0
    while done < trials:
        c = min(_MC_CHUNK, trials - done)
        x = sample_range(params, seed, done * width, (done + c) * width)
        sups[done:done + c] = (x.reshape(c, width) @ flat).max(axis=1)
        done += c
    return StatResult(estimate=float(sups.mean()), stderr=_batch_stderr(sups),
                      trials=trials, seed=seed)


# ---------------------------------------------------------------------
# verification routines
# ---------------------------------------------------------------------


def verify_vector_contraction(table: FunctionClassTable, trials: int,
                              seed: int) -> VerificationReport:
    """Exact sign side vs constant * Monte Carlo stable side for one table."""
    bad = check_lipschitz(table)
    if bad:
        raise DomainError(f"table violates its Lipschitz coupling: {bad[:3]}")
    if not (1.0 < table.p < 2.0):
        raise DomainError("stable comparison needs p strictly inside (1, 2)")
    lhs = rademacher_complexity_exact(table.psi)
    unit = StableParams(alpha=table.p, beta=0.0, gamma=1.0, delta=0.0)
    rhs = stable_complexity_mc(table, unit, trials, seed)
    return inequality_report(
        "vector-contraction", lhs=lhs, rhs=rhs.estimate,
        constant=contraction_constant(table.p), rhs_err=rhs.stderr,
        seed=seed, rhs_trials=trials)


def verify_corollary_p2(table: FunctionClassTable, trials: int,
                        seed: int) -> VerificationReport:
    """Euclidean variant: doubly indexed signs on the right, constant sqrt(2)."""
    if table.p != 2.0:
        raise DomainError("this comparison is the p = 2 case only")
    bad = check_lipschitz(table)
    if bad:
        raise DomainError(f"table violates its Lipschitz coupling: {bad[:3]}")
    if trials < 2:
        raise DomainError("need at least two trials")
    lhs = rademacher_complexity_exact(table.psi)
    flat = table.phi.reshape(table.n * table.K, table.m)
    signs = CounterStream(seed).signs(0, trials * flat.shape[0])
    sups = (signs.reshape(trials, flat.shape[0]) @ flat).max(axis=1)
    se = float(sups.std(ddof=1)) / math.sqrt(trials)
    return inequality_report(
        "corollary-p2", lhs=lhs, rhs=float(sups.mean()),
        constant=math.sqrt(2.0), rhs_err=se, seed=seed, rhs_trials=trials)


def verify_lemma_instance(psi, phi, f, p: float, trials: int,
                          seed: int) -> VerificationReport:
    """Single-slot comparison with an arbitrary offset inside the sup.

    Left side, exact over the fair sign:
        0.5 * [max_s (psi[s] + f[s]) + max_s (-psi[s] + f[s])].
    Right side, Monte Carlo with C = contraction_constant(p):
        C * E max_s (sum_k X_k phi[k][s] + f[s] / C),
    i.e. the offset rides inside the sup with the stable part scaled by C;
    the report stores E max_s(sum_k X_k phi[k][s] + f[s]/C) as rhs so that
    constant * rhs is exactly the right side above.
    """
    psi = np.asarray(psi, dtype=np.float64)
    phi = np.asarray(phi, dtype=np.float64)
    f = np.asarray(f, dtype=np.float64)
    if psi.ndim != 1 or f.shape != psi.shape:
        raise DomainError("psi and f must be vectors of the same length m")
    if phi.ndim != 2 or phi.shape[1] != psi.shape[0]:
        raise DomainError("phi must be K x m")
    if not (np.isfinite(psi).all() and np.isfinite(phi).all()
            and np.isfinite(f).all()):
        raise DomainError("inputs must be finite")
    if not (1.0 < p < 2.0):
        raise DomainError("stable comparison needs p strictly inside (1, 2)")
    table = FunctionClassTable(psi=psi[None, :], phi=phi[None, :, :], p=p)
    bad = check_lipschitz(table)
    if bad:
        raise DomainError(f"instance violates its Lipschitz coupling: {bad[:3]}")
    if trials < 2:
        raise DomainError("need at least two trials")
    c = contraction_constant(p)
    lhs = 0.5 * (float(np.max(psi + f)) + float(np.max(-psi + f)))
    unit = StableParams(alpha=p, beta=0.0, gamma=1.0, delta=0.0)
    k = phi.shape[0]
    x = sample_range(unit, seed, 0, trials * k).reshape(trials, k)
    sups = (x @ phi + f / c).max(axis=1)
    return inequality_report(
        "lemma-instance", lhs=lhs, rhs=float(sups.mean()), constant=c,
        rhs_err=_batch_stderr(sups), seed=seed, rhs_trials=trials)


def verify_scalar_contraction(f_values, h_funcs: Sequence[Callable], L: float,
                              trials: Optional[int] = None,
                              seed: Optional[int] = None) -> VerificationReport:
    """Sign functional of h_i(f_values[i][s]) vs L times that of f_values.

    Each h_i must be L-Lipschitz on the row's value range; this is verified
    by a full pairwise scan before anything is estimated.  With
    ``trials=None`` both sides are enumerated exactly (n <= EXACT_ENUM_MAX);
    otherwise both sides share one set of sign draws.
    """
    a = np.asarray(f_values, dtype=np.float64)
    if a.ndim != 2:
        raise DomainError("f_values must be a 2-d table (n x m)")
    if not np.isfinite(a).all():
        raise DomainError("f_values must be finite")
    n, _ = a.shape
    if len(h_funcs) != n:
        raise DomainError("need exactly one h per row")
    if not (L > 0.0) or math.isinf(L):
        raise DomainError("L must be positive and finite")
    h_table = np.empty_like(a)
    for i, h in enumerate(h_funcs):
        h_table[i] = np.asarray(h(a[i]), dtype=np.float64)
        row = a[i]
        hrow = h_table[i]
        gaps = np.abs(hrow[:, None] - hrow[None, :]) \
            - L * np.abs(row[:, None] - row[None, :])
        if gaps.max() > _COUPLING_TOL * max(1.0, L):
            s, s2 = np.unravel_index(int(gaps.argmax()), gaps.shape)
            raise DomainError(
                f"h[{i}] is not {L}-Lipschitz on its row: "
                f"|h({row[s]}) - h({row[s2]})| exceeds L*|x - y|")
    if trials is None:
        lhs = rademacher_complexity_exact(h_table)
        rhs = rademacher_complexity_exact(a)
        return inequality_report("scalar-contraction", lhs=lhs, rhs=rhs,
                                 constant=L, seed=seed)
    if seed is None:
        raise DomainError("Monte Carlo mode needs a seed")
    if trials < 2:
        raise DomainError("need at least two trials")
    signs = CounterStream(seed).signs(0, trials * n).reshape(trials, n)
    lsup = (signs @ h_table).max(axis=1)
    rsup = (signs @ a).max(axis=1)
    return inequality_report(
        "scalar-contraction",
        lhs=float(lsup.mean()), lhs_err=float(lsup.std(ddof=1)) / math.sqrt(trials),
        rhs=float(rsup.mean()), rhs_err=float(rsup.std(ddof=1)) / math.sqrt(trials),
        constant=L, seed=seed, lhs_trials=trials, rhs_trials=trials)


# ---------------------------------------------------------------------
# instance generation
# ---------------------------------------------------------------------


class PiecewiseLinear:
    """Piecewise-linear scalar function on a fixed knot grid.

    Defined by its value at the first knot and one slope per segment;
    constant beyond the ends (so the slope bound is also the global
    Lipschitz constant).  Callable on scalars or arrays.
    """

    def __init__(self, knots: Sequence[float], start_value: float,
                 slopes: Sequence[float]):
        knots = np.asarray(knots, dtype=np.float64)
        slopes = np.asarray(slopes, dtype=np.float64)
        if knots.ndim != 1 or knots.size < 2:
            raise DomainError("need at least two knots")
        if np.any(np.diff(knots) <= 0.0):
            raise DomainError("knots must be strictly increasing")
        if slopes.shape != (knots.size - 1,):
            raise DomainError("need exactly one slope per segment")
        if not (np.isfinite(knots).all() and np.isfinite(slopes).all()
                and math.isfinite(start_value)):
            raise DomainError("knots, slopes and start value must be finite")
        self.knots = knots
        self.slopes = slopes
        steps = slopes * np.diff(knots)
        self.values = start_value + np.concatenate([[0.0], np.cumsum(steps)])

    @property
    def lipschitz_bound(self) -> float:
        return float(np.max(np.abs(self.slopes)))

    def __call__(self, x):
        return np.interp(x, self.knots, self.values)


def _random_pwl(stream: CounterStream, lo: float, hi: float,
                step: float = 0.5) -> PiecewiseLinear:
    """1-Lipschitz piecewise-linear function: slopes uniform on [-1, 1]."""
    count = max(2, int(math.ceil((hi - lo) / step)) + 1)
    knots = lo + step * np.arange(count)
    slopes = 2.0 * stream.uniforms(0, count - 1) - 1.0
    return PiecewiseLinear(knots, 0.0, slopes)


def gen_instance(n: int, K: int, m: int, p: float, seed: int) -> FunctionClassTable:
    """Random valid instance: phi uniform on [-1, 1], psi a 1-Lipschitz image.

    psi[i][s] is h_i(||phi[i][:, s]||_p) for a random 1-Lipschitz
    piecewise-linear h_i, which satisfies the coupling by the triangle
    inequality, so every generated table passes check_lipschitz by
    construction.
    """
    if n < 1 or K < 1 or m < 1:
        raise DomainError("n, K and m must all be at least 1")
    if not (1.0 < p <= 2.0):
        raise DomainError("p must lie in (1, 2]")
    stream = CounterStream(seed)
    phi = (2.0 * stream.child(0).uniforms(0, n * K * m) - 1.0).reshape(n, K, m)
    norms = (np.abs(phi) ** p).sum(axis=1) ** (1.0 / p)   # n x m
    hi = K ** (1.0 / p) + 0.5
    psi = np.empty((n, m), dtype=np.float64)
    for i in range(n):
        h = _random_pwl(stream.child(1 + i), 0.0, hi)
        psi[i] = h(norms[i])
    return FunctionClassTable(psi=psi, phi=phi, p=p)


def gen_offset(m: int, scale: float, seed: int) -> np.ndarray:
    """Offset vector with entries uniform on [-scale, scale]."""
    if m < 1:
        raise DomainError("m must be at least 1")
    if not (scale >= 0.0) or math.isinf(scale):
        raise DomainError("scale must be nonnegative and finite")
    return scale * (2.0 * CounterStream(seed).uniforms(0, m) - 1.0)


# ---------------------------------------------------------------------
# serialization (wire format: {n, m, K, p, psi, phi})
# ---------------------------------------------------------------------


def table_to_json(table: FunctionClassTable) -> str:
    doc = {
        "n": table.n,
        "m": table.m,
        "K": table.K,
        "p": table.p,
        "psi": table.psi.tolist(),
        "phi": table.phi.tolist(),
    }
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def table_from_json(text: str) -> FunctionClassTable:
    """Parse and validate a serialized table; TableFormatError on any defect."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TableFormatError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise TableFormatError("top level must be an object")
    for key in ("n", "m", "K", "p", "psi", "phi"):
        if key not in doc:
            raise TableFormatError(f"missing required field {key!r}")
    n, m, k = doc["n"], doc["m"], doc["K"]
    if not all(isinstance(v, int) and v >= 1 for v in (n, m, k)):
        raise TableFormatError("n, m and K must be integers >= 1")
    if not isinstance(doc["p"], (int, float)):
        raise TableFormatError("p must be a number")
    try:
        psi = np.asarray(doc["psi"], dtype=np.float64)
        phi = np.asarray(doc["phi"], dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise TableFormatError(f"psi/phi are not rectangular arrays: {exc}") from exc
    if psi.shape != (n, m):
        raise TableFormatError(f"psi must have shape ({n}, {m}), got {psi.shape}")
    if phi.shape != (n, k, m):
        raise TableFormatError(f"phi must have shape ({n}, {k}, {m}), got {phi.shape}")
    return FunctionClassTable(psi=psi, phi=phi, p=float(doc["p"]))
