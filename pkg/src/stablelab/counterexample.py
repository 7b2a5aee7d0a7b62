"""Sharp failure of naive sign-to-stable comparison at the coordinate family.

The family picks out coordinates of the sign vector: member ``s`` of the
index class assigns to row ``i`` the value ``1`` when ``s_i = +1`` and ``0``
otherwise.  Under a Rademacher average the supremum over members collapses
to counting positive signs, so the left side grows like ``n / 2``.  Any
bound routed through an l_p norm of the coordinate coefficients is capped
by ``n ** (1/p)``, and the quotient of the two diverges for every
``p > 1``.  This module evaluates both sides exactly, tabulates the
quotient along a schedule of dimensions, and backs the closed forms with a
Monte Carlo estimate and a fully enumerated symmetric control case.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .rng import CounterStream
from .results import StatResult
from .stable_core import DomainError


def _root(n: int, p: float) -> float:
    # 2**(log2(n)/p) keeps n**(1/p) exact when both log2(n) and the
    # quotient are representable, e.g. n a power of two and p = 1.5.
    if p == 1.0:
        return float(n)
    return 2.0 ** (math.log2(n) / p)


@dataclass(frozen=True)
class CounterexampleRow:
    """One dimension of the divergence table.

    ``lhs`` is the exact Rademacher average of the coordinate family,
    ``rhs_bound`` the l_p cap ``n ** (1/p)``, and ``ratio`` their quotient.
    """

    n: int
    p: float
    lhs: float
    rhs_bound: float
    ratio: float

    def __post_init__(self) -> None:
        if self.n < 1:
            raise DomainError("n must be at least 1")
        if not 1.0 <= self.p <= 2.0:
            raise DomainError("p must lie in [1, 2]")

    @property
    def divergent(self) -> bool:
        """Whether the ratio grows without bound as n increases."""
        return self.p > 1.0


def counterexample_exact(n: int, p: float) -> CounterexampleRow:
    """Exact left side, right-side cap, and their ratio at dimension n.

    The supremum over the coordinate family equals the number of positive
    signs, whose mean is exactly n/2.  No sampling is involved.
    """
    if not 1.0 < p <= 2.0:
        raise DomainError("p must lie in (1, 2]")
    if n < 1:
        raise DomainError("n must be at least 1")
    lhs = n / 2.0
    rhs = _root(n, p)
    return CounterexampleRow(n=n, p=p, lhs=lhs, rhs_bound=rhs, ratio=lhs / rhs)


def divergence_table(ns: list[int], p: float) -> list[CounterexampleRow]:
    """Rows of exact ratios along a schedule of dimensions.

    Accepts p = 1 as the boundary case: there the ratio is constant 1/2
    and the rows report divergent = False.
    """
    if not 1.0 <= p <= 2.0:
        raise DomainError("p must lie in [1, 2]")
    if not ns:
        raise DomainError("dimension schedule must be nonempty")
    rows = []
    for n in ns:
        if n < 1:
            raise DomainError("n must be at least 1")
        lhs = n / 2.0
        rhs = _root(n, p)
        rows.append(CounterexampleRow(n=n, p=p, lhs=lhs, rhs_bound=rhs,
                                      ratio=lhs / rhs))
    return rows


def counterexample_mc(n: int, p: float, trials: int,
                      seed: int) -> tuple[CounterexampleRow, StatResult]:
    """Monte Carlo check of the exact left side.

    Each trial draws a sign vector and evaluates the supremum through the
    counting identity sup_s sum_i e_i psi_i(s) = #{e_i = +1}.  Returns the
    exact row alongside the estimate so callers can compare.
    """
    row = counterexample_exact(n, p)
    if trials < 2:
        raise DomainError("need at least 2 trials")
    stream = CounterStream(seed)
    sups = np.empty(trials)
    chunk = max(1, (1 << 20) // n)
    done = 0
    while done < trials:
        take = min(chunk, trials - done)
        eps = stream.signs(done * n, (done + take) * n).reshape(take, n)
        sups[done:done + take] = (eps > 0.0).sum(axis=1)
        done += take
    est = float(sups.mean())
    err = float(sups.std(ddof=1) / math.sqrt(trials))
    return row, StatResult(estimate=est, stderr=err, trials=trials, seed=seed)


def sphere_family_case(n: int) -> tuple[float, float]:
    """Exact (left, right) pair for the all-ones singleton family.

    With a single member assigning 1 to every row there is nothing to
    maximise over, the statistic is the plain sign sum, and its average
    vanishes by symmetry.  Enumeration runs over sign-count classes with
    integer weights, so it is exact at any n, including dimensions far
    beyond direct 2**n enumeration.  The right side is the l_1 mass n,
    making the pair (0, n): a family where the naive comparison is as
    slack as it can be.
    """
    if n < 1:
        raise DomainError("n must be at least 1")
    total = 0
    for k in range(n + 1):
        # k negatives leave a sign sum of n - 2k; weight by class size.
        total += math.comb(n, k) * (n - 2 * k)
    lhs = float(total) / float(2 ** n)
    return lhs, float(n)
