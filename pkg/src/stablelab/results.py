"""Result records shared by the estimation and verification routines."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

__all__ = ["StatResult", "VerificationReport", "KS_PASS_LEVEL"]

# significance level for distribution-equality checks: pass iff p_value > this
KS_PASS_LEVEL = 0.01


@dataclass(frozen=True)
class StatResult:
    """A Monte Carlo estimate with its standard error and provenance."""

    estimate: float
    stderr: float
    trials: int
    seed: int

    def __post_init__(self):
        if self.stderr < 0.0:
            raise ValueError("stderr must be nonnegative")
        if self.trials < 1:
            raise ValueError("trials must be positive")


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of one verification run.

    Two verdict rules exist, selected by which fields are populated:

    * inequality reports: pass iff
      ``lhs <= constant * rhs + 3 * (lhs_err + constant * rhs_err)``;
    * distribution-equality reports (``p_value`` set): pass iff
      ``p_value > KS_PASS_LEVEL``.

    ``lhs_err``/``rhs_err`` are 0 for sides computed exactly.  ``verdict`` is
    stored but always recomputable from the other fields.
    """

    name: str
    verdict: str
    lhs: Optional[float] = None
    lhs_err: float = 0.0
    rhs: Optional[float] = None
    rhs_err: float = 0.0
    constant: Optional[float] = None
    statistic: Optional[float] = None
    p_value: Optional[float] = None
    seed: Optional[int] = None
    lhs_trials: int = 0
    rhs_trials: int = 0

    def __post_init__(self):
        if self.verdict not in ("pass", "fail"):
            raise ValueError("verdict must be 'pass' or 'fail'")
        if self.lhs_err < 0.0 or self.rhs_err < 0.0:
            raise ValueError("error fields must be nonnegative")
        if self.verdict != self.recompute_verdict():
            raise ValueError("stored verdict disagrees with its fields")

    def recompute_verdict(self) -> str:
        if self.p_value is not None:
            return "pass" if self.p_value > KS_PASS_LEVEL else "fail"
        if self.lhs is None or self.rhs is None or self.constant is None:
            raise ValueError("report has neither a p-value nor both sides")
        margin = 3.0 * (self.lhs_err + self.constant * self.rhs_err)
        ok = self.lhs <= self.constant * self.rhs + margin
        return "pass" if ok else "fail"

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_dict(self) -> dict:
        """Plain dict with absent (None) fields omitted; stable key order."""
        out = {}
        for key in ("name", "lhs", "lhs_err", "rhs", "rhs_err", "constant",
                    "statistic", "p_value", "verdict", "seed",
                    "lhs_trials", "rhs_trials"):
            val = getattr(self, key)
            if val is None:
                continue
            out[key] = val
        return out


def inequality_report(name: str, lhs: float, rhs: float, constant: float,
                      lhs_err: float = 0.0, rhs_err: float = 0.0,
                      seed: Optional[int] = None,
                      lhs_trials: int = 0, rhs_trials: int = 0,
                      statistic: Optional[float] = None) -> VerificationReport:
    margin = 3.0 * (lhs_err + constant * rhs_err)
    verdict = "pass" if lhs <= constant * rhs + margin else "fail"
    return VerificationReport(
        name=name, verdict=verdict, lhs=lhs, lhs_err=lhs_err, rhs=rhs,
        rhs_err=rhs_err, constant=constant, statistic=statistic, seed=seed,
        lhs_trials=lhs_trials, rhs_trials=rhs_trials)


def ks_report(name: str, statistic: float, p_value: float,
              seed: Optional[int] = None,
              lhs_trials: int = 0, rhs_trials: int = 0) -> VerificationReport:
    verdict = "pass" if p_value > KS_PASS_LEVEL else "fail"
    return VerificationReport(
        name=name, verdict=verdict, statistic=statistic, p_value=p_value,
        seed=seed, lhs_trials=lhs_trials, rhs_trials=rhs_trials)
