"""Closed-form predictions, thresholds and regime classification.

All logarithms are natural. Exponential factors of the form (1 - p^k)^a are
evaluated in log space so that n up to 1e9 does not underflow prematurely.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ._util import ceil_tol, pow1m
from .exceptions import NoValidK
from .lowerbound_stats import size_parameter_s, truncation_x

__all__ = [
    "f_exponent",
    "predicted_main1",
    "predicted_main2",
    "Thresholds",
    "thresholds",
    "REGIMES",
    "regime_classify",
    "assumptions_hold",
    "lower_bound_value",
    "canonical_k",
    "default_k_max",
    "best_k",
    "BoundParams",
    "bound_params",
]

REGIMES = ("constant", "chromatic", "p32", "inverse_p")


def f_exponent(x: float) -> float:
    """Exponent of the typical clique chromatic number when np = n^x."""
    if not 0.0 < x < 1.0:
        raise ValueError("x must lie in (0, 1)")
    left = x if x < 0.5 else 0.0
    return max(left, min((3.0 * x - 1.0) / 2.0, 1.0 - x))


def _chromatic_term(n, p, denom):
    return math.exp(-n * p * p) * n * p / denom


def _p32_term(n, p):
    return p ** 1.5 * n / math.sqrt(math.log(n))


def predicted_main1(n: float, p: float) -> float:
    """max{e^(-np^2) np / log(np), p^(3/2) n / sqrt(log n)}."""
    if n * p <= 1.0:
        raise ValueError("need np > 1")
    return max(_chromatic_term(n, p, math.log(n * p)), _p32_term(n, p))


def predicted_main2(n: float, p: float) -> float:
    """max{1, e^(-np^2) np / log n, min{p^(3/2) n / sqrt(log n), 1/p}}."""
    if n < 2:
        raise ValueError("need n >= 2")
    if not 0.0 < p <= 1.0:
        raise ValueError("p must lie in (0, 1]")
    return max(1.0, _chromatic_term(n, p, math.log(n)), min(_p32_term(n, p), 1.0 / p))


@dataclass(frozen=True)
class Thresholds:
    """Transition probabilities for a given n; ``None`` marks a negative radicand."""

    n: float
    C: float
    p0: float
    p0_star: float
    p1: float | None
    p2: float
    p1_star: float | None

    def ordered(self) -> bool:
        """p0 < p0* < p1* < p1 < p2 over the fields that are defined."""
        seq = [self.p0, self.p0_star, self.p1_star, self.p1, self.p2]
        seq = [v for v in seq if v is not None]
        return all(a < b for a, b in zip(seq, seq[1:]))

    def as_dict(self) -> dict:
        return {"p0": self.p0, "p0_star": self.p0_star, "p1": self.p1,
                "p2": self.p2, "p1_star": self.p1_star}


def thresholds(n: float, C: float = math.e) -> Thresholds:
    if n <= math.e:
        raise ValueError("need n > e so that log log n is defined")
    L = math.log(n)
    LL = math.log(L)
    r1 = L - 3.0 * LL
    r1s = L - 5.0 * LL - 4.0 * math.log(24.0 * C)
    return Thresholds(
        n=n,
        C=C,
        p0=L / n,
        p0_star=n ** -0.6,
        p1=math.sqrt(r1 / (4.0 * n)) if r1 > 0 else None,
        p2=(L / n ** 2) ** 0.2,
        p1_star=math.sqrt(r1s / (4.0 * n)) if r1s > 0 else None,
    )


def regime_classify(n: float, p: float) -> tuple[str, float]:
    """Which term dominates the two-sided estimate, by the threshold cases.

    Cases are closed on the left threshold: p <= p0 constant, p0 < p <= p1
    chromatic-like, p1 < p <= p2 the p^(3/2) term, p > p2 the 1/p term. When
    p1 is undefined (small n) the larger of the two middle terms decides.
    """
    predicted_main2(n, p)  # argument validation
    th = thresholds(n)
    chrom = _chromatic_term(n, p, math.log(n))
    p32 = _p32_term(n, p)
    if p <= th.p0:
        return "constant", 1.0
    if p > th.p2:
        return "inverse_p", 1.0 / p
    if th.p1 is None:
        return ("chromatic", chrom) if chrom >= p32 else ("p32", p32)
    if p <= th.p1:
        return "chromatic", chrom
    return "p32", p32


def _check_lower_args(p, k, C, tau=None):
    if not 0.0 < p < 1.0:
        raise ValueError("p must lie in (0, 1)")
    if k < 2 or int(k) != k:
        raise ValueError("k must be an integer >= 2")
    if C < math.e:
        raise ValueError("C must be at least e")
    if tau is not None and not 0.0 < tau < 1.0:
        raise ValueError("tau must lie in (0, 1)")


def assumptions_hold(n: float, p: float, k: int, C: float = math.e, tau: float = 0.4) -> tuple[bool, dict]:
    """Evaluate the range and density assumptions of the lower-bound theorem.

    Margins are slack ratios, >= 1 when the condition holds:
    ``lower`` = p / n^(-1+tau), ``upper`` = (upper limit on p) / p, and
    ``density`` = left side / right side of the k >= 3 density condition
    (infinite for k = 2, where the right side vanishes).
    """
    _check_lower_args(p, k, C, tau)
    log_inv_p = math.log(1.0 / p)
    lower = p / n ** (-1.0 + tau)
    upper_limit = (1.0 / (6.0 * C)
                   * (k * k * log_inv_p * n * p) ** (-1.0 / (2.0 * (k - 1)))
                   * pow1m(p, k, n / (k - 1)))
    upper = upper_limit / p
    if k >= 3:
        lhs = max(n * p * p, p ** (-(k - 2) / 2.0)) * pow1m(p, k, n * (k - 2) / (k - 1))
        density = lhs / (k ** 5 * log_inv_p)
    else:
        density = math.inf
    margins = {"lower": lower, "upper": upper, "density": density}
    return all(v >= 1.0 for v in margins.values()), margins


def lower_bound_value(n: float, p: float, k: int, C: float = math.e) -> float:
    """C^-2 min{1/p, p^(k/2) n / [k! k log(1/p)]^(1/(k-1))} (1 - p^k)^(n/(k-1))."""
    _check_lower_args(p, k, C)
    root = math.exp((math.lgamma(k + 1) + math.log(k) + math.log(math.log(1.0 / p))) / (k - 1))
    inner = min(1.0 / p, p ** (k / 2.0) * n / root)
    return inner * pow1m(p, k, n / (k - 1)) / (C * C)


def canonical_k(n: float, p: float) -> int:
    """ceil(log_{1/p} n), defined for p2(n) <= p < 1."""
    th = thresholds(n)
    if not th.p2 <= p < 1.0:
        raise ValueError(f"p must lie in [p2, 1) = [{th.p2:.6g}, 1)")
    return ceil_tol(math.log(n) / math.log(1.0 / p))


def default_k_max(n: float, p: float) -> int:
    """ceil(2 log_{1/p} n), the largest k the assumptions can admit."""
    return max(2, ceil_tol(2.0 * math.log(n) / math.log(1.0 / p)))


def best_k(n: float, p: float, C: float = math.e, tau: float = 0.4,
           k_max: int | None = None) -> tuple[int, float]:
    """The admissible k in [2, k_max] with the largest lower bound (smallest k on ties)."""
    if k_max is None:
        k_max = default_k_max(n, p)
    if k_max < 2:
        raise ValueError("k_max must be at least 2")
    best = None
    for k in range(2, k_max + 1):
        ok, _ = assumptions_hold(n, p, k, C, tau)
        if not ok:
            continue
        val = lower_bound_value(n, p, k, C)
        if best is None or val > best[1]:
            best = (k, val)
    if best is None:
        raise NoValidK(f"no k in [2, {k_max}] satisfies the assumptions at n={n}, p={p}")
    return best


@dataclass(frozen=True)
class BoundParams:
    n: float
    p: float
    k: int
    C: float
    tau: float
    s: float
    s_int: int
    x: int
    lower_bound_value: float
    assumptions_ok: bool
    margins: dict

    def as_dict(self) -> dict:
        return {
            "n": self.n, "p": self.p, "k": self.k, "C": self.C, "tau": self.tau,
            "s": self.s, "s_int": self.s_int, "x": self.x,
            "lower_bound_value": self.lower_bound_value,
            "assumptions_ok": self.assumptions_ok, "margins": self.margins,
        }


def bound_params(n: float, p: float, k: int, C: float = math.e, tau: float = 0.4) -> BoundParams:
    s, s_int = size_parameter_s(n, p, k, C)
    ok, margins = assumptions_hold(n, p, k, C, tau)
    return BoundParams(n, p, k, C, tau, s, s_int, truncation_x(s, p),
                       lower_bound_value(n, p, k, C), ok, margins)
