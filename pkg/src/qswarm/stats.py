"""Friedman/Iman-Davenport ranking test and Nemenyi post-hoc comparison.

Values are M x k tables (functions x algorithms). An entry may be ``FAIL``
(or ``None``), meaning the algorithm never reached the tolerance; failures
tie for the worst ranks of their row.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

FAIL = "FAIL"

# studentized range statistic / sqrt(2), alpha = 0.05, k = 2..10
Q_005 = {2: 1.960, 3: 2.343, 4: 2.569, 5: 2.728, 6: 2.850, 7: 2.949, 8: 3.031, 9: 3.102, 10: 3.164}


def is_fail(v) -> bool:
    return v is None or (isinstance(v, str) and v.upper() == FAIL)


def _rank_row(row: Sequence, higher_is_better: bool) -> np.ndarray:
    k = len(row)
    fails = [j for j, v in enumerate(row) if is_fail(v)]
    good = [j for j in range(k) if j not in set(fails)]
    vals = []
    for j in good:
        v = float(row[j])
        if not math.isfinite(v):
            raise ValueError(f"non-finite metric value {row[j]!r}")
        vals.append(-v if higher_is_better else v)
    ranks = np.empty(k)
    order = sorted(range(len(good)), key=lambda t: vals[t])
    pos = 0
    while pos < len(order):
        end = pos
        while end + 1 < len(order) and vals[order[end + 1]] == vals[order[pos]]:
            end += 1
        shared = (pos + end) / 2.0 + 1.0
        for t in order[pos:end + 1]:
            ranks[good[t]] = shared
        pos = end + 1
    if fails:
        ranks[fails] = (len(good) + 1 + k) / 2.0
    return ranks


@dataclass(frozen=True)
class RankTable:
    values: tuple          # M rows of k entries, FAIL kept as the sentinel
    ranks: np.ndarray      # (M, k)
    higher_is_better: bool = False

    @property
    def M(self) -> int:
        return self.ranks.shape[0]

    @property
    def k(self) -> int:
        return self.ranks.shape[1]

    @property
    def avg_ranks(self) -> np.ndarray:
        return self.ranks.mean(axis=0)


def rank_rows(values, direction: str = "min") -> RankTable:
    """Rank each row; ``direction`` is "min" (lower is better) or "max"."""
    if direction not in ("min", "max"):
        raise ValueError("direction must be 'min' or 'max'")
    rows = [list(r) for r in values]
    if len(rows) < 2:
        raise ValueError("need at least 2 rows (functions)")
    k = len(rows[0])
    if k < 2 or any(len(r) != k for r in rows):
        raise ValueError("need a rectangular table with at least 2 columns")
    ranks = np.array([_rank_row(r, direction == "max") for r in rows])
    return RankTable(tuple(tuple(r) for r in rows), ranks, direction == "max")


def table_from_ranks(ranks) -> RankTable:
    """Wrap already-computed per-row ranks (e.g. transcribed from a report)."""
    r = np.asarray(ranks, dtype=float)
    if r.ndim != 2 or r.shape[0] < 2 or r.shape[1] < 2:
        raise ValueError("ranks must be an M x k array with M, k >= 2")
    return RankTable(tuple(map(tuple, r.tolist())), r)


@dataclass(frozen=True)
class FriedmanResult:
    chi2: float
    tau_F: float
    infinite: bool


def friedman_tau(rt: RankTable) -> FriedmanResult:
    M, k = rt.M, rt.k
    R = rt.avg_ranks
    chi2 = 12.0 * M / (k * (k + 1)) * (float(np.sum(R ** 2)) - k * (k + 1) ** 2 / 4.0)
    chi2 = max(chi2, 0.0) if abs(chi2) < 1e-12 else chi2
    denom = M * (k - 1) - chi2
    if abs(denom) <= 1e-12 * max(1.0, M * (k - 1)):
        return FriedmanResult(chi2, math.inf, True)
    return FriedmanResult(chi2, (M - 1) * chi2 / denom, False)


# regularized incomplete beta, continued fraction evaluated with modified Lentz

def _betacf(a: float, b: float, x: float) -> float:
    tiny = 1e-300
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    d = tiny if abs(d) < tiny else d
    d = 1.0 / d
    h = d
    for m in range(1, 10000):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        d = tiny if abs(d) < tiny else d
        c = 1.0 + aa / c
        c = tiny if abs(c) < tiny else c
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        d = tiny if abs(d) < tiny else d
        c = 1.0 + aa / c
        c = tiny if abs(c) < tiny else c
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-15:
            return h
    raise ArithmeticError("incomplete beta continued fraction did not converge")


def betainc(a: float, b: float, x: float) -> float:
    """I_x(a, b) for a, b > 0 and 0 <= x <= 1."""
    if a <= 0 or b <= 0:
        raise ValueError("a and b must be positive")
    if not 0.0 <= x <= 1.0:
        raise ValueError("x must lie in [0, 1]")
    if x == 0.0 or x == 1.0:
        return x
    lbt = math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b) + a * math.log(x) + b * math.log1p(-x)
    if x < (a + 1.0) / (a + b + 2.0):
        return math.exp(lbt) * _betacf(a, b, x) / a
    return 1.0 - math.exp(lbt) * _betacf(b, a, 1.0 - x) / b


def f_cdf(x: float, df1: float, df2: float) -> float:
    if x <= 0:
        return 0.0
    return betainc(df1 / 2.0, df2 / 2.0, df1 * x / (df1 * x + df2))


def f_quantile(p: float, df1: float, df2: float, tol: float = 1e-10) -> float:
    """Lower-p quantile of F(df1, df2) by bracketed bisection."""
    if not 0.0 < p < 1.0:
        raise ValueError("p must lie in (0, 1)")
    lo, hi = 0.0, 1.0
    while f_cdf(hi, df1, df2) < p:
        lo, hi = hi, hi * 2.0
    while hi - lo > tol * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        if f_cdf(mid, df1, df2) < p:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def f_critical(k: int, M: int, alpha: float = 0.05) -> float:
    """Critical tau_F: upper-alpha point of F(k-1, (k-1)(M-1))."""
    if k < 2 or M < 2:
        raise ValueError("need k >= 2 and M >= 2")
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    return f_quantile(1.0 - alpha, k - 1, (k - 1) * (M - 1))


def nemenyi_cd(k: int, M: int, alpha: float = 0.05) -> float:
    if alpha != 0.05:
        raise ValueError("only alpha = 0.05 is tabulated")
    if k not in Q_005:
        raise ValueError(f"k = {k} outside the tabulated range 2..10")
    if M < 2:
        raise ValueError("need M >= 2")
    return Q_005[k] * math.sqrt(k * (k + 1) / (6.0 * M))


def pairwise_significance(avg_ranks, cd: float) -> np.ndarray:
    R = np.asarray(avg_ranks.avg_ranks if isinstance(avg_ranks, RankTable) else avg_ranks, dtype=float)
    diff = np.abs(R[:, None] - R[None, :])
    # small slack so that a gap equal to CD survives float rounding
    sig = diff >= cd - 1e-12
    np.fill_diagonal(sig, False)
    return sig


@dataclass(frozen=True)
class Report:
    metric: str
    eps_tol: Optional[float]
    algorithms: tuple
    functions: tuple
    avg_ranks: tuple
    chi2: float
    tau_F: float
    tau_F_infinite: bool
    tau_c: float
    reject_null: bool
    CD: float
    pairwise: tuple

    def to_dict(self) -> dict:
        return {
            "metric": self.metric,
            "eps_tol": self.eps_tol,
            "algorithms": list(self.algorithms),
            "functions": list(self.functions),
            "avg_ranks": dict(zip(self.algorithms, self.avg_ranks)),
            "chi2": self.chi2,
            "tau_F": None if self.tau_F_infinite else self.tau_F,
            "tau_F_infinite": self.tau_F_infinite,
            "tau_c": self.tau_c,
            "reject_null": self.reject_null,
            "CD": self.CD,
            "pairwise": [list(r) for r in self.pairwise],
        }


def compare(values, algorithms: Sequence[str], functions: Sequence[str], metric: str = "CS",
            eps_tol: Optional[float] = None, alpha: float = 0.05) -> Report:
    """Full ranking analysis; NoS is ranked higher-is-better, everything else lower."""
    rt = rank_rows(values, "max" if metric.upper() == "NOS" else "min")
    fr = friedman_tau(rt)
    tau_c = f_critical(rt.k, rt.M, alpha)
    cd = nemenyi_cd(rt.k, rt.M, alpha)
    sig = pairwise_significance(rt, cd)
    return Report(metric, eps_tol, tuple(algorithms), tuple(functions),
                  tuple(float(r) for r in rt.avg_ranks), fr.chi2, fr.tau_F, fr.infinite,
                  tau_c, bool(fr.infinite or fr.tau_F > tau_c), cd,
                  tuple(tuple(bool(v) for v in r) for r in sig))
