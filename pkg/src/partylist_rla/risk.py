"""Sequential testing of assorter means and sample-size estimation.

The test is the Kaplan-Kolmogorov martingale for the mean of a nonnegative
finite population sampled without replacement. With ``x'_j = x_j + g``,
``S_j = sum_{i<j} x'_i`` and ``m_j = (N (t + g) - S_j) / (N - j + 1)`` the
running statistic is ``prod_{i<=j} x'_i / m_i`` and the p-value after ``n``
draws is ``min(1, 1 / max_{j<=n} term_j)``. Once some ``m_j <= 0`` the null
is impossible and the p-value is 0.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from .assertions import AssertionSet
from .assorters import Assorter, VoteBounds, assorterize
from .core import InterpretedBallot
from .errors import DomainError

INF = math.inf


@dataclass(frozen=True)
class RiskParams:
    risk_limit: float
    g_shift: float = 0.1
    t_null: float = 0.5
    population_size: Optional[int] = None

    def __post_init__(self):
        if not 0 < self.risk_limit < 1:
            raise DomainError(f"risk limit must lie in (0, 1), got {self.risk_limit}")
        if self.g_shift < 0:
            raise DomainError("g must be nonnegative")


def kk_terms(x, N: int, t: float = 0.5, g: float = 0.1) -> np.ndarray:
    """Running martingale values along the last axis of ``x``."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise DomainError("negative value in a nonnegative population")
    n = x.shape[-1]
    if n > N:
        raise DomainError(f"sample of {n} exceeds population of {N}")
    if n == 0:
        return np.ones(x.shape[:-1] + (0,))
    xg = x + g
    S = np.cumsum(xg, axis=-1)
    S = np.concatenate([np.zeros(x.shape[:-1] + (1,)), S[..., :-1]], axis=-1)
    j = np.arange(1, n + 1)
    m = (N * (t + g) - S) / (N - j + 1)
    impossible = np.logical_or.accumulate(m <= 0, axis=-1)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        terms = np.cumprod(np.where(impossible, 1.0, xg / np.where(impossible, 1.0, m)), axis=-1)
    terms[impossible] = np.inf
    return terms


def kk_pvalue_history(x, N: int, t: float = 0.5, g: float = 0.1) -> np.ndarray:
    terms = kk_terms(x, N, t, g)
    with np.errstate(divide="ignore", over="ignore"):
        return np.minimum(1.0, 1.0 / np.maximum.accumulate(terms, axis=-1))


def kk_pvalue(x, N: int, t: float = 0.5, g: float = 0.1) -> float:
    """Kaplan-Kolmogorov p-value for the null ``mean <= t`` after observing ``x``."""
    if len(x) == 0:
        return 1.0
    return float(kk_pvalue_history(x, N, t, g)[-1])


class KKMartingale:
    """Incremental form of :func:`kk_pvalue`, one observation at a time."""

    def __init__(self, N: int, t: float = 0.5, g: float = 0.1):
        self.N, self.t, self.g = N, t, g
        self.n = 0
        self._S = 0.0
        self._term = 1.0
        self._max = 0.0
        self.p_value = 1.0

    def update(self, x: float) -> float:
        if x < 0:
            raise DomainError("negative value in a nonnegative population")
        if self.n >= self.N:
            raise DomainError("sample exceeds population")
        self.n += 1
        m = (self.N * (self.t + self.g) - self._S) / (self.N - self.n + 1)
        xg = x + self.g
        self._S += xg
        if m <= 0 or self._term == math.inf:
            self._term = math.inf
        else:
            self._term = self._term * (xg / m)
        self._max = max(self._max, self._term)
        self.p_value = min(1.0, 1.0 / self._max) if self._max > 0 else 1.0
        return self.p_value


def first_crossing(x, N: int, alpha: float, t: float = 0.5, g: float = 0.1) -> float:
    """Number of draws until the p-value first reaches ``alpha``; inf if never."""
    p = kk_pvalue_history(x, N, t, g)
    hit = np.flatnonzero(p <= alpha)
    return float(hit[0] + 1) if hit.size else INF


# --- audits ---------------------------------------------------------------


@dataclass
class AuditRound:
    number: int
    drawn: list[str]
    p_values: dict[str, float]


@dataclass
class AuditResult:
    outcome: str  # "certified" or "full_count"
    p_values: dict[str, float]
    ballots_examined: int
    rounds: list[AuditRound] = field(default_factory=list)
    certified_at: dict[str, int] = field(default_factory=dict)

    @property
    def certified(self) -> bool:
        return self.outcome == "certified"


class DrawSequence:
    """Sampling without replacement by an incremental Fisher-Yates shuffle.

    Draw ``i`` swaps position ``i`` with a uniform position in ``[i, N)``
    chosen by a PCG64 generator seeded with ``seed``.
    """

    def __init__(self, N: int, seed: int):
        self._order = list(range(N))
        self._rng = np.random.Generator(np.random.PCG64(seed))
        self.drawn = 0

    def __len__(self):
        return len(self._order)

    def take(self, k: int) -> list[int]:
        N = len(self._order)
        out = []
        while k > 0 and self.drawn < N:
            i = self.drawn
            j = i + int(self._rng.integers(N - i))
            self._order[i], self._order[j] = self._order[j], self._order[i]
            out.append(self._order[i])
            self.drawn += 1
            k -= 1
        return out


def run_audit(
    ballots: Sequence[InterpretedBallot],
    assertions: Union[AssertionSet, Sequence[Assorter]],
    vote_bounds: Optional[VoteBounds],
    params: RiskParams,
    seed: int,
    round_size: int = 1,
    max_rounds: Optional[int] = None,
) -> AuditResult:
    """Ballot-polling audit of every assertion in parallel.

    Each round draws ``round_size`` fresh ballots, scores them with every
    open assorter and certifies an assertion once its p-value reaches the
    risk limit. Stops as certified when no assertion is open, and as a full
    count when the ballots run out (or ``max_rounds`` is reached) first.
    """
    if round_size < 1:
        raise DomainError("round size must be at least 1")
    if isinstance(assertions, AssertionSet):
        assorters = [assorterize(a, vote_bounds) for a in assertions]
    else:
        assorters = list(assertions)
    if not assorters:
        raise DomainError("nothing to audit: the assertion set is empty")
    N = len(ballots)
    if params.population_size is not None and params.population_size != N:
        raise DomainError(f"population size {params.population_size} does not match {N} ballots")

    tests = {a.label: KKMartingale(N, params.t_null, params.g_shift) for a in assorters}
    open_ = [a for a in assorters]
    certified_at: dict[str, int] = {}
    draws = DrawSequence(N, seed)
    rounds = []
    examined = []
    number = 0
    while open_ and draws.drawn < N and (max_rounds is None or number < max_rounds):
        number += 1
        idx = draws.take(round_size)
        batch = [ballots[i] for i in idx]
        examined.extend(batch)
        still_open = []
        for a in open_:
            test = tests[a.label]
            for b in batch:
                test.update(a.float_value(b))
            if test.p_value <= params.risk_limit:
                certified_at[a.label] = draws.drawn
            else:
                still_open.append(a)
        open_ = still_open
        rounds.append(
            AuditRound(number, [b.ballot_id for b in batch], {k: t.p_value for k, t in tests.items()})
        )

    outcome = "full_count" if open_ else "certified"
    return AuditResult(
        outcome,
        {k: t.p_value for k, t in tests.items()},
        draws.drawn,
        rounds,
        certified_at,
    )


# --- sample size estimation ----------------------------------------------


@dataclass
class AsnEstimate:
    asn: float
    method: str
    stopping_times: Optional[np.ndarray] = None

    def quantile(self, q: float) -> float:
        if self.stopping_times is None:
            return self.asn
        return float(np.quantile(self.stopping_times, q, method="inverted_cdf"))

    @property
    def never_stopped(self) -> int:
        if self.stopping_times is None:
            return int(self.asn == INF)
        return int(np.sum(np.isinf(self.stopping_times)))


def two_point_population(mean: float, N: int, upper: float = 1.0) -> np.ndarray:
    """``N`` values in ``{0, upper}`` whose mean is as close to ``mean`` as possible."""
    k = int(round(N * mean / upper))
    if not 0 <= k <= N:
        raise DomainError(f"mean {mean} is not attainable with values in [0, {upper}]")
    pop = np.zeros(N)
    pop[:k] = upper
    return pop


def estimate_asn(
    population=None,
    params: RiskParams = None,
    method: str = "simulate",
    reps: int = 200,
    seed: Optional[int] = None,
    *,
    mean: Optional[float] = None,
    N: Optional[int] = None,
    upper: float = 1.0,
    workers: int = 1,
) -> AsnEstimate:
    """Average number of draws an error-free audit needs to certify.

    Pass either the assorter values of the whole population, or its
    ``mean`` and size ``N``. ``method="deterministic"`` feeds the constant
    sequence equal to the mean; ``method="simulate"`` averages stopping
    times over ``reps`` seeded permutations (with only a mean given, of a
    two-point population in ``{0, upper}``). The estimate is inf when the
    mean is at most the null, or when some run never stops.
    """
    if params is None:
        raise DomainError("risk parameters are required")
    if population is not None:
        population = np.asarray(population, dtype=float)
        if np.any(population < 0):
            raise DomainError("negative value in a nonnegative population")
        N = population.size
        mean = float(population.mean())
    elif mean is None or N is None:
        raise DomainError("give either a population or both mean and N")
    if N == 0:
        raise DomainError("empty population")
    alpha, t, g = params.risk_limit, params.t_null, params.g_shift

    if method == "deterministic":
        if mean <= t:
            return AsnEstimate(INF, method)
        return AsnEstimate(first_crossing(np.full(N, mean), N, alpha, t, g), method)
    if method != "simulate":
        raise DomainError(f"unknown ASN method {method!r}")
    if seed is None:
        raise DomainError("simulation needs an explicit seed")
    if mean <= t:
        return AsnEstimate(INF, method, np.full(reps, INF))
    if population is None:
        population = two_point_population(mean, N, upper)

    def one(rep: int) -> float:
        rng = np.random.Generator(np.random.PCG64([seed, rep]))
        return first_crossing(rng.permutation(population), N, alpha, t, g)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            times = np.array(list(pool.map(one, range(reps))))
    else:
        times = np.array([one(r) for r in range(reps)])
    asn = INF if np.any(np.isinf(times)) else float(times.mean())
    return AsnEstimate(asn, method, times)


def contest_asn(estimates: Sequence[AsnEstimate]) -> float:
    """A contest needs as many draws as its hardest assertion."""
    return max((e.asn for e in estimates), default=0.0)
