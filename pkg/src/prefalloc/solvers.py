"""Committee-selection algorithms, the exact enumeration oracle, and the
numeric utilities their quality bounds need.

All positive guarantees hold for Borda satisfaction scores, so the greedy
and sampling solvers insist on ``borda_dec`` unless explicitly told to run
permissively (in which case the reported guarantees are void).  Every solver
requires unit agent weights.  Ties are always broken toward the lowest
alternative index and the lowest agent index.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Optional, Sequence, Tuple, Union

from .core import (
    Assignment,
    Instance,
    Profile,
    ScoringFunction,
    SolveReport,
    metric_extreme,
    metric_l1,
    metric_min_delta,
    score,
)
from .instances import make_cc, make_monroe
from .matching import (
    CapacityRegime,
    InfeasibleMatchingError,
    match_cc,
    match_egalitarian,
    match_monroe_l1,
)
from .rng import SplitMix64, derive_seed, sample_distinct

DEFAULT_ENUMERATION_CAP = 2_000_000

OBJECTIVES = ("l1_dec", "l1_inc", "min_dec", "max_inc")


class UnsupportedInstanceError(ValueError):
    """The instance is outside what the solvers handle (e.g. non-unit weights)."""


class EnumerationCapExceeded(RuntimeError):
    """Exact enumeration would need more committees than the configured cap."""

    def __init__(self, required: int, cap: int):
        self.required = required
        self.cap = cap
        super().__init__(
            f"exact enumeration needs {required} committees, cap is {cap}"
        )


@dataclass(frozen=True)
class SolverConfig:
    """Knobs for the combined solver and the enumeration fallbacks."""

    epsilon: float = 0.1
    lambda_: float = 0.9
    seed: int = 0
    enumeration_cap: int = DEFAULT_ENUMERATION_CAP
    sampling_runs_override: Optional[int] = None

    def __post_init__(self) -> None:
        if not 0 < self.epsilon < 1:
            raise ValueError("epsilon must lie strictly inside (0, 1)")
        if not 0 < self.lambda_ < 1:
            raise ValueError("lambda must lie strictly inside (0, 1)")
        if self.enumeration_cap < 1:
            raise ValueError("enumeration cap must be at least 1")
        if self.sampling_runs_override is not None and self.sampling_runs_override < 1:
            raise ValueError("sampling runs override must be positive")


def harmonic(k: int) -> Fraction:
    """Exact k-th harmonic number 1 + 1/2 + ... + 1/k."""
    if k < 1:
        raise ValueError("harmonic number index must be positive")
    return sum((Fraction(1, i) for i in range(1, k + 1)), Fraction(0))


def lambert_w(x: float) -> float:
    """Principal-branch Lambert W on nonnegative reals: solves w * e^w = x.

    Newton iteration from the initial guess ln(1 + x); the residual
    ``|w e^w - x|`` is driven below ``1e-13 * max(1, x)``.
    """
    if x < 0:
        raise ValueError("lambert_w is only defined for nonnegative arguments")
    if x == 0:
        return 0.0
    w = math.log1p(x)
    for _ in range(64):
        ew = math.exp(w)
        residual = w * ew - x
        if abs(residual) <= 1e-13 * max(1.0, x):
            return w
        w -= residual / (ew * (1.0 + w))
    return w


def sampling_run_count(k: int, epsilon: float, lambda_: float) -> int:
    """Number of sampling repetitions that make the combined solver reach its
    ratio with probability ``lambda_``: ``ceil(-512 ln(1 - lambda) / (K eps^2))``.
    """
    if k < 1:
        raise ValueError("committee size must be positive")
    if not 0 < epsilon < 1 or not 0 < lambda_ < 1:
        raise ValueError("epsilon and lambda must lie strictly inside (0, 1)")
    return math.ceil(-512.0 * math.log(1.0 - lambda_) / (k * epsilon * epsilon))


def greedy_monroe_bound(n: int, m: int, k: int) -> Fraction:
    """Proven floor of the greedy balanced-committee solver's total score for
    k >= 3: ``(m-1) n (1 - (k-1)/(2(m-1)) - H_k/k)``."""
    return (
        (m - 1)
        * n
        * (1 - Fraction(k - 1, 2 * (m - 1)) - harmonic(k) / k)
    )


def greedy_cc_bound(n: int, m: int, k: int) -> float:
    """Proven floor of the greedy cover solver's total score:
    ``(1 - 2 w(k)/k) (m-1) n``."""
    return (1.0 - 2.0 * lambert_w(k) / k) * (m - 1) * n


def _as_profile(profile: Union[Profile, Instance]) -> Profile:
    if isinstance(profile, Instance):
        if not profile.has_unit_weights:
            raise UnsupportedInstanceError("solvers require unit agent weights")
        return profile.profile
    return profile


def _require_borda_dec(psf: Optional[ScoringFunction], permissive: bool) -> ScoringFunction:
    if psf is None:
        return ScoringFunction.borda_dec()
    if psf.kind != "borda_dec" and not permissive:
        raise UnsupportedInstanceError(
            "guarantees are proven for borda_dec only; pass permissive=True to "
            "run the same loop without them"
        )
    if not psf.is_decreasing:
        raise ValueError("this solver maximizes a decreasing (satisfaction) function")
    return psf


def _batch_sizes(n: int, k: int) -> list:
    """Per-step assignment counts: step i takes ceil(remaining / (k - i))."""
    sizes = []
    remaining = n
    for i in range(k):
        size = -(-remaining // (k - i))
        sizes.append(size)
        remaining -= size
    return sizes


def greedy_monroe(
    profile: Union[Profile, Instance],
    k: int,
    psf: Optional[ScoringFunction] = None,
    permissive: bool = False,
) -> SolveReport:
    """Greedy balanced-committee solver for the Monroe restriction.

    For k <= 2 the exact optimum is computed by enumeration.  Otherwise the
    committee is built in k steps: each step scores every unused alternative
    by the total satisfaction of the not-yet-assigned agents that rank it
    best (one balanced batch worth of them) and commits the winner.  For
    k >= 3 the total score is at least ``greedy_monroe_bound(n, m, k)``.
    """
    start = time.perf_counter()
    prof = _as_profile(profile)
    if not 1 <= k <= prof.m:
        raise ValueError(f"committee size must lie in 1..{prof.m}, got {k}")
    psf = _require_borda_dec(psf, permissive)
    if k <= 2:
        inner = exact_enumeration(make_monroe(prof, k), psf, "l1_dec")
        return SolveReport(
            assignment=inner.assignment,
            objective="l1_dec",
            value=inner.value,
            algorithm="greedy_monroe[exact:k<=2]",
            elapsed=time.perf_counter() - start,
        )
    n, m = prof.n, prof.m
    positions = prof.positions
    targets = [0] * n
    unassigned = list(range(n))
    used = set()
    for size in _batch_sizes(n, k):
        best_alt = -1
        best_score = -1
        best_batch: list = []
        for alt in range(1, m + 1):
            if alt in used:
                continue
            ranked = sorted(unassigned, key=lambda j: (positions[j][alt - 1], j))
            batch = ranked[:size]
            total = sum(score(psf, positions[j][alt - 1], m) for j in batch)
            if total > best_score:
                best_alt, best_score, best_batch = alt, total, batch
        used.add(best_alt)
        for j in best_batch:
            targets[j] = best_alt
        unassigned = [j for j in unassigned if targets[j] == 0]
    assignment = Assignment(tuple(targets))
    value = metric_l1(make_monroe(prof, k), psf, assignment)
    name = "greedy_monroe"
    if psf.kind != "borda_dec":
        name += "[no-guarantee]"  # quality floor is proven for Borda only
    return SolveReport(
        assignment=assignment,
        objective="l1_dec",
        value=value,
        algorithm=name,
        elapsed=time.perf_counter() - start,
    )


def sample_once_monroe(
    profile: Union[Profile, Instance],
    k: int,
    rng: Union[int, SplitMix64],
    psf: Optional[ScoringFunction] = None,
    permissive: bool = False,
) -> SolveReport:
    """One sampling step: a uniform k-subset of alternatives, matched optimally.

    Accepts a seed or a live generator; a seed is recorded in the report.
    """
    start = time.perf_counter()
    prof = _as_profile(profile)
    if not 1 <= k <= prof.m:
        raise ValueError(f"committee size must lie in 1..{prof.m}, got {k}")
    psf = _require_borda_dec(psf, permissive)
    seed = rng if isinstance(rng, int) else None
    gen = SplitMix64(rng) if isinstance(rng, int) else rng
    committee = sorted(a + 1 for a in sample_distinct(prof.m, k, gen))
    assignment = match_monroe_l1(
        prof, psf, committee, CapacityRegime.monroe_balanced()
    )
    value = metric_l1(make_monroe(prof, k), psf, assignment)
    return SolveReport(
        assignment=assignment,
        objective="l1_dec",
        value=value,
        algorithm="sample_once_monroe",
        seed=seed,
        elapsed=time.perf_counter() - start,
    )


def combined_monroe(
    profile: Union[Profile, Instance],
    k: int,
    config: Optional[SolverConfig] = None,
) -> SolveReport:
    """Dispatch between exact enumeration, the greedy pass, and repeated
    sampling; reaches a (0.715 - epsilon) fraction of the optimum with
    probability at least ``lambda_``.

    Exact enumeration handles small committees (k <= 8, or H_k/k >= eps/2)
    and few alternatives (m <= 1 + 2/eps).  Otherwise the best of one greedy
    run and ``sampling_run_count(k, eps, lambda)`` sampling runs is returned.
    The report's algorithm string records which branch ran.
    """
    start = time.perf_counter()
    config = config or SolverConfig()
    prof = _as_profile(profile)
    if not 1 <= k <= prof.m:
        raise ValueError(f"committee size must lie in 1..{prof.m}, got {k}")
    psf = ScoringFunction.borda_dec()

    def exact(branch: str) -> SolveReport:
        inner = exact_enumeration(make_monroe(prof, k), psf, "l1_dec", config=config)
        return SolveReport(
            assignment=inner.assignment,
            objective="l1_dec",
            value=inner.value,
            algorithm=f"combined_monroe[{branch}]",
            seed=config.seed,
            elapsed=time.perf_counter() - start,
        )

    if harmonic(k) / k >= config.epsilon / 2 or k <= 8:
        return exact("exact:small-k")
    if prof.m <= 1 + 2 / config.epsilon:
        return exact("exact:small-m")

    best = greedy_monroe(prof, k, psf)
    runs = config.sampling_runs_override
    if runs is None:
        runs = sampling_run_count(k, config.epsilon, config.lambda_)
    for index in range(runs):
        gen = SplitMix64(derive_seed(config.seed, index))
        candidate = sample_once_monroe(prof, k, gen, psf)
        if candidate.value > best.value:
            best = candidate
    return SolveReport(
        assignment=best.assignment,
        objective="l1_dec",
        value=best.value,
        algorithm=f"combined_monroe[greedy+sample:{runs}]",
        seed=config.seed,
        elapsed=time.perf_counter() - start,
    )


def _greedy_cover(
    prof: Profile,
    k: int,
    x: int,
    psf: ScoringFunction,
) -> Assignment:
    """Shared cover loop: k picks by descending top-x coverage of unassigned
    agents, then leftover agents go to their best picked alternative."""
    n, m = prof.n, prof.m
    positions = prof.positions
    targets = [0] * n
    unassigned = list(range(n))
    picked: list = []
    for _ in range(k):
        best_alt = -1
        best_count = -1
        for alt in range(1, m + 1):
            if alt in picked:
                continue
            count = sum(1 for j in unassigned if positions[j][alt - 1] <= x)
            if count > best_count:
                best_alt, best_count = alt, count
        picked.append(best_alt)
        still = []
        for j in unassigned:
            if positions[j][best_alt - 1] <= x:
                targets[j] = best_alt
            else:
                still.append(j)
        unassigned = still
    for j in unassigned:
        targets[j] = min(picked, key=lambda a: positions[j][a - 1])
    return Assignment(tuple(targets))


def greedy_cc(
    profile: Union[Profile, Instance],
    k: int,
    psf: Optional[ScoringFunction] = None,
    permissive: bool = False,
) -> SolveReport:
    """Greedy cover solver for the Chamberlin-Courant restriction.

    The cover depth is ``x = ceil(m w(k) / k)`` with w the Lambert W
    function; the total score is at least ``greedy_cc_bound(n, m, k)``.
    """
    start = time.perf_counter()
    prof = _as_profile(profile)
    if not 1 <= k <= prof.m:
        raise ValueError(f"committee size must lie in 1..{prof.m}, got {k}")
    psf = _require_borda_dec(psf, permissive)
    x = math.ceil(prof.m * lambert_w(k) / k)
    assignment = _greedy_cover(prof, k, x, psf)
    value = metric_l1(make_cc(prof, k), psf, assignment)
    name = "greedy_cc"
    if psf.kind != "borda_dec":
        name += "[no-guarantee]"  # quality floor is proven for Borda only
    return SolveReport(
        assignment=assignment,
        objective="l1_dec",
        value=value,
        algorithm=name,
        elapsed=time.perf_counter() - start,
    )


def greedy_cc_majority(
    profile: Union[Profile, Instance],
    k: int,
    delta: float,
) -> SolveReport:
    """Cover solver tuned for the discard-a-delta-fraction egalitarian metric.

    Runs the same loop as :func:`greedy_cc` with depth
    ``x = ceil(-m ln(delta) / k)`` (capped at m) and reports the
    ``min_delta`` value: after dropping the worst ``floor(delta n)`` agents,
    every remaining agent keeps satisfaction at least ``m - x``.
    """
    start = time.perf_counter()
    prof = _as_profile(profile)
    if not 1 <= k <= prof.m:
        raise ValueError(f"committee size must lie in 1..{prof.m}, got {k}")
    if not 0 < delta < 1:
        raise ValueError(f"delta must lie strictly inside (0, 1), got {delta!r}")
    psf = ScoringFunction.borda_dec()
    x = min(prof.m, math.ceil(-prof.m * math.log(delta) / k))
    assignment = _greedy_cover(prof, k, x, psf)
    value = metric_min_delta(make_cc(prof, k), psf, assignment, delta)
    return SolveReport(
        assignment=assignment,
        objective=f"min_delta({delta})",
        value=value,
        algorithm="greedy_cc_majority",
        elapsed=time.perf_counter() - start,
    )


def cover_depth_majority(m: int, k: int, delta: float) -> int:
    """Cover depth used by :func:`greedy_cc_majority` (exposed for reporting)."""
    if not 0 < delta < 1:
        raise ValueError(f"delta must lie strictly inside (0, 1), got {delta!r}")
    return min(m, math.ceil(-m * math.log(delta) / k))


def maxcover_cc_baseline(
    profile: Union[Profile, Instance],
    k: int,
    psf: Optional[ScoringFunction] = None,
) -> SolveReport:
    """Classic marginal-gain greedy baseline for the CC restriction.

    Each step adds the alternative with the largest increase of the total
    best-member score; submodularity gives at least a (1 - 1/e) fraction of
    the optimum for any decreasing scoring function.
    """
    start = time.perf_counter()
    prof = _as_profile(profile)
    if not 1 <= k <= prof.m:
        raise ValueError(f"committee size must lie in 1..{prof.m}, got {k}")
    psf = psf or ScoringFunction.borda_dec()
    if not psf.is_decreasing:
        raise ValueError("baseline maximizes a decreasing (satisfaction) function")
    n, m = prof.n, prof.m
    positions = prof.positions
    best_score = [-1] * n
    picked: list = []
    for _ in range(k):
        best_alt = -1
        best_gain = -1
        for alt in range(1, m + 1):
            if alt in picked:
                continue
            gain = 0
            for j in range(n):
                s = score(psf, positions[j][alt - 1], m)
                if s > best_score[j]:
                    gain += s - max(best_score[j], 0)
            if gain > best_gain:
                best_alt, best_gain = alt, gain
        picked.append(best_alt)
        for j in range(n):
            s = score(psf, positions[j][best_alt - 1], m)
            if s > best_score[j]:
                best_score[j] = s
    assignment = match_cc(prof, psf, picked)
    value = metric_l1(make_cc(prof, k), psf, assignment)
    return SolveReport(
        assignment=assignment,
        objective="l1_dec",
        value=value,
        algorithm="maxcover_cc_baseline",
        elapsed=time.perf_counter() - start,
    )


def _objective_value(
    instance: Instance,
    psf: ScoringFunction,
    assignment: Assignment,
    objective: str,
) -> int:
    if objective in ("l1_dec", "l1_inc"):
        return metric_l1(instance, psf, assignment)
    if objective == "min_dec":
        return metric_extreme(instance, psf, assignment, "min")
    return metric_extreme(instance, psf, assignment, "max")


def _match_for_objective(
    prof: Profile,
    psf: ScoringFunction,
    committee: Sequence[int],
    regime: CapacityRegime,
    objective: str,
) -> Assignment:
    if objective in ("l1_dec", "l1_inc"):
        return match_monroe_l1(prof, psf, committee, regime)
    mode = "max_min_sat" if objective == "min_dec" else "min_max_dissat"
    return match_egalitarian(prof, psf, committee, regime, mode)


def _enumerate_general(instance: Instance) -> Iterable[Tuple[int, ...]]:
    m = instance.profile.m
    for size in range(1, m + 1):
        for committee in combinations(range(1, m + 1), size):
            if sum(instance.costs[a - 1] for a in committee) <= instance.budget:
                yield committee


def exact_enumeration(
    instance: Instance,
    psf: ScoringFunction,
    objective: str,
    regime: Optional[CapacityRegime] = None,
    config: Optional[SolverConfig] = None,
) -> SolveReport:
    """Brute-force oracle: enumerate budget-feasible committees, match each
    optimally, return the best.

    Monroe and CC instances enumerate the ``C(m, K)`` size-K committees under
    their canonical regime (balanced loads, unbounded); general instances
    enumerate every budget-feasible subset under its explicit capacities.
    Refuses with :class:`EnumerationCapExceeded` rather than hanging when the
    committee count exceeds the cap.
    """
    start = time.perf_counter()
    if objective not in OBJECTIVES:
        raise ValueError(f"unknown objective {objective!r}")
    if not instance.has_unit_weights:
        raise UnsupportedInstanceError("solvers require unit agent weights")
    wants_dec = objective in ("l1_dec", "min_dec")
    if wants_dec != psf.is_decreasing:
        raise ValueError(
            f"objective {objective} needs a "
            f"{'decreasing' if wants_dec else 'increasing'} scoring function"
        )
    cap = (config or SolverConfig()).enumeration_cap
    prof = instance.profile
    maximizing = wants_dec

    if instance.system_tag in ("monroe", "cc"):
        k = instance.committee_size
        assert k is not None
        count = math.comb(prof.m, k)
        if count > cap:
            raise EnumerationCapExceeded(count, cap)
        if regime is None:
            regime = (
                CapacityRegime.monroe_balanced()
                if instance.system_tag == "monroe"
                else CapacityRegime.cc_unbounded()
            )
        committees: Iterable[Tuple[int, ...]] = combinations(range(1, prof.m + 1), k)
    else:
        count = 2 ** prof.m
        if count > cap:
            raise EnumerationCapExceeded(count, cap)
        committees = _enumerate_general(instance)

    best_assignment: Optional[Assignment] = None
    best_value = 0
    for committee in committees:
        if instance.system_tag == "general":
            caps = tuple(instance.capacities[a - 1] for a in committee)
            if sum(caps) < prof.n:
                continue
            local_regime = CapacityRegime.explicit((0,) * len(committee), caps)
        else:
            local_regime = regime  # type: ignore[assignment]
        try:
            assignment = _match_for_objective(
                prof, psf, committee, local_regime, objective
            )
        except InfeasibleMatchingError:
            continue
        value = _objective_value(instance, psf, assignment, objective)
        if (
            best_assignment is None
            or (maximizing and value > best_value)
            or (not maximizing and value < best_value)
        ):
            best_assignment, best_value = assignment, value
    if best_assignment is None:
        raise InfeasibleMatchingError(
            "no budget-feasible committee can host all agents"
        )
    return SolveReport(
        assignment=best_assignment,
        objective=objective,
        value=best_value,
        algorithm="exact_enumeration",
        elapsed=time.perf_counter() - start,
    )
