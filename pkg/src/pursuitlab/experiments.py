"""Exact and Monte Carlo estimation of sentence and game-outcome probabilities.

mu_n(phi) is the fraction of the 2**C(n,2) labeled n-vertex graphs satisfying
phi, which equals the G(n, 1/2) measure; exact_mu enumerates all edge masks.
Monte Carlo trials derive per-trial seeds from the master seed with a fixed
integer mix, so runs are reproducible and independent of the parallelism
degree.
"""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Union

import numpy as np

from .games import DEFAULT_MAX_STATES, ArenaBudgetError, Variant, Winner, game_value, state_estimate, variant_id
from .graphs import PFamily, gnp_sample
from .logic import Edge, Eq, Exists, Forall, Formula, Implies, And, Or, Not, evaluate, extension_axiom, to_text

__all__ = [
    "EstimateReport",
    "Regime",
    "EaBoundCheck",
    "ExperimentError",
    "exact_mu",
    "estimate_mu",
    "estimate_win",
    "verify_ea_bound",
    "classify_regime",
    "sweep",
    "sweep_to_csv",
    "wilson_interval",
    "derive_trial_seed",
    "CSV_COLUMNS",
    "Z_95",
    "Z_999",
]

# Two-sided normal quantiles for the Wilson score interval.
Z_95 = 1.959963984540054
Z_999 = 3.2905267314918945

# Trial-seed mix: splitmix64 finalizer over master + (i+1) * golden-ratio step.
_GOLDEN = 0x9E3779B97F4A7C15
_MASK64 = (1 << 64) - 1


class ExperimentError(ValueError):
    pass


def derive_trial_seed(master_seed: int, i: int) -> int:
    """Fixed 64-bit mix; trial i's seed never depends on scheduling order."""
    z = (master_seed + (i + 1) * _GOLDEN) & _MASK64
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & _MASK64
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB & _MASK64
    return z ^ (z >> 31)


def wilson_interval(successes: int, samples: int, z: float = Z_95) -> tuple[float, float]:
    """Wilson score interval; well-behaved near 0 and 1 unlike the Wald form."""
    if samples <= 0:
        raise ExperimentError("need at least one sample")
    phat = successes / samples
    denom = 1.0 + z * z / samples
    center = (phat + z * z / (2 * samples)) / denom
    half = (z / denom) * math.sqrt(phat * (1 - phat) / samples + z * z / (4 * samples * samples))
    lo = 0.0 if successes == 0 else max(0.0, center - half)
    hi = 1.0 if successes == samples else min(1.0, center + half)
    return (lo, hi)


PSpec = Union[float, PFamily]


def _p_at(p_spec: PSpec, n: int) -> float:
    if isinstance(p_spec, PFamily):
        return p_spec.p(n)
    return float(p_spec)


def _p_label(p_spec: PSpec) -> str:
    if isinstance(p_spec, PFamily):
        return p_spec.describe()
    return f"{float(p_spec):.6g}"


@dataclass
class EstimateReport:
    """One Monte Carlo estimate with its provenance and a 95% Wilson interval."""

    target_id: str
    n: int
    p_spec: PSpec
    samples: int
    successes: int
    estimate: Fraction
    ci_low: float
    ci_high: float
    master_seed: int
    wall_ms: float
    error: str = ""

    def to_json_dict(self) -> dict:
        return {
            "target_id": self.target_id,
            "n": self.n,
            "p_or_family": _p_label(self.p_spec),
            "samples": self.samples,
            "successes": self.successes,
            "estimate": float(f"{float(self.estimate):.6g}") if self.samples else None,
            "ci_low": float(f"{self.ci_low:.6g}") if self.samples else None,
            "ci_high": float(f"{self.ci_high:.6g}") if self.samples else None,
            "master_seed": self.master_seed,
            "wall_ms": round(self.wall_ms, 3),
            "error": self.error,
        }

    def to_csv_row(self) -> list[str]:
        if self.error:
            return [self.target_id, str(self.n), _p_label(self.p_spec), str(self.samples),
                    "", "", "", "", str(self.master_seed), f"{self.wall_ms:.3f}", self.error]
        return [
            self.target_id,
            str(self.n),
            _p_label(self.p_spec),
            str(self.samples),
            str(self.successes),
            f"{float(self.estimate):.6g}",
            f"{self.ci_low:.6g}",
            f"{self.ci_high:.6g}",
            str(self.master_seed),
            f"{self.wall_ms:.3f}",
            "",
        ]


CSV_COLUMNS = [
    "target_id", "n", "p_or_family", "samples", "successes",
    "estimate", "ci_low", "ci_high", "master_seed", "wall_ms", "error",
]


# ---------------------------------------------------------------------------
# Exact mu by full enumeration of edge masks, vectorized over mask chunks.

_EXACT_MU_MAX_N = 7
_CHUNK = 1 << 18


class _MaskContext:
    """Per-chunk cache of edge-bit truth arrays over the mask range."""

    def __init__(self, masks: np.ndarray, n: int):
        self.masks = masks
        self.n = n
        self._cache: dict[tuple[int, int], np.ndarray] = {}

    def edge_bit(self, u: int, v: int) -> np.ndarray:
        if u > v:
            u, v = v, u
        key = (u, v)
        arr = self._cache.get(key)
        if arr is None:
            e = u * self.n - u * (u + 1) // 2 + (v - u - 1)
            arr = ((self.masks >> np.uint32(e)) & np.uint32(1)).astype(bool)
            self._cache[key] = arr
        return arr


def _vec_eval(f: Formula, env: dict[str, int], ctx: _MaskContext):
    """Evaluate over all masks at once; returns a bool scalar or bool array.

    Equality atoms fold to scalars under a concrete assignment, which prunes
    guard-violating quantifier branches without touching the arrays.
    """
    if isinstance(f, Eq):
        return env[f.a] == env[f.b]
    if isinstance(f, Edge):
        u, v = env[f.a], env[f.b]
        if u == v:
            return False
        return ctx.edge_bit(u, v)
    if isinstance(f, Not):
        r = _vec_eval(f.body, env, ctx)
        return (not r) if isinstance(r, bool) else ~r
    if isinstance(f, And):
        a = _vec_eval(f.lhs, env, ctx)
        if a is False:
            return False
        b = _vec_eval(f.rhs, env, ctx)
        if b is False:
            return False
        if a is True:
            return b
        if b is True:
            return a
        return a & b
    if isinstance(f, Or):
        a = _vec_eval(f.lhs, env, ctx)
        if a is True:
            return True
        b = _vec_eval(f.rhs, env, ctx)
        if b is True:
            return True
        if a is False:
            return b
        if b is False:
            return a
        return a | b
    if isinstance(f, Implies):
        a = _vec_eval(f.lhs, env, ctx)
        if a is False:
            return True
        b = _vec_eval(f.rhs, env, ctx)
        if a is True:
            return b
        if b is True:
            return True
        if b is False:
            return ~a
        return ~a | b
    if isinstance(f, Forall):
        acc = True
        for v in range(ctx.n):
            r = _vec_eval(f.body, {**env, f.var: v}, ctx)
            if r is False:
                return False
            if r is True:
                continue
            acc = r if acc is True else acc & r
            if acc is not True and not acc.any():
                return False
        return acc
    if isinstance(f, Exists):
        acc = False
        for v in range(ctx.n):
            r = _vec_eval(f.body, {**env, f.var: v}, ctx)
            if r is True:
                return True
            if r is False:
                continue
            acc = r if acc is False else acc | r
            if acc is not False and acc.all():
                return True
        return acc
    raise ExperimentError(f"not a formula node: {f!r}")


def exact_mu(f: Formula, n: int) -> Fraction:
    """Exact mu_n(f): satisfying labeled graphs over 2**C(n,2), full enumeration."""
    if n < 1:
        raise ExperimentError(f"need n >= 1, got {n}")
    if n > _EXACT_MU_MAX_N:
        raise ExperimentError(f"exact_mu is capped at n={_EXACT_MU_MAX_N}, got n={n}")
    bits = comb(n, 2)
    total = 1 << bits
    count = 0
    for start in range(0, total, _CHUNK):
        stop = min(start + _CHUNK, total)
        masks = np.arange(start, stop, dtype=np.uint32)
        ctx = _MaskContext(masks, n)
        r = _vec_eval(f, {}, ctx)
        if r is True:
            count += stop - start
        elif r is not False:
            count += int(np.count_nonzero(r))
    return Fraction(count, total)


@dataclass
class EaBoundCheck:
    exact: Fraction
    bound: Fraction
    holds: bool


def verify_ea_bound(m: int, n: int, k: int) -> EaBoundCheck:
    """Compare exact mu_k(not EA_{m,n}) against k**n * (1 - 2**-n)**(k-n)."""
    if not (0 <= m <= n <= 3):
        raise ExperimentError(f"need m <= n <= 3, got m={m}, n={n}")
    if not (n < k <= _EXACT_MU_MAX_N):
        raise ExperimentError(f"need n < k <= {_EXACT_MU_MAX_N}, got k={k}")
    exact = 1 - exact_mu(extension_axiom(m, n), k)
    bound = Fraction(k**n) * Fraction((2**n - 1) ** (k - n), (2**n) ** (k - n))
    return EaBoundCheck(exact=exact, bound=bound, holds=exact <= bound)


# ---------------------------------------------------------------------------
# Monte Carlo estimation.


def _mu_chunk(args) -> int:
    f, n, p, master_seed, start, stop = args
    hits = 0
    for i in range(start, stop):
        g = gnp_sample(n, p, derive_trial_seed(master_seed, i))
        if evaluate(f, g):
            hits += 1
    return hits


def _win_chunk(args) -> int:
    variant, who, n, p, master_seed, max_states, start, stop = args
    hits = 0
    for i in range(start, stop):
        g = gnp_sample(n, p, derive_trial_seed(master_seed, i))
        if game_value(g, variant, max_states) is who:
            hits += 1
    return hits


def _run_chunks(worker, static_args, samples: int, jobs: int) -> int:
    ranges = []
    step = max(1, -(-samples // max(1, jobs * 4)))
    for start in range(0, samples, step):
        ranges.append((start, min(start + step, samples)))
    if jobs <= 1:
        return sum(worker(static_args + r) for r in ranges)
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return sum(pool.map(worker, [static_args + r for r in ranges]))


def _finish_report(target_id, n, p_spec, samples, successes, master_seed, t0) -> EstimateReport:
    lo, hi = wilson_interval(successes, samples)
    return EstimateReport(
        target_id=target_id,
        n=n,
        p_spec=p_spec,
        samples=samples,
        successes=successes,
        estimate=Fraction(successes, samples),
        ci_low=lo,
        ci_high=hi,
        master_seed=master_seed,
        wall_ms=(time.perf_counter() - t0) * 1000.0,
    )


def estimate_mu(f: Formula, n: int, p_spec: PSpec, samples: int, master_seed: int, jobs: int = 1) -> EstimateReport:
    """Monte Carlo estimate of the G(n,p) probability that f holds."""
    if samples < 1:
        raise ExperimentError(f"need samples >= 1, got {samples}")
    t0 = time.perf_counter()
    p = _p_at(p_spec, n)
    successes = _run_chunks(_mu_chunk, (f, n, p, master_seed), samples, jobs)
    return _finish_report(f"mu[{to_text(f)}]", n, p_spec, samples, successes, master_seed, t0)


def estimate_win(
    v: Variant,
    who: Winner,
    n: int,
    p_spec: PSpec,
    samples: int,
    master_seed: int,
    jobs: int = 1,
    max_states: int = DEFAULT_MAX_STATES,
) -> EstimateReport:
    """Monte Carlo frequency of `who` winning variant v on G(n, p) samples.

    The worst-case arena size is prechecked so a budget violation aborts
    before any sampling starts.
    """
    if samples < 1:
        raise ExperimentError(f"need samples >= 1, got {samples}")
    estimate = state_estimate(n, v)
    if estimate > max_states:
        raise ArenaBudgetError(estimate, max_states)
    t0 = time.perf_counter()
    p = _p_at(p_spec, n)
    successes = _run_chunks(_win_chunk, (v, who, n, p, master_seed, max_states), samples, jobs)
    return _finish_report(f"win[{variant_id(v)}]={who.value}", n, p_spec, samples, successes, master_seed, t0)


# ---------------------------------------------------------------------------
# Varying-p regime classification.


@dataclass(frozen=True)
class Regime:
    """Zero-one-law regime tag; a function of (alpha, beta) only."""

    tag: str  # R1 | R2 | R3 | R4 | outside
    k: int | None = None

    def describe(self) -> str:
        return f"R2(k={self.k})" if self.tag == "R2" else self.tag


def classify_regime(fam: PFamily) -> Regime:
    """Classify p(N) = c N^-alpha (log N)^beta; boundaries map to `outside`.

    R1: alpha > 2.  R2(k): 1 + 1/k < alpha < 1 + 1/(k-1) for an integer
    k >= 2 (interval orientation corrected; the printed condition is empty).
    R3: alpha = 1, beta < 0.  R4: alpha = 1, 0 < beta < 1.
    """
    a, b = fam.alpha, fam.beta
    if a > 2:
        return Regime("R1")
    if 1 < a < 2:
        j = 1.0 / (a - 1.0)
        if j == int(j):
            return Regime("outside")  # boundary alpha = 1 + 1/k
        k = int(math.floor(j)) + 1
        if k >= 2 and 1 + 1 / k < a < 1 + 1 / (k - 1):
            return Regime("R2", k)
        return Regime("outside")
    if a == 1:
        if b < 0:
            return Regime("R3")
        if 0 < b < 1:
            return Regime("R4")
        return Regime("outside")
    return Regime("outside")


# ---------------------------------------------------------------------------
# Sweeps.

SweepTarget = Union[Formula, tuple[Variant, Winner]]


def sweep(
    target: SweepTarget,
    n_list: list[int],
    p_spec: PSpec,
    samples: int,
    master_seed: int,
    jobs: int = 1,
    max_states: int = DEFAULT_MAX_STATES,
) -> list[EstimateReport]:
    """One report per n, in n order; per-row budget errors are recorded in-row."""
    rows: list[EstimateReport] = []
    for n in n_list:
        t0 = time.perf_counter()
        try:
            if isinstance(target, tuple):
                v, who = target
                rows.append(estimate_win(v, who, n, p_spec, samples, master_seed, jobs, max_states))
            else:
                rows.append(estimate_mu(target, n, p_spec, samples, master_seed, jobs))
        except (ArenaBudgetError, ExperimentError) as exc:
            tid = f"win[{variant_id(target[0])}]={target[1].value}" if isinstance(target, tuple) else f"mu[{to_text(target)}]"
            rows.append(
                EstimateReport(
                    target_id=tid, n=n, p_spec=p_spec, samples=samples, successes=0,
                    estimate=Fraction(0), ci_low=0.0, ci_high=0.0,
                    master_seed=master_seed, wall_ms=(time.perf_counter() - t0) * 1000.0,
                    error=str(exc),
                )
            )
    return rows


def sweep_to_csv(rows: list[EstimateReport], config: dict | None = None) -> str:
    """CSV text; floats at 6 significant digits, config embedded as a comment."""
    import csv
    import io

    buf = io.StringIO()
    if config is not None:
        buf.write("# config " + json.dumps(config, sort_keys=True) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        w.writerow(r.to_csv_row())
    return buf.getvalue()
