"""Exact simulation of the matched edge-vertex reveal martingale.

The target quantity is e(S), the number of matching edges lying entirely
inside the fixed set S = {0, ..., k-1}, for a union of d uniform perfect
matchings on n vertices.  Partner vertices are revealed one query at a time,
matching-major then vertex-minor (matching m = 0..d-1, query vertex
i = 0..k-2), and after each reveal the conditional expectation of e(S) is
recomputed in closed form: revealed inside-edges count 1 each, the rest of
the current matching contributes phi(a, b) = C(a,2)/(b-1) where a and b
count unmatched S-vertices and unmatched vertices overall, and each future
matching contributes phi(k, n).

Because the conditional expectations are exact, the martingale property and
increment bounds can be checked exactly on every step of every trace.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bounds import TailBound, phi_matching, tail_bound_generic
from .errors import InvalidArgumentError
from .graph import WeightedGraph, sample_matching_partners
from .rng import derive_seed, make_generator


@dataclass(frozen=True)
class RevealTrace:
    """One full reveal of d matchings against S = {0..k-1}.

    Arrays are indexed by step ell = 1..N with N = d(k-1); x0 is the
    unconditional expectation E[e(S)] and x[-1] the realized interior count.
    """

    n: int
    k: int
    d: int
    seed: int
    x0: float
    z: np.ndarray  # revealed partner of the queried vertex
    w: np.ndarray  # indicator: reveal created a new inside-S edge
    x: np.ndarray  # conditional expectation after the reveal
    y: np.ndarray  # increment x[ell] - x[ell-1]
    a: np.ndarray  # unmatched S-vertices in the current matching, after the reveal
    b: np.ndarray  # unmatched vertices overall in the current matching, after the reveal
    quad_char: np.ndarray  # running sum of exact conditional indicator variances
    matchings: tuple[tuple[int, ...], ...]  # realized partner array per matching

    @property
    def steps(self) -> int:
        return self.z.size

    def to_graph(self) -> WeightedGraph:
        edges = []
        for partner in self.matchings:
            edges.extend((u, p, 1.0, 1) for u, p in enumerate(partner) if u < p)
        return WeightedGraph(self.n, edges)

    def step_rows(self):
        """Iterator of (ell, z, w, x, y, a, b, quad_char) for CSV export."""
        for i in range(self.steps):
            yield (
                i + 1,
                int(self.z[i]),
                int(self.w[i]),
                float(self.x[i]),
                float(self.y[i]),
                int(self.a[i]),
                int(self.b[i]),
                float(self.quad_char[i]),
            )


def _check_domain(n: int, k: int, d: int) -> None:
    if n < 4 or n % 2 != 0:
        raise InvalidArgumentError(f"reveal martingale needs even n >= 4, got {n}")
    # The balanced case k = n/2 simulates fine; only the C-dependent tail
    # bounds need the strict inequality.
    if not 2 <= k <= n / 2:
        raise InvalidArgumentError(f"need 2 <= k <= n/2, got k={k}, n={n}")
    if d < 1:
        raise InvalidArgumentError(f"need d >= 1, got {d}")


def simulate_reveal(n: int, k: int, d: int, seed: int) -> RevealTrace:
    """Sample d matchings and walk the reveal schedule with exact expectations."""
    _check_domain(n, k, d)
    rng = make_generator(seed)
    partners = [sample_matching_partners(rng, n) for _ in range(d)]

    steps = d * (k - 1)
    z_arr = np.empty(steps, dtype=np.int64)
    w_arr = np.empty(steps, dtype=np.int64)
    x_arr = np.empty(steps)
    y_arr = np.empty(steps)
    a_arr = np.empty(steps, dtype=np.int64)
    b_arr = np.empty(steps, dtype=np.int64)
    qc_arr = np.empty(steps)

    phi_full = phi_matching(k, n)
    x0 = d * phi_full
    x_prev = x0
    qc = 0.0
    revealed_total = 0  # inside-S edges revealed in completed and current matchings
    ell = 0
    for m, partner in enumerate(partners):
        a, b = k, n
        matched = np.zeros(n, dtype=bool)
        future = (d - m - 1) * phi_full
        for i in range(k - 1):
            if matched[i]:
                # Partner already known from an earlier reveal in this matching;
                # nothing new is learned and the increment is zero.
                z = int(partner[i])
                w = 0
                var = 0.0
            else:
                z = int(partner[i])
                matched[i] = True
                matched[z] = True
                w = 1 if z < k else 0
                # Exact conditional variance of the inside-edge indicator:
                # the partner is uniform over the b-1 unmatched non-i vertices,
                # a-1 of which lie in S.
                p_inside = (a - 1) / (b - 1)
                var = p_inside * (1.0 - p_inside)
                if w:
                    revealed_total += 1
                    a -= 2
                else:
                    a -= 1
                b -= 2
            x_now = revealed_total + phi_matching(a, b) + future
            z_arr[ell] = z
            w_arr[ell] = w
            x_arr[ell] = x_now
            y_arr[ell] = x_now - x_prev
            a_arr[ell] = a
            b_arr[ell] = b
            qc += var
            qc_arr[ell] = qc
            x_prev = x_now
            ell += 1
        # After the last query of a matching at most one S-vertex is unmatched,
        # so phi(a, b) = 0 and x_prev already equals the realized count plus
        # the untouched matchings' expectation; nothing to close out.

    return RevealTrace(
        n=n,
        k=k,
        d=d,
        seed=seed,
        x0=x0,
        z=z_arr,
        w=w_arr,
        x=x_arr,
        y=y_arr,
        a=a_arr,
        b=b_arr,
        quad_char=qc_arr,
        matchings=tuple(tuple(int(p) for p in partner) for partner in partners),
    )


def interior_count(partners, k: int) -> int:
    """Realized number of matching edges inside {0..k-1} across all matchings."""
    return int(sum(int((p[:k] < k).sum()) for p in partners) // 2)


@dataclass(frozen=True)
class EmpiricalTail:
    n: int
    k: int
    d: int
    delta: float
    trials: int
    exceedances: int
    empirical_prob: float
    expected_interior: float
    sample_mean_interior: float
    bound: TailBound


def empirical_tail(n: int, k: int, d: int, delta: float, trials: int, seed: int) -> EmpiricalTail:
    """Fraction of trials with |e(S) - E| >= delta E, next to the analytic bound.

    Per-trial seeds are derived from the master seed so trials are
    reproducible and independent.
    """
    _check_domain(n, k, d)
    if trials < 1:
        raise InvalidArgumentError(f"need at least one trial, got {trials}")
    if not delta > 0:
        raise InvalidArgumentError(f"need delta > 0, got {delta}")
    expected = math.comb(k, 2) * d / (n - 1.0)
    threshold = delta * expected
    exceed = 0
    total = 0
    for t in range(trials):
        rng = make_generator(derive_seed(seed, t))
        e = interior_count([sample_matching_partners(rng, n) for _ in range(d)], k)
        total += e
        if abs(e - expected) >= threshold:
            exceed += 1
    return EmpiricalTail(
        n=n,
        k=k,
        d=d,
        delta=float(delta),
        trials=trials,
        exceedances=exceed,
        empirical_prob=exceed / trials,
        expected_interior=expected,
        sample_mean_interior=total / trials,
        bound=tail_bound_generic(n, k, d, delta),
    )


def binomial_tail_ge(x: int, n: int, p: float) -> float:
    """Exact P[Binomial(n, p) >= x]; used for one-sided empirical-vs-bound tests."""
    if x <= 0:
        return 1.0
    if x > n:
        return 0.0
    p = min(max(p, 0.0), 1.0)
    if p == 0.0:
        return 0.0
    if p == 1.0:
        return 1.0
    logp = math.log(p)
    log1mp = math.log1p(-p)
    total = 0.0
    # Sum upward from x; terms decay geometrically once past the mode.
    for j in range(x, n + 1):
        term = math.exp(math.lgamma(n + 1) - math.lgamma(j + 1) - math.lgamma(n - j + 1) + j * logp + (n - j) * log1mp)
        total += term
        if j > n * p and term < 1e-18 * max(total, 1e-300):
            break
    return min(total, 1.0)
