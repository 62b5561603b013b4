"""Drifting-game potential functions.

Convention throughout this module: state vectors s and distributions b are
indexed with coordinate 1 (array index 0) = the true label. Both losses
depend on s only through the differences s_l - s_1, and so do all
potentials; the minimal-condition solver exploits that for memoization.
"""

import itertools
import math
from dataclasses import dataclass

import numpy as np

ZERO_ONE = "ZERO_ONE"
EXP = "EXP"


@dataclass(frozen=True)
class LossSpec:
    kind: str
    eta: float = 0.0

    def __post_init__(self):
        if self.kind not in (ZERO_ONE, EXP):
            raise ValueError(f"unknown loss kind {self.kind}")
        if self.kind == EXP and self.eta < 0:
            raise ValueError("EXP loss needs eta >= 0")


def loss_value(loss, s):
    s = np.asarray(s, dtype=float)
    if loss.kind == ZERO_ONE:
        return 1.0 if s[0] <= s[1:].max() else 0.0
    return float(np.exp(loss.eta * (s[1:] - s[0])).sum())


@dataclass(frozen=True)
class EorDistribution:
    """A distribution in Delta_gamma^k: b(1) - gamma = max of the rest."""
    b: tuple
    gamma: float

    def __post_init__(self):
        b = np.asarray(self.b, dtype=float)
        if b.min() < -1e-12 or abs(b.sum() - 1.0) > 1e-9:
            raise ValueError("b must be a probability vector")
        if abs((b[0] - self.gamma) - b[1:].max()) > 1e-9:
            raise ValueError("b violates the edge-over-random equality")

    @property
    def k(self):
        return len(self.b)


def gamma_biased_uniform(k, gamma):
    base = (1.0 - gamma) / k
    return EorDistribution((base + gamma,) + (base,) * (k - 1), gamma)


def kappa(gamma, eta, k):
    """Per-round drop factor of the uniform-baseline exponential potential."""
    return (1.0 + ((1.0 - gamma) / k) * (math.exp(eta) + math.exp(-eta) - 2.0)
            - (1.0 - math.exp(-eta)) * gamma)


def potential_exp_closed(b, eta, t, s):
    # phi^b_t(s) = sum_{l>=2} a_l^t e^{eta (s_l - s_1)}
    bv = np.asarray(b.b if isinstance(b, EorDistribution) else b, dtype=float)
    s = np.asarray(s, dtype=float)
    a = 1.0 - (bv[0] + bv[1:]) + math.exp(eta) * bv[1:] + math.exp(-eta) * bv[0]
    return float((a ** t * np.exp(eta * (s[1:] - s[0]))).sum())


def potential_zeroone_dp(b, t, s):
    """1 - Pr[s_1 + x_1 > s_l + x_l for all l > 1] after a t-step walk.

    Outer loop over the true-coordinate count x_1 = j; inner DP over the
    remaining coordinates tracks votes used, carrying b_l^n / n! factors
    so the multinomial coefficient assembles at the end. O(t^3 k).
    """
    bv = np.asarray(b.b if isinstance(b, EorDistribution) else b, dtype=float)
    s = np.asarray(s, dtype=int)
    k = len(bv)
    if t < 0:
        raise ValueError("t must be >= 0")
    win = 0.0
    for j in range(t + 1):
        caps = [s[0] + j - s[l] - 1 for l in range(1, k)]
        if any(c < 0 for c in caps):
            continue
        g = [0.0] * (t - j + 1)
        g[0] = 1.0
        for l in range(1, k):
            ng = [0.0] * (t - j + 1)
            for used in range(t - j + 1):
                if g[used] == 0.0:
                    continue
                top = min(caps[l - 1], t - j - used)
                for n in range(top + 1):
                    ng[used + n] += g[used] * bv[l] ** n / math.factorial(n)
            g = ng
        win += math.factorial(t) / math.factorial(j) * bv[0] ** j * g[t - j]
    return 1.0 - min(win, 1.0)


def potential_oracle_bruteforce(b, loss, t, s):
    """Exact E[L(end state)] by enumerating all k^t walk paths."""
    bv = np.asarray(b.b if isinstance(b, EorDistribution) else b, dtype=float)
    k = len(bv)
    if t > 8 or k > 5:
        raise ValueError("brute-force oracle capped at t <= 8, k <= 5")
    s = np.asarray(s, dtype=float)
    total = 0.0
    for path in itertools.product(range(k), repeat=t):
        prob = 1.0
        end = s.copy()
        for step in path:
            prob *= bv[step]
            end[step] += 1.0
        if prob:
            total += prob * loss_value(loss, end)
    return total


def potential_fixed(b, loss, t, s):
    """phi^b_t(s) for a fixed edge-over-random baseline row b."""
    if loss.kind == EXP:
        return potential_exp_closed(b, loss.eta, t, s)
    return potential_zeroone_dp(b, t, s)


class MinimalPotential:
    """Minimal-condition potential phi_t(s) with degree annotations.

    The recurrence maximizes over the degree a in {2..k}: the adversary's
    distribution puts (1-gamma)/a + gamma on the true coordinate and
    (1-gamma)/a on the a-1 wrong coordinates whose child potentials are
    largest. States are memoized as sorted difference vectors s_l - s_1.
    """

    STATE_CAP = 5_000_000

    def __init__(self, gamma, loss, k):
        if k < 2:
            raise ValueError("need k >= 2")
        self.gamma = gamma
        self.loss = loss
        self.k = k
        self._memo = {}

    def _loss_at(self, diffs):
        if self.loss.kind == ZERO_ONE:
            return 1.0 if max(diffs) >= 0 else 0.0
        return float(sum(math.exp(self.loss.eta * d) for d in diffs))

    def _value(self, t, diffs):
        key = (t, tuple(sorted(diffs, reverse=True)))
        hit = self._memo.get(key)
        if hit is not None:
            return hit[0]
        value, _ = self._value_degree(t, key[1])
        return value

    def _value_degree(self, t, diffs):
        key = (t, tuple(sorted(diffs, reverse=True)))
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        if t == 0:
            result = (self._loss_at(diffs), self.k)
        else:
            d = list(key[1])
            child_true = self._value(t - 1, [x - 1 for x in d])
            child_wrong = [self._value(t - 1, d[:j] + [d[j] + 1] + d[j + 1:])
                           for j in range(self.k - 1)]
            # stable sort by (value desc, label index asc); d is already in
            # descending order so equal child values keep label order
            order = sorted(range(self.k - 1), key=lambda j: (-child_wrong[j], j))
            best_val, best_a = -math.inf, None
            run = 0.0
            for a in range(2, self.k + 1):
                run += child_wrong[order[a - 2]]
                share = (1.0 - self.gamma) / a
                val = (share + self.gamma) * child_true + share * run
                if val >= best_val - 1e-15:  # ties -> largest a
                    best_val, best_a = max(val, best_val), a
            result = (best_val, best_a)
        if len(self._memo) >= self.STATE_CAP:
            raise RuntimeError("minimal-potential state cap exceeded")
        self._memo[key] = result
        return result

    def value_degree(self, t, s):
        s = np.asarray(s, dtype=int)
        if len(s) != self.k:
            raise ValueError("state arity mismatch")
        diffs = [int(x) for x in (s[1:] - s[0])]
        return self._value_degree(t, diffs)


def potential_minimal(gamma, loss, t, s, table=None):
    """(value, degree) of the minimal-condition potential at (t, s)."""
    s = np.asarray(s, dtype=int)
    if table is None:
        table = MinimalPotential(gamma, loss, len(s))
    return table.value_degree(t, s)


def degree_map(gamma, loss, T, k=3):
    """Degrees over compressed states (u, v) = (s_2-s_1, s_3-s_2).

    Returns a list of (u, v, t, degree) rows for t = 1..T and
    u, v in [-T, T]; only meaningful for k = 3.
    """
    if k != 3:
        raise ValueError("degree maps are 2-D only for k = 3")
    table = MinimalPotential(gamma, loss, k)
    rows = []
    for t in range(1, T + 1):
        for u in range(-T, T + 1):
            for v in range(-T, T + 1):
                _, a = table.value_degree(t, (0, u, u + v))
                rows.append((u, v, t, a))
    return rows


def minimal_vs_fixed_gap(gamma, T, k):
    """(phi_T(0), max_b phi^b_T(0)) under ZERO_ONE; the fixed maximum is
    taken at the gamma-biased uniform b."""
    loss = LossSpec(ZERO_ONE)
    zero = np.zeros(k, dtype=int)
    minimal, _ = potential_minimal(gamma, loss, T, zero)
    fixed = potential_zeroone_dp(gamma_biased_uniform(k, gamma), T, zero)
    return minimal, fixed
