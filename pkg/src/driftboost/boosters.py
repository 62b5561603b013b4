"""Boosting loops: the non-adaptive OS strategy for a fixed
edge-over-random condition, adaptive AdaBoost.MM with both step rules,
plain binary AdaBoost, and the mislabel-triple transform tying the two
together.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .core import (Baseline, CostMatrix, Dataset, ScoringFunction,
                   WeakClassifier, indicator)
from .potentials import EXP, ZERO_ONE, LossSpec, loss_value, potential_fixed

ALPHA_MAX = 20.0


@dataclass
class BoostRound:
    t: int
    classifier: object
    classifier_index: int   # -1 when the learner exposes none
    edge: float
    alpha: float
    Z_prev: float
    Z_after: float
    A_plus: float = 0.0
    A_minus: float = 0.0
    extra: dict = field(default_factory=dict)


@dataclass
class BoostRun:
    rounds: list
    scoring: ScoringFunction
    dataset: Dataset
    separated: bool = False
    negative_edge_rounds: int = 0
    bound_asserted: bool = True
    extra: dict = field(default_factory=dict)

    @property
    def weights(self):
        return [r.alpha for r in self.rounds]


def _mm_weight_matrix(f, y):
    """exp(f(i,l) - f(i,y_i)) off the true label, 0 on it."""
    m = f.shape[0]
    d = f - f[np.arange(m), y][:, None]
    e = np.exp(np.minimum(d, 700.0))
    e[np.arange(m), y] = 0.0
    return e


def edge_minimal(C, h_preds, f, labels):
    """delta = (-C.1_h) / Z for the adaptive cost matrix at state f."""
    c = C.entries if isinstance(C, CostMatrix) else np.asarray(C, dtype=float)
    y = np.asarray(labels, dtype=int) - 1
    z = _mm_weight_matrix(np.asarray(f, dtype=float), y).sum()
    if z <= 0.0:
        raise ValueError("Z = 0: state already separated")
    preds = np.asarray(h_preds, dtype=int)
    return float(-c[np.arange(len(preds)), preds - 1].sum() / z)


def drop_factor_exact(A_plus, A_minus, Z_prev, delta):
    """Exact per-round loss drop under the EXACT step rule:
    (1 - c) + sqrt(c^2 - delta^2) with c = (A_plus + A_minus)/Z_prev.
    Always <= sqrt(1 - delta^2)."""
    if not 0.0 <= A_minus <= A_plus <= Z_prev:
        raise ValueError("need 0 <= A_minus <= A_plus <= Z_prev")
    if abs(delta - (A_plus - A_minus) / Z_prev) > 1e-9:
        raise ValueError("delta inconsistent with (A_plus - A_minus)/Z_prev")
    c = (A_plus + A_minus) / Z_prev
    return (1.0 - c) + math.sqrt(max(c * c - delta * delta, 0.0))


def adaboost_mm(dataset, T, learner, step_rule="APPROX", alpha_max=ALPHA_MAX):
    """Algorithm with original labels y_i: adaptive cost matrix, edge
    delta_t = (-C_t.1_h)/Z_{t-1}, APPROX or EXACT step, clamp at
    alpha_max on separation."""
    if step_rule not in ("APPROX", "EXACT"):
        raise ValueError("step_rule must be APPROX or EXACT")
    m, k = dataset.m, dataset.k
    y = dataset.label_array - 1
    f = np.zeros((m, k))
    rounds, prov = [], []
    separated = False
    negative = 0
    for t in range(1, T + 1):
        e = _mm_weight_matrix(f, y)
        Z = float(e.sum())
        if Z <= 0.0:
            separated = True
            break
        C = e.copy()
        C[np.arange(m), y] = -e.sum(axis=1)
        h = learner(dataset, CostMatrix(C, "EOR"))
        preds = h.predict_all(dataset)
        cost = float(C[np.arange(m), preds - 1].sum())
        delta = -cost / Z
        correct = preds - 1 == y
        A_plus = float(e[correct].sum())
        A_minus = float(e[np.arange(m), preds - 1][~correct].sum())

        clamped = False
        if delta <= 0.0:
            alpha = 0.0
            negative += 1
        elif step_rule == "APPROX":
            if delta >= 1.0 - 1e-15:
                alpha, clamped = alpha_max, True
            else:
                alpha = 0.5 * math.log((1.0 + delta) / (1.0 - delta))
                if alpha > alpha_max:
                    alpha, clamped = alpha_max, True
        else:
            if A_minus == 0.0:
                alpha, clamped = alpha_max, True
            else:
                alpha = 0.5 * math.log(A_plus / A_minus)
                if alpha > alpha_max:
                    alpha, clamped = alpha_max, True
                alpha = max(alpha, 0.0)
        f[np.arange(m), preds - 1] += alpha
        # exact identity: Z_t = Z - (1-e^-a) A_plus + (e^a - 1) A_minus
        Z_after = Z - (1.0 - math.exp(-alpha)) * A_plus \
            + (math.exp(alpha) - 1.0) * A_minus
        prov.append((h, alpha))
        rounds.append(BoostRound(t, h, getattr(h, "index", -1), delta, alpha,
                                 Z, Z_after, A_plus, A_minus))
        if clamped:
            separated = True
            break
    return BoostRun(rounds, ScoringFunction(tuple(prov), k), dataset,
                    separated=separated, negative_edge_rounds=negative)


# ------------------------------------------------------------ OS strategy

def os_boost_fixed(dataset, baseline, loss, T, learner):
    """OS booster for a fixed EOR baseline: C_t(i,l) =
    phi^{b_i}_{T-t-1}(s_t(i) + e_l), alpha_t = 1 (ZERO_ONE) or eta (EXP).

    Potentials index coordinate 1 = true label, so each row's baseline
    and state are reordered true-label-first before lookups."""
    if not isinstance(baseline, Baseline) or baseline.kind not in ("EOR", "U"):
        raise ValueError("OS booster needs an edge-over-random baseline")
    m, k = dataset.m, dataset.k
    y = dataset.label_array - 1
    order = [np.concatenate(([y[i]], np.delete(np.arange(k), y[i])))
             for i in range(m)]
    brows = [tuple(baseline.entries[i][order[i]]) for i in range(m)]
    alpha = loss.eta if loss.kind == EXP else 1.0

    cache = {}

    def phi(b, t, s):
        key = (b, t, tuple(int(x - s[0]) for x in s))
        if key not in cache:
            cache[key] = potential_fixed(np.array(b), loss, t, np.array(s))
        return cache[key]

    s = np.zeros((m, k), dtype=int)
    rounds, prov = [], []
    initial = sum(phi(brows[i], T, s[i][order[i]]) for i in range(m)) / m
    all_satisfied = True
    for t in range(T):
        rem = T - t - 1
        C = np.zeros((m, k))
        for i in range(m):
            for l in range(k):
                child = s[i].copy()
                child[l] += 1
                C[i, l] = phi(brows[i], rem, child[order[i]])
        h = learner(dataset, CostMatrix(C, "UNCONSTRAINED"))
        preds = h.predict_all(dataset)
        hcost = float(C[np.arange(m), preds - 1].sum())
        bcost = float((C * baseline.entries).sum())
        e = bcost - hcost
        if e < -1e-9:
            all_satisfied = False
        s[np.arange(m), preds - 1] += 1
        avg = sum(phi(brows[i], rem, s[i][order[i]]) for i in range(m)) / m
        prov.append((h, alpha))
        rounds.append(BoostRound(t + 1, h, getattr(h, "index", -1), e, alpha,
                                 0.0, 0.0, extra={"avg_potential": avg}))
    scoring = ScoringFunction(tuple(prov), k)
    run = BoostRun(rounds, scoring, dataset,
                   extra={"initial_potential": initial,
                          "condition_satisfied": all_satisfied})
    if all_satisfied:
        from .core import training_error
        err = training_error(scoring, dataset)
        run.bound_asserted = err <= initial + 1e-9
        assert run.bound_asserted, (
            f"training error {err} above initial potential {initial}")
    else:
        run.bound_asserted = False
    return run


# ---------------------------------------------------- mislabel transform

@dataclass(frozen=True)
class MislabelDataset:
    """m(k-1) all-negative binary triples (i, y_i, l), l != y_i."""
    triples: tuple         # ((example index, y, l), ...)
    source: Dataset

    @property
    def size(self):
        return len(self.triples)


class TransformedClassifier:
    """h~(x, y, l) = 1[h(x)=l] - 1[h(x)=y], in {-1, 0, +1}."""

    def __init__(self, h, source, index=-1):
        self.h = h
        self.index = index
        self._preds = h.predict_all(source)

    def values(self, mislabel):
        out = np.empty(mislabel.size)
        for j, (i, yy, l) in enumerate(mislabel.triples):
            p = self._preds[i]
            out[j] = (1.0 if p == l else 0.0) - (1.0 if p == yy else 0.0)
        return out


def transform_mislabel(dataset, Hspace):
    triples = tuple((i, int(dataset.labels[i]), l)
                    for i in range(dataset.m)
                    for l in range(1, dataset.k + 1) if l != dataset.labels[i])
    mislabel = MislabelDataset(triples, dataset)
    transformed = [TransformedClassifier(h, dataset, j)
                   for j, h in enumerate(Hspace)]
    return mislabel, transformed


def adaboost_binary(mislabel, Hspace, T, alpha_max=ALPHA_MAX):
    """Confidence-rated binary AdaBoost on the all-negative transform;
    each round takes the maximum-edge transformed hypothesis (ties to the
    lowest index)."""
    n = mislabel.size
    values = np.array([h.values(mislabel) for h in Hspace])
    Ft = np.zeros(n)
    rounds, alphas, chosen = [], [], []
    separated = False
    negative = 0
    for t in range(1, T + 1):
        w = np.exp(np.minimum(Ft, 700.0))  # labels are all -1
        Z = float(w.sum())
        if Z <= 0.0:
            separated = True
            break
        dist = w / Z
        edges = -(values @ dist)
        # lowest index among near-maximal edges, so exact mathematical
        # ties cannot be broken by float summation noise
        j = int(np.argmax(edges >= edges.max() - 2e-12))
        delta = float(edges[j])
        clamped = False
        if delta <= 0.0:
            alpha = 0.0
            negative += 1
        elif delta >= 1.0 - 1e-15:
            alpha, clamped = alpha_max, True
        else:
            alpha = 0.5 * math.log((1.0 + delta) / (1.0 - delta))
            if alpha > alpha_max:
                alpha, clamped = alpha_max, True
        Ft = Ft + alpha * values[j]
        rounds.append(BoostRound(t, Hspace[j], j, delta, alpha, Z,
                                 float(np.exp(np.minimum(Ft, 700.0)).sum()),
                                 extra={"dist": dist}))
        alphas.append(alpha)
        chosen.append(j)
        if clamped:
            separated = True
            break
    run = BoostRun(rounds, None, None, separated=separated,
                   negative_edge_rounds=negative,
                   extra={"F_tilde": Ft, "chosen": chosen})
    return run


def check_run_equivalence(dataset, Hspace, T, tol=1e-9):
    """AdaBoost.MM (APPROX, best-response learner) against binary
    AdaBoost on the mislabel transform: same classifier each round, same
    weights, same normalized per-triple weights. Returns (ok, detail)."""
    from .weaklearners import BestResponseLearner
    mm = adaboost_mm(dataset, T, BestResponseLearner(Hspace), "APPROX")
    mislabel, transformed = transform_mislabel(dataset, Hspace)
    bin_run = adaboost_binary(mislabel, transformed, T)

    y = dataset.label_array - 1
    if len(mm.rounds) != len(bin_run.rounds):
        return False, "round counts differ"
    f = np.zeros((dataset.m, dataset.k))
    for ra, rb in zip(mm.rounds, bin_run.rounds):
        if ra.classifier_index != rb.classifier_index:
            return False, f"round {ra.t}: different classifier"
        if abs(ra.alpha - rb.alpha) > tol:
            return False, f"round {ra.t}: weights differ"
        # normalized weights over triples at the start of the round
        e = _mm_weight_matrix(f, y)
        mm_w = np.array([e[i, l - 1] for (i, _, l) in mislabel.triples])
        mm_w /= mm_w.sum()
        if np.max(np.abs(mm_w - rb.extra["dist"])) > tol:
            return False, f"round {ra.t}: per-triple weights differ"
        f[np.arange(dataset.m), ra.classifier.predict_all(dataset) - 1] += ra.alpha
    ft = bin_run.extra["F_tilde"]
    mm_ft = np.array([f[i, l - 1] - f[i, yv - 1]
                      for (i, yv, l) in mislabel.triples])
    if np.max(np.abs(ft - mm_ft)) > max(tol, 1e-8):
        return False, "final transformed scores differ"
    return True, "ok"
