"""Dataset ingestion, experiment orchestration, artifact emission.

All artifacts are TSV with '#'-prefixed metadata lines and 17-significant-
digit floats, so identical seeds give byte-identical files.
"""

import csv
import json
import math
import os
import random

import numpy as np

from . import boosters, conditions, potentials, weaklearners
from .core import Dataset, ScoringFunction, exp_risk, training_error
from .potentials import EXP, ZERO_ONE, LossSpec


def fmt(x):
    return f"{float(x):.17g}"


def load_csv(path, label_column=None):
    """Parse a headered CSV: numeric columns as reals, the rest as
    categories; labels mapped to 1..k by first appearance.

    Returns (dataset, meta) with meta = {label_map, columns, kinds}."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file")
        raw = []
        for ln, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise ValueError(f"{path}:{ln}: expected {len(header)} "
                                 f"fields, got {len(row)}")
            raw.append(row)
    if label_column is None:
        label_column = header[-1]
    if label_column not in header:
        raise ValueError(f"label column {label_column!r} not in header")
    li = header.index(label_column)
    feat_cols = [j for j in range(len(header)) if j != li]

    def numericable(j):
        for row in raw:
            try:
                float(row[j])
            except ValueError:
                return False
        return True

    kinds = {header[j]: ("numeric" if numericable(j) else "categorical")
             for j in feat_cols}
    label_map = {}
    labels = []
    for row in raw:
        v = row[li]
        if v not in label_map:
            label_map[v] = len(label_map) + 1
        labels.append(label_map[v])
    if len(label_map) < 2:
        raise ValueError("dataset has a single class; need k >= 2")
    features = []
    for row in raw:
        frow = []
        for j in feat_cols:
            frow.append(float(row[j]) if kinds[header[j]] == "numeric"
                        else row[j])
        features.append(tuple(frow))
    dataset = Dataset(tuple(features), tuple(labels), len(label_map))
    meta = {"label_map": label_map,
            "columns": [header[j] for j in feat_cols], "kinds": kinds}
    return dataset, meta


def split_dataset(dataset, ratio, seed):
    """Seeded shuffle, then prefix split (train fraction = ratio)."""
    idx = list(range(dataset.m))
    random.Random(seed).shuffle(idx)
    cut = max(1, min(dataset.m - 1, int(round(dataset.m * ratio))))
    take = lambda part: Dataset(
        tuple(dataset.features[i] for i in part),
        tuple(dataset.labels[i] for i in part), dataset.k)
    return take(idx[:cut]), take(idx[cut:])


def _make_learner(name, tree_size):
    if name in ("stump", "best-response"):
        # best-response over the space of all cost-optimal stumps is the
        # exhaustive stump search itself
        return weaklearners.TreeLearner(3, "COST")
    if name == "greedy":
        return weaklearners.TreeLearner(tree_size, "COST")
    if name == "greedy-info":
        return weaklearners.TreeLearner(tree_size, "INFO_GAIN")
    raise ValueError(f"unknown learner {name}")


def _loss_from_cfg(cfg):
    if cfg.get("loss", "zeroone") == "exp":
        return LossSpec(EXP, cfg.get("eta", 0.1))
    return LossSpec(ZERO_ONE)


def run_experiment(cfg):
    """Train per cfg, write run.tsv + model.json + metrics.tsv into
    cfg['out']; returns the metrics dict."""
    dataset, meta = load_csv(cfg["data"], cfg.get("label"))
    train, test = split_dataset(dataset, cfg.get("split", 0.8),
                                cfg.get("seed", 0))
    learner = _make_learner(cfg.get("learner", "greedy"),
                            cfg.get("tree_size", 5))
    T = cfg.get("rounds", 10)
    algo = cfg.get("algo", "mm-approx")
    loss = _loss_from_cfg(cfg)
    if algo in ("mm-approx", "mm-exact"):
        rule = "APPROX" if algo == "mm-approx" else "EXACT"
        run = boosters.adaboost_mm(train, T, learner, rule)
    elif algo == "os":
        baseline = conditions.uniform_baseline(train, cfg.get("gamma", 0.0))
        run = boosters.os_boost_fixed(train, baseline, loss, T, learner)
    else:
        raise ValueError(f"unknown algo {algo}")

    outdir = cfg["out"]
    os.makedirs(outdir, exist_ok=True)
    # drop the output path from the recorded config so identical seeds
    # give byte-identical artifacts regardless of destination
    logged = {k: v for k, v in cfg.items() if k != "out"}
    header_meta = [f"# config {json.dumps(logged, sort_keys=True)}",
                   f"# label_map {json.dumps(meta['label_map'], sort_keys=True)}"]

    # replay the run to get per-round curves on train and test
    ftr = np.zeros((train.m, train.k))
    fte = np.zeros((test.m, test.k))
    lines = ["\t".join(("t", "delta", "alpha", "Z", "train_error",
                        "test_error"))]
    for r in run.rounds:
        ptr = r.classifier.predict_all(train)
        pte = r.classifier.predict_all(test)
        ftr[np.arange(train.m), ptr - 1] += r.alpha
        fte[np.arange(test.m), pte - 1] += r.alpha
        zcol = r.Z_prev if algo != "os" else r.extra.get("avg_potential", 0.0)
        # re-assert the per-round contraction before writing; clamped
        # separation rounds use a capped alpha and are exempt
        if algo != "os" and r.edge >= 0.0 and r.alpha < boosters.ALPHA_MAX:
            bound = r.Z_prev * math.sqrt(1.0 - min(r.edge, 1.0) ** 2) + 1e-9
            assert r.Z_after <= bound, "Z contraction violated"
        lines.append("\t".join((str(r.t), fmt(r.edge), fmt(r.alpha),
                                fmt(zcol), fmt(training_error(ftr, train)),
                                fmt(training_error(fte, test)))))
    with open(os.path.join(outdir, "run.tsv"), "w") as fh:
        fh.write("\n".join(header_meta + lines) + "\n")

    model = {"k": dataset.k, "label_map": meta["label_map"],
             "algo": algo,
             "rounds": [{"alpha": r.alpha,
                         "tree": r.classifier.to_dict()}
                        for r in run.rounds
                        if hasattr(r.classifier, "to_dict")]}
    with open(os.path.join(outdir, "model.json"), "w") as fh:
        json.dump(model, fh, sort_keys=True, indent=1)
        fh.write("\n")

    metrics = {"train_error": training_error(ftr, train),
               "test_error": training_error(fte, test),
               "train_exp_risk": exp_risk(ftr, train),
               "rounds_run": len(run.rounds),
               "separated": run.separated}
    with open(os.path.join(outdir, "metrics.tsv"), "w") as fh:
        fh.write("\n".join(header_meta) + "\n")
        for key in sorted(metrics):
            fh.write(f"{key}\t{fmt(metrics[key]) if isinstance(metrics[key], float) else metrics[key]}\n")
    return metrics


def eval_model(model_path, data_path, label_column=None):
    """Metrics of a serialized model on a fresh CSV (same label map)."""
    with open(model_path) as fh:
        model = json.load(fh)
    dataset, meta = load_csv(data_path, label_column)
    if meta["label_map"] != model["label_map"]:
        # remap through the stored label map when names agree
        raise ValueError("label map mismatch between model and data")
    prov = tuple((weaklearners.tree_from_dict(r["tree"]), r["alpha"])
                 for r in model["rounds"])
    F = ScoringFunction(prov, model["k"])
    return {"error": training_error(F, dataset),
            "exp_risk": exp_risk(F, dataset), "m": dataset.m}


def emit_potential_table(k, gamma, T_max, loss, include_minimal=False):
    """TSV rows (T, phi^b_T(0)) for b = gamma-biased uniform, optionally
    plus the minimal-condition column."""
    b = potentials.gamma_biased_uniform(k, gamma)
    zero = np.zeros(k, dtype=int)
    table = (potentials.MinimalPotential(gamma, loss, k)
             if include_minimal else None)
    lines = [f"# potential_table k={k} gamma={fmt(gamma)} loss={loss.kind}",
             "T\tfixed" + ("\tminimal" if include_minimal else "")]
    for T in range(T_max + 1):
        val = potentials.potential_fixed(b, loss, T, zero)
        row = f"{T}\t{fmt(val)}"
        if include_minimal:
            mval, _ = table.value_degree(T, zero)
            row += f"\t{fmt(mval)}"
        lines.append(row)
    return "\n".join(lines) + "\n"


def emit_degree_map(gamma, loss, T):
    rows = potentials.degree_map(gamma, loss, T)
    lines = [f"# degree_map gamma={fmt(gamma)} loss={loss.kind} "
             f"eta={fmt(getattr(loss, 'eta', 0.0))} T={T}",
             "u\tv\tt\tdegree"]
    lines += [f"{u}\t{v}\t{t}\t{a}" for (u, v, t, a) in rows]
    return "\n".join(lines) + "\n"


def random_dataset_space(rng, m, k, n):
    """Random indexed dataset plus n random table classifiers."""
    from .core import TableClassifier, indexed_dataset
    labels = [rng.randrange(1, k + 1) for _ in range(m)]
    dataset = indexed_dataset(labels, k)
    space = [TableClassifier([rng.randrange(1, k + 1) for _ in range(m)])
             for _ in range(n)]
    return dataset, space


def equivalence_check(trials, rounds, seed):
    """Run-equivalence over random small instances; returns (passed,
    total, details)."""
    rng = random.Random(seed)
    details = []
    passed = 0
    for trial in range(trials):
        m = rng.randrange(2, 9)
        k = rng.randrange(2, 5)
        n = rng.randrange(2, 7)
        dataset, space = random_dataset_space(rng, m, k, n)
        ok, why = boosters.check_run_equivalence(dataset, space, rounds)
        passed += ok
        details.append((trial, ok, why))
    return passed, trials, details


def write_fixture_files(outdir):
    """Materialize the counterexample fixtures as CSV/TSV files."""
    os.makedirs(outdir, exist_ok=True)

    def dump(name, dataset, space, cost=None):
        with open(os.path.join(outdir, f"{name}.csv"), "w") as fh:
            fh.write("x,label\n")
            for row, yv in zip(dataset.features, dataset.labels):
                fh.write(f"{row[0]},{yv}\n")
        with open(os.path.join(outdir, f"{name}_classifiers.tsv"), "w") as fh:
            fh.write("# one row per classifier; columns = predictions\n")
            for h in space:
                fh.write("\t".join(str(v) for v in h.predict_all(dataset)))
                fh.write("\n")
        if cost is not None:
            with open(os.path.join(outdir, f"{name}_cost.tsv"), "w") as fh:
                for row in cost.entries:
                    fh.write("\t".join(fmt(v) for v in row) + "\n")

    d1, s1 = conditions.figure_one_fixture()
    dump("figure_one", d1, s1)
    d2, s2, c2 = conditions.window_fixture(11, 0.1)
    dump("window_m11", d2, s2, c2)
    d3, s3 = conditions.mh_overdemand_fixture(3, 0.0, 3)
    dump("mh_overdemand", d3, s3)
    return sorted(os.listdir(outdir))
