"""Exhaustive distance table for the kNN outlier fixture.

The second query equals the first except for a planted outlier on f5. Prints
every train/query distance under each metric and the 1-NN row per query.
"""
import csv
import math

METRICS = {
    "euclidean": lambda a, b: math.sqrt(sum((x - y) ** 2 for x, y in zip(a, b))),
    "cosine": lambda a, b: 1 - sum(x * y for x, y in zip(a, b))
    / (math.sqrt(sum(x * x for x in a)) * math.sqrt(sum(y * y for y in b))),
    "lorentzian": lambda a, b: sum(math.log(1 + abs(x - y)) for x, y in zip(a, b)),
}


def load(path):
    with open(path, newline="") as f:
        rows = list(csv.DictReader(f))
    feats = [k for k in rows[0] if k.startswith("f")]
    return [([float(r[k]) for k in feats], r["label"]) for r in rows]


train = load("data/fixtures/knn_outlier_train.csv")
queries = load("data/fixtures/knn_outlier_queries.csv")
for qi, (q, _) in enumerate(queries):
    for name, fn in METRICS.items():
        if name == "cosine" and all(v == 0 for v in q):
            continue
        dists = []
        for ti, (x, label) in enumerate(train):
            if name == "cosine" and all(v == 0 for v in x):
                continue
            dists.append((fn(q, x), ti, label))
        best = min(dists)
        print(f"query {qi} {name:10s} nn=row{best[1]} label={best[2]} "
              + " ".join(f"{d:.6f}" for d, _, _ in sorted(dists, key=lambda t: t[1])))
