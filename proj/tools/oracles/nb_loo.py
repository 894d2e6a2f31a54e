"""Brute-force multinomial naive Bayes oracle for data/fixtures/nb_corpus.csv.

Written independently of the C++ code: plain dictionaries, exact fractions for
the smoothed probabilities, and a direct normalization of the three joint
probabilities (no log-sum-exp). Prints leave-one-out predictions and the
posteriors of the full-corpus model for every document.
"""
import csv
import sys
from fractions import Fraction
from math import prod

LABELS = ["positive", "neutral", "negative"]  # tie order


def train(docs, alpha):
    vocab = sorted({t for toks, _ in docs for t in toks})
    n = len(docs)
    prior = {c: Fraction(sum(1 for _, l in docs if l == c) + alpha, n + 3 * alpha) for c in LABELS}
    counts = {c: {} for c in LABELS}
    totals = {c: 0 for c in LABELS}
    for toks, l in docs:
        for t in toks:
            counts[l][t] = counts[l].get(t, 0) + 1
            totals[l] += 1
    like = {
        c: {t: Fraction(counts[c].get(t, 0) + alpha, totals[c] + alpha * len(vocab)) for t in vocab}
        for c in LABELS
    }
    return prior, like, set(vocab)


def posterior(model, toks):
    prior, like, vocab = model
    joint = {c: prior[c] * prod((like[c][t] for t in toks if t in vocab), start=Fraction(1)) for c in LABELS}
    z = sum(joint.values())
    return {c: joint[c] / z for c in LABELS}


def argmax(post):
    best = LABELS[0]
    for c in LABELS[1:]:
        if post[c] > post[best]:
            best = c
    return best


def main(path):
    with open(path, newline="") as f:
        docs = [(row["text"].split(), row["label"]) for row in csv.DictReader(f)]
    alpha = Fraction(1)
    correct = 0
    loo = []
    for i in range(len(docs)):
        model = train(docs[:i] + docs[i + 1:], alpha)
        pred = argmax(posterior(model, docs[i][0]))
        loo.append(pred)
        correct += pred == docs[i][1]
    print(f"loo_correct {correct} of {len(docs)}")
    print("loo_predictions", " ".join(loo))
    full = train(docs, alpha)
    for i, (toks, _) in enumerate(docs):
        p = posterior(full, toks)
        print(i, " ".join(f"{float(p[c]):.15g}" for c in LABELS))


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data/fixtures/nb_corpus.csv")
