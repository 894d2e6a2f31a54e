"""Naive metric recount for the fixed prediction list frozen in tests/test_eval.cpp."""
from fractions import Fraction

# (p_increase, predicted, truth); 1 = Increase
ROWS = [
    (0.9, 1, 1), (0.8, 1, 1), (0.55, 1, 0), (0.3, 0, 0), (0.2, 0, 0),
    (0.6, 1, 1), (0.45, 0, 1), (0.1, 0, 0), (0.7, 1, 0), (0.35, 0, 1),
    (0.5, 1, 1), (0.05, 1, 0),
]


def main():
    tp = sum(1 for _, p, t in ROWS if p == 1 and t == 1)
    fp = sum(1 for _, p, t in ROWS if p == 1 and t == 0)
    fn = sum(1 for _, p, t in ROWS if p == 0 and t == 1)
    tn = sum(1 for _, p, t in ROWS if p == 0 and t == 0)
    acc = Fraction(tp + tn, len(ROWS))
    prec_i = Fraction(tp, tp + fp)
    rec_i = Fraction(tp, tp + fn)
    f1_i = 2 * prec_i * rec_i / (prec_i + rec_i)
    prec_d = Fraction(tn, tn + fn)
    rec_d = Fraction(tn, tn + fp)
    f1_d = 2 * prec_d * rec_d / (prec_d + rec_d)
    mse = sum((Fraction(str(p)) - t) ** 2 for p, _, t in ROWS) / len(ROWS)
    print("tp fp fn tn", tp, fp, fn, tn)
    for name, v in [("accuracy", acc), ("precision_inc", prec_i), ("recall_inc", rec_i), ("f1_inc", f1_i),
                    ("precision_dec", prec_d), ("recall_dec", rec_d), ("f1_dec", f1_d),
                    ("macro_f1", (f1_i + f1_d) / 2), ("mse", mse)]:
        print(name, v, repr(float(v)))


if __name__ == "__main__":
    main()
