"""Generates the shipped mini-corpus under data/minicorpus/.

Three tickers, 60 weekday trading days from 2024-01-02, about 400 documents
across Reddit, news, a headline CSV and one saved HTML page. Each company-day
has a hidden mood; documents lean toward it and the next close follows it
with probability 0.7, so the features carry a weak, learnable signal.

A couple of deliberately malformed rows exercise the skip-with-diagnostic path.
Deterministic: rerunning rewrites byte-identical files.
"""
import csv
import datetime as dt
import io
import json
import os
import random

OUT = os.path.join(os.path.dirname(__file__), "..", "data", "minicorpus")
TICKERS = ["ACME", "BOLT", "CRUX"]
START = dt.date(2024, 1, 2)
N_DAYS = 60

POSITIVE = [
    "{t} earnings beat estimates, strong growth ahead",
    "bullish on {t}, buying calls before the call",
    "record profit and raised guidance for {t}",
    "great quarter for {t}, rally incoming",
    "{t} looks solid, impressive demand",
    "analysts upgrade {t} after strong results",
    "{t} to the moon!!! https://example.com/dd",
]
NEGATIVE = [
    "{t} missed estimates and weak guidance",
    "bearish on {t}, loading puts",
    "profit decline and disappointing outlook at {t}",
    "downgrade for {t} after poor results",
    "{t} layoffs and lawsuit, sell now",
    "worried about {t} losses this quarter",
]
NEUTRAL = [
    "waiting for the {t} earnings call",
    "holding {t} shares for now",
    "what time does {t} report?",
    "{t} volume looks normal today",
]
NEWS_POS = [("{t} shares surge on earnings beat", "Revenue growth was strong and guidance was raised.")]
NEWS_NEG = [("{t} stock plunges after miss", "Weak demand and a guidance cut weighed on results.")]
NEWS_NEU = [("{t} schedules quarterly call", "The company will discuss results with analysts.")]


def trading_days():
    days = []
    d = START
    while len(days) < N_DAYS:
        if d.weekday() < 5:
            days.append(d)
        d += dt.timedelta(days=1)
    return days


def pick_text(rng, mood, pos, neg, neu):
    r = rng.random()
    if r < 0.65:
        pool = pos if mood > 0 else neg
    elif r < 0.85:
        pool = neu
    else:
        pool = neg if mood > 0 else pos
    return rng.choice(pool)


def write_csv(path, header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    with open(path, "w", newline="") as f:
        f.write(buf.getvalue())


def main():
    rng = random.Random(20240102)
    os.makedirs(OUT, exist_ok=True)
    days = trading_days()
    reddit, news, headlines = [], [], []
    snapshot_items = []
    earnings = []
    for ti, t in enumerate(TICKERS):
        price = 50.0 + 25.0 * ti
        bars = []
        for di, day in enumerate(days):
            mood = 1 if rng.random() < 0.55 else -1
            # documents about today
            for _ in range(rng.choice([0, 1, 1, 2, 2, 2])):
                text = pick_text(rng, mood, POSITIVE, NEGATIVE, NEUTRAL).format(t=t)
                reddit.append([text, rng.choice([0, 0, 1, 3, 8, 20, 55, 140]), day.isoformat(), t])
            if rng.random() < 0.65:
                title, summary = pick_text(rng, mood, NEWS_POS, NEWS_NEG, NEWS_NEU)
                news.append([title.format(t=t), summary, day.isoformat(), t])
            if rng.random() < 0.35:
                text = pick_text(rng, mood, POSITIVE, NEGATIVE, NEUTRAL).format(t=t)
                if di >= N_DAYS - 8 and t == "ACME":
                    snapshot_items.append((day, text))
                else:
                    headlines.append([text, day.isoformat(), t])
            # bar for today, next close follows today's mood with prob 0.7
            open_ = round(price * (1 + rng.uniform(-0.01, 0.01)), 2)
            close = round(price, 2)
            high = round(max(open_, close) * (1 + rng.uniform(0, 0.01)), 2)
            low = round(min(open_, close) * (1 - rng.uniform(0, 0.01)), 2)
            bars.append([day.isoformat(), f"{open_:.2f}", f"{high:.2f}", f"{low:.2f}", f"{close:.2f}",
                         rng.randint(100000, 900000)])
            direction = mood if rng.random() < 0.7 else -mood
            price = price * (1 + direction * rng.uniform(0.002, 0.02))
        # shuffle one pair of bars to exercise sorting
        bars[3], bars[4] = bars[4], bars[3]
        write_csv(os.path.join(OUT, f"ohlcv_{t.lower()}.csv"), ["date", "open", "high", "low", "close", "volume"],
                  bars)
        earnings.append([t, days[15 + 10 * ti].isoformat()])
        if t != "CRUX":
            earnings.append([t, (days[-1] + dt.timedelta(days=30 + ti)).isoformat()])

    # malformed rows: negative upvotes, bad date
    reddit.insert(7, ["this row has negative upvotes", -3, days[2].isoformat(), "ACME"])
    reddit.insert(21, ["this row has a bad date", 4, "2024-13-45", "BOLT"])
    write_csv(os.path.join(OUT, "reddit.csv"), ["text", "upvotes", "date", "company"], reddit)
    write_csv(os.path.join(OUT, "news.csv"), ["title", "summary", "date", "company"], news)
    write_csv(os.path.join(OUT, "headlines.csv"), ["headline", "date", "company"], headlines)
    write_csv(os.path.join(OUT, "earnings.csv"), ["company", "earnings_date"], earnings)

    snap_date = days[-1]
    items = []
    for day, text in snapshot_items:
        age = (snap_date - day).days
        if age == 0:
            when = "3 hours ago"
        elif age == 1:
            when = "yesterday"
        elif age % 2 == 0:
            when = f"{age} days ago"
        else:
            when = day.isoformat()
        text = text.replace("&", "&amp;")
        items.append(f'  <li><h3 class="headline"><a href="/n/{len(items)}">{text}</a>'
                     f' <span class="age">&middot; {when}</span></h3></li>')
    html = ("<!doctype html>\n<html><head><title>ACME news</title></head><body>\n"
            '<h3 class="nav">Latest</h3>\n<ul>\n' + "\n".join(items) + "\n</ul>\n</body></html>\n")
    with open(os.path.join(OUT, "acme_snapshot.html"), "w") as f:
        f.write(html)

    config = {
        "seed": 42,
        "output_dir": "../../out/minicorpus",
        "inputs": {
            "reddit": ["reddit.csv"],
            "news": ["news.csv"],
            "headlines": ["headlines.csv"],
            "headline_snapshots": [{"path": "acme_snapshot.html", "selector": "h3.headline",
                                    "snapshot_date": snap_date.isoformat(), "company": "ACME"}],
            "ohlcv": [{"company": t, "path": f"ohlcv_{t.lower()}.csv"} for t in TICKERS],
            "earnings": "earnings.csv",
        },
        "sentiment": {
            "method": "lexicon",
            "methods": {"news": "naive_bayes"},
            "lexicon": "../lexicon.csv",
            "stoplist": "../stopwords.txt",
            "nb_training": "../fixtures/nb_corpus.csv",
            "nb_alpha": 1.0,
        },
        "features": {"rolling_window": 5},
        "smote": {"enabled": True, "k_neighbors": 5, "target_ratio": 1.0},
        "split": {"train_fraction": 0.7},
        "train": {"model": "gbdt"},
    }
    with open(os.path.join(OUT, "config.json"), "w") as f:
        json.dump(config, f, indent=2)
        f.write("\n")
    n_docs = len(reddit) - 2 + len(news) + len(headlines) + len(snapshot_items)
    print(f"documents: {n_docs} (reddit {len(reddit) - 2}, news {len(news)}, "
          f"headlines {len(headlines)}, snapshot {len(snapshot_items)})")


if __name__ == "__main__":
    main()
