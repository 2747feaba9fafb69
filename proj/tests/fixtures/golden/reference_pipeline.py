#!/usr/bin/env python3
"""Straight-line reference for the golden fixture.

Recomputes articles -> filter -> lexicon score -> aggregate -> backtest
with no shared code, checks every daily weight solve against an LP
optimum (scipy/HiGHS), and writes expected_levels.csv and
expected_trades.csv. Run once; outputs are committed.
"""
import csv
import datetime as dt
import json
import string
from collections import defaultdict
from pathlib import Path
from zoneinfo import ZoneInfo

import numpy as np
from scipy.optimize import linprog

HERE = Path(__file__).resolve().parent


def load_json(name):
    with open(HERE / name, encoding="utf-8") as f:
        return json.load(f)


def parse_ts(text):
    if text.endswith("Z"):
        text = text[:-1] + "+00:00"
    return dt.datetime.fromisoformat(text)


# ---------------------------------------------------------------- corpus
def load_articles():
    out = []
    with open(HERE / "articles.jsonl", encoding="utf-8") as f:
        for line in f:
            try:
                out.append(json.loads(line))
            except json.JSONDecodeError:
                pass
    return out


def filter_corpus(articles, cfg):
    def text(a):
        return (a["headline"].lower(), (a.get("body") or "").lower())

    kept = []
    for a in articles:
        h, b = text(a)
        if any(k in h or k in b for k in cfg["exclusions"].get(a["company_id"], [])):
            continue
        if any(p in h or p in b for p in cfg["auto_generated_phrases"]):
            continue
        kept.append(a)

    best = {}
    for a in kept:
        key = (a["company_id"], a["headline"].lower())
        rank = (parse_ts(a["published_at"]), a["id"])
        if key not in best or rank < best[key][0]:
            best[key] = (rank, a["id"])
    winners = {v[1] for v in best.values()}
    kept = [a for a in kept if a["id"] in winners]

    out = []
    for a in kept:
        h = a["headline"].lower()
        n_tokens = len(h.split())
        if n_tokens == 0 or n_tokens > cfg["max_headline_tokens"]:
            continue
        out.append(dict(a, headline=h))
    return out


# ---------------------------------------------------------------- sentiment
def lexicon_polarity(headline, lexicon):
    hits = []
    for tok in headline.split():
        tok = tok.strip(string.punctuation)
        if tok in lexicon:
            hits.append(lexicon[tok])
    s = sum(hits) / len(hits) if hits else 0.0
    probs = [max(-s, 0.0), 1.0 - abs(s), max(s, 0.0)]  # neg, neu, pos
    # argmax, later class wins exact ties
    best = 0
    for k in (1, 2):
        if probs[k] >= probs[best]:
            best = k
    return probs[best] * (-1.0, 0.0, 1.0)[best]


# ---------------------------------------------------------------- aggregation
def aggregate(scored, companies, days, cfg):
    tz = ZoneInfo(cfg["market_timezone"])
    hh, mm = map(int, cfg["cutoff_local_time"].split(":"))
    cutoff = dt.time(hh, mm)
    buckets = defaultdict(list)
    for rec in scored:
        local = parse_ts(rec["published_at"]).astimezone(tz)
        day = local.date()
        if local.time() >= cutoff:
            day += dt.timedelta(days=1)
        target = next((d for d in days if d >= day), None)
        if target is None:
            continue
        buckets[(rec["company_id"], target)].append(rec)

    adjusted = {}
    for c in companies:
        history = []
        for d in days:
            recs = buckets.get((c, d), [])
            if not recs:
                adjusted[(c, d)] = 0.0
                continue
            raw = sum(r["score"] for r in recs) / len(recs)
            u = len({r["source"] for r in recs})
            adj = 1.0
            if history:
                m = sum(history) / len(history)
                if u < m:
                    adj = u / m
            history.append(u)
            adjusted[(c, d)] = raw * adj
    return adjusted


# ---------------------------------------------------------------- optimizer
def greedy(s, prior, delta, cap, lo, hi):
    n = len(s)
    segs = []
    for i in range(n):
        p = min(max(prior[i], 0.0), cap)
        if p > 0:
            segs.append((-(s[i] + delta), i, 0.0, p))
        if cap > p:
            segs.append((-(s[i] - delta), i, p, cap))
    segs.sort()
    w = [0.0] * n
    total = 0.0
    for neg_slope, i, a, b in segs:
        slope = -neg_slope
        limit = hi if slope > 0 else lo
        room = limit - total
        if room <= 0:
            break
        length = b - a
        if length <= room + 1e-13:
            w[i] = b
            total += length
        else:
            w[i] = a + room
            total = limit
            break
    return w


def objective(w, s, prior, delta):
    return sum(w[i] * s[i] - delta * abs(prior[i] - w[i]) for i in range(len(s)))


def lp_optimum(s, prior, delta, cap, lo, hi):
    n = len(s)
    # variables: w_0..w_{n-1}, t_0..t_{n-1}; minimize -(s.w - delta*sum t)
    c = np.concatenate([-np.asarray(s), delta * np.ones(n)])
    A, b = [], []
    for i in range(n):
        row = np.zeros(2 * n); row[i] = -1; row[n + i] = -1
        A.append(row); b.append(-prior[i])
        row = np.zeros(2 * n); row[i] = 1; row[n + i] = -1
        A.append(row); b.append(prior[i])
    row = np.zeros(2 * n); row[:n] = 1
    A.append(row); b.append(hi)
    A.append(-row); b.append(-lo)
    bounds = [(0, cap)] * n + [(0, None)] * n
    res = linprog(c, A_ub=np.array(A), b_ub=np.array(b), bounds=bounds, method="highs")
    assert res.success, res.message
    return -res.fun


# ---------------------------------------------------------------- backtest
def main():
    fcfg = load_json("filter.json")
    acfg = load_json("aggregate.json")
    bcfg = load_json("backtest.json")
    lexicon = load_json("lexicon.json")
    ocfg = bcfg["optimizer"]

    prices = defaultdict(dict)
    with open(HERE / "prices.csv") as f:
        for row in csv.DictReader(f):
            prices[dt.date.fromisoformat(row["date"])][row["company"]] = float(row["close"])
    days = sorted(prices)
    companies = sorted(prices[days[0]])

    articles = filter_corpus(load_articles(), fcfg)
    scored = [dict(a, score=lexicon_polarity(a["headline"], lexicon)) for a in articles]
    sent = aggregate(scored, companies, days, acfg)

    n = len(companies)
    delta, cap, lo, hi = ocfg["delta"], ocfg["cap"], ocfg["budget_lo"], ocfg["budget_hi"]
    eps = ocfg["trade_epsilon"]
    tc = bcfg["tc_rate"]
    lag = bcfg["signal_lag_days"]

    w = [0.0] * n
    level = bcfg["initial_level"]
    bench = bcfg["initial_level"]
    levels, trades = [], []
    for t, d in enumerate(days):
        if t == 0:
            r = [0.0] * n
        else:
            r = [(prices[d][c] - prices[days[t - 1]][c]) / prices[days[t - 1]][c] for c in companies]
        gross = sum(w[i] * r[i] for i in range(n))
        drifted = [w[i] * (1 + r[i]) / (1 + gross) for i in range(n)]

        k = t + 1 - lag
        s = [sent[(c, days[k])] if 0 <= k < len(days) else 0.0 for c in companies]
        target = greedy(s, drifted, delta, cap, lo, hi)
        got = objective(target, s, drifted, delta)
        best = lp_optimum(s, drifted, delta, cap, lo, hi)
        assert got >= best - 1e-9, (d, got, best)

        cost = 0.0
        for i, c in enumerate(companies):
            dw = target[i] - drifted[i]
            cost += tc * abs(dw)
            if abs(dw) > eps:
                trades.append((d, c, dw, tc * abs(dw)))
        level *= 1 + gross - cost
        if t > 0:
            bench *= 1 + sum(r) / n
        levels.append((d, level, bench))
        w = target

    with open(HERE / "expected_levels.csv", "w") as f:
        f.write("date,index_level,benchmark_level\n")
        for d, lv, bm in levels:
            f.write(f"{d.isoformat()},{lv:.12f},{bm:.12f}\n")
    with open(HERE / "expected_trades.csv", "w") as f:
        f.write("date,company,delta_weight,cost\n")
        for d, c, dw, cost in trades:
            f.write(f"{d.isoformat()},{c},{dw:.12f},{cost:.12f}\n")
    print(f"{len(articles)} articles kept, {len(trades)} trades, final level {level:.6f}")


if __name__ == "__main__":
    main()
