"""Tables and figures: corpus results, sharing efficiency, cost per interaction."""

from __future__ import annotations

import csv
import time
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .encoding import build_initial  # noqa: E402
from .engine import NormalForm, run  # noqa: E402
from .harness import (  # noqa: E402
    DEFAULT_ENGINE_FUEL, DEFAULT_ORACLE_FUEL, church, corpus, kind, run_case,
)
from .net import RULES  # noqa: E402
from .oracle import normalize_normal_order  # noqa: E402
from .terms import App  # noqa: E402

CORPUS_FIELDS = ["name", "verdict", "oracle_beta", *RULES, "interactions",
                 "phi_inserts", "phi_hits", "residual_agents"]
SHARING_FIELDS = ["n", "oracle_beta", "engine_beta", "interactions", "phi_inserts",
                  "phi_hits"]
TIMING_FIELDS = ["name", "interactions", "seconds"]


def corpus_rows(engine_fuel=DEFAULT_ENGINE_FUEL, oracle_fuel=DEFAULT_ORACLE_FUEL):
    rows = []
    for entry in corpus():
        v = run_case(entry.term, engine_fuel, oracle_fuel)
        row = {"name": entry.name, "verdict": kind(v)}
        if kind(v) == "Match":
            stats = v.engine_stats.as_dict()
            row["oracle_beta"] = v.oracle_steps
            row.update({k: stats[k] for k in CORPUS_FIELDS[3:]})
        rows.append(row)
    return rows


def sharing_rows(ns=(2, 3, 4)):
    """Beta counts of ``church(n) church(n)`` for engine and oracle."""
    rows = []
    for n in ns:
        term = App(church(n), church(n))
        expected = normalize_normal_order(term, DEFAULT_ORACLE_FUEL)
        outcome = run(build_initial(term), DEFAULT_ENGINE_FUEL)
        if not isinstance(outcome, NormalForm):
            raise RuntimeError(f"exp_{n}_{n} did not normalize: {outcome}")
        s = outcome.stats
        rows.append({"n": n, "oracle_beta": expected.beta_steps,
                     "engine_beta": s.rules["R2"], "interactions": s.interactions,
                     "phi_inserts": s.phi_inserts, "phi_hits": s.phi_hits})
    return rows


def time_run(term, repeats=3):
    """Best-of-``repeats`` wall time of the reduction alone, and its interactions."""
    best = None
    for _ in range(repeats):
        state = build_initial(term)
        start = time.perf_counter()
        outcome = run(state, DEFAULT_ENGINE_FUEL)
        elapsed = time.perf_counter() - start
        best = elapsed if best is None else min(best, elapsed)
    return outcome.stats.interactions, best


def timing_rows(named_terms, repeats=3):
    rows = []
    for name, term in named_terms:
        interactions, seconds = time_run(term, repeats)
        rows.append({"name": name, "interactions": interactions, "seconds": seconds})
    return rows


def cost_fit(rows, min_interactions=1):
    """Least-squares seconds-per-interaction through the origin.

    Returns ``(slope, ratios)`` where ``ratios`` maps each row name to its
    measured time over the fitted time.
    """
    used = [r for r in rows if r["interactions"] >= min_interactions]
    num = sum(r["interactions"] * r["seconds"] for r in used)
    den = sum(r["interactions"] ** 2 for r in used)
    slope = num / den
    return slope, {r["name"]: r["seconds"] / (slope * r["interactions"]) for r in used}


def write_csv(path, rows, fields):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, fieldnames=fields, extrasaction="ignore")
        w.writeheader()
        for r in rows:
            w.writerow(r)


def plot_sharing(rows, path):
    fig, ax = plt.subplots(figsize=(5, 4))
    ns = [r["n"] for r in rows]
    width = 0.38
    ax.bar([n - width / 2 for n in ns], [r["oracle_beta"] for r in rows], width,
           label="normal order", color="#999999")
    ax.bar([n + width / 2 for n in ns], [r["engine_beta"] for r in rows], width,
           label="net engine", color="#3366aa")
    ax.set_yscale("log")
    ax.set_xticks(ns)
    ax.set_xlabel("n in church(n) church(n)")
    ax.set_ylabel("beta steps")
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_timing(rows, slope, path):
    fig, ax = plt.subplots(figsize=(5, 4))
    xs = [r["interactions"] for r in rows]
    ys = [r["seconds"] for r in rows]
    ax.scatter(xs, ys, s=14, color="#3366aa")
    hi = max(xs)
    ax.plot([0, hi], [0, slope * hi], color="#aa3333", lw=1,
             label=f"{slope * 1e6:.1f} µs / interaction")
    ax.set_xlabel("interactions")
    ax.set_ylabel("seconds")
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def scaling_terms():
    """Corpus terms plus larger exponentials, so timings rise above noise."""
    terms = [(e.name, e.term) for e in corpus()]
    terms += [(f"exp_{n}_{n}", App(church(n), church(n))) for n in (4, 5)]
    terms += [(f"exp_2_{k}", App(church(k), church(2))) for k in (6, 8, 10)]
    return terms


def write_report(directory, corpus_table=None, repeats=3):
    """Write CSV tables and PNG figures into ``directory``; return the paths."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    corpus_table = corpus_table if corpus_table is not None else corpus_rows()
    sharing = sharing_rows()
    timing = timing_rows(scaling_terms(), repeats)
    slope, _ = cost_fit(timing)
    paths = {
        "corpus": directory / "corpus.csv",
        "sharing": directory / "sharing.csv",
        "timing": directory / "timing.csv",
        "sharing_plot": directory / "sharing.png",
        "timing_plot": directory / "timing.png",
    }
    write_csv(paths["corpus"], corpus_table, CORPUS_FIELDS)
    write_csv(paths["sharing"], sharing, SHARING_FIELDS)
    write_csv(paths["timing"], timing, TIMING_FIELDS)
    plot_sharing(sharing, paths["sharing_plot"])
    plot_timing(timing, slope, paths["timing_plot"])
    return paths
