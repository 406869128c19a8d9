"""Acceptance criteria. Each test prints one PASS/FAIL line, repeated in the summary."""

import math
import time
from pathlib import Path

import pytest

from fanmatch.encoding import build_initial
from fanmatch.engine import NormalForm, normalize, run
from fanmatch.harness import Match, church, corpus, fuzz, run_case
from fanmatch.net import ATOM
from fanmatch.oracle import normalize_normal_order
from fanmatch.randgen import gen_random_term
from fanmatch.report import (
    SHARING_FIELDS, cost_fit, plot_sharing, scaling_terms, sharing_rows, timing_rows,
    write_csv,
)
from fanmatch.terms import alpha_eq, parse

from conftest import record

ARTIFACTS = Path(__file__).resolve().parent.parent / "acceptance_artifacts"

FUZZ_SEED = 20240601
FUZZ_ENGINE_FUEL = 100_000
FUZZ_ORACLE_FUEL = 10_000

TIMING_MIN_INTERACTIONS = 50
TIMING_REPEATS = 5


def _line(n, ok, detail):
    record(f"criterion {n}: {'PASS' if ok else 'FAIL'} {detail}")
    return ok


@pytest.fixture(scope="module")
def corpus_runs():
    """Each corpus term run twice with tracing, plus its oracle result."""
    runs = []
    for e in corpus():
        a, sa = normalize(e.term, trace=True)
        b, sb = normalize(e.term, trace=True)
        runs.append((e, normalize_normal_order(e.term, 100_000), (a, sa), (b, sb)))
    return runs


def test_criterion_1_micro_traces():
    cases = [
        ("x", "x", ["1: R4 reader(◻) × atom(x)"]),
        (r"\x.x", r"\x.x", ["1: R1 reader(◻) × lam", "2: R4 reader(λv0.◻) × atom(v0)"]),
        (r"(\z.z) x", "x", ["1: R2 app × lam", "2: R4 reader(◻) × atom(x)"]),
    ]
    bad = []
    for text, expected, trace in cases:
        out, state = normalize(parse(text), trace=True)
        if not (isinstance(out, NormalForm) and alpha_eq(out.term, parse(expected))
                and out.stats.interactions == len(trace) and state.trace == trace):
            bad.append(text)
    assert _line(1, not bad, f"3 hand traces, mismatched: {bad or 'none'}")


def test_criterion_2_corpus_matches_oracle():
    start = time.perf_counter()
    verdicts = [(e.name, run_case(e.term)) for e in corpus()]
    elapsed = time.perf_counter() - start
    bad = [name for name, v in verdicts if not isinstance(v, Match)]
    exp22 = dict(verdicts)["exp_2_2"]
    ok = not bad and alpha_eq(exp22.term, church(4)) and elapsed < 10
    assert _line(2, ok, f"{len(verdicts) - len(bad)}/{len(verdicts)} corpus terms "
                        f"match the oracle (zero tolerance) in {elapsed:.2f}s (< 10s), "
                        f"failures: {bad or 'none'}")


def test_criterion_3_fuzz(tmp_path):
    save = tmp_path / "counterexamples"
    start = time.perf_counter()
    report = fuzz(FUZZ_SEED, 1000, 25, FUZZ_ENGINE_FUEL, FUZZ_ORACLE_FUEL, save_dir=save)
    elapsed = time.perf_counter() - start
    saved = sorted(p.name for p in save.glob("*.lam")) if save.exists() else []
    counts = " ".join(f"{k}={v}" for k, v in report.counts.items())
    ok = report.failures == 0 and not saved and elapsed < 60
    assert _line(3, ok, f"1000 cases seed={FUZZ_SEED} maxSize=25 in {elapsed:.1f}s "
                        f"(< 60s): {counts}; persisted: {saved or 'none'}")


def test_criterion_4_phi_invariants(corpus_runs):
    bad = []
    for e, _, (out, state), _ in corpus_runs:
        try:
            state.phi.check(state.n_initial, state.n)
            assert state.n == state.n_initial + out.stats.phi_inserts
            for (i, j), _v in state.phi.items():
                assert (j, i) in state.phi
        except AssertionError as exc:
            bad.append(f"{e.name}: {exc}")
    inserts = sum(r[2][0].stats.phi_inserts for r in corpus_runs)
    hits = sum(r[2][0].stats.phi_hits for r in corpus_runs)
    assert _line(4, not bad, f"{len(corpus_runs)} corpus runs, {inserts} inserts, "
                             f"{hits} hits, violations: {bad or 'none'}")


def test_criterion_5_determinism(corpus_runs):
    bad = []
    for e, _, (a, sa), (b, sb) in corpus_runs:
        if (sa.trace != sb.trace or a.stats.as_dict() != b.stats.as_dict()
                or sa.phi.dump() != sb.phi.dump() or a.term != b.term):
            bad.append(e.name)
    lines = sum(len(r[2][1].trace) for r in corpus_runs)
    assert _line(5, not bad, f"{len(corpus_runs)} terms run twice, {lines} trace lines "
                             f"compared, differing: {bad or 'none'}")


def test_criterion_6_sharing_efficiency():
    rows = sharing_rows((2, 3, 4))
    ARTIFACTS.mkdir(exist_ok=True)
    write_csv(ARTIFACTS / "sharing.csv", rows, SHARING_FIELDS)
    plot_sharing(rows, ARTIFACTS / "sharing.png")
    ok = all(r["engine_beta"] <= r["oracle_beta"] for r in rows) and all(
        r["engine_beta"] < r["oracle_beta"] for r in rows if r["n"] >= 3)
    table = ", ".join(f"n={r['n']}: engine {r['engine_beta']} vs oracle "
                      f"{r['oracle_beta']}" for r in rows)
    assert _line(6, ok, f"{table}; table in acceptance_artifacts/sharing.csv")


def test_criterion_7_linear_time():
    rows = timing_rows(scaling_terms(), TIMING_REPEATS)
    ARTIFACTS.mkdir(exist_ok=True)
    write_csv(ARTIFACTS / "timing.csv", rows, ["name", "interactions", "seconds"])
    slope, ratios = cost_fit(rows, TIMING_MIN_INTERACTIONS)
    lo, hi = min(ratios.values()), max(ratios.values())
    # log-log exponent of time against interactions, for information
    used = [r for r in rows if r["interactions"] >= TIMING_MIN_INTERACTIONS]
    xs = [math.log(r["interactions"]) for r in used]
    ys = [math.log(r["seconds"]) for r in used]
    mx, my = sum(xs) / len(xs), sum(ys) / len(ys)
    expo = sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / sum(
        (x - mx) ** 2 for x in xs)
    ok = len(ratios) >= 5 and 0.5 <= lo and hi <= 2.0
    assert _line(7, ok, f"{slope * 1e6:.2f} us/interaction over {len(ratios)} runs with "
                        f">= {TIMING_MIN_INTERACTIONS} interactions; measured/fitted "
                        f"in [{lo:.2f}, {hi:.2f}] (tolerance [0.5, 2]); "
                        f"log-log exponent {expo:.3f}")


def test_criterion_8_final_shape(corpus_runs):
    bad, residual, count = [], 0, 0
    states = [(e.name, out, st) for e, _, (out, st), _ in corpus_runs]
    for seed in range(200):
        t = gen_random_term(seed, 25)
        if isinstance(run_case(t, FUZZ_ENGINE_FUEL, FUZZ_ORACLE_FUEL), Match):
            st = build_initial(t)
            states.append((f"seed{seed}", run(st, FUZZ_ENGINE_FUEL), st))
    for name, out, st in states:
        p = st.interface
        shape = (isinstance(out, NormalForm) and p.peer[0].kind == ATOM
                 and p.slot[0] == 0 and p.peer[0].label == out.term
                 and out.stats.residual_agents == len(st.agents) - 2)
        if not shape:
            bad.append(name)
        else:
            count += 1
            residual += out.stats.residual_agents
    assert _line(8, not bad and count == len(states),
                 f"{count} successful runs end as interface-to-atom; "
                 f"{residual} residual agents counted; bad: {bad or 'none'}")
