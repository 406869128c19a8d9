import pytest
from hypothesis import given, settings, strategies as st

from fanmatch.encoding import build_initial
from fanmatch.engine import (
    Cycle, NormalForm, OutOfFuel, Pair, Stuck, TerminalAtom, apply_rule, dump_trace,
    find_needed, normalize, phi_resolve, run,
)
from fanmatch.harness import church, corpus
from fanmatch.net import (
    ATOM, ERASER, FAN, HOLE, INTERFACE, LAM, READER, AppOf, NetState, UnderLam,
    context_str, extend_lambda, link, plug,
)
from fanmatch.randgen import gen_random_term
from fanmatch.terms import App, Lam, Var, alpha_eq, parse

OMEGA = parse(r"(\x.x x) (\x.x x)")


# contexts ------------------------------------------------------------------

def test_plug():
    assert plug((), Var("x")) == Var("x")
    assert plug((UnderLam("y"),), Var("x")) == Lam("y", Var("x"))
    assert plug((AppOf(Var("f")), UnderLam("y")), Var("z")) == \
        App(Var("f"), Lam("y", Var("z")))


def test_extend_lambda():
    assert extend_lambda((), "y") == (UnderLam("y"),)
    assert extend_lambda((AppOf(Var("f")),), "y") == (AppOf(Var("f")), UnderLam("y"))
    assert context_str((UnderLam("y"),)) == f"λy.{HOLE}"


def test_fresh_binder():
    s = NetState()
    assert s.fresh_binder() == "v0"
    assert s.fresh_binder() == "v1"


# needed pair ---------------------------------------------------------------

def test_find_needed_on_var():
    s = build_initial(parse("x"))
    found = find_needed(s)
    assert isinstance(found, Pair)
    assert found.demand.kind == READER and found.provider.kind == ATOM


def test_find_needed_terminal():
    s = NetState()
    p = s.new_agent(INTERFACE)
    a = s.new_agent(ATOM, Var("n"))
    link(p, 0, a, 0)
    assert find_needed(s) == TerminalAtom(Var("n"))


def _cyclic_net():
    s = NetState()
    p = s.new_agent(INTERFACE)
    r = s.new_agent(READER, ())
    la = s.new_agent(LAM)
    lb = s.new_agent(LAM)
    e = s.new_agent(ERASER)
    link(p, 0, r, 1)
    link(r, 0, la, 2)
    link(la, 0, lb, 1)
    link(lb, 0, la, 1)
    link(lb, 2, e, 0)
    s.check_linearity()
    return s


def test_find_needed_cycle():
    assert isinstance(find_needed(_cyclic_net()), Cycle)
    out = run(_cyclic_net())
    assert isinstance(out, Cycle) and out.snapshot


def test_no_rule_is_stuck():
    s = NetState()
    p = s.new_agent(INTERFACE)
    r = s.new_agent(READER, ())
    e = s.new_agent(ERASER)
    link(p, 0, r, 1)
    link(r, 0, e, 0)
    out = run(s)
    assert isinstance(out, Stuck)
    assert "reader(◻) × eraser" in out.diagnostic
    assert "= !reader" in out.snapshot


# phi -----------------------------------------------------------------------

def test_phi_resolve_sequence():
    s = NetState()
    s.n = 2
    assert phi_resolve(s, 1, 2) == (3, 2)
    assert s.phi.items() == [((1, 2), 3), ((2, 1), 2)] and s.n == 3
    assert phi_resolve(s, 1, 2) == (3, 2)
    assert s.n == 3
    assert phi_resolve(s, 2, 1) == (2, 3)
    assert s.n == 3 and len(s.phi) == 2
    assert (s.stats.phi_inserts, s.stats.phi_hits) == (1, 2)
    s.phi.check(2, s.n)


def test_phi_resolve_rejects_equal_ids():
    with pytest.raises(ValueError):
        phi_resolve(NetState(), 1, 1)


def test_r10_first_encounter():
    s = NetState()
    s.enable_trace()
    fi = s.new_agent(FAN, 1)
    fj = s.new_agent(FAN, 2)
    ends = [s.new_agent(ATOM, Var(x)) for x in "abcd"]
    link(fi, 0, fj, 0)
    link(fi, 1, ends[0], 0)
    link(fi, 2, ends[1], 0)
    link(fj, 1, ends[2], 0)
    link(fj, 2, ends[3], 0)
    s.n = s.n_initial = 2
    assert apply_rule(s, Pair(fi, fj)) == "R10"
    s.check_linearity()
    # residual fans facing the demand's old neighbours, then the provider's
    labels = [e.peer[0].label for e in ends]
    assert labels == [2, 2, 3, 1]
    assert all(e.peer[0].kind == FAN and e.slot[0] == 0 for e in ends)
    assert s.phi.items() == [((1, 2), 3), ((2, 1), 2)] and s.n == 3
    assert s.trace == ["1: R10 fan(1) × fan(2) insert (1,2)↦3 (2,1)↦2"]


# runs ----------------------------------------------------------------------

@pytest.mark.parametrize("text, expected, rules", [
    ("x", "x", ["R4"]),
    (r"\x.x", r"\x.x", ["R1", "R4"]),
    (r"(\z.z) x", "x", ["R2", "R4"]),
    (r"(\x.x x) (\y.y)", r"\y.y", ["R2", "R7", "R2", "R9", "R1", "R4"]),
])
def test_hand_traces(text, expected, rules):
    out, s = normalize(parse(text), trace=True)
    assert isinstance(out, NormalForm)
    assert alpha_eq(out.term, parse(expected))
    assert [line.split()[1] for line in dump_trace(s)] == rules


def test_trace_lines():
    _, s = normalize(parse("x"), trace=True)
    assert dump_trace(s) == ["1: R4 reader(◻) × atom(x)"]
    _, s = normalize(parse(r"\x.x"), trace=True)
    assert dump_trace(s) == ["1: R1 reader(◻) × lam", "2: R4 reader(λv0.◻) × atom(v0)"]


def test_trace_requires_enabling():
    _, s = normalize(parse("x"))
    with pytest.raises(ValueError):
        dump_trace(s)


def test_empty_trace():
    s = NetState()
    s.enable_trace()
    assert dump_trace(s) == []


def test_omega_out_of_fuel():
    out, _ = normalize(OMEGA, 100)
    assert isinstance(out, OutOfFuel) and out.stats.interactions == 100


def test_erased_divergent_argument():
    out, _ = normalize(parse(r"(\x.y) ((\z.z z) (\z.z z))"))
    assert out.term == Var("y")


def test_readback_names_avoid_free_names():
    out, _ = normalize(parse(r"\x. v0 x"))
    assert alpha_eq(out.term, parse(r"\x. v0 x"))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_exp_matches_church(n):
    out, _ = normalize(App(church(n), church(n)))
    assert alpha_eq(out.term, church(n ** n))


def test_residual_count():
    out, s = normalize(parse(r"(\x.\y.x) a b"))
    assert out.term == Var("a")
    assert out.stats.residual_agents == len(s.agents) - 2 > 0


@pytest.mark.parametrize("entry", corpus(), ids=lambda e: e.name)
def test_cached_walk_agrees_with_fresh_walk(entry):
    a, sa = normalize(entry.term, trace=True)
    sb = build_initial(entry.term)
    sb.enable_trace()
    b = run(sb, fresh_walk=True)
    assert sa.trace == sb.trace
    assert alpha_eq(a.term, b.term)
    assert a.stats.walk_steps <= b.stats.walk_steps


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**6))
def test_linearity_preserved_by_every_rule(seed):
    s = build_initial(gen_random_term(seed, 20))
    for _ in range(300):
        found = find_needed(s)
        if not isinstance(found, Pair):
            break
        apply_rule(s, found)
        s.check_linearity()
        s.phi.check(s.n_initial, s.n)
