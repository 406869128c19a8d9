"""Needed-reduction interaction-net machine with side-effecting fan matching.

The reduction strategy is a principal-path walk from the interface: follow
the wire at the current principal port; arriving at an auxiliary port means
the reached agent is demanded, so the walk continues from its principal
port; arriving at a principal port yields the needed active pair. The agent
the walk departed from is the demand side. Only the fan/fan rule for
distinct ids cares about orientation.

The walk prefix is cached in ``state.walk``: a rewrite only touches wires
hanging off the two consumed agents, so after a rewrite the walk resumes
from the agent that led into the demand side.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .encoding import build_initial
from .net import (
    APP, ATOM, FAN, INTERFACE, LAM, READER,
    AppOf, NetState, Stats, extend_lambda, link, plug,
)
from .terms import Term, Var

DEFAULT_MAX_INTERACTIONS = 1_000_000


# --------------------------------------------------------------------------
# results

@dataclass(frozen=True)
class Pair:
    demand: object
    provider: object


@dataclass(frozen=True)
class TerminalAtom:
    value: Term


@dataclass(frozen=True)
class NormalForm:
    term: Term
    stats: Stats


@dataclass(frozen=True)
class Stuck:
    diagnostic: str
    snapshot: str
    stats: Stats


@dataclass(frozen=True)
class Cycle:
    diagnostic: str
    snapshot: str = ""
    stats: Stats = None


@dataclass(frozen=True)
class OutOfFuel:
    stats: Stats


NeededResult = Union[Pair, TerminalAtom, Cycle]
RunOutcome = Union[NormalForm, Stuck, Cycle, OutOfFuel]


class NoRule(Exception):
    """The needed pair has no interaction rule."""


# --------------------------------------------------------------------------
# needed pair

def find_needed(state: NetState, fresh: bool = False) -> NeededResult:
    """Locate the needed active pair by walking principal paths.

    With ``fresh`` the walk restarts at the interface instead of resuming
    from the cached prefix; both give the same answer.
    """
    stack = state.walk
    if fresh or not stack:
        stack[:] = [state.interface]
    limit = 2 * len(state.agents)
    stats = state.stats
    while True:
        a = stack[-1]
        b = a.peer[0]
        if a.slot[0] == 0:
            if a.kind == INTERFACE and b.kind == ATOM:
                return TerminalAtom(b.label)
            return Pair(a, b)
        stack.append(b)
        stats.walk_steps += 1
        if len(stack) > limit:
            return Cycle(f"principal walk exceeded {limit} steps at {b!r}")


# --------------------------------------------------------------------------
# phi

def phi_resolve(state: NetState, i: int, j: int) -> tuple:
    """Ids for the residual fans of ``fan_i`` (demand) meeting ``fan_j``.

    Returns ``(id on the provider's first copy, id on the demand's first
    copy)``. The first meeting of ``(i, j)`` allocates a new id and records
    both orientations; later meetings reuse them.
    """
    if i == j:
        raise ValueError("phi_resolve needs distinct fan ids")
    phi = state.phi
    if (i, j) in phi:
        state.stats.phi_hits += 1
        return phi[(i, j)], phi[(j, i)]
    n_before = state.n
    state.n += 1
    phi.insert_pair(i, j, state.n, n_before)
    state.stats.phi_inserts += 1
    return state.n, j


# --------------------------------------------------------------------------
# rewiring

def _rewire(eqs, a, b):
    """Join endpoints listed in ``eqs``.

    An endpoint is ``(agent, port)``. Auxiliary ports of the consumed agents
    ``a`` and ``b`` stand for whatever they are currently linked to; chains
    through several consumed ports are followed, closed loops dropped.
    """
    rhs = {}
    for k, (x, y) in enumerate(eqs):
        if x[0] is a or x[0] is b:
            rhs[x] = (k, 1)
        if y[0] is a or y[0] is b:
            rhs[y] = (k, 0)
    done = [False] * len(eqs)
    for k, eq in enumerate(eqs):
        if done[k]:
            continue
        done[k] = True
        ends = []
        for e in eq:
            while e is not None:
                ag, p = e
                if ag is not a and ag is not b:
                    break
                q = (ag.peer[p], ag.slot[p])
                if q[0] is not a and q[0] is not b:
                    e = q
                    break
                k2, side = rhs[q]
                if done[k2]:
                    e = None
                else:
                    done[k2] = True
                    e = eqs[k2][side]
            ends.append(e)
        if ends[0] is not None and ends[1] is not None:
            (x, i), (y, j) = ends
            link(x, i, y, j)


# --------------------------------------------------------------------------
# rules; each takes (state, x, y) with x, y in the table's kind order and
# returns the list of endpoint equations plus an optional trace suffix

def _r1(state, r, lam):
    y = state.fresh_binder()
    atom = state.new_agent(ATOM, Var(y))
    r2 = state.new_agent(READER, extend_lambda(r.label, y))
    return [((atom, 0), (lam, 1)), ((r2, 0), (lam, 2)), ((r2, 1), (r, 1))], ""


def _r2(state, app, lam):
    # beta: application root to body, argument to binder
    return [((app, 1), (lam, 2)), ((app, 2), (lam, 1))], ""


def _r3(state, app, atom):
    r = state.new_agent(READER, (AppOf(atom.label),))
    return [((r, 0), (app, 2)), ((r, 1), (app, 1))], ""


def _r4(state, r, atom):
    out = state.new_agent(ATOM, plug(r.label, atom.label))
    return [((out, 0), (r, 1))], ""


def _r5(state, r, fan):
    f = state.new_agent(FAN, fan.label)
    r1 = state.new_agent(READER, r.label)
    r2 = state.new_agent(READER, r.label)
    return [((f, 0), (r, 1)),
            ((r1, 0), (fan, 1)), ((r1, 1), (f, 1)),
            ((r2, 0), (fan, 2)), ((r2, 1), (f, 2))], ""


def _r6(state, fan, atom):
    a1 = state.new_agent(ATOM, atom.label)
    a2 = state.new_agent(ATOM, atom.label)
    return [((a1, 0), (fan, 1)), ((a2, 0), (fan, 2))], ""


def _commute(state, fan, other):
    # R7/R8: copy `other` onto the fan's aux wires, fans onto other's aux wires
    c1 = state.new_agent(other.kind)
    c2 = state.new_agent(other.kind)
    f1 = state.new_agent(FAN, fan.label)
    f2 = state.new_agent(FAN, fan.label)
    return [((c1, 0), (fan, 1)), ((c2, 0), (fan, 2)),
            ((f1, 0), (other, 1)), ((f2, 0), (other, 2)),
            ((f1, 1), (c1, 1)), ((f1, 2), (c2, 1)),
            ((f2, 1), (c1, 2)), ((f2, 2), (c2, 2))], ""


def _r9(state, f, g):
    return [((f, 1), (g, 1)), ((f, 2), (g, 2))], ""


def _r10(state, fi, fj):
    i, j = fi.label, fj.label
    hit = (i, j) in state.phi
    to_provider, to_demand = phi_resolve(state, i, j)
    t1 = state.new_agent(FAN, to_demand)
    t2 = state.new_agent(FAN, j)
    u1 = state.new_agent(FAN, to_provider)
    u2 = state.new_agent(FAN, i)
    eqs = [((t1, 0), (fi, 1)), ((t2, 0), (fi, 2)),
           ((u1, 0), (fj, 1)), ((u2, 0), (fj, 2)),
           ((t1, 1), (u1, 1)), ((t1, 2), (u2, 1)),
           ((t2, 1), (u1, 2)), ((t2, 2), (u2, 2))]
    phi = state.phi
    action = "hit" if hit else "insert"
    return eqs, f" {action} ({i},{j})↦{phi[(i, j)]} ({j},{i})↦{phi[(j, i)]}"


# (demand kind, provider kind) -> (rule id, function, swap arguments)
_RULES = {}
for _k1, _k2, _rid, _fn in [
    (READER, LAM, "R1", _r1),
    (APP, LAM, "R2", _r2),
    (APP, ATOM, "R3", _r3),
    (READER, ATOM, "R4", _r4),
    (READER, FAN, "R5", _r5),
    (FAN, ATOM, "R6", _r6),
    (FAN, LAM, "R7", _commute),
    (FAN, APP, "R8", _commute),
]:
    _RULES[(_k1, _k2)] = (_rid, _fn, False)
    _RULES[(_k2, _k1)] = (_rid, _fn, True)


def apply_rule(state: NetState, pair: Pair) -> str:
    """Rewrite the active pair in place and return the rule id."""
    d, q = pair.demand, pair.provider
    assert d.peer[0] is q and d.slot[0] == 0, "not an active pair"
    if d.kind == FAN and q.kind == FAN:
        rid, fn, swap = ("R9", _r9, False) if d.label == q.label else ("R10", _r10, False)
    else:
        entry = _RULES.get((d.kind, q.kind))
        if entry is None:
            raise NoRule(f"no rule for {d.describe()} × {q.describe()}")
        rid, fn, swap = entry
    if state.trace is not None:
        head = f"{len(state.trace) + 1}: {rid} {d.describe()} × {q.describe()}"
    eqs, suffix = fn(state, q, d) if swap else fn(state, d, q)
    _rewire(eqs, d, q)
    state.remove(d)
    state.remove(q)
    state.stats.rules[rid] += 1
    if state.trace is not None:
        state.trace.append(head + suffix)
    walk = state.walk
    if walk and walk[-1] is d:
        walk.pop()
    else:
        walk.clear()
    return rid


# --------------------------------------------------------------------------
# driver

def run(state: NetState, max_interactions: int = DEFAULT_MAX_INTERACTIONS,
        fresh_walk: bool = False) -> RunOutcome:
    """Reduce until the interface holds an atom, or report why not.

    Garbage is never collected; its size ends up in ``residual_agents``.
    """
    stats = state.stats
    while True:
        found = find_needed(state, fresh=fresh_walk)
        if isinstance(found, TerminalAtom):
            stats.residual_agents = len(state.agents) - 2
            return NormalForm(found.value, stats)
        if isinstance(found, Cycle):
            stats.residual_agents = len(state.agents)
            return Cycle(found.diagnostic, state.snapshot(), stats)
        if stats.interactions >= max_interactions:
            stats.residual_agents = len(state.agents)
            return OutOfFuel(stats)
        try:
            apply_rule(state, found)
        except NoRule as exc:
            stats.residual_agents = len(state.agents)
            return Stuck(str(exc), state.snapshot(demand=found.demand), stats)


def dump_trace(state: NetState) -> list:
    """Trace lines recorded so far (tracing must be enabled before running)."""
    if state.trace is None:
        raise ValueError("tracing is not enabled on this state")
    return list(state.trace)


def normalize(term: Term, max_interactions: int = DEFAULT_MAX_INTERACTIONS,
              trace: bool = False):
    """Encode ``term``, run it, and return ``(outcome, state)``."""
    state = build_initial(term)
    if trace:
        state.enable_trace()
    return run(state, max_interactions), state
