"""Reference normal-order normalizer used as the test oracle.

Two implementations count the same leftmost-outermost beta steps:

* :func:`normalize_normal_order` is a strong call-by-name environment
  machine. Closures always point into the source term, so a beta step costs
  O(binders) no matter how large the substituted term would be as a tree.
* :func:`normalize_by_substitution` rewrites the term text with
  capture-avoiding substitution. It is quadratic or worse, kept as an
  independent cross-check for small terms.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from .terms import App, Lam, MarkedVar, Term, Var, free_vars, substitute


@dataclass(frozen=True)
class Normalized:
    term: Term
    beta_steps: int


@dataclass(frozen=True)
class FuelExhausted:
    steps_used: int


OracleOutcome = Union[Normalized, FuelExhausted]


class _OutOfFuel(Exception):
    pass


class _Closure:
    __slots__ = ("term", "env")

    def __init__(self, term, env):
        self.term = term
        self.env = env


class _Neutral:
    """A variable bound by an abstraction the machine went under."""
    __slots__ = ("name",)

    def __init__(self, name):
        self.name = name


class _Machine:
    def __init__(self, fuel, avoid):
        self.fuel = fuel
        self.steps = 0
        self.avoid = set(avoid)
        self.counters = {}

    def fresh(self, binder):
        base = re.sub(r"[\d']+$", "", binder) or "x"
        k = self.counters.get(base, 0)
        while True:
            k += 1
            name = f"{base}{k}"
            if name not in self.avoid:
                break
        self.counters[base] = k
        return name

    def head_normal(self, t, env):
        """Head-reduce; return (head variable, argument spine, binders).

        The spine is stored last-argument-first so ``pop`` yields the
        leftmost argument.
        """
        binders = []
        spine = []
        while True:
            if isinstance(t, App):
                arg = t.arg
                # reuse a variable's binding instead of chaining closures
                bound = env.get(arg.name) if isinstance(arg, Var) else None
                spine.append(bound if bound is not None else _Closure(arg, env))
                t = t.fun
            elif isinstance(t, Lam):
                if spine:
                    if self.steps >= self.fuel:
                        raise _OutOfFuel
                    self.steps += 1
                    env = {**env, t.binder: spine.pop()}
                else:
                    y = self.fresh(t.binder)
                    binders.append(y)
                    env = {**env, t.binder: _Neutral(y)}
                t = t.body
            else:
                v = env.get(t.name) if isinstance(t, Var) else None
                if isinstance(v, _Closure):
                    t, env = v.term, v.env
                    continue
                return Var(v.name if v is not None else t.name), spine, binders

    def nf(self, t, env):
        # frames are [term built so far, pending spine, binders]
        frames = [list(self.head_normal(t, env))]
        while True:
            frame = frames[-1]
            pending = frame[1]
            while pending:
                item = pending.pop()
                if isinstance(item, _Neutral):
                    frame[0] = App(frame[0], Var(item.name))
                else:
                    frames.append(list(self.head_normal(item.term, item.env)))
                    break
            else:
                out = frame[0]
                for y in reversed(frame[2]):
                    out = Lam(y, out)
                frames.pop()
                if not frames:
                    return out
                frames[-1][0] = App(frames[-1][0], out)


def normalize_normal_order(term: Term, fuel: int) -> OracleOutcome:
    """Normalize by leftmost-outermost reduction with at most ``fuel`` beta steps."""
    if fuel <= 0:
        raise ValueError("fuel must be positive")
    m = _Machine(fuel, free_vars(term))
    try:
        nf = m.nf(term, {})
    except _OutOfFuel:
        return FuelExhausted(m.steps)
    return Normalized(nf, m.steps)


def normalize_by_substitution(term: Term, fuel: int) -> OracleOutcome:
    """Same reduction sequence, performed textually on terms."""
    if fuel <= 0:
        raise ValueError("fuel must be positive")
    steps = [0]

    def nf(t):
        binders = []
        while True:
            while isinstance(t, Lam):
                binders.append(t.binder)
                t = t.body
            spine = []
            head = t
            while isinstance(head, App):
                spine.append(head.arg)
                head = head.fun
            if not (isinstance(head, Lam) and spine):
                break
            if steps[0] >= fuel:
                raise _OutOfFuel
            steps[0] += 1
            t = substitute(head.body, head.binder, spine.pop())
            while spine:
                t = App(t, spine.pop())
        assert isinstance(head, (Var, MarkedVar))
        out = head
        for a in reversed(spine):
            out = App(out, nf(a))
        for b in reversed(binders):
            out = Lam(b, out)
        return out

    try:
        result = nf(term)
    except _OutOfFuel:
        return FuelExhausted(steps[0])
    return Normalized(result, steps[0])
