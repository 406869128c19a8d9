"""Seeded generator of closed, redex-rich lambda terms."""

from __future__ import annotations

import random

from .terms import App, Lam, Term, Var

# Bias constants. With variables in scope, a node is a variable with
# probability P_VAR (forced when the budget is 1); otherwise it is a
# beta-redex with probability P_REDEX, an abstraction with P_LAM and an
# application with the remaining mass.
P_VAR = 0.30
P_REDEX = 0.40
P_LAM = 0.25


def gen_random_term(seed: int, max_size: int) -> Term:
    """Return a closed term with at most ``max_size`` constructors.

    Deterministic in ``seed``. The smallest closed term (``λx.x``) has two
    constructors, so ``max_size`` must be at least 2.
    """
    if max_size < 2:
        raise ValueError("no closed term has fewer than 2 constructors")
    rng = random.Random(seed)
    target = rng.randint(max(2, max_size // 2), max_size)
    return _Gen(rng).term(target, ())


class _Gen:
    def __init__(self, rng):
        self.rng = rng
        self.k = 0

    def fresh(self):
        name = f"x{self.k}"
        self.k += 1
        return name

    def term(self, budget, scope):
        rng = self.rng
        lo = 1 if scope else 2       # smallest term for this scope
        assert budget >= lo
        if budget == 1 or (scope and rng.random() < P_VAR):
            return Var(rng.choice(scope))
        if budget == 2:
            return self.lam(2, scope)
        roll = rng.random()
        # redex (λx.M) N needs 1 + 2 + lo constructors at minimum
        if roll < P_REDEX and budget >= 3 + lo:
            arg_size = rng.randint(lo, budget - 3)
            fun = self.lam(budget - 1 - arg_size, scope)
            return App(fun, self.term(arg_size, scope))
        if roll < P_REDEX + P_LAM or budget < 1 + 2 * lo:
            return self.lam(budget, scope)
        fun_size = rng.randint(lo, budget - 1 - lo)
        fun = self.term(fun_size, scope)
        return App(fun, self.term(rng.randint(lo, budget - 1 - fun_size), scope))

    def lam(self, budget, scope):
        x = self.fresh()
        inner = scope + (x,)
        return Lam(x, self.term(self.rng.randint(max(1, (budget - 1) // 2), budget - 1), inner))
