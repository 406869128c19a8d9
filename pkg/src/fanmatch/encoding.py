"""Translation of lambda terms into initial net states.

The translation first emits a list of equations over named wires, exactly
as in the interaction-calculus presentation, and then realizes them as a
port graph. Bound variables use their (canonical, hence unique) binder
name as wire name; generated wires are named ``~0``, ``~1``, ... which
cannot clash with identifiers.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .net import APP, ATOM, ERASER, FAN, INTERFACE, LAM, READER, NetState, link
from .terms import Lam, MarkedVar, Term, Var, canonicalize, free_vars, rebuild


class EncodingError(AssertionError):
    """Raised when the emitted equations violate wire linearity."""


@dataclass(frozen=True)
class Alias:
    """``left = right`` between two wire names."""
    left: str
    right: str


@dataclass(frozen=True)
class Node:
    """``wire = kind(aux...)``: an agent whose principal port is on ``wire``."""
    wire: str
    kind: str
    label: object
    aux: tuple


class EquationSet:
    def __init__(self):
        self.equations = []
        self.deltas = []        # indices of δ equations, in emission order
        self._counter = 0

    def fresh(self):
        w = f"~{self._counter}"
        self._counter += 1
        return w

    def alias(self, left, right):
        self.equations.append(Alias(left, right))

    def node(self, wire, kind, label=None, aux=()):
        self.equations.append(Node(wire, kind, label, tuple(aux)))

    def delta(self, wire, aux):
        self.deltas.append(len(self.equations))
        self.node(wire, FAN, None, aux)


def mark_free(term: Term) -> Term:
    """Replace every free occurrence of a variable by its marked form."""
    def on_var(t, bound):
        if isinstance(t, MarkedVar):
            raise ValueError("term is already marked")
        return t if t.name in bound else MarkedVar(t.name)

    return rebuild(term, frozenset(), on_var,
                   lambda lam, bound: (lam.binder, bound | {lam.binder}))


def _unmarked_fv(term, memo):
    """Free unmarked variables in first-occurrence order, memoized by node."""
    stack = [(term, False)]
    while stack:
        t, expanded = stack.pop()
        key = id(t)
        if key in memo:
            continue
        if isinstance(t, Var):
            out = (t.name,)
        elif isinstance(t, MarkedVar):
            out = ()
        elif not expanded:
            stack.append((t, True))
            if isinstance(t, Lam):
                stack.append((t.body, False))
            else:
                stack.append((t.arg, False))
                stack.append((t.fun, False))
            continue
        elif isinstance(t, Lam):
            out = tuple(x for x in memo[id(t.body)][1] if x != t.binder)
        else:
            f = memo[id(t.fun)][1]
            seen = set(f)
            out = f + tuple(x for x in memo[id(t.arg)][1] if x not in seen)
        memo[key] = (t, out)    # keep t alive so its id is not reused
    return memo[id(term)][1]


def gamma(term: Term, root: str, builder: EquationSet) -> None:
    """Emit the equations translating ``term`` with its root on ``root``.

    Marked variables become atoms. At an application, every unmarked
    variable free on both sides is split by a δ whose principal port faces
    the variable's wire, first auxiliary the argument-side copy and second
    auxiliary the function-side copy.
    """
    _gamma(term, root, builder, {}, {})


def _gamma(t, root, b, env, memo):
    while True:
        if isinstance(t, MarkedVar):
            b.node(root, ATOM, Var(t.name))
            return
        if isinstance(t, Var):
            b.alias(env.get(t.name, t.name), root)
            return
        if isinstance(t, Lam):
            body = b.fresh()
            if t.binder in _unmarked_fv(t.body, memo):
                b.node(root, LAM, aux=(t.binder, body))
                if t.binder in env:
                    env = {k: v for k, v in env.items() if k != t.binder}
            else:
                e = b.fresh()
                b.node(root, LAM, aux=(e, body))
                b.node(e, ERASER)
            t, root = t.body, body
            continue
        fun_root, arg_root = b.fresh(), b.fresh()
        b.node(fun_root, APP, aux=(root, arg_root))
        arg_fv = set(_unmarked_fv(t.arg, memo))
        env_fun, env_arg = dict(env), dict(env)
        for x in _unmarked_fv(t.fun, memo):
            if x in arg_fv:
                fun_copy, arg_copy = b.fresh(), b.fresh()
                b.delta(env.get(x, x), aux=(arg_copy, fun_copy))
                env_fun[x] = fun_copy
                env_arg[x] = arg_copy
        _gamma(t.fun, fun_root, b, env_fun, memo)
        t, root, env = t.arg, arg_root, env_arg


_READBACK_NAME = "v"


def _binder_prefix(source_names):
    """A prefix P such that no source name looks like P followed by digits."""
    prefix = _READBACK_NAME
    while any(re.fullmatch(re.escape(prefix) + r"\d+", x) for x in source_names):
        prefix += "_"
    return prefix


def realize(equations, state: NetState) -> None:
    """Turn an equation list into agents and links inside ``state``.

    Every wire name must occur exactly twice; aliases are followed through.
    """
    occ = {}
    ports = []

    def add(wire, what):
        occ.setdefault(wire, []).append(what)

    for k, eq in enumerate(equations):
        if isinstance(eq, Alias):
            if eq.left == eq.right:
                raise EncodingError(f"self-alias on {eq.left}")
            add(eq.left, ("alias", k))
            add(eq.right, ("alias", k))
            continue
        agent = state.new_agent(eq.kind, eq.label)
        for i, w in enumerate((eq.wire,) + eq.aux):
            add(w, ("port", agent, i))
            ports.append((w, agent, i))

    for w, uses in occ.items():
        if len(uses) != 2:
            raise EncodingError(f"wire {w} has {len(uses)} endpoints")

    for w, agent, i in ports:
        if agent.peer[i] is not None:
            continue
        prev = ("port", agent, i)
        wire = w
        while True:
            a, b = occ[wire]
            nxt = b if a == prev else a
            if nxt[0] == "port":
                link(agent, i, nxt[1], nxt[2])
                break
            eq = equations[nxt[1]]
            wire = eq.right if eq.left == wire else eq.left
            prev = nxt


def encode_equations(term: Term) -> list:
    """Equations of the initial encoding with δs numbered 1..n.

    ``term`` must already be canonical (distinct binders). The reader's
    output and the interface share the wire ``p``.
    """
    builder = EquationSet()
    root = builder.fresh()
    gamma(mark_free(term), root, builder)
    eqs = builder.equations
    for fan_id, k in enumerate(builder.deltas, start=1):
        eqs[k] = Node(eqs[k].wire, FAN, fan_id, eqs[k].aux)
    return [Node(root, READER, (), ("p",))] + eqs


def build_initial(term: Term) -> NetState:
    """The initial state: a reader with empty context between root and ``p``."""
    term = canonicalize(term)
    state = NetState(binder_prefix=_binder_prefix(free_vars(term)))
    equations = encode_equations(term)
    realize([Node("p", INTERFACE, None, ())] + equations, state)
    state.n = state.n_initial = sum(
        1 for eq in equations if isinstance(eq, Node) and eq.kind == FAN)
    state.source = term
    return state
