"""Port-graph representation of interaction nets with embedded read-back."""

from __future__ import annotations

from dataclasses import dataclass, field

from .terms import App, Lam, Term, Var, to_str

# agent kinds
INTERFACE = "p"
ERASER = "eraser"
LAM = "lam"
APP = "app"
FAN = "fan"
ATOM = "atom"
READER = "reader"

# total ports per kind; port 0 is always the principal port
#   lam:    binder, body
#   app:    root, argument
#   fan:    copy1, copy2
#   reader: output
ARITY = {INTERFACE: 1, ERASER: 1, LAM: 3, APP: 3, FAN: 3, ATOM: 1, READER: 2}

HOLE = "◻"


# --------------------------------------------------------------------------
# read-back contexts

@dataclass(frozen=True)
class UnderLam:
    name: str


@dataclass(frozen=True)
class AppOf:
    fun: Term


# A context is a tuple of frames, outermost first.
EMPTY_CONTEXT: tuple = ()


def plug(context: tuple, term: Term) -> Term:
    """Fill the hole of ``context`` with ``term``."""
    for frame in reversed(context):
        if isinstance(frame, UnderLam):
            term = Lam(frame.name, term)
        else:
            term = App(frame.fun, term)
    return term


def extend_lambda(context: tuple, binder: str) -> tuple:
    return context + (UnderLam(binder),)


def context_str(context: tuple) -> str:
    return to_str(plug(context, Var(HOLE)))


# --------------------------------------------------------------------------
# agents

class Agent:
    __slots__ = ("uid", "kind", "label", "peer", "slot")

    def __init__(self, uid, kind, label=None):
        self.uid = uid
        self.kind = kind
        # fan id, atom term or reader context
        self.label = label
        arity = ARITY[kind]
        self.peer = [None] * arity
        self.slot = [0] * arity

    def describe(self):
        if self.kind == FAN:
            return f"fan({self.label})"
        if self.kind == ATOM:
            return f"atom({to_str(self.label)})"
        if self.kind == READER:
            return f"reader({context_str(self.label)})"
        return self.kind

    def __repr__(self):
        return f"<{self.describe()} #{self.uid}>"


def link(a: Agent, i: int, b: Agent, j: int) -> None:
    a.peer[i] = b
    a.slot[i] = j
    b.peer[j] = a
    b.slot[j] = i


# --------------------------------------------------------------------------
# phi

class PhiTable:
    """Map from ordered fan-id pairs to fan ids, backed by a dict.

    Entries are only ever added in mirrored pairs by :meth:`insert_pair`.
    ``inserts`` keeps each first insertion as ``(i, j, new_id, n_before)``.
    """

    def __init__(self):
        self._map = {}
        self.inserts = []

    def __contains__(self, key):
        return key in self._map

    def __getitem__(self, key):
        return self._map[key]

    def __len__(self):
        return len(self._map)

    def insert_pair(self, i, j, new_id, n_before):
        assert (i, j) not in self._map and (j, i) not in self._map
        self._map[(i, j)] = new_id
        self._map[(j, i)] = j
        self.inserts.append((i, j, new_id, n_before))

    def items(self):
        return sorted(self._map.items())

    def check(self, n_initial, n_current):
        """Assert the mirrored-pair invariants and the fan-counter balance."""
        for (i, j) in self._map:
            assert (j, i) in self._map, f"({i},{j}) has no mirror"
        for i, j, new_id, n_before in self.inserts:
            assert self._map[(j, i)] == j, f"phi({j},{i}) != {j}"
            assert self._map[(i, j)] == new_id > n_before, f"phi({i},{j}) is not fresh"
        assert n_current == n_initial + len(self.inserts), "fan counter drifted"

    def dump(self):
        return " ".join(f"({i},{j})↦{v}" for (i, j), v in self.items())


# --------------------------------------------------------------------------
# statistics

RULES = tuple(f"R{k}" for k in range(1, 11))


@dataclass
class Stats:
    rules: dict = field(default_factory=lambda: dict.fromkeys(RULES, 0))
    phi_inserts: int = 0
    phi_hits: int = 0
    walk_steps: int = 0
    residual_agents: int = 0

    @property
    def interactions(self):
        return sum(self.rules.values())

    def as_dict(self):
        d = dict(self.rules)
        d.update(interactions=self.interactions, phi_inserts=self.phi_inserts,
                 phi_hits=self.phi_hits, walk_steps=self.walk_steps,
                 residual_agents=self.residual_agents)
        return d


# --------------------------------------------------------------------------
# state

class NetState:
    """Agents plus the interface, phi, the fan counter and run statistics."""

    def __init__(self, binder_prefix="v"):
        self.agents = {}
        self.interface = None
        self.phi = PhiTable()
        self.n = 0
        self.n_initial = 0
        self.k = 0
        self.binder_prefix = binder_prefix
        self.stats = Stats()
        self.trace = None
        self.walk = []        # cached principal path, see engine.find_needed
        self.source = None
        self._uid = 0

    def new_agent(self, kind, label=None):
        a = Agent(self._uid, kind, label)
        self._uid += 1
        self.agents[a.uid] = a
        if kind == INTERFACE:
            assert self.interface is None, "exactly one interface agent"
            self.interface = a
        return a

    def remove(self, a):
        del self.agents[a.uid]

    def fresh_binder(self):
        name = f"{self.binder_prefix}{self.k}"
        self.k += 1
        return name

    def enable_trace(self):
        self.trace = []

    def fan_ids(self):
        return [a.label for a in self.agents.values() if a.kind == FAN]

    def check_linearity(self):
        """Assert every port is joined to a port that points back to it."""
        for a in self.agents.values():
            for i, b in enumerate(a.peer):
                if b is None:
                    raise AssertionError(f"{a!r} port {i} is dangling")
                if b.uid not in self.agents or self.agents[b.uid] is not b:
                    raise AssertionError(f"{a!r} port {i} joins a removed agent")
                j = a.slot[i]
                if b.peer[j] is not a or b.slot[j] != i:
                    raise AssertionError(f"{a!r} port {i} is not mutually linked")

    def snapshot(self, demand=None):
        """Serialize as an equation list ``w = kind(aux wires)``.

        Wires are numbered by first appearance over agents in creation order,
        which makes the text stable for a fixed input. ``demand`` marks an
        agent with ``!``.
        """
        wires = {}

        def wire(a, i):
            key = (a.uid, i)
            if key not in wires:
                name = f"w{len(wires) // 2}"
                wires[key] = name
                b = a.peer[i]
                wires[(b.uid, a.slot[i])] = name
            return wires[key]

        lines = []
        for a in self.agents.values():
            ws = [wire(a, i) for i in range(len(a.peer))]
            bang = "!" if a is demand else ""
            if a.kind == INTERFACE:
                lines.append(f"{bang}p = {ws[0]}")
                continue
            label = {
                FAN: lambda: f"fan_{a.label}",
                ATOM: lambda: f"atom[{to_str(a.label)}]",
                READER: lambda: f"reader[{context_str(a.label)}]",
            }.get(a.kind, lambda: a.kind)()
            aux = f"({', '.join(ws[1:])})" if len(ws) > 1 else ""
            lines.append(f"{ws[0]} = {bang}{label}{aux}")
        return "\n".join(lines)

