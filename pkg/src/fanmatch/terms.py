"""Lambda terms: syntax, parsing, printing, alpha-equivalence, substitution."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

__all__ = [
    "Var", "MarkedVar", "Lam", "App", "Term", "ParseError",
    "parse", "to_str", "free_vars", "alpha_eq", "substitute",
    "canonicalize", "size", "names", "rebuild",
]

@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class MarkedVar:
    """A free variable after marking; never produced by the parser."""
    name: str


@dataclass(frozen=True)
class Lam:
    binder: str
    body: "Term"


@dataclass(frozen=True)
class App:
    fun: "Term"
    arg: "Term"


Term = Union[Var, MarkedVar, Lam, App]


class ParseError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


# --------------------------------------------------------------------------
# parsing

_TOKEN_RE = re.compile(r"\s*(?:([\\λ().])|([A-Za-z0-9_']+))")


def _tokenize(text):
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            tail = text[pos:]
            rest = len(tail) - len(tail.lstrip())
            if pos + rest >= n:
                break
            raise ParseError(f"unexpected character {text[pos + rest]!r}", pos + rest)
        if m.group(1):
            tokens.append((m.group(1), m.start(1)))
        else:
            tokens.append(("id:" + m.group(2), m.start(2)))
        pos = m.end()
    tokens.append(("eof", n))
    return tokens


class _Parser:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i][0]

    def take(self, kind=None):
        tok, pos = self.toks[self.i]
        if kind is not None and tok != kind:
            shown = "end of input" if tok == "eof" else repr(tok.removeprefix("id:"))
            raise ParseError(f"expected {kind!r}, found {shown}", pos)
        self.i += 1
        return tok, pos

    def term(self):
        items = []
        while True:
            tok = self.peek()
            if tok in ("\\", "λ"):
                items.append(self.lam())
                break  # a lambda extends as far right as possible
            elif tok == "(":
                self.take()
                items.append(self.term())
                self.take(")")
            elif tok.startswith("id:"):
                items.append(Var(self.take()[0][3:]))
            else:
                break
        if not items:
            tok, pos = self.toks[self.i]
            shown = "end of input" if tok == "eof" else repr(tok.removeprefix("id:"))
            raise ParseError(f"expected a term, found {shown}", pos)
        t = items[0]
        for a in items[1:]:
            t = App(t, a)
        return t

    def lam(self):
        self.take()
        binders = []
        while self.peek().startswith("id:"):
            binders.append(self.take()[0][3:])
        if not binders:
            raise ParseError("expected a binder", self.toks[self.i][1])
        self.take(".")
        body = self.term()
        for b in reversed(binders):
            body = Lam(b, body)
        return body


def parse(text: str) -> Term:
    """Parse ``\\x.M`` / ``λx.M`` syntax and canonicalize binder names.

    ``\\x y.M`` abbreviates ``\\x.\\y.M``. Free names are kept verbatim.
    """
    p = _Parser(text)
    t = p.term()
    tok, pos = p.toks[p.i]
    if tok != "eof":
        raise ParseError(f"unexpected {tok.removeprefix('id:')!r}", pos)
    return canonicalize(t)


# --------------------------------------------------------------------------
# printing

def to_str(term: Term) -> str:
    """Render a term; marked variables print as their bare name."""
    parts = []
    stack = [term]
    while stack:
        t = stack.pop()
        if isinstance(t, str):
            parts.append(t)
        elif isinstance(t, (Var, MarkedVar)):
            parts.append(t.name)
        elif isinstance(t, Lam):
            parts.append(f"λ{t.binder}.")
            stack.append(t.body)
        else:
            fun, arg = t.fun, t.arg
            if isinstance(arg, (App, Lam)):
                stack.extend((")", arg, "("))
            else:
                stack.append(arg)
            stack.append(" ")
            if isinstance(fun, Lam):
                stack.extend((")", fun, "("))
            else:
                stack.append(fun)
    return "".join(parts)


# --------------------------------------------------------------------------
# queries

def size(term: Term) -> int:
    """Number of constructors."""
    count = 0
    stack = [term]
    while stack:
        t = stack.pop()
        count += 1
        if isinstance(t, Lam):
            stack.append(t.body)
        elif isinstance(t, App):
            stack.append(t.arg)
            stack.append(t.fun)
    return count


def names(term: Term) -> set:
    """Every name occurring in the term, bound, free or as a binder."""
    out = set()
    stack = [term]
    while stack:
        t = stack.pop()
        if isinstance(t, (Var, MarkedVar)):
            out.add(t.name)
        elif isinstance(t, Lam):
            out.add(t.binder)
            stack.append(t.body)
        else:
            stack.append(t.arg)
            stack.append(t.fun)
    return out


def free_vars(term: Term) -> tuple:
    """Unbound names (marked or not) in first-occurrence order."""
    seen = {}
    stack = [(term, frozenset())]
    while stack:
        t, bound = stack.pop()
        if isinstance(t, (Var, MarkedVar)):
            if t.name not in bound:
                seen.setdefault(t.name, None)
        elif isinstance(t, Lam):
            stack.append((t.body, bound | {t.binder}))
        else:
            stack.append((t.arg, bound))
            stack.append((t.fun, bound))
    return tuple(seen)


def alpha_eq(a: Term, b: Term) -> bool:
    """Equality up to renaming of bound variables; marks are ignored."""
    stack = [(a, b, {}, {}, 0)]
    while stack:
        x, y, ex, ey, depth = stack.pop()
        if isinstance(x, (Var, MarkedVar)):
            if not isinstance(y, (Var, MarkedVar)):
                return False
            ix, iy = ex.get(x.name), ey.get(y.name)
            if ix != iy:
                return False
            if ix is None and x.name != y.name:
                return False
        elif isinstance(x, Lam):
            if not isinstance(y, Lam):
                return False
            stack.append((x.body, y.body, {**ex, x.binder: depth},
                          {**ey, y.binder: depth}, depth + 1))
        else:
            if not isinstance(y, App):
                return False
            stack.append((x.fun, y.fun, ex, ey, depth))
            stack.append((x.arg, y.arg, ex, ey, depth))
    return True


# --------------------------------------------------------------------------
# renaming and substitution

def _fresh(base, avoid):
    root = base.split("'")[0] or "v"
    cand = root + "'"
    k = 0
    while cand in avoid:
        k += 1
        cand = f"{root}'{k}"
    avoid.add(cand)
    return cand


def rebuild(term: Term, env, on_var, on_binder) -> Term:
    """Rebuild ``term`` bottom-up without recursion.

    ``on_var(node, env)`` gives the replacement of a variable node and
    ``on_binder(lam, env)`` gives ``(new_binder, body_env)``.
    """
    out = []
    stack = [(0, term, env)]
    while stack:
        op, t, e = stack.pop()
        if op == 0:
            if isinstance(t, (Var, MarkedVar)):
                out.append(on_var(t, e))
            elif isinstance(t, Lam):
                binder, body_env = on_binder(t, e)
                stack.append((1, binder, None))
                stack.append((0, t.body, body_env))
            else:
                stack.append((2, None, None))
                stack.append((0, t.arg, e))
                stack.append((0, t.fun, e))
        elif op == 1:
            out.append(Lam(t, out.pop()))
        else:
            arg = out.pop()
            out.append(App(out.pop(), arg))
    return out[0]


def substitute(term: Term, name: str, replacement: Term) -> Term:
    """Capture-avoiding ``term[name := replacement]``."""
    repl_free = set(free_vars(replacement))
    avoid = names(term) | names(replacement)

    def on_var(t, env):
        if isinstance(t, MarkedVar):
            return t
        return env.get(t.name, t)

    def on_binder(lam, env):
        b = lam.binder
        if b in repl_free and name in env:
            new = _fresh(b, avoid)
            return new, {**env, b: Var(new)}
        if b in env:
            env = {k: v for k, v in env.items() if k != b}
        return b, env

    return rebuild(term, {name: replacement}, on_var, on_binder)


_TRAILING_DIGITS = re.compile(r"\d+$")


def canonicalize(term: Term) -> Term:
    """Rename binders so they are pairwise distinct and avoid free names.

    A binder ``x`` becomes ``x1``, ``x2``, ... (per base name, skipping
    anything free in the term). Free names are untouched.
    """
    taken = set(free_vars(term))
    counters = {}

    def on_binder(lam, env):
        base = lam.binder.split("'")[0]
        if _TRAILING_DIGITS.search(base) and base.rstrip("0123456789"):
            base = base.rstrip("0123456789")
        k = counters.get(base, 0)
        while True:
            k += 1
            cand = f"{base}{k}"
            if cand not in taken:
                break
        counters[base] = k
        taken.add(cand)
        return cand, {**env, lam.binder: cand}

    def on_var(t, env):
        if isinstance(t, MarkedVar):
            return t
        return Var(env.get(t.name, t.name))

    return rebuild(term, {}, on_var, on_binder)
