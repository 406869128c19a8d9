"""Differential testing of the engine against the normal-order oracle."""

from __future__ import annotations

import hashlib
import logging
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

from .engine import Cycle, NormalForm, OutOfFuel, Stuck, normalize
from .net import Stats
from .oracle import Normalized, normalize_normal_order
from .randgen import gen_random_term
from .terms import App, Lam, Term, Var, alpha_eq, parse, to_str

log = logging.getLogger(__name__)

DEFAULT_ORACLE_FUEL = 100_000
DEFAULT_ENGINE_FUEL = 1_000_000


# --------------------------------------------------------------------------
# corpus

def church(n: int) -> Term:
    """λs.λz.s (s ... (s z))."""
    if n < 0:
        raise ValueError("church numerals are non-negative")
    body = Var("z")
    for _ in range(n):
        body = App(Var("s"), body)
    return Lam("s", Lam("z", body))


ADD = parse(r"\m n s z. m s (n s z)")
MUL = parse(r"\m n s. m (n s)")
PRED = parse(r"\n f x. n (\g h. h (g f)) (\u. x) (\u. u)")
SUB = parse(r"\m n. n (\n f x. n (\g h. h (g f)) (\u. x) (\u. u)) m")
Y = parse(r"\h. (\x. h (x x)) (\x. h (x x))")


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    term: Term
    expected: Optional[Term] = None


def _entry(name, text, expected=None):
    return CorpusEntry(name, parse(text), parse(expected) if expected else None)


def corpus() -> list:
    """Fixed regression corpus of sharing-heavy and micro terms."""
    out = [
        _entry("var", "x", "x"),
        _entry("id", r"\x.x", r"\x.x"),
        _entry("id_app", r"(\z.z) x", "x"),
        _entry("free_app", "x y", "x y"),
        _entry("open_lam", r"\x.x y", r"\x.x y"),
        _entry("id_id", r"(\x.x) (\y.y)", r"\y.y"),
        _entry("k_discard", r"(\x.\y.x) a b", "a"),
        _entry("ki_discard", r"(\x.\y.y) a b", "b"),
        _entry("erase_omega", r"(\x.y) ((\z.z z) (\z.z z))", "y"),
        _entry("y_const", r"(\h. (\x. h (x x)) (\x. h (x x))) (\f.\x.x)", r"\x.x"),
        _entry("self_id", r"(\x.x x) (\y.y)", r"\y.y"),
        _entry("self_k", r"(\x.x x) (\x.\y.x)", r"\y.\a.\b.a"),
        _entry("self_ki", r"(\x.x x) (\x.\y.y)", r"\y.y"),
        _entry("self_s", r"(\x.x x) (\x y z. x z (y z))"),
        _entry("self_church2", r"(\x.x x) (\s z. s (s z))"),
        _entry("self_delta", r"(\x.x x) (\y w. y (w w))"),
        _entry("dup_free", r"(\x. x x) (\y. f y)", "f (\\y. f y)"),
        _entry("share_under_lam", r"\a. (\x. x (x a)) (\y. g y y)"),
        _entry("nested_share", r"(\x. x (x (\y.y))) (\z. z z)"),
        _entry("two_fans", r"(\f. f (f (\x. x))) (\g. \y. g (g y))"),
        _entry("double_dup", r"(\x. (\y. y y) (x x)) (\z. z)"),
        _entry("crossed_dup", r"(\x. (\y. x y y) (x x)) (\a b c. c b a)"),
        _entry("tower_2_2_2", r"(\s z. s (s z)) (\s z. s (s z)) (\s z. s (s z))"),
        _entry("pred_3", "(" + to_str(PRED) + r") (\s z. s (s (s z)))", r"\s z. s (s z)"),
        _entry("sub_3_2", "(" + to_str(SUB) + r") (\s z. s (s (s z))) (\s z. s (s z))",
               r"\s z. s z"),
        _entry("mul_pred", "(" + to_str(MUL) + ") (" + to_str(PRED)
               + r" (\s z. s (s (s z)))) (\s z. s (s z))"),
    ]
    for op, fn in (("add", lambda a, b: App(App(ADD, church(a)), church(b))),
                   ("mul", lambda a, b: App(App(MUL, church(a)), church(b))),
                   # a^b is church(b) applied to church(a)
                   ("exp", lambda a, b: App(church(b), church(a)))):
        for a in range(4):
            for b in range(4):
                out.append(CorpusEntry(f"{op}_{a}_{b}", fn(a, b)))
    return out


def corpus_entry(name: str) -> CorpusEntry:
    for e in corpus():
        if e.name == name:
            return e
    raise KeyError(name)


# --------------------------------------------------------------------------
# verdicts

@dataclass(frozen=True)
class Match:
    engine_stats: Stats
    oracle_steps: int
    term: Term


@dataclass(frozen=True)
class Mismatch:
    engine_term: Term
    oracle_term: Term


@dataclass(frozen=True)
class EngineStuck:
    snapshot: str
    diagnostic: str = ""


@dataclass(frozen=True)
class EngineCycle:
    snapshot: str
    diagnostic: str = ""


@dataclass(frozen=True)
class EngineFuel:
    oracle_steps: int


@dataclass(frozen=True)
class OracleFuel:
    """The oracle gave up; ``engine`` names what the engine did."""
    engine: str


Verdict = Union[Match, Mismatch, EngineStuck, EngineCycle, EngineFuel, OracleFuel]
VERDICT_KINDS = ("Match", "Mismatch", "EngineStuck", "EngineCycle", "EngineFuel",
                 "OracleFuel")
FAILURES = ("Mismatch", "EngineStuck", "EngineCycle")


def kind(verdict) -> str:
    return type(verdict).__name__


def run_case(term: Term, engine_fuel: int = DEFAULT_ENGINE_FUEL,
             oracle_fuel: int = DEFAULT_ORACLE_FUEL,
             save_dir=None, note: str = "") -> Verdict:
    """Run engine and oracle on ``term`` and compare.

    With ``save_dir`` set, failures (mismatch, stuck, cycle) are written
    there as counterexample files; ``note`` goes into the comment line.
    """
    if engine_fuel <= 0 or oracle_fuel <= 0:
        raise ValueError("fuels must be positive")
    expected = normalize_normal_order(term, oracle_fuel)
    outcome, _ = normalize(term, engine_fuel)
    if not isinstance(expected, Normalized):
        verdict = OracleFuel(type(outcome).__name__)
    elif isinstance(outcome, NormalForm):
        if alpha_eq(outcome.term, expected.term):
            verdict = Match(outcome.stats, expected.beta_steps, outcome.term)
        else:
            verdict = Mismatch(outcome.term, expected.term)
    elif isinstance(outcome, Stuck):
        verdict = EngineStuck(outcome.snapshot, outcome.diagnostic)
    elif isinstance(outcome, Cycle):
        verdict = EngineCycle(outcome.snapshot, outcome.diagnostic)
    else:
        assert isinstance(outcome, OutOfFuel)
        verdict = EngineFuel(expected.beta_steps)
    if save_dir is not None and kind(verdict) in FAILURES:
        try:
            save_counterexample(save_dir, term, verdict, note)
        except OSError as exc:
            log.error("could not persist counterexample: %s", exc)
    return verdict


# --------------------------------------------------------------------------
# counterexample files

def counterexample_name(term: Term, verdict) -> str:
    digest = hashlib.sha1(to_str(term).encode()).hexdigest()[:12]
    return f"{kind(verdict).lower()}-{digest}.lam"


def save_counterexample(directory, term: Term, verdict, note: str = "") -> Path:
    """Write ``<kind>-<hash>.lam`` (and a ``.net`` snapshot when available)."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / counterexample_name(term, verdict)
    header = f"# verdict={kind(verdict)}"
    if note:
        header += f" {note}"
    lines = [header, to_str(term)]
    if isinstance(verdict, Mismatch):
        lines.insert(1, f"# engine={to_str(verdict.engine_term)}")
        lines.insert(2, f"# oracle={to_str(verdict.oracle_term)}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    snapshot = getattr(verdict, "snapshot", None)
    if snapshot:
        path.with_suffix(".net").write_text(snapshot + "\n", encoding="utf-8")
    return path


def load_counterexample(path) -> tuple:
    """Return ``(term, metadata)`` from a counterexample file."""
    meta = {}
    body = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if line.startswith("#"):
            for item in line[1:].split():
                if "=" in item:
                    k, v = item.split("=", 1)
                    meta.setdefault(k, v)
        elif line.strip():
            body.append(line)
    return parse(" ".join(body)), meta


# --------------------------------------------------------------------------
# fuzzing

@dataclass
class FuzzReport:
    seed: int
    cases: int
    max_size: int
    engine_fuel: int
    oracle_fuel: int
    counts: dict = field(default_factory=lambda: dict.fromkeys(VERDICT_KINDS, 0))
    files: list = field(default_factory=list)
    duration: float = 0.0

    @property
    def failures(self):
        return sum(self.counts[k] for k in FAILURES)

    def to_text(self, timing=True) -> str:
        lines = [
            f"seed: {self.seed}",
            f"cases: {self.cases}",
            f"max_size: {self.max_size}",
            f"engine_fuel: {self.engine_fuel}",
            f"oracle_fuel: {self.oracle_fuel}",
        ]
        lines += [f"count.{k}: {self.counts[k]}" for k in VERDICT_KINDS]
        lines.append("counterexamples: " + (", ".join(sorted(self.files)) or "none"))
        if timing:
            lines.append(f"duration_s: {self.duration:.3f}")
        return "\n".join(lines)


def fuzz(seed: int, cases: int, max_size: int = 25,
         engine_fuel: int = DEFAULT_ENGINE_FUEL,
         oracle_fuel: int = DEFAULT_ORACLE_FUEL,
         save_dir="counterexamples") -> FuzzReport:
    """Compare engine and oracle on ``cases`` random closed terms.

    Case ``i`` uses the term generated from seed ``seed + i``.
    """
    if cases < 1:
        raise ValueError("cases must be at least 1")
    report = FuzzReport(seed, cases, max_size, engine_fuel, oracle_fuel)
    start = time.perf_counter()
    for i in range(cases):
        case_seed = seed + i
        term = gen_random_term(case_seed, max_size)
        verdict = run_case(term, engine_fuel, oracle_fuel, save_dir=save_dir,
                           note=f"seed={case_seed} fuzz_seed={seed} case={i}")
        k = kind(verdict)
        report.counts[k] += 1
        if save_dir is not None and k in FAILURES:
            report.files.append(counterexample_name(term, verdict))
    report.files.sort()
    report.duration = time.perf_counter() - start
    return report
