import pytest
from hypothesis import given, settings, strategies as st

from fanmatch.harness import church
from fanmatch.oracle import (
    FuelExhausted, Normalized, normalize_by_substitution, normalize_normal_order,
)
from fanmatch.randgen import gen_random_term
from fanmatch.terms import App, alpha_eq, parse

from conftest import terms

OMEGA = parse(r"(\x.x x) (\x.x x)")


def test_identity_application():
    out = normalize_normal_order(parse(r"(\x.x) y"), 10)
    assert out == Normalized(parse("y"), 1)


def test_omega_runs_out_of_fuel():
    assert normalize_normal_order(OMEGA, 100) == FuelExhausted(100)


def test_exp_2_2():
    out = normalize_normal_order(App(church(2), church(2)), 100)
    assert alpha_eq(out.term, church(4))
    assert out.beta_steps == 6


@pytest.mark.parametrize("n, steps", [(2, 6), (3, 26), (4, 170)])
def test_self_exponent_step_counts(n, steps):
    out = normalize_normal_order(App(church(n), church(n)), 10_000)
    assert alpha_eq(out.term, church(n ** n))
    assert out.beta_steps == steps


def test_normal_order_discards_divergent_argument():
    out = normalize_normal_order(App(parse(r"\x.y"), OMEGA), 10)
    assert out == Normalized(parse("y"), 1)


def test_reduces_under_binders():
    out = normalize_normal_order(parse(r"\a. (\x.x) a"), 10)
    assert alpha_eq(out.term, parse(r"\a.a")) and out.beta_steps == 1


def test_no_capture():
    # (λx.λy.x) y must not become λy.y
    out = normalize_normal_order(parse(r"(\x.\y.x) y"), 10)
    assert alpha_eq(out.term, parse(r"\w.y"))


def test_fuel_must_be_positive():
    with pytest.raises(ValueError):
        normalize_normal_order(parse("x"), 0)


def test_large_output_does_not_recurse():
    out = normalize_normal_order(App(church(4), church(5)), 100_000)
    assert alpha_eq(out.term, church(5 ** 4))


@given(terms)
def test_idempotent(t):
    first = normalize_normal_order(t, 200)
    if isinstance(first, Normalized):
        again = normalize_normal_order(first.term, 200)
        assert again == Normalized(again.term, 0)
        assert alpha_eq(again.term, first.term)


@settings(max_examples=300)
@given(st.integers(0, 10**6))
def test_machine_agrees_with_textual_stepper(seed):
    t = gen_random_term(seed, 18)
    a = normalize_normal_order(t, 300)
    b = normalize_by_substitution(t, 300)
    assert type(a) is type(b)
    if isinstance(a, Normalized):
        assert a.beta_steps == b.beta_steps
        assert alpha_eq(a.term, b.term)
