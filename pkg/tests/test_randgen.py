import pytest
from hypothesis import given, strategies as st

from fanmatch.randgen import gen_random_term
from fanmatch.terms import App, Lam, free_vars, size


@given(st.integers(0, 2**32), st.integers(2, 60))
def test_deterministic_closed_and_bounded(seed, max_size):
    t = gen_random_term(seed, max_size)
    assert t == gen_random_term(seed, max_size)
    assert free_vars(t) == ()
    assert size(t) <= max_size


def test_seed_1_size_25():
    assert size(gen_random_term(1, 25)) <= 25


def test_rejects_too_small():
    with pytest.raises(ValueError):
        gen_random_term(0, 1)


def test_redexes_are_common():
    def redexes(t):
        count, stack = 0, [t]
        while stack:
            u = stack.pop()
            if isinstance(u, App):
                count += isinstance(u.fun, Lam)
                stack += [u.fun, u.arg]
            elif isinstance(u, Lam):
                stack.append(u.body)
        return count

    with_redex = sum(redexes(gen_random_term(s, 25)) > 0 for s in range(200))
    assert with_redex > 100
