from hypothesis import strategies as st

from fanmatch.terms import App, Lam, Var

_ACCEPTANCE_LINES = []


def record(line):
    """Print an acceptance verdict line and keep it for the session summary."""
    print(line)
    _ACCEPTANCE_LINES.append(line)


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


NAMES = ["x", "y", "z", "f"]


def _extend(children):
    return st.one_of(
        st.builds(Lam, st.sampled_from(NAMES), children),
        st.builds(App, children, children),
    )


# open terms over a small alphabet, so shadowing and capture both occur
terms = st.recursive(st.builds(Var, st.sampled_from(NAMES)), _extend, max_leaves=12)
