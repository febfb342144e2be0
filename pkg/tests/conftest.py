from fractions import Fraction
from itertools import permutations

import pytest

from homing.machine import Guard


def naive_accepts(machine, word):
    """Recursive-descent simulation on plain Fraction lists: no deduplication,
    no budgets, no use of the library's vector arithmetic."""
    home = list(machine.initial_vector.entries)
    table = {}
    for t in machine.transitions:
        table.setdefault((t.source, t.symbol), []).append(t)

    def go(state, vec, i):
        if i == len(word):
            return state in machine.accept_states and vec == home
        at_home = vec == home
        for t in table.get((state, word[i]), []):
            if t.guard is Guard.EQ and not at_home or t.guard is Guard.NEQ and at_home:
                continue
            rows = t.matrix.rows
            nxt = [sum((vec[r] * rows[r][c] for r in range(len(vec))), Fraction(0)) for c in range(len(vec))]
            if go(t.target, nxt, i + 1):
                return True
        return False

    return go(machine.initial_state, home, 0)


def leibniz_det(rows):
    """Determinant by the permutation expansion; independent of elimination."""
    n = len(rows)
    total = Fraction(0)
    for perm in permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = Fraction(-1) ** inversions
        for i in range(n):
            term *= rows[i][perm[i]]
        total += term
    return total


# -- acceptance criteria report --------------------------------------------

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if rep.when == "call" or rep.failed:
        key = marker.args
        previous = _criteria.get(key, "passed")
        _criteria[key] = "failed" if rep.failed or previous == "failed" else rep.outcome


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for (number, title), outcome in sorted(_criteria.items()):
        flag = "PASS" if outcome == "passed" else outcome.upper()
        terminalreporter.write_line(f"{flag:6} criterion {number:2}: {title}")
