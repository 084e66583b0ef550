"""Runs the full acceptance battery once and reports one line per criterion."""
from __future__ import annotations

import pytest

from scl.suite import CRITERIA, SUITE_LIMIT, run_suite

NUMBERS = [c.number for c in CRITERIA] + [14]


@pytest.fixture(scope="module")
def results(request):
    res = {r.number: r for r in run_suite()}
    tr = request.config.pluginmanager.get_plugin("terminalreporter")
    lines = [r.line() for r in res.values()]
    if tr is not None:
        tr.write_line("")
        for line in lines:
            tr.write_line(line)
    else:
        print("\n".join(lines))
    return res


@pytest.mark.parametrize("number", NUMBERS)
def test_criterion(results, number):
    r = results[number]
    print(r.line())
    assert r.passed, r.line()


def test_battery_time_limit_is_five_minutes():
    assert SUITE_LIMIT == 300.0
