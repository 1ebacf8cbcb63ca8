"""The thirteen acceptance criteria, one test each.

Every criterion prints a single PASS/FAIL line; the lines are repeated in
the terminal summary.  Run standalone with ``python tests/test_acceptance.py``.
"""

import json

import pytest

from forge.acceptance import CHECKS, run_check

LINES = []


def _line(res):
    return f"{'PASS' if res['passed'] else 'FAIL'}  criterion {res['number']:>2}  {res['title']}  ({res['seconds']}s)"


@pytest.mark.parametrize("number", sorted(CHECKS))
def test_criterion(number):
    res = run_check(number)
    line = _line(res)
    LINES.append(line)
    print(line)
    assert res["passed"], json.dumps(res["detail"], default=str)[:2000]


if __name__ == "__main__":
    import sys
    results = [run_check(n) for n in sorted(CHECKS)]
    for r in results:
        print(_line(r))
    sys.exit(0 if all(r["passed"] for r in results) else 1)
