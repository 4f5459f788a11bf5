from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
import sympy

from spircap.patterns import EAVESDROPPING, Pattern, incidence_matrix, join_patterns
from spircap.protocol import plan_scheme
from spircap.field import PrimeField

EXAMPLE_PC = [[1, 2], [1, 4], [2, 4], [3, 4], [5]]
EXAMPLE_PE = [[1, 2, 3], [2, 4], [5]]


def _best_vertex(g, h, c, maximize):
    """Enumerate all basic feasible points of ``g x <= h`` and optimize ``c x``.

    Independent of the simplex code: every square subsystem is solved with
    sympy's exact rational linear algebra.
    """
    g = sympy.Matrix(g)
    h = sympy.Matrix(h)
    n = g.shape[1]
    best = None
    for rows in combinations(range(g.shape[0]), n):
        sub = g.extract(list(rows), list(range(n)))
        if sub.det() == 0:
            continue
        x = sub.LUsolve(h.extract(list(rows), [0]))
        if all(v <= 0 for v in (g * x - h)):
            val = sum(ci * xi for ci, xi in zip(c, x))
            if best is None or (val > best if maximize else val < best):
                best = val
    return None if best is None else Fraction(int(best.p), int(best.q))


def lp1_oracle(b):
    b = np.asarray(b)
    n, m = b.shape
    g = [list(map(int, b[:, j])) for j in range(m)] + [[-1 if i == k else 0 for i in range(n)] for k in range(n)]
    h = [1] * m + [0] * n
    return _best_vertex(g, h, [1] * n, True)


def lp2_oracle(b):
    b = np.asarray(b)
    n, m = b.shape
    g = [[-int(v) for v in b[i, :]] for i in range(n)] + [[-1 if j == k else 0 for j in range(m)] for k in range(m)]
    h = [-1] * n + [0] * m
    return _best_vertex(g, h, [1] * m, False)


def brute_maximal(sets):
    uniq = {tuple(sorted(set(s))) for s in sets}
    return sorted(s for s in uniq if not any(set(s) < set(t) for t in uniq))


@pytest.fixture
def example_patterns():
    pc = Pattern.from_sets(5, EXAMPLE_PC)
    pe = Pattern.from_sets(5, EXAMPLE_PE, EAVESDROPPING)
    return pc, pe


@pytest.fixture
def example_joint(example_patterns):
    return join_patterns(*example_patterns)


@pytest.fixture
def example_params(example_joint):
    y = [Fraction(1, 3), Fraction(1, 3), Fraction(1, 3), Fraction(2, 3), Fraction(1)]
    return plan_scheme(y, Fraction(8, 3), 3, example_joint)


@pytest.fixture(params=[2, 3], ids=["GF2", "GF3"])
def micro_params(request):
    joint = Pattern.singletons(2, "joint")
    return plan_scheme([1, 1], 2, 2, joint, PrimeField(request.param))


@pytest.fixture
def example_matrix(example_joint):
    return incidence_matrix(example_joint)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("tests.test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
