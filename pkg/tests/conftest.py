from fractions import Fraction

import pytest

from tensoreig.tensor_core import Form, HomogeneousMap, multi_indices


def random_map(rng, n, m, kind="rational"):
    """Dense random homogeneous map; small rationals, Gaussian floats or complex."""
    table = {}
    for j in range(n):
        for e in multi_indices(n, m):
            if kind == "rational":
                table[(j, e)] = Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 6)))
            elif kind == "float":
                table[(j, e)] = float(rng.standard_normal())
            else:
                table[(j, e)] = complex(rng.standard_normal(), rng.standard_normal())
    if not any(table.values()):
        table[(0, multi_indices(n, m)[0])] = Fraction(1)
    return HomogeneousMap(n, m, table)


def random_form(rng, n, d):
    terms = {e: Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 6))) for e in multi_indices(n, d)}
    if not any(terms.values()):
        terms[multi_indices(n, d)[0]] = Fraction(1)
    return Form(n, d, terms)


@pytest.fixture
def xyz():
    return Form(3, 3, {(1, 1, 1): 1})


@pytest.fixture
def sphere_sum():
    # (x1^2 + x2^2 + x3^2)(x1 + x2 + x3)
    terms = {}
    for i in range(3):
        for k in range(3):
            e = [0, 0, 0]
            e[i] += 2
            e[k] += 1
            terms[tuple(e)] = terms.get(tuple(e), 0) + 1
    return Form(3, 3, terms)


@pytest.fixture
def squares():
    return HomogeneousMap(2, 2, {(0, (2, 0)): 1, (1, (0, 2)): 1})


# criterion number -> (verdict line); filled by the acceptance tests
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[k])
