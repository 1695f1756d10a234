from fractions import Fraction

import pytest

from treeapprox import validate_metric


def F(x):
    return Fraction(x)


def space(labels, rows):
    return validate_metric(labels, [[F(x) for x in row] for row in rows])


@pytest.fixture
def x2():
    from treeapprox import gen_binary_leaves

    return gen_binary_leaves(2)


@pytest.fixture
def c4():
    from treeapprox import gen_cycle

    return gen_cycle(4)


@pytest.fixture
def tripod():
    # leaves of a tripod with arm lengths 1, 2, 3
    return space(
        ["x1", "x2", "x3"],
        [[0, 3, 4], [3, 0, 5], [4, 5, 0]],
    )


@pytest.fixture
def path_abc():
    # three collinear points: b between a and c
    return space(["a", "b", "c"], [[0, 1, 2], [1, 0, 1], [2, 1, 0]])
