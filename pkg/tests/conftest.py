import pytest

from redistrict import validate_instance


@pytest.fixture
def t1():
    """Two students in opposite groups, two fully accessible schools."""
    return validate_instance(
        values=[5, 3], groups=[1, 2], accessible=[[0, 1], [0, 1]], initial=[0, 1]
    )


@pytest.fixture
def t2():
    """Unequal group sizes: one group-1 student, two group-2 students."""
    return validate_instance(
        values=[5, 3], groups=[1, 2, 2], accessible=[[0, 1], [0, 1], [0, 1]], initial=[0, 0, 1]
    )


@pytest.fixture
def t3():
    """Swap-blocked: each student can only reach their own school."""
    return validate_instance(values=[5, 3], groups=[1, 2], accessible=[[0], [1]], initial=[0, 1])
