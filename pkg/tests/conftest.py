import pytest

from overpart import build_system

BATTERY = ((3, (1, 2)), (7, (1, 2, 4)), (9, (1, 3, 5)), (15, (1, 2, 4, 8)))


@pytest.fixture(scope="session")
def sys7():
    return build_system([1, 2, 4], 7)


@pytest.fixture(scope="session")
def sys3():
    return build_system([1, 2], 3)


@pytest.fixture(scope="session")
def sys9():
    return build_system([1, 3, 5], 9)


@pytest.fixture(scope="session")
def sys15():
    return build_system([1, 2, 4, 8], 15)


@pytest.fixture(scope="session")
def battery(sys3, sys7, sys9, sys15):
    return (sys3, sys7, sys9, sys15)


def gen_overpartitions(n, max_part=None):
    """Yield every overpartition of n as ((size, overlined), ...) tuples.

    Non-canonical placements (overline not first in an equal run, double
    overlines) are yielded too; consumers filter through validate().
    """
    if n == 0:
        yield ()
        return
    mp = min(n, max_part if max_part is not None else n)
    for size in range(mp, 0, -1):
        for rest in gen_overpartitions(n - size, size):
            yield ((size, False),) + rest
            yield ((size, True),) + rest
