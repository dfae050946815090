import pytest

from cfp import compute_cn, ewens, power_law, table

from helpers import RATIONAL_TABLE_10


def family_set():
    """The six standard test families (table defines a_1..a_10 only)."""
    return {
        "ewens1": ewens(1),
        "ewens2": ewens(2),
        "pl1": power_law(1),
        "pl2": power_law(2),
        "pl3": power_law(3),
        "table10": table(RATIONAL_TABLE_10),
    }


@pytest.fixture(scope="session")
def families():
    return family_set()


@pytest.fixture(scope="session")
def seq_pl1_long():
    # shared by the asymptotic, ratio-law and acceptance tests
    return compute_cn(power_law(1), 4001)


@pytest.fixture(scope="session")
def seq_pl2_long():
    return compute_cn(power_law(2), 4001)
