import pytest

import genverify as gv

EXP1_DOMAIN = "d=[-3,-0.37];theta=[-0.03,0.17]"


@pytest.fixture
def exp1_partition():
    return gv.Partition(EXP1_DOMAIN, "20x20")
