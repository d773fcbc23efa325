import numpy as np
import pytest

from romanesco.automaton import CARule
from romanesco.codes import build_plane, build_torus, clifford_deform, rotate_180

RULE102 = CARule(2, ((0, 0), (1, 0), (0, 1)))
# [[72,12,4]] on 6x6, [[162,10,6]] on 9x9
RULE_K12 = CARule(3, ((0, 0), (0, 2), (1, 1), (2, 1)))
# [[72,16,4]] on 6x6, [[162,22,6]] on 9x9
RULE_K16 = CARule(3, ((0, 0), (0, 1), (1, 0), (1, 2)))
BOWTIE = CARule(3, ((1, 0), (1, 1), (2, 1), (0, 2)))


def torus(rule, H, L, deformed=True):
    code = build_torus(rule, rotate_180(rule), H, L)
    return clifford_deform(code) if deformed else code


@pytest.fixture(scope="session")
def code18():
    return torus(RULE102, 3, 3)


@pytest.fixture(scope="session")
def code72():
    return torus(RULE_K12, 6, 6)


@pytest.fixture(scope="session")
def plane34():
    return clifford_deform(build_plane(BOWTIE, rotate_180(BOWTIE), 5))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
