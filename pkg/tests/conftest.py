import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from courant.presentations import (CourantPresentation,
                                   LieAlgebraPresentation,
                                   LieBialgebraPresentation,
                                   cartan_three_form, drinfeld_double,
                                   quadratic_lie_algebra, sl2, so3,
                                   twisted_dorfman)
from courant.scalars import FIELD_Q

IDENT3 = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture
def so3_presentation():
    return quadratic_lie_algebra(so3(FIELD_Q), IDENT3)


@pytest.fixture
def abelian2_presentation():
    return CourantPresentation(FIELD_Q, (), 2, [[1, 0], [0, -1]], {}, {})


@pytest.fixture
def abelian4_presentation():
    split = [[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]]
    return CourantPresentation(FIELD_Q, (), 4, split, {}, {})


@pytest.fixture
def sl2_double_presentation():
    mu = {0: {(0, 1): Fraction(1, 2)}, 2: {(1, 2): Fraction(-1, 2)}}
    return drinfeld_double(LieBialgebraPresentation(sl2(FIELD_Q), mu))


@pytest.fixture
def split_double_presentation():
    """g + g for g = so(3) with the (+, -) block metric."""
    gg = LieAlgebraPresentation(6, {
        (0, 1): {2: 1}, (1, 2): {0: 1}, (2, 0): {1: 1},
        (3, 4): {5: 1}, (4, 5): {3: 1}, (5, 3): {4: 1},
    }, FIELD_Q)
    gmet = [[0] * 6 for _ in range(6)]
    for i in range(3):
        gmet[i][i] = 1
        gmet[3 + i][3 + i] = -1
    return quadratic_lie_algebra(gg, gmet)


@pytest.fixture
def twisted_so3_presentation():
    algebra = so3(FIELD_Q)
    return twisted_dorfman(algebra, cartan_three_form(algebra, IDENT3))
