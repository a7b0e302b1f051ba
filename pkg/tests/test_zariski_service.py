"""
Tests for Zariski decompositions, the chamber walk and the subset oracle
"""
import random
from fractions import Fraction

import pytest

from app.exceptions import NotBig, NotPseudoEffective
from app.models.numbers import QuadNum
from app.models.surface import FlagData
from app.services.verification_service import random_big_divisor
from app.services.zariski_service import ZariskiService


def test_nef_class_has_no_negative_part(bl2p2):
    decomposition = ZariskiService.zariski_decompose(bl2p2, [3, -2, 0])
    assert decomposition.N == {}
    assert decomposition.P == [3, -2, 0]


def test_f1_negative_part(f1):
    decomposition = ZariskiService.zariski_decompose(f1, [1, 1])
    assert decomposition.N == {'E': Fraction(1)}
    assert decomposition.P == [1, 0]


def test_bl2p2_two_curve_support(bl2p2):
    # H + E1 + E2: both exceptional curves split off
    decomposition = ZariskiService.zariski_decompose(bl2p2, [1, 1, 1])
    assert decomposition.N == {'E1': Fraction(1), 'E2': Fraction(1)}
    assert decomposition.P == [1, 0, 0]


def test_boundary_class_matches_oracle(bl2p2):
    # D = 2 L12 + E1 lies on a facet of the effective cone
    D = [2, -1, -2]
    decomposition = ZariskiService.zariski_decompose(bl2p2, D)
    oracle = ZariskiService.brute_force_decompositions(bl2p2, D)
    assert len(oracle) == 1
    assert decomposition.N == oracle[0].N
    assert decomposition.P == oracle[0].P


def test_not_pseudo_effective(f1):
    with pytest.raises(NotPseudoEffective):
        ZariskiService.zariski_decompose(f1, [0, -1])


def test_nu(f1):
    flag = FlagData(curve=[0, 1])
    assert ZariskiService.nu(f1, [2, 0], flag) == 0
    assert ZariskiService.nu(f1, [1, 2], flag) == 2
    assert ZariskiService.nu(f1, [1, 1], flag) == 1
    assert ZariskiService.nu(f1, [1, 1], FlagData(curve=[1, -1])) == 0


@pytest.mark.parametrize('fixture', ['f1', 'bl2p2', 'p2', 'p1xp1'])
def test_matches_subset_oracle(fixture, request):
    S = request.getfixturevalue(fixture)
    rng = random.Random(11)
    for _ in range(25):
        D = random_big_divisor(S, rng)
        decomposition = ZariskiService.zariski_decompose(S, D)
        oracle = ZariskiService.brute_force_decompositions(S, D)
        assert len(oracle) == 1
        assert oracle[0].N == decomposition.N
        assert oracle[0].P == decomposition.P


# ==================== Walk ====================

def test_walk_f1_fiber(f1):
    walk = ZariskiService.segment_walk(f1, [2, 0], FlagData(curve=[1, -1], multiplicities={'E': 1}))
    assert walk.nu == 0
    assert walk.mu == QuadNum(2)
    assert len(walk.pieces) == 1
    piece = walk.pieces[0]
    assert piece.A == {'E': Fraction(0)}
    assert piece.B == {'E': Fraction(1)}
    assert walk.negative_part(1) == {'E': QuadNum(1)}


def test_walk_bl2p2_breakpoint(bl2p2):
    walk = ZariskiService.segment_walk(bl2p2, [3, -2, 0], FlagData(curve=[1, -1, 0]))
    assert walk.mu == QuadNum(3)
    assert walk.breakpoints == [QuadNum(0), QuadNum(2), QuadNum(3)]
    assert walk.pieces[0].support == []
    assert walk.pieces[1].support == ['E1']
    assert walk.negative_part(Fraction(5, 2)) == {'E1': QuadNum(Fraction(1, 2))}


def test_walk_is_monotone(bl2p2):
    rng = random.Random(5)
    flag = FlagData(curve=[1, -1, 0])
    for _ in range(20):
        D = random_big_divisor(bl2p2, rng)
        walk = ZariskiService.segment_walk(bl2p2, D, flag)
        previous = {}
        for piece in walk.pieces:
            assert all(b >= 0 for b in piece.B.values())
            for name, value in previous.items():
                assert piece.coefficient(name, piece.t_lo) >= value
            previous = {name: piece.coefficient(name, piece.t_hi) for name in piece.support}


def test_walk_requires_big(f1):
    with pytest.raises(NotBig):
        ZariskiService.segment_walk(f1, [1, -1], FlagData(curve=[1, -1]))
