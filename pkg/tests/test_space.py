"""Exact geometry/spectrum invariants."""

import math
import random
from fractions import Fraction

import pytest

from oddsphere.space import (
    build_space,
    eigenvalue,
    flow_period,
    format_rational,
    harmonic_dim,
    parse_rational,
    parse_space_config,
    space_from_config,
)


def test_build_space_examples():
    sp = build_space([3], [1])
    assert sp.d == 3 and sp.r == 1
    assert sp.s == Fraction(3)
    assert sp.p0 == Fraction(22, 3)

    sp2 = build_space([3, 5], [1, 1])
    assert sp2.d == 8 and sp2.r == 2
    assert sp2.s == Fraction(3)  # max(3, 5/2)
    assert sp2.p0 == Fraction(14, 3)


@pytest.mark.parametrize("dims", [[4], [2], [1], [3, 6]])
def test_build_space_rejects_bad_dimensions(dims):
    with pytest.raises(ValueError):
        build_space(dims)


def test_build_space_rejects_bad_betas():
    with pytest.raises(ValueError):
        build_space([3], [0])
    with pytest.raises(ValueError):
        build_space([3], [Fraction(-1, 2)])
    with pytest.raises(ValueError):
        build_space([3, 3], [1])  # length mismatch


def test_eigenvalue_examples():
    sp = build_space([3], [1])
    assert eigenvalue(sp, (2,)) == Fraction(-8)
    assert eigenvalue(sp, (0,)) == 0
    mixed = build_space([3, 3], [1, Fraction(2, 3)])
    assert eigenvalue(mixed, (1, 2)) == Fraction(-15)
    assert eigenvalue(mixed, (0, 0)) == 0


def test_eigenvalue_strictly_decreasing_in_each_coordinate():
    sp = build_space([3, 5, 7], [1, Fraction(2, 3), Fraction(5, 4)])
    rng = random.Random(7)
    for _ in range(50):
        idx = tuple(rng.randrange(0, 30) for _ in range(3))
        for j in range(3):
            bumped = list(idx)
            bumped[j] += 1
            assert eigenvalue(sp, bumped) < eigenvalue(sp, idx)


def test_eigenvalue_validates_index():
    sp = build_space([3, 3])
    with pytest.raises(ValueError):
        eigenvalue(sp, (1,))
    with pytest.raises(ValueError):
        eigenvalue(sp, (1, -1))


def test_harmonic_dim_examples_and_closed_form():
    assert harmonic_dim(3, 0) == 1
    assert harmonic_dim(3, 1) == 4
    assert harmonic_dim(3, 2) == 9
    # closed form on the 3-sphere: (n+1)^2
    for n in range(200):
        assert harmonic_dim(3, n) == (n + 1) ** 2
    # classical 2-sphere count as a cross-check of the binomial difference
    for n in range(50):
        assert harmonic_dim(2, n) == 2 * n + 1


@pytest.mark.parametrize("dim", [3, 5, 7, 9])
def test_harmonic_dim_is_polynomial_of_degree_dim_minus_one(dim):
    # (dim)-th forward difference vanishes once n >= 2
    vals = [harmonic_dim(dim, n) for n in range(2, 2 + dim + 8)]
    diffs = vals
    for _ in range(dim):
        diffs = [b - a for a, b in zip(diffs, diffs[1:])]
    assert all(v == 0 for v in diffs)
    # degree is exactly dim-1: the (dim-1)-th difference is a nonzero constant
    diffs = vals
    for _ in range(dim - 1):
        diffs = [b - a for a, b in zip(diffs, diffs[1:])]
    assert len(set(diffs)) == 1 and diffs[0] != 0


def test_flow_period_examples():
    assert flow_period(build_space([3], [1])) == 1
    assert flow_period(build_space([3, 3], [1, Fraction(2, 3)])) == 2
    assert flow_period(build_space([5], [Fraction(1, 2)])) == 1


def test_flow_period_closes_every_phase():
    sp = build_space([3, 5, 3], [Fraction(3, 7), Fraction(2, 3), 2])
    T = flow_period(sp)
    rng = random.Random(11)
    for _ in range(100):
        a = tuple(rng.randrange(0, 40) for _ in range(3))
        b = tuple(rng.randrange(0, 40) for _ in range(3))
        gap = eigenvalue(sp, a) - eigenvalue(sp, b)
        assert (T * gap).denominator == 1


def test_s_factor_decreases_with_dimension():
    last = None
    for dim in (3, 5, 7, 9, 11):
        s = build_space([dim]).s
        assert s == Fraction(2 * dim, dim - 1)
        if last is not None:
            assert s < last
        last = s


def test_rational_serialization_round_trip():
    for text in ("3", "-5", "2/3", "-7/4"):
        assert format_rational(parse_rational(text)) == text
    assert parse_rational("4/6") == Fraction(2, 3)


def test_parse_space_config():
    cfg = parse_space_config("dims = 3,5\nbetas = 1,2/3\n# comment\n")
    sp = space_from_config(cfg)
    assert sp.dims == (3, 5)
    assert sp.betas == (Fraction(1), Fraction(2, 3))


def test_parse_space_config_errors():
    with pytest.raises(ValueError, match="line 1"):
        parse_space_config("not a config")
    with pytest.raises(ValueError, match="line 2"):
        parse_space_config("dims = 3\n= 5")
    with pytest.raises(ValueError):
        space_from_config(parse_space_config("betas = 1"))
    with pytest.raises(ValueError):
        space_from_config(parse_space_config("dims = 3\nbetas = 1,"))
    with pytest.raises(ValueError, match="unknown"):
        space_from_config(parse_space_config("dims = 3\nwhat = 5"), allow_extra=False)


def test_describe_and_str():
    sp = build_space([3, 5], [1, Fraction(2, 3)])
    info = sp.describe()
    assert info["s"] == "3" and info["p0"] == "14/3"
    assert "S^5[beta=2/3]" in str(sp)
    # 1/beta = 3/2 for the second factor, so phases close after two turns
    assert math.isclose(sp.period_seconds, 2 * math.pi * 2)
