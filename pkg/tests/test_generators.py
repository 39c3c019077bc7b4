"""Generator tests with combinatorial count oracles.

Interval-union counts are checked against the closed form
sum_j C(n+1, 2j): rows with at most k maximal 1-runs are in bijection with
even-sized subsets of n+1 gap positions.
"""

import math

import pytest

from vccompress import ConfigError, vc_dimension
from vccompress.generators import (
    full_cube,
    halfspaces_grid,
    intervals,
    k_interval_unions,
    make_concept_class,
    random_vc_capped,
)


def union_count_oracle(n, k):
    return sum(math.comb(n + 1, 2 * j) for j in range(k + 1))


@pytest.mark.parametrize("n", [1, 2, 5, 10])
def test_interval_count_matches_closed_form(n):
    c = intervals(n)
    assert len(c.rows) == n * (n + 1) // 2 + 1
    assert c.domain_size == n


def test_interval_vc_dimension_is_two():
    assert vc_dimension(intervals(10)) == 2
    assert vc_dimension(intervals(2)) == 2
    assert vc_dimension(intervals(1)) == 1


@pytest.mark.parametrize(
    "n,k,count",
    [(5, 2, 31), (8, 2, 163), (10, 2, 386)],
)
def test_union_counts_frozen_values(n, k, count):
    c = k_interval_unions(n, k)
    assert len(c.rows) == count
    assert count == union_count_oracle(n, k)


@pytest.mark.parametrize("n", range(1, 9))
@pytest.mark.parametrize("k", [1, 2, 3])
def test_union_counts_match_oracle(n, k):
    assert len(k_interval_unions(n, k).rows) == union_count_oracle(n, k)


def test_union_vc_dimension_is_twice_k():
    assert vc_dimension(k_interval_unions(8, 2)) == 4
    assert vc_dimension(k_interval_unions(6, 1)) == 2


def test_union_guard():
    with pytest.raises(ValueError):
        k_interval_unions(17, 2)


def test_full_cube_shatters_everything():
    c = full_cube(3)
    assert len(c.rows) == 8
    assert vc_dimension(c) == 3
    with pytest.raises(ValueError):
        full_cube(13)


def test_halfspaces_grid_properties():
    c = halfspaces_grid(4, 2, count=64, seed=3)
    assert c.domain_size == 16
    assert len(set(c.rows)) == len(c.rows)
    assert vc_dimension(c) <= 3
    again = halfspaces_grid(4, 2, count=64, seed=3)
    assert c == again
    assert halfspaces_grid(4, 2, count=64, seed=4) != c


def test_random_vc_capped_respects_the_cap():
    c = random_vc_capped(7, 2, 24, seed=5)
    assert vc_dimension(c) <= 2
    assert 1 <= len(c.rows) <= 24
    assert c == random_vc_capped(7, 2, 24, seed=5)


def test_random_vc_capped_singleton():
    c = random_vc_capped(6, 0, 1, seed=1)
    assert len(c.rows) == 1
    assert vc_dimension(c) == 0


def test_make_concept_class_dispatch(tmp_path):
    c = make_concept_class({"kind": "intervals", "n": 5})
    assert c == intervals(5)
    path = tmp_path / "class.txt"
    path.write_text("2 2\n01\n10\n")
    assert make_concept_class({"kind": "file", "path": str(path)}).domain_size == 2


@pytest.mark.parametrize(
    "spec",
    [
        {"n": 5},
        {"kind": "moebius", "n": 5},
        {"kind": "intervals"},
        {"kind": "intervals", "n": -2},
        {"kind": "intervals", "n": 5, "extra": 1},
    ],
)
def test_make_concept_class_rejects_bad_specs(spec):
    with pytest.raises(ConfigError):
        make_concept_class(spec)
