import pytest

import oracles
from dimspec.errors import CapExceeded, ConfigError
from dimspec.families import ContractionFamily
from dimspec.perturbation import increment
from dimspec.solver import solve_dimension
from dimspec.spectrum import DEPTH_CAP, branch_increment, code_dimension, expand_spectrum

SQEXP = ContractionFamily.square_exponent()


def test_depth_four_cloud_hits_known_subsets():
    cloud = expand_spectrum(SQEXP, 4)
    by_word = {p.word: p.interval.mid for p in cloud.points}
    assert by_word["1100"] == pytest.approx(oracles.SQEXP_12, abs=1e-9)
    assert by_word["1101"] == pytest.approx(oracles.SQEXP_124, abs=1e-9)
    assert by_word["1110"] == pytest.approx(oracles.SQEXP_123, abs=1e-9)
    assert len(cloud.points) == 4


def test_cloud_points_sorted_by_value():
    cloud = expand_spectrum(SQEXP, 5)
    mids = cloud.midpoints()
    assert mids == sorted(mids)
    words = [p.word for p in cloud.points]
    assert all(w.startswith("11") and len(w) == 5 for w in words)
    assert len(set(words)) == 8


def test_base_dimension_matches_direct_solve():
    cloud = expand_spectrum(SQEXP, 4)
    direct = solve_dimension(SQEXP, (1, 2), tol=cloud.base_dimension.width_budget)
    assert cloud.base_dimension.mid == pytest.approx(direct.mid, abs=1e-12)


def test_covering_radius_shrinks_with_depth():
    r = [expand_spectrum(SQEXP, d).covering_radius() for d in (4, 5, 6)]
    assert r[0] > r[1] > r[2] > 0


def test_spacing_constant_is_stable_in_depth(cloud_cache):
    c6 = cloud_cache.cloud("square-exponent", 6).spacing_constant
    c10 = cloud_cache.cloud("square-exponent", 10).spacing_constant
    assert 0.5 < c6 / c10 < 2.0


def test_workers_do_not_change_results():
    one = expand_spectrum(SQEXP, 6, workers=1)
    four = expand_spectrum(SQEXP, 6, workers=4)
    assert one.midpoints() == four.midpoints()
    assert [p.word for p in one.points] == [p.word for p in four.points]


def test_depth_and_base_validation():
    with pytest.raises(CapExceeded):
        expand_spectrum(SQEXP, DEPTH_CAP + 1)
    with pytest.raises(ConfigError):
        expand_spectrum(SQEXP, 4, base_symbols=())
    with pytest.raises(ConfigError):
        expand_spectrum(SQEXP, 2, base_symbols=(1, 2, 5))


def test_code_dimension_equals_subset_solve():
    a = code_dimension(SQEXP, "11")
    b = solve_dimension(SQEXP, (1, 2))
    assert (a.lo, a.hi) == (b.lo, b.hi)


def test_branch_increment_example():
    bi = branch_increment(SQEXP, "11")
    assert bi.enclosure[0] > 0
    assert bi.enclosure[0] <= bi.child1.mid - bi.child0.mid <= bi.enclosure[1]
    assert 0.3 < bi.ratio < 1.5


def test_branch_increment_agrees_with_subset_increment():
    # the two children of "11" differ exactly by adjoining symbol 3
    bi = branch_increment(SQEXP, "11")
    (lo, hi), d0, d1 = increment(SQEXP, (1, 2), 3)
    assert max(lo, bi.enclosure[0]) <= min(hi, bi.enclosure[1])
    assert d0.mid == pytest.approx(bi.child0.mid, abs=1e-9)
    assert d1.mid == pytest.approx(bi.child1.mid, abs=1e-9)


def test_geometric_cloud_is_coarser_than_square_exponent(cloud_cache):
    geo = expand_spectrum(ContractionFamily.geometric(), 6)
    sq = cloud_cache.cloud("square-exponent", 6)
    geo_span = max(geo.midpoints()) - min(geo.midpoints())
    sq_span = max(sq.midpoints()) - min(sq.midpoints())
    assert geo_span > sq_span
