from __future__ import annotations

import pytest

from siteselect.model import validate_snapshot
from siteselect.synth import generate_synthetic

from oracles import bottom_up_sums


def test_same_seed_twice_is_byte_identical(tmp_path):
    a_dir, b_dir = tmp_path / "a", tmp_path / "b"
    generate_synthetic([1, 2, 4], factors=2, timepoints=3, seed=7).write(a_dir)
    generate_synthetic([1, 2, 4], factors=2, timepoints=3, seed=7).write(b_dir)
    for name in ("manifest.json", "sites.csv", "factors.csv", "values.csv", "geometries.geojson"):
        assert (a_dir / name).read_bytes() == (b_dir / name).read_bytes()


def test_different_seeds_differ(tmp_path):
    a = generate_synthetic([1, 2, 4], factors=1, timepoints=1, seed=1)
    b = generate_synthetic([1, 2, 4], factors=1, timepoints=1, seed=2)
    assert [v.value for v in a.values] != [v.value for v in b.values]


@pytest.mark.parametrize("seed", range(5))
def test_output_always_validates_clean(seed):
    bundle = generate_synthetic([1, 3, 6], factors=3, timepoints=2, seed=seed, missing_rate=0.2)
    report = validate_snapshot(
        bundle.sites, bundle.factors, bundle.values, geometries=bundle.geometries, levels=bundle.levels
    )
    assert report == []


def test_sum_factor_parents_equal_recomputed_leaf_sums():
    bundle = generate_synthetic([2, 4, 8, 16], factors=2, timepoints=2, seed=13)
    stored = {(v.site_id, v.factor_id, v.t): v.value for v in bundle.values}
    for t in bundle.timepoints:
        expected = bottom_up_sums(bundle.sites, bundle.values, "factor_0", t)
        for site in bundle.sites:
            assert stored[(site.id, "factor_0", t)] == expected[site.id]


def test_balanced_tree_shape():
    bundle = generate_synthetic([1, 2, 4], factors=1, timepoints=1, seed=3)
    by_level = {}
    for site in bundle.sites:
        by_level.setdefault(site.level.ordinal, []).append(site)
    assert [len(by_level[i]) for i in range(3)] == [1, 2, 4]
    parents_of_leaves = {s.parent_id for s in by_level[2]}
    assert len(parents_of_leaves) == 2  # evenly spread, 2 leaves per mid node


def test_rejects_bad_parameters():
    with pytest.raises(ValueError):
        generate_synthetic([], factors=1, timepoints=1, seed=0)
    with pytest.raises(ValueError):
        generate_synthetic([1, 0], factors=1, timepoints=1, seed=0)
    with pytest.raises(ValueError):
        generate_synthetic([1], factors=0, timepoints=1, seed=0)
    with pytest.raises(ValueError):
        generate_synthetic([1], factors=1, timepoints=1, seed=0, missing_rate=1.5)
