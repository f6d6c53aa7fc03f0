from collections import Counter

import pytest

from indoortrip import (
    WorkloadSpec,
    bucket_categories,
    build_d2d_graph,
    build_workload,
    generate_queries,
    generate_venue,
    place_objects,
    replicate_dataset,
    save_objects_csv,
    save_venue,
    validate_venue,
)
from indoortrip.routing import save_queries
from indoortrip.venue import IndoorPoint


def test_single_room_venue_is_minimal_and_valid():
    spec = WorkloadSpec(floors=1, rooms_per_floor=1, categories=1,
                        count_range=(1, 1), query_count=1, query_categories=(1,))
    venue = generate_venue(spec)
    assert len(venue.partitions) == 1
    assert len(venue.doors) >= 1
    assert validate_venue(venue).ok


def test_default_venue_validates_and_connects():
    spec = WorkloadSpec(seed=1)
    venue = generate_venue(spec)
    assert validate_venue(venue).ok
    build_d2d_graph(venue)  # raises if disconnected
    kinds = Counter(p.kind for p in venue.partitions.values())
    assert kinds["room"] == spec.floors * spec.rooms_per_floor
    assert kinds["hallway"] == spec.floors
    assert kinds["stairs"] == spec.floors - 1


def test_same_seed_gives_byte_identical_files(tmp_path):
    for run in ("a", "b"):
        spec = WorkloadSpec(seed=99, categories=4, count_range=(3, 6), query_count=5,
                            query_categories=(2,))
        venue, points, queries = build_workload(spec)
        save_venue(venue, tmp_path / f"venue_{run}.json")
        save_objects_csv(points, tmp_path / f"objects_{run}.csv")
        save_queries(queries, tmp_path / f"queries_{run}.jsonl")
    for stem in ("venue", "objects", "queries"):
        files = sorted(tmp_path.glob(f"{stem}_*"))
        assert files[0].read_bytes() == files[1].read_bytes()


def test_object_counts_respect_range_and_bounds():
    spec = WorkloadSpec(seed=5, categories=6, count_range=(4, 9), query_count=1,
                        query_categories=(2,))
    venue = generate_venue(spec)
    points = place_objects(venue, spec)
    counts = Counter(p.category for p in points)
    assert set(counts) == set(range(6))
    for cat, n in counts.items():
        assert 4 <= n <= 9
    for p in points:
        part = venue.partitions[p.partition_id]
        assert part.kind == "room"
        assert part.contains(p.x, p.y, p.floor)
        assert p.static_score >= 0


def test_exact_range_bucket_yields_exact_count():
    spec = WorkloadSpec(seed=5, categories=3, count_range=(2, 2), query_count=1,
                        query_categories=(2,))
    venue = generate_venue(spec)
    points = place_objects(venue, spec)
    counts = Counter(p.category for p in points)
    assert all(n == 2 for n in counts.values())


def test_clustering_restricts_partitions_per_category():
    spec = WorkloadSpec(seed=8, categories=4, count_range=(12, 15), store_rooms=6,
                        hosts_per_category=2, query_count=1, query_categories=(2,))
    venue = generate_venue(spec)
    points = place_objects(venue, spec)
    for cat in range(4):
        parts = {p.partition_id for p in points if p.category == cat}
        assert len(parts) <= 2


def test_uniform_mode_spreads_over_many_rooms():
    spec = WorkloadSpec(seed=8, categories=2, count_range=(60, 60),
                        hosts_per_category=None, query_count=1, query_categories=(2,))
    venue = generate_venue(spec)
    points = place_objects(venue, spec)
    parts = {p.partition_id for p in points}
    assert len(parts) > 10


def test_bucket_boundaries_are_closed_and_reference_counts_map():
    def objs(cat, n):
        return [IndoorPoint(id=i + cat * 10_000, partition_id=0, x=0, y=0, floor=0,
                            category=cat, static_score=0.0) for i in range(n)]

    points = objs(0, 100) + objs(1, 500) + objs(2, 1000)
    buckets = bucket_categories(points, scale=1.0)
    assert buckets["XS"] == [0]
    assert buckets["S"] == [1]
    assert buckets["M"] == [2]
    # boundary: exactly at the upper edge of XS
    assert bucket_categories(objs(3, 120), scale=1.0)["XS"] == [3]
    assert bucket_categories([], scale=1.0) == {k: [] for k in ("XS", "S", "M", "L", "XL")}


def test_unbucketed_categories_are_left_out():
    pts = [IndoorPoint(id=i, partition_id=0, x=0, y=0, floor=0, category=0, static_score=0.0)
           for i in range(300)]
    buckets = bucket_categories(pts, scale=1.0)
    assert all(0 not in cats for cats in buckets.values())


def test_generate_queries_m_equal_to_pool_uses_every_category():
    spec = WorkloadSpec(seed=3, categories=3, count_range=(2, 4), query_count=6,
                        query_categories=(3,))
    venue, points, queries = build_workload(spec)
    for q in queries:
        assert sorted(q.categories) == [0, 1, 2]


def test_generate_queries_rejects_oversized_m():
    spec = WorkloadSpec(seed=3, categories=3, count_range=(2, 4), query_count=1,
                        query_categories=(2,))
    venue = generate_venue(spec)
    with pytest.raises(ValueError):
        generate_queries([0, 1], count=2, m=3, alpha=0.5, venue=venue, seed=0)


def test_generated_queries_are_feasible_and_in_bounds():
    spec = WorkloadSpec(seed=21, categories=5, count_range=(3, 7), query_count=20)
    venue, points, queries = build_workload(spec)
    live = {p.category for p in points}
    for q in queries:
        assert set(q.categories) <= live
        for loc in (q.source, q.target):
            part = venue.partitions[loc.partition_id]
            assert part.contains(loc.x, loc.y, loc.floor)
    sizes = [len(q.categories) for q in queries]
    assert sizes[:6] == [2, 3, 4, 2, 3, 4]  # cycled pattern


def test_replicate_multiplies_counts_and_preserves_scores():
    spec = WorkloadSpec(seed=9, categories=3, count_range=(4, 6), query_count=1,
                        query_categories=(2,))
    venue = generate_venue(spec)
    points = place_objects(venue, spec)
    for k in (1, 4):
        rep = replicate_dataset(venue, points, k=k, seed=77)
        assert len(rep) == k * len(points)
        base = Counter((p.category, round(p.static_score, 9)) for p in points)
        got = Counter((p.category, round(p.static_score, 9)) for p in rep)
        assert got == {key: k * n for key, n in base.items()}
        assert len({p.id for p in rep}) == len(rep)


def test_replicate_relocates_and_is_deterministic():
    spec = WorkloadSpec(seed=9, categories=2, count_range=(5, 5), query_count=1,
                        query_categories=(2,))
    venue = generate_venue(spec)
    points = place_objects(venue, spec)
    rep = replicate_dataset(venue, points, k=1, seed=13)
    moved = sum(
        1 for a, b in zip(sorted(points, key=lambda p: p.id), rep)
        if (a.x, a.y, a.partition_id) != (b.x, b.y, b.partition_id)
    )
    assert moved > 0
    assert replicate_dataset(venue, points, k=1, seed=13) == rep


def test_replicate_rejects_nonpositive_k():
    spec = WorkloadSpec(seed=9, categories=2, count_range=(2, 2), query_count=1,
                        query_categories=(2,))
    venue = generate_venue(spec)
    points = place_objects(venue, spec)
    with pytest.raises(ValueError):
        replicate_dataset(venue, points, k=0, seed=1)
