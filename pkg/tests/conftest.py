import pytest

from indoortrip import (
    Door,
    Partition,
    Venue,
    WorkloadSpec,
    build_d2d_graph,
    build_index,
    build_workload,
)


def make_two_room_venue(points=()):
    """Rooms A=(0,0,10,10) and B=(10,0,20,10) sharing one door at (10,5)."""
    partitions = {
        0: Partition(id=0, floor=0, bounds=(0, 0, 10, 10), kind="room", door_ids=(0,)),
        1: Partition(id=1, floor=0, bounds=(10, 0, 20, 10), kind="room", door_ids=(0,)),
    }
    doors = {0: Door(id=0, x=10.0, y=5.0, floor=0, partition_ids=(0, 1))}
    return Venue(partitions=partitions, doors=doors, points={p.id: p for p in points})


def make_corridor_venue(rooms=4, width=10.0):
    """A row of rooms, one shared door between neighbours, exterior doors
    at both ends: `rooms` partitions and rooms+1 doors."""
    partitions = {}
    doors = {}
    for i in range(rooms):
        partitions[i] = Partition(
            id=i, floor=0, bounds=(i * width, 0, (i + 1) * width, width),
            kind="room", door_ids=(i, i + 1),
        )
    for j in range(rooms + 1):
        ids = tuple(p for p in (j - 1, j) if 0 <= p < rooms)
        doors[j] = Door(id=j, x=j * width, y=width / 2, floor=0, partition_ids=ids)
    return Venue(partitions=partitions, doors=doors)


def small_workload(seed=0, **overrides):
    """A compact clustered workload whose oracle stays fast."""
    params = dict(
        seed=seed, floors=2, rooms_per_floor=8, categories=5,
        count_range=(6, 10), store_rooms=5, hosts_per_category=2,
        query_count=6, query_categories=(2, 3),
    )
    params.update(overrides)
    spec = WorkloadSpec(**params)
    venue, points, queries = build_workload(spec)
    graph = build_d2d_graph(venue)
    index = build_index(venue, graph)
    return venue, graph, index, queries


@pytest.fixture
def two_room_venue():
    return make_two_room_venue()


@pytest.fixture
def corridor_venue():
    return make_corridor_venue()


@pytest.fixture(scope="session")
def desk_workload():
    """Default-sized workload shared by the slower end-to-end tests."""
    spec = WorkloadSpec(seed=11, categories=8, count_range=(25, 35), query_count=10)
    venue, points, queries = build_workload(spec)
    graph = build_d2d_graph(venue)
    index = build_index(venue, graph)
    return venue, graph, index, queries
