"""Deterministic synthetic venues, object placements, and query sets.

Venues are grids of rooms along per-floor hallways, with stairs linking
consecutive floors.  Objects land inside a small set of host rooms per
category (stores carry their categories together), or uniformly across
all rooms when clustering is disabled.  Every stage draws from its own
Mersenne Twister stream derived from the master seed, so a (spec, seed)
pair reproduces the same files byte for byte anywhere.
"""

from __future__ import annotations

import hashlib
import math
import random
from dataclasses import dataclass

from .d2d import build_d2d_graph
from .routing import Location, TripQuery
from .venue import Door, IndoorPoint, Partition, Venue

# Footprint constants (meters).
ROOM_W = 8.0
ROOM_D = 8.0
HALL_D = 4.0
STAIR_W = 4.0

# Reference objects-per-category ranges at full scale, closed on both ends.
BUCKET_RANGES = {
    "XS": (80, 120),
    "S": (450, 550),
    "M": (950, 1050),
    "L": (1450, 1550),
    "XL": (1950, 2050),
}
BUCKET_ORDER = ("XS", "S", "M", "L", "XL")

DESK_SCALE = 0.1


def scaled_bucket_ranges(scale: float = 1.0) -> dict[str, tuple[int, int]]:
    return {
        name: (max(1, int(round(lo * scale))), max(1, int(round(hi * scale))))
        for name, (lo, hi) in BUCKET_RANGES.items()
    }


def stream(seed: int, stage: str) -> random.Random:
    """Independent, platform-stable RNG stream for one generation stage."""
    digest = hashlib.sha256(f"{seed}:{stage}".encode()).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


@dataclass
class WorkloadSpec:
    seed: int = 0
    floors: int = 4
    rooms_per_floor: int = 12
    doors_per_room: int = 1
    categories: int = 8
    bucket: str = "M"
    bucket_scale: float = DESK_SCALE
    count_range: tuple[int, int] | None = None  # overrides the bucket range
    store_rooms: int = 8                        # rooms that carry objects at all
    hosts_per_category: int | None = 3          # None places uniformly over all rooms
    query_count: int = 50
    query_categories: tuple[int, ...] = (2, 3, 4)  # cycled over queries
    alpha: float = 0.5

    def __post_init__(self):
        if self.floors < 1 or self.rooms_per_floor < 1:
            raise ValueError("floors and rooms per floor must be positive")
        if self.doors_per_room < 1:
            raise ValueError("rooms need at least one door")
        if self.categories < 1:
            raise ValueError("need at least one category")
        if self.bucket not in BUCKET_RANGES:
            raise ValueError(f"unknown bucket {self.bucket!r}")
        if isinstance(self.query_categories, int):
            self.query_categories = (self.query_categories,)

    def object_count_range(self) -> tuple[int, int]:
        if self.count_range is not None:
            return self.count_range
        return scaled_bucket_ranges(self.bucket_scale)[self.bucket]


def generate_venue(spec: WorkloadSpec) -> Venue:
    """Grid-of-rooms floors on a hallway spine, stairs between floors."""
    partitions: dict[int, Partition] = {}
    doors: dict[int, Door] = {}
    next_part = 0
    next_door = 0

    if spec.floors == 1 and spec.rooms_per_floor == 1:
        # Degenerate single-room venue: one partition, one exterior door.
        partitions[0] = Partition(
            id=0, floor=0, bounds=(0.0, 0.0, ROOM_W, ROOM_D), kind="room", door_ids=(0,)
        )
        doors[0] = Door(id=0, x=ROOM_W / 2.0, y=0.0, floor=0, partition_ids=(0,))
        return Venue(partitions=partitions, doors=doors)

    north = math.ceil(spec.rooms_per_floor / 2)
    south = spec.rooms_per_floor - north
    width = north * ROOM_W

    hall_ids: dict[int, int] = {}
    for floor in range(spec.floors):
        hall_id = next_part
        next_part += 1
        hall_ids[floor] = hall_id
        hall_doors: list[int] = []

        room_specs = [(i, True) for i in range(north)] + [(i, False) for i in range(south)]
        for i, is_north in room_specs:
            room_id = next_part
            next_part += 1
            x0 = i * ROOM_W
            if is_north:
                bounds = (x0, HALL_D, x0 + ROOM_W, HALL_D + ROOM_D)
                door_y = HALL_D
            else:
                bounds = (x0, -ROOM_D, x0 + ROOM_W, 0.0)
                door_y = 0.0
            room_doors = []
            for j in range(spec.doors_per_room):
                door_x = x0 + ROOM_W * (j + 1) / (spec.doors_per_room + 1)
                doors[next_door] = Door(
                    id=next_door, x=door_x, y=door_y, floor=floor,
                    partition_ids=(hall_id, room_id),
                )
                room_doors.append(next_door)
                hall_doors.append(next_door)
                next_door += 1
            partitions[room_id] = Partition(
                id=room_id, floor=floor, bounds=bounds, kind="room",
                door_ids=tuple(room_doors),
            )

        partitions[hall_id] = Partition(
            id=hall_id, floor=floor, bounds=(0.0, 0.0, width, HALL_D),
            kind="hallway", door_ids=tuple(hall_doors),
        )

    for floor in range(spec.floors - 1):
        stairs_id = next_part
        next_part += 1
        east = floor % 2 == 0
        if east:
            bounds = (width, 0.0, width + STAIR_W, HALL_D)
            door_x = width
        else:
            bounds = (-STAIR_W, 0.0, 0.0, HALL_D)
            door_x = 0.0
        lower = Door(id=next_door, x=door_x, y=HALL_D / 2.0, floor=floor,
                     partition_ids=(hall_ids[floor], stairs_id))
        upper = Door(id=next_door + 1, x=door_x, y=HALL_D / 2.0, floor=floor + 1,
                     partition_ids=(hall_ids[floor + 1], stairs_id))
        doors[lower.id] = lower
        doors[upper.id] = upper
        next_door += 2
        partitions[stairs_id] = Partition(
            id=stairs_id, floor=floor, bounds=bounds, kind="stairs",
            door_ids=(lower.id, upper.id), floor2=floor + 1,
        )
        for hid, did in ((hall_ids[floor], lower.id), (hall_ids[floor + 1], upper.id)):
            hall = partitions[hid]
            partitions[hid] = Partition(
                id=hall.id, floor=hall.floor, bounds=hall.bounds, kind=hall.kind,
                door_ids=hall.door_ids + (did,),
            )

    categories = {i: f"cat-{i}" for i in range(spec.categories)}
    return Venue(partitions=partitions, doors=doors, categories=categories)


def venue_diameter(venue: Venue) -> float:
    """Largest door-to-door distance; static scores share this scale."""
    graph = build_d2d_graph(venue)
    matrix = graph.distance_matrix()
    diameter = float(matrix.max()) if matrix.size else 0.0
    if diameter <= 0.0:
        xs = [b for p in venue.partitions.values() for b in (p.bounds[0], p.bounds[2])]
        ys = [b for p in venue.partitions.values() for b in (p.bounds[1], p.bounds[3])]
        diameter = math.hypot(max(xs) - min(xs), max(ys) - min(ys))
    return diameter


def room_ids(venue: Venue) -> list[int]:
    return sorted(p.id for p in venue.partitions.values() if p.kind == "room")


def place_objects(venue: Venue, spec: WorkloadSpec) -> list[IndoorPoint]:
    """Per-category object counts from the bucket range, placed inside the
    category's host stores; scores uniform on [0, venue diameter].

    Objects live in a shared pool of store rooms so that categories
    co-occur inside partitions, the way products share retail outlets.
    hosts_per_category=None disables clustering and scatters objects
    uniformly over every room.
    """
    rng = stream(spec.seed, "objects")
    rooms = room_ids(venue)
    stores = sorted(rng.sample(rooms, min(spec.store_rooms, len(rooms))))
    lo, hi = spec.object_count_range()
    score_scale = venue_diameter(venue)

    points: list[IndoorPoint] = []
    next_id = 0
    for cat in range(spec.categories):
        count = rng.randint(lo, hi)
        if spec.hosts_per_category is None:
            hosts = rooms
        else:
            hosts = sorted(rng.sample(stores, min(spec.hosts_per_category, len(stores))))
        for _ in range(count):
            pid = rng.choice(hosts)
            part = venue.partitions[pid]
            x0, y0, x1, y1 = part.bounds
            points.append(
                IndoorPoint(
                    id=next_id,
                    partition_id=pid,
                    x=rng.uniform(x0, x1),
                    y=rng.uniform(y0, y1),
                    floor=part.floor,
                    category=cat,
                    static_score=rng.uniform(0.0, score_scale),
                )
            )
            next_id += 1
    return points


def bucket_categories(points, scale: float = 1.0) -> dict[str, list[int]]:
    """Map bucket labels to the categories whose counts fall in range."""
    counts: dict[int, int] = {}
    for p in points:
        counts[p.category] = counts.get(p.category, 0) + 1
    ranges = scaled_bucket_ranges(scale)
    buckets: dict[str, list[int]] = {name: [] for name in BUCKET_ORDER}
    for cat in sorted(counts):
        for name in BUCKET_ORDER:
            lo, hi = ranges[name]
            if lo <= counts[cat] <= hi:
                buckets[name].append(cat)
                break
    return buckets


def random_location(rng: random.Random, venue: Venue, rooms: list[int]) -> Location:
    pid = rng.choice(rooms)
    part = venue.partitions[pid]
    x0, y0, x1, y1 = part.bounds
    return Location(
        x=rng.uniform(x0, x1), y=rng.uniform(y0, y1), floor=part.floor, partition_id=pid
    )


def generate_queries(categories: list[int], count: int, m, alpha: float,
                     venue: Venue, seed: int) -> list[TripQuery]:
    """Uniform random source/target plus m distinct categories per query."""
    sizes = (m,) if isinstance(m, int) else tuple(m)
    if max(sizes) > len(categories):
        raise ValueError(
            f"cannot draw {max(sizes)} categories from a pool of {len(categories)}"
        )
    rng = stream(seed, "queries")
    rooms = room_ids(venue)
    queries = []
    for i in range(count):
        size = sizes[i % len(sizes)]
        cats = tuple(rng.sample(sorted(categories), size))
        queries.append(
            TripQuery(
                source=random_location(rng, venue, rooms),
                target=random_location(rng, venue, rooms),
                categories=cats,
                alpha=alpha,
            )
        )
    return queries


def replicate_dataset(venue: Venue, points: list[IndoorPoint], k: int,
                      seed: int) -> list[IndoorPoint]:
    """k relocated copies of the object set; categories and scores travel
    with each copy, locations are drawn fresh."""
    if k < 1:
        raise ValueError("replication factor must be at least 1")
    rng = stream(seed, "replicate")
    rooms = room_ids(venue)
    out: list[IndoorPoint] = []
    next_id = 0
    for _ in range(k):
        for p in sorted(points, key=lambda p: p.id):
            pid = rng.choice(rooms)
            part = venue.partitions[pid]
            x0, y0, x1, y1 = part.bounds
            out.append(
                IndoorPoint(
                    id=next_id, partition_id=pid,
                    x=rng.uniform(x0, x1), y=rng.uniform(y0, y1),
                    floor=part.floor, category=p.category, static_score=p.static_score,
                )
            )
            next_id += 1
    return out


def build_workload(spec: WorkloadSpec) -> tuple[Venue, list[IndoorPoint], list[TripQuery]]:
    """Venue, placed objects, and queries over the spec's bucket categories."""
    venue = generate_venue(spec)
    points = place_objects(venue, spec)
    venue = venue.with_points(points)
    eligible = sorted({p.category for p in points})
    queries = generate_queries(
        eligible, spec.query_count, spec.query_categories, spec.alpha, venue, spec.seed
    )
    return venue, points, queries
