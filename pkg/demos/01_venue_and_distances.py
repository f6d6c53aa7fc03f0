"""Build a synthetic venue and poke at its distance metric.

Generates a two-floor venue, validates it, builds the door graph, and
compares a few indoor distances: same room, across the hallway, and
across floors through the stairs.
"""

from indoortrip import (
    DistanceEngine,
    Location,
    WorkloadSpec,
    build_d2d_graph,
    generate_venue,
    validate_venue,
)

spec = WorkloadSpec(seed=42, floors=2, rooms_per_floor=8, categories=4,
                    count_range=(5, 8), query_count=1)
venue = generate_venue(spec)

report = validate_venue(venue)
print(f"partitions: {len(venue.partitions)}  doors: {len(venue.doors)}  "
      f"valid: {report.ok}")

kinds = {}
for part in venue.partitions.values():
    kinds.setdefault(part.kind, []).append(part.id)
for kind, ids in sorted(kinds.items()):
    print(f"  {kind:8s} x{len(ids)}: ids {ids[:6]}{' ...' if len(ids) > 6 else ''}")

graph = build_d2d_graph(venue)
print(f"\ndoor graph: {len(graph.door_ids)} vertices, {len(graph.edges)} edges")

engine = DistanceEngine(venue, graph)
room0 = next(p for p in venue.partitions.values() if p.kind == "room" and p.floor == 0)
room1 = next(p for p in venue.partitions.values()
             if p.kind == "room" and p.floor == 0 and p.id != room0.id)
upstairs = next(p for p in venue.partitions.values() if p.kind == "room" and p.floor == 1)


def center(part):
    x0, y0, x1, y1 = part.bounds
    return Location((x0 + x1) / 2, (y0 + y1) / 2, part.floor, part.id)


a, b, c = center(room0), center(room1), center(upstairs)
inside = Location(a.x + 2.0, a.y + 1.0, a.floor, a.partition_id)

print(f"\nwithin room {room0.id}:            {engine.distance(a, inside):7.2f} m")
print(f"room {room0.id} -> room {room1.id} (same floor): {engine.distance(a, b):7.2f} m")
print(f"room {room0.id} -> room {upstairs.id} (one floor up): {engine.distance(a, c):7.2f} m")
print(f"symmetric: {engine.distance(a, c) == engine.distance(c, a)}")
