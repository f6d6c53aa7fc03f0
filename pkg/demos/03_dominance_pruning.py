"""Watch dominance pruning thin out one partition.

Two categories share a room with two doors.  A point survives only if
some door pair and rival ranking leaves it a chance of appearing in the
cheapest two-stop route through the room; everything else is eliminated
before queries ever run.  The best two-stop route cost is unchanged.
"""

import random

from indoortrip import Door, IndoorPoint, Partition, Venue, prune_partition, route_cost
from indoortrip.dominance import DominanceContext

rng = random.Random(12)

part = Partition(id=0, floor=0, bounds=(0, 0, 24, 12), kind="room", door_ids=(0, 1))
doors = {
    0: Door(id=0, x=0.0, y=6.0, floor=0, partition_ids=(0,)),
    1: Door(id=1, x=24.0, y=6.0, floor=0, partition_ids=(0,)),
}

by_cat = {}
pid = 0
for cat in (0, 1):
    pts = []
    for _ in range(12):
        pts.append(IndoorPoint(id=pid, partition_id=0, x=rng.uniform(0, 24),
                               y=rng.uniform(0, 12), floor=0, category=cat,
                               static_score=rng.uniform(0, 30)))
        pid += 1
    by_cat[cat] = pts

venue = Venue(partitions={0: part}, doors=doors,
              points={p.id: p for c in by_cat for p in by_cat[c]})

survivors = prune_partition(venue, part, by_cat)
for cat in (0, 1):
    kept = sorted(survivors[cat])
    gone = sorted(p.id for p in by_cat[cat] if p.id not in survivors[cat])
    print(f"category {cat}: kept {len(kept)}/{len(by_cat[cat])} -> {kept}")
    print(f"             eliminated {gone}")

print("\nbest two-stop route cost per door pair (all points vs survivors):")
for ds in (0, 1):
    for dt in (0, 1):
        ctx = DominanceContext(part, doors[ds], doors[dt], 0, 1)

        def best(a_pts, b_pts):
            return min(route_cost(ctx.pair_route(a, b), 0.5)
                       for a in a_pts for b in b_pts)

        full = best(by_cat[0], by_cat[1])
        kept = best([p for p in by_cat[0] if p.id in survivors[0]],
                    [p for p in by_cat[1] if p.id in survivors[1]])
        marker = "ok" if full == kept else "LOST OPTIMUM"
        print(f"  d{ds} -> d{dt}:  all {full:7.3f}   survivors {kept:7.3f}   {marker}")
