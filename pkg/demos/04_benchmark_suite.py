"""Run the full benchmark harness end to end, in a temp directory.

Generates a workload, writes the venue/objects/queries files, runs all
four algorithms at several preprocessing percentages, and prints the
per-algorithm summaries plus the effect of the sweep.
"""

import tempfile
from pathlib import Path

from indoortrip import (
    ExperimentConfig,
    WorkloadSpec,
    build_workload,
    run_experiment,
    save_objects_csv,
    save_venue,
    sweep_delta,
)
from indoortrip.routing import save_queries

workdir = Path(tempfile.mkdtemp(prefix="indoortrip_bench_"))
spec = WorkloadSpec(seed=23, floors=3, rooms_per_floor=10, categories=6,
                    count_range=(20, 30), store_rooms=6, hosts_per_category=3,
                    query_count=20, query_categories=(2, 3))
venue, points, queries = build_workload(spec)
save_venue(venue, workdir / "venue.json")
save_objects_csv(points, workdir / "objects.csv")
save_queries(queries, workdir / "queries.jsonl")
print(f"workload written to {workdir}")

config = ExperimentConfig(
    venue_path=str(workdir / "venue.json"),
    objects_path=str(workdir / "objects.csv"),
    queries_path=str(workdir / "queries.jsonl"),
    algorithms=("gcnn", "gcnn-dom", "rank-once", "oracle"),
    delta=100,
    output_path=str(workdir / "results.csv"),
)
result = run_experiment(config)
print(f"results CSV: {config.output_path}")
print(f"preprocessing: {result.preprocess_us} us, "
      f"{result.prune_report.removed} points removed\n")

print(f"{'algorithm':>10s} {'mean ratio':>11s} {'mean us':>9s} {'points evaluated':>17s}")
for name, entry in sorted(result.summary["algorithms"].items()):
    ratio = f"{entry['mean_ratio']:.4f}" if entry["mean_ratio"] else "-"
    print(f"{name:>10s} {ratio:>11s} {entry['mean_runtime_us']:>9.0f} "
          f"{entry['points_evaluated']:>17d}")

print("\npreprocessing sweep (gcnn-dom):")
results = sweep_delta(config, [0, 20, 50, 80, 100])
for delta, res in results.items():
    entry = res.summary["algorithms"]["gcnn-dom"]
    print(f"  delta {delta:3d}: {entry['points_evaluated']:6d} point evaluations, "
          f"mean ratio {entry['mean_ratio']:.4f}")
