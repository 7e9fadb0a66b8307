"""Deterministic synthetic bundles for property tests and demos.

The hierarchy is a balanced tree over the requested per-level site counts.
Sum-aggregated factors are generated leaf-first with integer leaf values, so
every stored parent value equals the sum of its children exactly (integers
stay exact in float64 at these scales).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Sequence, Tuple

from .ingest import write_bundle
from .model import AdminLevel, DatasetSnapshot, FactorDefinition, FactorValue, Site, TimePoint, build_snapshot

_DIRECTIONS = ("higher_is_better", "lower_is_better", "neutral")


@dataclass
class SyntheticBundle:
    levels: List[AdminLevel]
    sites: List[Site]
    factors: List[FactorDefinition]
    values: List[FactorValue]
    geometries: Dict[str, dict]
    timepoints: List[TimePoint]
    seed: int

    def to_snapshot(self) -> DatasetSnapshot:
        return build_snapshot(
            sites=self.sites,
            factors=self.factors,
            values=self.values,
            geometries=self.geometries,
            levels=self.levels,
            source=f"synthetic-{self.seed}",
            default_t=self.timepoints[0] if self.timepoints else None,
        )

    def write(self, out_dir) -> Path:
        return write_bundle(
            out_dir,
            levels=self.levels,
            sites=self.sites,
            factors=self.factors,
            values=self.values,
            geometries=self.geometries,
            source=f"synthetic-{self.seed}",
            default_t=self.timepoints[0] if self.timepoints else None,
        )


def _box_polygon(x0: float, y0: float, x1: float, y1: float) -> dict:
    ring = [[x0, y0], [x1, y0], [x1, y1], [x0, y1], [x0, y0]]
    return {"type": "Polygon", "coordinates": [ring]}


def generate_synthetic(
    level_counts: Sequence[int],
    factors: int,
    timepoints: int,
    seed: int,
    missing_rate: float = 0.0,
) -> SyntheticBundle:
    """Balanced synthetic hierarchy with `level_counts[i]` sites at level i.

    Even-indexed factors aggregate by sum (values at every site, parents
    exact sums of children); odd-indexed by mean (leaf values only).
    `missing_rate` drops observations at random, deterministically per seed.
    """
    if not level_counts or any(c < 1 for c in level_counts):
        raise ValueError("level_counts must be non-empty positive integers")
    if factors < 1 or timepoints < 1:
        raise ValueError("factors and timepoints must be >= 1")
    if not 0.0 <= missing_rate < 1.0:
        raise ValueError("missing_rate must be in [0, 1)")

    rng = random.Random(seed)
    levels = [AdminLevel(i, f"level{i}") for i in range(len(level_counts))]

    sites: List[Site] = []
    ids_by_level: List[List[str]] = []
    for li, count in enumerate(level_counts):
        ids = [f"s{li}_{j:04d}" for j in range(count)]
        ids_by_level.append(ids)
        for j, sid in enumerate(ids):
            parent = None
            if li > 0:
                parent = ids_by_level[li - 1][j * level_counts[li - 1] // count]
            sites.append(Site(id=sid, name=f"site-{li}-{j:04d}", level=levels[li], parent_id=parent))

    children: Dict[str, List[str]] = {s.id: [] for s in sites}
    for s in sites:
        if s.parent_id is not None:
            children[s.parent_id].append(s.id)

    defs: List[FactorDefinition] = []
    for k in range(factors):
        agg = "sum" if k % 2 == 0 else "mean"
        defs.append(
            FactorDefinition(
                id=f"factor_{k}",
                name=f"Synthetic factor {k}",
                category="Other",
                unit="units",
                kind="hard",
                aggregation=agg,
                direction_hint=_DIRECTIONS[k % 3],
            )
        )

    tps = []
    for i in range(timepoints):
        tps.append(TimePoint(2016 + i // 12, 1 + i % 12))

    leaf_ids = [s.id for s in sites if not children[s.id]]
    values: List[FactorValue] = []
    for f in defs:
        for t in tps:
            if f.aggregation == "sum":
                totals: Dict[str, float] = {sid: float(rng.randint(0, 10_000)) for sid in leaf_ids}
                # leaf-first: walk levels bottom-up so parents are exact sums
                for li in range(len(level_counts) - 2, -1, -1):
                    for sid in ids_by_level[li]:
                        if children[sid]:
                            totals[sid] = sum(totals[cid] for cid in children[sid])
                for s in sites:
                    values.append(FactorValue(s.id, f.id, t, totals[s.id]))
            else:
                for sid in leaf_ids:
                    values.append(FactorValue(sid, f.id, t, round(rng.uniform(0.0, 1000.0), 3)))

    if missing_rate > 0.0:
        values = [v for v in values if rng.random() >= missing_rate]

    geometries: Dict[str, dict] = {}
    boxes: Dict[str, Tuple[float, float, float, float]] = {}
    n_roots = len(ids_by_level[0])
    for j, sid in enumerate(ids_by_level[0]):
        boxes[sid] = (10.0 * j / n_roots, 0.0, 10.0 * (j + 1) / n_roots, 10.0)
    for li in range(1, len(level_counts)):
        for parent_id in ids_by_level[li - 1]:
            kids = children[parent_id]
            if not kids:
                continue
            x0, y0, x1, y1 = boxes[parent_id]
            for j, cid in enumerate(kids):
                if li % 2 == 1:  # alternate split axis per level
                    boxes[cid] = (x0 + (x1 - x0) * j / len(kids), y0, x0 + (x1 - x0) * (j + 1) / len(kids), y1)
                else:
                    boxes[cid] = (x0, y0 + (y1 - y0) * j / len(kids), x1, y0 + (y1 - y0) * (j + 1) / len(kids))
    for sid, (x0, y0, x1, y1) in boxes.items():
        geometries[sid] = _box_polygon(x0, y0, x1, y1)

    return SyntheticBundle(
        levels=levels,
        sites=sites,
        factors=defs,
        values=values,
        geometries=geometries,
        timepoints=tps,
        seed=seed,
    )
