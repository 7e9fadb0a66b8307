#!/usr/bin/env python3
"""Write the built-in demo bundle (and a matching checklist criteria file)
to a directory, ready for `siteselect serve` or the CLI query commands.

Usage: python scripts/make_fixture.py [out_dir]   (default: data/fixture)
"""

from __future__ import annotations

import sys
from pathlib import Path

from siteselect.fixtures import write_checklist_criteria, write_fixture_bundle
from siteselect.query import ChecklistCriterion


def main() -> int:
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("data/fixture")
    manifest = write_fixture_bundle(out)
    criteria = write_checklist_criteria(
        out / "criteria-supermarket.json",
        [
            ChecklistCriterion("population", 2.0, 2_500.0, 1_000.0),
            ChecklistCriterion("supermarket_count", 1.0, 0.0, 2.0, direction="lower_is_better"),
            ChecklistCriterion("income_per_household", 1.0, 18_000.0, 14_000.0),
        ],
    )
    print(manifest)
    print(criteria)
    return 0


if __name__ == "__main__":
    sys.exit(main())
