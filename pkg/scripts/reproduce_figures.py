#!/usr/bin/env python3
"""Regenerate the two headline trajectory figures.

Figure A: Cartesian paths of the global backstepping law (globa) with unity
gains from a ring of initial poses.

Figure B: overlay of barfli (blue) and bagal (cyan) against globa (red) with
gains (k1, k2, k3, k4) = (1, 1, 0.1, 1), showing that the barrier laws never
cross the line in front of the target while the unconstrained law does.

Writes SVGs plus the sweep summaries under --out (default figures/).
"""

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from unipark.cli import main as cli_main


def ring_poses(radius: float, n: int, split_front: float | None = None):
    angles = np.linspace(0.0, 2.0 * math.pi, n, endpoint=False)
    poses = []
    for a in angles:
        x, y = radius * math.cos(a), radius * math.sin(a)
        if split_front is not None and abs(y) < 1e-12 and x > 0:
            poses.append([x, split_front, 0.0])
            poses.append([x, -split_front, 0.0])
        else:
            poses.append([x, y, 0.0])
    return poses


def run(out: Path) -> int:
    out.mkdir(parents=True, exist_ok=True)

    fig_a = out / "globa_ring.json"
    fig_a.write_text(json.dumps({
        "schema_version": 1,
        "controllers": ["globa"],
        "gains": [1, 1, 1, 1],
        "t_max": 120.0,
        "grid_cart": ring_poses(2.0, 8),
    }, indent=2))
    rc = cli_main(["sweep", "--config", str(fig_a), "--out", str(out / "fig_globa")])
    if rc != 0:
        return rc

    fig_b = out / "frontline_overlay.json"
    fig_b.write_text(json.dumps({
        "schema_version": 1,
        "controllers": ["globa", "barfli", "bagal"],
        "gains": [1, 1, 0.1, 1],
        "t_max": 150.0,
        "grid_cart": ring_poses(2.0, 8, split_front=0.4),
    }, indent=2))
    rc = cli_main(["sweep", "--config", str(fig_b), "--out", str(out / "fig_frontline")])
    if rc != 0:
        return rc

    print(f"figures under {out}/fig_globa and {out}/fig_frontline")
    return 0


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="figures", type=Path)
    sys.exit(run(ap.parse_args().out))
