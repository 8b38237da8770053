"""Regenerate golden point sets by brute-force evaluation (no root finding)."""

import json
import sys
from pathlib import Path

from dtl.towers import tower, tower_field


def brute_points(name, q, level, ext):
    spec = tower(name, q)
    F = tower_field(q, ext)
    elems = list(F.elements())
    pts = [(x,) for x in elems if not spec.excluded(x)]
    for lev in range(2, level + 1):
        rule = spec.rule_into(lev)
        nxt = []
        for pt in pts:
            for y in elems:
                if spec.excluded(y):
                    continue
                named = {"prev": pt[-1], "new": y, "prev2": pt[-2] if len(pt) > 1 else None}
                if rule(*[named[v] for v in rule.vars]) == 0:
                    nxt.append(pt + (y,))
        pts = nxt
    return sorted([F.key(x) for x in pt] for pt in pts)


CASES = [("E", 2, 3, 2), ("D", 2, 3, 2), ("C", 2, 2, 2), ("A", 2, 2, 1), ("B", 3, 2, 1)]

if __name__ == "__main__":
    out = {}
    for name, q, level, ext in CASES:
        pts = brute_points(name, q, level, ext)
        out[f"{name}_q{q}_level{level}_ext{ext}"] = {"count": len(pts), "points": pts}
    path = Path(sys.argv[1] if len(sys.argv) > 1 else Path(__file__).with_name("golden_points.json"))
    path.write_text(json.dumps(out, sort_keys=True) + "\n")
