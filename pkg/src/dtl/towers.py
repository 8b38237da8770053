"""The five recursive towers A, B, C, D, E as finite point sets.

A level-n point is an n-tuple over a finite field satisfying every step
relation of the tower.  Levels are enumerated depth first, one univariate
root-finding per prefix.  Coordinates on a denominator locus are logged as
exclusions instead of being dropped.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable

from .ffield import FieldError, FieldSpec, distinct_root_count, make_field, prime_power
from .identities import ihara_poly, pair_factors_z
from .multipoly import MultiPoly, to_univariate

SCHEMA = 1
TOWER_NAMES = ("A", "B", "C", "D", "E")
EVAL_CAP = 2**24
MIN_FIBER_SAMPLES = 30


class EnumerationTooLarge(FieldError):
    def __init__(self, estimate: int):
        super().__init__(f"exhaustive enumeration needs about {estimate} evaluations (cap {EVAL_CAP})")
        self.estimate = estimate


class InsufficientSamples(ValueError):
    pass


class CorrespondenceError(AssertionError):
    def __init__(self, message: str, report: dict):
        super().__init__(message)
        self.report = report


def _rules(name: str, q: int):
    """(first step, general step) in variables (prev, new) / (prev2, prev, new)."""
    p, _ = prime_power(q)
    if name == "A":
        x, y = MultiPoly.gens(p, ("prev", "new"))
        step = x ** (q - 1) * (y**q - y ** (q - 1)) - (1 + x ** (q - 1) - x**q)
        return step, step
    if name == "B":
        step = ihara_poly(q, ("prev", "new"))
        return step, step
    if name == "C":
        step = ihara_poly(q, ("new", "prev"))
        return step, step
    if name == "D":
        _, _, F1, _ = pair_factors_z(q, ("prev", "new"))
        a, b, c = MultiPoly.gens(p, ("prev2", "prev", "new"))
        general = (
            a * b * (b * c - 1) * (a * b * c - 1) ** (q - 1)
            - a**q * (b - 1) ** q
            - b * (a - 1) ** q
        )
        return F1, general
    if name == "E":
        _, _, _, F2 = pair_factors_z(q, ("prev", "new"))
        return F2, F2
    raise ValueError(f"unknown tower {name!r}")


# coordinate values where a denominator of the uncleared relations vanishes
_EXCLUDED = {"A": "x = 0", "B": "u = 0", "C": "alpha = 0", "D": "z = 0", "E": None}


@dataclass(frozen=True)
class TowerSpec:
    name: str
    q: int
    first_step_rule: MultiPoly = field(repr=False)
    step_rule: MultiPoly = field(repr=False)

    @property
    def base_field(self) -> FieldSpec:
        p, a = prime_power(self.q)
        return make_field(p, 3 * a)

    @property
    def excluded_locus(self) -> str | None:
        return _EXCLUDED[self.name]

    def excluded(self, x) -> bool:
        return self.excluded_locus is not None and x == 0

    def rule_into(self, level: int) -> MultiPoly:
        """Relation introducing coordinate number ``level`` (1-based, level >= 2)."""
        return self.first_step_rule if level == 2 else self.step_rule

    def step_degree(self, level: int) -> int:
        return self.rule_into(level).degree("new")

    def fiber_poly(self, prefix: tuple, spec: FieldSpec):
        rule = self.rule_into(len(prefix) + 1)
        values = {"prev": prefix[-1]}
        if "prev2" in rule.vars:
            values["prev2"] = prefix[-2]
        return to_univariate(rule, "new", spec, values)


def tower(name: str, q: int) -> TowerSpec:
    first, general = _rules(name, q)
    return TowerSpec(name, q, first, general)


def tower_field(q: int, ext: int = 1) -> FieldSpec:
    """GF(q^(3*ext))."""
    p, a = prime_power(q)
    return make_field(p, 3 * a * ext)


@dataclass
class LevelPointSet:
    tower: str
    q: int
    level: int
    field: FieldSpec
    points: list
    exclusions: list
    evaluations: int = 0

    def keys(self) -> set:
        return {tuple(self.field.key(x) for x in pt) for pt in self.points}

    def to_json(self, with_points: bool = True) -> dict:
        F = self.field
        out = {
            "schema": SCHEMA,
            "tower": self.tower,
            "q": self.q,
            "level": self.level,
            "field": F.to_json(),
            "count": len(self.points),
            "exclusions": self.exclusions,
        }
        if with_points:
            out["points"] = sorted([F.key(x) for x in pt] for pt in self.points)
        return out


def enumeration_estimate(spec: TowerSpec, n: int, F: FieldSpec) -> int:
    est = F.order
    for lev in range(2, n + 1):
        est *= max(spec.step_degree(lev), 1)
    return est


def enumerate_level(spec: TowerSpec, n: int, F: FieldSpec) -> LevelPointSet:
    """All level-n points over ``F`` in lexicographic key order."""
    if n < 1:
        raise ValueError("level must be >= 1")
    if F.p != spec.base_field.p or F.n % spec.base_field.n:
        raise FieldError(f"{F!r} does not extend the base field of tower {spec.name}")
    est = enumeration_estimate(spec, n, F)
    if est > EVAL_CAP:
        raise EnumerationTooLarge(est)
    points: list = []
    exclusions: list = []
    evals = 0

    def log(prefix, reason):
        exclusions.append({"prefix": [F.key(x) for x in prefix], "reason": reason})

    def walk(prefix):
        nonlocal evals
        if len(prefix) == n:
            points.append(prefix)
            return
        f = spec.fiber_poly(prefix, F)
        evals += 1
        if f.is_zero():
            log(prefix, "identically zero fiber")
            return
        for r in F.sort(r for r, _ in f.roots()):
            if spec.excluded(r):
                log(prefix + (r,), spec.excluded_locus)
            else:
                walk(prefix + (r,))

    for x in F.elements():
        if spec.excluded(x):
            log((x,), spec.excluded_locus)
        else:
            walk((x,))
    return LevelPointSet(spec.name, spec.q, n, F, points, exclusions, evals)


@dataclass
class FiberReport:
    tower: str
    q: int
    level: int
    sampled_base_points: int
    fiber_size_histogram: dict
    generic_degree: int
    step_degree: int
    degenerate: int

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA,
            "tower": self.tower,
            "q": self.q,
            "level": self.level,
            "sampled_base_points": self.sampled_base_points,
            "fiber_size_histogram": {str(k): v for k, v in sorted(self.fiber_size_histogram.items())},
            "generic_degree": self.generic_degree,
            "step_degree": self.step_degree,
            "degenerate": self.degenerate,
        }


def _random_prefix(spec: TowerSpec, length: int, F: FieldSpec, rng: random.Random, tries: int = 1000):
    for _ in range(tries):
        pt = (F.random(rng),)
        while len(pt) < length and not spec.excluded(pt[-1]):
            f = spec.fiber_poly(pt, F)
            if f.is_zero():
                break
            roots = F.sort(r for r, _ in f.roots())
            if not roots:
                break
            pt = pt + (roots[rng.randrange(len(roots))],)
        if len(pt) == length and not any(spec.excluded(x) for x in pt):
            return pt
    raise InsufficientSamples(f"could not reach level {length} of tower {spec.name} over {F!r}")


def fiber_degrees(
    spec: TowerSpec, level: int, F: FieldSpec | None = None, samples: int = MIN_FIBER_SAMPLES, seed: int = 0
) -> FiberReport:
    """Distinct roots of the relation introducing coordinate ``level`` over random level-1 points below it."""
    if level < 2:
        raise ValueError("fibers start at level 2")
    if samples < MIN_FIBER_SAMPLES:
        raise InsufficientSamples(f"need at least {MIN_FIBER_SAMPLES} samples")
    if F is None:
        F = tower_field(spec.q, 4)
    rng = random.Random(seed)
    nominal = spec.step_degree(level)
    hist: Counter = Counter()
    degenerate = 0
    for _ in range(samples):
        base = _random_prefix(spec, level - 1, F, rng)
        f = spec.fiber_poly(base, F)
        if f.is_zero() or f.degree() < nominal:
            degenerate += 1
            continue
        hist[distinct_root_count(f)] += 1
    good = sum(hist.values())
    if good < MIN_FIBER_SAMPLES:
        raise InsufficientSamples(f"only {good} non-degenerate fibers out of {samples}")
    top = max(hist.values())
    generic = max(k for k, v in hist.items() if v == top)
    return FiberReport(spec.name, spec.q, level, samples, dict(hist), generic, nominal, degenerate)


# correspondences between towers


def _ab_forward(q):
    def U(x):
        return x**q - x ** (q - 1)

    def V(x):
        return x.inverse() ** (q - 1) + 1 - x

    def fwd(xs):
        if any(x == 0 for x in xs):
            return None, "x = 0"
        vals = [U(x) for x in xs] + [V(xs[-1])]
        if any(v == 0 for v in vals):
            return None, "U(x) = 0 or V(x) = 0"
        return tuple(-1 + v.inverse() for v in vals), None

    def bwd(ws):
        out = []
        for w, w_next in zip(ws, ws[1:]):
            d = w * (w_next + 1)
            if d == 0:
                return None, "u = 0 or v = -1"
            out.append(1 + d.inverse())
        return tuple(out), None

    return fwd, bwd


def _bc(q):
    def rev(t):
        return tuple(reversed(t)), None

    return rev, rev


def _cd(q):
    def fwd(alphas):
        a1 = alphas[0]
        if a1 == 0:
            return None, "alpha = 0"
        zs = [-(a1 + 1) / a1 ** (q + 1)] + [-(a ** (q + 1) + a) for a in alphas]
        return tuple(zs), None

    def bwd(zs):
        out = []
        for z, z_next in zip(zs, zs[1:]):
            if z == 1:
                return None, "z = 1"
            out.append((z * z_next - 1) / (1 - z))
        return tuple(out), None

    return fwd, bwd


@dataclass(frozen=True)
class TowerMap:
    name: str
    source: str
    target: str
    level_shift: int
    build: Callable


MAPS = {
    "AB": TowerMap("AB", "A", "B", 1, _ab_forward),
    "BC": TowerMap("BC", "B", "C", 0, _bc),
    "CD": TowerMap("CD", "C", "D", 1, _cd),
}


def compare_towers(map_name: str, level: int, q: int, F: FieldSpec, strict: bool = True) -> dict:
    """Check that ``map_name`` is a bijection between the level-``level`` source
    points and the shifted target level, away from logged degenerate loci."""
    m = MAPS[map_name]
    fwd, bwd = m.build(q)
    src_spec, tgt_spec = tower(m.source, q), tower(m.target, q)
    src = enumerate_level(src_spec, level, F)
    tgt = enumerate_level(tgt_spec, level + m.level_shift, F)
    key = lambda pt: tuple(F.key(x) for x in pt)
    src_keys, tgt_keys = src.keys(), tgt.keys()
    matched = 0
    degenerate: Counter = Counter()
    failures: list = []
    hit = set()
    for pt in src.points:
        img, why = fwd(pt)
        if img is None:
            degenerate[f"source: {why}"] += 1
            continue
        k = key(img)
        back, why = bwd(img)
        if back is None:
            degenerate[f"source: image on {why}"] += 1
        elif k in tgt_keys and key(back) == key(pt):
            matched += 1
            hit.add(k)
        elif any(tgt_spec.excluded(x) for x in img):
            degenerate[f"source: image on {tgt_spec.excluded_locus}"] += 1
        else:
            failures.append({"side": "source", "point": list(key(pt))})
    for pt in tgt.points:
        k = key(pt)
        if k in hit:
            continue
        pre, why = bwd(pt)
        if pre is None:
            degenerate[f"target: {why}"] += 1
        elif any(src_spec.excluded(x) for x in pre):
            degenerate[f"target: preimage on {src_spec.excluded_locus}"] += 1
        else:
            failures.append({"side": "target", "point": list(k)})
    unmatched = sum(degenerate.values()) + len(failures)
    total = len(src.points) + len(tgt.points)
    logged = len(src.exclusions) + len(tgt.exclusions)
    report = {
        "schema": SCHEMA,
        "map": map_name,
        "q": q,
        "field": F.to_json(),
        "source": {"tower": m.source, "level": level, "count": len(src.points), "exclusions": len(src.exclusions)},
        "target": {
            "tower": m.target,
            "level": level + m.level_shift,
            "count": len(tgt.points),
            "exclusions": len(tgt.exclusions),
        },
        "matched": matched,
        "unmatched": unmatched,
        "degenerate": dict(sorted(degenerate.items())),
        "degenerate_proportion": (unmatched + logged) / (total + logged) if total + logged else 0.0,
        "failures": failures,
        "bijection": not failures,
    }
    if failures and strict:
        raise CorrespondenceError(f"{len(failures)} non-degenerate points unmatched under {map_name}", report)
    return report
