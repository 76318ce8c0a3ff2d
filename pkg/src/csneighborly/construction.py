"""Construction of almost acute centrally symmetric sets of size 2^(d-1)+2.

The layout is the vertex set of the (d-1)-hypercube [-1,1]^(d-1) embedded in
the hyperplane x_d = 0, plus an antipodal apex pair (0,...,0,+-c) with
c^2 > d-1.  Antipodal pairs of cube vertices are then displaced, one pair at
a time and always in antipodal lockstep, by rational vectors small enough to
preserve every previously secured acute angle and chosen so that every new
angle involving the displaced pair becomes strictly acute.

Safety radii come from an explicit Lipschitz bound: moving each point of a
triple by less than eps changes the angle slack by less than 8*R*eps +
4*eps^2, where R bounds the point norms.  With eps = margin/(16*R) and
eps <= 1/2 that change stays strictly below the margin.  Candidates for a
displaced pair are drawn on a dyadic grid (denominators dividing
2^denom_bits) and accepted only after an exact integer slack check, so
correctness never depends on the sampler; the sampler's shape only affects
how fast an acceptable candidate is found.

All working coordinates are kept as integers scaled by 2^denom_bits, which
keeps file round-trips lossless and makes the hot slack checks pure integer
arithmetic via an incrementally maintained Gram matrix.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Iterable, Optional, Sequence

from .geometry import (
    GeometryError,
    Point,
    PointSet,
    acute_margin,
    angle_slack,
    is_almost_acute,
    norm_sq,
    point,
    spans,
    vneg,
    vsub,
)


class ConstructionError(RuntimeError):
    """A pair could not be displaced within the attempt budget, or a final
    invariant check failed.  Carries enough context to diagnose the run."""

    def __init__(self, message: str, pair: Optional[int] = None,
                 attempts: Optional[int] = None, best_slack=None):
        super().__init__(message)
        self.pair = pair
        self.attempts = attempts
        self.best_slack = best_slack


@dataclass(frozen=True)
class ConstructionParams:
    """Inputs of a construction run.

    apex_height is the rational c with c^2 > dim - 1; None picks the
    smallest integer satisfying the bound.  denom_bits fixes the dyadic grid
    resolution of the displacements (all output denominators divide
    2^denom_bits).
    """

    dim: int
    apex_height: Optional[Fraction] = None
    seed: int = 0
    max_attempts_per_pair: int = 1000
    denom_bits: int = 32

    def __post_init__(self):
        if self.dim < 2:
            raise ValueError(f"dimension must be >= 2, got {self.dim}")
        if self.max_attempts_per_pair < 1:
            raise ValueError("max_attempts_per_pair must be >= 1")
        if self.denom_bits < 4:
            raise ValueError("denom_bits must be >= 4")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")
        if self.apex_height is not None:
            c = Fraction(self.apex_height)
            object.__setattr__(self, "apex_height", c)
            if c * c <= self.dim - 1:
                raise ValueError(
                    f"apex height {c} too small: need c^2 > {self.dim - 1}"
                )

    def resolved_apex(self) -> Fraction:
        if self.apex_height is not None:
            return self.apex_height
        return default_apex_height(self.dim)


@dataclass(frozen=True)
class PairTrace:
    """Per-pair record: which pair, the radius actually used, how many
    candidates were tried, and the exact squared displacement."""

    pair: int
    radius: Fraction
    attempts: int
    displacement_sq: Fraction


@dataclass(frozen=True)
class ConstructionTrace:
    base_radius: Fraction
    pairs: tuple[PairTrace, ...]
    total_points: int


def default_apex_height(dim: int) -> Fraction:
    """Smallest integer c with c^2 > dim - 1."""
    return Fraction(isqrt(dim - 1) + 1)


def base_set(dim: int, apex_height) -> PointSet:
    """The unperturbed layout: all 2^(dim-1) sign vectors in the first
    dim-1 coordinates (last coordinate 0), then the apexes (0,...,0,+c) and
    (0,...,0,-c).  Size 2^(dim-1) + 2.

    Cube vertices are listed in lexicographic sign order with +1 before -1,
    so the antipode of index i is index 2^(dim-1)-1-i.
    """
    if dim < 2:
        raise GeometryError(f"dimension must be >= 2, got {dim}")
    c = Fraction(apex_height)
    if c * c <= dim - 1:
        raise GeometryError(f"apex height {c} too small: need c^2 > {dim - 1}")
    pts: list[tuple] = []
    for signs in itertools.product((1, -1), repeat=dim - 1):
        pts.append(tuple(Fraction(s) for s in signs) + (Fraction(0),))
    zero_head = tuple(Fraction(0) for _ in range(dim - 1))
    pts.append(zero_head + (c,))
    pts.append(zero_head + (-c,))
    return PointSet(dim, pts)


def base_angle_families(s0: PointSet) -> dict[str, list[tuple[int, int, int]]]:
    """The four angle families, as ordered index triples, whose positivity
    the construction must preserve globally:

    - apex_at_base:   angle at a cube vertex between an apex and another
                      cube vertex;
    - base_at_apex:   angle at an apex between two cube vertices;
    - apex_opposite:  angle at one apex between the other apex and a cube
                      vertex;
    - base_antipode:  angle at a cube vertex between its antipode and a
                      non-antipodal cube vertex.
    """
    n = len(s0)
    m = n - 2
    top, bottom = m, m + 1
    cube = range(m)
    fams: dict[str, list[tuple[int, int, int]]] = {
        "apex_at_base": [],
        "base_at_apex": [],
        "apex_opposite": [],
        "base_antipode": [],
    }
    for a in (top, bottom):
        for y in cube:
            for z in cube:
                if z != y:
                    fams["apex_at_base"].append((a, y, z))
                    fams["base_at_apex"].append((y, a, z))
    for a, b in ((top, bottom), (bottom, top)):
        for y in cube:
            fams["apex_opposite"].append((a, b, y))
    for y in cube:
        ay = m - 1 - y
        for z in cube:
            if z != y and z != ay:
                fams["base_antipode"].append((y, ay, z))
    return fams


def check_base_angles(s0: PointSet) -> Fraction:
    """Verify all four base angle families are strictly acute and return
    the minimum slack (the feedstock of the global safety radius).

    Raises GeometryError if any family member fails, which indicates the
    apex height or dimension violates the construction's precondition.
    """
    _validate_base_layout(s0)
    fams = base_angle_families(s0)
    triples = [t for fam in fams.values() for t in fam]
    return acute_margin(s0, triples)


def _validate_base_layout(s0: PointSet) -> None:
    n = len(s0)
    d = s0.dim
    if n != (1 << (d - 1)) + 2:
        raise GeometryError(f"expected {(1 << (d - 1)) + 2} points, got {n}")
    top, bottom = s0[n - 2], s0[n - 1]
    if top != vneg(bottom) or any(c != 0 for c in top[:-1]) or top[-1] <= 0:
        raise GeometryError("last two points must be the apex pair (0,...,0,+-c)")


def norm_radius_bound(dim: int, apex_height) -> int:
    """Smallest integer R with R^2 >= max(dim - 1, c^2); an exact upper
    bound on every point norm of the base layout."""
    c = Fraction(apex_height)
    bound = max(Fraction(dim - 1), c * c)
    num, den = bound.numerator, bound.denominator
    r = isqrt(num // den)
    while r * r * den < num:
        r += 1
    return r


def safety_radius(margin: Fraction, radius_bound: int) -> Fraction:
    """Global displacement budget: min(margin/(16 R), 1/2).

    Moving every point of a triple by strictly less than this changes any
    slack by less than the margin (Lipschitz bound 8*R*eps + 4*eps^2).
    """
    if margin <= 0:
        raise GeometryError(f"margin must be positive, got {margin}")
    if radius_bound < 1:
        raise GeometryError(f"radius bound must be >= 1, got {radius_bound}")
    return min(margin / (16 * radius_bound), Fraction(1, 2))


def fixed_pair_invariant(
    current: Sequence[Point],
    original: Sequence[Point],
    fixed: Iterable[int],
    budget: Fraction,
) -> tuple[bool, list[str]]:
    """Independent check of the induction invariant on a cube layer.

    (a) every fixed point lies strictly within `budget` of its original
        position, and
    (b) for every triple of current points, no two of which are antipodes,
        in which a fixed point takes the ray-endpoint role, both the angle
        at that endpoint's opposite vertex and the angle at the endpoint
        itself are strictly acute.

    Pure Fraction arithmetic, independent of the incremental integer path
    used inside ConstructionRun; suitable as a cross-check in tests.
    """
    current = [point(p) for p in current]
    original = [point(p) for p in original]
    n = len(current)
    index = {p: i for i, p in enumerate(current)}
    anti: dict[int, int] = {}
    for i, p in enumerate(current):
        j = index.get(vneg(p))
        if j is None:
            return False, [f"point {i} has no antipode in the current layer"]
        anti[i] = j
    fixed_set = set()
    for i in fixed:
        fixed_set.add(i)
        fixed_set.add(anti[i])
    violations: list[str] = []
    budget_sq = budget * budget
    for i in sorted(fixed_set):
        disp = norm_sq(vsub(current[i], original[i]))
        if disp >= budget_sq:
            violations.append(f"point {i} displaced by {disp} >= budget^2 {budget_sq}")
    for x in sorted(fixed_set):
        px = current[x]
        ax = anti[x]
        for y in range(n):
            if y == x or y == ax:
                continue
            py = current[y]
            for z in range(n):
                if z in (x, ax, y, anti[y]):
                    continue
                pz = current[z]
                if angle_slack(px, py, pz) <= 0:
                    violations.append(f"angle at {y} in triple ({x},{y},{z}) not acute")
                if angle_slack(py, px, pz) <= 0:
                    violations.append(f"angle at {x} in triple ({y},{x},{z}) not acute")
    return not violations, violations


class ConstructionRun:
    """Stateful construction: one antipodal cube pair displaced per step.

    Deterministic for fixed params; the seeded generator is consumed in a
    single sequential stream.  Working coordinates are integers scaled by
    2^denom_bits and all acceptance checks run on the integer Gram matrix.
    """

    def __init__(self, params: ConstructionParams):
        self.params = params
        self.dim = params.dim
        self.apex = params.resolved_apex()
        self.scale = 1 << params.denom_bits
        self.base = base_set(self.dim, self.apex)
        self.margin = check_base_angles(self.base)
        self.radius_bound = norm_radius_bound(self.dim, self.apex)
        self.base_radius = safety_radius(self.margin, self.radius_bound)
        self.pair_count = 1 << (self.dim - 2) if self.dim >= 2 else 0
        m = 1 << (self.dim - 1)
        self._m = m
        sc = self.scale
        den, grid = self.base.scaled_integer_grid()
        assert den == 1  # base coordinates are integers
        self._pts: list[tuple[int, ...]] = [tuple(v * sc for v in grid[i]) for i in range(m)]
        self._orig = list(self._pts)
        self._gram: list[list[int]] = [[0] * m for _ in range(m)]
        for i in range(m):
            ri = self._pts[i]
            for j in range(i, m):
                v = sum(a * b for a, b in zip(ri, self._pts[j]))
                self._gram[i][j] = v
                self._gram[j][i] = v
        self._rng = random.Random(params.seed)
        self.fixed = 0
        self.pair_traces: list[PairTrace] = []

    # -- inspection helpers -------------------------------------------------

    def pair_indices(self, p: int) -> tuple[int, int]:
        """Indices of the p-th pair (1-based) in the cube layer: the
        representative (first coordinate +1, lexicographic order) and its
        antipode."""
        if not 1 <= p <= self.pair_count:
            raise ValueError(f"pair index must be in 1..{self.pair_count}")
        return p - 1, self._m - p

    def _anti(self, i: int) -> int:
        return self._m - 1 - i

    def cube_snapshot(self) -> list[Point]:
        sc = self.scale
        return [tuple(Fraction(v, sc) for v in row) for row in self._pts]

    def original_cube(self) -> list[Point]:
        sc = self.scale
        return [tuple(Fraction(v, sc) for v in row) for row in self._orig]

    def fixed_indices(self) -> list[int]:
        return [self.pair_indices(p)[0] for p in range(1, self.fixed + 1)]

    # -- radii ---------------------------------------------------------------

    def _slack_int(self, x: int, y: int, z: int) -> int:
        g = self._gram
        return g[x][z] - g[x][y] - g[y][z] + g[y][y]

    def pair_radius(self, p: int) -> Fraction:
        """Displacement budget for pair p: half the global budget, shrunk
        further so every already-secured angle that involves the pair keeps
        a positive slack throughout the ball."""
        target, target_anti = self.pair_indices(p)
        excluded = {target, target_anti}
        best: Optional[int] = None
        for q in range(1, min(p, self.fixed + 1)):
            fi, fj = self.pair_indices(q)
            for f in (fi, fj):
                af = self._anti(f)
                for w in range(self._m):
                    if w in excluded or w in (f, af):
                        continue
                    for sl in (
                        self._slack_int(f, target, w),
                        self._slack_int(f, w, target),
                        self._slack_int(target, f, w),
                    ):
                        if best is None or sl < best:
                            best = sl
        radius = self.base_radius / 2
        if best is not None:
            guarded = Fraction(best, self.scale * self.scale)
            if guarded <= 0:
                raise ConstructionError(
                    f"secured angle slack {guarded} not positive before pair {p}",
                    pair=p,
                )
            radius = min(radius, guarded / (16 * self.radius_bound))
        return radius

    # -- candidate machinery --------------------------------------------------

    def _draw(self, target: int, radius: Fraction, attempt: int) -> Optional[tuple[int, ...]]:
        """Dyadic candidate displacement, in scaled integer units.

        Attempt 1 is the zero displacement.  Later attempts combine a
        vertical lift (last coordinate, between radius/4 and radius/2) with
        a small in-plane pull toward the cube center: each in-plane
        magnitude stays at most lift^2/(8 (dim-1)) so the quadratic norm
        term dominates every linear cross-term against coplanar points.
        """
        d = self.dim
        if attempt == 1:
            return (0,) * d
        sc = self.scale
        limit = (radius.numerator * sc) // radius.denominator  # floor(radius * scale)
        hi = limit // 2
        lo = max(1, limit // 4)
        if hi < 1:
            return None
        if lo > hi:
            lo = hi
        lift = self._rng.randint(lo, hi)
        tilt_cap = (lift * lift) // (8 * (d - 1) * sc)
        if tilt_cap < 1:
            return None
        orig = self._orig[target]
        disp = []
        for i in range(d - 1):
            mag = self._rng.randint(1, tilt_cap)
            disp.append(-mag if orig[i] > 0 else mag)
        disp.append(lift)
        return tuple(disp)

    def _candidate_ok(self, cand: tuple[int, ...], target: int) -> tuple[bool, Optional[int]]:
        """Exact acceptance check for a candidate position of the pair
        representative.  Verifies every angle of the updated layer that
        involves the displaced pair:

        - at any other point y, between the candidate and any z != -y;
        - at the candidate, between any y, z with y != -z;
        - at the candidate and its antipode, within antipode-containing
          triples (equivalent to |cand . z| < |cand|^2 for all other z).

        Returns (ok, worst slack seen) for diagnostics.
        """
        m = self._m
        skip_a = target
        skip_b = self._anti(target)
        pts = self._pts
        g = self._gram
        q = [0] * m
        for i in range(m):
            if i != skip_a and i != skip_b:
                q[i] = sum(a * b for a, b in zip(cand, pts[i]))
        nn = sum(a * a for a in cand)
        worst: Optional[int] = None
        for y in range(m):
            if y == skip_a or y == skip_b:
                continue
            ay = self._anti(y)
            gy = g[y]
            gyy = gy[y]
            qy = q[y]
            if qy >= nn or -qy >= nn:
                return False, min(worst, 0) if worst is not None else 0
            for z in range(m):
                if z == y or z == skip_a or z == skip_b or z == ay:
                    continue
                sl = q[z] - qy - gy[z] + gyy
                if worst is None or sl < worst:
                    worst = sl
                if sl <= 0:
                    return False, worst
                if z > y:
                    sl = gy[z] - qy - q[z] + nn
                    if worst is None or sl < worst:
                        worst = sl
                    if sl <= 0:
                        return False, worst
        return True, worst

    def step(self) -> PairTrace:
        """Displace the next pair.  Tries the zero displacement first, then
        seeded dyadic candidates; on exhausting the attempt budget the
        radius is halved once and the budget retried before giving up."""
        if self.fixed >= self.pair_count:
            raise ConstructionError("all pairs already fixed")
        p = self.fixed + 1
        target, target_anti = self.pair_indices(p)
        radius = self.pair_radius(p)
        cap = self.params.max_attempts_per_pair
        sc2 = self.scale * self.scale
        attempts = 0
        best_slack: Optional[Fraction] = None
        for phase_radius in (radius, radius / 2):
            budget_sq = phase_radius * phase_radius
            for _ in range(cap):
                attempts += 1
                disp = self._draw(target, phase_radius, attempts)
                if disp is None:
                    continue
                disp_sq = Fraction(sum(v * v for v in disp), sc2)
                if disp_sq >= budget_sq:
                    continue
                cand = tuple(a + b for a, b in zip(self._orig[target], disp))
                ok, worst = self._candidate_ok(cand, target)
                if worst is not None:
                    frac = Fraction(worst, sc2)
                    if best_slack is None or frac > best_slack:
                        best_slack = frac
                if ok:
                    self._apply(target, target_anti, cand)
                    trace = PairTrace(
                        pair=p,
                        radius=phase_radius,
                        attempts=attempts,
                        displacement_sq=disp_sq,
                    )
                    self.pair_traces.append(trace)
                    self.fixed = p
                    return trace
        raise ConstructionError(
            f"pair {p}: no acceptable displacement in {attempts} attempts "
            f"(best slack seen: {best_slack})",
            pair=p,
            attempts=attempts,
            best_slack=best_slack,
        )

    def _apply(self, target: int, target_anti: int, cand: tuple[int, ...]) -> None:
        self._pts[target] = cand
        self._pts[target_anti] = tuple(-v for v in cand)
        g = self._gram
        for i in (target, target_anti):
            pi = self._pts[i]
            for j in range(self._m):
                v = sum(a * b for a, b in zip(pi, self._pts[j]))
                g[i][j] = v
                g[j][i] = v

    def finish(self) -> tuple[PointSet, ConstructionTrace]:
        """Assemble the final set (cube layer plus apexes), then refuse to
        return it unless it has the right size, spans the space, and passes
        the full exact almost-acute scan."""
        if self.fixed != self.pair_count:
            raise ConstructionError(
                f"only {self.fixed} of {self.pair_count} pairs fixed"
            )
        sc = self.scale
        pts = [tuple(Fraction(v, sc) for v in row) for row in self._pts]
        zero_head = tuple(Fraction(0) for _ in range(self.dim - 1))
        pts.append(zero_head + (self.apex,))
        pts.append(zero_head + (-self.apex,))
        result = PointSet(self.dim, pts)
        expected = (1 << (self.dim - 1)) + 2
        if len(result) != expected:
            raise ConstructionError(
                f"built {len(result)} points, expected {expected}"
            )
        if not spans(result, self.dim):
            raise ConstructionError("output does not span the ambient space")
        report = is_almost_acute(result)
        if not report.ok:
            raise ConstructionError(
                f"final scan found {len(report.violations)} non-acute triple(s); "
                "refusing to return the set"
            )
        trace = ConstructionTrace(
            base_radius=self.base_radius,
            pairs=tuple(self.pair_traces),
            total_points=len(result),
        )
        return result, trace

    def run(self) -> tuple[PointSet, ConstructionTrace]:
        while self.fixed < self.pair_count:
            self.step()
        return self.finish()


def construct(params: ConstructionParams) -> tuple[PointSet, ConstructionTrace]:
    """Build an almost acute cs set of size 2^(dim-1)+2, deterministically
    for fixed (dim, apex height, seed, denom_bits).  The returned set has
    already passed the full exact almost-acute scan."""
    return ConstructionRun(params).run()
