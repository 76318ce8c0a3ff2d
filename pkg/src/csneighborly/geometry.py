"""Exact rational geometry for centrally symmetric point configurations.

Coordinates are `fractions.Fraction` and every verdict is exact: there is no
tolerance parameter anywhere in this module.  Hot scans clear denominators
once per point set and run on plain integers; rescaling by a positive common
denominator multiplies every inner product by a positive constant and so
preserves every sign test.

The central predicate is the "almost acute" property of a centrally
symmetric (cs) set: for every ordered triple (x, y, z) of distinct points
with x != -z, the angle at y is strictly acute.  Angle tests are phrased as
sign tests on the slack (x - y) . (z - y), which is positive exactly when
the angle at y is acute (a degenerate zero angle counts as acute; the sets
built by this package never contain collinear triples, so the convention is
never exercised by the pipeline).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Iterator, Optional, Sequence

Scalar = Fraction
Point = tuple[Fraction, ...]

#: Default cap on the number of violations materialized by a scan.
DEFAULT_VIOLATION_CAP = 32


class GeometryError(ValueError):
    """Malformed geometric input: dimension mismatch, coincident points, or
    a set that violates an operation's precondition."""


class PointSetError(GeometryError):
    """A PointSet could not be built or lacks required structure."""


def point(coords: Iterable) -> Point:
    """Coerce an iterable of rationals (ints, Fractions, 'p/q' strings)."""
    return tuple(Fraction(c) for c in coords)


def dot(p: Point, q: Point) -> Fraction:
    """Exact inner product of two equal-dimension points."""
    if len(p) != len(q):
        raise GeometryError(f"dimension mismatch: {len(p)} vs {len(q)}")
    return sum((a * b for a, b in zip(p, q)), Fraction(0))


def vadd(p: Point, q: Point) -> Point:
    if len(p) != len(q):
        raise GeometryError(f"dimension mismatch: {len(p)} vs {len(q)}")
    return tuple(a + b for a, b in zip(p, q))


def vsub(p: Point, q: Point) -> Point:
    if len(p) != len(q):
        raise GeometryError(f"dimension mismatch: {len(p)} vs {len(q)}")
    return tuple(a - b for a, b in zip(p, q))


def vneg(p: Point) -> Point:
    return tuple(-a for a in p)


def vscale(p: Point, s) -> Point:
    s = Fraction(s)
    return tuple(a * s for a in p)


def norm_sq(p: Point) -> Fraction:
    return dot(p, p)


def is_origin(p: Point) -> bool:
    return all(a == 0 for a in p)


def angle_slack(x: Point, y: Point, z: Point) -> Fraction:
    """Slack of the angle at y in the triple (x, y, z): (x - y) . (z - y).

    Positive iff the angle is strictly acute, zero iff it is right or
    degenerate, negative iff obtuse.
    """
    return dot(vsub(x, y), vsub(z, y))


def is_acute_angle(x: Point, y: Point, z: Point) -> bool:
    """True iff the angle at y spanned by x and z is acute (slack > 0)."""
    if x == y or y == z or x == z:
        raise GeometryError("is_acute_angle requires pairwise distinct points")
    return angle_slack(x, y, z) > 0


def _primitive(p: Point) -> Point:
    """Rescale p by a positive rational so its coordinates become coprime
    integers.  Direction-preserving; used to keep certificates tidy."""
    den = reduce(lcm, (c.denominator for c in p), 1)
    ints = [int(c * den) for c in p]
    g = reduce(gcd, (abs(v) for v in ints), 0)
    if g > 1:
        ints = [v // g for v in ints]
    return tuple(Fraction(v) for v in ints)


@dataclass(frozen=True)
class TripleViolation:
    """An ordered triple (by index into the point set) whose angle at the
    middle point failed to be acute, together with the exact slack."""

    indices: tuple[int, int, int]
    slack: Fraction


@dataclass(frozen=True)
class CsReport:
    """Outcome of the central-symmetry check."""

    ok: bool
    pairing: Optional[dict[int, int]]
    failure_index: Optional[int] = None
    reason: Optional[str] = None


@dataclass(frozen=True)
class AlmostAcuteReport:
    """Outcome of the almost-acute scan.

    `checked` counts unordered {x, z} pairs tested per middle point y; each
    covers the mirrored ordered triple as well, since the slack is symmetric
    under swapping x and z.  `truncated` is set when more violations existed
    than the configured cap.
    """

    ok: bool
    violations: tuple[TripleViolation, ...]
    checked: int
    truncated: bool


class PointSet:
    """An ordered, duplicate-free set of rational points in R^d.

    Instances are immutable after construction.  The antipodal pairing and
    the integer Gram matrix (coordinates scaled by the common denominator)
    are computed lazily and cached; both are pure functions of the points.
    """

    __slots__ = ("dim", "points", "_index", "_pair_cache", "_grid_cache", "_gram_cache")

    def __init__(self, dim: int, points: Iterable[Iterable]):
        if dim < 1:
            raise PointSetError(f"dimension must be >= 1, got {dim}")
        pts = tuple(point(p) for p in points)
        for i, p in enumerate(pts):
            if len(p) != dim:
                raise PointSetError(f"point {i} has dimension {len(p)}, expected {dim}")
        index: dict[Point, int] = {}
        for i, p in enumerate(pts):
            if p in index:
                raise PointSetError(f"duplicate point at indices {index[p]} and {i}: {p}")
            index[p] = i
        self.dim = dim
        self.points = pts
        self._index = index
        self._pair_cache: Optional[tuple] = None
        self._grid_cache = None
        self._gram_cache = None

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[Point]:
        return iter(self.points)

    def __getitem__(self, i: int) -> Point:
        return self.points[i]

    def __eq__(self, other) -> bool:
        return isinstance(other, PointSet) and self.dim == other.dim and self.points == other.points

    def __hash__(self):
        return hash((self.dim, self.points))

    def __repr__(self) -> str:
        return f"PointSet(dim={self.dim}, n={len(self.points)})"

    def index_of(self, p: Point) -> int:
        try:
            return self._index[point(p)]
        except KeyError:
            raise PointSetError(f"point {p} is not in the set") from None

    def pairing(self) -> Optional[dict[int, int]]:
        """Antipodal pairing i -> j with points[j] == -points[i], or None if
        the set is not centrally symmetric (including any origin point)."""
        if self._pair_cache is None:
            self._pair_cache = (self._compute_pairing(),)
        return self._pair_cache[0]

    def _compute_pairing(self) -> Optional[dict[int, int]]:
        pairing: dict[int, int] = {}
        for i, p in enumerate(self.points):
            if is_origin(p):
                return None
            j = self._index.get(vneg(p))
            if j is None:
                return None
            pairing[i] = j
        return pairing

    def scaled_integer_grid(self) -> tuple[int, tuple[tuple[int, ...], ...]]:
        """(L, rows): coordinates times the common denominator L, as ints."""
        if self._grid_cache is None:
            den = 1
            for p in self.points:
                for c in p:
                    den = lcm(den, c.denominator)
            rows = tuple(
                tuple(c.numerator * (den // c.denominator) for c in p) for p in self.points
            )
            self._grid_cache = (den, rows)
        return self._grid_cache

    def gram(self) -> tuple[int, list[list[int]]]:
        """(L, G) with G[i][j] = (L x_i) . (L x_j) as exact integers."""
        if self._gram_cache is None:
            den, rows = self.scaled_integer_grid()
            n = len(rows)
            g = [[0] * n for _ in range(n)]
            for i in range(n):
                ri = rows[i]
                gi = g[i]
                for j in range(i, n):
                    v = sum(a * b for a, b in zip(ri, rows[j]))
                    gi[j] = v
                    g[j][i] = v
            self._gram_cache = (den, g)
        return self._gram_cache


def is_centrally_symmetric(s: PointSet) -> CsReport:
    """Check -x in S for every x in S and return the involution pairing.

    A point at the origin disqualifies the set (it would be its own
    antipode) and is reported with its index.
    """
    for i, p in enumerate(s.points):
        if is_origin(p):
            return CsReport(False, None, failure_index=i, reason="point at the origin")
    pairing: dict[int, int] = {}
    for i, p in enumerate(s.points):
        j = s._index.get(vneg(p))
        if j is None:
            return CsReport(False, None, failure_index=i, reason="missing antipode")
        pairing[i] = j
    return CsReport(True, pairing)


def is_acute_set(s: PointSet) -> tuple[bool, Optional[TripleViolation]]:
    """True iff every unordered triple forms a triangle with three acute
    angles.  On failure, returns one witnessing (ordered) triple."""
    n = len(s)
    if n < 3:
        raise GeometryError("is_acute_set requires at least 3 points")
    den, g = s.gram()
    den2 = den * den

    def slack(i: int, j: int, k: int) -> int:
        # (x_i - x_j) . (x_k - x_j), in grid units
        return g[i][k] - g[i][j] - g[j][k] + g[j][j]

    for i, j, k in itertools.combinations(range(n), 3):
        for x, y, z in ((i, j, k), (j, i, k), (i, k, j)):
            sl = slack(x, y, z)
            if sl <= 0:
                return False, TripleViolation((x, y, z), Fraction(sl, den2))
    return True, None


def is_almost_acute(s: PointSet, max_violations: int = DEFAULT_VIOLATION_CAP) -> AlmostAcuteReport:
    """Scan every ordered triple (x, y, z) of distinct points with x != -z
    and verify the angle at y is acute.

    Requires a centrally symmetric input (raises PointSetError otherwise;
    failing the symmetry precondition is an error, not a violation).  Exempt
    triples (x = -z) are skipped structurally and can never appear among the
    reported violations.  Violations are reported with x-index < z-index;
    the mirrored ordered triple has the same slack.
    """
    cs = is_centrally_symmetric(s)
    if not cs.ok:
        raise PointSetError(
            f"almost-acute scan requires a centrally symmetric set "
            f"(index {cs.failure_index}: {cs.reason})"
        )
    anti = cs.pairing
    assert anti is not None
    den, g = s.gram()
    den2 = den * den
    n = len(s)
    violations: list[TripleViolation] = []
    checked = 0
    truncated = False
    for y in range(n):
        gy = g[y]
        gyy = gy[y]
        for x in range(n):
            if x == y:
                continue
            ax = anti[x]
            gx = g[x]
            base = gyy - gy[x]
            for z in range(x + 1, n):
                if z == y or z == ax:
                    continue
                checked += 1
                sl = gx[z] - gy[z] + base
                if sl <= 0:
                    if len(violations) < max_violations:
                        violations.append(TripleViolation((x, y, z), Fraction(sl, den2)))
                    else:
                        truncated = True
    ok = not violations and not truncated
    return AlmostAcuteReport(ok=ok, violations=tuple(violations), checked=checked, truncated=truncated)


def _integer_rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank over Q of an integer matrix, by exact elimination."""
    m = [list(r) for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    rank = 0
    for c in range(ncols):
        piv = None
        for i in range(rank, len(m)):
            if m[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        pr = m[rank]
        pv = pr[c]
        for i in range(rank + 1, len(m)):
            f = m[i][c]
            if f:
                row = [a * pv - b * f for a, b in zip(m[i], pr)]
                g = reduce(gcd, (abs(v) for v in row), 0)
                if g > 1:
                    row = [v // g for v in row]
                m[i] = row
        rank += 1
        if rank == len(m):
            break
    return rank


def spans(s: PointSet, dim: Optional[int] = None) -> bool:
    """True iff the linear span of the points has the given dimension
    (defaults to the ambient dimension).  For a cs set the linear span
    coincides with the affine span.  Computed by exact integer rank."""
    d = s.dim if dim is None else dim
    _, rows = s.scaled_integer_grid()
    return _integer_rank(rows) == d


def acute_margin(s: PointSet, triples: Iterable[tuple[int, int, int]]) -> Fraction:
    """Minimum slack over the listed ordered index triples.

    Every listed triple must currently have strictly positive slack; a
    non-positive one (or an empty list) raises GeometryError.
    """
    den, g = s.gram()
    den2 = den * den
    best: Optional[int] = None
    count = 0
    for (x, y, z) in triples:
        count += 1
        sl = g[x][z] - g[x][y] - g[y][z] + g[y][y]
        if sl <= 0:
            raise GeometryError(
                f"triple {(x, y, z)} has non-positive slack {Fraction(sl, den2)}"
            )
        if best is None or sl < best:
            best = sl
    if count == 0 or best is None:
        raise GeometryError("acute_margin requires a non-empty triple set")
    return Fraction(best, den2)
