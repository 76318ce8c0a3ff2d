"""Exact certificates that conv(S) is a cs 2-neighborly polytope with vertex
set S.

Every positive verdict is backed by a FaceCertificate that re-validates by
pure dot products: exact equality on the tight points, strict inequality on
everything else.  Cheap direct certificates are attempted first; an exact
rational LP decides whatever they leave open.  A brute-force facet-
enumeration oracle provides an independent cross-check at small dimension.

Direct certificates:

- vertex x: direction x itself (threshold |x|^2), which supports the set at
  exactly x whenever the set is almost acute;
- edge {x, y}: the unique (up to scale) direction in span{x, y} taking equal
  values at x and y, namely u = a(x+y) - b(x-y) with a = |x-y|^2 and
  b = |x|^2 - |y|^2.  When b = 0 the parallelogram x, y, -x, -y is a
  rectangle and u reduces to x+y (case 1); otherwise the corrected direction
  handles the oblique case (case 2).  If u fails to dominate the remaining
  points the pair falls through to the LP.
"""

from __future__ import annotations

import itertools
import multiprocessing
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .bounds import bounds_table, edge_bounds
from .geometry import (
    DEFAULT_VIOLATION_CAP,
    AlmostAcuteReport,
    GeometryError,
    Point,
    PointSet,
    PointSetError,
    _primitive,
    dot,
    is_almost_acute,
    is_centrally_symmetric,
    norm_sq,
    point,
    spans,
    vadd,
    vneg,
    vsub,
)
from .linprog import LPProblem, lp_feasible, make_problem

VERTEX = "vertex"
EDGE = "edge"
STRIP = "strip"


@dataclass(frozen=True)
class FaceCertificate:
    """A linear functional witnessing a face (or an antipodal strip).

    For kind vertex/edge: direction . s < threshold for every point outside
    the tight set, with exact equality on the tight set (size 1 or 2).
    For kind strip: tight = (top, bottom) with direction . top maximal,
    direction . bottom minimal, and the two values distinct.
    """

    kind: str
    direction: Point
    threshold: Fraction
    tight: tuple[int, ...]


def verify_certificate(cert: FaceCertificate, s: PointSet) -> bool:
    """Re-validate a certificate by dot products alone."""
    values = [dot(cert.direction, p) for p in s.points]
    if cert.kind in (VERTEX, EDGE):
        expected = 1 if cert.kind == VERTEX else 2
        if len(set(cert.tight)) != expected:
            return False
        tight = set(cert.tight)
        for i, v in enumerate(values):
            if i in tight:
                if v != cert.threshold:
                    return False
            elif v >= cert.threshold:
                return False
        return True
    if cert.kind == STRIP:
        if len(cert.tight) != 2:
            return False
        top, bottom = cert.tight
        v_top, v_bot = values[top], values[bottom]
        if v_top != cert.threshold or v_top <= v_bot:
            return False
        return all(v_bot <= v <= v_top for v in values)
    return False


@dataclass(frozen=True)
class EdgeReport:
    """Verdict for one point pair: edge, not-edge, or antipodal-skip, plus
    the method that decided it and the certificate when there is one."""

    pair: tuple[int, int]
    verdict: str  # "edge" | "not-edge" | "antipodal-skip"
    method: Optional[str] = None  # "direct-case1" | "direct-case2" | "lp"
    certificate: Optional[FaceCertificate] = None


@dataclass(frozen=True)
class AntipodalReport:
    ok: bool
    certificates: dict[tuple[int, int], FaceCertificate]
    failures: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class TwoNeighborlyReport:
    ok: bool
    vertices_ok: bool
    vertex_failures: tuple[int, ...]
    expected_edges: int
    confirmed_edges: int
    methods: dict[str, int]
    non_edges: tuple[tuple[int, int], ...]
    edge_reports: tuple[EdgeReport, ...]


@dataclass(frozen=True)
class TheoremReport:
    """Aggregate verdict for one point set: every check needed to conclude
    that conv(S) is a cs 2-neighborly d-polytope with 2^(d-1)+2 vertices."""

    dim: int
    n: int
    cs_ok: bool
    spans_ok: bool
    size_ok: bool
    almost_acute: Optional[AlmostAcuteReport]
    two_neighborly: Optional[TwoNeighborlyReport]
    antipodal_ok: Optional[bool]
    bounds_ok: Optional[bool]
    edge_upper_bound: Optional[Fraction]
    ok: bool
    timings: dict[str, float]


# ---------------------------------------------------------------------------
# vertices
# ---------------------------------------------------------------------------

def _vertex_certificate_index(s: PointSet, i: int) -> Optional[FaceCertificate]:
    _, g = s.gram()
    row = g[i]
    m_int = row[i]
    if all(row[j] < m_int for j in range(len(s)) if j != i):
        x = s[i]
        return FaceCertificate(VERTEX, x, norm_sq(x), (i,))
    # LP fallback: u . (x - s) >= 1 for every other point.
    x = s[i]
    ge = [(vsub(x, s[j]), 1) for j in range(len(s)) if j != i]
    result = lp_feasible(make_problem(s.dim, ge=ge))
    if not result.feasible:
        return None
    cert = FaceCertificate(VERTEX, result.witness, dot(result.witness, x), (i,))
    if not verify_certificate(cert, s):
        raise RuntimeError("LP vertex witness failed re-validation; internal error")
    return cert


def vertex_certificate(x, s: PointSet) -> Optional[FaceCertificate]:
    """Certificate that x is a vertex of conv(S), or None if it is not.

    Tries the direction x itself (so the tight hyperplane is orthogonal to
    the segment [-x, x]); falls back to an exact LP.  Returning None is a
    verdict, not an error: x genuinely fails to be a vertex.
    """
    return _vertex_certificate_index(s, s.index_of(point(x)))


# ---------------------------------------------------------------------------
# edges
# ---------------------------------------------------------------------------

def _edge_direct_index(s: PointSet, i: int, j: int) -> tuple[Optional[FaceCertificate], str]:
    _, g = s.gram()
    a = g[i][i] - 2 * g[i][j] + g[j][j]  # |x-y|^2, grid units
    b = g[i][i] - g[j][j]                # |x|^2 - |y|^2, grid units
    cx, cy = a - b, a + b
    if cx == 0 and cy == 0:
        return None, "inconclusive"
    gi, gj = g[i], g[j]
    m_val = cx * gi[i] + cy * gj[i]
    assert cx * gi[j] + cy * gj[j] == m_val  # u . x == u . y by construction
    for t in range(len(s)):
        if t != i and t != j and cx * gi[t] + cy * gj[t] >= m_val:
            return None, "inconclusive"
    direction = _primitive(
        tuple(cx * p + cy * q for p, q in zip(s[i], s[j]))
    )
    cert = FaceCertificate(EDGE, direction, dot(direction, s[i]), (i, j))
    method = "direct-case1" if b == 0 else "direct-case2"
    return cert, method


def edge_certificate_direct(x, y, s: PointSet) -> tuple[Optional[FaceCertificate], str]:
    """Direct edge certificate for the pair {x, y}, or (None,
    "inconclusive") when the equal-value direction fails to dominate and
    the pair needs the LP.  Antipodal pairs violate the precondition."""
    i, j = s.index_of(point(x)), s.index_of(point(y))
    if i == j:
        raise GeometryError("edge certificate requires two distinct points")
    if s[i] == vneg(s[j]):
        raise GeometryError("edge certificate precondition: points must not be antipodal")
    return _edge_direct_index(s, i, j)


def _edge_lp_index(s: PointSet, i: int, j: int) -> Optional[FaceCertificate]:
    x, y = s[i], s[j]
    eq = [(vsub(x, y), 0)]
    ge = [(vsub(x, s[t]), 1) for t in range(len(s)) if t not in (i, j)]
    result = lp_feasible(make_problem(s.dim, eq=eq, ge=ge))
    if not result.feasible:
        return None
    cert = FaceCertificate(EDGE, result.witness, dot(result.witness, x), (i, j))
    if not verify_certificate(cert, s):
        raise RuntimeError("LP edge witness failed re-validation; internal error")
    return cert


def _edge_report_index(s: PointSet, i: int, j: int) -> EdgeReport:
    if s[i] == vneg(s[j]):
        return EdgeReport((i, j), "antipodal-skip")
    cert, method = _edge_direct_index(s, i, j)
    if cert is not None:
        return EdgeReport((i, j), "edge", method, cert)
    cert = _edge_lp_index(s, i, j)
    if cert is not None:
        return EdgeReport((i, j), "edge", "lp", cert)
    return EdgeReport((i, j), "not-edge", "lp")


def is_edge(x, y, s: PointSet) -> EdgeReport:
    """Decide whether [x, y] is an edge of conv(S).

    Antipodal pairs are skipped (the segment passes through the origin).
    Otherwise the direct certificate is tried, then the exact LP
    {u.(x-y) = 0, u.(x-t) >= 1 for all other t}, whose feasibility is
    equivalent to edge-hood because S is finite and separation scales.
    Not-edge verdicts are trusted from the exact solver (no dual
    certificate is kept) and cross-checked against the oracle at small
    dimension in the test suite.
    """
    i, j = s.index_of(point(x)), s.index_of(point(y))
    if i == j:
        raise GeometryError("is_edge requires two distinct points")
    return _edge_report_index(s, i, j)


# ---------------------------------------------------------------------------
# parallel edge sweep
# ---------------------------------------------------------------------------

_POOL_SET: Optional[PointSet] = None


def _pool_init(s: PointSet) -> None:
    global _POOL_SET
    _POOL_SET = s


def _pool_edge(pair: tuple[int, int]) -> EdgeReport:
    return _edge_report_index(_POOL_SET, pair[0], pair[1])


def _sweep_edges(s: PointSet, pairs: list[tuple[int, int]], jobs: int) -> list[EdgeReport]:
    """Edge reports for the listed pairs, merged in pair order regardless
    of worker scheduling."""
    if jobs <= 1 or len(pairs) < 64:
        return [_edge_report_index(s, i, j) for i, j in pairs]
    s.gram()  # materialize the shared cache before forking
    try:
        ctx = multiprocessing.get_context("fork")
        with ctx.Pool(jobs, initializer=_pool_init, initargs=(s,)) as pool:
            chunk = max(1, len(pairs) // (jobs * 8))
            return pool.map(_pool_edge, pairs, chunksize=chunk)
    except (ImportError, OSError, ValueError):
        return [_edge_report_index(s, i, j) for i, j in pairs]


# ---------------------------------------------------------------------------
# antipodal strips
# ---------------------------------------------------------------------------

def _strip_from_combo(s: PointSet, i: int, j: int, ci: int, cj: int) -> Optional[FaceCertificate]:
    """Try the direction ci*x_i + cj*x_j as a strip witness for the pair
    (i, j): maximal at i, minimal at j (ties with other points allowed)."""
    if ci == 0 and cj == 0:
        return None
    _, g = s.gram()
    gi, gj = g[i], g[j]
    n = len(s)
    vals = [ci * gi[t] + cj * gj[t] for t in range(n)]
    v_top, v_bot = vals[i], vals[j]
    if v_top <= v_bot:
        return None
    if any(v > v_top or v < v_bot for v in vals):
        return None
    direction = _primitive(tuple(ci * p + cj * q for p, q in zip(s[i], s[j])))
    return FaceCertificate(STRIP, direction, dot(direction, s[i]), (i, j))


def _strip_certificate_index(s: PointSet, i: int, j: int) -> Optional[FaceCertificate]:
    _, g = s.gram()
    # difference direction x - y
    cert = _strip_from_combo(s, i, j, 1, -1)
    if cert is not None:
        return cert
    # equal-value direction against the antipode of y: u.x = u.(-y)
    a = g[i][i] + 2 * g[i][j] + g[j][j]  # |x+y|^2
    b = g[i][i] - g[j][j]
    for ci, cj in ((a - b, -(a + b)), (b - a, a + b)):
        cert = _strip_from_combo(s, i, j, ci, cj)
        if cert is not None:
            return cert
    # exact LP: u.(x-t) >= 0 and u.(t-y) >= 0 for all t, u.(x-y) >= 1
    x, y = s[i], s[j]
    ge = [(vsub(x, y), 1)]
    for t in range(len(s)):
        if t != i:
            ge.append((vsub(x, s[t]), 0))
        if t != j:
            ge.append((vsub(s[t], y), 0))
    result = lp_feasible(make_problem(s.dim, ge=ge))
    if not result.feasible:
        return None
    cert = FaceCertificate(STRIP, result.witness, dot(result.witness, x), (i, j))
    if not verify_certificate(cert, s):
        raise RuntimeError("LP strip witness failed re-validation; internal error")
    return cert


def is_antipodal_set(s: PointSet) -> AntipodalReport:
    """Check that every pair of points lies on the two boundary hyperplanes
    of a closed slab containing the whole set.

    Each pair gets a strip certificate: cheap candidate directions first
    (the difference direction, then the equal-value direction against the
    antipode of the second point, which succeeds for every almost acute cs
    set), then the exact LP.  A pair is a failure only when the LP itself
    is infeasible, so the verdict is identical to running the LP for every
    pair.
    """
    n = len(s)
    if n < 2:
        raise GeometryError("is_antipodal_set requires at least 2 points")
    certificates: dict[tuple[int, int], FaceCertificate] = {}
    failures: list[tuple[int, int]] = []
    for i in range(n):
        for j in range(i + 1, n):
            cert = _strip_certificate_index(s, i, j)
            if cert is None:
                failures.append((i, j))
            else:
                certificates[(i, j)] = cert
    return AntipodalReport(not failures, certificates, tuple(failures))


# ---------------------------------------------------------------------------
# brute-force oracle
# ---------------------------------------------------------------------------

ORACLE_MAX_DIM = 5
ORACLE_MAX_POINTS = 36


@dataclass(frozen=True)
class Facet:
    tight: frozenset[int]
    normal: Point
    offset: Fraction


@dataclass(frozen=True)
class FaceLattice:
    facets: tuple[Facet, ...]
    edges: frozenset[frozenset[int]]


def _hyperplane_through(pts: Sequence[Point]) -> Optional[tuple[Point, Fraction]]:
    """Unique hyperplane u.x = m through the given d points of R^d, or None
    if they are affinely dependent.  Exact elimination on [x | -1]."""
    d = len(pts[0])
    rows = [[*p, Fraction(-1)] for p in pts]
    ncols = d + 1
    pivot_cols: list[int] = []
    r = 0
    for c in range(ncols):
        piv = None
        for k in range(r, len(rows)):
            if rows[k][c] != 0:
                piv = k
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pr = rows[r]
        pv = pr[c]
        rows[r] = pr = [v / pv for v in pr]
        for k in range(len(rows)):
            if k != r and rows[k][c] != 0:
                f = rows[k][c]
                rows[k] = [a - f * b for a, b in zip(rows[k], pr)]
        pivot_cols.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in pivot_cols]
    if len(free) != 1:
        return None
    fc = free[0]
    vec = [Fraction(0)] * ncols
    vec[fc] = Fraction(1)
    for row, pc in zip(rows, pivot_cols):
        vec[pc] = -row[fc]
    u = tuple(vec[:d])
    if all(c == 0 for c in u):
        return None
    return u, vec[d]


def brute_force_face_lattice(s: PointSet) -> FaceLattice:
    """Independent face oracle for small instances: enumerate every
    d-subset spanning a hyperplane, keep those with all points on one
    closed side (the facets, with exact normals oriented outward), and
    derive the edges as pairs whose smallest containing face -- the
    intersection of all facets containing both -- is exactly the pair.

    Guard rails: dim <= 5 and at most 36 points.  Convex position is not
    assumed; points lying on a facet's hyperplane count as part of its
    tight set, which matches the strict tight-set semantics of the LP-based
    edge test.
    """
    if s.dim > ORACLE_MAX_DIM:
        raise GeometryError(f"oracle limited to dim <= {ORACLE_MAX_DIM}, got {s.dim}")
    if len(s) > ORACLE_MAX_POINTS:
        raise GeometryError(f"oracle limited to {ORACLE_MAX_POINTS} points, got {len(s)}")
    n = len(s)
    d = s.dim
    facets: dict[frozenset[int], Facet] = {}
    for subset in itertools.combinations(range(n), d):
        plane = _hyperplane_through([s[i] for i in subset])
        if plane is None:
            continue
        u, m = plane
        tight = []
        above = below = False
        for t in range(n):
            v = dot(u, s[t]) - m
            if v == 0:
                tight.append(t)
            elif v > 0:
                above = True
            else:
                below = True
            if above and below:
                break
        if above and below:
            continue
        if above:  # orient outward: non-tight side strictly below
            u, m = vneg(u), -m
        key = frozenset(tight)
        if key not in facets:
            facets[key] = Facet(key, u, m)
    edges: set[frozenset[int]] = set()
    facet_keys = list(facets)
    for i in range(n):
        for j in range(i + 1, n):
            containing = [k for k in facet_keys if i in k and j in k]
            if not containing:
                continue
            common = frozenset.intersection(*containing)
            if common == {i, j}:
                edges.add(frozenset((i, j)))
    return FaceLattice(tuple(facets.values()), frozenset(edges))


# ---------------------------------------------------------------------------
# two-neighborliness and the full aggregate
# ---------------------------------------------------------------------------

def is_two_neighborly(s: PointSet, jobs: int = 1) -> TwoNeighborlyReport:
    """Certify every point as a vertex and every non-antipodal pair as an
    edge.  Requires a centrally symmetric input."""
    cs = is_centrally_symmetric(s)
    if not cs.ok:
        raise PointSetError(
            f"two-neighborliness check requires a cs set "
            f"(index {cs.failure_index}: {cs.reason})"
        )
    pairing = cs.pairing
    assert pairing is not None
    n = len(s)
    vertex_failures = tuple(
        i for i in range(n) if _vertex_certificate_index(s, i) is None
    )
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n) if pairing[i] != j]
    reports = _sweep_edges(s, pairs, jobs)
    methods: dict[str, int] = {"direct-case1": 0, "direct-case2": 0, "lp": 0}
    non_edges: list[tuple[int, int]] = []
    confirmed = 0
    for rep in reports:
        if rep.verdict == "edge":
            confirmed += 1
            methods[rep.method] += 1
        elif rep.verdict == "not-edge":
            non_edges.append(rep.pair)
    expected = n * (n - 1) // 2 - n // 2
    ok = not vertex_failures and not non_edges and confirmed == expected
    return TwoNeighborlyReport(
        ok=ok,
        vertices_ok=not vertex_failures,
        vertex_failures=vertex_failures,
        expected_edges=expected,
        confirmed_edges=confirmed,
        methods=methods,
        non_edges=tuple(non_edges),
        edge_reports=tuple(reports),
    )


def certify_theorem(
    s: PointSet,
    dim: Optional[int] = None,
    jobs: int = 1,
    max_violations: int = DEFAULT_VIOLATION_CAP,
) -> TheoremReport:
    """Run the full certification battery on a point set.

    Aggregates: central symmetry, spanning, size 2^(d-1)+2, the almost-acute
    scan, per-vertex and per-edge certificates, antipodal strips, and the
    quantitative sanity gates (vertex-count interval, antipodal maximum,
    edge-count ceiling).  Overall ok iff every check passes.  Timings are
    kept on the in-memory report only; serialized reports stay
    byte-reproducible.
    """
    d = s.dim if dim is None else dim
    n = len(s)
    timings: dict[str, float] = {}

    t0 = time.perf_counter()
    cs = is_centrally_symmetric(s)
    timings["cs"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    spans_ok = spans(s, d)
    timings["spans"] = time.perf_counter() - t0

    size_ok = n == (1 << (d - 1)) + 2

    almost: Optional[AlmostAcuteReport] = None
    two: Optional[TwoNeighborlyReport] = None
    antipodal_ok: Optional[bool] = None
    if cs.ok:
        t0 = time.perf_counter()
        almost = is_almost_acute(s, max_violations=max_violations)
        timings["almost_acute"] = time.perf_counter() - t0

        t0 = time.perf_counter()
        two = is_two_neighborly(s, jobs=jobs)
        timings["two_neighborly"] = time.perf_counter() - t0

        t0 = time.perf_counter()
        antipodal_ok = is_antipodal_set(s).ok
        timings["antipodal"] = time.perf_counter() - t0

    bounds_ok: Optional[bool] = None
    edge_upper: Optional[Fraction] = None
    if d >= 3:
        table = bounds_table(d)
        bounds_ok = table.vertex_lower <= n <= table.vertex_upper and n <= table.antipodal_max
        if n >= 2 and n % 2 == 0:
            _, edge_upper = edge_bounds(d, n)
            if two is not None:
                bounds_ok = bounds_ok and Fraction(two.confirmed_edges) <= edge_upper
        else:
            bounds_ok = False
    # d == 2 predates the quantitative tables; the gate passes vacuously.

    ok = (
        cs.ok
        and spans_ok
        and size_ok
        and almost is not None
        and almost.ok
        and two is not None
        and two.ok
        and bool(antipodal_ok)
        and (bounds_ok is None or bounds_ok)
    )
    return TheoremReport(
        dim=d,
        n=n,
        cs_ok=cs.ok,
        spans_ok=spans_ok,
        size_ok=size_ok,
        almost_acute=almost,
        two_neighborly=two,
        antipodal_ok=antipodal_ok,
        bounds_ok=bounds_ok,
        edge_upper_bound=edge_upper,
        ok=ok,
        timings=timings,
    )


def theorem_report_json(
    report: TheoremReport,
    version: str,
    config: Optional[dict] = None,
    oracle: Optional[dict] = None,
) -> dict:
    """Serializable form of a TheoremReport.  Rationals become 'p/q'
    strings; timings are intentionally omitted so identical runs produce
    identical documents."""
    two = report.two_neighborly
    almost = report.almost_acute
    doc = {
        "version": version,
        "d": report.dim,
        "n": report.n,
        "cs": report.cs_ok,
        "spans": report.spans_ok,
        "size_ok": report.size_ok,
        "almost_acute": {
            "ok": bool(almost.ok) if almost is not None else False,
            "violations": [
                {"triple": list(v.indices), "slack": str(v.slack)}
                for v in (almost.violations if almost is not None else ())
            ],
        },
        "vertices": {"ok": bool(two.vertices_ok) if two is not None else False},
        "edges": {
            "expected": two.expected_edges if two is not None else None,
            "confirmed": two.confirmed_edges if two is not None else None,
            "methods": {
                "direct": (
                    two.methods["direct-case1"] + two.methods["direct-case2"]
                    if two is not None
                    else 0
                ),
                "lp": two.methods["lp"] if two is not None else 0,
            },
        },
        "antipodal": bool(report.antipodal_ok) if report.antipodal_ok is not None else False,
        "two_neighborly": bool(two.ok) if two is not None else False,
        "bounds": {
            "ok": report.bounds_ok,
            "edge_upper": str(report.edge_upper_bound)
            if report.edge_upper_bound is not None
            else None,
        },
        "theorem_ok": report.ok,
    }
    if config is not None:
        doc["config"] = config
    if oracle is not None:
        doc["oracle"] = oracle
    return doc
