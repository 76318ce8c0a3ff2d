"""Closed-form quantitative bounds used as sanity gates in certification.

Everything here is exact: interval endpoints are integers, edge-count
bounds are rationals, and the square-root ceiling is computed by integer
bracketing so it can never be off by one.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, isqrt
from typing import Optional

#: Dimensions where the exact maximum vertex count of a cs 2-neighborly
#: polytope is known; unknown for every larger dimension.
KNOWN_MAX_VERTICES = {3: 6, 4: 10}


@dataclass(frozen=True)
class BoundsTable:
    dim: int
    vertex_lower: int
    vertex_upper: int
    known_exact: Optional[int]
    antipodal_max: int
    acute_max: int
    acute_lower: int


def vertex_range(dim: int) -> tuple[int, int]:
    """Interval [2^(d-1)+2, 2^d-2] bracketing the maximum number of
    vertices of a cs 2-neighborly d-polytope, d >= 3."""
    if dim < 3:
        raise ValueError(f"vertex_range requires dim >= 3, got {dim}")
    return (1 << (dim - 1)) + 2, (1 << dim) - 2


def edge_bounds(dim: int, n: int) -> tuple[Fraction, Fraction]:
    """Exact rational bounds on the maximum edge count of a cs d-polytope
    with n vertices:

        (1 - 3^-floor(d/2 - 1)) * C(n, 2)  <=  max  <=  (1 - 2^-d) * n^2 / 2

    At d = 3 the floor in the lower bound is 0 and the bound degenerates to
    0; it is emitted verbatim.
    """
    if dim < 3:
        raise ValueError(f"edge_bounds requires dim >= 3, got {dim}")
    if n < 2 or n % 2 != 0:
        raise ValueError(f"edge_bounds requires an even n >= 2, got {n}")
    exponent = dim // 2 - 1
    lower = (1 - Fraction(1, 3**exponent)) * comb(n, 2)
    upper = (1 - Fraction(1, 2**dim)) * Fraction(n * n, 2)
    return lower, upper


def three_neighborly_vertex_cap(dim: int) -> int:
    """ceil(2*sqrt(2) * 3^(d/2)) = ceil(sqrt(8 * 3^d)), by integer
    bracketing: the least integer whose square reaches 8 * 3^d.  A cs
    d-polytope with at least this many vertices cannot be 3-neighborly."""
    target = 8 * 3**dim
    r = isqrt(target)
    return r if r * r == target else r + 1


def bounds_table(dim: int) -> BoundsTable:
    """All quantitative gates for one dimension: the vertex interval, the
    known exact maxima (d = 3, 4 only), the antipodal ceiling 2^d, the
    acute-set ceiling 2^d - 1, and the best known acute-set size
    2^(d-1)+1."""
    lower, upper = vertex_range(dim)
    return BoundsTable(
        dim=dim,
        vertex_lower=lower,
        vertex_upper=upper,
        known_exact=KNOWN_MAX_VERTICES.get(dim),
        antipodal_max=1 << dim,
        acute_max=(1 << dim) - 1,
        acute_lower=(1 << (dim - 1)) + 1,
    )
