"""Exact rational LP feasibility via phase-1 simplex with Bland's rule.

Only feasibility is needed here: given equality constraints a.u = b and
inequality constraints a.u >= b over free variables u, either produce a
rational witness (verified by substitution before it is returned) or report
infeasibility.  All arithmetic is over Fraction; Bland's smallest-index
pivot rule makes cycling impossible, which matters because the geometric
instances this solver sees are heavily degenerate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

DEFAULT_PIVOT_LIMIT = 200_000


class PivotLimitError(RuntimeError):
    """The simplex exceeded its pivot budget; indicates an internal bug
    since Bland's rule terminates finitely."""


@dataclass(frozen=True)
class LPProblem:
    """Feasibility problem over `num_vars` free rational variables.

    eq rows are (coeffs, rhs) meaning coeffs . u == rhs;
    ge rows are (coeffs, rhs) meaning coeffs . u >= rhs.
    """

    num_vars: int
    eq: tuple[tuple[tuple[Fraction, ...], Fraction], ...] = ()
    ge: tuple[tuple[tuple[Fraction, ...], Fraction], ...] = ()

    def __post_init__(self):
        if self.num_vars < 1:
            raise ValueError("LPProblem needs at least one variable")
        for coeffs, _ in (*self.eq, *self.ge):
            if len(coeffs) != self.num_vars:
                raise ValueError(
                    f"constraint row has {len(coeffs)} coefficients, expected {self.num_vars}"
                )


def make_problem(num_vars, eq=(), ge=()) -> LPProblem:
    """Build an LPProblem, coercing all coefficients to Fraction."""
    conv = lambda rows: tuple(
        (tuple(Fraction(c) for c in coeffs), Fraction(rhs)) for coeffs, rhs in rows
    )
    return LPProblem(num_vars=num_vars, eq=conv(eq), ge=conv(ge))


@dataclass(frozen=True)
class LPResult:
    feasible: bool
    witness: Optional[tuple[Fraction, ...]] = None
    pivots: int = 0


def _satisfies(prob: LPProblem, u: Sequence[Fraction]) -> bool:
    for coeffs, rhs in prob.eq:
        if sum((c * x for c, x in zip(coeffs, u)), Fraction(0)) != rhs:
            return False
    for coeffs, rhs in prob.ge:
        if sum((c * x for c, x in zip(coeffs, u)), Fraction(0)) < rhs:
            return False
    return True


def lp_feasible(prob: LPProblem, pivot_limit: int = DEFAULT_PIVOT_LIMIT) -> LPResult:
    """Decide feasibility exactly.

    Free variables are split as u = u+ - u-, slacks turn >= rows into
    equalities, and one artificial variable per row provides the initial
    basis.  Phase 1 minimizes the artificial sum; zero optimum yields a
    witness which is substituted into the original constraints before
    returning.
    """
    d = prob.num_vars
    n_ge = len(prob.ge)
    m = len(prob.eq) + n_ge
    if m == 0:
        return LPResult(True, tuple(Fraction(0) for _ in range(d)))

    zero = Fraction(0)
    one = Fraction(1)
    n_struct = 2 * d + n_ge  # u+, u-, slacks
    ncols = n_struct + m  # plus one artificial per row

    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []

    def structural_row(coeffs, slack_idx):
        row = [zero] * n_struct
        for j, c in enumerate(coeffs):
            row[j] = c
            row[d + j] = -c
        if slack_idx is not None:
            row[2 * d + slack_idx] = -one
        return row

    for coeffs, b in prob.eq:
        rows.append(structural_row(coeffs, None))
        rhs.append(b)
    for k, (coeffs, b) in enumerate(prob.ge):
        rows.append(structural_row(coeffs, k))
        rhs.append(b)

    # Normalize right-hand sides to be non-negative, then append the
    # artificial identity block.
    tab: list[list[Fraction]] = []
    for i in range(m):
        row = rows[i]
        b = rhs[i]
        if b < 0:
            row = [-c for c in row]
            b = -b
        art = [zero] * m
        art[i] = one
        tab.append(row + art + [b])
        rhs[i] = b

    basis = [n_struct + i for i in range(m)]
    rhs_col = ncols  # index of the rhs column in each tableau row

    # Reduced-cost row for minimizing the artificial sum: start from cost
    # 1 on artificials, 0 elsewhere, then price out the initial basis.
    red = [zero] * (ncols + 1)
    for j in range(n_struct, ncols):
        red[j] = one
    for row in tab:
        for j in range(ncols + 1):
            red[j] -= row[j]

    pivots = 0
    while True:
        enter = None
        for j in range(ncols):
            if red[j] < 0:
                enter = j  # Bland: smallest index
                break
        if enter is None:
            break
        leave = None
        best_ratio = None
        for i in range(m):
            a = tab[i][enter]
            if a > 0:
                ratio = tab[i][rhs_col] / a
                if (
                    best_ratio is None
                    or ratio < best_ratio
                    or (ratio == best_ratio and basis[i] < basis[leave])
                ):
                    best_ratio = ratio
                    leave = i
        if leave is None:
            raise PivotLimitError("phase-1 objective unbounded; internal error")
        pivots += 1
        if pivots > pivot_limit:
            raise PivotLimitError(f"pivot limit {pivot_limit} exceeded")
        _pivot(tab, red, leave, enter, rhs_col)
        basis[leave] = enter

    objective = sum(
        (tab[i][rhs_col] for i in range(m) if basis[i] >= n_struct), Fraction(0)
    )
    if objective != 0:
        return LPResult(False, None, pivots)

    value = [zero] * ncols
    for i in range(m):
        value[basis[i]] = tab[i][rhs_col]
    witness = tuple(value[j] - value[d + j] for j in range(d))
    if not _satisfies(prob, witness):
        raise PivotLimitError("witness failed substitution check; internal error")
    return LPResult(True, witness, pivots)


def _pivot(tab, red, pr: int, pc: int, rhs_col: int) -> None:
    prow = tab[pr]
    pv = prow[pc]
    if pv != 1:
        inv = 1 / pv
        tab[pr] = prow = [c * inv for c in prow]
    for i, row in enumerate(tab):
        if i == pr:
            continue
        f = row[pc]
        if f:
            tab[i] = [a - f * b for a, b in zip(row, prow)]
    f = red[pc]
    if f:
        for j in range(rhs_col + 1):
            red[j] -= f * prow[j]
