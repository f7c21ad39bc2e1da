"""
A small exact two-phase simplex solver over Fractions.

min c^T x  s.t.  A_eq x = b_eq,  A_ub x <= b_ub,  x >= 0

Bland's rule picks entering and leaving variables, so the method terminates.
"""
import logging
from fractions import Fraction
from typing import List, Literal, Optional, Sequence

from pydantic import BaseModel, ConfigDict

logger = logging.getLogger(__name__)

Status = Literal["optimal", "infeasible", "unbounded"]


class LPResult(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    status: Status
    x: Optional[List[Fraction]] = None
    objective: Optional[Fraction] = None
    pivots: int = 0


class _Tableau:
    """Rows of the constraint matrix with the right-hand side in the last column"""

    def __init__(self, rows: List[List[Fraction]], basis: List[int]):
        self.rows = rows
        self.basis = basis
        self.pivots = 0

    def pivot(self, row: int, col: int, objective: List[Fraction]) -> None:
        pivot_row = self.rows[row]
        value = pivot_row[col]
        self.rows[row] = pivot_row = [x / value for x in pivot_row]
        for i, other in enumerate(self.rows):
            factor = other[col]
            if i != row and factor != 0:
                self.rows[i] = [x - factor * y for x, y in zip(other, pivot_row)]
        factor = objective[col]
        if factor != 0:
            objective[:] = [x - factor * y for x, y in zip(objective, pivot_row)]
        self.basis[row] = col
        self.pivots += 1

    def reduced_costs(self, costs: Sequence[Fraction]) -> List[Fraction]:
        """Objective row c - c_B B^-1 A, with -c_B B^-1 b in the last column"""
        objective = list(costs) + [Fraction(0)]
        for row, var in zip(self.rows, self.basis):
            factor = objective[var]
            if factor != 0:
                objective = [x - factor * y for x, y in zip(objective, row)]
        return objective

    def run(self, objective: List[Fraction], allowed: int) -> bool:
        """Minimize over the first ``allowed`` columns; False when unbounded"""
        while True:
            entering = next((j for j in range(allowed) if objective[j] < 0), None)
            if entering is None:
                return True
            leaving = None
            best = None
            for i, row in enumerate(self.rows):
                if row[entering] > 0:
                    ratio = row[-1] / row[entering]
                    if (
                        best is None
                        or ratio < best
                        or (ratio == best and self.basis[i] < self.basis[leaving])
                    ):
                        best, leaving = ratio, i
            if leaving is None:
                return False
            self.pivot(leaving, entering, objective)


def solve_lp(
    c: Sequence,
    a_eq: Sequence[Sequence] = (),
    b_eq: Sequence = (),
    a_ub: Sequence[Sequence] = (),
    b_ub: Sequence = (),
) -> LPResult:
    """
    Solve a linear program exactly

    :param c: objective coefficients, one per variable
    :param a_eq: equality rows
    :param b_eq: equality right-hand sides
    :param a_ub: inequality rows (<=)
    :param b_ub: inequality right-hand sides
    :return: status, optimal point and objective value
    """
    n = len(c)
    m_ub = len(a_ub)
    # every constraint becomes an equality: x, slacks, then one artificial per row
    rows: List[List[Fraction]] = []
    for coeffs, rhs in zip(a_eq, b_eq):
        rows.append([Fraction(x) for x in coeffs] + [Fraction(0)] * m_ub + [Fraction(rhs)])
    for i, (coeffs, rhs) in enumerate(zip(a_ub, b_ub)):
        slack = [Fraction(0)] * m_ub
        slack[i] = Fraction(1)
        rows.append([Fraction(x) for x in coeffs] + slack + [Fraction(rhs)])
    for i, row in enumerate(rows):
        if row[-1] < 0:
            rows[i] = [-x for x in row]

    n_real = n + m_ub
    m = len(rows)
    for i, row in enumerate(rows):
        artificial = [Fraction(0)] * m
        artificial[i] = Fraction(1)
        rows[i] = row[:-1] + artificial + [row[-1]]

    tableau = _Tableau(rows, basis=[n_real + i for i in range(m)])

    # Phase I: minimize the sum of artificials
    phase_one = tableau.reduced_costs([Fraction(0)] * n_real + [Fraction(1)] * m)
    tableau.run(phase_one, allowed=n_real + m)
    if -phase_one[-1] > 0:
        logger.debug(f"LP infeasible after {tableau.pivots} pivots")
        return LPResult(status="infeasible", pivots=tableau.pivots)

    # drive artificials out of the basis; rows where that is impossible are redundant
    for i in reversed(range(m)):
        if tableau.basis[i] < n_real:
            continue
        col = next((j for j in range(n_real) if tableau.rows[i][j] != 0), None)
        if col is None:
            del tableau.rows[i]
            del tableau.basis[i]
        else:
            tableau.pivot(i, col, phase_one)

    # Phase II
    costs = [Fraction(x) for x in c] + [Fraction(0)] * (m_ub + m)
    phase_two = tableau.reduced_costs(costs)
    if not tableau.run(phase_two, allowed=n_real):
        return LPResult(status="unbounded", pivots=tableau.pivots)

    x = [Fraction(0)] * n_real
    for row, var in zip(tableau.rows, tableau.basis):
        if var < n_real:
            x[var] = row[-1]
    objective = sum((Fraction(ci) * xi for ci, xi in zip(c, x)), Fraction(0))
    logger.debug(f"LP optimal {objective} after {tableau.pivots} pivots")
    return LPResult(status="optimal", x=x[:n], objective=objective, pivots=tableau.pivots)
