"""
Exact rational linear programming: two-phase primal simplex with Bland's rule
on a dense tableau of Fractions.
"""
import logging
from fractions import Fraction
from typing import Dict, Hashable, List, Mapping, Optional

from stpath.models.lp import Constraint, LpModel, LpOutcome, LpStatus, Relation, Sense, Violation
from stpath.services.errors import InputError

logger = logging.getLogger(__name__)

ZERO = Fraction(0)
ONE = Fraction(1)


class SimplexTableau:
    """
    Dense tableau over columns 0..width-1 with one basic column per row.

    ``reduced`` holds reduced costs of a minimization objective and
    ``value`` the objective value at the current basis.
    """

    def __init__(self, rows: List[List[Fraction]], rhs: List[Fraction], basis: List[int]):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis
        self.width = len(rows[0]) if rows else 0
        self.reduced: List[Fraction] = [ZERO] * self.width
        self.value = ZERO
        self.pivots = 0

    def price(self, costs: List[Fraction]):
        """Set reduced costs and objective value for column costs ``costs``."""
        self.reduced = list(costs)
        self.value = ZERO
        for i, column in enumerate(self.basis):
            weight = costs[column]
            if weight:
                row = self.rows[i]
                for j in range(self.width):
                    if row[j]:
                        self.reduced[j] -= weight * row[j]
                self.value += weight * self.rhs[i]

    def pivot(self, r: int, j: int):
        row = self.rows[r]
        piv = row[j]
        if piv != ONE:
            for l in range(self.width):
                if row[l]:
                    row[l] /= piv
            self.rhs[r] /= piv
        for k, other in enumerate(self.rows):
            if k == r:
                continue
            factor = other[j]
            if factor:
                for l in range(self.width):
                    if row[l]:
                        other[l] -= factor * row[l]
                self.rhs[k] -= factor * self.rhs[r]
        factor = self.reduced[j]
        if factor:
            for l in range(self.width):
                if row[l]:
                    self.reduced[l] -= factor * row[l]
            self.value += factor * self.rhs[r]
        self.basis[r] = j
        self.pivots += 1

    def entering(self, allowed: int) -> Optional[int]:
        """Bland: lowest-index column among the first ``allowed`` with negative reduced cost."""
        for j in range(allowed):
            if self.reduced[j] < 0:
                return j
        return None

    def leaving(self, j: int) -> Optional[int]:
        """Bland ratio test; ties go to the row whose basic column index is lowest."""
        best = None
        for i, row in enumerate(self.rows):
            if row[j] > 0:
                ratio = self.rhs[i] / row[j]
                key = (ratio, self.basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        return None if best is None else best[1]

    def run(self, allowed: int) -> LpStatus:
        """Minimize until optimal or unbounded using columns below ``allowed``."""
        while True:
            j = self.entering(allowed)
            if j is None:
                return LpStatus.OPTIMAL
            r = self.leaving(j)
            if r is None:
                return LpStatus.UNBOUNDED
            self.pivot(r, j)

    def drop_row(self, r: int):
        del self.rows[r]
        del self.rhs[r]
        del self.basis[r]


def _standard_form(model: LpModel):
    """
    Rows normalized to rhs >= 0 with slack/surplus columns and one artificial per row.

    Returns (tableau, signs, n_structural, n_real) where columns below n_real
    are structural plus slack/surplus and the rest are artificial.
    """
    index = {v: j for j, v in enumerate(model.variables)}
    n_vars = len(model.variables)
    n_slack = sum(1 for row in model.constraints if row.relation != Relation.EQ)
    m = len(model.constraints)
    n_real = n_vars + n_slack
    width = n_real + m

    rows, rhs, signs = [], [], []
    slack_column = n_vars
    for i, constraint in enumerate(model.constraints):
        row = [ZERO] * width
        for v, c in constraint.coefficients.items():
            row[index[v]] += Fraction(c)
        if constraint.relation == Relation.LE:
            row[slack_column] = ONE
            slack_column += 1
        elif constraint.relation == Relation.GE:
            row[slack_column] = -ONE
            slack_column += 1
        b = Fraction(constraint.rhs)
        sign = 1
        if b < 0:
            sign = -1
            row = [-value for value in row]
            b = -b
        row[n_real + i] = ONE
        rows.append(row)
        rhs.append(b)
        signs.append(sign)

    tableau = SimplexTableau(rows, rhs, [n_real + i for i in range(m)])
    return tableau, signs, n_vars, n_real


def solve_lp(model: LpModel) -> LpOutcome:
    """
    Solve an LP exactly.

    Args:
        model: LP over nonnegative variables

    Returns:
        LpOutcome with a vertex solution when optimal, Farkas row multipliers
        when infeasible
    """
    tableau, signs, n_vars, n_real = _standard_form(model)
    m = len(signs)
    width = n_real + m

    # Phase 1: minimize the sum of artificials
    phase1 = [ZERO] * n_real + [ONE] * m
    tableau.price(phase1)
    tableau.run(n_real)
    if tableau.value > 0:
        # y_i = 1 - reduced cost of artificial i, mapped back through the row sign
        farkas = {
            i: (ONE - tableau.reduced[n_real + i]) * signs[i]
            for i in range(m)
        }
        logger.debug("LP infeasible after %d pivots (phase-1 value %s)", tableau.pivots, tableau.value)
        return LpOutcome(LpStatus.INFEASIBLE, farkas={i: y for i, y in farkas.items() if y})

    # Drive remaining artificials out of the basis; drop redundant rows
    r = 0
    while r < len(tableau.rows):
        if tableau.basis[r] >= n_real:
            row = tableau.rows[r]
            column = next((j for j in range(n_real) if row[j] != 0), None)
            if column is None:
                tableau.drop_row(r)
                continue
            tableau.pivot(r, column)
        r += 1

    # Phase 2 over real columns only
    costs = [ZERO] * width
    flip = -ONE if model.sense == Sense.MAX else ONE
    positions = {v: j for j, v in enumerate(model.variables)}
    for v, c in model.objective.items():
        costs[positions[v]] = flip * Fraction(c)
    tableau.price(costs)
    status = tableau.run(n_real)
    if status == LpStatus.UNBOUNDED:
        logger.debug("LP unbounded after %d pivots", tableau.pivots)
        return LpOutcome(LpStatus.UNBOUNDED)

    values: Dict[Hashable, Fraction] = {v: ZERO for v in model.variables}
    for i, column in enumerate(tableau.basis):
        if column < n_vars:
            values[model.variables[column]] = tableau.rhs[i]
    objective = model.objective_value(values)
    logger.debug("LP optimal after %d pivots, value %s", tableau.pivots, objective)
    return LpOutcome(LpStatus.OPTIMAL, values=values, objective_value=objective)


def check_feasible_point(model: LpModel, point: Mapping[Hashable, Fraction]) -> List[Violation]:
    """
    List every violated constraint exactly; bound violations get index -1.

    Raises:
        InputError: If the point names an unknown variable or misses one
    """
    known = set(model.variables)
    unknown = [v for v in point if v not in known]
    if unknown:
        raise InputError(f"Unknown variable {unknown[0]!r} in point")
    missing = [v for v in model.variables if v not in point]
    if missing:
        raise InputError(f"Point does not assign variable {missing[0]!r}")

    point = {v: Fraction(value) for v, value in point.items()}
    violations: List[Violation] = []
    for v in model.variables:
        if point[v] < 0:
            violations.append(Violation(-1, f"{v} >= 0", point[v], Relation.GE, ZERO, point[v]))
    for i, row in enumerate(model.constraints):
        if not row.is_satisfied(point):
            violations.append(Violation(i, row.name, row.evaluate(point), row.relation, row.rhs, row.slack(point)))
    return violations


def farkas_is_valid(model: LpModel, farkas: Mapping[int, Fraction]) -> bool:
    """
    True when the multipliers prove infeasibility: every structural column
    aggregates to <= 0, sign conditions hold for inequality rows and the
    aggregated rhs is positive.
    """
    totals = {v: ZERO for v in model.variables}
    rhs = ZERO
    for i, y in farkas.items():
        row: Constraint = model.constraints[i]
        if row.relation == Relation.LE and y > 0:
            return False
        if row.relation == Relation.GE and y < 0:
            return False
        for v, c in row.coefficients.items():
            totals[v] += y * c
        rhs += y * row.rhs
    return rhs > 0 and all(total <= 0 for total in totals.values())
