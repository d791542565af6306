"""
Linear program models for the exact simplex core.
"""
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, Hashable, List, Mapping, Optional


class Relation(str, Enum):
    """Constraint relation."""
    LE = '<='
    EQ = '='
    GE = '>='


class Sense(str, Enum):
    """Objective sense."""
    MIN = 'min'
    MAX = 'max'


class LpStatus(str, Enum):
    """Outcome status of a solve."""
    OPTIMAL = 'optimal'
    INFEASIBLE = 'infeasible'
    UNBOUNDED = 'unbounded'


@dataclass(frozen=True)
class Constraint:
    """A row sum(coefficients[v] * v) <relation> rhs."""
    coefficients: Mapping[Hashable, Fraction]
    relation: Relation
    rhs: Fraction
    name: str = ''

    def evaluate(self, point: Mapping[Hashable, Fraction]) -> Fraction:
        return sum((Fraction(c) * point[v] for v, c in self.coefficients.items()), Fraction(0))

    def slack(self, point: Mapping[Hashable, Fraction]) -> Fraction:
        """Signed slack; negative means violated (for EQ, the residual rhs - lhs)."""
        lhs = self.evaluate(point)
        if self.relation == Relation.LE:
            return self.rhs - lhs
        if self.relation == Relation.GE:
            return lhs - self.rhs
        return self.rhs - lhs

    def is_satisfied(self, point: Mapping[Hashable, Fraction]) -> bool:
        slack = self.slack(point)
        return slack == 0 if self.relation == Relation.EQ else slack >= 0


@dataclass
class LpModel:
    """
    LP over nonnegative variables.

    Variables keep their insertion order; the simplex uses that order for
    Bland's rule, so identical models always pivot identically.
    """
    variables: List[Hashable] = field(default_factory=list)
    constraints: List[Constraint] = field(default_factory=list)
    objective: Dict[Hashable, Fraction] = field(default_factory=dict)
    sense: Sense = Sense.MIN

    def __post_init__(self):
        self._known = set(self.variables)
        if len(self._known) != len(self.variables):
            raise ValueError("Duplicate variable names")
        for row in self.constraints:
            self._check_refs(row.coefficients)
        self._check_refs(self.objective)

    def _check_refs(self, coefficients: Mapping[Hashable, Fraction]):
        unknown = [v for v in coefficients if v not in self._known]
        if unknown:
            raise ValueError(f"Unknown variable {unknown[0]!r}")

    def add_variable(self, name: Hashable) -> Hashable:
        if name in self._known:
            raise ValueError(f"Duplicate variable {name!r}")
        self.variables.append(name)
        self._known.add(name)
        return name

    def add_constraint(self, coefficients: Mapping[Hashable, Fraction], relation: Relation,
                       rhs, name: str = '') -> Constraint:
        self._check_refs(coefficients)
        row = Constraint(
            {v: Fraction(c) for v, c in coefficients.items() if c != 0},
            Relation(relation),
            Fraction(rhs),
            name
        )
        self.constraints.append(row)
        return row

    def set_objective(self, coefficients: Mapping[Hashable, Fraction], sense: Sense = Sense.MIN):
        self._check_refs(coefficients)
        self.objective = {v: Fraction(c) for v, c in coefficients.items() if c != 0}
        self.sense = Sense(sense)

    def objective_value(self, point: Mapping[Hashable, Fraction]) -> Fraction:
        return sum((c * point[v] for v, c in self.objective.items()), Fraction(0))


@dataclass(frozen=True)
class LpOutcome:
    """
    Result of solve_lp.

    Attributes:
        status: optimal, infeasible or unbounded
        values: Primal point (optimal status only)
        objective_value: Objective at the primal point (optimal status only)
        farkas: Row multipliers proving infeasibility (infeasible status only)
    """
    status: LpStatus
    values: Dict[Hashable, Fraction] = field(default_factory=dict)
    objective_value: Optional[Fraction] = None
    farkas: Optional[Dict[int, Fraction]] = None

    @property
    def is_optimal(self) -> bool:
        return self.status == LpStatus.OPTIMAL


@dataclass(frozen=True)
class Violation:
    """One violated row reported by check_feasible_point."""
    index: int
    name: str
    lhs: Fraction
    relation: Relation
    rhs: Fraction
    slack: Fraction
