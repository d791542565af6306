"""
Certificate models: analysis parameters, ledger rows and the tour certificate.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Optional, Tuple

from stpath.models.edges import format_rational
from stpath.models.tour import StTour

GAMMA_MIN = Fraction(0)
GAMMA_MAX = Fraction(1, 2)


@dataclass(frozen=True)
class AnalysisParams:
    """Weight gamma of the s-t path in the basic parity correction."""
    gamma: Fraction = Fraction(1, 16)

    def __post_init__(self):
        object.__setattr__(self, 'gamma', Fraction(self.gamma))
        if not GAMMA_MIN <= self.gamma <= GAMMA_MAX:
            raise ValueError(f"gamma must lie in [0, 1/2], got {self.gamma}")


@dataclass(frozen=True)
class LedgerCheck:
    """
    One exact comparison of the ledger.

    Attributes:
        name: Row identifier
        lhs: Left-hand side
        relation: '<=' or '='
        rhs: Right-hand side
        tree: Tree index the row refers to, if any
        cut: Narrow-cut index the row refers to, if any
    """
    name: str
    lhs: Fraction
    relation: str
    rhs: Fraction
    tree: Optional[int] = None
    cut: Optional[int] = None

    @property
    def holds(self) -> bool:
        if self.relation == '=':
            return self.lhs == self.rhs
        return self.lhs <= self.rhs

    def describe(self) -> str:
        where = ''
        if self.tree is not None:
            where += f" tree={self.tree}"
        if self.cut is not None:
            where += f" cut={self.cut}"
        return f"{self.name}{where}: {self.lhs} {self.relation} {self.rhs}"

    def to_dict(self) -> dict:
        return {
            'name': self.name,
            'lhs': format_rational(self.lhs),
            'relation': self.relation,
            'rhs': format_rational(self.rhs),
            'tree': self.tree,
            'cut': self.cut,
            'holds': self.holds
        }


@dataclass(frozen=True)
class TreeLedger:
    """Per-tree costs entering the ledger."""
    index: int
    coefficient: Fraction
    group: int
    tree_cost: Fraction
    forest_cost: Fraction
    y_cost: Fraction
    y_modified_cost: Fraction
    join_modified_cost: Fraction
    surcharge: Fraction
    surcharge_bound: Fraction
    forest_tour_cost: Fraction
    tree_tour_cost: Fraction
    plan_status: str

    def to_dict(self) -> dict:
        return {
            'index': self.index,
            'coefficient': format_rational(self.coefficient),
            'group': self.group,
            'tree_cost': format_rational(self.tree_cost),
            'forest_cost': format_rational(self.forest_cost),
            'y_cost': format_rational(self.y_cost),
            'y_modified_cost': format_rational(self.y_modified_cost),
            'join_modified_cost': format_rational(self.join_modified_cost),
            'surcharge': format_rational(self.surcharge),
            'surcharge_bound': format_rational(self.surcharge_bound),
            'forest_tour_cost': format_rational(self.forest_tour_cost),
            'tree_tour_cost': format_rational(self.tree_tour_cost),
            'plan_status': self.plan_status
        }


@dataclass(frozen=True)
class SpecialCaseFlags:
    """
    Structure of the narrow-cut chain.

    Attributes:
        disjoint: Narrow cuts pairwise disjoint
        two_per_edge: Every support edge in at most two narrow cuts
        all_small: Every narrow cut has x*(Q) <= 3/2
        one_not_small: Exactly one distinct size z above 3/2
        z: That size, when one_not_small holds
    """
    disjoint: bool
    two_per_edge: bool
    all_small: bool
    one_not_small: bool
    z: Optional[Fraction] = None

    def to_dict(self) -> dict:
        return {
            'disjoint': self.disjoint,
            'two_per_edge': self.two_per_edge,
            'all_small': self.all_small,
            'one_not_small': self.one_not_small,
            'z': None if self.z is None else format_rational(self.z)
        }


@dataclass(frozen=True)
class TourCertificate:
    """
    Returned tour with the complete inequality ledger.

    Attributes:
        instance: Instance name
        gamma: Analysis parameter used
        lp_cost: c(x*)
        p_cost: c(p*)
        q_cost: c(q*)
        trees: Per-tree ledger entries
        b1: Forest-based bound
        b2: Tree-based bound
        guarantee: Factor times c(x*) that min(B1, B2) is checked against, if applicable
        tour: Returned tour
        baseline: Single-tree comparison tour
        opt: Held-Karp optimum when in range
        flags: Special-case structure of the chain
        checks: Every ledger row
    """
    instance: str
    gamma: Fraction
    lp_cost: Fraction
    p_cost: Fraction
    q_cost: Fraction
    trees: Tuple[TreeLedger, ...]
    b1: Fraction
    b2: Fraction
    guarantee: Optional[Fraction]
    tour: StTour
    baseline: Optional[StTour] = None
    opt: Optional[Fraction] = None
    flags: Optional[SpecialCaseFlags] = None
    checks: Tuple[LedgerCheck, ...] = ()
    extras: Dict[str, str] = field(default_factory=dict)

    @property
    def valid(self) -> bool:
        return all(check.holds for check in self.checks)

    @property
    def failures(self) -> Tuple[LedgerCheck, ...]:
        return tuple(check for check in self.checks if not check.holds)

    def to_dict(self) -> dict:
        return {
            'instance': self.instance,
            'gamma': format_rational(self.gamma),
            'lp_cost': format_rational(self.lp_cost),
            'p_cost': format_rational(self.p_cost),
            'q_cost': format_rational(self.q_cost),
            'trees': [tree.to_dict() for tree in self.trees],
            'b1': format_rational(self.b1),
            'b2': format_rational(self.b2),
            'guarantee': None if self.guarantee is None else format_rational(self.guarantee),
            'tour': self.tour.to_dict(),
            'baseline': None if self.baseline is None else self.baseline.to_dict(),
            'opt': None if self.opt is None else format_rational(self.opt),
            'flags': None if self.flags is None else self.flags.to_dict(),
            'checks': [check.to_dict() for check in self.checks],
            'extras': dict(sorted(self.extras.items())),
            'valid': self.valid
        }
