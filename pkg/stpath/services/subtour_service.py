"""
Subtour elimination LP for the s-t path TSP, solved by cutting planes with
exact minimum-cut separation.
"""
import logging
from fractions import Fraction
from itertools import combinations
from typing import AbstractSet, Iterable, List, Mapping, Optional, Tuple

from stpath.models.edges import ONE, ZERO, Edge, crosses
from stpath.models.instance import Instance
from stpath.models.lp import LpModel, Relation, Sense
from stpath.models.solution import LpSolution
from stpath.services.errors import InternalError
from stpath.services.flows import capacity_graph, fundamental_cuts, gomory_hu_tree, min_cut
from stpath.services.ratlp import check_feasible_point, solve_lp

logger = logging.getLogger(__name__)


def normalize_side(side: AbstractSet[int], n: int, s: int) -> frozenset:
    """Return the side of the cut that contains s."""
    side = frozenset(side)
    return side if s in side else frozenset(range(n)) - side


def demand(side: AbstractSet[int], s: int, t: int) -> int:
    """f(U): 1 when U separates s and t, 2 otherwise."""
    return 1 if (s in side) != (t in side) else 2


def build_subtour_model(instance: Instance, sides: Iterable[AbstractSet[int]] = ()) -> LpModel:
    """
    Degree equalities plus one cut row per given side, over all vertex pairs.

    Args:
        instance: The instance whose pairs become variables
        sides: Vertex sets U receiving the row x(delta(U)) >= f(U)
    """
    pairs = list(instance.pairs())
    model = LpModel(variables=list(pairs))
    for v in instance.vertices:
        target = 1 if v in (instance.s, instance.t) else 2
        model.add_constraint({e: ONE for e in pairs if v in e}, Relation.EQ, target, name=f"degree[{v}]")
    for side in sides:
        side = frozenset(side)
        model.add_constraint(
            {e: ONE for e in pairs if crosses(e, side)},
            Relation.GE,
            demand(side, instance.s, instance.t),
            name=f"cut{sorted(side)}"
        )
    model.set_objective({e: instance.costs[e] for e in pairs}, Sense.MIN)
    return model


def all_sides(n: int, s: int) -> List[frozenset]:
    """Every proper vertex set containing s (2^(n-1) - 1 of them)."""
    others = [v for v in range(n) if v != s]
    sides = []
    for size in range(0, n - 1):
        for chosen in combinations(others, size):
            sides.append(frozenset((s,) + chosen))
    return sides


def separate(x: Mapping[Edge, Fraction], instance: Instance) -> Optional[Tuple[frozenset, Fraction]]:
    """
    Most violated subtour constraint, if any.

    A virtual s-t edge of weight 1 turns every constraint into
    x'(delta(U)) >= 2, so the minimum cut of a Gomory-Hu tree of x' finds the
    most violated one. The minimum s-t cut is checked against threshold 1 as
    well. Ties go to the lexicographically smallest sorted side.

    Returns:
        (U containing s, violation) or None when x satisfies all constraints
    """
    n, s, t = instance.n, instance.s, instance.t
    weights = dict(x)
    key = (s, t) if s < t else (t, s)
    weights[key] = weights.get(key, ZERO) + ONE
    graph = capacity_graph(n, weights)

    candidates: List[Tuple[Fraction, Tuple[int, ...], frozenset]] = []
    for _, side, _ in fundamental_cuts(gomory_hu_tree(graph)):
        side = normalize_side(side, n, s)
        value = sum((w for e, w in x.items() if crosses(e, side)), ZERO)
        violation = demand(side, s, t) - value
        candidates.append((-violation, tuple(sorted(side)), side))

    st_value, st_side = min_cut(capacity_graph(n, x), s, t)
    candidates.append((-(ONE - st_value), tuple(sorted(st_side)), st_side))

    negated, _, side = min(candidates)
    violation = -negated
    if violation <= 0:
        return None
    return side, violation


class SubtourService:
    """Cutting-plane solver for the subtour elimination LP."""

    def __init__(self, max_rounds: int = 10000):
        self.max_rounds = max_rounds

    def solve_subtour_lp(self, instance: Instance) -> LpSolution:
        """
        Optimal x* of the exponential LP.

        Starts from degree equalities plus the cuts {s} and {t}, adds one most
        violated cut per round and stops when separation finds nothing.

        Raises:
            InternalError: If a cut repeats or the relaxation becomes infeasible
        """
        sides: List[frozenset] = [frozenset({instance.s}), normalize_side({instance.t}, instance.n, instance.s)]
        seen = set(sides)

        for rounds in range(1, self.max_rounds + 1):
            model = build_subtour_model(instance, sides)
            outcome = solve_lp(model)
            if not outcome.is_optimal:
                raise InternalError(f"Subtour relaxation is {outcome.status.value} in round {rounds}")
            x = {e: value for e, value in outcome.values.items() if value}
            found = separate(x, instance)
            if found is None:
                logger.info("Subtour LP solved in %d rounds with %d cuts, value %s",
                            rounds, len(sides), outcome.objective_value)
                return LpSolution(
                    n=instance.n, s=instance.s, t=instance.t, x=x,
                    value=outcome.objective_value, rounds=rounds,
                    cuts=tuple(tuple(sorted(side)) for side in sides)
                )
            side, violation = found
            if side in seen:
                raise InternalError(f"Separation returned the known cut {sorted(side)} again")
            logger.debug("Round %d: adding cut %s (violation %s)", rounds, sorted(side), violation)
            seen.add(side)
            sides.append(side)

        raise InternalError(f"Cutting planes did not converge in {self.max_rounds} rounds")

    def verify_solution(self, instance: Instance, solution: LpSolution,
                        sides: Optional[Iterable[AbstractSet[int]]] = None) -> list:
        """
        Violations of x* against a freshly built explicit model.

        Args:
            sides: Cut sides to include; defaults to the cuts the solver used
        """
        if sides is None:
            sides = [frozenset(side) for side in solution.cuts]
        model = build_subtour_model(instance, sides)
        point = {e: solution.x.get(e, ZERO) for e in model.variables}
        return check_feasible_point(model, point)


def check_solution_feasible(solution: LpSolution) -> Optional[Tuple[frozenset, Fraction]]:
    """
    Separation on a supplied x* whose instance is not at hand: degrees are
    checked exactly, cut constraints by the same Gomory-Hu routine.

    Returns:
        A violated side with its violation, or None
    """
    n, s, t = solution.n, solution.s, solution.t
    for v in range(n):
        degree = sum((w for e, w in solution.x.items() if v in e), ZERO)
        if degree != solution.degree_target(v):
            return normalize_side({v}, n, s), abs(solution.degree_target(v) - degree)
    placeholder = Instance(n=n, s=s, t=t, costs={(u, v): ZERO for u in range(n) for v in range(u + 1, n)})
    return separate(solution.x, placeholder)
