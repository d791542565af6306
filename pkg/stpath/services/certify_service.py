"""
Certification: the exact inequality ledger behind every returned tour,
special-case certificates and the Held-Karp oracle.
"""
import logging
from dataclasses import dataclass, replace
from fractions import Fraction
from itertools import combinations
from typing import List, Optional, Sequence, Tuple

from stpath.models.certificate import LedgerCheck, SpecialCaseFlags, TourCertificate, TreeLedger
from stpath.models.combination import CombinationStats, TreeCombination
from stpath.models.cuts import NarrowCutChain
from stpath.models.edges import ONE, TWO, ZERO, dot
from stpath.models.instance import Instance
from stpath.models.solution import LpSolution
from stpath.models.tour import StTour
from stpath.services.cut_service import intersection_bound
from stpath.services.errors import CapExceededError, CertificationError, InputError
from stpath.services.join_service import (
    DEFAULT_MATCHING_CAP, bomc_coefficient, build_tree_parity_vector, check_tjoin_polyhedron, odd_vertices
)
from stpath.services.tour_service import (
    PipelineContext, TreeRun, christofides_tour, run_alternating, run_tree, tree_cost_bound
)

logger = logging.getLogger(__name__)

DEFAULT_BRUTE_FORCE_CAP = 16
THREE_HALVES = Fraction(3, 2)
BOMC_GAMMA = Fraction(1, 8)
BOMC_GUARANTEE = Fraction(8, 5)
BALANCED_GAMMA = Fraction(1, 16)


def brute_force_opt(instance: Instance, cap: int = DEFAULT_BRUTE_FORCE_CAP) -> Fraction:
    """
    Minimum Hamiltonian s-t path cost by Held-Karp subset dynamic programming.

    Raises:
        CapExceededError: If n exceeds the cap
    """
    if instance.n > cap:
        raise CapExceededError(f"Held-Karp needs n <= {cap}, got {instance.n}")
    s, t = instance.s, instance.t
    inner = [v for v in instance.vertices if v not in (s, t)]
    if not inner:
        return instance.cost(s, t)
    rows = instance.cost_rows()
    m = len(inner)
    full = (1 << m) - 1
    best: List[List[Optional[Fraction]]] = [[None] * m for _ in range(1 << m)]
    for j, v in enumerate(inner):
        best[1 << j][j] = rows[s][v]
    for mask in range(1, full + 1):
        for j in range(m):
            current = best[mask][j]
            if current is None:
                continue
            for k in range(m):
                if mask >> k & 1:
                    continue
                value = current + rows[inner[j]][inner[k]]
                merged = mask | (1 << k)
                if best[merged][k] is None or value < best[merged][k]:
                    best[merged][k] = value
    return min(best[full][j] + rows[inner[j]][t] for j in range(m))


def multiplier(x: Fraction, gamma: Fraction) -> Fraction:
    """
    Net coefficient of c(x^Q) in the forest-based ledger for a narrow cut of
    size x: (2 - x - 2 gamma)/(2(2 - x)) + x - 2 when x <= 2 - 2 gamma,
    x - 2 otherwise.
    """
    x, gamma = Fraction(x), Fraction(gamma)
    if not ONE <= x < TWO:
        raise InputError(f"Narrow-cut size must lie in [1, 2), got {x}")
    if x <= TWO - 2 * gamma:
        return (TWO - x - 2 * gamma) / (2 * (TWO - x)) + x - TWO
    return x - TWO


def guarantee_factor(gamma: Fraction) -> Optional[Fraction]:
    """
    max over z of min(3/2 + gamma z, 2 - z) = 2 - 1/(2(1 + gamma)), valid
    once gamma >= 1/16 makes every multiplier nonpositive; 26/17 at 1/16.
    """
    if gamma < BALANCED_GAMMA:
        return None
    return TWO - ONE / (2 * (ONE + gamma))


def detect_special_cases(xstar: LpSolution, chain: NarrowCutChain) -> SpecialCaseFlags:
    """Disjointness, two-cuts-per-edge, all-small and one-not-small structure of the chain."""
    disjoint = all(not (a.edges & b.edges) for a, b in combinations(chain.cuts, 2))
    two_per_edge = all(len(chain.cuts_containing(e)) <= 2 for e in xstar.x)
    large = sorted({cut.size for cut in chain if cut.size > THREE_HALVES})
    return SpecialCaseFlags(
        disjoint=disjoint,
        two_per_edge=two_per_edge,
        all_small=not large,
        one_not_small=len(large) == 1,
        z=large[0] if len(large) == 1 else None
    )


@dataclass(frozen=True)
class Bomc85Report:
    """Outcome of the best-of-many check without deletion."""
    average_cost: Fraction
    bound: Fraction
    checks: Tuple[LedgerCheck, ...]

    @property
    def valid(self) -> bool:
        return all(check.holds for check in self.checks)

    def to_dict(self) -> dict:
        return {
            'average_cost': str(self.average_cost),
            'bound': str(self.bound),
            'checks': [check.to_dict() for check in self.checks],
            'valid': self.valid
        }


def _raise_on_failure(checks: Sequence[LedgerCheck], context: str):
    failing = [check for check in checks if not check.holds]
    if failing:
        for check in failing:
            logger.error("Ledger row failed (%s): %s", context, check.describe())
        raise CertificationError(
            f"{len(failing)} ledger rows failed; first: {failing[0].describe()}",
            {'failures': [check.to_dict() for check in failing]}
        )


class CertifyService:
    """Service class assembling and checking the inequality ledger."""

    def __init__(self, brute_force_cap: int = DEFAULT_BRUTE_FORCE_CAP, matching_cap: int = DEFAULT_MATCHING_CAP):
        self.brute_force_cap = brute_force_cap
        self.matching_cap = matching_cap

    def bounds(self, context: PipelineContext) -> Tuple[Fraction, Fraction, Fraction]:
        """(B1, the signed forest bound, B2)."""
        costs = context.instance.costs
        lp_cost = dot(context.xstar.x, costs)
        p_cost = dot(context.stats.p_star, costs)
        base = THREE_HALVES * lp_cost + context.gamma * p_cost
        b1, tight = base, base
        for index, cut in enumerate(context.chain):
            weight = multiplier(cut.size, context.gamma)
            cost = dot(context.stats.x_q[index], costs)
            b1 += max(ZERO, weight) * cost
            tight += weight * cost
        return b1, tight, TWO * lp_cost - p_cost

    def tree_checks(self, context: PipelineContext, run: TreeRun) -> List[LedgerCheck]:
        """Per-tree rows: parity vector, forest and tree tours, reconnection conditions."""
        i = run.index
        bound = tree_cost_bound(context.instance, run.tree.edges, run.path)
        lhs, rhs = run.surcharge
        return [
            LedgerCheck('parity_vector', ONE, '<=', run.odd_cut[1] if run.odd_cut else ONE, tree=i),
            LedgerCheck('forest_tour', run.forest_tour.multigraph_cost, '<=',
                        run.forest_cost + run.join_modified_cost, tree=i),
            LedgerCheck('forest_join', run.join_modified_cost, '<=', run.y_modified_cost, tree=i),
            LedgerCheck('tree_tour', run.tree_tour.multigraph_cost, '<=', bound, tree=i),
            LedgerCheck('surcharge', lhs, '<=', rhs, tree=i),
            LedgerCheck('reconnection_lp', ZERO if run.plan.feasible else ONE, '=', ZERO, tree=i),
            LedgerCheck('subset_condition', Fraction(len(run.subsets.failures)), '=', ZERO, tree=i),
            LedgerCheck('residual_cover', Fraction(len(run.residual_cover_failures)), '=', ZERO, tree=i),
            LedgerCheck('bad_edge_lonely_mass', Fraction(len(run.lonely_mass_failures)), '=', ZERO, tree=i),
            LedgerCheck('bad_edge_basic_only', ZERO if run.basic_only else ONE, '=', ZERO, tree=i),
        ]

    def certify_ratio(self, context: PipelineContext, runs: Sequence[TreeRun], tour: StTour,
                      baseline: Optional[StTour] = None, optimal_lp: bool = False,
                      special: bool = True) -> TourCertificate:
        """
        Assemble and check the ledger of a complete run.

        Raises:
            CertificationError: If any row fails, after logging every failing row
        """
        instance, costs = context.instance, context.instance.costs
        lp_cost = dot(context.xstar.x, costs)
        p_cost = dot(context.stats.p_star, costs)
        q_cost = dot(context.stats.q_star, costs)
        b1, tight, b2 = self.bounds(context)
        guarantee = guarantee_factor(context.gamma)

        checks: List[LedgerCheck] = [LedgerCheck('cost_split', p_cost + q_cost, '=', lp_cost)]
        ledgers = []
        forest_total = forest_tours = tree_tours = ZERO
        for run in runs:
            checks.extend(self.tree_checks(context, run))
            coefficient = run.tree.coefficient
            forest_total += coefficient * (run.forest_cost + run.y_modified_cost)
            forest_tours += coefficient * run.forest_tour.multigraph_cost
            tree_tours += coefficient * run.tree_tour.multigraph_cost
            ledgers.append(TreeLedger(
                index=run.index,
                coefficient=coefficient,
                group=run.tree.group,
                tree_cost=instance.cost_of(run.tree.edges),
                forest_cost=run.forest_cost,
                y_cost=run.y_cost,
                y_modified_cost=run.y_modified_cost,
                join_modified_cost=run.join_modified_cost,
                surcharge=run.surcharge[0],
                surcharge_bound=run.surcharge[1],
                forest_tour_cost=run.forest_tour.multigraph_cost,
                tree_tour_cost=run.tree_tour.multigraph_cost,
                plan_status=run.plan.status
            ))

        checks += [
            LedgerCheck('forest_ledger', forest_total, '<=', b1),
            LedgerCheck('forest_ledger_signed', forest_total, '<=', tight),
            LedgerCheck('forest_average', forest_tours, '<=', forest_total),
            LedgerCheck('tree_ledger', tree_tours, '<=', b2),
            LedgerCheck('tour', tour.path_cost, '<=', min(b1, b2)),
        ]
        if guarantee is not None:
            checks.append(LedgerCheck('guarantee', min(b1, b2), '<=', guarantee * lp_cost))

        opt = None
        if instance.n <= self.brute_force_cap:
            opt = brute_force_opt(instance, self.brute_force_cap)
            checks.append(LedgerCheck('opt_tour', opt, '<=', tour.path_cost))
            if optimal_lp:
                checks.append(LedgerCheck('lp_opt', lp_cost, '<=', opt))
                if guarantee is not None:
                    checks.append(LedgerCheck('opt_guarantee', tour.path_cost, '<=', guarantee * opt))

        flags = detect_special_cases(context.xstar, context.chain)
        if special:
            checks.extend(self.certify_special_cases(context, flags, runs, b1))

        certificate = TourCertificate(
            instance=instance.name,
            gamma=context.gamma,
            lp_cost=lp_cost,
            p_cost=p_cost,
            q_cost=q_cost,
            trees=tuple(ledgers),
            b1=b1,
            b2=b2,
            guarantee=guarantee,
            tour=tour,
            baseline=baseline,
            opt=opt,
            flags=flags,
            checks=tuple(checks)
        )
        _raise_on_failure(checks, instance.name or 'instance')
        logger.info("Certificate valid: tour %s, B1 %s, B2 %s, c(x*) %s", tour.path_cost, b1, b2, lp_cost)
        return certificate

    def certify_special_cases(self, context: PipelineContext, flags: SpecialCaseFlags,
                              runs: Sequence[TreeRun], b1: Fraction) -> List[LedgerCheck]:
        """
        3/2 certificates for disjoint or all-small chains (gamma = 0,
        leftmost drop) and for two-cuts-per-edge chains (alternating
        deletion); the one-not-small case restates the standard ledger.
        """
        lp_cost = dot(context.xstar.x, context.instance.costs)
        limit = THREE_HALVES * lp_cost
        checks: List[LedgerCheck] = []

        if flags.disjoint or flags.all_small:
            zero = replace(context, gamma=ZERO)
            ledger = tours = ZERO
            for index, tree in enumerate(context.combination):
                run = run_tree(zero, index, drop='leftmost')
                checks.append(LedgerCheck('small_parity_vector', ONE, '<=',
                                          run.odd_cut[1] if run.odd_cut else ONE, tree=index))
                ledger += tree.coefficient * (run.forest_cost + run.y_modified_cost)
                tours += tree.coefficient * run.forest_tour.multigraph_cost
            checks.append(LedgerCheck('small_forest_ledger', ledger, '<=', limit))
            checks.append(LedgerCheck('small_forest_tours', tours, '<=', limit))

        if flags.all_small:
            for a, b in combinations(range(len(context.chain)), 2):
                lhs, _ = intersection_bound(context.xstar, context.chain[a], context.chain[b])
                checks.append(LedgerCheck('small_intersection', lhs, '<=', Fraction(1, 2), cut=a))

        if flags.two_per_edge:
            ledger = tours = ZERO
            for index, tree in enumerate(context.combination):
                for parity_class in (1, 0):
                    branch = run_alternating(context, index, parity_class)
                    checks.append(LedgerCheck('alternating_reconnection', Fraction(len(branch.doubled)), '=',
                                              ZERO, tree=index))
                    checks.append(LedgerCheck('alternating_parity_vector', ONE, '<=',
                                              branch.odd_cut[1] if branch.odd_cut else ONE, tree=index))
                    checks.append(LedgerCheck('alternating_join', branch.join.cost, '<=', branch.y_cost, tree=index))
                    ledger += tree.coefficient * (branch.forest_cost + branch.y_cost) / 2
                    tours += tree.coefficient * branch.tour.multigraph_cost / 2
            checks.append(LedgerCheck('alternating_ledger', ledger, '<=', limit))
            checks.append(LedgerCheck('alternating_tours', tours, '<=', limit))

        if flags.one_not_small:
            forest_tours = sum((run.tree.coefficient * run.forest_tour.multigraph_cost for run in runs), ZERO)
            checks.append(LedgerCheck('one_not_small_ledger', forest_tours, '<=', b1))
        return checks

    def certify_bomc_85(self, instance: Instance, xstar: LpSolution, chain: NarrowCutChain,
                        combination: TreeCombination, stats: CombinationStats) -> Bomc85Report:
        """
        Best-of-many without deletion on a generic combination: parity
        vectors at gamma = 1/8 and the 8/5 bound.

        Raises:
            CertificationError: If any row fails
        """
        costs = instance.costs
        lp_cost = dot(xstar.x, costs)
        p_cost = dot(stats.p_star, costs)
        checks = [LedgerCheck('bomc_coefficient',
                              bomc_coefficient(THREE_HALVES, BOMC_GAMMA) * (THREE_HALVES - ONE), '=',
                              Fraction(1, 8))]
        average = parity_total = ZERO
        for index, tree in enumerate(combination):
            path = stats.paths[index]
            y = build_tree_parity_vector(xstar, chain, stats, tree.edges, path, BOMC_GAMMA)
            parity = odd_vertices(tree.edges).symmetric_difference({instance.s, instance.t})
            odd_cut = check_tjoin_polyhedron(y.y, parity, instance.n)
            tour, join = christofides_tour(instance, tree.edges, index, self.matching_cap)
            y_cost = dot(y.y, costs)
            checks.append(LedgerCheck('bomc_parity_vector', ONE, '<=', odd_cut[1] if odd_cut else ONE, tree=index))
            checks.append(LedgerCheck('bomc_join', join.cost, '<=', y_cost, tree=index))
            average += tree.coefficient * tour.multigraph_cost
            parity_total += tree.coefficient * y_cost

        bound = min(THREE_HALVES * lp_cost + p_cost / 4, TWO * lp_cost - p_cost)
        checks += [
            LedgerCheck('bomc_parity_ledger', parity_total, '<=', lp_cost / 2 + p_cost / 4),
            LedgerCheck('bomc_average', average, '<=', bound),
            LedgerCheck('bomc_guarantee', bound, '<=', BOMC_GUARANTEE * lp_cost),
        ]
        report = Bomc85Report(average_cost=average, bound=bound, checks=tuple(checks))
        _raise_on_failure(checks, f"{instance.name or 'instance'} without deletion")
        return report
