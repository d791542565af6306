"""
End-to-end pipeline: subtour LP, narrow cuts, layered decomposition,
per-tree tours and the certificate.
"""
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Mapping, Optional

from stpath.models.certificate import AnalysisParams, TourCertificate
from stpath.models.cuts import LayerStructure, NarrowCutChain
from stpath.models.instance import Instance
from stpath.models.solution import LpSolution
from stpath.models.tour import StTour
from stpath.services.certify_service import DEFAULT_BRUTE_FORCE_CAP, Bomc85Report, CertifyService
from stpath.services.cut_service import build_layers, check_layers, find_narrow_cuts
from stpath.services.errors import InputError
from stpath.services.join_service import DEFAULT_MATCHING_CAP
from stpath.services.reconnect_service import DEFAULT_ENUMERATION_CAP
from stpath.services.subtour_service import SubtourService, check_solution_feasible
from stpath.services.tour_service import PipelineContext, TreeRun, best_tour, hoogeveen_baseline, run_tree
from stpath.services.treedecomp_service import DEFAULT_K_CAP, TreeDecompositionService

logger = logging.getLogger(__name__)


@dataclass
class BomdResult:
    """
    Outcome of one pipeline run.

    Attributes:
        context: Shared per-tree state (instance, x*, chain, layers, combination)
        runs: Per-tree artifacts in tree order
        tour: Cheapest returned path
        certificate: Checked ledger
        timings: Stage name -> seconds
    """
    context: PipelineContext
    runs: List[TreeRun]
    tour: StTour
    certificate: TourCertificate
    timings: Dict[str, float] = field(default_factory=dict)

    @property
    def xstar(self) -> LpSolution:
        return self.context.xstar

    @property
    def chain(self) -> NarrowCutChain:
        return self.context.chain

    @property
    def layers(self) -> Optional[LayerStructure]:
        return self.context.layers


class BomdService:
    """Service class running best-of-many with deletion."""

    def __init__(self, k_cap: int = DEFAULT_K_CAP, matching_cap: int = DEFAULT_MATCHING_CAP,
                 enumeration_cap: int = DEFAULT_ENUMERATION_CAP, brute_force_cap: int = DEFAULT_BRUTE_FORCE_CAP,
                 threads: int = 1):
        if threads < 1:
            raise InputError("threads must be at least 1")
        self.matching_cap = matching_cap
        self.enumeration_cap = enumeration_cap
        self.threads = threads
        self.subtour = SubtourService()
        self.decomposer = TreeDecompositionService(k_cap)
        self.certifier = CertifyService(brute_force_cap, matching_cap)

    @classmethod
    def from_config(cls, config: Mapping[str, Any]) -> 'BomdService':
        return cls(
            k_cap=config.get('K_CAP', DEFAULT_K_CAP),
            matching_cap=config.get('MATCHING_CAP', DEFAULT_MATCHING_CAP),
            enumeration_cap=config.get('ENUMERATION_CAP', DEFAULT_ENUMERATION_CAP),
            brute_force_cap=config.get('BRUTE_FORCE_CAP', DEFAULT_BRUTE_FORCE_CAP),
            threads=config.get('THREADS', 1)
        )

    @staticmethod
    def analysis_params(gamma) -> AnalysisParams:
        """
        Raises:
            InputError: If gamma lies outside [0, 1/2]
        """
        try:
            return AnalysisParams(Fraction(gamma))
        except (ValueError, ZeroDivisionError) as e:
            raise InputError(str(e))

    def solve_lp(self, instance: Instance) -> LpSolution:
        return self.subtour.solve_subtour_lp(instance)

    def structure(self, xstar: LpSolution) -> LayerStructure:
        """Narrow-cut chain and checked layers of x*."""
        return check_layers(xstar, build_layers(find_narrow_cuts(xstar)))

    def decompose(self, xstar: LpSolution, layered: bool = True):
        """
        Returns:
            (layers, combination, stats); the combination is generic when
            ``layered`` is off
        """
        layers = self.structure(xstar)
        if layered:
            combination, stats = self.decomposer.decompose_layered(xstar, layers)
        else:
            combination, stats = self.decomposer.decompose_generic(xstar, layers.chain)
        return layers, combination, stats

    def run_trees(self, context: PipelineContext) -> List[TreeRun]:
        """Per-tree work items; results come back in tree order whatever the thread count."""
        indices = range(len(context.combination))
        if self.threads == 1:
            return [run_tree(context, index) for index in indices]
        with ThreadPoolExecutor(max_workers=self.threads) as pool:
            return list(pool.map(lambda index: run_tree(context, index), indices))

    def run_bomd(self, instance: Instance, gamma=Fraction(1, 16)) -> BomdResult:
        """Solve the subtour LP, then run the pipeline on its optimum."""
        started = time.perf_counter()
        xstar = self.solve_lp(instance)
        result = self.run_from_solution(instance, xstar, gamma, optimal=True)
        result.timings = {'lp': time.perf_counter() - started - sum(result.timings.values()), **result.timings}
        return result

    def run_from_solution(self, instance: Instance, xstar: LpSolution, gamma=Fraction(1, 16),
                          optimal: bool = False) -> BomdResult:
        """
        Run the pipeline on a supplied subtour-feasible x*.

        Args:
            optimal: Whether x* is known to be LP-optimal (enables c(x*) <= OPT rows)

        Raises:
            InputError: If x* does not match the instance or is infeasible
            CertificationError: If any ledger row fails
        """
        params = self.analysis_params(gamma)
        if (xstar.n, xstar.s, xstar.t) != (instance.n, instance.s, instance.t):
            raise InputError("x* does not belong to this instance")
        violated = check_solution_feasible(xstar)
        if violated is not None:
            side, violation = violated
            raise InputError(f"x* violates the constraint of {sorted(side)} by {violation}")

        timings: Dict[str, float] = {}
        clock = time.perf_counter()
        layers, combination, stats = self.decompose(xstar)
        timings['decompose'] = time.perf_counter() - clock

        context = PipelineContext(
            instance=instance,
            xstar=xstar,
            chain=layers.chain,
            layers=layers,
            combination=combination,
            stats=stats,
            gamma=params.gamma,
            matching_cap=self.matching_cap,
            enumeration_cap=self.enumeration_cap
        )
        clock = time.perf_counter()
        runs = self.run_trees(context)
        tour = best_tour(runs)
        baseline = hoogeveen_baseline(instance, self.matching_cap)
        timings['tours'] = time.perf_counter() - clock

        clock = time.perf_counter()
        certificate = self.certifier.certify_ratio(context, runs, tour, baseline, optimal_lp=optimal)
        timings['certify'] = time.perf_counter() - clock

        logger.info("%s: %d trees, tour %s (baseline %s)", instance.name or 'instance', len(runs),
                    tour.path_cost, baseline.path_cost)
        return BomdResult(context=context, runs=runs, tour=tour, certificate=certificate, timings=timings)

    def run_bomc_85(self, instance: Instance, xstar: LpSolution) -> Bomc85Report:
        """Best-of-many without deletion on a generic combination of x*."""
        layers, combination, stats = self.decompose(xstar, layered=False)
        return self.certifier.certify_bomc_85(instance, xstar, layers.chain, combination, stats)
