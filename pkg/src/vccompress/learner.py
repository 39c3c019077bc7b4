"""Weak learners built from subset-bounded empirical risk minimization.

The reconstruction side of the compression scheme can only rerun learners on
data it receives, so every hypothesis here is pinned to a provenance: the
labeled subset whose ERM produced it.  ERM is deterministic (lowest concept
index wins), which makes hypotheses exactly reproducible from their subsets.

``build_hypothesis_set`` finds a small pool of such hypotheses together with
a mixture that agrees with the sample's labels on every point with certified
mass at least 2/3 (exact arithmetic) or 2/3 - 1/48 (multiplicative-weights
certificate).  Either margin survives a later 1/8-sparsification with a
strict integer majority to spare.  If a subset budget is too small for that,
the builder doubles it; at budget = #distinct points the ERM over the whole
sample agrees everywhere, so termination never depends on luck.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .approx import ProbabilityVector
from .concepts import ConceptClass, LabeledSample
from .errors import BudgetExceededError, UnrealizableError, WeakLearningError
from .game import EXACT_ENTRY_CAP, GameSolution, _exact_minimax, solve_mw
from .seeding import child_seeds, make_rng

__all__ = [
    "WEAK_AGREEMENT",
    "CERTIFICATE_TOLERANCE",
    "LearningMap",
    "HypothesisSet",
    "lowest_consistent_concept",
    "erm",
    "escalate_budget",
    "build_hypothesis_set",
]

logger = logging.getLogger(__name__)

WEAK_AGREEMENT = Fraction(2, 3)
# A multiplicative-weights certificate may undershoot the exact game value;
# 1/48 of slack keeps 2/3 - 1/48 - 1/8 = 25/48 strictly above one half, so
# integer majorities stay strict after sparsifying at 1/8.
CERTIFICATE_TOLERANCE = Fraction(1, 48)

_EXHAUSTIVE_SUBSET_CAP = 20_000
_ORACLE_ROUND_CAP = 200
_ORACLE_BATCH = 16
_ORACLE_STALL_LIMIT = 16


@dataclass(frozen=True)
class LearningMap:
    """A concept class paired with the largest labeled subset its ERM will
    accept."""

    concept_class: ConceptClass
    subset_budget: int

    def __post_init__(self):
        if self.subset_budget < 1:
            raise ValueError("subset budget must be at least 1")


@dataclass(frozen=True)
class HypothesisSet:
    """Hypotheses (concept indices, ascending) with the labeled-subset
    provenance that regenerates each one via ERM, plus the budget that was
    finally sufficient."""

    hypotheses: tuple[int, ...]
    provenance: tuple[tuple[int, ...], ...]
    budget: int

    def __post_init__(self):
        if len(self.hypotheses) != len(self.provenance):
            raise ValueError("each hypothesis needs exactly one provenance subset")
        if not self.hypotheses:
            raise ValueError("hypothesis set cannot be empty")
        if list(self.hypotheses) != sorted(set(self.hypotheses)):
            raise ValueError("hypotheses must be strictly increasing")

    def __len__(self):
        return len(self.hypotheses)


def lowest_consistent_concept(
    concept_class: ConceptClass, labeled_points: Iterable[tuple[int, int]]
) -> int:
    """Index of the lowest concept consistent with every (point, label) pair.

    This is the tie-breaking rule that makes ERM a pure function of its
    input subset; raises UnrealizableError when nothing is consistent.
    """
    masks = concept_class.point_masks
    full = (1 << len(concept_class.rows)) - 1
    alive = full
    for point, label in labeled_points:
        alive &= masks[point] if label else ~masks[point] & full
        if not alive:
            raise UnrealizableError("no concept is consistent with the labeled points")
    return (alive & -alive).bit_length() - 1


def erm(learning_map: LearningMap, sample: LabeledSample) -> int:
    """Budget-gated ERM: the lowest consistent concept, provided the sample
    touches no more distinct points than the subset budget allows."""
    distinct = len(sample.distinct_points)
    if distinct > learning_map.subset_budget:
        raise BudgetExceededError(
            f"sample has {distinct} distinct points but the budget is "
            f"{learning_map.subset_budget}"
        )
    return lowest_consistent_concept(learning_map.concept_class, sample.label_items)


def escalate_budget(learning_map: LearningMap, distinct_point_count: int) -> LearningMap:
    """Double the subset budget, capped at the number of distinct points in
    play (beyond which larger subsets add nothing).  Never shrinks."""
    if distinct_point_count < 1:
        raise ValueError("distinct point count must be at least 1")
    new_budget = min(2 * learning_map.subset_budget, distinct_point_count)
    if new_budget <= learning_map.subset_budget:
        return learning_map
    return LearningMap(learning_map.concept_class, new_budget)


# -- certified mixtures --------------------------------------------------------


@dataclass(frozen=True)
class _MixtureCertificate:
    accepted: bool
    weights: np.ndarray  # over pool rows
    point_pressure: np.ndarray  # adversarial distribution over distinct points
    certified_agreement: float  # exact min over points of the mixture's mass
    exact_value: Fraction | None
    gap: float


def _certify_mixture(agreement: np.ndarray) -> _MixtureCertificate:
    """Solve the hypotheses-vs-points agreement game and check whether the
    optimal mixture clears the weak-agreement threshold.

    Duplicate point columns are collapsed before solving (they cannot change
    the game), which usually keeps the matrix inside the exact solver's cap.
    The certified agreement is always recomputed as an exhaustive minimum
    over the original columns.
    """
    patterns, inverse, counts = np.unique(
        agreement, axis=1, return_inverse=True, return_counts=True
    )
    af = agreement.astype(np.float64)
    if patterns.size <= EXACT_ENTRY_CAP:
        value, p_exact, q_exact = _exact_minimax(patterns)
        p = np.array([float(x) for x in p_exact])
        q_patterns = np.array([float(x) for x in q_exact])
        accepted = value >= WEAK_AGREEMENT
        exact_value = value
    else:
        solution = solve_mw(patterns, target_exploitability=float(CERTIFICATE_TOLERANCE) / 2)
        p = solution.row_strategy.weights
        q_patterns = solution.col_strategy.weights
        exact_value = None
    # spread each pattern's weight evenly over the duplicate columns it covers
    q_points = q_patterns[inverse] / counts[inverse]
    secured = p @ af
    capped = af @ q_points
    certified = float(secured.min())
    gap = max(float(capped.max()) - certified, 0.0)
    if exact_value is None:
        accepted = certified >= float(WEAK_AGREEMENT - CERTIFICATE_TOLERANCE)
    return _MixtureCertificate(accepted, p, q_points, certified, exact_value, gap)


# -- pool construction -----------------------------------------------------------


def _agreement_matrix(
    concept_class: ConceptClass, hypotheses: Sequence[int], points: Sequence[int], labels: np.ndarray
) -> np.ndarray:
    block = concept_class.matrix[np.asarray(hypotheses, dtype=np.intp)][
        :, np.asarray(points, dtype=np.intp)
    ]
    return (block == labels).astype(np.uint8)


class _Pool:
    """Hypotheses keyed by concept index; each keeps its shortest known
    provenance (ties go to the first discovery, which is deterministic)."""

    def __init__(self, concept_class: ConceptClass, labels_by_point: dict[int, int]):
        self._cls = concept_class
        self._labels = labels_by_point
        self._provenance: dict[int, tuple[int, ...]] = {}

    def add_subset(self, subset: tuple[int, ...]) -> bool:
        """ERM the subset into the pool; True when a new concept appeared."""
        pairs = [(x, self._labels[x]) for x in subset]
        concept = lowest_consistent_concept(self._cls, pairs)
        known = self._provenance.get(concept)
        if known is None:
            self._provenance[concept] = subset
            return True
        if len(subset) < len(known):
            self._provenance[concept] = subset
        return False

    def sorted_items(self) -> tuple[list[int], list[tuple[int, ...]]]:
        concepts = sorted(self._provenance)
        return concepts, [self._provenance[c] for c in concepts]

    def __len__(self):
        return len(self._provenance)


def _exhaustive_subset_count(k: int, budget: int) -> int:
    return sum(math.comb(k, j) for j in range(min(budget, k) + 1))


def build_hypothesis_set(
    learning_map: LearningMap,
    sample: LabeledSample,
    *,
    mode: str = "auto",
    seed: int = 0,
) -> tuple[HypothesisSet, GameSolution]:
    """Hypothesis pool plus a certified weak mixture for a realizable sample.

    Returns the pool and a GameSolution whose row strategy weights the
    hypotheses (in pool order), whose column strategy is the adversarial
    distribution over the sample's distinct points, and whose value estimate
    is the certified worst-case agreement mass — at least 2/3 when the exact
    solver ran (exact_value set), at least 2/3 - 1/48 otherwise.

    mode="exhaustive" enumerates every subset within budget, "double_oracle"
    grows the pool against adversarial point distributions, and "auto" picks
    by subset count.  The subset budget doubles internally whenever the
    certified game falls short; at budget = #distinct points the full-sample
    ERM agrees everywhere, so the escalation always terminates.
    """
    if mode not in ("auto", "exhaustive", "double_oracle"):
        raise ValueError(f"unknown mode {mode!r}")
    if sample.is_empty:
        raise ValueError("cannot build hypotheses for an empty sample")
    cls = learning_map.concept_class
    points = sample.distinct_points
    labels_by_point = dict(sample.label_items)
    labels = np.array([labels_by_point[x] for x in points], dtype=np.uint8)
    k = len(points)

    current = learning_map
    budget_seeds = child_seeds(seed, 64)
    level = 0
    while True:
        budget = min(current.subset_budget, k)
        use_exhaustive = mode == "exhaustive" or (
            mode == "auto" and _exhaustive_subset_count(k, budget) <= _EXHAUSTIVE_SUBSET_CAP
        )
        pool = _Pool(cls, labels_by_point)
        if use_exhaustive:
            for size in range(budget + 1):
                for subset in itertools.combinations(points, size):
                    pool.add_subset(subset)
            certificate = _certify_pool(cls, pool, points, labels)
        else:
            certificate = _double_oracle(
                cls, pool, points, labels, budget, int(budget_seeds[level % 64])
            )
        if certificate is not None:
            hypotheses, provenance, cert = certificate
            solution = GameSolution(
                row_strategy=ProbabilityVector(cert.weights),
                col_strategy=ProbabilityVector(cert.point_pressure),
                value_estimate=cert.certified_agreement,
                exploitability=cert.gap,
                exact_value=cert.exact_value,
            )
            logger.debug(
                "certified %d hypotheses at budget %d (agreement %.4f)",
                len(hypotheses),
                budget,
                cert.certified_agreement,
            )
            return (
                HypothesisSet(tuple(hypotheses), tuple(provenance), budget),
                solution,
            )
        if budget >= k:
            # ERM over all distinct points agrees with every label, so a
            # certified mixture provably exists at this budget; reaching
            # this line means the solver itself is broken
            raise WeakLearningError(
                f"no certified mixture at the full budget {budget} for {k} points"
            )
        current = escalate_budget(current, k)
        level += 1


def _certify_pool(cls, pool, points, labels):
    hypotheses, provenance = pool.sorted_items()
    agreement = _agreement_matrix(cls, hypotheses, points, labels)
    cert = _certify_mixture(agreement)
    if cert.accepted:
        return hypotheses, provenance, cert
    return None


def _double_oracle(cls, pool, points, labels, budget, seed):
    """Grow the pool against adversarial point distributions until the
    mixture certifies (returns None to request a budget escalation)."""
    k = len(points)
    pool.add_subset(())
    pool.add_subset(tuple(points[: min(budget, k)]))
    rng = make_rng(seed)
    stall = 0
    best_certified = -1.0
    for _ in range(_ORACLE_ROUND_CAP):
        hypotheses, provenance = pool.sorted_items()
        agreement = _agreement_matrix(cls, hypotheses, points, labels)
        cert = _certify_mixture(agreement)
        if cert.accepted:
            return hypotheses, provenance, cert
        pressure = cert.point_pressure.clip(min=0.0)
        total = pressure.sum()
        pressure = np.full(k, 1.0 / k) if total <= 0 else pressure / total
        grew = False
        for _ in range(_ORACLE_BATCH):
            draw = rng.choice(k, size=min(budget, k), replace=True, p=pressure)
            subset = tuple(sorted({points[i] for i in draw}))
            if pool.add_subset(subset):
                grew = True
        improved = cert.certified_agreement > best_certified + 1e-12
        best_certified = max(best_certified, cert.certified_agreement)
        stall = 0 if (grew or improved) else stall + 1
        if stall >= _ORACLE_STALL_LIMIT:
            break
    return None
