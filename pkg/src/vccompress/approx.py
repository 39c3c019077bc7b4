"""Small empirical approximations of measures over concept classes.

Two symmetric operations, both certified by exhaustive re-checking rather
than trusted from theory:

* ``epsilon_approximation`` — a multiset of domain points whose empirical
  measure is within epsilon of a target distribution on every concept.
* ``sparsify_mixture`` — a multiset of concepts whose uniform average is
  within epsilon of a mixture of concepts on every domain point (the same
  statement applied to the dual class, which also supplies the size bound).

Both draw i.i.d. from the target and retry until the certificate holds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .concepts import ConceptClass, dual_class, vc_dimension
from .errors import ApproximationBudgetError
from .seeding import make_rng

__all__ = [
    "C_APX_DEFAULT",
    "RETRY_DEFAULT",
    "ProbabilityVector",
    "ApproximationCertificate",
    "approximation_size_bound",
    "epsilon_approximation",
    "sparsify_mixture",
    "approximation_deviation",
    "sparsification_deviation",
]

C_APX_DEFAULT = 16
RETRY_DEFAULT = 64

_SUM_TOL = 1e-9


class ProbabilityVector:
    """A finite probability distribution: nonnegative weights summing to 1
    within 1e-9.  The weight array is read-only float64."""

    __slots__ = ("_weights",)

    def __init__(self, weights):
        arr = np.array(weights, dtype=np.float64)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("weights must be a nonempty 1-d sequence")
        if np.any(arr < 0) or not np.all(np.isfinite(arr)):
            raise ValueError("weights must be finite and nonnegative")
        if abs(float(arr.sum()) - 1.0) > _SUM_TOL:
            raise ValueError(f"weights sum to {float(arr.sum())!r}, not 1")
        arr.flags.writeable = False
        self._weights = arr

    @classmethod
    def uniform(cls, size: int) -> "ProbabilityVector":
        if size < 1:
            raise ValueError("size must be positive")
        return cls(np.full(size, 1.0 / size))

    @classmethod
    def point_mass(cls, size: int, index: int) -> "ProbabilityVector":
        if not (0 <= index < size):
            raise ValueError("index out of range")
        w = np.zeros(size)
        w[index] = 1.0
        return cls(w)

    @property
    def weights(self) -> np.ndarray:
        return self._weights

    @property
    def support(self) -> np.ndarray:
        return np.flatnonzero(self._weights)

    def __len__(self) -> int:
        return self._weights.size

    def __getitem__(self, i: int) -> float:
        return float(self._weights[i])

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self._weights
        return self._weights.astype(dtype)

    def __repr__(self) -> str:
        return f"ProbabilityVector({self._weights.tolist()!r})"


@dataclass(frozen=True)
class ApproximationCertificate:
    """Proof object for one accepted multiset: the multiset itself, the
    exhaustively measured worst deviation, and the epsilon it was tested
    against (max_deviation <= epsilon always)."""

    multiset: tuple[int, ...]
    max_deviation: float
    epsilon: float
    size_bound: int

    def __post_init__(self):
        if not self.multiset:
            raise ValueError("certificate multiset cannot be empty")
        if not (0 < self.epsilon):
            raise ValueError("epsilon must be positive")
        if self.max_deviation > self.epsilon:
            raise ValueError(
                f"deviation {self.max_deviation} exceeds epsilon {self.epsilon}; not a certificate"
            )


def approximation_size_bound(dim: int, epsilon: float, c_apx: float = C_APX_DEFAULT) -> int:
    """Documented multiset-size ceiling ceil(c_apx * (dim+1) / epsilon^2)."""
    if not (0 < epsilon <= 1):
        raise ValueError("epsilon must be in (0, 1]")
    if dim < 0:
        raise ValueError("dimension must be nonnegative")
    if c_apx <= 0:
        raise ValueError("c_apx must be positive")
    return math.ceil(c_apx * (dim + 1) / (epsilon * epsilon))


def _as_distribution(weights, size: int, what: str) -> np.ndarray:
    pv = weights if isinstance(weights, ProbabilityVector) else ProbabilityVector(weights)
    if len(pv) != size:
        raise ValueError(f"{what} has length {len(pv)}, expected {size}")
    w = pv.weights
    return w / w.sum()  # exact-sum normalization for the sampler


def approximation_deviation(concept_class: ConceptClass, mu, multiset: Sequence[int]) -> float:
    """Worst |mu(c=1) - empirical frequency of c=1 on the multiset| over all
    concepts; an exhaustive scan, not an estimate."""
    n = concept_class.domain_size
    w = _as_distribution(mu, n, "mu")
    pts = np.asarray(multiset, dtype=np.int64)
    if pts.size == 0 or pts.min() < 0 or pts.max() >= n:
        raise ValueError("multiset points out of range")
    counts = np.bincount(pts, minlength=n).astype(np.float64)
    matrix = concept_class.matrix.astype(np.float64)
    true_mass = matrix @ w
    empirical = (matrix @ counts) / pts.size
    return float(np.abs(true_mass - empirical).max())


def sparsification_deviation(concept_class: ConceptClass, p, multiset: Sequence[int]) -> float:
    """Worst |p(c(x)=1) - fraction of the multiset with value 1 at x| over
    all domain points."""
    m = len(concept_class)
    w = _as_distribution(p, m, "p")
    idx = np.asarray(multiset, dtype=np.int64)
    if idx.size == 0 or idx.min() < 0 or idx.max() >= m:
        raise ValueError("multiset concepts out of range")
    counts = np.bincount(idx, minlength=m).astype(np.float64)
    matrix = concept_class.matrix.astype(np.float64)
    true_mass = w @ matrix
    empirical = (counts @ matrix) / idx.size
    return float(np.abs(true_mass - empirical).max())


def _rejection_sample(weights, dimension, epsilon, seed, c_apx, retries, deviation_fn):
    base_size = approximation_size_bound(dimension, epsilon, c_apx)
    rng = make_rng(seed)
    population = weights.size
    best = math.inf
    # retries+1 attempts at the base size, then (doubled escape hatch)
    # retries+1 more at twice the size before giving up
    for size in (base_size, 2 * base_size):
        for _ in range(retries + 1):
            draw = rng.choice(population, size=size, p=weights)
            dev = deviation_fn(draw)
            best = min(best, dev)
            if dev <= epsilon:
                return tuple(int(x) for x in draw), dev, base_size
    raise ApproximationBudgetError(
        f"no multiset certified at epsilon={epsilon} within the retry budget "
        f"(best deviation {best:.6g})",
        best_deviation=best,
    )


def epsilon_approximation(
    concept_class: ConceptClass,
    mu,
    epsilon: float,
    seed: int,
    *,
    c_apx: float = C_APX_DEFAULT,
    retries: int = RETRY_DEFAULT,
) -> ApproximationCertificate:
    """Multiset of domain points approximating mu within epsilon on every
    concept, by rejection sampling with an exhaustive certificate check.

    The multiset size is ceil(c_apx*(d+1)/epsilon^2) with d the VC dimension;
    after `retries` failures the size is doubled once before erroring.
    """
    n = concept_class.domain_size
    w = _as_distribution(mu, n, "mu")
    d = vc_dimension(concept_class)
    # the deviation check re-runs the public function on the caller's mu so a
    # later independent re-verification is bit-identical
    multiset, dev, bound = _rejection_sample(
        w, d, epsilon, seed, c_apx, retries,
        lambda draw: approximation_deviation(concept_class, mu, draw),
    )
    return ApproximationCertificate(multiset, dev, float(epsilon), bound)


def sparsify_mixture(
    concept_class: ConceptClass,
    p,
    epsilon: float,
    seed: int,
    *,
    c_apx: float = C_APX_DEFAULT,
    retries: int = RETRY_DEFAULT,
) -> tuple[tuple[int, ...], ApproximationCertificate]:
    """Multiset of concept indices whose uniform average tracks the mixture p
    within epsilon at every domain point.

    This is `epsilon_approximation` on the dual class, so the size ceiling
    uses the dual VC dimension.  Draws are i.i.d. from p, hence the multiset
    is contained in p's support.
    """
    m = len(concept_class)
    w = _as_distribution(p, m, "p")
    d_star = vc_dimension(dual_class(concept_class))
    multiset, dev, bound = _rejection_sample(
        w, d_star, epsilon, seed, c_apx, retries,
        lambda draw: sparsification_deviation(concept_class, p, draw),
    )
    cert = ApproximationCertificate(multiset, dev, float(epsilon), bound)
    return multiset, cert
