"""Zero-sum games on binary payoff matrices.

The row player maximizes, the column player minimizes.  Three solvers:

* ``solve_exact`` — dense simplex over exact rationals.  The game is turned
  into the standard LP pair via a +1 payoff shift (making the value positive);
  Bland's rule guarantees termination, and both players' optimal strategies
  come out of one tableau.  Optimality is asserted with exact arithmetic.
* ``solve_mw`` — multiplicative weights for the row player against exact
  column best responses, with a post-hoc exploitability certificate.
* ``sparse_epsilon_nash`` — small multisets of pure strategies whose uniform
  play is an epsilon-equilibrium, obtained by sparsifying exact or
  near-optimal mixed strategies; support sizes depend only on the VC
  dimensions of the strategy sets, never on how often rows/columns repeat.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .approx import ProbabilityVector, approximation_size_bound, sparsify_mixture
from .concepts import ConceptClass, dual_class, row_to_int, vc_dimension
from .errors import ConvergenceError, ExactSolverCapError, ParseError
from .seeding import child_seeds

__all__ = [
    "EXACT_ENTRY_CAP",
    "MW_ITERATION_CAP",
    "PayoffMatrix",
    "GameSolution",
    "SparseEquilibrium",
    "best_response",
    "solve_exact",
    "exact_strategies",
    "solve_mw",
    "sparse_epsilon_nash",
    "parse_payoff_matrix",
]

logger = logging.getLogger(__name__)

EXACT_ENTRY_CAP = 4096
MW_ITERATION_CAP = 1_000_000


class PayoffMatrix:
    """A 0/1 payoff matrix; entry (i, j) is the row player's payoff when the
    row player plays i and the column player plays j.  Rows and columns may
    repeat (pure strategies are positional, unlike concept rows)."""

    __slots__ = ("_entries",)

    def __init__(self, entries):
        arr = np.array(entries, dtype=np.uint8)
        if arr.ndim != 2 or arr.size == 0:
            raise ValueError("payoff matrix must be a nonempty 2-d array")
        if not np.isin(arr, (0, 1)).all():
            raise ValueError("payoff entries must be 0 or 1")
        arr.flags.writeable = False
        self._entries = arr

    @property
    def entries(self) -> np.ndarray:
        return self._entries

    @property
    def rows(self) -> int:
        return int(self._entries.shape[0])

    @property
    def cols(self) -> int:
        return int(self._entries.shape[1])

    def __eq__(self, other):
        return isinstance(other, PayoffMatrix) and np.array_equal(self._entries, other._entries)

    def __repr__(self):
        return f"PayoffMatrix({self.rows}x{self.cols})"


@dataclass(frozen=True)
class GameSolution:
    """A strategy pair with a certified exploitability: the column strategy
    caps every row payoff at value+exploitability, and the row strategy
    secures at least value-exploitability against every column."""

    row_strategy: ProbabilityVector
    col_strategy: ProbabilityVector
    value_estimate: float
    exploitability: float
    exact_value: Fraction | None = None
    iterations: int | None = None

    def __post_init__(self):
        if self.exploitability < 0:
            raise ValueError("exploitability cannot be negative")


@dataclass(frozen=True)
class SparseEquilibrium:
    """Multisets of pure strategies whose uniform play is within epsilon of
    the game value against every pure response (verified exhaustively)."""

    row_multiset: tuple[int, ...]
    col_multiset: tuple[int, ...]
    epsilon: float
    certified_exploitability: float
    value_estimate: float
    row_support_bound: int
    col_support_bound: int
    row_test_dimension: int
    col_test_dimension: int

    def __post_init__(self):
        # 1e-12 absorbs float re-association in the exhaustive check; the
        # underlying inequality holds exactly in real arithmetic
        if self.certified_exploitability > self.epsilon + 1e-12:
            raise ValueError(
                f"certified exploitability {self.certified_exploitability} exceeds "
                f"epsilon {self.epsilon}"
            )


def _as_matrix(matrix) -> np.ndarray:
    if isinstance(matrix, PayoffMatrix):
        return matrix.entries
    return PayoffMatrix(matrix).entries


def best_response(matrix, strategy, side: str) -> tuple[int, float]:
    """Best pure response for `side` against the opponent's mixed strategy.

    side="row": strategy is over columns; returns (argmax row, its payoff).
    side="col": strategy is over rows; returns (argmin column, its payoff).
    Ties break to the lowest index.
    """
    m = _as_matrix(matrix)
    w = strategy.weights if isinstance(strategy, ProbabilityVector) else ProbabilityVector(strategy).weights
    if side == "row":
        if w.size != m.shape[1]:
            raise ValueError(f"strategy length {w.size} != column count {m.shape[1]}")
        payoffs = m.astype(np.float64) @ w
        idx = int(np.argmax(payoffs))
        return idx, float(payoffs[idx])
    if side == "col":
        if w.size != m.shape[0]:
            raise ValueError(f"strategy length {w.size} != row count {m.shape[0]}")
        payoffs = w @ m.astype(np.float64)
        idx = int(np.argmin(payoffs))
        return idx, float(payoffs[idx])
    raise ValueError(f"side must be 'row' or 'col', got {side!r}")


# -- exact simplex -----------------------------------------------------------


def _exact_minimax(entries: np.ndarray) -> tuple[Fraction, list[Fraction], list[Fraction]]:
    """Exact game value and optimal strategies via one simplex run.

    Solves max 1.w  s.t. (M+1)w <= 1, w >= 0 with Bland's rule; the shifted
    value is 1/sum(w), the column strategy is w rescaled, and the row strategy
    is the dual solution read off the slack columns' reduced costs.
    """
    m, n = entries.shape
    one = Fraction(1)
    zero = Fraction(0)
    # tableau rows: [A | I | rhs]; objective reduced costs cbar
    tableau = [
        [Fraction(int(entries[i, j]) + 1) for j in range(n)]
        + [one if k == i else zero for k in range(m)]
        + [one]
        for i in range(m)
    ]
    cbar = [one] * n + [zero] * m
    basis = list(range(n, n + m))
    while True:
        enter = next((j for j, c in enumerate(cbar) if c > 0), None)  # Bland: lowest index
        if enter is None:
            break
        leave, best_ratio = None, None
        for i in range(m):
            a = tableau[i][enter]
            if a > 0:
                ratio = tableau[i][-1] / a
                if (
                    best_ratio is None
                    or ratio < best_ratio
                    or (ratio == best_ratio and basis[i] < basis[leave])
                ):
                    best_ratio, leave = ratio, i
        if leave is None:
            raise ArithmeticError("LP unbounded; impossible for shifted payoffs")
        pivot = tableau[leave][enter]
        tableau[leave] = [v / pivot for v in tableau[leave]]
        pivot_row = tableau[leave]
        for i in range(m):
            if i != leave:
                f = tableau[i][enter]
                if f:
                    tableau[i] = [a - f * b for a, b in zip(tableau[i], pivot_row)]
        f = cbar[enter]
        cbar = [c - f * b for c, b in zip(cbar, pivot_row[:-1])]
        basis[leave] = enter

    w = [zero] * n
    for i, b in enumerate(basis):
        if b < n:
            w[b] = tableau[i][-1]
    total = sum(w)
    duals = [-cbar[n + i] for i in range(m)]
    dual_total = sum(duals)
    if total <= 0 or dual_total != total:
        raise ArithmeticError("simplex did not reach a primal/dual optimal pair")
    shifted_value = 1 / total
    q = [wi * shifted_value for wi in w]
    p = [yi * shifted_value for yi in duals]

    # exact optimality certificates on the shifted matrix
    guarantees = [
        sum(p[i] * (int(entries[i, j]) + 1) for i in range(m)) for j in range(n)
    ]
    caps = [sum((int(entries[i, j]) + 1) * q[j] for j in range(n)) for i in range(m)]
    if min(guarantees) != shifted_value or max(caps) != shifted_value:
        raise ArithmeticError("simplex optimum failed its exact certificate")
    return shifted_value - 1, p, q


def solve_exact(matrix, *, entry_cap: int = EXACT_ENTRY_CAP) -> GameSolution:
    """Exact minimax solution by a self-contained dense simplex over
    rationals.  Matrices above `entry_cap` entries are refused; use solve_mw."""
    m = _as_matrix(matrix)
    if m.size > entry_cap:
        raise ExactSolverCapError(
            f"{m.shape[0]}x{m.shape[1]} exceeds the {entry_cap}-entry cap for the "
            "exact solver; use solve_mw"
        )
    value, p, q = _exact_minimax(m)
    row = ProbabilityVector([float(x) for x in p])
    col = ProbabilityVector([float(x) for x in q])
    v = float(value)
    mf = m.astype(np.float64)
    exploit = max(
        float((mf @ col.weights).max()) - v,
        v - float((row.weights @ mf).min()),
        0.0,
    )
    return GameSolution(row, col, v, exploit, exact_value=value)


def exact_strategies(matrix) -> tuple[Fraction, list[Fraction], list[Fraction]]:
    """Exact (value, row strategy, column strategy) without float conversion."""
    return _exact_minimax(_as_matrix(matrix))


# -- multiplicative weights ----------------------------------------------------


def _mw_certificate(mf: np.ndarray, p_bar: np.ndarray, q_bar: np.ndarray):
    value = float(p_bar @ mf @ q_bar)
    row_secures = float((p_bar @ mf).min())
    col_caps = float((mf @ q_bar).max())
    exploit = max(col_caps - value, value - row_secures, 0.0)
    return value, exploit, row_secures, col_caps


def solve_mw(
    matrix,
    target_exploitability: float = 0.01,
    *,
    iteration_cap: int = MW_ITERATION_CAP,
) -> GameSolution:
    """Multiplicative-weights solution certified to the target exploitability.

    The row player runs exponential weights with learning rate
    sqrt(ln(m)/T) over a planned horizon T; the column player best-responds
    each round.  Averaged strategies are certified periodically and returned
    as soon as they pass; hitting the iteration cap raises ConvergenceError
    carrying the last certified exploitability.
    """
    if target_exploitability <= 0:
        raise ValueError("target exploitability must be positive")
    m = _as_matrix(matrix)
    rows, cols = m.shape
    mf = m.astype(np.float64)
    log_m = math.log(max(rows, 2))
    planned = min(iteration_cap, max(64, math.ceil(1.3 * log_m / target_exploitability**2)))
    eta = math.sqrt(log_m / planned)
    check_every = max(64, planned // 32)

    cumulative = np.zeros(rows)
    p_sum = np.zeros(rows)
    q_counts = np.zeros(cols)
    best_exploit = math.inf
    t = 0
    while t < iteration_cap:
        t += 1
        logits = eta * cumulative
        logits -= logits.max()
        p = np.exp(logits)
        p /= p.sum()
        payoffs = p @ mf
        j = int(np.argmin(payoffs))
        cumulative += mf[:, j]
        p_sum += p
        q_counts[j] += 1
        if t % check_every == 0 or t == iteration_cap:
            p_bar = p_sum / t
            q_bar = q_counts / t
            value, exploit, _, _ = _mw_certificate(mf, p_bar, q_bar)
            best_exploit = min(best_exploit, exploit)
            if exploit <= target_exploitability:
                logger.debug("mw certified after %d iterations (exploitability %.3g)", t, exploit)
                return GameSolution(
                    ProbabilityVector(p_bar),
                    ProbabilityVector(q_bar),
                    value,
                    exploit,
                    iterations=t,
                )
    raise ConvergenceError(
        f"no certificate at target {target_exploitability} within {iteration_cap} iterations "
        f"(best {best_exploit:.3g})",
        last_exploitability=best_exploit,
    )


# -- sparse equilibria ----------------------------------------------------------


def _strategy_class_and_map(unique_rows: np.ndarray) -> tuple[ConceptClass, list[int]]:
    """Concept class of the distinct strategy rows plus the map from concept
    index back to the row index within `unique_rows`."""
    cls = ConceptClass.from_matrix(unique_rows)
    by_int = {row_to_int(unique_rows[i]): i for i in range(unique_rows.shape[0])}
    return cls, [by_int[r] for r in cls.rows]


def sparse_epsilon_nash(matrix, epsilon: float, seed: int) -> SparseEquilibrium:
    """Sparse epsilon-equilibrium with support sizes governed by the VC
    dimensions of the strategy sets.

    Duplicate rows/columns are collapsed before solving (they change neither
    the value nor the dimensions), so padding a matrix with copies cannot
    inflate the supports.  Each side's multiset is the sparsified optimal
    mixture; the epsilon guarantee is re-verified against every pure
    strategy of the original matrix.
    """
    if not (0 < epsilon < 1):
        raise ValueError("epsilon must be in (0, 1)")
    m = _as_matrix(matrix)
    seeds = child_seeds(seed, 2)

    urows, row_rep = np.unique(m, axis=0, return_index=True)
    ucols_t, col_rep = np.unique(m.T, axis=0, return_index=True)
    core = m[np.ix_(np.sort(row_rep), np.sort(col_rep))]
    row_rep_sorted = np.sort(row_rep)
    col_rep_sorted = np.sort(col_rep)

    if core.size <= EXACT_ENTRY_CAP:
        value, p_exact, q_exact = _exact_minimax(core)
        value_f = float(value)
        p = np.array([float(x) for x in p_exact])
        q = np.array([float(x) for x in q_exact])
        eps_sparsify = epsilon
    else:
        solution = solve_mw(core, target_exploitability=epsilon / 8)
        value_f = solution.value_estimate
        p = solution.row_strategy.weights.copy()
        q = solution.col_strategy.weights.copy()
        eps_sparsify = 0.75 * epsilon

    # rows as concepts over columns; the sparsifier's size bound is the VC
    # dimension of the dual (= the column set), as required
    row_cls, row_map = _strategy_class_and_map(core)
    p_by_concept = np.zeros(len(row_cls))
    for concept_idx, core_row in enumerate(row_map):
        p_by_concept[concept_idx] = p[core_row]
    row_ms, _ = sparsify_mixture(row_cls, ProbabilityVector(p_by_concept), eps_sparsify, seeds[0])
    row_multiset = tuple(int(row_rep_sorted[row_map[c]]) for c in row_ms)

    # columns as concepts over rows, symmetrically
    col_cls, col_map = _strategy_class_and_map(core.T)
    q_by_concept = np.zeros(len(col_cls))
    for concept_idx, core_col in enumerate(col_map):
        q_by_concept[concept_idx] = q[core_col]
    col_ms, _ = sparsify_mixture(col_cls, ProbabilityVector(q_by_concept), eps_sparsify, seeds[1])
    col_multiset = tuple(int(col_rep_sorted[col_map[c]]) for c in col_ms)

    # exhaustive verification on the ORIGINAL matrix
    mf = m.astype(np.float64)
    row_play = mf[list(row_multiset), :].mean(axis=0)
    col_play = mf[:, list(col_multiset)].mean(axis=1)
    certified = max(value_f - float(row_play.min()), float(col_play.max()) - value_f, 0.0)

    row_dim = vc_dimension(dual_class(row_cls))
    col_dim = vc_dimension(dual_class(col_cls))
    return SparseEquilibrium(
        row_multiset=row_multiset,
        col_multiset=col_multiset,
        epsilon=float(epsilon),
        certified_exploitability=certified,
        value_estimate=value_f,
        row_support_bound=approximation_size_bound(row_dim, eps_sparsify),
        col_support_bound=approximation_size_bound(col_dim, eps_sparsify),
        row_test_dimension=row_dim,
        col_test_dimension=col_dim,
    )


# -- text format ------------------------------------------------------------------


def parse_payoff_matrix(text: str) -> PayoffMatrix:
    """Payoff matrices share the concept-class text format (header `n m`,
    then m rows of n characters), but rows are positional strategies: order
    is preserved and duplicates are allowed."""
    header: tuple[int, int] | None = None
    rows: list[list[int]] = []
    n = m = -1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if header is None:
            parts = line.split()
            if len(parts) != 2:
                raise ParseError("header must be 'num_columns num_rows'", lineno)
            try:
                n, m = int(parts[0]), int(parts[1])
            except ValueError:
                raise ParseError("header must contain two integers", lineno) from None
            if n < 1 or m < 1:
                raise ParseError("matrix dimensions must be positive", lineno)
            header = (n, m)
            continue
        if len(rows) == m:
            raise ParseError(f"more than {m} matrix rows", lineno)
        if len(line) != n or any(ch not in "01" for ch in line):
            raise ParseError(f"row must be exactly {n} characters of 0/1", lineno)
        rows.append([int(ch) for ch in line])
    if header is None:
        raise ParseError("empty input: missing header")
    if len(rows) != m:
        raise ParseError(f"expected {m} matrix rows, found {len(rows)}")
    return PayoffMatrix(rows)
