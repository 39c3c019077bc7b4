"""Zero-sum solver tests.

The oracle here is LP duality itself: if a strategy pair (p, q) satisfies
min_j (p^T M)_j >= v and max_i (M q)_i <= v in exact arithmetic, then v IS
the game value and both strategies are optimal.  The checker below recomputes
that sandwich with Fractions, independently of the solver's internals.
"""

from fractions import Fraction

import numpy as np
import pytest

from vccompress import (
    ConvergenceError,
    ExactSolverCapError,
    GameSolution,
    ParseError,
    PayoffMatrix,
    ProbabilityVector,
    best_response,
    exact_strategies,
    parse_payoff_matrix,
    solve_exact,
    solve_mw,
    sparse_epsilon_nash,
)

CYCLIC = [[1, 1, 0], [0, 1, 1], [1, 0, 1]]
IDENTITY = [[1, 0], [0, 1]]


def assert_exact_optimal(entries, value, p, q):
    rows, cols = len(entries), len(entries[0])
    assert sum(p) == 1 and all(x >= 0 for x in p)
    assert sum(q) == 1 and all(x >= 0 for x in q)
    secures = [
        sum(p[i] * Fraction(int(entries[i][j])) for i in range(rows)) for j in range(cols)
    ]
    caps = [
        sum(Fraction(int(entries[i][j])) * q[j] for j in range(cols)) for i in range(rows)
    ]
    assert min(secures) >= value
    assert max(caps) <= value


# -- exact solver --


def test_cyclic_three_by_three_value_is_two_thirds():
    sol = solve_exact(CYCLIC)
    assert sol.exact_value == Fraction(2, 3)
    assert sol.exploitability <= 1e-9


def test_identity_game_is_matching_pennies():
    value, p, q = exact_strategies(IDENTITY)
    assert value == Fraction(1, 2)
    assert p == [Fraction(1, 2), Fraction(1, 2)]
    assert q == [Fraction(1, 2), Fraction(1, 2)]


@pytest.mark.parametrize(
    "entries,expected",
    [
        ([[1]], Fraction(1)),
        ([[0]], Fraction(0)),
        ([[1, 1], [0, 0]], Fraction(1)),
        ([[0, 1]], Fraction(0)),
        ([[0], [1]], Fraction(1)),
        ([[1, 0, 1], [1, 1, 0]], Fraction(1, 2)),
    ],
)
def test_small_game_values(entries, expected):
    value, p, q = exact_strategies(entries)
    assert value == expected
    assert_exact_optimal(entries, value, p, q)


def test_random_games_pass_exact_duality_certificate():
    rng = np.random.default_rng(42)
    for _ in range(20):
        r = int(rng.integers(1, 9))
        c = int(rng.integers(1, 9))
        entries = rng.integers(0, 2, size=(r, c))
        value, p, q = exact_strategies(entries)
        assert_exact_optimal(entries.tolist(), value, p, q)
        assert 0 <= value <= 1


def test_solve_exact_reports_float_views():
    sol = solve_exact(CYCLIC)
    assert sol.value_estimate == pytest.approx(2 / 3)
    assert isinstance(sol.row_strategy, ProbabilityVector)
    assert sol.iterations is None


def test_exact_solver_refuses_oversized_matrices():
    big = np.zeros((65, 64), dtype=np.uint8)
    big[0, :] = 1
    with pytest.raises(ExactSolverCapError):
        solve_exact(big)
    # but the cap is on entries, not either dimension alone
    solve_exact(np.ones((64, 64), dtype=np.uint8))


# -- best response --


def test_best_response_row_picks_highest_payoff():
    idx, payoff = best_response(CYCLIC, ProbabilityVector([1.0, 0.0, 0.0]), "row")
    assert (idx, payoff) == (0, 1.0)


def test_best_response_col_picks_lowest_payoff():
    idx, payoff = best_response(CYCLIC, ProbabilityVector([0.0, 0.0, 1.0]), "col")
    assert (idx, payoff) == (1, 0.0)


def test_best_response_ties_break_to_lowest_index():
    idx, _ = best_response([[1, 1], [1, 1]], ProbabilityVector([0.5, 0.5]), "row")
    assert idx == 0
    idx, _ = best_response([[1, 1], [1, 1]], ProbabilityVector([0.5, 0.5]), "col")
    assert idx == 0


def test_best_response_validates_side_and_shape():
    with pytest.raises(ValueError):
        best_response(CYCLIC, ProbabilityVector([0.5, 0.5]), "row")
    with pytest.raises(ValueError):
        best_response(CYCLIC, ProbabilityVector([1 / 3] * 3), "diagonal")


# -- multiplicative weights --


def test_mw_certificate_brackets_true_value():
    sol = solve_mw(CYCLIC, target_exploitability=0.01)
    assert sol.exploitability <= 0.01
    assert abs(sol.value_estimate - 2 / 3) <= sol.exploitability + 1e-12
    assert sol.iterations is not None and sol.iterations >= 1


def test_mw_is_deterministic():
    a = solve_mw(CYCLIC, target_exploitability=0.02)
    b = solve_mw(CYCLIC, target_exploitability=0.02)
    assert a.value_estimate == b.value_estimate
    assert a.iterations == b.iterations
    assert np.array_equal(a.row_strategy.weights, b.row_strategy.weights)


def test_mw_agrees_with_exact_on_random_games():
    rng = np.random.default_rng(99)
    for _ in range(10):
        r = int(rng.integers(2, 13))
        c = int(rng.integers(2, 13))
        entries = rng.integers(0, 2, size=(r, c))
        exact = solve_exact(entries)
        approx = solve_mw(entries, target_exploitability=0.01)
        assert abs(approx.value_estimate - exact.value_estimate) <= 0.01 + 1e-12


def test_mw_raises_when_cap_blocks_certification():
    with pytest.raises(ConvergenceError) as info:
        solve_mw(IDENTITY, target_exploitability=1e-9, iteration_cap=2000)
    assert info.value.last_exploitability > 1e-9


def test_mw_rejects_nonpositive_target():
    with pytest.raises(ValueError):
        solve_mw(CYCLIC, target_exploitability=0.0)


# -- sparse equilibria --


def test_sparse_nash_identity_sizes_match_dimension_bound():
    eq = sparse_epsilon_nash(IDENTITY, epsilon=0.3, seed=11)
    # both strategy sets have VC dimension 1, so ceil(16*2/0.09) = 356 draws
    assert eq.row_test_dimension == 1 and eq.col_test_dimension == 1
    assert eq.row_support_bound == 356 and eq.col_support_bound == 356
    assert len(eq.row_multiset) == 356 and len(eq.col_multiset) == 356
    assert set(eq.row_multiset) <= {0, 1} and set(eq.col_multiset) <= {0, 1}
    assert eq.certified_exploitability <= 0.3
    assert eq.value_estimate == pytest.approx(0.5)


def test_sparse_nash_ignores_duplicate_padding():
    base = sparse_epsilon_nash(IDENTITY, epsilon=0.3, seed=5)
    padded_entries = np.tile(np.array(IDENTITY, dtype=np.uint8), (3, 2))
    padded = sparse_epsilon_nash(padded_entries, epsilon=0.3, seed=5)
    assert padded.row_support_bound == base.row_support_bound
    assert padded.col_support_bound == base.col_support_bound
    # representatives are first occurrences, so the multisets coincide too
    assert padded.row_multiset == base.row_multiset
    assert padded.col_multiset == base.col_multiset
    assert padded.value_estimate == base.value_estimate


def test_sparse_nash_certifies_against_every_pure_strategy():
    rng = np.random.default_rng(3)
    entries = rng.integers(0, 2, size=(8, 8))
    eq = sparse_epsilon_nash(entries, epsilon=0.25, seed=21)
    assert eq.certified_exploitability <= 0.25
    mf = entries.astype(float)
    worst_row = mf[list(eq.row_multiset), :].mean(axis=0).min()
    worst_col = mf[:, list(eq.col_multiset)].mean(axis=1).max()
    assert worst_row >= eq.value_estimate - 0.25 - 1e-12
    assert worst_col <= eq.value_estimate + 0.25 + 1e-12


def test_sparse_nash_cyclic_keeps_exact_value():
    eq = sparse_epsilon_nash(CYCLIC, epsilon=0.25, seed=7)
    assert eq.value_estimate == pytest.approx(2 / 3)
    assert eq.certified_exploitability <= 0.25


def test_sparse_nash_validates_epsilon():
    with pytest.raises(ValueError):
        sparse_epsilon_nash(IDENTITY, epsilon=0.0, seed=1)
    with pytest.raises(ValueError):
        sparse_epsilon_nash(IDENTITY, epsilon=1.0, seed=1)


# -- containers and parsing --


def test_payoff_matrix_rejects_bad_entries():
    with pytest.raises(ValueError):
        PayoffMatrix([[0, 2], [1, 0]])
    with pytest.raises(ValueError):
        PayoffMatrix(np.zeros((0, 3), dtype=np.uint8))


def test_game_solution_rejects_negative_exploitability():
    with pytest.raises(ValueError):
        GameSolution(
            ProbabilityVector([1.0]),
            ProbabilityVector([1.0]),
            0.5,
            -0.1,
        )


def test_parse_payoff_matrix_keeps_order_and_duplicates():
    pm = parse_payoff_matrix("2 3\n10\n10\n01\n")
    assert pm.entries.tolist() == [[1, 0], [1, 0], [0, 1]]


@pytest.mark.parametrize(
    "text",
    [
        "",
        "2\n10\n",
        "2 2\n10\n",
        "2 1\n10\n01\n",
        "2 1\n1x\n",
        "2 1\n101\n",
        "0 1\n\n",
    ],
)
def test_parse_payoff_matrix_rejects_malformed_input(text):
    with pytest.raises(ParseError):
        parse_payoff_matrix(text)
