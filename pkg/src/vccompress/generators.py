"""Concept-class families for experiments and the verification suite.

Every generator is deterministic given its arguments (randomized ones take a
seed), returns a canonical ConceptClass, and guards the enumerations that
grow exponentially.
"""

from __future__ import annotations

import math
from pathlib import Path

from .concepts import ConceptClass, parse_concept_class, row_to_int, vc_dimension
from .errors import ConfigError
from .seeding import make_rng

__all__ = [
    "intervals",
    "k_interval_unions",
    "full_cube",
    "halfspaces_grid",
    "random_vc_capped",
    "class_from_file",
    "make_concept_class",
]


def intervals(n: int) -> ConceptClass:
    """All contiguous blocks of 1s on n ordered points, plus the empty
    concept: n(n+1)/2 + 1 concepts of VC dimension 2 (for n >= 2)."""
    if n < 1:
        raise ValueError("domain size must be positive")
    rows = {0}
    for first in range(n):
        for last in range(first, n):
            rows.add(((1 << (last - first + 1)) - 1) << (n - 1 - last))
    return ConceptClass.from_row_ints(n, sorted(rows))


def k_interval_unions(n: int, k: int) -> ConceptClass:
    """Unions of at most k intervals: every 0/1 row with at most k maximal
    runs of 1s.  Enumerates all 2^n rows, so n is capped at 16."""
    if n < 1 or k < 1:
        raise ValueError("domain size and union count must be positive")
    if n > 16:
        raise ValueError("k_interval_unions enumerates 2^n rows; n must be <= 16")
    rows = []
    for value in range(1 << n):
        runs = sum(1 for block in format(value, f"0{n}b").split("0") if block)
        if runs <= k:
            rows.append(value)
    return ConceptClass.from_row_ints(n, rows)


def full_cube(n: int) -> ConceptClass:
    """Every labeling of n points (VC dimension n); n capped at 12."""
    if n < 1:
        raise ValueError("domain size must be positive")
    if n > 12:
        raise ValueError("full_cube has 2^n concepts; n must be <= 12")
    return ConceptClass.from_row_ints(n, range(1 << n))


def halfspaces_grid(side: int, dim: int, count: int = 64, seed: int = 0) -> ConceptClass:
    """Halfspace labelings of the side^dim integer grid.

    Points are centered (coordinates 2i - side + 1) and augmented with a
    constant feature; each of `count` seeded Gaussian weight vectors labels a
    point 1 iff its inner product is strictly positive.  Duplicate labelings
    collapse, so the class is usually much smaller than `count`.
    """
    if side < 2 or dim < 1:
        raise ValueError("grid needs side >= 2 and dim >= 1")
    n = side**dim
    if n > 4096:
        raise ValueError("grid too large; side**dim must be <= 4096")
    if count < 1:
        raise ValueError("count must be positive")
    coords = []
    for index in range(n):
        rest, point = index, []
        for _ in range(dim):
            rest, axis = divmod(rest, side)
            point.append(2 * axis - side + 1)
        coords.append(point + [1])
    rng = make_rng(seed)
    weights = rng.normal(size=(count, dim + 1))
    rows = {
        row_to_int([1 if sum(w * c for w, c in zip(wv, cv)) > 0 else 0 for cv in coords])
        for wv in weights
    }
    return ConceptClass.from_row_ints(n, sorted(rows))


def random_vc_capped(
    n: int, vc_cap: int, max_concepts: int, seed: int = 0, tries: int | None = None
) -> ConceptClass:
    """Greedily grown random class whose VC dimension never exceeds vc_cap.

    Candidate rows are drawn uniformly; one is kept only if adding it leaves
    the dimension within the cap.  Stops at max_concepts rows or after the
    try budget (default 50 per requested concept).
    """
    if n < 1 or vc_cap < 0 or max_concepts < 1:
        raise ValueError("need n >= 1, vc_cap >= 0, max_concepts >= 1")
    rng = make_rng(seed)
    budget = 50 * max_concepts if tries is None else tries
    rows: set[int] = set()
    for _ in range(budget):
        if len(rows) >= max_concepts:
            break
        candidate = row_to_int(rng.integers(0, 2, size=n).tolist())
        if candidate in rows:
            continue
        tentative = ConceptClass.from_row_ints(n, sorted(rows | {candidate}))
        if vc_dimension(tentative) <= vc_cap:
            rows.add(candidate)
    return ConceptClass.from_row_ints(n, sorted(rows))


def class_from_file(path) -> ConceptClass:
    return parse_concept_class(Path(path).read_text())


_GENERATORS = {
    "intervals": intervals,
    "k_interval_unions": k_interval_unions,
    "full_cube": full_cube,
    "halfspaces_grid": halfspaces_grid,
    "random_vc_capped": random_vc_capped,
    "file": class_from_file,
}


def make_concept_class(spec: dict) -> ConceptClass:
    """Build a class from a {"kind": ..., **params} mapping (the form used in
    suite configs and on the command line)."""
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ConfigError("a class spec must be a mapping with a 'kind' key")
    params = dict(spec)
    kind = params.pop("kind")
    generator = _GENERATORS.get(kind)
    if generator is None:
        raise ConfigError(
            f"unknown class kind {kind!r}; expected one of {sorted(_GENERATORS)}"
        )
    try:
        return generator(**params)
    except TypeError as exc:
        raise ConfigError(f"bad parameters for {kind!r}: {exc}") from exc
    except ValueError as exc:
        raise ConfigError(f"bad parameters for {kind!r}: {exc}") from exc
