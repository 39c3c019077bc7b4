"""Finite binary concept classes and their combinatorial primitives.

A concept class is a nonempty set of distinct 0/1 functions (concepts) on the
domain {0, ..., n-1}.  Rows are bit-packed integers kept in canonical
lexicographic order, so every concept index is stable across runs — the
compression scheme's determinism rests on that.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import ParseError

__all__ = [
    "ConceptClass",
    "LabeledSample",
    "ShatterWitness",
    "shatters",
    "vc_dimension",
    "dual_class",
    "dual_point_map",
    "consistent_concepts",
    "is_realizable",
    "parse_concept_class",
    "serialize_concept_class",
]


def row_to_int(bits: Sequence[int]) -> int:
    """Pack a 0/1 row; leftmost entry (point 0) is the most significant bit,
    so integer order equals lexicographic order of the row strings."""
    value = 0
    for b in bits:
        if b not in (0, 1):
            raise ValueError(f"row entries must be 0 or 1, got {b!r}")
        value = (value << 1) | int(b)
    return value


def int_to_row(value: int, width: int) -> tuple[int, ...]:
    return tuple((value >> (width - 1 - x)) & 1 for x in range(width))


@dataclass(frozen=True)
class ConceptClass:
    """Concept rows over {0, ..., domain_size-1}, canonically ordered.

    ``rows[i]`` packs concept i with bit ``domain_size-1-x`` holding its value
    at point x; rows are strictly increasing, which is exactly lexicographic
    order of the rows as 0/1 strings.
    """

    domain_size: int
    rows: tuple[int, ...]

    def __post_init__(self):
        n = self.domain_size
        if not isinstance(n, int) or n < 1:
            raise ValueError(f"domain_size must be a positive integer, got {n!r}")
        if not self.rows:
            raise ValueError("a concept class must contain at least one concept")
        limit = 1 << n
        prev = -1
        for r in self.rows:
            if not isinstance(r, int) or not (0 <= r < limit):
                raise ValueError(f"row {r!r} does not fit domain size {n}")
            if r <= prev:
                raise ValueError("rows must be strictly increasing (distinct, canonical order)")
            prev = r

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_row_ints(cls, domain_size: int, values: Iterable[int], *, dedupe: bool = False) -> "ConceptClass":
        vals = list(values)
        if dedupe:
            vals = sorted(set(vals))
        else:
            if len(set(vals)) != len(vals):
                raise ValueError("duplicate concept rows")
            vals = sorted(vals)
        return cls(domain_size, tuple(vals))

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]], *, dedupe: bool = False) -> "ConceptClass":
        rows = list(rows)
        if not rows:
            raise ValueError("a concept class must contain at least one concept")
        n = len(rows[0])
        if any(len(r) != n for r in rows):
            raise ValueError("all rows must have equal length")
        return cls.from_row_ints(n, (row_to_int(r) for r in rows), dedupe=dedupe)

    @classmethod
    def from_matrix(cls, matrix: np.ndarray, *, dedupe: bool = False) -> "ConceptClass":
        arr = np.asarray(matrix)
        if arr.ndim != 2:
            raise ValueError("matrix must be 2-dimensional")
        return cls.from_rows(arr.astype(int).tolist(), dedupe=dedupe)

    # -- views -------------------------------------------------------------

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def num_concepts(self) -> int:
        return len(self.rows)

    @functools.cached_property
    def matrix(self) -> np.ndarray:
        """(num_concepts, domain_size) uint8 matrix; read-only."""
        n = self.domain_size
        arr = np.empty((len(self.rows), n), dtype=np.uint8)
        for i, r in enumerate(self.rows):
            for x in range(n):
                arr[i, x] = (r >> (n - 1 - x)) & 1
        arr.flags.writeable = False
        return arr

    @functools.cached_property
    def point_masks(self) -> tuple[int, ...]:
        """For each point x, the bitmask of concepts taking value 1 at x
        (bit c corresponds to concept index c, so the lowest set bit is the
        lowest consistent concept index)."""
        masks = [0] * self.domain_size
        for c, r in enumerate(self.rows):
            for x in range(self.domain_size):
                if (r >> (self.domain_size - 1 - x)) & 1:
                    masks[x] |= 1 << c
        return tuple(masks)

    def value(self, concept: int, point: int) -> int:
        self._check_point(point)
        return (self.rows[concept] >> (self.domain_size - 1 - point)) & 1

    def concept_bits(self, concept: int) -> tuple[int, ...]:
        return int_to_row(self.rows[concept], self.domain_size)

    def _check_point(self, point: int) -> None:
        if not isinstance(point, (int, np.integer)) or not (0 <= point < self.domain_size):
            raise ValueError(f"point {point!r} outside domain of size {self.domain_size}")


@dataclass(frozen=True)
class LabeledSample:
    """A multiset of domain points plus one 0/1 label per distinct point.

    ``points`` preserves multiplicity and order as given; ``label_items`` is
    the sorted (point, label) map over the distinct points.
    """

    points: tuple[int, ...]
    label_items: tuple[tuple[int, int], ...]

    def __post_init__(self):
        keys = [p for p, _ in self.label_items]
        if keys != sorted(set(keys)):
            raise ValueError("label_items must be sorted with distinct points")
        for p, lbl in self.label_items:
            if not isinstance(p, int) or p < 0:
                raise ValueError(f"point {p!r} must be a nonnegative integer")
            if lbl not in (0, 1):
                raise ValueError(f"label for point {p} must be 0 or 1, got {lbl!r}")
        labeled = set(keys)
        if set(self.points) != labeled:
            raise ValueError("points and label_items must cover the same distinct points")

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, int]]) -> "LabeledSample":
        """Build from (point, label) pairs; conflicting labels are rejected."""
        pts: list[int] = []
        labels: dict[int, int] = {}
        for p, lbl in pairs:
            p = int(p)
            lbl = int(lbl)
            if p in labels and labels[p] != lbl:
                raise ValueError(f"conflicting labels for point {p}")
            labels[p] = lbl
            pts.append(p)
        return cls(tuple(pts), tuple(sorted(labels.items())))

    @classmethod
    def from_concept(cls, concept_class: ConceptClass, concept: int, points: Iterable[int]) -> "LabeledSample":
        """Sample labeled by a concept of the class (realizable by construction)."""
        pts = tuple(int(p) for p in points)
        for p in pts:
            concept_class._check_point(p)
        labels = {p: concept_class.value(concept, p) for p in set(pts)}
        return cls(pts, tuple(sorted(labels.items())))

    @property
    def labels(self) -> dict[int, int]:
        return dict(self.label_items)

    @property
    def distinct_points(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.label_items)

    @property
    def size(self) -> int:
        return len(self.points)

    @property
    def is_empty(self) -> bool:
        return not self.points

    def restrict(self, subset: Iterable[int]) -> "LabeledSample":
        """Sub-sample on a subset of the distinct points."""
        labels = self.labels
        pts = tuple(sorted(set(int(p) for p in subset)))
        missing = [p for p in pts if p not in labels]
        if missing:
            raise ValueError(f"points {missing} are not in the sample")
        return LabeledSample(pts, tuple((p, labels[p]) for p in pts))

    def label_vector(self) -> np.ndarray:
        return np.array([lbl for _, lbl in self.label_items], dtype=np.uint8)


@dataclass(frozen=True)
class ShatterWitness:
    """A shattered point set plus, for each of the 2^k label patterns, a
    concept index realizing it.  Pattern p assigns bit j of p to set[j]."""

    set: tuple[int, ...]
    witness_concepts: tuple[int, ...]

    def __post_init__(self):
        if len(self.witness_concepts) != 1 << len(self.set):
            raise ValueError("need exactly one witness per label pattern")

    def verify(self, concept_class: ConceptClass) -> bool:
        for pattern, concept in enumerate(self.witness_concepts):
            for j, x in enumerate(self.set):
                if concept_class.value(concept, x) != (pattern >> j) & 1:
                    return False
        return True


# -- shattering and VC dimension ------------------------------------------


def shatters(concept_class: ConceptClass, points: Sequence[int]) -> ShatterWitness | None:
    """Witness that the class shatters `points`, or None if it does not."""
    pts = [int(p) for p in points]
    if len(set(pts)) != len(pts):
        raise ValueError("points must be distinct")
    for p in pts:
        concept_class._check_point(p)
    masks = concept_class.point_masks
    full = (1 << len(concept_class)) - 1
    witnesses = []
    for pattern in range(1 << len(pts)):
        cell = full
        for j, x in enumerate(pts):
            cell &= masks[x] if (pattern >> j) & 1 else full ^ masks[x]
            if not cell:
                return None
        witnesses.append((cell & -cell).bit_length() - 1)  # lowest concept index
    return ShatterWitness(tuple(pts), tuple(witnesses))


def _vc_levelwise_pyint(masks: Sequence[int], m: int, n: int) -> int:
    """Level-wise exhaustive search with arbitrary-size integer masks."""
    full = (1 << m) - 1
    level: list[tuple[tuple[int, ...], tuple[int, ...]]] = [
        ((x,), (masks[x], masks[x] ^ full)) for x in range(n) if masks[x] not in (0, full)
    ]
    if not level:
        return 0
    k = 1
    while True:
        # 2^(k+1) label patterns need that many distinct concepts
        if (1 << (k + 1)) > m or k + 1 > n:
            return k
        nxt = []
        for s, cells in level:
            for x in range(s[-1] + 1, n):
                one, zero = masks[x], masks[x] ^ full
                new_cells = []
                alive = True
                for cell in cells:
                    a = cell & one
                    if not a:
                        alive = False
                        break
                    b = cell & zero
                    if not b:
                        alive = False
                        break
                    new_cells.append(a)
                    new_cells.append(b)
                if alive:
                    nxt.append((s + (x,), tuple(new_cells)))
        if not nxt:
            return k
        level = nxt
        k += 1


def _vc_levelwise_uint64(matrix: np.ndarray) -> int:
    """Vectorized level-wise search; requires at most 63 concepts."""
    m, n = matrix.shape
    powers = np.left_shift(np.uint64(1), np.arange(m, dtype=np.uint64))
    ones = (matrix.astype(np.uint64).T * powers).sum(axis=1, dtype=np.uint64)
    full = np.uint64((1 << m) - 1)
    pts = np.arange(n, dtype=np.int64)
    alive = (ones != 0) & (ones != full)
    sets = pts[alive][:, None]
    if sets.size == 0:
        return 0
    cells = np.stack([ones[alive], ones[alive] ^ full], axis=1)
    k = 1
    while True:
        if (1 << (k + 1)) > m or k + 1 > n:
            return k
        next_sets, next_cells = [], []
        chunk = max(1, 4_000_000 // (1 << (k + 1)))
        for start in range(0, len(sets), chunk):
            sets_c = sets[start : start + chunk]
            cells_c = cells[start : start + chunk]
            last = sets_c[:, -1]
            counts = (n - 1 - last).astype(np.int64)
            total = int(counts.sum())
            if total == 0:
                continue
            set_idx = np.repeat(np.arange(len(sets_c)), counts)
            offsets = np.concatenate(([0], np.cumsum(counts)[:-1]))
            x = np.arange(total) - np.repeat(offsets, counts) + np.repeat(last + 1, counts)
            one = ones[x][:, None]
            base = cells_c[set_idx]
            cand = np.concatenate([base & one, base & (one ^ full)], axis=1)
            ok = (cand != 0).all(axis=1)
            if ok.any():
                next_sets.append(np.concatenate([sets_c[set_idx[ok]], x[ok, None]], axis=1))
                next_cells.append(cand[ok])
        if not next_sets:
            return k
        sets = np.concatenate(next_sets)
        cells = np.concatenate(next_cells)
        k += 1


@functools.lru_cache(maxsize=None)
def vc_dimension(concept_class: ConceptClass) -> int:
    """Exact VC dimension.

    Exhaustive over subset sizes in increasing order, stopping at the first
    size with no shattered set.  Within a level only extensions of shattered
    sets are candidates, which loses nothing: every shattered set's prefixes
    are shattered.
    """
    m, n = len(concept_class), concept_class.domain_size
    if m <= 63:
        return _vc_levelwise_uint64(concept_class.matrix)
    return _vc_levelwise_pyint(concept_class.point_masks, m, n)


# -- dual class ------------------------------------------------------------


@functools.lru_cache(maxsize=None)
def dual_class(concept_class: ConceptClass) -> ConceptClass:
    """Transpose of the class: distinct columns become concepts over the
    domain of original concept indices."""
    m, n = len(concept_class), concept_class.domain_size
    cols = set()
    for x in range(n):
        cols.add(row_to_int(concept_class.matrix[:, x]))
    return ConceptClass(m, tuple(sorted(cols)))


def dual_point_map(concept_class: ConceptClass) -> tuple[int, ...]:
    """For each original point, the index of its column in the dual class."""
    dual = dual_class(concept_class)
    index = {r: i for i, r in enumerate(dual.rows)}
    return tuple(
        index[row_to_int(concept_class.matrix[:, x])] for x in range(concept_class.domain_size)
    )


# -- consistency -----------------------------------------------------------


def consistent_concepts(concept_class: ConceptClass, sample: LabeledSample) -> list[int]:
    """Indices of all concepts agreeing with the sample, ascending."""
    if sample.is_empty:
        return list(range(len(concept_class)))
    pts = np.array(sample.distinct_points, dtype=np.int64)
    if pts.max() >= concept_class.domain_size:
        raise ValueError(
            f"sample point {int(pts.max())} outside domain of size {concept_class.domain_size}"
        )
    wanted = sample.label_vector()
    hits = (concept_class.matrix[:, pts] == wanted[None, :]).all(axis=1)
    return [int(i) for i in np.flatnonzero(hits)]


def is_realizable(concept_class: ConceptClass, sample: LabeledSample) -> bool:
    return bool(consistent_concepts(concept_class, sample))


# -- text format -----------------------------------------------------------


def parse_concept_class(text: str, *, allow_duplicates: bool = False) -> ConceptClass:
    """Parse the class text format: a header line ``n m`` followed by m rows
    of n characters from {0,1}.  Whitespace-only lines are ignored; duplicate
    rows are rejected with the offending line number.

    With ``allow_duplicates`` the distinct rows are kept (used for payoff
    matrices, which share the format but may repeat strategies — those are
    parsed elsewhere and keep row order).
    """
    header: tuple[int, int] | None = None
    rows: list[int] = []
    seen: dict[int, int] = {}
    n = m = -1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if header is None:
            parts = line.split()
            if len(parts) != 2:
                raise ParseError("header must be 'domain_size num_concepts'", lineno)
            try:
                n, m = int(parts[0]), int(parts[1])
            except ValueError:
                raise ParseError("header must contain two integers", lineno) from None
            if n < 1 or m < 1:
                raise ParseError("domain size and concept count must be positive", lineno)
            header = (n, m)
            continue
        if len(rows) == m:
            raise ParseError(f"more than {m} concept rows", lineno)
        if len(line) != n or any(ch not in "01" for ch in line):
            raise ParseError(f"row must be exactly {n} characters of 0/1", lineno)
        value = int(line, 2)
        if value in seen:
            if not allow_duplicates:
                raise ParseError(f"duplicate row (first seen at line {seen[value]})", lineno)
            continue
        seen[value] = lineno
        rows.append(value)
    if header is None:
        raise ParseError("empty input: missing header")
    if not allow_duplicates and len(rows) != m:
        raise ParseError(f"expected {m} concept rows, found {len(rows)}")
    return ConceptClass.from_row_ints(n, rows)


def serialize_concept_class(concept_class: ConceptClass) -> str:
    lines = [f"{concept_class.domain_size} {len(concept_class)}"]
    n = concept_class.domain_size
    for r in concept_class.rows:
        lines.append(format(r, f"0{n}b"))
    return "\n".join(lines) + "\n"
