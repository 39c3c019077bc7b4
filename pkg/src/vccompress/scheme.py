"""The compression scheme: compress, reconstruct, verify, and the wire codec.

A compressed sample is a small labeled kernel plus side information naming
subsets of kernel positions.  Reconstruction reruns the deterministic ERM on
each named subset and takes a per-point majority vote over the resulting
hypotheses, so the decompressor needs nothing beyond the concept class and
the bytes.

Pipeline: certify a weak mixture of subset-ERM hypotheses (learner), fold it
to a small voting multiset by 1/8-sparsification (approx), reduce the vote
counts by their gcd (majorities are scale-invariant), and re-verify that
every sampled point still wins its integer majority strictly before
anything is encoded.

Wire formats are strict: unsigned LEB128 varints, delta-coded kernel points,
LSB-first label bits, and side info protected by a trailing CRC-32 (which
detects every single-byte corruption).  Decoders reject trailing garbage.
"""

from __future__ import annotations

import math
import struct
import zlib
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .approx import ProbabilityVector, approximation_size_bound, sparsify_mixture
from .concepts import ConceptClass, LabeledSample, consistent_concepts, dual_class, vc_dimension
from .errors import DecodeError, IntegrityError, UnrealizableError
from .learner import LearningMap, build_hypothesis_set, lowest_consistent_concept
from .seeding import child_seeds

__all__ = [
    "MAGIC",
    "SPARSIFY_EPSILON",
    "CompressedSample",
    "SchemeReport",
    "VerificationResult",
    "encode_varint",
    "decode_varint",
    "encode_side_info",
    "decode_side_info",
    "compress",
    "reconstruct",
    "verify_round_trip",
    "scheme_size_bound",
    "serialize_compressed",
    "deserialize_compressed",
]

MAGIC = b"VCSC01"
SPARSIFY_EPSILON = 0.125


# -- varints -----------------------------------------------------------------


def encode_varint(value: int) -> bytes:
    """Unsigned LEB128."""
    if value < 0:
        raise ValueError("varints are unsigned")
    out = bytearray()
    while True:
        byte = value & 0x7F
        value >>= 7
        if value:
            out.append(byte | 0x80)
        else:
            out.append(byte)
            return bytes(out)


def decode_varint(data: bytes, offset: int = 0) -> tuple[int, int]:
    """Value and the offset just past it; strict about truncation/overlength."""
    result = 0
    shift = 0
    pos = offset
    while True:
        if pos >= len(data):
            raise DecodeError("varint truncated", offset)
        if pos - offset >= 10:
            raise DecodeError("varint longer than 10 bytes", offset)
        byte = data[pos]
        result |= (byte & 0x7F) << shift
        pos += 1
        if not byte & 0x80:
            return result, pos
        shift += 7


def _varint_length(value: int) -> int:
    return len(encode_varint(value))


# -- side information ---------------------------------------------------------


def encode_side_info(position_subsets: Sequence[Sequence[int]]) -> bytes:
    """Subset count, then each subset as a length-prefixed ascending position
    list, all varints; a little-endian CRC-32 of that payload is appended."""
    if not position_subsets:
        raise ValueError("side info needs at least one subset")
    payload = bytearray(encode_varint(len(position_subsets)))
    for subset in position_subsets:
        positions = list(subset)
        if any(b <= a for a, b in zip(positions, positions[1:])):
            raise ValueError("subset positions must be strictly ascending")
        payload += encode_varint(len(positions))
        for position in positions:
            payload += encode_varint(position)
    return bytes(payload) + struct.pack("<I", zlib.crc32(payload) & 0xFFFFFFFF)


def decode_side_info(data: bytes) -> tuple[tuple[int, ...], ...]:
    """Strict inverse of encode_side_info over the whole buffer."""
    if len(data) < 5:
        raise DecodeError("side info shorter than any valid encoding", 0)
    payload, checksum = data[:-4], data[-4:]
    if struct.pack("<I", zlib.crc32(payload) & 0xFFFFFFFF) != checksum:
        raise IntegrityError("side info failed its checksum")
    count, pos = decode_varint(payload, 0)
    if count < 1:
        raise DecodeError("subset count must be at least 1", 0)
    subsets = []
    for _ in range(count):
        length, pos = decode_varint(payload, pos)
        positions = []
        for _ in range(length):
            position, pos = decode_varint(payload, pos)
            if positions and position <= positions[-1]:
                raise DecodeError("subset positions must be strictly ascending", pos)
            positions.append(position)
        subsets.append(tuple(positions))
    if pos != len(payload):
        raise DecodeError("trailing bytes after the last subset", pos)
    return tuple(subsets)


# -- containers ---------------------------------------------------------------


@dataclass(frozen=True)
class CompressedSample:
    """A labeled kernel plus side info.  Valid by construction: the side info
    decodes, every position subset indexes the kernel, and the subsets
    jointly cover it (the kernel never carries unused points)."""

    domain_size: int
    kernel_points: tuple[int, ...]
    kernel_labels: tuple[int, ...]
    side_info: bytes

    def __post_init__(self):
        if self.domain_size < 1:
            raise ValueError("domain size must be positive")
        pts = self.kernel_points
        if any(b <= a for a, b in zip(pts, pts[1:])):
            raise ValueError("kernel points must be strictly ascending")
        if pts and not (0 <= pts[0] and pts[-1] < self.domain_size):
            raise ValueError("kernel points must lie inside the domain")
        if len(self.kernel_labels) != len(pts):
            raise ValueError("kernel labels must match kernel points")
        if any(l not in (0, 1) for l in self.kernel_labels):
            raise ValueError("kernel labels must be 0 or 1")
        subsets = decode_side_info(self.side_info)
        covered = set()
        for subset in subsets:
            if subset and subset[-1] >= len(pts):
                raise ValueError("subset position beyond the kernel")
            covered.update(subset)
        if covered != set(range(len(pts))):
            raise ValueError("side info must reference every kernel position")

    @cached_property
    def position_subsets(self) -> tuple[tuple[int, ...], ...]:
        return decode_side_info(self.side_info)

    @property
    def subset_count(self) -> int:
        return len(self.position_subsets)

    @property
    def kernel_size(self) -> int:
        return len(self.kernel_points)


@dataclass(frozen=True)
class SchemeReport:
    """Size accounting for one compression.  scheme_size = kernel points plus
    encoded side-information bits; details carries the run's diagnostics
    (dimensions, vote multiset, certified agreement, majority margin)."""

    kernel_size: int
    info_bits: int
    subset_count: int
    subset_budget: int
    scheme_size: int
    details: dict = field(default_factory=dict)


@dataclass(frozen=True)
class VerificationResult:
    passed: bool
    report: SchemeReport
    mismatches: tuple[int, ...]
    hypotheses_match: bool
    size_within_bound: bool


# -- the scheme ---------------------------------------------------------------


def _reduced_vote_multiset(multiset: Sequence[int]) -> tuple[tuple[int, int], ...]:
    """Collapse a drawn concept multiset to (concept, multiplicity) pairs in
    first-appearance order, divided by their gcd.  Majority votes only see
    count ratios, so this is lossless for reconstruction."""
    order: list[int] = []
    counts: dict[int, int] = {}
    for concept in multiset:
        if concept not in counts:
            order.append(concept)
            counts[concept] = 0
        counts[concept] += 1
    g = math.gcd(*counts.values())
    return tuple((concept, counts[concept] // g) for concept in order)


def compress(
    concept_class: ConceptClass,
    sample: LabeledSample,
    seed: int = 0,
    *,
    mode: str = "auto",
) -> tuple[CompressedSample, SchemeReport]:
    """Compress a realizable labeled sample to a kernel and side info.

    The kernel is the union of the provenance subsets behind the voting
    hypotheses; its size is governed by the class's VC dimension (subset
    budget) and the dual VC dimension (vote count), never by the sample
    length.  Every sampled point's majority is re-verified as a strict
    integer inequality before encoding.
    """
    if not consistent_concepts(concept_class, sample):
        raise UnrealizableError("sample is not realizable by the concept class")
    dimension = vc_dimension(concept_class)
    dual_dimension = vc_dimension(dual_class(concept_class))
    base_details = {
        "vc_dimension": dimension,
        "dual_vc_dimension": dual_dimension,
        "epsilon": SPARSIFY_EPSILON,
        "seed": seed,
    }
    if sample.is_empty:
        compressed = CompressedSample(concept_class.domain_size, (), (), encode_side_info([()]))
        report = SchemeReport(
            kernel_size=0,
            info_bits=len(compressed.side_info) * 8,
            subset_count=1,
            subset_budget=max(1, dimension),
            scheme_size=len(compressed.side_info) * 8,
            details={**base_details, "vote_concepts": ((0, 1),), "min_majority_margin": 1},
        )
        return compressed, report

    sparsify_seed, learner_seed = (int(s) for s in child_seeds(seed, 2))
    learning_map = LearningMap(concept_class, max(1, dimension))
    hypothesis_set, solution = build_hypothesis_set(
        learning_map, sample, mode=mode, seed=learner_seed
    )

    full_weights = np.zeros(len(concept_class.rows))
    for concept, weight in zip(hypothesis_set.hypotheses, solution.row_strategy.weights):
        full_weights[concept] = weight
    multiset, certificate = sparsify_mixture(
        concept_class, ProbabilityVector(full_weights), SPARSIFY_EPSILON, sparsify_seed
    )

    votes = _reduced_vote_multiset(multiset)
    total_votes = sum(mult for _, mult in votes)
    margin = None
    for point, label in sample.label_items:
        agreeing = sum(
            mult for concept, mult in votes if concept_class.value(concept, point) == label
        )
        point_margin = 2 * agreeing - total_votes
        if point_margin <= 0:
            raise IntegrityError(
                f"majority failed at point {point}: {agreeing} of {total_votes} votes"
            )
        margin = point_margin if margin is None else min(margin, point_margin)

    provenance_of = dict(zip(hypothesis_set.hypotheses, hypothesis_set.provenance))
    kernel_points = sorted({x for concept, _ in votes for x in provenance_of[concept]})
    position_of = {x: i for i, x in enumerate(kernel_points)}
    labels_by_point = dict(sample.label_items)
    kernel_labels = tuple(labels_by_point[x] for x in kernel_points)
    position_subsets = []
    for concept, mult in votes:
        subset = tuple(sorted(position_of[x] for x in provenance_of[concept]))
        position_subsets.extend([subset] * mult)

    compressed = CompressedSample(
        concept_class.domain_size,
        tuple(kernel_points),
        kernel_labels,
        encode_side_info(position_subsets),
    )
    info_bits = len(compressed.side_info) * 8
    report = SchemeReport(
        kernel_size=len(kernel_points),
        info_bits=info_bits,
        subset_count=total_votes,
        subset_budget=hypothesis_set.budget,
        scheme_size=len(kernel_points) + info_bits,
        details={
            **base_details,
            "vote_concepts": votes,
            "min_majority_margin": margin,
            "certified_agreement": solution.value_estimate,
            "sparsification_deviation": certificate.max_deviation,
            "draw_count": len(multiset),
        },
    )
    return compressed, report


def reconstruct(concept_class: ConceptClass, compressed: CompressedSample) -> np.ndarray:
    """Labels over the whole domain by majority vote of the subset ERMs.

    Exact on every point of the originally compressed sample; ties (possible
    only off-sample) resolve to 0.
    """
    if compressed.domain_size != concept_class.domain_size:
        raise IntegrityError(
            f"compressed domain size {compressed.domain_size} does not match "
            f"the class domain {concept_class.domain_size}"
        )
    subsets = compressed.position_subsets
    votes = np.zeros(concept_class.domain_size, dtype=np.int64)
    for subset in subsets:
        pairs = [
            (compressed.kernel_points[i], compressed.kernel_labels[i]) for i in subset
        ]
        try:
            concept = lowest_consistent_concept(concept_class, pairs)
        except UnrealizableError as exc:
            raise IntegrityError(
                "a side-info subset is inconsistent with every concept"
            ) from exc
        votes += concept_class.matrix[concept]
    return (2 * votes > len(subsets)).astype(np.uint8)


def scheme_size_bound(
    vc_dim: int,
    dual_vc_dim: int,
    subset_budget: int,
    *,
    epsilon: float = SPARSIFY_EPSILON,
    c_apx: float = 16.0,
) -> int:
    """Worst-case scheme size (kernel points + encoded side-info bits) as a
    function of the two dimensions and the subset budget alone — notably
    independent of the sample length."""
    max_votes = approximation_size_bound(dual_vc_dim, epsilon, c_apx)
    max_kernel = max_votes * subset_budget
    max_position = max(max_kernel - 1, 0)
    payload_bytes = (
        _varint_length(max_votes)
        + max_votes * (_varint_length(subset_budget) + subset_budget * _varint_length(max_position))
    )
    return max_kernel + 8 * (payload_bytes + 4)


def verify_round_trip(
    concept_class: ConceptClass, sample: LabeledSample, seed: int = 0
) -> VerificationResult:
    """Compress, reconstruct, and check everything that should hold: labels
    reproduce exactly on the sample, the decompressor's hypotheses are the
    very ones the compressor voted, and the size respects its bound."""
    compressed, report = compress(concept_class, sample, seed)
    decoded = reconstruct(concept_class, compressed)
    mismatches = tuple(
        point for point, label in sample.label_items if int(decoded[point]) != label
    )
    expected = []
    for concept, mult in report.details["vote_concepts"]:
        expected.extend([concept] * mult)
    rebuilt = []
    for subset in compressed.position_subsets:
        pairs = [(compressed.kernel_points[i], compressed.kernel_labels[i]) for i in subset]
        rebuilt.append(lowest_consistent_concept(concept_class, pairs))
    hypotheses_match = rebuilt == expected
    bound = scheme_size_bound(
        report.details["vc_dimension"],
        report.details["dual_vc_dimension"],
        report.subset_budget,
    )
    size_within_bound = report.scheme_size <= bound
    return VerificationResult(
        passed=not mismatches and hypotheses_match and size_within_bound,
        report=report,
        mismatches=mismatches,
        hypotheses_match=hypotheses_match,
        size_within_bound=size_within_bound,
    )


# -- container serialization ----------------------------------------------------


def serialize_compressed(compressed: CompressedSample) -> bytes:
    """Magic, domain size, kernel size, delta-coded kernel points, LSB-first
    label bits, then the side info (which is CRC-terminated and runs to the
    end of the buffer)."""
    out = bytearray(MAGIC)
    out += encode_varint(compressed.domain_size)
    out += encode_varint(len(compressed.kernel_points))
    previous = None
    for point in compressed.kernel_points:
        out += encode_varint(point if previous is None else point - previous)
        previous = point
    bits = 0
    for i, label in enumerate(compressed.kernel_labels):
        bits |= label << i
    out += bits.to_bytes((len(compressed.kernel_labels) + 7) // 8, "little")
    out += compressed.side_info
    return bytes(out)


def deserialize_compressed(data: bytes) -> CompressedSample:
    """Strict inverse of serialize_compressed; any deviation is a DecodeError
    (structure) or IntegrityError (checksum)."""
    if data[: len(MAGIC)] != MAGIC:
        raise DecodeError("bad magic", 0)
    pos = len(MAGIC)
    domain_size, pos = decode_varint(data, pos)
    kernel_size, pos = decode_varint(data, pos)
    points = []
    for index in range(kernel_size):
        delta, pos = decode_varint(data, pos)
        if index == 0:
            points.append(delta)
        else:
            if delta == 0:
                raise DecodeError("zero delta between kernel points", pos)
            points.append(points[-1] + delta)
    label_bytes = (kernel_size + 7) // 8
    if len(data) - pos < label_bytes:
        raise DecodeError("label bits truncated", pos)
    packed = int.from_bytes(data[pos : pos + label_bytes], "little")
    if packed >> kernel_size:
        raise DecodeError("nonzero padding in label bits", pos)
    labels = tuple((packed >> i) & 1 for i in range(kernel_size))
    pos += label_bytes
    side_info = data[pos:]
    try:
        return CompressedSample(domain_size, tuple(points), labels, side_info)
    except ValueError as exc:
        if isinstance(exc, (DecodeError, IntegrityError)):
            raise
        raise DecodeError(str(exc), pos) from exc
