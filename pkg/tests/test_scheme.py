"""Round-trip and codec tests for the compression scheme.

Varint and side-info cases carry hand-computed byte strings as fixed oracles;
the scheme tests lean on exact reconstruction (a strict equality, not a
tolerance) plus the documented size bound.
"""

import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vccompress import (
    ConceptClass,
    DecodeError,
    IntegrityError,
    LabeledSample,
    UnrealizableError,
    compress,
    deserialize_compressed,
    reconstruct,
    serialize_compressed,
    verify_round_trip,
)
from vccompress.scheme import (
    MAGIC,
    CompressedSample,
    decode_side_info,
    decode_varint,
    encode_side_info,
    encode_varint,
    scheme_size_bound,
)


def intervals_class(n):
    rows = {0}
    for a in range(n):
        for b in range(a, n):
            rows.add(((1 << (b - a + 1)) - 1) << (n - 1 - b))
    return ConceptClass.from_row_ints(n, sorted(rows))


# -- varints --


@pytest.mark.parametrize(
    "value,encoded",
    [
        (0, b"\x00"),
        (1, b"\x01"),
        (127, b"\x7f"),
        (128, b"\x80\x01"),
        (300, b"\xac\x02"),
        (16384, b"\x80\x80\x01"),
    ],
)
def test_varint_known_encodings(value, encoded):
    assert encode_varint(value) == encoded
    assert decode_varint(encoded) == (value, len(encoded))


def test_varint_rejects_truncation_and_overlength():
    with pytest.raises(DecodeError):
        decode_varint(b"\x80")
    with pytest.raises(DecodeError):
        decode_varint(b"\x80" * 11)
    with pytest.raises(ValueError):
        encode_varint(-1)


@given(st.integers(min_value=0, max_value=2**63))
def test_varint_round_trip(value):
    encoded = encode_varint(value)
    assert decode_varint(encoded) == (value, len(encoded))


# -- side info --


def test_side_info_round_trip_and_checksum():
    subsets = [(0, 2, 5), (), (1,), (0, 2, 5)]
    blob = encode_side_info(subsets)
    assert decode_side_info(blob) == ((0, 2, 5), (), (1,), (0, 2, 5))
    corrupted = bytearray(blob)
    corrupted[2] ^= 0x01
    with pytest.raises((DecodeError, IntegrityError)):
        decode_side_info(bytes(corrupted))


def test_side_info_rejects_descending_positions_and_trailing_bytes():
    with pytest.raises(ValueError):
        encode_side_info([(2, 1)])
    blob = encode_side_info([(0, 1)])
    import struct
    import zlib

    payload = blob[:-4] + b"\x00"
    with pytest.raises(DecodeError):
        decode_side_info(payload + struct.pack("<I", zlib.crc32(payload)))
    with pytest.raises((DecodeError, IntegrityError)):
        decode_side_info(b"\x00\x01")


@given(
    st.lists(
        st.lists(st.integers(min_value=0, max_value=200), max_size=6).map(
            lambda xs: tuple(sorted(set(xs)))
        ),
        min_size=1,
        max_size=8,
    )
)
def test_side_info_round_trip_any_subsets(subsets):
    assert decode_side_info(encode_side_info(subsets)) == tuple(subsets)


# -- compress / reconstruct --


def test_interval_sample_round_trips_exactly():
    c = intervals_class(10)
    target = c.rows.index(0b0011111000)
    sample = LabeledSample.from_concept(c, target, range(10))
    compressed, report = compress(c, sample, seed=4)
    decoded = reconstruct(c, compressed)
    for point, label in sample.label_items:
        assert int(decoded[point]) == label
    assert report.kernel_size == len(compressed.kernel_points)
    assert report.scheme_size == report.kernel_size + report.info_bits
    assert report.details["min_majority_margin"] >= 1


def test_kernel_is_a_labeled_subsample():
    c = intervals_class(10)
    sample = LabeledSample.from_concept(c, 17, range(10))
    compressed, _ = compress(c, sample, seed=1)
    labels = dict(sample.label_items)
    for point, label in zip(compressed.kernel_points, compressed.kernel_labels):
        assert labels[point] == label


def test_singleton_sample_compresses_to_one_vote():
    c = intervals_class(6)
    sample = LabeledSample.from_pairs([(3, 1)])
    compressed, report = compress(c, sample, seed=0)
    assert report.subset_count == 1
    assert compressed.kernel_size <= 1
    decoded = reconstruct(c, compressed)
    assert int(decoded[3]) == 1


def test_empty_sample_round_trips():
    c = intervals_class(5)
    compressed, report = compress(c, LabeledSample.from_pairs([]), seed=0)
    assert compressed.kernel_points == ()
    assert report.kernel_size == 0
    reconstruct(c, compressed)


def test_compression_is_deterministic_per_seed():
    c = intervals_class(9)
    sample = LabeledSample.from_concept(c, 11, range(9))
    first = compress(c, sample, seed=8)
    second = compress(c, sample, seed=8)
    assert first[0] == second[0]
    assert serialize_compressed(first[0]) == serialize_compressed(second[0])


def test_duplicated_points_do_not_change_the_kernel():
    c = intervals_class(8)
    base = LabeledSample.from_concept(c, 9, range(8))
    fat = LabeledSample.from_concept(c, 9, list(range(8)) * 50)
    a, _ = compress(c, base, seed=2)
    b, _ = compress(c, fat, seed=2)
    assert a == b


def test_unrealizable_sample_is_rejected():
    c = intervals_class(6)
    # an interval cannot be 1 at both ends and 0 in the middle
    sample = LabeledSample.from_pairs([(0, 1), (3, 0), (5, 1)])
    with pytest.raises(UnrealizableError):
        compress(c, sample)


def test_scheme_size_respects_its_bound_and_ignores_sample_length():
    c = intervals_class(10)
    target = c.rows.index(0b0111110000)
    reports = []
    for count in (10, 200, 2000):
        rng = np.random.default_rng(count)
        points = rng.integers(0, 10, size=count)
        sample = LabeledSample.from_concept(c, target, points)
        _, report = compress(c, sample, seed=6)
        reports.append(report)
        bound = scheme_size_bound(
            report.details["vc_dimension"],
            report.details["dual_vc_dimension"],
            report.subset_budget,
        )
        assert report.scheme_size <= bound
    assert len({r.subset_budget for r in reports}) == 1


def test_verify_round_trip_passes_and_checks_hypotheses():
    c = intervals_class(10)
    for target in (0, 5, 25, 40):
        sample = LabeledSample.from_concept(c, target % len(c.rows), range(10))
        result = verify_round_trip(c, sample, seed=target)
        assert result.passed
        assert result.hypotheses_match
        assert result.size_within_bound
        assert result.mismatches == ()


def test_random_classes_round_trip():
    rng = np.random.default_rng(77)
    for trial in range(8):
        matrix = rng.integers(0, 2, size=(30, 9))
        c = ConceptClass.from_matrix(matrix, dedupe=True)
        concept = int(rng.integers(0, len(c.rows)))
        points = rng.integers(0, 9, size=int(rng.integers(1, 15)))
        sample = LabeledSample.from_concept(c, concept, points)
        result = verify_round_trip(c, sample, seed=trial)
        assert result.passed, result


def test_reconstruct_rejects_mismatched_domains():
    c = intervals_class(6)
    compressed, _ = compress(c, LabeledSample.from_concept(c, 3, range(6)), seed=0)
    with pytest.raises(IntegrityError):
        reconstruct(intervals_class(7), compressed)


def test_reconstruct_rejects_inconsistent_subsets():
    c = ConceptClass.from_rows([[0, 1], [1, 0]])
    bad = CompressedSample(2, (0, 1), (1, 1), encode_side_info([(0, 1)]))
    with pytest.raises(IntegrityError):
        reconstruct(c, bad)


# -- container serialization --


def test_serialized_container_round_trips():
    c = intervals_class(10)
    sample = LabeledSample.from_concept(c, 33, range(10))
    compressed, _ = compress(c, sample, seed=5)
    blob = serialize_compressed(compressed)
    assert blob.startswith(MAGIC)
    assert deserialize_compressed(blob) == compressed


def test_deserialize_rejects_bad_magic_and_trailing_bytes():
    c = intervals_class(6)
    compressed, _ = compress(c, LabeledSample.from_concept(c, 2, range(6)), seed=0)
    blob = serialize_compressed(compressed)
    with pytest.raises(DecodeError):
        deserialize_compressed(b"XX" + blob[2:])
    with pytest.raises((DecodeError, IntegrityError)):
        deserialize_compressed(blob + b"\x00")


@settings(max_examples=60)
@given(st.integers(min_value=0, max_value=2**32), st.data())
def test_deserialize_survives_single_byte_corruption(seed, data):
    c = intervals_class(8)
    sample = LabeledSample.from_concept(c, seed % len(c.rows), range(8))
    compressed, _ = compress(c, sample, seed=0)
    blob = bytearray(serialize_compressed(compressed))
    index = data.draw(st.integers(min_value=0, max_value=len(blob) - 1))
    flip = data.draw(st.integers(min_value=1, max_value=255))
    blob[index] ^= flip
    try:
        decoded = deserialize_compressed(bytes(blob))
    except (DecodeError, IntegrityError, ValueError):
        return
    # a mutation may still parse (e.g. inside kernel points), but then it
    # must differ from the original object — silent aliasing is the one
    # unacceptable outcome
    assert decoded != compressed


def test_fresh_process_reconstruction(tmp_path):
    c = intervals_class(10)
    target = c.rows.index(0b0001111110)
    sample = LabeledSample.from_concept(c, target, range(10))
    compressed, _ = compress(c, sample, seed=13)
    blob_path = tmp_path / "compressed.bin"
    blob_path.write_bytes(serialize_compressed(compressed))
    script = (
        "import sys\n"
        "from vccompress import deserialize_compressed, reconstruct, ConceptClass\n"
        "rows = {0}\n"
        "n = 10\n"
        "for a in range(n):\n"
        "    for b in range(a, n):\n"
        "        rows.add(((1 << (b - a + 1)) - 1) << (n - 1 - b))\n"
        "c = ConceptClass.from_row_ints(n, sorted(rows))\n"
        "blob = open(sys.argv[1], 'rb').read()\n"
        "labels = reconstruct(c, deserialize_compressed(blob))\n"
        "print(''.join(str(int(x)) for x in labels))\n"
    )
    out = subprocess.run(
        [sys.executable, "-c", script, str(blob_path)],
        capture_output=True,
        text=True,
        check=True,
    )
    assert out.stdout.strip() == format(c.rows[target], "010b")
