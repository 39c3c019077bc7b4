"""Compress a labeled sample down to a few kernel points, then rebuild it.

The compressor never stores the sample itself.  It keeps a handful of kernel
points with their labels plus a short side-info string saying which kernel
subsets to feed back into the learner; majority vote over the rebuilt
hypotheses reproduces every sample label exactly.
"""

from vccompress import (
    LabeledSample,
    compress,
    deserialize_compressed,
    intervals,
    reconstruct,
    serialize_compressed,
    verify_round_trip,
)

cls = intervals(30)
print(f"concept class: {len(cls.rows)} interval concepts on {cls.domain_size} points")

# A realizable sample: points labeled by the interval [8, 19], with repeats.
target = [(5, 0), (8, 1), (12, 1), (12, 1), (19, 1), (20, 0), (27, 0), (8, 1)]
sample = LabeledSample.from_pairs(target)
print(f"sample: {sample.size} labeled points ({len(sample.distinct_points)} distinct)")

compressed, report = compress(cls, sample, seed=7)
print()
print(f"kernel points : {compressed.kernel_points}")
print(f"kernel labels : {compressed.kernel_labels}")
print(f"vote subsets  : {compressed.position_subsets}")
print(f"kernel size {report.kernel_size}, side info {report.info_bits} bits, "
      f"scheme size {report.scheme_size}")

labels = reconstruct(cls, compressed)
mismatches = [(x, y) for x, y in sample.label_items if labels[x] != y]
print(f"reconstruction mismatches on the sample: {len(mismatches)}")
assert not mismatches

# The container format survives a byte-level round trip.
blob = serialize_compressed(compressed)
assert deserialize_compressed(blob) == compressed
print(f"serialized container: {len(blob)} bytes")

# One call that does all of the above and checks the size bound too.
result = verify_round_trip(cls, sample, seed=7)
print(f"verify_round_trip passed: {result.passed}")
