"""Compression implies learning: train on enough random points and the
reconstructed hypothesis generalizes.

The experiment first pilots the compressor to measure its worst-case output
size k, computes how many samples suffice for accuracy eps with confidence
delta, then runs fresh trials end to end and measures the exact error of
every reconstruction under the sampling distribution.
"""

from vccompress import generalization_experiment, intervals, required_sample_size

for k in (2, 5, 10):
    need = required_sample_size(k, epsilon=1 / 3, delta=1 / 3)
    print(f"compression size {k:>2} -> {need} samples suffice at eps = delta = 1/3")

print()
cls = intervals(10)
report = generalization_experiment(cls, epsilon=1 / 3, delta=1 / 3, trials=200, seed=0)

print(f"class: intervals(10), {len(cls.rows)} concepts")
print(f"pilot-measured compression size: {report.measured_compression_size} "
      f"(kernel alone: {report.kernel_only_size})")
print(f"sample size per trial: {report.required_size}")
print(f"trials: {report.trials}, failures (error > 1/3): {report.failures} "
      f"({report.failure_fraction:.3f} of trials; delta allows up to 1/3)")
print(f"errors: mean {report.mean_error:.5f}, max {report.max_error:.5f}")
assert report.within_tolerance
print("within tolerance: True")
