"""Mergeable speed statistics."""

import math
from collections.abc import Iterable
from dataclasses import dataclass


@dataclass(slots=True)
class SpeedAccumulator:
    """Sum, sum of squares, min, max and count of speed samples, in knots.

    Accumulators over disjoint sample sets merge into the accumulator of their union.
    They also count how many cell runs were flushed into them.
    """

    sum: float = 0.0
    sum_sq: float = 0.0
    min: float = math.inf
    max: float = -math.inf
    count: int = 0
    runs: int = 0

    @classmethod
    def from_samples(cls, samples: Iterable[float]) -> "SpeedAccumulator":
        """Create an accumulator holding one run of samples."""
        acc = cls()
        acc.add(samples)
        return acc

    def add(self, samples: Iterable[float]) -> None:
        """Add one run of samples in place."""
        added = 0
        for sample in samples:
            self.sum += sample
            self.sum_sq += sample * sample
            if sample < self.min:
                self.min = sample
            if sample > self.max:
                self.max = sample
            added += 1

        if added:
            self.count += added
            self.runs += 1

    def merge(self, other: "SpeedAccumulator") -> None:
        """Merge another accumulator into this one in place."""
        self.sum += other.sum
        self.sum_sq += other.sum_sq
        self.min = min(self.min, other.min)
        self.max = max(self.max, other.max)
        self.count += other.count
        self.runs += other.runs

    def copy(self) -> "SpeedAccumulator":
        """Return an independent copy."""
        return SpeedAccumulator(
            self.sum, self.sum_sq, self.min, self.max, self.count, self.runs
        )

    @property
    def mean(self) -> float:
        """The mean speed, NaN if empty."""
        return self.sum / self.count if self.count else math.nan

    @property
    def variance(self) -> float:
        """The population variance, NaN if empty."""
        if not self.count:
            return math.nan

        mean = self.sum / self.count
        return max(0.0, self.sum_sq / self.count - mean * mean)

    @property
    def std(self) -> float:
        """The population standard deviation, NaN if empty."""
        return math.sqrt(self.variance)


def accumulate(acc: SpeedAccumulator, samples: Iterable[float]) -> SpeedAccumulator:
    """Return a new accumulator extending `acc` with one run of samples."""
    result = acc.copy()
    result.add(samples)
    return result


def merge_accumulators(a: SpeedAccumulator, b: SpeedAccumulator) -> SpeedAccumulator:
    """Return the field-wise merge of two accumulators."""
    result = a.copy()
    result.merge(b)
    return result
