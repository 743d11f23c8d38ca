"""Complete-randomization assignment spaces: enumeration, unranking and sampling."""
import logging
from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Iterator, List, Optional, Union

import numpy as np

from design.models import Assignment
from utils.errors import DataError, IndexOutOfRange, Overflow


logger = logging.getLogger(__name__)

# Ranks must fit a signed 64-bit integer for numpy sampling and indexing
MAX_RANKED_TOTAL = 2 ** 63 - 1

SeedLike = Union[int, np.random.SeedSequence]


@dataclass(frozen=True)
class AssignmentSpace:
    """All ways of treating n_a of n units."""
    n: int
    n_a: int

    def __post_init__(self):
        if self.n < 4:
            raise DataError(f"population must have at least 4 units, got {self.n}")
        if self.n_a < 2 or self.n - self.n_a < 2:
            raise DataError(f"both arms need at least 2 units; got n_A={self.n_a}, n_B={self.n - self.n_a}")

    @property
    def total(self) -> int:
        return comb(self.n, self.n_a)

    @property
    def n_b(self) -> int:
        return self.n - self.n_a


def _successor(subset: List[int], n: int) -> bool:
    """Advance subset to the next in lexicographic order; False when exhausted."""
    k = len(subset)
    i = k - 1
    while i >= 0 and subset[i] == n - k + i:
        i -= 1
    if i < 0:
        return False
    subset[i] += 1
    for j in range(i + 1, k):
        subset[j] = subset[j - 1] + 1
    return True


def enumerate_assignments(space: AssignmentSpace, start: int = 0,
                          stop: Optional[int] = None) -> Iterator[Assignment]:
    """Yield assignments with ranks in [start, stop) in lexicographic order."""
    if space.total > MAX_RANKED_TOTAL:
        raise Overflow(f"C({space.n}, {space.n_a}) = {space.total} is too large to enumerate")
    stop = space.total if stop is None else min(stop, space.total)
    if start >= stop:
        return
    if start == 0 and stop == space.total:
        for subset in combinations(range(space.n), space.n_a):
            yield Assignment(space.n, subset)
        return

    subset = list(unrank(space, start).treated)
    for _ in range(stop - start):
        yield Assignment(space.n, tuple(subset))
        if not _successor(subset, space.n):
            return


def unrank(space: AssignmentSpace, index: int) -> Assignment:
    """The index-th assignment in lexicographic order."""
    index = int(index)
    if not 0 <= index < space.total:
        raise IndexOutOfRange(f"rank {index} outside [0, {space.total})")

    subset = []
    remaining = space.n_a
    for unit in range(space.n):
        if remaining == 0:
            break
        # Subsets whose next smallest element is this unit
        block = comb(space.n - unit - 1, remaining - 1)
        if index < block:
            subset.append(unit)
            remaining -= 1
        else:
            index -= block
    return Assignment(space.n, tuple(subset))


def sample_ranks(space: AssignmentSpace, seed: SeedLike, count: int) -> np.ndarray:
    """Uniform ranks drawn with replacement."""
    if space.total > MAX_RANKED_TOTAL:
        raise Overflow(f"C({space.n}, {space.n_a}) exceeds the rankable range; sample subsets directly")
    rng = np.random.default_rng(seed)
    return rng.integers(0, space.total, size=count, dtype=np.int64)


def sample(space: AssignmentSpace, seed: SeedLike, count: int) -> List[Assignment]:
    """Independent uniform draws from the space, reproducible from seed."""
    if count < 1:
        raise DataError(f"count must be at least 1, got {count}")
    if space.total <= MAX_RANKED_TOTAL:
        return [unrank(space, r) for r in sample_ranks(space, seed, count)]

    rng = np.random.default_rng(seed)
    return [
        Assignment(space.n, tuple(rng.choice(space.n, size=space.n_a, replace=False)))
        for _ in range(count)
    ]
