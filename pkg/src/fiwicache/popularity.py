"""Zipf file popularity and cache hit ratios."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .domain import DomainError

__all__ = ['PopularityModel', 'zipf_pmf', 'hit_ratio', 'subset_hit_ratio']


@dataclass(frozen=True, eq=False)
class PopularityModel:
    """Request probabilities of files ranked by popularity.

    ``probabilities[i]`` belongs to rank ``i + 1``; ``prefix_hit[j]`` is the
    hit ratio of caching the ``j`` most popular files, so it has ``J + 1``
    entries starting at 0.
    """

    probabilities: np.ndarray
    prefix_hit: np.ndarray

    @property
    def file_count(self):
        return len(self.probabilities)


def zipf_pmf(file_count, delta):
    """Build the Zipf popularity model ``p_j ~ j**-delta`` over ``file_count`` files.

    >>> zipf_pmf(2, 1.0).probabilities.tolist()
    [0.6666666666666666, 0.3333333333333333]
    """
    if int(file_count) != file_count or file_count < 1:
        raise DomainError(f"file_count must be a positive integer, got {file_count!r}")
    if not (delta >= 0 and np.isfinite(delta)):
        raise DomainError(f"zipf delta must be finite and >= 0, got {delta!r}")
    ranks = np.arange(1, int(file_count) + 1, dtype=float)
    weights = ranks ** -float(delta)
    # sum smallest terms first for accuracy
    probs = weights / np.sum(weights[::-1])
    prefix = np.empty(len(probs) + 1)
    prefix[0] = 0.0
    np.cumsum(probs, out=prefix[1:])
    # caching the whole catalog must miss nothing, not ~1e-16
    prefix[-1] = 1.0
    probs.setflags(write=False)
    prefix.setflags(write=False)
    return PopularityModel(probs, prefix)


def hit_ratio(model, j):
    """Hit ratio of caching the ``j`` most popular files."""
    if int(j) != j or j < 0 or j > model.file_count:
        raise IndexError(f"prefix length {j!r} outside 0..{model.file_count}")
    return float(model.prefix_hit[int(j)])


def subset_hit_ratio(model, cached_ranks):
    """Hit ratio of an arbitrary set of cached files (1-based ranks)."""
    ranks = np.asarray(sorted(set(int(r) for r in cached_ranks)), dtype=int)
    if ranks.size == 0:
        return 0.0
    if ranks[0] < 1 or ranks[-1] > model.file_count:
        raise IndexError("cached rank outside the catalog")
    return float(np.sum(model.probabilities[ranks - 1]))
