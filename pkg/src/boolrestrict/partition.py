"""Split nonnegative weights into L buckets, each holding at least total/(2L)."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import PreconditionError

_SLACK = 1e-12


@dataclass(frozen=True)
class WeightedPartition:
    buckets: tuple[tuple[int, ...], ...]
    steps: int = 0

    def sums(self, weights: Sequence[float]) -> list[float]:
        return [math.fsum(weights[i] for i in b) for b in self.buckets]

    def is_partition_of(self, n_items: int) -> bool:
        seen = [i for b in self.buckets for i in b]
        return len(seen) == n_items and set(seen) == set(range(n_items))


def deficit(weights: Sequence[float], buckets, L: int) -> float:
    """Total shortfall of the buckets below total/(2L)."""
    target = math.fsum(weights) / (2 * L)
    return math.fsum(max(target - math.fsum(weights[i] for i in b), 0.0) for b in buckets)


def check_precondition(weights: Sequence[float], L: int) -> bool:
    if L < 1 or L > len(weights) or any(w < 0 for w in weights):
        return False
    total = math.fsum(weights)
    bar = total / (2 * L)
    return all(w <= bar + _SLACK * max(total, 1.0) for w in weights)


def balanced_partition(
    weights: Sequence[float], L: int, trace=None, initial=None
) -> WeightedPartition:
    """Refinement algorithm: repeatedly move an item from a rich bucket to a poor one.

    Starts from ``initial`` (L lists of item indices) if given, otherwise
    from a round-robin deal by descending weight.  The round-robin start
    already meets the target under the precondition, so refinement only
    does work from other starting partitions.  While some bucket j
    sits below total/(2L), the largest bucket (which holds at least total/L
    by averaging) gives up its smallest nonzero item to j.  Zero weights play
    no role and are dealt out at the end.  ``trace``, if given, is called
    with the bucket lists after every move.
    """
    weights = [float(w) for w in weights]
    if not check_precondition(weights, L):
        raise PreconditionError(
            "need 1 <= L <= len(weights), nonnegative weights, each at most total/(2L)"
        )
    total = math.fsum(weights)
    target = total / (2 * L)
    nonzero = sorted((i for i, w in enumerate(weights) if w > 0), key=lambda i: (-weights[i], i))
    zeros = [i for i, w in enumerate(weights) if w == 0]

    buckets: list[list[int]] = [[] for _ in range(L)]
    if initial is None:
        for pos, i in enumerate(nonzero):
            buckets[pos % L].append(i)
    else:
        if len(initial) != L:
            raise PreconditionError("initial partition must have L buckets")
        placed = sorted(i for b in initial for i in b)
        if placed != list(range(len(weights))):
            raise PreconditionError("initial partition must cover every item exactly once")
        keep = set(nonzero)
        buckets = [[i for i in b if i in keep] for b in initial]
    sums = [math.fsum(weights[i] for i in b) for b in buckets]

    if nonzero:
        w_min = min(weights[i] for i in nonzero)
        limit = len(weights) * L * (max(weights) / w_min) + 1  # float, may be inf
    else:
        limit = 0
    steps = 0
    while True:
        poor = [j for j in range(L) if sums[j] < target]
        if not poor:
            break
        if steps >= limit:
            raise RuntimeError("refinement did not terminate within its step bound")
        j = poor[0]
        k = max(range(L), key=lambda b: (sums[b], -b))
        if sums[k] < 2 * target * (1 - _SLACK):
            raise RuntimeError("no donor bucket reaches total/L")
        item = min(buckets[k], key=lambda i: (weights[i], i))
        buckets[k].remove(item)
        buckets[j].append(item)
        sums[k] = math.fsum(weights[i] for i in buckets[k])
        sums[j] = math.fsum(weights[i] for i in buckets[j])
        steps += 1
        if trace is not None:
            trace([list(b) for b in buckets])

    for pos, i in enumerate(zeros):
        buckets[pos % L].append(i)
    return WeightedPartition(tuple(tuple(sorted(b)) for b in buckets), steps)
