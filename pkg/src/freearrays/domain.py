"""Finite integer domains stored as unions of closed intervals."""
from __future__ import annotations

import math
from typing import Iterable, Iterator

from . import kernels
from .errors import InvalidDomainError


class IntDomain:
    """Immutable finite set of integers.

    Stored as sorted, disjoint, non-adjacent closed intervals. An empty
    interval tuple is the failed domain.
    """

    __slots__ = ("intervals",)

    def __init__(self, intervals: Iterable[tuple[int, int]] = ()):
        object.__setattr__(self, "intervals", kernels.normalize(intervals))

    def __setattr__(self, name, value):
        raise AttributeError("IntDomain is immutable")

    @classmethod
    def _raw(cls, intervals: tuple) -> IntDomain:
        dom = object.__new__(cls)
        object.__setattr__(dom, "intervals", intervals)
        return dom

    @classmethod
    def range(cls, lo: int, hi: int) -> IntDomain:
        if lo > hi:
            raise InvalidDomainError(f"empty range [{lo}, {hi}]")
        return cls._raw(((lo, hi),))

    @classmethod
    def singleton(cls, value: int) -> IntDomain:
        return cls._raw(((value, value),))

    @classmethod
    def empty(cls) -> IntDomain:
        return cls._raw(())

    def is_empty(self) -> bool:
        return not self.intervals

    def is_singleton(self) -> bool:
        return len(self.intervals) == 1 and self.intervals[0][0] == self.intervals[0][1]

    def min(self) -> int:
        if not self.intervals:
            raise InvalidDomainError("min() of empty domain")
        return self.intervals[0][0]

    def max(self) -> int:
        if not self.intervals:
            raise InvalidDomainError("max() of empty domain")
        return self.intervals[-1][1]

    def value(self) -> int:
        if not self.is_singleton():
            raise InvalidDomainError(f"domain {self} is not a singleton")
        return self.intervals[0][0]

    def size(self) -> int:
        return kernels.size(self.intervals)

    def __contains__(self, v: int) -> bool:
        return kernels.contains(self.intervals, v)

    def __iter__(self) -> Iterator[int]:
        for lo, hi in self.intervals:
            yield from range(lo, hi + 1)

    def __len__(self) -> int:
        return self.size()

    def intersect(self, other: IntDomain) -> IntDomain:
        return IntDomain._raw(kernels.intersect(self.intervals, other.intervals))

    def clamp(self, lo: float, hi: float) -> IntDomain:
        """Restrict to ``[lo, hi]``; bounds may be fractional or infinite."""
        if not self.intervals:
            return self
        cur_lo, cur_hi = self.intervals[0][0], self.intervals[-1][1]
        lo = cur_lo if lo == -math.inf else max(cur_lo, math.ceil(lo))
        hi = cur_hi if hi == math.inf else min(cur_hi, math.floor(hi))
        if lo == cur_lo and hi == cur_hi:
            return self
        if lo > hi:
            return IntDomain.empty()
        return IntDomain._raw(kernels.clamp(self.intervals, lo, hi))

    def remove(self, v: int) -> IntDomain:
        if v not in self:
            return self
        return IntDomain._raw(kernels.remove_value(self.intervals, v))

    def __eq__(self, other) -> bool:
        return isinstance(other, IntDomain) and self.intervals == other.intervals

    def __hash__(self) -> int:
        return hash(self.intervals)

    def __repr__(self) -> str:
        if not self.intervals:
            return "{}"
        return " u ".join(f"{{{lo}}}" if lo == hi else f"[{lo},{hi}]" for lo, hi in self.intervals)
