"""Exact counts of self-nested and unordered trees with bounded height and outdegree.

Counts exclude the single-vertex tree.  Python ints are arbitrary precision,
so no count ever overflows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

__all__ = [
    "count_self_nested_eq",
    "count_unordered_le",
    "FrequencyCell",
    "self_nested_frequency",
    "frequency_table",
    "log_count_self_nested",
    "asymptotic_equivalent",
]


def count_self_nested_eq(H: int, d: int) -> int:
    """Self-nested trees of height exactly H and outdegree at most d."""
    if H < 1 or d < 1:
        raise ValueError(f"need H >= 1 and d >= 1, got H={H}, d={d}")
    return math.prod(math.comb(d + H - i, H - i + 1) for i in range(1, H + 1))


def count_unordered_le(H: int, d: int) -> int:
    """Unordered trees of height 1..H and outdegree at most d.

    u_0 = 1, u_h = C(u_{h-1} + d, d); the count is u_H - 1.
    """
    if H < 1 or d < 1:
        raise ValueError(f"need H >= 1 and d >= 1, got H={H}, d={d}")
    u = 1
    for _ in range(H):
        u = math.comb(u + d, d)
    return u - 1


@dataclass(frozen=True)
class FrequencyCell:
    H: int
    d: int
    numerator: int
    denominator: int

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    @property
    def value(self) -> float:
        # true division of ints is correctly rounded even past float range
        return self.numerator / self.denominator


def self_nested_frequency(H: int, d: int) -> FrequencyCell:
    num = sum(count_self_nested_eq(h, d) for h in range(1, H + 1))
    return FrequencyCell(H, d, num, count_unordered_le(H, d))


def frequency_table(max_h: int, max_d: int, min_h: int = 2, min_d: int = 2) -> list[FrequencyCell]:
    return [
        self_nested_frequency(H, d)
        for H in range(min_h, max_h + 1)
        for d in range(min_d, max_d + 1)
    ]


def log_count_self_nested(H: int, d: int) -> float:
    """log of ``count_self_nested_eq(H, d)`` through log-gamma."""
    # inner sum over k = 2..d of log(j + k) telescopes to a lgamma difference
    return -H * math.lgamma(d) + sum(
        math.lgamma(j + d + 1) - math.lgamma(j + 2) for j in range(H)
    )


def asymptotic_equivalent(H: int, d: int) -> float:
    """Equivalent of the log-count when H and d grow together."""
    return (
        (d + H) ** 2 / 2 * math.log(d + H)
        - H**2 / 2 * math.log(H)
        - d**2 / 2 * math.log(d)
        - H * d * math.log(d)
    )
