"""Exact sparse Gaussian elimination over Q.

Vectors are dicts ``{column: Fraction}``.  The pivot of a row is its first
nonzero column in the column order (the smallest ``key(column)``), so the
pivot set of an :class:`Echelon` is the set of leading columns of the row
space, independent of insertion order.
"""

from __future__ import annotations

import heapq
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Mapping


def _identity(c):
    return c


class Echelon:
    """Incrementally built echelon basis of a row space.

    With ``track=True`` every stored row remembers how it was obtained from
    the inserted rows (by their tags), which lets :meth:`solve` return an
    explicit linear combination.
    """

    def __init__(self, key: Callable[[Hashable], object] | None = None, track: bool = False):
        self.key = key or _identity
        self.track = track
        self.rows: dict[Hashable, dict] = {}
        self.combos: dict[Hashable, dict] = {}

    @property
    def rank(self) -> int:
        return len(self.rows)

    def pivot_columns(self) -> list:
        return sorted(self.rows, key=self.key)

    def reduce(self, vec: Mapping, combo: Mapping | None = None) -> tuple[dict, dict]:
        """Eliminate every pivot column from ``vec``.

        Returns ``(remainder, combo)`` where ``vec = remainder + sum combo[t] * row_t``
        when tracking (combo is empty otherwise).
        """
        vec = {c: Fraction(v) for c, v in vec.items() if v}
        used: dict = dict(combo or {})
        heap = [(self.key(c), c) for c in vec if c in self.rows]
        heapq.heapify(heap)
        while heap:
            _, col = heapq.heappop(heap)
            coef = vec.get(col)
            if not coef:
                continue
            row = self.rows[col]
            for c, v in row.items():
                new = vec.get(c, 0) - coef * v
                if new:
                    if c not in vec and c in self.rows:
                        heapq.heappush(heap, (self.key(c), c))
                    vec[c] = new
                else:
                    vec.pop(c, None)
            if self.track:
                for t, v in self.combos[col].items():
                    new = used.get(t, 0) + coef * v
                    if new:
                        used[t] = new
                    else:
                        used.pop(t, None)
        return vec, used

    def insert(self, vec: Mapping, tag: Hashable = None) -> bool:
        """Add a row; returns True when it was independent of the stored rows."""
        rem, combo = self.reduce(vec)
        if not rem:
            return False
        lead = min(rem, key=self.key)
        inv = 1 / rem[lead]
        self.rows[lead] = {c: v * inv for c, v in rem.items()}
        if self.track:
            # rem = vec - sum(combo), so row = inv * (tag - combo)
            new_combo = {t: -v * inv for t, v in combo.items()}
            new_combo[tag] = new_combo.get(tag, 0) + inv
            self.combos[lead] = {t: v for t, v in new_combo.items() if v}
        return True

    def solve(self, vec: Mapping) -> dict | None:
        """Coefficients ``{tag: c}`` with ``vec = sum c * row_tag``, or None."""
        rem, combo = self.reduce(vec)
        if rem:
            return None
        return combo


def rank(rows: Iterable[Mapping], key: Callable | None = None) -> int:
    ech = Echelon(key=key)
    for row in rows:
        ech.insert(row)
    return ech.rank
