"""Multinomial counts and lexicographic ranking of multiset permutations."""
from __future__ import annotations

from dataclasses import dataclass
from math import factorial

from .errors import RankOutOfRange, MalformedProgram


def multinomial_count(counts) -> int:
    counts = [int(c) for c in counts]
    if any(c < 0 for c in counts):
        raise ValueError("counts must be nonnegative")
    out = factorial(sum(counts))
    for c in counts:
        out //= factorial(c)
    return out


class _Fenwick:
    """Prefix sums over symbol counts."""

    def __init__(self, counts):
        self.n = len(counts)
        self.tree = [0] * (self.n + 1)
        for i, c in enumerate(counts):
            self.add(i, c)
        self._top = 1 << max(self.n.bit_length() - 1, 0)

    def add(self, i: int, delta: int):
        i += 1
        while i <= self.n:
            self.tree[i] += delta
            i += i & -i

    def prefix(self, i: int) -> int:
        """Sum of counts of symbols ``< i``."""
        s = 0
        while i > 0:
            s += self.tree[i]
            i -= i & -i
        return s

    def find(self, v: int) -> int:
        """Largest symbol x with prefix(x) <= v, i.e. the symbol covering v."""
        pos = 0
        step = self._top
        while step:
            nxt = pos + step
            if nxt <= self.n and self.tree[nxt] <= v:
                pos = nxt
                v -= self.tree[nxt]
            step >>= 1
        return pos


def rank_sequence(seq, counts) -> int:
    """Lexicographic rank of ``seq`` (symbols ``0..L-1``) among all
    arrangements with the given symbol counts."""
    rem = [int(c) for c in counts]
    fw = _Fenwick(rem)
    total = sum(rem)
    if len(seq) != total:
        raise ValueError("sequence length does not match counts")
    m = multinomial_count(rem)
    rank = 0
    for x in seq:
        x = int(x)
        if rem[x] <= 0:
            raise ValueError("sequence is inconsistent with counts")
        below = fw.prefix(x)
        if below:
            rank += m * below // total
        m = m * rem[x] // total
        rem[x] -= 1
        fw.add(x, -1)
        total -= 1
    return rank


def unrank_sequence(rank: int, counts) -> list[int]:
    rem = [int(c) for c in counts]
    m = multinomial_count(rem)
    if rank < 0 or rank >= m:
        raise RankOutOfRange(f"rank {rank} outside [0, {m})")
    fw = _Fenwick(rem)
    total = sum(rem)
    out = []
    while total:
        v = rank * total // m
        x = fw.find(v)
        below = fw.prefix(x)
        rank -= m * below // total
        m = m * rem[x] // total
        rem[x] -= 1
        fw.add(x, -1)
        total -= 1
        out.append(x)
    return out


@dataclass(frozen=True)
class FrequencyTable:
    """Sparse pattern counts: strictly increasing pattern ids, counts >= 1."""

    k: int
    ids: tuple[int, ...]
    counts: tuple[int, ...]

    def __post_init__(self):
        if len(self.ids) != len(self.counts):
            raise MalformedProgram("ids and counts differ in length")
        if any(c < 1 for c in self.counts):
            raise MalformedProgram("pattern counts must be >= 1")
        if any(a >= b for a, b in zip(self.ids, self.ids[1:])):
            raise MalformedProgram("pattern ids must be strictly increasing")
        if self.ids and self.ids[0] < 1:
            raise MalformedProgram("pattern ids start at 1")

    @property
    def total(self) -> int:
        return sum(self.counts)

    def multinomial(self) -> int:
        return multinomial_count(self.counts)


def rank_pattern_seq(seq, table: FrequencyTable) -> int:
    """Rank a pattern-id sequence against its frequency table."""
    pos = {pid: i for i, pid in enumerate(table.ids)}
    return rank_sequence([pos[int(p)] for p in seq], table.counts)


def unrank_pattern_seq(rank: int, table: FrequencyTable) -> list[int]:
    return [table.ids[i] for i in unrank_sequence(rank, table.counts)]
