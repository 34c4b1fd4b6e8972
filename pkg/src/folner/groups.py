"""Exact arithmetic and admissible indexing for Z^d and UT(d, Z).

Elements are tuples of Python ints, so scalar operations never overflow.
Bulk operations take ``(..., c)`` int64 arrays and raise ``OverflowError``
before any product could leave the int64 range.

Z^d elements are coordinate vectors.  UT(d, Z) elements are the strictly
upper-triangular entries ordered by superdiagonal level ``j - i`` first and
row second; for UT(3, Z) that is the familiar triple ``(a, b, c)`` with
``a = g[1,2]``, ``b = g[2,3]``, ``c = g[1,3]``.  The natural index, however,
always reads UT entries in row-major order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import kernels
from .errors import IndexNotInRange

_SAFE = 2 ** 62


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % q for q in range(2, math.isqrt(p) + 1))


def z_index(n: int) -> int:
    """Index of an integer: ``2|n| + [n >= 0]``."""
    return 2 * abs(n) + (1 if n >= 0 else 0)


def z_element(i: int) -> int:
    if i < 1:
        raise IndexNotInRange(f"{i} is not the index of an integer")
    return (i - 1) // 2 if i % 2 else -(i // 2)


def cantor_pair(x: int, y: int) -> int:
    s = x + y
    return s * (s + 1) // 2 + y


def cantor_unpair(z: int) -> tuple[int, int]:
    w = (math.isqrt(8 * z + 1) - 1) // 2
    y = z - w * (w + 1) // 2
    return w - y, y


def vector_index(v) -> int:
    """Iterated Cantor pairing of the integer indices of the entries of ``v``."""
    acc = z_index(v[0])
    for x in v[1:]:
        acc = cantor_pair(acc, z_index(x))
    return acc


def vector_at(i: int, length: int) -> tuple[int, ...]:
    if i < 1:
        raise IndexNotInRange(f"{i} is not an index")
    parts = []
    acc = i
    for _ in range(length - 1):
        acc, last = cantor_unpair(acc)
        if last < 1:
            raise IndexNotInRange(f"{i} is not an index of a {length}-vector")
        parts.append(z_element(last))
    if acc < 1:
        raise IndexNotInRange(f"{i} is not an index of a {length}-vector")
    parts.append(z_element(acc))
    return tuple(reversed(parts))


@dataclass(frozen=True)
class Group:
    """A group family with a fixed admissible indexing.

    ``family`` is ``"zd"`` (``dim`` = d >= 1) or ``"ut"`` (matrix size
    ``dim`` >= 2).  ``p`` is the prime used by the UT congruence monotiling.
    """

    family: str
    dim: int
    p: int | None = None
    _pairs: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.family not in ("zd", "ut"):
            raise ValueError(f"unknown group family {self.family!r}")
        if self.family == "zd" and self.dim < 1:
            raise ValueError("Z^d needs d >= 1")
        if self.family == "ut" and self.dim < 2:
            raise ValueError("UT(d, Z) needs d >= 2")
        if self.p is not None and (self.family != "ut" or not is_prime(self.p)):
            raise ValueError(f"p={self.p} must be a prime and only applies to UT")
        if self.family == "ut":
            d = self.dim
            pairs = tuple((i, i + lvl) for lvl in range(1, d) for i in range(1, d - lvl + 1))
        else:
            pairs = ()
        object.__setattr__(self, "_pairs", pairs)

    # -- descriptors -------------------------------------------------------

    @property
    def ncoords(self) -> int:
        return self.dim if self.family == "zd" else self.dim * (self.dim - 1) // 2

    @property
    def pairs(self) -> tuple[tuple[int, int], ...]:
        """Matrix positions (1-based) of the UT coordinates, in storage order."""
        return self._pairs

    @cached_property
    def _pos(self) -> dict:
        return {ij: q for q, ij in enumerate(self._pairs)}

    @cached_property
    def _row_major(self) -> np.ndarray:
        order = sorted(range(len(self._pairs)), key=lambda q: self._pairs[q])
        return np.asarray(order, dtype=np.intp)

    @cached_property
    def _products(self) -> tuple:
        # for each coordinate q=(i,j): list of (pos(i,l), pos(l,j)) with i<l<j
        pos = self._pos
        return tuple(
            tuple((pos[(i, l)], pos[(l, j)]) for l in range(i + 1, j))
            for (i, j) in self._pairs
        )

    @property
    def token(self) -> str:
        if self.family == "zd":
            return f"zd:{self.dim}"
        return f"ut:{self.dim}" + (f":p={self.p}" if self.p is not None else "")

    def __str__(self):
        return self.token

    # -- scalar arithmetic -------------------------------------------------

    def identity(self) -> tuple[int, ...]:
        return (0,) * self.ncoords

    def validate(self, a) -> tuple[int, ...]:
        a = tuple(int(x) for x in a)
        if len(a) != self.ncoords:
            raise ValueError(f"{self.token} elements have {self.ncoords} coordinates, got {len(a)}")
        return a

    def multiply(self, a, b) -> tuple[int, ...]:
        if self.family == "zd":
            return tuple(x + y for x, y in zip(a, b))
        out = []
        for q, terms in enumerate(self._products):
            v = a[q] + b[q]
            for u, w in terms:
                v += a[u] * b[w]
            out.append(v)
        return tuple(out)

    def inverse(self, a) -> tuple[int, ...]:
        if self.family == "zd":
            return tuple(-x for x in a)
        out = [0] * len(a)
        for q, terms in enumerate(self._products):
            v = -a[q]
            for u, w in terms:
                v -= a[u] * out[w]
            out[q] = v
        return tuple(out)

    def generator(self, i: int, j: int, power: int = 1) -> tuple[int, ...]:
        """``T_ij ** power`` (UT) or ``power`` times the i-th unit vector (Z^d)."""
        out = [0] * self.ncoords
        out[self._pos[(i, j)] if self.family == "ut" else i - 1] = power
        return tuple(out)

    def to_matrix(self, a) -> list[list[int]]:
        if self.family != "ut":
            raise TypeError("only UT elements are matrices")
        d = self.dim
        m = [[int(r == c) for c in range(d)] for r in range(d)]
        for (i, j), x in zip(self._pairs, a):
            m[i - 1][j - 1] = x
        return m

    def from_matrix(self, m) -> tuple[int, ...]:
        if self.family != "ut":
            raise TypeError("only UT elements are matrices")
        d = self.dim
        if len(m) != d or any(len(row) != d for row in m):
            raise ValueError(f"expected a {d}x{d} matrix")
        for r in range(d):
            for c in range(r + 1):
                if m[r][c] != (1 if r == c else 0):
                    raise ValueError("matrix is not unit upper triangular")
        return tuple(int(m[i - 1][j - 1]) for i, j in self._pairs)

    # -- indexing ----------------------------------------------------------

    def _index_vector(self, a):
        if self.family == "zd":
            return a
        return tuple(a[q] for q in self._row_major)

    def index_of(self, a) -> int:
        return vector_index(self._index_vector(a))

    def element_at(self, i: int) -> tuple[int, ...]:
        v = vector_at(int(i), self.ncoords)
        if self.family == "zd":
            return v
        out = [0] * self.ncoords
        for q, x in zip(self._row_major, v):
            out[q] = x
        return tuple(out)

    # -- bulk arithmetic ---------------------------------------------------

    def _check_bound(self, *arrays):
        m = [int(np.abs(x).max()) if x.size else 0 for x in arrays]
        bound = sum(m)
        if self.family == "ut" and len(m) == 2:
            bound += max(self.dim - 2, 0) * m[0] * m[1]
        if bound >= _SAFE:
            raise OverflowError(f"{self.token} product may exceed int64")

    def vmul(self, a, b) -> np.ndarray:
        """Elementwise products of two broadcastable ``(..., c)`` arrays."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        self._check_bound(a, b)
        if self.family == "zd":
            return a + b
        out = np.broadcast_arrays(a, b)[0].copy()
        out += b
        for q, terms in enumerate(self._products):
            for u, w in terms:
                out[..., q] += a[..., u] * b[..., w]
        return out

    def vinv(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if self.family == "zd":
            return -a
        m = int(np.abs(a).max()) if a.size else 0
        if (self.dim * m + 1) ** (self.dim - 1) >= _SAFE:
            raise OverflowError(f"{self.token} inverse may exceed int64")
        out = np.zeros_like(a)
        for q, terms in enumerate(self._products):
            v = -a[..., q]
            for u, w in terms:
                v = v - a[..., u] * out[..., w]
            out[..., q] = v
        return out

    def vindex(self, coords) -> np.ndarray:
        """Natural indices of the rows of ``coords``.

        Returns int64 when every index provably fits, else an object array of
        Python ints.
        """
        coords = np.asarray(coords, dtype=np.int64).reshape(-1, self.ncoords)
        if self.family == "ut":
            coords = coords[:, self._row_major]
        if coords.shape[0] == 0:
            return np.zeros(0, dtype=np.int64)
        top = 2 * int(np.abs(coords).max()) + 1
        bound = top
        for _ in range(1, coords.shape[1]):
            bound = cantor_pair(bound, top)
        if bound < _SAFE:
            return kernels.cantor_index(coords)
        return np.array([vector_index(tuple(int(x) for x in row)) for row in coords], dtype=object)


def parse_group(token: str) -> Group:
    """Parse ``zd:<d>`` or ``ut:<d>[:p=<prime>]``."""
    parts = token.strip().split(":")
    try:
        family, dim = parts[0], int(parts[1])
        p = None
        for extra in parts[2:]:
            key, _, val = extra.partition("=")
            if key != "p":
                raise ValueError
            p = int(val)
        if family == "zd" and len(parts) != 2:
            raise ValueError
        return Group(family, dim, p)
    except (IndexError, ValueError) as exc:
        raise ValueError(f"bad group token {token!r}") from exc
