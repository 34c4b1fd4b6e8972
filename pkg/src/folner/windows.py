"""Finite sets of group elements kept in ascending natural-index order."""
from __future__ import annotations

import math

import numpy as np

from .groups import Group

_DENSE_MAX = 1 << 26


class _Locator:
    """Maps query points to positions in a fixed coordinate table."""

    def __init__(self, coords: np.ndarray):
        self.n, self.c = coords.shape
        if self.n == 0:
            self.mode = "empty"
            return
        self.lo = coords.min(axis=0)
        hi = coords.max(axis=0)
        ext = [int(e) for e in (hi - self.lo + 1)]
        volume = math.prod(ext)
        self.ext = np.asarray(ext, dtype=np.int64)
        self.hi = hi
        if volume < 2 ** 62:
            strides = np.ones(self.c, dtype=np.int64)
            for j in range(self.c - 2, -1, -1):
                strides[j] = strides[j + 1] * self.ext[j + 1]
            self.strides = strides
            keys = (coords - self.lo) @ strides
            if volume <= max(8 * self.n, 1 << 16) and volume <= _DENSE_MAX:
                self.mode = "dense"
                table = np.full(volume, -1, dtype=np.int64)
                table[keys] = np.arange(self.n)
                self.table = table
            else:
                self.mode = "sorted"
                order = np.argsort(keys, kind="stable")
                self.keys = keys[order]
                self.order = order
        else:
            self.mode = "dict"
            self.table = {tuple(int(x) for x in row): i for i, row in enumerate(coords)}

    def find(self, points: np.ndarray) -> np.ndarray:
        points = np.asarray(points, dtype=np.int64)
        shape = points.shape[:-1]
        pts = points.reshape(-1, self.c)
        out = np.full(pts.shape[0], -1, dtype=np.int64)
        if self.mode == "empty" or pts.shape[0] == 0:
            return out.reshape(shape)
        if self.mode == "dict":
            get = self.table.get
            out[:] = [get(tuple(int(x) for x in row), -1) for row in pts]
            return out.reshape(shape)
        inside = np.all((pts >= self.lo) & (pts <= self.hi), axis=1)
        keys = (pts[inside] - self.lo) @ self.strides
        if self.mode == "dense":
            out[inside] = self.table[keys]
        else:
            at = np.searchsorted(self.keys, keys)
            at_c = np.minimum(at, self.keys.shape[0] - 1)
            hit = self.keys[at_c] == keys
            res = np.where(hit, self.order[at_c], -1)
            out[inside] = res
        return out.reshape(shape)


class WindowSet:
    """A finite, duplicate-free set of elements sorted by natural index.

    ``coords`` is an ``(N, c)`` int64 array; row ``i`` is the element with
    the ``i``-th smallest natural index.
    """

    def __init__(self, group: Group, coords, *, presorted: bool = False):
        self.group = group
        coords = np.asarray(coords, dtype=np.int64).reshape(-1, group.ncoords)
        if presorted:
            self.coords = coords
            self._index = None
        else:
            idx = group.vindex(coords)
            uniq, first = np.unique(idx, return_index=True)
            self.coords = coords[first]
            self._index = uniq
        self.coords.setflags(write=False)
        self._locator = None

    @classmethod
    def from_elements(cls, group: Group, elements) -> "WindowSet":
        elements = [group.validate(e) for e in elements]
        if not elements:
            return cls(group, np.zeros((0, group.ncoords), dtype=np.int64))
        big = max(abs(x) for e in elements for x in e) >= 2 ** 62
        if big:
            raise OverflowError("element coordinates exceed int64")
        return cls(group, np.array(elements, dtype=np.int64))

    @property
    def index(self) -> np.ndarray:
        if self._index is None:
            self._index = self.group.vindex(self.coords)
        return self._index

    @property
    def locator(self) -> _Locator:
        if self._locator is None:
            self._locator = _Locator(self.coords)
        return self._locator

    def __len__(self):
        return self.coords.shape[0]

    def __iter__(self):
        for row in self.coords:
            yield tuple(int(x) for x in row)

    def elements(self) -> list[tuple[int, ...]]:
        return list(self)

    def __contains__(self, g) -> bool:
        return bool(self.locator.find(np.asarray([g], dtype=np.int64))[0] >= 0)

    def __eq__(self, other):
        if not isinstance(other, WindowSet):
            return NotImplemented
        return self.group == other.group and np.array_equal(self.coords, other.coords)

    def __repr__(self):
        return f"WindowSet({self.group.token}, {len(self)} elements)"

    def positions(self, points) -> np.ndarray:
        """Position of each query point in this set, ``-1`` if absent."""
        return self.locator.find(points)

    def contains(self, points) -> np.ndarray:
        return self.positions(points) >= 0

    def subset(self, mask) -> "WindowSet":
        """Sub-window selected by a boolean mask or position array."""
        mask = np.asarray(mask)
        out = WindowSet(self.group, self.coords[mask], presorted=True)
        if self._index is not None:
            out._index = self._index[mask]
        return out

    def union(self, other: "WindowSet") -> "WindowSet":
        return WindowSet(self.group, np.concatenate([self.coords, other.coords]))

    def intersection(self, other: "WindowSet") -> "WindowSet":
        return self.subset(other.contains(self.coords))

    def difference(self, other: "WindowSet") -> "WindowSet":
        return self.subset(~other.contains(self.coords))

    def inverse(self) -> "WindowSet":
        return WindowSet(self.group, self.group.vinv(self.coords))

    def issubset(self, other: "WindowSet") -> bool:
        return bool(other.contains(self.coords).all())


def product_set(group: Group, left: WindowSet, right: WindowSet, cap: int | None = None) -> WindowSet:
    """``{a b : a in left, b in right}``."""
    if cap is not None and len(left) * len(right) > cap:
        from .errors import ResourceLimit

        raise ResourceLimit(f"product of {len(left)} x {len(right)} elements exceeds cap {cap}")
    if not len(left) or not len(right):
        return WindowSet(group, np.zeros((0, group.ncoords), dtype=np.int64))
    prod = group.vmul(left.coords[:, None, :], right.coords[None, :, :])
    return WindowSet(group, prod.reshape(-1, group.ncoords))
