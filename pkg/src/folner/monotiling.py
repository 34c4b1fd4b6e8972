"""Computable Følner monotilings and the set operations built on them.

Three families are supported:

``zd-cubes``
    ``F_n = [0, n-1]^d`` and centers ``n Z^d`` in Z^d.
``heis3``
    ``F_n = {0 <= a, b < n, 0 <= c < n^2}`` and centers
    ``{a, b in nZ, c in n^2 Z}`` in UT(3, Z).
``utd:p=<prime>``
    In UT(d, Z): centers generated by ``T_ij ** p^(n(j-i))`` and the tiles
    are the product sets of generator powers with exponents in
    ``[-floor(q/2), floor((q-1)/2)]`` for ``q = p^(n(j-i))``.
"""
from __future__ import annotations

import threading
from fractions import Fraction
from math import prod

import numpy as np

from .errors import ResourceLimit, SearchBudgetExceeded
from .groups import Group
from .windows import WindowSet, product_set

DEFAULT_CAP = 10 ** 7
DEFAULT_BUDGET = 200_000


class Tile(WindowSet):
    """The tile ``F_n``; a :class:`WindowSet` that remembers ``n``."""

    def __init__(self, group, coords, n, **kw):
        super().__init__(group, coords, **kw)
        self.n = n

    def __repr__(self):
        return f"Tile(n={self.n}, {len(self)} elements)"


# --------------------------------------------------------------------------
# K-boundaries and K-interiors

def _any_all(group, K, F, points, side):
    """For each point g: (some k with kg in F, some k with kg not in F)."""
    any_in = np.zeros(len(points), dtype=bool)
    any_out = np.zeros(len(points), dtype=bool)
    for k in K.coords:
        moved = group.vmul(k, points) if side == "left" else group.vmul(points, k)
        hit = F.contains(moved)
        any_in |= hit
        any_out |= ~hit
    return any_in, any_out


def _interior_mask(K: WindowSet, F: WindowSet, points: np.ndarray, side: str) -> np.ndarray:
    group = F.group
    in_f = F.contains(points)
    if len(K) == 0:
        return in_f
    any_in, any_out = _any_all(group, K, F, points, side)
    return in_f & ~(any_in & any_out)


def _boundary(K: WindowSet, F: WindowSet, side: str) -> WindowSet:
    group = F.group
    if side == "left":
        cand = product_set(group, K.inverse(), F)
    else:
        cand = product_set(group, F, K.inverse())
    if not len(cand):
        return cand
    _, any_out = _any_all(group, K, F, cand.coords, side)
    return cand.subset(any_out)


def k_boundary_left(K: WindowSet, F: WindowSet) -> WindowSet:
    """``K^-1 F  ∩  K^-1 F^c``."""
    return _boundary(K, F, "left")


def k_boundary_right(K: WindowSet, F: WindowSet) -> WindowSet:
    """``F K^-1  ∩  F^c K^-1``."""
    return _boundary(K, F, "right")


def k_interior_left(K: WindowSet, F: WindowSet) -> WindowSet:
    return F.subset(_interior_mask(K, F, F.coords, "left"))


def k_interior_right(K: WindowSet, F: WindowSet) -> WindowSet:
    return F.subset(_interior_mask(K, F, F.coords, "right"))


# --------------------------------------------------------------------------

class Monotiling:
    """A computable left Følner monotiling ``([F_n, Z_n])_n`` of a group.

    ``cap`` bounds the number of elements any single set computation may
    produce; ``budget`` bounds the center enumeration used by the UT(d)
    semi-decision procedure.
    """

    def __init__(self, group: Group, family: str, *, cap: int = DEFAULT_CAP,
                 budget: int = DEFAULT_BUDGET):
        if family == "heis3" and not (group.family == "ut" and group.dim == 3):
            raise ValueError("heis3 needs the group ut:3")
        if family == "zd-cubes" and group.family != "zd":
            raise ValueError("zd-cubes needs a group zd:<d>")
        if family == "utd" and (group.family != "ut" or group.p is None):
            raise ValueError("utd needs a group ut:<d> with p set")
        if family not in ("zd-cubes", "heis3", "utd"):
            raise ValueError(f"unknown monotiling {family!r}")
        self.group = group
        self.family = family
        self.cap = cap
        self.budget = budget
        self._tiles: dict[int, Tile] = {}
        self._enum: dict[int, tuple[list, set, list]] = {}
        self._lock = threading.RLock()

    @property
    def token(self) -> str:
        return f"utd:p={self.group.p}" if self.family == "utd" else self.family

    def __repr__(self):
        return f"Monotiling({self.group.token}, {self.token})"

    # -- tiles -------------------------------------------------------------

    def _moduli(self, n: int) -> list[int]:
        """Per-coordinate center moduli for index n (storage order)."""
        g = self.group
        if self.family == "zd-cubes":
            return [n] * g.dim
        if self.family == "heis3":
            return [n, n, n * n]
        return [g.p ** (n * (j - i)) for i, j in g.pairs]

    def tile_size(self, n: int) -> int:
        """``|F_n|`` in closed form."""
        if n < 1:
            raise ValueError("tile index must be >= 1")
        return prod(self._moduli(n))

    def exponent_ranges(self, n: int) -> dict[tuple[int, int], tuple[int, int]]:
        """Inclusive exponent range of each generator in the UT(d) tile."""
        if self.family != "utd":
            raise TypeError("exponent ranges only exist for the utd family")
        return {ij: (-(q // 2), (q - 1) // 2) for ij, q in zip(self.group.pairs, self._moduli(n))}

    def product_order(self) -> list[tuple[int, int]]:
        """Generator order in the UT(d) tile products: by level, rows descending."""
        pairs = self.group.pairs
        return sorted(pairs, key=lambda ij: (ij[1] - ij[0], -ij[0]))

    def tile(self, n: int) -> Tile:
        size = self.tile_size(n)
        if size > self.cap:
            raise ResourceLimit(f"|F_{n}| = {size} exceeds cap {self.cap}")
        with self._lock:
            t = self._tiles.get(n)
            if t is None:
                t = self._tiles[n] = Tile(self.group, self._tile_coords(n), n)
            return t

    def _tile_coords(self, n: int) -> np.ndarray:
        g = self.group
        if self.family in ("zd-cubes", "heis3"):
            axes = [np.arange(m, dtype=np.int64) for m in self._moduli(n)]
            grid = np.meshgrid(*axes, indexing="ij")
            return np.stack([x.ravel() for x in grid], axis=1)
        ranges = self.exponent_ranges(n)
        cur = np.zeros((1, g.ncoords), dtype=np.int64)
        for ij in self.product_order():
            lo, hi = ranges[ij]
            powers = np.zeros((hi - lo + 1, g.ncoords), dtype=np.int64)
            powers[:, g.pairs.index(ij)] = np.arange(lo, hi + 1)
            cur = g.vmul(cur[:, None, :], powers[None, :, :]).reshape(-1, g.ncoords)
        return cur

    # -- centers -----------------------------------------------------------

    def center_mask(self, n: int, coords) -> np.ndarray:
        """Bulk membership in ``Z_n``.

        For ``utd`` this uses the congruence description
        ``Z_n = {g : g_ij ≡ 0 mod p^(n(j-i))}`` of the generated subgroup.
        """
        coords = np.asarray(coords, dtype=np.int64).reshape(-1, self.group.ncoords)
        mods = self._moduli(n)
        if max(mods) >= 2 ** 62:
            return np.array([all(int(x) % m == 0 for x, m in zip(row, mods)) for row in coords],
                            dtype=bool)
        return np.all(coords % np.asarray(mods, dtype=np.int64) == 0, axis=1)

    def is_center(self, n: int, g) -> bool:
        """Decide ``g ∈ Z_n``.

        ``utd`` runs the semi-decision loop over an enumeration of ``Z_n``;
        it raises :class:`SearchBudgetExceeded` when the budget runs out.
        """
        g = self.group.validate(g)
        if self.family == "utd":
            f, _ = self._search(n, g)
            return f == self.group.identity()
        return all(x % m == 0 for x, m in zip(g, self._moduli(n)))

    def decompose(self, n: int, g) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """The unique ``(f, z)`` with ``g = f z``, ``f ∈ F_n``, ``z ∈ Z_n``."""
        g = self.group.validate(g)
        if self.family == "zd-cubes":
            f = tuple(x % n for x in g)
            return f, tuple(x - y for x, y in zip(g, f))
        if self.family == "heis3":
            a, b, c = g
            alpha, beta = a % n, b % n
            x, y = a - alpha, b - beta
            gamma = (c - y * alpha) % (n * n)
            return (alpha, beta, gamma), (x, y, c - y * alpha - gamma)
        return self._search(n, g)

    def _grow_enumeration(self, n: int):
        """Append one breadth-first layer to the enumeration of ``Z_n``."""
        G = self.group
        state = self._enum.get(n)
        if state is None:
            e = G.identity()
            state = self._enum[n] = ([e], {e}, [e])
        items, seen, frontier = state
        gens = []
        for (i, j), q in zip(G.pairs, self._moduli(n)):
            gens.append(G.generator(i, j, q))
            gens.append(G.generator(i, j, -q))
        layer = set()
        for x in frontier:
            for s in gens:
                y = G.multiply(x, s)
                if y not in seen:
                    layer.add(y)
        new = sorted(layer, key=G.index_of)
        seen.update(new)
        items.extend(new)
        state[2][:] = new
        return items

    def center_enumeration(self, n: int, count: int) -> list[tuple[int, ...]]:
        """First ``count`` elements of the enumeration of ``Z_n`` (utd only)."""
        if self.family != "utd":
            raise TypeError("explicit center enumeration is only used for utd")
        with self._lock:
            items = self._enum[n][0] if n in self._enum else self._grow_enumeration(n)
            while len(items) < count:
                before = len(items)
                items = self._grow_enumeration(n)
                if len(items) == before:
                    break
            return items[:count]

    def _search(self, n: int, g):
        F = self.tile(n)
        G = self.group
        done = 0
        chunk = 64
        while done < self.budget:
            want = min(self.budget, done + chunk)
            zs = self.center_enumeration(n, want)
            batch = zs[done:]
            if not batch:
                break
            zc = np.array(batch, dtype=np.int64)
            f = G.vmul(np.asarray(g, dtype=np.int64), G.vinv(zc))
            hit = np.flatnonzero(F.contains(f))
            if hit.size:
                i = int(hit[0])
                return tuple(int(x) for x in f[i]), batch[i]
            done += len(batch)
            chunk *= 2
        raise SearchBudgetExceeded(f"no decomposition of {g} found within {self.budget} centers")

    def is_symmetric_centers(self, k: int, probe, center=None) -> bool:
        """Check ``g ∈ Z_k ⇔ g^-1 ∈ Z_k`` on the probe elements."""
        test = center if center is not None else (lambda g: self.is_center(k, g))
        G = self.group
        return all(bool(test(g)) == bool(test(G.inverse(g))) for g in probe)

    # -- windows -------------------------------------------------------------

    def centers_in_window(self, k: int, n: int) -> WindowSet:
        """``I_{k,n}``: centers of ``Z_k`` in the left ``F_k``- and right
        ``F_k^-1``-interiors of ``F_n``."""
        F = self.tile(n)
        K = self.tile(k)
        cand = F.subset(self.center_mask(k, F.coords))
        keep = _interior_mask(K, F, cand.coords, "left")
        keep &= _interior_mask(K.inverse(), F, cand.coords, "right")
        return cand.subset(keep)

    def tile_union(self, k: int, centers: WindowSet) -> WindowSet:
        """``⋃_{h ∈ centers} F_k h``."""
        return product_set(self.group, self.tile(k), centers, cap=self.cap)

    def density_ratio(self, k: int, n: int) -> Fraction:
        F = self.tile(n)
        return Fraction(int(self.center_mask(k, F.coords).sum()), len(F))

    def folner_defect(self, n: int, K: WindowSet, side: str = "left") -> Fraction:
        F = self.tile(n)
        KF = product_set(self.group, K, F, cap=self.cap) if side == "left" \
            else product_set(self.group, F, K, cap=self.cap)
        common = int(F.contains(KF.coords).sum())
        return Fraction(len(F) + len(KF) - 2 * common, len(F))

    # -- temperedness --------------------------------------------------------

    def inverse_product_size(self, m: int, n: int) -> int | None:
        """Closed-form ``|F_m^-1 F_n|`` where one is known, else ``None``."""
        if self.family == "zd-cubes":
            return (n + m - 1) ** self.group.dim
        if self.family == "heis3":
            return ((n + m - 1) ** 2 * (n * n + m * m - 1)
                    + (m - 1) * (n - 1) * (m * (m - 1) + n * (n - 1)) // 2)
        return None

    def _union_inverse_product(self, prefix: list[int], n: int) -> int:
        """``|⋃_{j} F_{prefix_j}^-1 F_n|``."""
        if self.inverse_product_size(1, 1) is not None:
            # tiles are nested, so the union is the term with the largest index
            return self.inverse_product_size(max(prefix), n)
        F = self.tile(n)
        parts = []
        for m in prefix:
            Km = self.tile(m).inverse()
            parts.append(product_set(self.group, Km, F, cap=self.cap).coords)
            if sum(len(p) for p in parts) > self.cap:
                raise ResourceLimit("temperedness union exceeds cap")
        return len(WindowSet(self.group, np.concatenate(parts)))

    def temperedness_ratio(self, indices, i: int) -> Fraction:
        """``|⋃_{j<i} F_{n_j}^-1 F_{n_i}| / |F_{n_i}|`` with 1-based ``i >= 2``."""
        indices = list(indices)
        if i < 2 or i > len(indices):
            raise ValueError("need 2 <= i <= len(indices)")
        if any(a >= b for a, b in zip(indices, indices[1:])):
            raise ValueError("indices must be strictly increasing")
        n = indices[i - 1]
        return Fraction(self._union_inverse_product(indices[: i - 1], n), self.tile_size(n))

    def _tempered_ok(self, prefix: list[int], n: int) -> bool:
        # |F_n △ F~^-1 F_n| / |F_n| <= 1 / |F~|, with F~ the union of the prefix tiles
        closed = self.inverse_product_size(1, 1) is not None
        if closed:
            tilde = self.tile_size(max(prefix))
            sym = self.inverse_product_size(max(prefix), n) - self.tile_size(n)
            return sym * tilde <= self.tile_size(n)
        tilde_set = WindowSet(self.group, np.concatenate([self.tile(m).coords for m in prefix]))
        F = self.tile(n)
        K = tilde_set.inverse()
        KF = product_set(self.group, K, F, cap=self.cap)
        common = int(F.contains(KF.coords).sum())
        sym = len(F) + len(KF) - 2 * common
        return sym * len(tilde_set) <= len(F)

    def tempered_subsequence(self, count: int, c_target: int = 2,
                             size_cap: int | None = None) -> list[int]:
        """Indices ``n_1 < n_2 < ...`` of a ``c_target``-tempered subsequence.

        ``n_1 = 1`` and ``n_{i+1}`` is the first integer greater than ``i+1``
        whose tile is almost invariant under the union of the previous tiles.
        For the nested families with closed-form cardinalities the defect is
        decreasing in n, so the first admissible index is found by doubling
        and bisection; otherwise candidates are scanned one by one, each
        bounded by the element cap.  ``size_cap`` bounds ``|F_n|`` of every
        candidate on either path.
        """
        if count < 1:
            raise ValueError("count must be >= 1")
        out = [1]
        closed = self.inverse_product_size(1, 1) is not None

        def ok(n):
            if size_cap is not None and self.tile_size(n) > size_cap:
                raise ResourceLimit(f"tempered search reached |F_{n}| = {self.tile_size(n)} > {size_cap}")
            return self._tempered_ok(out, n)

        while len(out) < count:
            i = len(out)
            lo = i + 2
            if closed:
                if ok(lo):
                    nxt = lo
                else:
                    step, bad = 1, lo
                    while not ok(bad + step):
                        bad, step = bad + step, step * 2
                    good = bad + step
                    while good - bad > 1:
                        mid = (good + bad) // 2
                        if ok(mid):
                            good = mid
                        else:
                            bad = mid
                    nxt = good
            else:
                nxt = lo
                while not ok(nxt):
                    nxt += 1
            out.append(nxt)
        for i in range(2, len(out) + 1):
            if self.temperedness_ratio(out, i) > c_target:
                raise AssertionError(f"subsequence {out} is not {c_target}-tempered at step {i}")
        return out


def parse_monotiling(token: str, group: Group, **kw) -> Monotiling:
    """Parse ``zd-cubes``, ``heis3`` or ``utd:p=<prime>`` for ``group``."""
    token = token.strip()
    if token.startswith("utd"):
        _, _, rest = token.partition(":")
        key, _, val = rest.partition("=")
        if key != "p":
            raise ValueError(f"bad monotiling token {token!r}")
        p = int(val)
        if group.family != "ut":
            raise ValueError("utd needs a UT group")
        if group.p is None:
            group = Group("ut", group.dim, p)
        elif group.p != p:
            raise ValueError(f"group prime {group.p} disagrees with tiling prime {p}")
        return Monotiling(group, "utd", **kw)
    return Monotiling(group, token, **kw)
