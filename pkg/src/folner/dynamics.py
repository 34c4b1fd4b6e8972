"""Words over finite alphabets, the shift action, samplers and tile-pattern statistics."""
from __future__ import annotations

from dataclasses import dataclass, field
from math import log2

import numpy as np

from . import kernels
from .bitcodes import letter_width
from .errors import SupportViolation, UnsupportedModel
from .groups import Group
from .windows import WindowSet, product_set

_MASK64 = (1 << 64) - 1


class Word:
    """A finite partial map from group elements to letters ``1..alphabet``.

    ``letters[i]`` is the letter at ``support.coords[i]``; both follow the
    natural-index order of the support.
    """

    def __init__(self, support: WindowSet, letters, alphabet: int):
        letters = np.asarray(letters, dtype=np.uint8).ravel()
        if letters.shape[0] != len(support):
            raise ValueError(f"{letters.shape[0]} letters for a support of size {len(support)}")
        if alphabet < 1 or alphabet > 255:
            raise ValueError("alphabet size must be in 1..255")
        if letters.size and (letters.min() < 1 or letters.max() > alphabet):
            raise ValueError(f"letters must lie in 1..{alphabet}")
        self.support = support
        self.letters = letters
        self.alphabet = int(alphabet)

    @classmethod
    def from_dict(cls, group: Group, mapping: dict, alphabet: int) -> "Word":
        support = WindowSet.from_elements(group, list(mapping))
        return cls(support, [mapping[g] for g in support.elements()], alphabet)

    @property
    def group(self) -> Group:
        return self.support.group

    @property
    def width(self) -> int:
        return letter_width(self.alphabet)

    def __len__(self):
        return len(self.support)

    def __eq__(self, other):
        return (isinstance(other, Word) and self.alphabet == other.alphabet
                and self.support == other.support
                and np.array_equal(self.letters, other.letters))

    def __repr__(self):
        return f"Word({len(self)} sites over {self.alphabet} letters)"

    def values_at(self, points) -> np.ndarray:
        """Letters at the given points; :class:`SupportViolation` if any is missing."""
        points = np.asarray(points, dtype=np.int64)
        pos = self.support.positions(points)
        if (pos < 0).any():
            bad = points.reshape(-1, self.group.ncoords)[np.flatnonzero(pos.ravel() < 0)[0]]
            raise SupportViolation(f"no letter at {tuple(int(v) for v in bad)}")
        return self.letters[pos]

    def at(self, g) -> int:
        return int(self.values_at(np.asarray([g], dtype=np.int64))[0])

    def as_dict(self) -> dict:
        return dict(zip(self.support.elements(), (int(v) for v in self.letters)))


def act(g, word: Word) -> Word:
    """``(g·ω)(x) = ω(xg)``; the support becomes ``support · g^-1``."""
    G = word.group
    g = np.asarray(G.validate(g), dtype=np.int64)
    support = WindowSet(G, G.vmul(word.support.coords, G.vinv(g)))
    return Word(support, word.values_at(G.vmul(support.coords, g)), word.alphabet)


def restrict(word: Word, S: WindowSet) -> Word:
    pos = word.support.positions(S.coords)
    if (pos < 0).any():
        raise SupportViolation("restriction set is not contained in the support")
    return Word(S, word.letters[pos], word.alphabet)


# --------------------------------------------------------------------------
# sampler models

@dataclass(frozen=True)
class SamplerModel:
    """A shift-invariant measure with known entropy.

    ``kind`` is ``"bernoulli"`` (``probs``), ``"markov"`` (``matrix``, chains
    along the first coordinate of Z^d or the central coordinate of UT(d)) or
    ``"periodic"`` (``pattern``).
    """

    kind: str
    probs: tuple = ()
    matrix: tuple = ()
    pattern: tuple = ()
    seed: int = 0
    stationary: tuple = field(default=(), compare=False)

    def __post_init__(self):
        if self.kind == "bernoulli":
            p = np.asarray(self.probs, dtype=float)
            if p.size < 1 or (p < 0).any() or abs(p.sum() - 1) > 1e-12:
                raise ValueError("Bernoulli probabilities must be nonnegative and sum to 1")
        elif self.kind == "markov":
            P = np.asarray(self.matrix, dtype=float)
            if P.ndim != 2 or P.shape[0] != P.shape[1] or (P < 0).any() \
                    or np.abs(P.sum(axis=1) - 1).max() > 1e-12:
                raise ValueError("transition matrix must be square and row-stochastic")
            pi = _stationary(P)
            object.__setattr__(self, "stationary", tuple(float(x) for x in pi))
        elif self.kind == "periodic":
            if not self.pattern or min(self.pattern) < 1:
                raise ValueError("periodic pattern must be a nonempty tuple of letters >= 1")
        else:
            raise ValueError(f"unknown model kind {self.kind!r}")

    @property
    def alphabet(self) -> int:
        if self.kind == "bernoulli":
            return max(2, len(self.probs))
        if self.kind == "markov":
            return max(2, len(self.matrix))
        return max(2, max(self.pattern))

    def with_seed(self, seed: int) -> "SamplerModel":
        return SamplerModel(self.kind, self.probs, self.matrix, self.pattern, seed)


def _stationary(P: np.ndarray) -> np.ndarray:
    a = P.shape[0]
    A = np.vstack([P.T - np.eye(a), np.ones(a)])
    b = np.zeros(a + 1)
    b[-1] = 1
    pi = np.linalg.lstsq(A, b, rcond=None)[0]
    pi = np.clip(pi, 0, None)
    pi /= pi.sum()
    if np.abs(pi @ P - pi).max() > 1e-9:
        raise ValueError("could not find a stationary distribution")
    return pi


def bernoulli(*probs, seed: int = 0) -> SamplerModel:
    return SamplerModel("bernoulli", probs=tuple(float(p) for p in probs), seed=seed)


def markov(rows, seed: int = 0) -> SamplerModel:
    return SamplerModel("markov", matrix=tuple(tuple(float(x) for x in r) for r in rows), seed=seed)


def periodic(*pattern, seed: int = 0) -> SamplerModel:
    return SamplerModel("periodic", pattern=tuple(int(x) for x in pattern), seed=seed)


def parse_model(token: str, seed: int = 0) -> SamplerModel:
    """``bernoulli:p1,p2,...``, ``markov:r11,r12/r21,r22`` or ``periodic:l1,l2,...``."""
    kind, _, body = token.partition(":")
    try:
        if kind == "bernoulli":
            return bernoulli(*(float(x) for x in body.split(",")), seed=seed)
        if kind == "markov":
            return markov([[float(x) for x in r.split(",")] for r in body.split("/")], seed=seed)
        if kind == "periodic":
            return periodic(*(int(x) for x in body.split(",")), seed=seed)
    except ValueError as exc:
        raise ValueError(f"bad model {token!r}: {exc}") from None
    raise ValueError(f"unknown model {token!r}")


def _site_keys(group: Group, coords: np.ndarray, seed: int, sample: int) -> np.ndarray:
    idx = group.vindex(coords)
    if idx.dtype == object:
        idx = np.array([int(v) & _MASK64 for v in idx], dtype=np.uint64)
    else:
        idx = idx.astype(np.uint64)
    s = kernels.splitmix64(np.array([seed & _MASK64, (sample + 1) & _MASK64], dtype=np.uint64))
    base = kernels.splitmix64(np.array([s[0] ^ s[1]], dtype=np.uint64))[0]
    return idx ^ base


def _line_axis(group: Group) -> int:
    return 0 if group.family == "zd" else group.ncoords - 1


def _lines(coords: np.ndarray, axis: int):
    """Sort sites into lines parallel to ``axis``.

    Returns ``(order, starts)``: ``coords[order]`` lists each line
    contiguously by increasing ``axis`` coordinate and ``starts`` holds the
    offsets of the lines (with a final sentinel).
    """
    others = [coords[:, j] for j in range(coords.shape[1]) if j != axis]
    order = np.lexsort([coords[:, axis]] + others[::-1])
    if not others:
        return order, np.array([0, len(order)])
    rest = np.stack(others, axis=1)[order]
    change = np.flatnonzero(np.any(rest[1:] != rest[:-1], axis=1)) + 1
    return order, np.concatenate([[0], change, [len(order)]])


def sample(model: SamplerModel, support: WindowSet, sample_index: int = 0) -> Word:
    """Draw a word on ``support``; deterministic in ``(model.seed, sample_index)``."""
    G = support.group
    coords = support.coords
    n = len(support)
    if model.kind == "periodic":
        pat = np.asarray(model.pattern, dtype=np.int64)
        if G.family == "zd" and n:
            letters = pat[coords.sum(axis=1) % len(pat)]
        else:
            letters = np.full(n, pat[0])
        return Word(support, letters, model.alphabet)
    u = kernels.uniform(_site_keys(G, coords, model.seed, sample_index)) if n else np.zeros(0)
    if model.kind == "bernoulli":
        cum = np.cumsum(model.probs)
        cum[-1] = 1.0
        return Word(support, kernels.categorical(u, cum), model.alphabet)
    P = np.asarray(model.matrix, dtype=float)
    p_cum = np.cumsum(P, axis=1)
    p_cum[:, -1] = 1.0
    pi_cum = np.cumsum(model.stationary)
    pi_cum[-1] = 1.0
    letters = np.empty(n, dtype=np.uint8)
    if n:
        order, starts = _lines(coords, _line_axis(G))
        lengths = np.diff(starts)
        for length in np.unique(lengths):
            which = np.flatnonzero(lengths == length)
            sites = order[starts[which][:, None] + np.arange(length)[None, :]]
            letters[sites] = kernels.markov_lines(u[sites], pi_cum, p_cum)
    return Word(support, letters, model.alphabet)


# --------------------------------------------------------------------------
# tile patterns

@dataclass(frozen=True)
class PatternStats:
    k: int
    h: tuple
    ids: tuple
    counts: tuple

    @property
    def total(self) -> int:
        return sum(self.counts)


def padded_window(M, k: int, n: int) -> WindowSet:
    """``F_n ∪ F_k F_n ∪ F_k I_{k,n} F_k^-1``: every site read by the pattern
    statistics and weighted averages at ``(k, n)``."""
    F, K = M.tile(n), M.tile(k)
    G = M.group
    parts = [F.coords, product_set(G, K, F, cap=M.cap).coords]
    KI = product_set(G, K, M.centers_in_window(k, n), cap=M.cap)
    parts.append(product_set(G, KI, K.inverse(), cap=M.cap).coords)
    return WindowSet(G, np.concatenate(parts))


def tile_rows(word: Word, tile: WindowSet, centers: np.ndarray, h=None) -> np.ndarray:
    """Letters ``ω(x g h)`` for ``g`` in ``centers`` (rows) and ``x`` in ``tile`` (columns)."""
    G = word.group
    pts = G.vmul(tile.coords[None, :, :], np.asarray(centers, dtype=np.int64)[:, None, :])
    if h is not None:
        pts = G.vmul(pts, np.asarray(h, dtype=np.int64))
    return word.values_at(pts).reshape(len(centers), len(tile))


def pattern_ids(rows: np.ndarray, alphabet: int):
    """Pattern ids of letter rows: ``(sorted unique ids, inverse, counts)``.

    The id of a row is its fixed-width code read as an integer, plus one.
    """
    rows = np.ascontiguousarray(rows, dtype=np.uint8)
    w = letter_width(alphabet)
    if rows.shape[0] == 0:
        return [], np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
    if rows.shape[1] * w <= 62:
        codes = kernels.pack_codes(rows, w)
        uniq, inv, counts = np.unique(codes, return_inverse=True, return_counts=True)
        return [int(c) + 1 for c in uniq], inv.ravel(), counts
    uniq, inv, counts = np.unique(rows, axis=0, return_inverse=True, return_counts=True)
    ids = []
    for row in uniq:
        v = 0
        for letter in row:
            v = (v << w) | (int(letter) - 1)
        ids.append(v + 1)
    return ids, inv.ravel(), counts


def pattern_letters(pid: int, size: int, alphabet: int) -> np.ndarray:
    """Inverse of :func:`pattern_ids` for a single id."""
    w = letter_width(alphabet)
    v = pid - 1
    out = np.empty(size, dtype=np.int64)
    mask = (1 << w) - 1
    for j in range(size - 1, -1, -1):
        out[j] = (v & mask) + 1
        v >>= w
    return out


def pattern_stats(word: Word, M, k: int, n: int, h=None) -> PatternStats:
    """Counts of the patterns ``x ↦ ω(x g h)`` on ``F_k`` over centers ``g ∈ I_{k,n}``."""
    G = M.group
    h = G.identity() if h is None else G.validate(h)
    centers = M.centers_in_window(k, n)
    rows = tile_rows(word, M.tile(k), centers.coords, h)
    ids, _, counts = pattern_ids(rows, word.alphabet)
    return PatternStats(k, h, tuple(ids), tuple(int(c) for c in counts))


def empirical_entropy(stats: PatternStats) -> float:
    """Shannon entropy in bits of the empirical pattern distribution."""
    total = stats.total
    if total <= 0:
        raise ValueError("no patterns counted")
    c = np.asarray(stats.counts, dtype=float) / total
    c = c[c > 0]
    return float(max(0.0, -(c * np.log2(c)).sum()))


def best_shift_entropy(word: Word, M, k: int, n: int):
    """``(h, value)`` minimizing the empirical entropy over ``h ∈ F_k^-1``;
    ties go to the smallest natural index."""
    best = None
    for h in M.tile(k).inverse().elements():
        v = empirical_entropy(pattern_stats(word, M, k, n, h))
        if best is None or v < best[1]:
            best = (h, v)
    return best


def weighted_average_triple(word: Word, M, k: int, n: int, m: int):
    """The three finite-n averages of the indicator of pattern ``m``:

    ``a1 = |F_k| · avg_{F_n} 1_{Z_k}(g) 1_m(g)``,
    ``a2 = avg_{F_n ∩ Z_k} 1_m(g)`` and
    ``a3 = avg_{I_{k,n}} 1_m(g)``, where ``1_m(g)`` tests whether the
    pattern ``x ↦ ω(xg)`` on ``F_k`` has id ``m``.
    """
    F, K = M.tile(n), M.tile(k)
    Zc = F.coords[M.center_mask(k, F.coords)]
    I = M.centers_in_window(k, n)

    def hits(centers):
        if len(centers) == 0:
            return 0
        ids, inv, counts = pattern_ids(tile_rows(word, K, centers), word.alphabet)
        return int(counts[ids.index(m)]) if m in ids else 0

    hz = hits(Zc)
    a1 = len(K) * hz / len(F)
    a2 = hz / len(Zc) if len(Zc) else 0.0
    a3 = hits(I.coords) / len(I) if len(I) else 0.0
    return a1, a2, a3


# --------------------------------------------------------------------------
# information and entropy

def information_value(model: SamplerModel, word: Word, F: WindowSet) -> float:
    """``-log2 μ([ω|F])`` for the cylinder of ``ω`` on ``F``, in bits."""
    letters = restrict(word, F).letters.astype(np.int64) - 1
    if model.kind == "bernoulli":
        p = np.asarray(model.probs, dtype=float)
        if (letters >= p.size).any():
            return float("inf")
        with np.errstate(divide="ignore"):
            return float(-np.log2(p[letters]).sum())
    if model.kind != "markov":
        raise UnsupportedModel(f"no exact cylinder measure for {model.kind!r} models")
    P = np.asarray(model.matrix, dtype=float)
    pi = np.asarray(model.stationary)
    if len(F) == 0:
        return 0.0
    if (letters >= P.shape[0]).any():
        return float("inf")
    axis = _line_axis(F.group)
    order, starts = _lines(F.coords, axis)
    pos = F.coords[order, axis]
    seq = letters[order]
    first = np.zeros(len(order), dtype=bool)
    first[starts[:-1]] = True
    steps = np.zeros(len(order), dtype=np.int64)
    steps[1:] = pos[1:] - pos[:-1]
    with np.errstate(divide="ignore"):
        total = -np.log2(pi[seq[first]]).sum()
        nxt = ~first
        gaps = steps[nxt]
        prev, cur = seq[np.flatnonzero(nxt) - 1], seq[nxt]
        unit = gaps == 1
        total += -np.log2(P[prev[unit], cur[unit]]).sum()
        for gap in np.unique(gaps[~unit]):
            Pg = np.linalg.matrix_power(P, int(gap))
            sel = gaps == gap
            total += -np.log2(Pg[prev[sel], cur[sel]]).sum()
    return float(total)


def smb_statistic(model: SamplerModel, word: Word, M, n: int) -> float:
    F = M.tile(n)
    return information_value(model, word, F) / len(F)


def true_entropy(model: SamplerModel) -> float:
    """Entropy of the model in bits per site."""
    if model.kind == "periodic":
        return 0.0
    if model.kind == "bernoulli":
        return _shannon(model.probs)
    P = np.asarray(model.matrix, dtype=float)
    return float(sum(pi * _shannon(row) for pi, row in zip(model.stationary, P)))


def _shannon(p) -> float:
    return float(-sum(x * log2(x) for x in p if x > 0))
