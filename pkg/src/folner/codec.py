"""Executable decompressors: the tile-frequency codec, the shift codec,
the re-indexing codec and a raw fixed-width codec.

Program layouts (bit strings, MSB first; ``x̄`` doubling, ``x̂`` prefix-free,
``x̲`` binary, ``⋄`` the delimiter ``01``):

* frequency: ``s̄⋄ t̄⋄ count̂ (pid̂ cnt̂)* ⋄⋄ r̄⋄ w ⋄ N̲``
* shift:     ``s̄⋄ w ⋄ n̄⋄ m̄⋄ p``
* reindex:   ``l̄⋄ p``
* raw:       ``n̄⋄ w``
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bitcodes import (DELIM, BitReader, encode_binary, encode_doubling, encode_prefix_free,
                       encode_word, decode_word, letter_width)
from .dynamics import Word, pattern_ids, pattern_letters, tile_rows
from .errors import (LengthMismatch, MalformedProgram, RangeError, RankOutOfRange,
                     SumMismatch, Truncated)
from .ranking import FrequencyTable, rank_sequence, unrank_sequence
from .windows import WindowSet, product_set


def _field(n: int) -> str:
    return encode_doubling(n) + DELIM


def _word_on(word: Word, F: WindowSet) -> np.ndarray:
    return word.values_at(F.coords)


# --------------------------------------------------------------------------
# tile-frequency codec

@dataclass(frozen=True)
class FreqProgram:
    s: int
    t: int
    table: FrequencyTable
    remainder: np.ndarray
    rank: int
    fields: dict

    @property
    def r(self) -> int:
        return int(self.remainder.shape[0])


def _tiling_layout(M, k: int, n: int):
    """Centers ``I_{k,n}`` and the remainder ``F_n \\ Δ`` (both sorted)."""
    F = M.tile(n)
    I = M.centers_in_window(k, n)
    delta = product_set(M.group, M.tile(k), I, cap=M.cap)
    rest = F.subset(~delta.contains(F.coords))
    return F, I, rest


def encode_freq(word: Word, k: int, M, n: int | None = None) -> str:
    """Frequency program for ``ω|F_n``.

    ``n`` defaults to the tile index of the word's support when the support
    is itself a tile of ``M``.
    """
    if n is None:
        n = getattr(word.support, "n", None)
        if n is None:
            raise ValueError("pass n when the support is not a tile")
    if M.tile_size(k) > M.tile_size(n):
        raise ValueError("inner tile larger than outer tile")
    F, I, rest = _tiling_layout(M, k, n)
    K = M.tile(k)
    rows = tile_rows(word, K, I.coords)
    ids, inv, counts = pattern_ids(rows, word.alphabet)
    head = [_field(k), _field(n), encode_prefix_free(len(ids))]
    for pid, c in zip(ids, counts):
        head.append(encode_prefix_free(pid))
        head.append(encode_prefix_free(int(c)))
    head.append(DELIM + DELIM)
    N = rank_sequence(inv, counts) if len(ids) else 0
    rem = word.values_at(rest.coords)
    return "".join(head) + _field(len(rest)) + encode_word(rem, word.alphabet) + DELIM \
        + encode_binary(N)


def parse_freq(bits: str, alphabet: int) -> FreqProgram:
    """Split a frequency program into its fields (no group computation)."""
    rd = BitReader(bits)
    fields = {}
    start = rd.pos
    s = rd.doubling()
    t = rd.doubling()
    fields["s,t"] = rd.pos - start
    start = rd.pos
    count = rd.prefix_free()
    ids, cnts = [], []
    for _ in range(count):
        ids.append(rd.prefix_free())
        cnts.append(rd.prefix_free())
    rd.expect(DELIM + DELIM, "pattern table terminator")
    fields["table"] = rd.pos - start
    start = rd.pos
    r = rd.doubling()
    w = letter_width(alphabet)
    rem = decode_word(rd.read(r * w), r, alphabet)
    rd.expect(DELIM)
    fields["remainder"] = rd.pos - start
    tail = rd.rest()
    if not tail:
        raise Truncated("missing rank field")
    if tail.strip("01"):
        raise MalformedProgram("rank field is not binary")
    fields["rank"] = len(tail)
    if s < 1 or t < 1:
        raise MalformedProgram("tile indices must be >= 1")
    return FreqProgram(s, t, FrequencyTable(s, tuple(ids), tuple(cnts)), rem, int(tail, 2), fields)


def decode_freq(bits: str, M, alphabet: int) -> Word:
    """Reconstruct ``ω|F_t`` from a frequency program."""
    prog = parse_freq(bits, alphabet)
    k, n = prog.s, prog.t
    table = prog.table
    K = M.tile(k)
    limit = 1 << (letter_width(alphabet) * len(K))
    if table.ids and table.ids[-1] > limit:
        raise MalformedProgram(f"pattern id {table.ids[-1]} exceeds {limit}")
    F, I, rest = _tiling_layout(M, k, n)
    if table.total != len(I):
        raise SumMismatch(f"frequencies sum to {table.total}, window has {len(I)} centers")
    if prog.r != len(rest):
        raise LengthMismatch(f"remainder has {prog.r} letters, F_t minus the tiles has {len(rest)}")
    if prog.rank >= table.multinomial():
        raise RankOutOfRange("rank is not below the multinomial count")
    seq = unrank_sequence(prog.rank, table.counts) if len(I) else []
    letters = np.zeros(len(F), dtype=np.uint8)
    if len(I):
        pats = np.stack([pattern_letters(pid, len(K), alphabet) for pid in table.ids])
        pts = M.group.vmul(K.coords[None, :, :], I.coords[:, None, :])
        letters[F.positions(pts).ravel()] = pats[np.asarray(seq)].ravel()
    letters[F.positions(rest.coords)] = prog.remainder
    return Word(F, letters, alphabet)


def freq_decoder(M, alphabet: int):
    return lambda bits: decode_freq(bits, M, alphabet)


def complexity_upper(word: Word, M, k_grid, n: int | None = None) -> float:
    """Best frequency-codec rate in bits per site over ``k_grid``."""
    if n is None:
        n = word.support.n
    size = M.tile_size(n)
    return min(len(encode_freq(word, k, M, n)) for k in k_grid) / size


# --------------------------------------------------------------------------
# raw codec

def encode_raw(word: Word, M, n: int) -> str:
    return _field(n) + encode_word(_word_on(word, M.tile(n)), word.alphabet)


def decode_raw(bits: str, M, alphabet: int) -> Word:
    rd = BitReader(bits)
    n = rd.doubling()
    F = M.tile(n)
    letters = decode_word(rd.rest(), len(F), alphabet)
    return Word(F, letters, alphabet)


def raw_decoder(M, alphabet: int):
    return lambda bits: decode_raw(bits, M, alphabet)


# --------------------------------------------------------------------------
# shift codec

def shift_remainder(M, n: int, g) -> WindowSet:
    """``D = {x ∈ F_n : xg ∉ F_n}``."""
    F = M.tile(n)
    moved = M.group.vmul(F.coords, np.asarray(g, dtype=np.int64))
    return F.subset(~F.contains(moved))


def encode_shift(p: str, g, word: Word, n: int, M) -> str:
    """Program for ``(g·ω)|F_n`` from a program ``p`` for ``ω|F_n``.

    ``word`` must carry letters on ``F_n ∪ F_n g``.
    """
    G = M.group
    g = G.validate(g)
    D = shift_remainder(M, n, g)
    ups = word.values_at(G.vmul(D.coords, np.asarray(g, dtype=np.int64)))
    return (_field(len(D)) + encode_word(ups, word.alphabet) + DELIM
            + _field(n) + _field(G.index_of(g)) + p)


def decode_shift(bits: str, M, base_decoder, alphabet: int) -> Word:
    G = M.group
    rd = BitReader(bits)
    s = rd.doubling()
    ups = decode_word(rd.read(s * letter_width(alphabet)), s, alphabet)
    rd.expect(DELIM)
    n = rd.doubling()
    m = rd.doubling()
    g = G.element_at(m)
    F = M.tile(n)
    D = shift_remainder(M, n, g)
    if len(D) != s:
        raise LengthMismatch(f"program lists {s} boundary letters, the shift needs {len(D)}")
    base = base_decoder(rd.rest())
    inner = base.letters
    keep = F.subset(~D.contains(F.coords))
    src = F.positions(G.vmul(keep.coords, np.asarray(g, dtype=np.int64)))
    if src.size and src.max() >= inner.shape[0]:
        raise RangeError("inner word is too short for the shifted positions")
    letters = np.zeros(len(F), dtype=np.uint8)
    letters[F.positions(keep.coords)] = inner[src]
    letters[F.positions(D.coords)] = ups
    return Word(F, letters, alphabet)


# --------------------------------------------------------------------------
# re-indexing codec

def reindex_permutation(tile: WindowSet, index_fn) -> np.ndarray:
    """``φ`` with ``φ[i]`` the position of the i-th tile element (natural
    order) in the order induced by ``index_fn``."""
    keys = [index_fn(g) for g in tile.elements()]
    order = sorted(range(len(keys)), key=keys.__getitem__)
    phi = np.empty(len(keys), dtype=np.int64)
    phi[order] = np.arange(len(keys))
    return phi


def encode_reindex(p: str, l: int) -> str:
    return _field(l) + p


def decode_reindex(bits: str, M, base_decoder, permutation, alphabet: int) -> Word:
    """Decode ``l̄⋄ p``: the word of ``p`` is read in the alternative order and
    returned on ``F_l`` in natural order.  ``permutation(l)`` gives ``φ``."""
    rd = BitReader(bits)
    l = rd.doubling()
    inner = base_decoder(rd.rest()).letters
    F = M.tile(l)
    if inner.shape[0] != len(F):
        raise LengthMismatch(f"inner word has {inner.shape[0]} letters, |F_l| = {len(F)}")
    phi = np.asarray(permutation(l), dtype=np.int64)
    return Word(F, inner[phi], alphabet)


def sequence_decoder(alphabet: int):
    """Base decoder for a bare letter sequence ``count̂ w`` without a support."""
    def dec(bits):
        rd = BitReader(bits)
        count = rd.prefix_free()
        letters = decode_word(rd.rest(), count, alphabet)
        return _Bare(letters)
    return dec


def encode_sequence(letters, alphabet: int) -> str:
    letters = np.asarray(letters)
    return encode_prefix_free(int(letters.shape[0])) + encode_word(letters, alphabet)


class _Bare:
    def __init__(self, letters):
        self.letters = letters
