from math import log2

import numpy as np
import pytest

from folner.bitcodes import BitReader, encode_binary, letter_width
from folner.codec import (complexity_upper, decode_freq, decode_raw, decode_reindex, decode_shift,
                          encode_freq, encode_raw, encode_reindex, encode_sequence, encode_shift,
                          freq_decoder, parse_freq, raw_decoder, reindex_permutation,
                          sequence_decoder, shift_remainder)
from folner.dynamics import Word, bernoulli, sample
from folner.errors import (LengthMismatch, RangeError, RankOutOfRange, SumMismatch, Truncated)
from folner.groups import Group
from folner.monotiling import Monotiling, parse_monotiling
from folner.ranking import multinomial_count
from folner.windows import WindowSet, product_set


# ---- oracles ---------------------------------------------------------------

def shifted_oracle(word, g, F):
    """(g·ω)|F evaluated pointwise from a dict."""
    G = word.group
    d = word.as_dict()
    return [d[G.multiply(x, g)] for x in F.elements()]


def replace_field(bits, alphabet, **changes):
    """Rebuild a frequency program with some parsed fields replaced."""
    from folner.bitcodes import encode_doubling, encode_prefix_free, encode_word
    p = parse_freq(bits, alphabet)
    ids = changes.get("ids", p.table.ids)
    counts = changes.get("counts", p.table.counts)
    rem = changes.get("remainder", p.remainder)
    rank = changes.get("rank", p.rank)
    out = encode_doubling(p.s) + "01" + encode_doubling(p.t) + "01" + encode_prefix_free(len(ids))
    for i, c in zip(ids, counts):
        out += encode_prefix_free(i) + encode_prefix_free(c)
    out += "0101" + encode_doubling(len(rem)) + "01" + encode_word(rem, alphabet) + "01"
    return out + encode_binary(rank)


ZD1 = Monotiling(Group("zd", 1), "zd-cubes")
ZD2 = Monotiling(Group("zd", 2), "zd-cubes")
HEIS = Monotiling(Group("ut", 3), "heis3")
UTD = parse_monotiling("utd:p=2", Group("ut", 3))


def word_on(M, n, letters):
    F = M.tile(n)
    return Word(F, np.asarray(letters), max(2, int(np.max(letters))))


# ---- frequency codec ---------------------------------------------------------

def test_constant_word():
    w = word_on(ZD1, 8, [1] * 8)
    bits = encode_freq(w, 2, ZD1)
    p = parse_freq(bits, 2)
    assert len(p.table.ids) == 1 and p.rank == 0 and bits.endswith("01" + "0")
    assert len(bits) < 60
    assert decode_freq(bits, ZD1, 2) == w


def test_alternating_word():
    letters = [1 if x % 2 == 0 else 2 for x in range(8)]
    w = word_on(ZD1, 8, letters)
    p = parse_freq(encode_freq(w, 2, ZD1), 2)
    # centers 2, 4, 6 carry tiles [2,3], [4,5], [6,7], all reading (1, 2)
    assert p.table.ids == (0b01 + 1,) and p.table.counts == (3,) and p.rank == 0
    assert list(p.remainder) == [1, 2]


CONFIGS = [(ZD1, k, n) for k in (1, 2, 3) for n in (4, 8, 16)] + \
          [(ZD2, k, n) for k in (1, 2, 3) for n in (4, 8)] + \
          [(HEIS, k, n) for k in (1, 2) for n in (2, 4)] + [(UTD, 1, 1), (UTD, 1, 2)]


@pytest.mark.parametrize("M,k,n", CONFIGS)
def test_round_trip_many_words(M, k, n):
    rng = np.random.default_rng(hash((M.token, k, n)) % 2 ** 32)
    F = M.tile(n)
    for i in range(200 if len(F) <= 256 else 40):
        a = int(rng.integers(2, 5))
        w = Word(F, rng.integers(1, a + 1, len(F)), a)
        assert decode_freq(encode_freq(w, k, M), M, a) == w


def test_code_length_equals_field_sum():
    rng = np.random.default_rng(1)
    for M, k, n in [(ZD2, 2, 8), (HEIS, 2, 4), (ZD1, 3, 16)]:
        F = M.tile(n)
        w = Word(F, rng.integers(1, 4, len(F)), 3)
        bits = encode_freq(w, k, M)
        p = parse_freq(bits, 3)
        assert sum(p.fields.values()) == len(bits)
        assert p.fields["rank"] == len(encode_binary(p.rank))
        assert p.fields["rank"] <= log2(multinomial_count(p.table.counts)) + 1
        assert p.fields["remainder"] >= p.r * letter_width(3)


def test_decode_guards():
    F = ZD2.tile(8)
    w = Word(F, np.random.default_rng(2).integers(1, 3, len(F)), 2)
    bits = encode_freq(w, 2, ZD2)
    p = parse_freq(bits, 2)
    counts = list(p.table.counts)
    counts[0] += 1
    with pytest.raises(SumMismatch):
        decode_freq(replace_field(bits, 2, counts=tuple(counts)), ZD2, 2)
    with pytest.raises(RankOutOfRange):
        decode_freq(replace_field(bits, 2, rank=multinomial_count(p.table.counts)), ZD2, 2)
    with pytest.raises(LengthMismatch):
        decode_freq(replace_field(bits, 2, remainder=p.remainder[:-1]), ZD2, 2)
    with pytest.raises(Truncated):
        decode_freq(bits[:40], ZD2, 2)
    assert decode_freq(replace_field(bits, 2), ZD2, 2) == w


def test_rate_upper_bounds():
    big = ZD2.tile(256)
    assert complexity_upper(Word(big, np.ones(len(big)), 2), ZD2, [2, 4]) <= 0.05
    F = ZD2.tile(64)
    w = sample(bernoulli(0.5, 0.5, seed=3), F)
    # k = 1: rank of the letters plus a header of O(log |F|) bits
    assert complexity_upper(w, ZD2, [1]) <= 1 + (8 * log2(len(F)) + 64) / len(F)


@pytest.mark.parametrize("M,n,g", [(ZD1, 64, (1,)), (ZD2, 16, (0, 1)), (HEIS, 4, (1, 0, 0))])
def test_shift_invariance_at_desk_scale(M, n, g):
    G = M.group
    F = M.tile(n)
    support = product_set(G, F, WindowSet.from_elements(G, [G.identity(), g]))
    gs = WindowSet.from_elements(G, [g])
    sym = len(F) + len(product_set(G, F, gs.inverse())) - 2 * int(
        F.contains(product_set(G, F, gs.inverse()).coords).sum())
    for seed in range(10):
        w = sample(bernoulli(0.5, 0.5, seed=seed), support)
        base = Word(F, w.values_at(F.coords), 2)
        moved = Word(F, shifted_oracle(w, g, F), 2)
        diff = abs(complexity_upper(base, M, [1, 2]) - complexity_upper(moved, M, [1, 2]))
        assert diff <= (sym * 1 + 4 * log2(len(F)) + 64) / len(F)


# ---- shift codec ---------------------------------------------------------------

def test_identity_shift():
    w = sample(bernoulli(0.5, 0.5, seed=1), ZD2.tile(5))
    p = encode_raw(w, ZD2, 5)
    bits = encode_shift(p, (0, 0), w, 5, ZD2)
    assert BitReader(bits).doubling() == 0
    assert decode_shift(bits, ZD2, raw_decoder(ZD2, 2), 2) == w


def test_shift_remainder_example():
    assert shift_remainder(ZD1, 6, (1,)).elements() == [(5,)]
    assert shift_remainder(ZD1, 6, (-2,)).elements() == [(0,), (1,)]


@pytest.mark.parametrize("M,n,g", [(ZD1, 6, (1,)), (ZD1, 9, (-4,)), (ZD2, 4, (1, -2)),
                                   (HEIS, 2, (1, 0, 0)), (HEIS, 3, (-1, 2, 1)), (UTD, 1, (1, 1, 0))])
def test_shift_round_trip(M, n, g):
    G = M.group
    F = M.tile(n)
    support = product_set(G, F, WindowSet.from_elements(G, [G.identity(), g]))
    for seed in range(20):
        w = sample(bernoulli(0.3, 0.7, seed=seed), support)
        inner = Word(F, w.values_at(F.coords), 2)
        for enc, dec in ((encode_raw(inner, M, n), raw_decoder(M, 2)),
                         (encode_freq(inner, 1, M), freq_decoder(M, 2))):
            out = decode_shift(encode_shift(enc, g, w, n, M), M, dec, 2)
            assert list(out.letters) == shifted_oracle(w, g, F)


def test_shift_guards():
    G = ZD1.group
    support = WindowSet(G, np.arange(0, 10)[:, None])
    w = sample(bernoulli(0.5, 0.5), support)
    inner = Word(ZD1.tile(6), w.values_at(ZD1.tile(6).coords), 2)
    bits = encode_shift(encode_raw(inner, ZD1, 6), (2,), w, 6, ZD1)
    # a well-formed program that lists three boundary letters where g = 2 needs two
    inner_bits = encode_raw(inner, ZD1, 6)
    tampered = "1111" + "01" + "011" + "01" + "1100" + "01" + "11" + "00" + "11" + "01" + inner_bits
    assert bits.endswith(inner_bits) and ZD1.group.index_of((2,)) == 0b101
    with pytest.raises(LengthMismatch):
        decode_shift(tampered, ZD1, raw_decoder(ZD1, 2), 2)
    short = Word(ZD1.tile(2), [1, 1], 2)
    with pytest.raises(RangeError):
        decode_shift(bits, ZD1, lambda _: short, 2)


def test_shift_overhead_bound():
    G = ZD1.group
    for n in (1, 5, 64):
        support = WindowSet(G, np.arange(-20, n + 20)[:, None])
        w = sample(bernoulli(0.5, 0.5), support)
        inner = Word(ZD1.tile(n), w.values_at(ZD1.tile(n).coords), 2)
        p = encode_raw(inner, ZD1, n)
        for m in range(1, 17):
            g = G.element_at(m)
            D = shift_remainder(ZD1, n, g)
            over = len(encode_shift(p, g, w, n, ZD1)) - len(p)
            logD = 2 * log2(len(D)) if len(D) else 0
            assert over <= len(D) + logD + 2 * log2(n) + 2 * log2(m) + 64


# ---- reindexing codec -------------------------------------------------------------

def test_reindex_identity_and_reversal():
    F = ZD1.tile(4)
    letters = [1, 2, 2, 1]
    p = encode_sequence(letters[::-1], 2)
    ident = reindex_permutation(F, ZD1.group.index_of)
    assert list(ident) == [0, 1, 2, 3]
    out = decode_reindex(encode_reindex(encode_sequence(letters, 2), 4), ZD1,
                         sequence_decoder(2), lambda l: ident, 2)
    assert list(out.letters) == letters
    rev = reindex_permutation(F, lambda g: -g[0])
    assert list(rev) == [3, 2, 1, 0]
    out = decode_reindex(encode_reindex(p, 4), ZD1, sequence_decoder(2), lambda l: rev, 2)
    assert list(out.letters) == letters


def test_reindex_random_permutation_matches_oracle():
    M = HEIS
    F = M.tile(2)
    rng = np.random.default_rng(4)
    keys = {g: float(rng.random()) for g in F.elements()}
    phi = reindex_permutation(F, keys.__getitem__)
    word = {g: int(rng.integers(1, 4)) for g in F.elements()}
    alt_order = sorted(F.elements(), key=keys.__getitem__)
    p = encode_sequence([word[g] for g in alt_order], 3)
    bits = encode_reindex(p, 2)
    out = decode_reindex(bits, M, sequence_decoder(3), lambda l: phi, 3)
    assert out.as_dict() == word
    assert len(bits) - len(p) <= 2 * log2(2) + 4


def test_reindex_length_mismatch():
    p = encode_sequence([1, 2, 1], 2)
    with pytest.raises(LengthMismatch):
        decode_reindex(encode_reindex(p, 4), ZD1, sequence_decoder(2), lambda l: np.arange(4), 2)


def test_raw_round_trip():
    w = sample(bernoulli(0.2, 0.3, 0.5, seed=9), HEIS.tile(3))
    assert decode_raw(encode_raw(w, HEIS, 3), HEIS, 3) == w
