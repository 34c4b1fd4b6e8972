"""Bit-exact integer and word encodings.

Bit strings are Python ``str`` objects over ``'0'``/``'1'``, most
significant bit first.  Concatenation is string concatenation.
"""
from __future__ import annotations

import numpy as np

from .errors import CodecError, LengthMismatch, MalformedPair, Truncated

DELIM = "01"

_DOUBLE = str.maketrans({"0": "00", "1": "11"})


def encode_binary(n: int) -> str:
    if n < 0:
        raise ValueError("binary encoding needs n >= 0")
    return bin(n)[2:]


def decode_binary(bits: str) -> int:
    if not bits:
        raise Truncated("empty binary field")
    _check_bits(bits)
    return int(bits, 2)


def encode_doubling(n: int) -> str:
    """Each bit of ``bin(n)`` written twice; the delimiter is not included."""
    return encode_binary(n).translate(_DOUBLE)


def encode_delim() -> str:
    return DELIM


def decode_doubling(bits: str, pos: int = 0) -> tuple[int, int]:
    """Read doubled pairs from ``pos`` up to and including the delimiter.

    Returns ``(value, bits consumed)``.
    """
    end = pos
    out = []
    n = len(bits)
    while True:
        if end + 2 > n:
            raise Truncated(f"doubling run starting at bit {pos} is not terminated")
        pair = bits[end:end + 2]
        end += 2
        if pair == DELIM:
            break
        if pair == "00":
            out.append("0")
        elif pair == "11":
            out.append("1")
        else:
            raise MalformedPair(f"pair {pair!r} at bit {end - 2}")
    if not out:
        raise MalformedPair(f"empty doubling run at bit {pos}")
    return int("".join(out), 2), end - pos


def encode_prefix_free(n: int) -> str:
    """``doubling(l(bin n)) ⋄ bin n``."""
    b = encode_binary(n)
    return encode_doubling(len(b)) + DELIM + b


def decode_prefix_free(bits: str, pos: int = 0) -> tuple[int, int]:
    length, used = decode_doubling(bits, pos)
    start = pos + used
    if start + length > len(bits):
        raise Truncated(f"prefix-free integer needs {length} bits at {start}")
    body = bits[start:start + length]
    _check_bits(body)
    return int(body, 2), used + length


def letter_width(alphabet: int) -> int:
    """Bits per letter.  Letters are stored as ``letter - 1``, so
    ``ceil(log2 |Λ|)`` bits suffice (at least one)."""
    if alphabet < 1:
        raise ValueError("alphabet must be nonempty")
    return max(1, (alphabet - 1).bit_length())


def encode_word(letters, alphabet: int) -> str:
    """Fixed-width code of letters ``1..alphabet``; each letter becomes ``letter - 1`` in W bits."""
    a = np.asarray(letters, dtype=np.int64).ravel()
    if a.size == 0:
        return ""
    if a.min() < 1 or a.max() > alphabet:
        raise ValueError(f"letters must lie in 1..{alphabet}")
    w = letter_width(alphabet)
    shifts = np.arange(w - 1, -1, -1, dtype=np.int64)
    bits = ((a[:, None] - 1) >> shifts) & 1
    return (bits.astype(np.uint8) + ord("0")).tobytes().decode("ascii")


def decode_word(bits: str, count: int, alphabet: int) -> np.ndarray:
    w = letter_width(alphabet)
    if len(bits) != count * w:
        raise LengthMismatch(f"{len(bits)} bits do not hold {count} letters of width {w}")
    if count == 0:
        return np.zeros(0, dtype=np.uint8)
    raw = np.frombuffer(bits.encode("ascii"), dtype=np.uint8) - ord("0")
    if raw.max() > 1:
        raise CodecError("not a bit string")
    weights = 1 << np.arange(w - 1, -1, -1, dtype=np.int64)
    vals = raw.reshape(count, w).astype(np.int64) @ weights + 1
    if vals.max() > alphabet:
        raise CodecError(f"letter {int(vals.max())} outside alphabet of size {alphabet}")
    return vals.astype(np.uint8)


def canonical_index(values) -> int:
    """``Σ 2^x`` over a finite set of nonnegative integers."""
    return sum(1 << int(x) for x in set(values))


def _check_bits(bits: str):
    if bits.strip("01"):
        raise CodecError("not a bit string")


class BitReader:
    """Sequential cursor over a bit string."""

    def __init__(self, bits: str, pos: int = 0):
        self.bits = bits
        self.pos = pos

    @property
    def remaining(self) -> int:
        return len(self.bits) - self.pos

    def read(self, count: int) -> str:
        if self.pos + count > len(self.bits):
            raise Truncated(f"need {count} bits at {self.pos}, have {self.remaining}")
        out = self.bits[self.pos:self.pos + count]
        self.pos += count
        return out

    def expect(self, token: str, what: str = "delimiter"):
        got = self.read(len(token))
        if got != token:
            raise MalformedPair(f"expected {what} {token!r} at bit {self.pos - len(token)}, got {got!r}")

    def doubling(self) -> int:
        v, used = decode_doubling(self.bits, self.pos)
        self.pos += used
        return v

    def prefix_free(self) -> int:
        v, used = decode_prefix_free(self.bits, self.pos)
        self.pos += used
        return v

    def rest(self) -> str:
        out = self.bits[self.pos:]
        self.pos = len(self.bits)
        return out
