"""Binary containers: ``MTB1`` bit streams and ``MTW1`` word files.

``MTB1``: magic, u64 LE bit count, bits packed MSB first, zero padded.

``MTW1``: magic; u8 length + group token; u16 LE alphabet size; u8 support
kind, then either (kind 0) u8 length + tiling token + u64 LE tile index or
(kind 1) u64 LE count + natural indices as LEB128 varints; u64 LE letter
count; one byte per letter in natural-index order.
"""
from __future__ import annotations

import struct

import numpy as np

from .dynamics import Word
from .errors import CodecError, Truncated
from .groups import parse_group
from .monotiling import parse_monotiling
from .windows import WindowSet

MTB_MAGIC = b"MTB1"
MTW_MAGIC = b"MTW1"


class BadMagic(CodecError):
    """The file does not start with the expected magic bytes."""


def pack_bits(bits: str) -> bytes:
    n = len(bits)
    if n:
        raw = np.frombuffer(bits.encode("ascii"), dtype=np.uint8) - ord("0")
        if raw.max() > 1:
            raise CodecError("not a bit string")
        payload = np.packbits(raw).tobytes()
    else:
        payload = b""
    return MTB_MAGIC + struct.pack("<Q", n) + payload


def unpack_bits(data: bytes) -> str:
    if data[:4] != MTB_MAGIC:
        raise BadMagic("not an MTB1 bit stream")
    if len(data) < 12:
        raise Truncated("MTB1 header is incomplete")
    (n,) = struct.unpack_from("<Q", data, 4)
    payload = data[12:]
    if len(payload) * 8 < n:
        raise Truncated(f"MTB1 declares {n} bits, payload holds {len(payload) * 8}")
    bits = np.unpackbits(np.frombuffer(payload, dtype=np.uint8))[:n]
    return (bits + ord("0")).tobytes().decode("ascii")


def _leb128(values) -> bytes:
    out = bytearray()
    for v in values:
        v = int(v)
        while True:
            byte = v & 0x7F
            v >>= 7
            if v:
                out.append(byte | 0x80)
            else:
                out.append(byte)
                break
    return bytes(out)


class _Cursor:
    def __init__(self, data: bytes, pos: int):
        self.data, self.pos = data, pos

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise Truncated("MTW1 file ends early")
        out = self.data[self.pos:self.pos + n]
        self.pos += n
        return out

    def unpack(self, fmt: str):
        return struct.unpack(fmt, self.take(struct.calcsize(fmt)))[0]

    def varint(self) -> int:
        shift = v = 0
        while True:
            b = self.take(1)[0]
            v |= (b & 0x7F) << shift
            shift += 7
            if not b & 0x80:
                return v


def dump_word(word: Word, tiling=None) -> bytes:
    """Serialize; the support is written as a tile index when ``tiling`` is
    given and the support is that tiling's tile."""
    gtok = word.group.token.encode()
    out = [MTW_MAGIC, struct.pack("<B", len(gtok)), gtok, struct.pack("<H", word.alphabet)]
    n = getattr(word.support, "n", None)
    if tiling is not None and n is not None and tiling.tile(n) == word.support:
        ttok = tiling.token.encode()
        out += [b"\x00", struct.pack("<B", len(ttok)), ttok, struct.pack("<Q", n)]
    else:
        idx = word.support.index
        out += [b"\x01", struct.pack("<Q", len(idx)), _leb128(idx)]
    out += [struct.pack("<Q", len(word)), word.letters.astype(np.uint8).tobytes()]
    return b"".join(out)


def load_word(data: bytes, **tiling_kw):
    """Parse an MTW1 file; returns ``(word, monotiling or None)``."""
    if data[:4] != MTW_MAGIC:
        raise BadMagic("not an MTW1 word file")
    cur = _Cursor(data, 4)
    group = parse_group(cur.take(cur.unpack("<B")).decode())
    alphabet = cur.unpack("<H")
    kind = cur.unpack("<B")
    tiling = None
    if kind == 0:
        tiling = parse_monotiling(cur.take(cur.unpack("<B")).decode(), group, **tiling_kw)
        group = tiling.group
        support = tiling.tile(cur.unpack("<Q"))
    elif kind == 1:
        count = cur.unpack("<Q")
        elems = [group.element_at(cur.varint()) for _ in range(count)]
        support = WindowSet.from_elements(group, elems)
        if len(support) != count:
            raise CodecError("duplicate support indices")
    else:
        raise CodecError(f"unknown support kind {kind}")
    count = cur.unpack("<Q")
    if count != len(support):
        raise CodecError(f"{count} letters for a support of size {len(support)}")
    letters = np.frombuffer(cur.take(count), dtype=np.uint8)
    if cur.pos != len(data):
        raise CodecError("trailing bytes after MTW1 word")
    try:
        return Word(support, letters, alphabet), tiling
    except ValueError as exc:
        raise CodecError(str(exc)) from None
