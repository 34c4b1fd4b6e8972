"""Hot numeric kernels, each with a numba and a numpy implementation.

The public names at module level dispatch to the numba versions unless
``FOLNER_DISABLE_NUMBA`` is set.  Both implementations are importable as
``kernels.NUMBA`` and ``kernels.NUMPY`` for testing and benchmarking.
"""
from types import SimpleNamespace

import numpy as np

from ._accel import HAVE_NUMBA, USE_NUMBA, njit

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_INT64_MAX = np.iinfo(np.int64).max


# --------------------------------------------------------------------------
# splitmix64 finalizer: counter-based RNG for per-site uniforms

def _splitmix64_np(x):
    z = np.asarray(x, dtype=np.uint64) + _GOLDEN
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


@njit
def _splitmix64_nb(x):
    out = np.empty(x.shape[0], dtype=np.uint64)
    for i in range(x.shape[0]):
        z = x[i] + np.uint64(0x9E3779B97F4A7C15)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        out[i] = z ^ (z >> np.uint64(31))
    return out


def _uniform_np(keys):
    return (_splitmix64_np(keys) >> np.uint64(11)).astype(np.float64) * (1.0 / 9007199254740992.0)


@njit
def _uniform_nb(keys):
    h = _splitmix64_nb(keys)
    out = np.empty(h.shape[0], dtype=np.float64)
    for i in range(h.shape[0]):
        out[i] = np.float64(h[i] >> np.uint64(11)) * (1.0 / 9007199254740992.0)
    return out


# --------------------------------------------------------------------------
# categorical draws: letter = 1 + #{j : cum[j] <= u}

def _categorical_np(u, cum):
    return (np.searchsorted(cum[:-1], u, side="right") + 1).astype(np.uint8)


@njit
def _categorical_nb(u, cum):
    out = np.empty(u.shape[0], dtype=np.uint8)
    last = cum.shape[0] - 1
    for i in range(u.shape[0]):
        j = 0
        while j < last and cum[j] <= u[i]:
            j += 1
        out[i] = j + 1
    return out


# --------------------------------------------------------------------------
# Markov chains along independent lines; u has shape (lines, length)

def _markov_lines_np(u, pi_cum, p_cum):
    lines, length = u.shape
    out = np.empty((lines, length), dtype=np.uint8)
    if length == 0:
        return out
    state = np.searchsorted(pi_cum[:-1], u[:, 0], side="right")
    out[:, 0] = state + 1
    a = p_cum.shape[0]
    for t in range(1, length):
        rows = p_cum[state]
        state = (rows[:, : a - 1] <= u[:, t : t + 1]).sum(axis=1)
        out[:, t] = state + 1
    return out


@njit
def _markov_lines_nb(u, pi_cum, p_cum):
    lines, length = u.shape
    out = np.empty((lines, length), dtype=np.uint8)
    a = pi_cum.shape[0]
    for r in range(lines):
        if length == 0:
            break
        s = 0
        while s < a - 1 and pi_cum[s] <= u[r, 0]:
            s += 1
        out[r, 0] = s + 1
        for t in range(1, length):
            nxt = 0
            while nxt < a - 1 and p_cum[s, nxt] <= u[r, t]:
                nxt += 1
            s = nxt
            out[r, t] = s + 1
    return out


# --------------------------------------------------------------------------
# fixed-width packing of letter rows into integer codes (rows*W <= 62 bits)

def _pack_codes_np(rows, width):
    k = rows.shape[1]
    shifts = (width * np.arange(k - 1, -1, -1)).astype(np.int64)
    vals = rows.astype(np.int64) - 1
    return (vals << shifts).sum(axis=1) if k else np.zeros(rows.shape[0], np.int64)


@njit
def _pack_codes_nb(rows, width):
    n, k = rows.shape
    out = np.zeros(n, dtype=np.int64)
    for i in range(n):
        acc = np.int64(0)
        for j in range(k):
            acc = (acc << width) | np.int64(rows[i, j] - 1)
        out[i] = acc
    return out


# --------------------------------------------------------------------------
# natural index of Z^c vectors: iterated Cantor pairing of 2|x| + [x >= 0]
# The caller guarantees the result fits in int64.

def _z_index_np(x):
    return 2 * np.abs(x) + (x >= 0)


def _cantor_index_np(coords):
    coords = np.asarray(coords, dtype=np.int64)
    acc = _z_index_np(coords[:, 0])
    for j in range(1, coords.shape[1]):
        b = _z_index_np(coords[:, j])
        s = acc + b
        acc = s * (s + 1) // 2 + b
    return acc


@njit
def _cantor_index_nb(coords):
    n, c = coords.shape
    out = np.empty(n, dtype=np.int64)
    for i in range(n):
        x = coords[i, 0]
        acc = 2 * abs(x) + (1 if x >= 0 else 0)
        for j in range(1, c):
            y = coords[i, j]
            b = 2 * abs(y) + (1 if y >= 0 else 0)
            s = acc + b
            acc = s * (s + 1) // 2 + b
        out[i] = acc
    return out


NUMPY = SimpleNamespace(
    splitmix64=_splitmix64_np,
    uniform=_uniform_np,
    categorical=_categorical_np,
    markov_lines=_markov_lines_np,
    pack_codes=_pack_codes_np,
    cantor_index=_cantor_index_np,
)

NUMBA = SimpleNamespace(
    splitmix64=_splitmix64_nb,
    uniform=_uniform_nb,
    categorical=_categorical_nb,
    markov_lines=_markov_lines_nb,
    pack_codes=_pack_codes_nb,
    cantor_index=_cantor_index_nb,
) if HAVE_NUMBA else None

ACTIVE = NUMBA if USE_NUMBA else NUMPY


def splitmix64(x):
    return ACTIVE.splitmix64(np.ascontiguousarray(x, dtype=np.uint64))


def uniform(keys):
    """Map uint64 counters to uniforms in [0, 1) with 53-bit resolution."""
    return ACTIVE.uniform(np.ascontiguousarray(keys, dtype=np.uint64))


def categorical(u, cum):
    return ACTIVE.categorical(np.ascontiguousarray(u, dtype=np.float64),
                              np.ascontiguousarray(cum, dtype=np.float64))


def markov_lines(u, pi_cum, p_cum):
    return ACTIVE.markov_lines(np.ascontiguousarray(u, dtype=np.float64),
                               np.ascontiguousarray(pi_cum, dtype=np.float64),
                               np.ascontiguousarray(p_cum, dtype=np.float64))


def pack_codes(rows, width):
    return ACTIVE.pack_codes(np.ascontiguousarray(rows, dtype=np.uint8), int(width))


def cantor_index(coords):
    return ACTIVE.cantor_index(np.ascontiguousarray(coords, dtype=np.int64))
