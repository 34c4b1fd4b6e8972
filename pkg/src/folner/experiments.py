"""Experiment orchestration: the Brudno rate experiment and the monotiling checks."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .codec import encode_freq
from .dynamics import (SamplerModel, empirical_entropy, pattern_stats, sample,
                       smb_statistic, true_entropy)
from .errors import ResourceLimit, UnsupportedModel
from .windows import WindowSet

CSV_VERSION = "# folner-brudno-csv v1"
CSV_FIELDS = ["n", "k", "sample", "code_bits", "sites", "rate", "pattern_entropy_per_site",
              "smb", "true_entropy"]


@dataclass(frozen=True)
class ExperimentConfig:
    group: str
    tiling: str
    model: SamplerModel
    ks: tuple
    ns: tuple
    samples: int
    seed: int = 0

    def __post_init__(self):
        if not self.ks or not self.ns:
            raise ValueError("k and n lists must be nonempty")
        if self.samples < 1:
            raise ValueError("samples must be >= 1")


@dataclass(frozen=True)
class ResultRow:
    n: int
    k: int
    sample: int
    code_bits: int
    sites: int
    pattern_entropy: float
    smb: float | None
    true_entropy: float

    @property
    def rate(self) -> float:
        return self.code_bits / self.sites


def brudno_rows(config: ExperimentConfig, M) -> list[ResultRow]:
    model = config.model.with_seed(config.seed)
    h = true_entropy(model)
    rows = []
    for n in config.ns:
        F = M.tile(n)
        for s in range(config.samples):
            w = sample(model, F, s)
            try:
                smb = smb_statistic(model, w, M, n)
            except UnsupportedModel:
                smb = None
            for k in config.ks:
                bits = len(encode_freq(w, k, M, n))
                pe = empirical_entropy(pattern_stats(w, M, k, n)) / M.tile_size(k)
                rows.append(ResultRow(n, k, s, bits, len(F), pe, smb, h))
    rows.sort(key=lambda r: (r.n, r.k, r.sample))
    return rows


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    buf.write(CSV_VERSION + "\n")
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(CSV_FIELDS)
    for r in rows:
        wr.writerow([r.n, r.k, r.sample, r.code_bits, r.sites, f"{r.rate:.6f}",
                     f"{r.pattern_entropy:.6f}", "" if r.smb is None else f"{r.smb:.6f}",
                     f"{r.true_entropy:.6f}"])
    return buf.getvalue()


def summary_lines(rows) -> list[str]:
    out = []
    for n in sorted({r.n for r in rows}):
        for k in sorted({r.k for r in rows if r.n == n}):
            sel = [r.rate for r in rows if r.n == n and r.k == k]
            out.append(f"n={n} k={k} mean_rate={np.mean(sel):.4f} "
                       f"true_entropy={rows[0].true_entropy:.4f}")
    return out


# --------------------------------------------------------------------------
# monotiling checks

def check_partition(M, n: int) -> list[str]:
    """Every element of ``F_{2n}`` lies in exactly one translate ``F_n z``."""
    G = M.group
    probe = M.tile(2 * n)
    F = M.tile(n)
    Finv = G.vinv(F.coords)
    errs = []
    exact = M.family != "utd"
    for g in probe.coords:
        cand = G.vmul(Finv, g)
        hits = int(M.center_mask(n, cand).sum())
        if hits != 1:
            errs.append(f"{tuple(int(x) for x in g)} lies in {hits} translates")
            break
        if exact:
            f, z = M.decompose(n, tuple(int(x) for x in g))
            if G.multiply(f, z) != tuple(int(x) for x in g) or f not in F or not M.is_center(n, z):
                errs.append(f"decompose failed at {tuple(int(x) for x in g)}")
                break
    return errs


def check_tile(M, n: int) -> list[str]:
    F = M.tile(n)
    errs = []
    if len(F) != M.tile_size(n):
        errs.append(f"|F_{n}| = {len(F)}, expected {M.tile_size(n)}")
    if M.group.identity() not in F:
        errs.append(f"identity missing from F_{n}")
    if len(F) > 1 and not (np.diff(F.index.astype(object)) > 0).all():
        errs.append(f"F_{n} is not sorted by natural index")
    return errs


def check_symmetry(M, n: int) -> list[str]:
    probe = M.tile(2 * n).coords
    a = M.center_mask(n, probe)
    b = M.center_mask(n, M.group.vinv(probe))
    return [] if np.array_equal(a, b) else [f"Z_{n} is not symmetric on F_{2 * n}"]


def check_density(M, k: int, n: int) -> list[str]:
    if M.family == "utd" or n % k:
        return []
    r = M.density_ratio(k, n)
    want = Fraction(1, M.tile_size(k))
    return [] if r == want else [f"density({k},{n}) = {r}, expected {want}"]


def check_defect(M, n_max: int) -> list[str]:
    G = M.group
    errs = []
    for idx in range(G.ncoords):
        gen = np.zeros((1, G.ncoords), dtype=np.int64)
        gen[0, idx] = 1
        K = WindowSet(G, gen)
        for side in ("left", "right"):
            vals = [M.folner_defect(n, K, side) for n in range(1, n_max + 1)]
            if any(b >= a for a, b in zip(vals, vals[1:])):
                errs.append(f"{side} defect for generator {idx} is not decreasing: {vals}")
    return errs


def check_tempered(M, count: int) -> list[str]:
    try:
        seq = M.tempered_subsequence(count)
    except AssertionError as exc:
        return [str(exc)]
    except ResourceLimit:
        return None
    return [f"ratio {i} = {M.temperedness_ratio(seq, i)}"
            for i in range(2, len(seq) + 1) if M.temperedness_ratio(seq, i) > 2]


def verify_report(M, n_max: int):
    """Yield ``(check name, error list)`` for the monotiling invariant suite.

    An error list of ``None`` marks a check skipped for lack of resources.
    """
    for n in range(1, n_max + 1):
        yield f"tile n={n}", check_tile(M, n)
    for n in range(1, n_max + 1):
        yield f"partition n={n}", check_partition(M, n)
        yield f"symmetry n={n}", check_symmetry(M, n)
    for k in range(1, n_max + 1):
        for n in range(k, n_max + 1):
            errs = check_density(M, k, n)
            if errs:
                yield f"density k={k} n={n}", errs
    yield "density", []
    if n_max >= 2:
        yield "defect", check_defect(M, n_max)
        yield "tempered", check_tempered(M, 2 if M.family == "utd" else 3)
