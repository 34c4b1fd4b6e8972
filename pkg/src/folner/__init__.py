"""Følner monotilings, bit codes and compression decompressors for
symbolic dynamics over Z^d and UT(d, Z)."""

from .groups import Group, parse_group
from .windows import WindowSet, product_set
from .monotiling import (Monotiling, Tile, parse_monotiling, k_boundary_left, k_boundary_right,
                         k_interior_left, k_interior_right)
from .dynamics import (Word, SamplerModel, act, restrict, sample, bernoulli, markov, periodic,
                       parse_model, pattern_stats, empirical_entropy, best_shift_entropy,
                       weighted_average_triple, information_value, smb_statistic, true_entropy,
                       padded_window)
from .codec import (encode_freq, decode_freq, encode_shift, decode_shift, encode_raw, decode_raw,
                    encode_reindex, decode_reindex, complexity_upper)
from .ranking import (FrequencyTable, multinomial_count, rank_pattern_seq, unrank_pattern_seq)

__all__ = [
    "Group", "parse_group", "WindowSet", "product_set", "Monotiling", "Tile", "parse_monotiling",
    "k_boundary_left", "k_boundary_right", "k_interior_left", "k_interior_right",
    "Word", "SamplerModel", "act", "restrict", "sample", "bernoulli", "markov", "periodic",
    "parse_model", "pattern_stats", "empirical_entropy", "best_shift_entropy",
    "weighted_average_triple", "information_value", "smb_statistic", "true_entropy",
    "padded_window", "encode_freq", "decode_freq", "encode_shift", "decode_shift", "encode_raw",
    "decode_raw", "encode_reindex", "decode_reindex", "complexity_upper", "FrequencyTable",
    "multinomial_count", "rank_pattern_seq", "unrank_pattern_seq",
]
