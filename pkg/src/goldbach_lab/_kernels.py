"""Bit-parallel counting kernels (numba-compiled, GIL-released).

The partition count for an even 2k with odd-prime parts is a correlation of
the odd-prime indicator with its own reversal.  Packing the indicator into
64-bit words lets one AND + popcount handle 64 candidate pairs at a time;
the reversed copy is pre-shifted to all 64 bit offsets so that any
alignment reduces to a word-aligned AND.
"""

from __future__ import annotations

import numba
import numpy as np
from llvmlite import ir
from numba.extending import intrinsic


@intrinsic
def _popcount_u64(typingctx, value):
    """Population count of a uint64 via the LLVM ctpop intrinsic."""
    if value != numba.types.uint64:
        return None
    sig = numba.types.uint64(numba.types.uint64)

    def codegen(context, builder, signature, args):
        i64 = ir.IntType(64)
        fn = builder.module.declare_intrinsic("llvm.ctpop", [i64])
        return builder.call(fn, args)

    return sig, codegen


def pack_flag_words(flags: np.ndarray) -> np.ndarray:
    """Pack 0/1 uint8 flags into uint64 words, LSB-first, zero-padded.

    Padding with a full spare word keeps every shifted-window read in
    :func:`partition_counts_range` inside the array.
    """
    n_words = (flags.shape[0] + 63) // 64 + 1
    padded = np.zeros(n_words * 64, dtype=np.uint8)
    padded[: flags.shape[0]] = flags
    return np.packbits(padded, bitorder="little").view(np.uint64)


def shifted_reversed_words(flags: np.ndarray) -> np.ndarray:
    """All 64 bit-offset copies of the reversed flags, packed into words.

    Row s holds the reversed flag bitstream delayed by s bit positions, so
    a correlation at any alignment becomes a word-aligned AND against the
    forward words.  Shape: (64, n_words + 1).
    """
    rev = flags[::-1].copy()
    n_words = (rev.shape[0] + 63) // 64 + 1
    padded = np.zeros(n_words * 64, dtype=np.uint8)
    padded[: rev.shape[0]] = rev
    base = np.packbits(padded, bitorder="little").view(np.uint64)
    out = np.zeros((64, n_words + 1), dtype=np.uint64)
    out[0, :n_words] = base
    for s in range(1, 64):
        out[s, :n_words] = base << np.uint64(s)
        out[s, 1:n_words + 1] |= base >> np.uint64(64 - s)
    return out


@numba.njit(cache=True, nogil=True)
def partition_counts_range(flags, fwd_words, rev_shifted, n_slots, k_lo, k_hi, out):
    """Fill ``out[k - 3]`` with the partition count of 2k for k in [k_lo, k_hi).

    Args:
        flags: odd-prime indicator, slot i <-> odd value 3 + 2i.
        fwd_words: flags packed into uint64 words (LSB-first).
        rev_shifted: 64 pre-shifted packed copies of the reversed flags.
        n_slots: number of live flag slots (unpadded length).
        k_lo, k_hi: half-open k range; every k must satisfy 3 <= k and
            2k - 3 <= 3 + 2(n_slots - 1).
        out: int64 array indexed k - 3, written in place.

    The ordered-pair total for 2k sums flags[i] * flags[K - i] over
    i = 0..K with K = k - 3; reversal turns the second factor into the
    forward stream rev[off + i] at offset off = n_slots - 1 - K, and the
    two unordered orientations collapse via (ordered + diagonal) / 2.
    """
    for k in range(k_lo, k_hi):
        K = k - 3
        # rev[j] = flags[n_slots - 1 - j], so flags[K - i] = rev[off + i].
        # Row s is rev delayed by s bits; picking s = (-off) mod 64 lands
        # rev[off] exactly on a word boundary at word w0.
        off = n_slots - 1 - K
        s = (64 - (off & 63)) & 63
        w0 = (off + s) >> 6
        row = rev_shifted[s]
        n_read = (K >> 6) + 1
        total = numba.uint64(0)
        for w in range(n_read):
            total += _popcount_u64(fwd_words[w] & row[w0 + w])
        # Bits past K contribute nothing: rev's zero padding blanks them.
        ordered = int(total)
        if K % 2 == 0:
            diag = int(flags[K // 2])
        else:
            diag = 0
        out[K] = (ordered + diag) // 2
