"""Exact Goldbach partition counts Q(2k) over odd primes.

Q(2k) counts unordered pairs of odd primes (p, q), p <= q, with
p + q = 2k.  The table form stores Q(2k) for every k in (2, n], which is
the raw material for all distributions downstream.
"""

from __future__ import annotations

import hashlib
import math
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import CacheError
from .sieve import PrimeFlags

_CACHE_MAGIC = b"GBQT1"

_COUNT_DTYPE = np.uint32


@dataclass(frozen=True)
class PartitionTable:
    """Partition counts Q(2k) for k = 3, 4, ..., n.

    Attributes:
        n: Inclusive upper bound of the key range; keys are k in (2, n].
        q: int64 array of length n - 2; q[k - 3] = Q(2k).
        total: Sum of all counts (the number of partitions across the
            whole table).
    """

    n: int
    q: np.ndarray
    total: int

    def count(self, k: int) -> int:
        """Q(2k) for a single key k in (2, n]."""
        if not 2 < k <= self.n:
            raise IndexError(f"k={k} outside table range (2, {self.n}]")
        return int(self.q[k - 3])


def count_partitions(flags: PrimeFlags, two_k: int) -> int:
    """Q(two_k) by direct scan of the odd-prime flags.

    Walks p over odd values 3 <= p <= two_k / 2 and counts the cases
    where both p and two_k - p are prime.  Exact and independent of the
    packed-word kernel, so it doubles as its cross-check.

    Raises:
        ValueError: two_k odd or <= 4.
        IndexError: two_k exceeds the sieved range.
    """
    if two_k % 2 != 0:
        raise ValueError(f"partition argument must be even, got {two_k}")
    if two_k <= 4:
        raise ValueError(f"partition argument must exceed 4, got {two_k}")
    if two_k - 3 > flags.limit:
        raise IndexError(
            f"two_k={two_k} needs flags up to {two_k - 3}, have {flags.limit}"
        )
    half = two_k // 2
    lo_slots = (half - 1) // 2  # odd p with 3 <= p <= half
    p_flags = flags.flags[:lo_slots]
    # complement of odd p is two_k - p, also odd; its slot is
    # (two_k - p - 3) // 2 = (two_k - 6) // 2 - (p - 3) // 2.
    top = (two_k - 6) // 2
    stop = top - lo_slots
    c_flags = flags.flags[top:(stop if stop >= 0 else None):-1]
    return int(np.count_nonzero(p_flags & c_flags))


def _chunk_bounds(n: int, parts: int) -> list[int]:
    """k-range boundaries giving each chunk comparable popcount work.

    The cost of key k grows linearly in k, so equal-work boundaries are
    spaced uniformly in k**2.
    """
    lo, hi = 3, n + 1
    bounds = [lo]
    for j in range(1, parts):
        b = int(math.sqrt(lo * lo + (hi * hi - lo * lo) * j / parts))
        bounds.append(min(max(b, bounds[-1]), hi))
    bounds.append(hi)
    return bounds


def build_partition_table(flags: PrimeFlags, n: int, workers: int = 1) -> PartitionTable:
    """Tabulate Q(2k) for all k in (2, n].

    Args:
        flags: odd-prime flags covering at least 2n - 3.
        n: upper key bound, >= 3.
        workers: worker threads; the k-range is split into contiguous
            chunks, so the result is identical for any worker count.

    Returns:
        PartitionTable with q[k - 3] = Q(2k) and the grand total.

    Raises:
        ValueError: n < 3 or workers < 1.
        IndexError: flags do not cover 2n - 3.
    """
    if n < 3:
        raise ValueError(f"n must be >= 3, got {n}")
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    if 2 * n - 3 > flags.limit:
        raise IndexError(f"n={n} needs flags up to {2 * n - 3}, have {flags.limit}")

    fwd = _kernels.pack_flag_words(flags.flags)
    rev = _kernels.shifted_reversed_words(flags.flags)
    n_slots = flags.flags.shape[0]
    out = np.zeros(n - 2, dtype=np.int64)

    if workers == 1:
        _kernels.partition_counts_range(flags.flags, fwd, rev, n_slots, 3, n + 1, out)
    else:
        bounds = _chunk_bounds(n, workers)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(
                    _kernels.partition_counts_range,
                    flags.flags, fwd, rev, n_slots, bounds[j], bounds[j + 1], out,
                )
                for j in range(workers)
                if bounds[j] < bounds[j + 1]
            ]
            for fut in futures:
                fut.result()

    return PartitionTable(n=n, q=out, total=int(out.sum()))


def total_partitions(table: PartitionTable) -> int:
    """Number of partitions summed over every key of the table."""
    return table.total


def zero_partition_census(table: PartitionTable) -> np.ndarray:
    """All even numbers 2k, k in (2, n], with no odd-prime partition."""
    return 2 * (3 + np.flatnonzero(table.q == 0).astype(np.int64))


def save_partition_table(table: PartitionTable, path: str) -> None:
    """Write the table as a versioned count dump.

    Layout: magic "GBQT1", n (8-byte LE), the n - 2 counts as 4-byte LE
    integers, the total (8-byte LE), then an 8-byte checksum of the count
    bytes.
    """
    counts = table.q.astype(_COUNT_DTYPE)
    if not np.array_equal(counts, table.q):
        raise ValueError("partition counts exceed the 32-bit cache format")
    payload = counts.astype("<u4").tobytes()
    digest = hashlib.blake2b(payload, digest_size=8).digest()
    with open(path, "wb") as fh:
        fh.write(_CACHE_MAGIC)
        fh.write(struct.pack("<Q", table.n))
        fh.write(payload)
        fh.write(struct.pack("<Q", table.total))
        fh.write(digest)


def load_partition_table(path: str) -> PartitionTable:
    """Read a table written by :func:`save_partition_table`.

    Raises:
        CacheError: bad magic, truncated file, checksum mismatch, or a
            stored total that disagrees with the stored counts.
    """
    with open(path, "rb") as fh:
        blob = fh.read()
    head = len(_CACHE_MAGIC) + 8
    if len(blob) < head + 16 or not blob.startswith(_CACHE_MAGIC):
        raise CacheError(f"{path}: not a partition-table cache")
    (n,) = struct.unpack_from("<Q", blob, len(_CACHE_MAGIC))
    payload_len = (n - 2) * 4
    if len(blob) != head + payload_len + 16:
        raise CacheError(f"{path}: length inconsistent with n={n}")
    payload = blob[head:head + payload_len]
    total, = struct.unpack_from("<Q", blob, head + payload_len)
    digest = blob[head + payload_len + 8:]
    if hashlib.blake2b(payload, digest_size=8).digest() != digest:
        raise CacheError(f"{path}: checksum mismatch")
    q = np.frombuffer(payload, dtype="<u4").astype(np.int64)
    if int(q.sum()) != total:
        raise CacheError(f"{path}: stored total {total} != sum of counts")
    return PartitionTable(n=int(n), q=q, total=int(total))
