"""Odd-prime indicator over [3, limit] with segmented construction.

The indicator is the queryable form of the odd-prime sequence 3, 5, 7, 11, ...
Storage covers odd integers only: odd m maps to slot (m - 3) // 2.  The
number 2 is deliberately not a member; partition counting in this package
uses odd primes exclusively, so 4 = 2 + 2 never counts.
"""

from __future__ import annotations

import hashlib
import math
import struct
from dataclasses import dataclass

import numpy as np

from .errors import CacheError, CapacityError

# Odd slots per construction segment; keeps the working set cache-friendly.
DEFAULT_SEGMENT_ODDS = 1 << 18

# Largest supported sieve limit (flag slots must stay addressable and sane).
LIMIT_CAPACITY = 1 << 34

_CACHE_MAGIC = b"GBPF1"


@dataclass(frozen=True)
class PrimeFlags:
    """Immutable odd-prime membership flags for [3, limit].

    Attributes:
        limit: Inclusive upper bound of the sieved range (>= 2).
        flags: uint8 array of 0/1, one slot per odd integer 3, 5, ..., where
            odd m occupies index (m - 3) // 2.  Marked read-only.
        prime_count: Number of odd primes <= limit.
    """

    limit: int
    flags: np.ndarray
    prime_count: int

    def odd_slots(self) -> int:
        return self.flags.shape[0]


def _odd_slot_count(limit: int) -> int:
    # odds 3, 5, ..., <= limit
    return max(0, (limit - 1) // 2)


def _base_odd_primes(limit: int) -> np.ndarray:
    """Plain odd-only sieve for the base primes up to sqrt of the full limit."""
    slots = _odd_slot_count(limit)
    flags = np.ones(slots, dtype=np.uint8)
    m = 3
    while m * m <= limit:
        if flags[(m - 3) // 2]:
            first = (m * m - 3) // 2
            flags[first::m] = 0
        m += 2
    return 3 + 2 * np.flatnonzero(flags).astype(np.int64)


def build_prime_flags(limit: int, segment_size: int = DEFAULT_SEGMENT_ODDS) -> PrimeFlags:
    """Sieve the odd-prime flags up to ``limit``, segment by segment.

    Peak working memory beyond the output array is one segment of
    ``segment_size`` odd slots regardless of ``limit``, and the resulting
    flags are bit-identical for every segment size.

    Args:
        limit: Inclusive upper bound, >= 2.
        segment_size: Odd slots processed per segment, >= 1.

    Returns:
        PrimeFlags over [3, limit].

    Raises:
        ValueError: limit < 2 or segment_size < 1.
        CapacityError: limit > LIMIT_CAPACITY.
    """
    if limit < 2:
        raise ValueError(f"sieve limit must be >= 2, got {limit}")
    if limit > LIMIT_CAPACITY:
        raise CapacityError(f"sieve limit {limit} exceeds capacity {LIMIT_CAPACITY}")
    if segment_size < 1:
        raise ValueError(f"segment_size must be >= 1, got {segment_size}")

    slots = _odd_slot_count(limit)
    flags = np.ones(slots, dtype=np.uint8)
    base = _base_odd_primes(math.isqrt(limit))

    for seg_lo in range(0, slots, segment_size):
        seg_hi = min(seg_lo + segment_size, slots)
        lo_val = 3 + 2 * seg_lo  # odd value at the segment start
        hi_val = 3 + 2 * (seg_hi - 1)
        for p in base:
            p = int(p)
            start = p * p
            if start > hi_val:
                break
            if start < lo_val:
                # first odd multiple of p at or above lo_val
                start = ((lo_val + p - 1) // p) * p
                if start % 2 == 0:
                    start += p
            first_slot = (start - 3) // 2
            if first_slot < seg_hi:
                flags[first_slot:seg_hi:p] = 0

    flags.setflags(write=False)
    return PrimeFlags(limit=limit, flags=flags, prime_count=int(flags.sum()))


def is_odd_prime(flags: PrimeFlags, m: int) -> bool:
    """True iff ``m`` is an odd prime; even inputs (including 2) are False.

    Raises:
        ValueError: m < 0.
        IndexError: m > flags.limit (out of the sieved range; never a
            silent False).
    """
    if m < 0:
        raise ValueError(f"m must be non-negative, got {m}")
    if m > flags.limit:
        raise IndexError(f"m={m} exceeds sieve limit {flags.limit}")
    if m < 3 or m % 2 == 0:
        return False
    return bool(flags.flags[(m - 3) // 2])


def odd_primes(flags: PrimeFlags, upto: int | None = None) -> np.ndarray:
    """All odd primes <= ``upto`` (default: the full sieved range), ascending."""
    bound = flags.limit if upto is None else upto
    if bound > flags.limit:
        raise IndexError(f"upto={bound} exceeds sieve limit {flags.limit}")
    slots = _odd_slot_count(min(bound, flags.limit))
    return 3 + 2 * np.flatnonzero(flags.flags[:slots]).astype(np.int64)


def _payload_checksum(payload: bytes) -> bytes:
    return hashlib.blake2b(payload, digest_size=8).digest()


def save_prime_flags(flags: PrimeFlags, path: str) -> None:
    """Write the flags as a versioned packed bitset.

    Layout: magic "GBPF1", limit (8-byte LE), payload byte length (8-byte
    LE), the bit payload (LSB-first within each byte, one bit per odd
    slot), then an 8-byte checksum of the payload.
    """
    payload = np.packbits(flags.flags, bitorder="little").tobytes()
    with open(path, "wb") as fh:
        fh.write(_CACHE_MAGIC)
        fh.write(struct.pack("<QQ", flags.limit, len(payload)))
        fh.write(payload)
        fh.write(_payload_checksum(payload))


def load_prime_flags(path: str) -> PrimeFlags:
    """Read flags written by :func:`save_prime_flags`.

    Raises:
        CacheError: bad magic, truncated file, inconsistent payload length,
            or checksum mismatch.
    """
    with open(path, "rb") as fh:
        blob = fh.read()
    header_len = len(_CACHE_MAGIC) + 16
    if len(blob) < header_len + 8 or not blob.startswith(_CACHE_MAGIC):
        raise CacheError(f"{path}: not a prime-flags cache")
    limit, payload_len = struct.unpack_from("<QQ", blob, len(_CACHE_MAGIC))
    slots = _odd_slot_count(limit)
    if payload_len != (slots + 7) // 8 or len(blob) != header_len + payload_len + 8:
        raise CacheError(f"{path}: payload length inconsistent with limit {limit}")
    payload = blob[header_len:header_len + payload_len]
    if _payload_checksum(payload) != blob[header_len + payload_len:]:
        raise CacheError(f"{path}: checksum mismatch")
    bits = np.unpackbits(np.frombuffer(payload, dtype=np.uint8), bitorder="little")
    flags = bits[:slots].astype(np.uint8)
    flags.setflags(write=False)
    return PrimeFlags(limit=int(limit), flags=flags, prime_count=int(flags.sum()))
