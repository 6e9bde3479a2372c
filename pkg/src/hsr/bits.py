"""Static bit vectors with constant-time rank/select.

The layout is a classic two-level directory: absolute counts per
512-bit superblock, relative counts per 64-bit word, and a sampled
select index (one entry every 4096 set bits).  ``rank`` touches one
word; ``select`` jumps to its sample and finishes with a bounded local
search.
"""

import numpy as np

from .errors import EmptyBlock, OutOfRange

SUPERBLOCK = 512
WORDS_PER_SUPER = SUPERBLOCK // 64
SELECT_SAMPLE = 4096


def min_uint_dtype(max_value):
    """Smallest unsigned numpy dtype able to hold ``max_value``."""
    for dt in (np.uint8, np.uint16, np.uint32, np.uint64):
        if max_value <= np.iinfo(dt).max:
            return dt
    raise OverflowError(max_value)


def packed_array(values, max_value=None):
    """Store non-negative integers in the narrowest unsigned dtype."""
    arr = np.asarray(values, dtype=np.int64)
    if max_value is None:
        max_value = int(arr.max()) if arr.size else 0
    return arr.astype(min_uint_dtype(max_value))


def array_bits(arr):
    """Allocated capacity of a numpy array, in bits."""
    return int(arr.size) * arr.itemsize * 8


def _as_bool_array(bits):
    if isinstance(bits, str):
        return np.frombuffer(bits.encode(), dtype=np.uint8) == ord("1")
    return np.asarray(bits, dtype=bool).ravel()


class RankSelectBitVector:
    """Immutable bit sequence answering rank, select and cyclic successor.

    ``rank(j)`` counts the ones among the first ``j`` bits and
    ``select(k)`` is the least ``j`` with ``rank(j) == k``; both follow
    the prefix-length convention, so ``select(k) - 1`` is the 0-based
    index of the k-th one.
    """

    __slots__ = ("_n", "_words", "_super", "_block", "_samples", "_ones")

    def __init__(self, bits=()):
        flags = _as_bool_array(bits)
        n = int(flags.size)
        self._n = n
        n_words = (n + 63) // 64
        padded = np.zeros(n_words * 64, dtype=bool)
        padded[:n] = flags
        self._words = np.packbits(padded, bitorder="little").view(np.uint64) if n_words else np.zeros(0, np.uint64)

        counts = np.bitwise_count(self._words).astype(np.int64)
        n_super = (n_words + WORDS_PER_SUPER - 1) // WORDS_PER_SUPER
        before = np.concatenate(([0], np.cumsum(counts)))[:-1] if n_words else np.zeros(0, np.int64)
        total = int(counts.sum())
        self._ones = total
        super_counts = before[::WORDS_PER_SUPER] if n_words else np.zeros(0, np.int64)
        self._super = packed_array(super_counts, max(total, 1)) if n_super else np.zeros(0, np.uint32)
        rel = before - np.repeat(super_counts, WORDS_PER_SUPER)[:n_words]
        self._block = rel.astype(np.uint16)

        # superblock holding the (s*SELECT_SAMPLE + 1)-th one
        if total:
            targets = np.arange(1, total + 1, SELECT_SAMPLE, dtype=np.int64)
            sb = np.searchsorted(super_counts, targets, side="left") - 1
            self._samples = packed_array(sb, max(n_super, 1))
        else:
            self._samples = np.zeros(0, np.uint8)

    def __len__(self):
        return self._n

    def __getitem__(self, i):
        if not 0 <= i < self._n:
            raise OutOfRange(i)
        return (int(self._words[i >> 6]) >> (i & 63)) & 1

    def __iter__(self):
        return iter(self.to_array().tolist())

    def __eq__(self, other):
        if not isinstance(other, RankSelectBitVector):
            return NotImplemented
        return self._n == other._n and np.array_equal(self._words, other._words)

    def __repr__(self):
        s = self.to01()
        return f"RankSelectBitVector('{s if len(s) <= 64 else s[:61] + '...'}')"

    @property
    def ones(self):
        return self._ones

    def to_array(self):
        if not self._n:
            return np.zeros(0, dtype=bool)
        return np.unpackbits(self._words.view(np.uint8), bitorder="little")[: self._n].astype(bool)

    def to01(self):
        return "".join("1" if b else "0" for b in self.to_array())

    def rank(self, j):
        if not 0 <= j <= self._n:
            raise OutOfRange(j)
        if j == self._n:
            return self._ones
        w = j >> 6
        r = int(self._super[w >> 3]) + int(self._block[w])
        off = j & 63
        if off:
            r += (int(self._words[w]) & ((1 << off) - 1)).bit_count()
        return r

    def select(self, k):
        if not 1 <= k <= self._ones:
            raise OutOfRange(k)
        s = (k - 1) // SELECT_SAMPLE
        lo = int(self._samples[s])
        hi = int(self._samples[s + 1]) + 1 if s + 1 < len(self._samples) else len(self._super)
        sb = lo + int(np.searchsorted(self._super[lo:hi], k, side="left")) - 1
        rem = k - int(self._super[sb])
        w = sb * WORDS_PER_SUPER
        last = min(w + WORDS_PER_SUPER, len(self._words)) - 1
        while w < last and int(self._block[w + 1]) < rem:
            w += 1
        rem -= int(self._block[w])
        word = int(self._words[w])
        for _ in range(rem - 1):
            word &= word - 1
        return (w << 6) + (word & -word).bit_length()

    def next_one_cyclic(self, lo, hi, pos):
        """Index of the first set bit after ``pos`` in ``[lo, hi]``, wrapping.

        Indices are 0-based and the block bounds inclusive.  Returns
        ``pos`` itself only when it is the single set bit of the block.
        """
        if not (0 <= lo <= pos <= hi < self._n):
            raise OutOfRange((lo, pos, hi))
        upto = self.rank(hi + 1)
        r = self.rank(pos + 1)
        if r < upto:
            return self.select(r + 1) - 1
        first = self.rank(lo)
        if first == upto:
            raise EmptyBlock((lo, hi))
        return self.select(first + 1) - 1

    def count_range(self, lo, hi):
        """Set bits in the half-open range ``[lo, hi)``."""
        return self.rank(hi) - self.rank(lo)

    @property
    def payload_bits(self):
        return array_bits(self._words)

    @property
    def aux_bits(self):
        return array_bits(self._super) + array_bits(self._block) + array_bits(self._samples)

    @property
    def total_bits(self):
        return self.payload_bits + self.aux_bits
