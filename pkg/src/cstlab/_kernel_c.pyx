# distutils: language = c++
# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled cost kernels; same interface and identical values as the pure
Python twins in ``cstlab._kernel_py``."""

from cython.operator cimport dereference as deref
from libcpp.unordered_map cimport unordered_map

BACKEND = "compiled"

# Masks are packed with (i, j) into one 64-bit memo key.
cdef int MAXN = 50
cdef long long ONE = 1

cdef extern from *:
    int __builtin_ctzll(unsigned long long)


cdef inline int _low_key(long long low_bit):
    # 1-based key index of an isolated low bit.
    return __builtin_ctzll(<unsigned long long> low_bit) + 1


cdef inline long long _range_mask(int i, int j):
    if i > j:
        return 0
    return (ONE << j) - (ONE << (i - 1))


cdef class GbstCostKernel:
    """Minimum GBST cost for (interval, explicit hole set) subproblems."""

    cdef int n
    cdef long long w[51]
    cdef long long prefix[51]
    cdef unordered_map[long long, long long] memo

    def __init__(self, weights):
        cdef int k
        self.n = len(weights)
        if self.n > MAXN:
            raise ValueError("compiled kernel supports at most 50 keys")
        self.prefix[0] = 0
        for k in range(1, self.n + 1):
            self.w[k] = weights[k - 1]
            self.prefix[k] = self.prefix[k - 1] + self.w[k]

    cdef long long _mask_weight(self, long long mask):
        cdef long long total = 0
        cdef long long low
        while mask:
            low = mask & (-mask)
            total += self.w[_low_key(low)]
            mask ^= low
        return total

    cdef long long _cost(self, int i, int j, long long mask):
        cdef long long full, key, best, total, queries, low, me, lm, rm
        cdef long long left_full, right_full
        cdef int s
        cdef unordered_map[long long, long long].iterator it
        if i > j:
            return 0
        full = _range_mask(i, j)
        mask &= full
        if mask == full:
            return 0
        key = (mask << 12) | (i << 6) | j
        it = self.memo.find(key)
        if it != self.memo.end():
            return deref(it).second
        queries = full & ~mask
        best = -1
        for s in range(i, j + 2):
            left_full = _range_mask(i, s - 1)
            right_full = _range_mask(s, j)
            low = queries
            while low:
                me = low & (-low)
                low ^= me
                me = me | mask
                lm = me & left_full
                rm = me & right_full
                total = self._cost(i, s - 1, lm) + self._cost(s, j, rm)
                if best < 0 or total < best:
                    best = total
        total = self.prefix[j] - self.prefix[i - 1] - self._mask_weight(mask) + best
        self.memo[key] = total
        return total

    def cost(self, i, j, mask):
        return self._cost(i, j, mask)


cdef class TwcstCostKernel:
    """Minimum 2WCST cost for (interval, explicit hole set) subproblems."""

    cdef int n
    cdef bint prune_zero_eq
    cdef long long w[51]
    cdef long long prefix[51]
    cdef unordered_map[long long, long long] memo

    def __init__(self, weights, prune_zero_eq=True):
        cdef int k
        self.n = len(weights)
        if self.n > MAXN:
            raise ValueError("compiled kernel supports at most 50 keys")
        self.prune_zero_eq = bool(prune_zero_eq)
        self.prefix[0] = 0
        for k in range(1, self.n + 1):
            self.w[k] = weights[k - 1]
            self.prefix[k] = self.prefix[k - 1] + self.w[k]

    cdef long long _mask_weight(self, long long mask):
        cdef long long total = 0
        cdef long long low
        while mask:
            low = mask & (-mask)
            total += self.w[_low_key(low)]
            mask ^= low
        return total

    cdef long long _cost(self, int i, int j, long long mask) except -1:
        cdef long long full, key, best, total, queries, q, low, split, left_q
        cdef int s
        cdef unordered_map[long long, long long].iterator it
        full = _range_mask(i, j)
        mask &= full
        queries = full & ~mask
        if queries == 0:
            raise ValueError("2WCST subproblem must keep at least one query")
        if queries & (queries - 1) == 0:
            return 0
        key = (mask << 12) | (i << 6) | j
        it = self.memo.find(key)
        if it != self.memo.end():
            return deref(it).second
        best = -1
        q = queries
        while q:
            low = q & (-q)
            q ^= low
            if self.prune_zero_eq and self.w[_low_key(low)] == 0:
                continue
            total = self._cost(i, j, mask | low)
            if best < 0 or total < best:
                best = total
        for s in range(i + 1, j + 1):
            split = (ONE << (s - 1)) - (ONE << (i - 1))
            left_q = queries & split
            if left_q == 0 or left_q == queries:
                continue
            total = self._cost(i, s - 1, mask & split) + self._cost(s, j, mask & ~split)
            if best < 0 or total < best:
                best = total
        total = self.prefix[j] - self.prefix[i - 1] - self._mask_weight(mask) + best
        self.memo[key] = total
        return total

    def cost(self, i, j, mask):
        return self._cost(i, j, mask)
