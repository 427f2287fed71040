# cython: language_level=3
# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled GF(p) span kernel.

Two row representations, chosen per field:
  * p = 2: rows packed into 64-bit words, reduction is pure XOR.
  * 3 <= p <= 251: one byte per entry, reduction accumulates in uint32 and
    takes a single mod pass at the end (bounded by dim * (p-1)^2 < 2^32).
"""

import numpy as np

BACKEND = "compiled"

cdef extern from *:
    int __builtin_ctzll(unsigned long long)


cdef inline object _as_u8_matrix(object rows, int p):
    arr = np.asarray(rows)
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.dtype == np.uint8:
        return np.ascontiguousarray(arr)
    return np.ascontiguousarray((arr.astype(np.int64) % p).astype(np.uint8))


cdef class SpanBuilderP:
    """Incremental RREF basis over GF(p), odd p."""

    cdef public int dim
    cdef public int p
    cdef int _rank
    cdef object _rows_arr
    cdef object _piv_arr
    cdef object _acc_arr
    cdef unsigned char[:, ::1] _rows
    cdef Py_ssize_t[::1] _pivots
    cdef unsigned int[::1] _acc
    cdef unsigned char _inv[256]

    def __init__(self, dim, p):
        cdef int c
        self.dim = dim
        self.p = p
        self._rank = 0
        cap = max(int(dim), 1)
        self._rows_arr = np.zeros((cap, cap), dtype=np.uint8)
        self._piv_arr = np.zeros(cap, dtype=np.intp)
        self._acc_arr = np.zeros(cap, dtype=np.uint32)
        self._rows = self._rows_arr
        self._pivots = self._piv_arr
        self._acc = self._acc_arr
        for c in range(1, p):
            self._inv[c] = pow(c, p - 2, p)

    @property
    def rank(self):
        return self._rank

    cdef void _accumulate(self, const unsigned char[::1] v) noexcept:
        cdef Py_ssize_t i, j, piv
        cdef int d = self.dim, p = self.p, r = self._rank
        cdef Py_ssize_t stride = self._rows.shape[1]
        cdef unsigned int c, f
        cdef unsigned int* acc = &self._acc[0]
        cdef unsigned char* rows0 = &self._rows[0, 0]
        cdef unsigned char* rj
        for i in range(d):
            acc[i] = v[i]
        for j in range(r):
            piv = self._pivots[j]
            c = acc[piv] % <unsigned int>p
            if c:
                f = p - c
                rj = rows0 + j * stride
                for i in range(d):
                    acc[i] += f * rj[i]
        for i in range(d):
            acc[i] = acc[i] % <unsigned int>p

    cdef bint _insert_u8(self, const unsigned char[::1] v) except? 0:
        cdef Py_ssize_t i, j, lead
        cdef int d = self.dim, p = self.p, r = self._rank
        cdef Py_ssize_t stride = self._rows.shape[1]
        cdef unsigned int c, f, linv
        cdef unsigned int* acc
        cdef unsigned char* rows0
        cdef unsigned char* rnew
        cdef unsigned char* rk
        self._accumulate(v)
        acc = &self._acc[0]
        lead = -1
        for i in range(d):
            if acc[i]:
                lead = i
                break
        if lead < 0:
            return False
        rows0 = &self._rows[0, 0]
        linv = self._inv[acc[lead]]
        rnew = rows0 + r * stride
        for i in range(d):
            rnew[i] = <unsigned char>((acc[i] * linv) % <unsigned int>p)
        for j in range(r):
            rk = rows0 + j * stride
            c = rk[lead]
            if c:
                f = p - c
                for i in range(d):
                    rk[i] = <unsigned char>((rk[i] + f * rnew[i]) % <unsigned int>p)
        self._pivots[r] = lead
        self._rank = r + 1
        return True

    def insert(self, v):
        cdef const unsigned char[:, ::1] block = _as_u8_matrix(v, self.p)
        if self._rank == self.dim:
            return False
        return self._insert_u8(block[0])

    def insert_batch(self, rows):
        cdef const unsigned char[:, ::1] block = _as_u8_matrix(rows, self.p)
        cdef Py_ssize_t k, n = block.shape[0]
        cdef int added = 0
        for k in range(n):
            if self._rank == self.dim:
                break
            if self._insert_u8(block[k]):
                added += 1
        return added

    def reduce(self, v):
        cdef const unsigned char[:, ::1] block = _as_u8_matrix(v, self.p)
        self._accumulate(block[0])
        out = np.asarray(self._acc_arr[: self.dim], dtype=np.uint32)
        return out.astype(np.uint8)

    def contains(self, v):
        return not self.reduce(v).any()

    def pivots(self):
        return np.sort(np.asarray(self._piv_arr[: self._rank]).copy())

    def basis(self):
        piv = np.asarray(self._piv_arr[: self._rank])
        order = np.argsort(piv, kind="stable")
        return np.asarray(self._rows_arr)[: self._rank][order, : self.dim].copy()

    def row_range(self, lo, hi):
        return np.asarray(self._rows_arr)[lo:hi, : self.dim].copy()


cdef class SpanBuilder2:
    """Incremental RREF basis over GF(2) with bit-packed rows."""

    cdef public int dim
    cdef public int p
    cdef int _rank, _nwords
    cdef object _rows_arr
    cdef object _piv_arr
    cdef object _buf_arr
    cdef unsigned long long[:, ::1] _rows
    cdef Py_ssize_t[::1] _pivots
    cdef unsigned long long[::1] _buf

    def __init__(self, dim, p):
        self.dim = dim
        self.p = 2
        self._rank = 0
        self._nwords = max((int(dim) + 63) >> 6, 1)
        cap = max(int(dim), 1)
        self._rows_arr = np.zeros((cap, self._nwords), dtype=np.uint64)
        self._piv_arr = np.zeros(cap, dtype=np.intp)
        self._buf_arr = np.zeros(self._nwords, dtype=np.uint64)
        self._rows = self._rows_arr
        self._pivots = self._piv_arr
        self._buf = self._buf_arr

    @property
    def rank(self):
        return self._rank

    cdef void _accumulate(self, const unsigned char[::1] v) noexcept:
        cdef Py_ssize_t i, j, piv
        cdef int d = self.dim, r = self._rank, nw = self._nwords
        cdef unsigned long long* buf = &self._buf[0]
        cdef unsigned long long* rows0 = &self._rows[0, 0]
        cdef unsigned long long* rj
        for i in range(nw):
            buf[i] = 0
        for i in range(d):
            if v[i] & 1:
                buf[i >> 6] |= (<unsigned long long>1) << (i & 63)
        for j in range(r):
            piv = self._pivots[j]
            if (buf[piv >> 6] >> (piv & 63)) & 1:
                rj = rows0 + j * nw
                for i in range(nw):
                    buf[i] ^= rj[i]

    cdef bint _insert_u8(self, const unsigned char[::1] v) except? 0:
        cdef Py_ssize_t i, j, lead
        cdef int r = self._rank, nw = self._nwords
        cdef unsigned long long* buf
        cdef unsigned long long* rows0
        cdef unsigned long long* rk
        self._accumulate(v)
        buf = &self._buf[0]
        lead = -1
        for i in range(nw):
            if buf[i]:
                lead = (i << 6) + __builtin_ctzll(buf[i])
                break
        if lead < 0:
            return False
        rows0 = &self._rows[0, 0]
        for j in range(r):
            rk = rows0 + j * nw
            if (rk[lead >> 6] >> (lead & 63)) & 1:
                for i in range(nw):
                    rk[i] ^= buf[i]
        rk = rows0 + r * nw
        for i in range(nw):
            rk[i] = buf[i]
        self._pivots[r] = lead
        self._rank = r + 1
        return True

    def insert(self, v):
        cdef const unsigned char[:, ::1] block = _as_u8_matrix(v, 2)
        if self._rank == self.dim:
            return False
        return self._insert_u8(block[0])

    def insert_batch(self, rows):
        cdef const unsigned char[:, ::1] block = _as_u8_matrix(rows, 2)
        cdef Py_ssize_t k, n = block.shape[0]
        cdef int added = 0
        for k in range(n):
            if self._rank == self.dim:
                break
            if self._insert_u8(block[k]):
                added += 1
        return added

    def _unpack(self, words):
        idx = np.arange(self.dim)
        return ((words[..., idx >> 6] >> (idx & 63).astype(np.uint64)) & 1).astype(
            np.uint8
        )

    def reduce(self, v):
        cdef const unsigned char[:, ::1] block = _as_u8_matrix(v, 2)
        self._accumulate(block[0])
        return self._unpack(np.asarray(self._buf_arr))

    def contains(self, v):
        return not self.reduce(v).any()

    def pivots(self):
        return np.sort(np.asarray(self._piv_arr[: self._rank]).copy())

    def basis(self):
        piv = np.asarray(self._piv_arr[: self._rank])
        order = np.argsort(piv, kind="stable")
        words = np.asarray(self._rows_arr)[: self._rank][order]
        return self._unpack(words)

    def row_range(self, lo, hi):
        return self._unpack(np.asarray(self._rows_arr)[lo:hi])


def SpanBuilder(dim, p):
    if p == 2:
        return SpanBuilder2(dim, p)
    return SpanBuilderP(dim, p)


def reduce_rows(basis, pivots, rows, p):
    """Reduce `rows` against an RREF `basis` with the given pivot columns."""
    squeeze = np.asarray(rows).ndim == 1
    builder = SpanBuilder(basis.shape[1] if basis.ndim == 2 else len(rows), p)
    cdef Py_ssize_t k
    if basis.shape[0]:
        builder.insert_batch(basis)
    block = _as_u8_matrix(rows, p)
    out = np.empty((block.shape[0], builder.dim), dtype=np.uint8)
    for k in range(block.shape[0]):
        out[k] = builder.reduce(block[k])
    return out[0] if squeeze else out
