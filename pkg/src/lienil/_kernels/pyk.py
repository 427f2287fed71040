"""Pure numpy GF(p) span kernel.

Row reduction is batched into float64 matmuls so the heavy reductions run
at BLAS speed.  Exactness: every intermediate value is an integer bounded
by dim * (p-1)^2 <= 1024 * 250^2 < 2^53, so float64 arithmetic is exact.
"""

import numpy as np

BACKEND = "python"

# Candidate chunks sized to keep the per-chunk reduction near L2/BLAS sweet
# spot without large temporaries.
_CHUNK_ELEMS = 1 << 22


def _inverse_mod(c, p):
    return pow(int(c), p - 2, p)


def reduce_rows(basis, pivots, rows, p):
    """Reduce `rows` (N x dim) against an RREF `basis` (r x dim).

    Pivot columns of distinct RREF rows never overlap, so a single
    coefficient gather plus one matmul performs the full reduction.
    """
    rows = np.asarray(rows)
    if rows.ndim == 1:
        return reduce_rows(basis, pivots, rows[None, :], p)[0]
    r = basis.shape[0]
    if r == 0:
        return (rows.astype(np.int64) % p).astype(np.uint8)
    out = np.empty(rows.shape, dtype=np.uint8)
    chunk = max(16, _CHUNK_ELEMS // max(rows.shape[1], 1))
    basis_f = basis.astype(np.float64)
    piv = np.asarray(pivots, dtype=np.intp)
    for lo in range(0, rows.shape[0], chunk):
        block = rows[lo : lo + chunk].astype(np.int64)
        coeffs = (block[:, piv] % p).astype(np.float64)
        prod = (coeffs @ basis_f).astype(np.int64)
        out[lo : lo + chunk] = (block - prod) % p
    return out


class SpanBuilder:
    """Incremental reduced-row-echelon basis over GF(p).

    Rows are stored unordered internally; `basis()` returns them sorted by
    pivot column, which is the canonical representation.
    """

    def __init__(self, dim, p):
        self.dim = int(dim)
        self.p = int(p)
        self._rows = np.zeros((max(self.dim, 1), max(self.dim, 1)), dtype=np.uint8)
        self._pivots = np.zeros(max(self.dim, 1), dtype=np.intp)
        self._rank = 0
        self._rows_f = None  # lazily rebuilt float mirror for batch matmuls

    @property
    def rank(self):
        return self._rank

    def _float_rows(self):
        if self._rows_f is None or self._rows_f.shape[0] != self._rank:
            self._rows_f = self._rows[: self._rank].astype(np.float64)
        return self._rows_f

    def reduce(self, v):
        v = np.asarray(v, dtype=np.int64) % self.p
        r = self._rank
        if r == 0:
            return v.astype(np.uint8)
        coeffs = v[self._pivots[:r]].astype(np.float64)
        prod = (coeffs @ self._float_rows()).astype(np.int64)
        return ((v - prod) % self.p).astype(np.uint8)

    def contains(self, v):
        return not self.reduce(v).any()

    def insert(self, v):
        """Insert one vector; returns True when the rank grows."""
        red = self.reduce(v)
        nz = np.nonzero(red)[0]
        if nz.size == 0:
            return False
        piv = int(nz[0])
        lead = int(red[piv])
        if lead != 1:
            red = (red.astype(np.int32) * _inverse_mod(lead, self.p) % self.p).astype(
                np.uint8
            )
        r = self._rank
        col = self._rows[:r, piv]
        hit = np.nonzero(col)[0]
        if hit.size:
            delta = np.outer(col[hit].astype(np.int32), red.astype(np.int32))
            self._rows[hit] = (self._rows[hit].astype(np.int32) - delta) % self.p
        self._rows[r] = red
        self._pivots[r] = piv
        self._rank = r + 1
        self._rows_f = None
        return True

    def insert_batch(self, rows):
        """Insert many candidate rows; returns the number of new pivots.

        Each chunk is reduced against the current basis in one matmul, and
        only the (few) surviving rows take the per-row insertion path.
        """
        rows = np.asarray(rows)
        if rows.ndim == 1:
            rows = rows[None, :]
        added = 0
        chunk = max(16, _CHUNK_ELEMS // max(self.dim, 1))
        for lo in range(0, rows.shape[0], chunk):
            if self._rank == self.dim:
                break
            block = reduce_rows(
                self._rows[: self._rank], self._pivots[: self._rank],
                rows[lo : lo + chunk], self.p,
            )
            for i in np.nonzero(block.any(axis=1))[0]:
                if self.insert(block[i]):
                    added += 1
        return added

    def pivots(self):
        return np.sort(self._pivots[: self._rank].copy())

    def basis(self):
        order = np.argsort(self._pivots[: self._rank], kind="stable")
        return self._rows[: self._rank][order].copy()

    def row_range(self, lo, hi):
        """Current values of internally stored rows lo..hi (insertion order)."""
        return self._rows[lo:hi, : self.dim].copy()
