"""Exact dense linear algebra over GF(p).

Subspaces are held in reduced row echelon form, so equal spans have
identical representations and subspace equality is array equality.  The
elimination itself lives in the kernel backends (see lienil._kernels);
this module provides the immutable value types and the public operations.
"""

from dataclasses import dataclass, field

import numpy as np

from ._kernels import SpanBuilder, backend_name, reduce_rows
from .errors import InputError

__all__ = [
    "FieldSpec",
    "Subspace",
    "SpanBuilder",
    "backend_name",
    "span",
    "subspace_contains",
    "subspace_leq",
    "subspace_sum",
]

MAX_PRIME = 251  # entries must fit one byte


def is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class FieldSpec:
    """The prime field GF(p)."""

    p: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise InputError(f"field modulus must be prime, got {self.p}")
        if self.p > MAX_PRIME:
            raise InputError(f"p = {self.p} exceeds the one-byte limit {MAX_PRIME}")


def _as_field(field):
    return field if isinstance(field, FieldSpec) else FieldSpec(int(field))


def _as_vector(v, dim, p):
    arr = np.asarray(v)
    if arr.ndim != 1 or arr.shape[0] != dim:
        raise InputError(f"expected a vector of length {dim}, got shape {arr.shape}")
    if arr.dtype != np.uint8:
        arr = (arr.astype(np.int64) % p).astype(np.uint8)
    return arr


@dataclass(frozen=True)
class Subspace:
    """A subspace of GF(p)^ambient_dim as a canonical RREF basis."""

    p: int
    ambient_dim: int
    basis: np.ndarray = field(compare=False)    # (dim, ambient_dim) uint8
    pivots: tuple = field(compare=False)

    def __post_init__(self):
        self.basis.setflags(write=False)

    @property
    def dim(self):
        return self.basis.shape[0]

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (
            self.p == other.p
            and self.ambient_dim == other.ambient_dim
            and np.array_equal(self.basis, other.basis)
        )

    def __repr__(self):
        return (
            f"Subspace(p={self.p}, dim={self.dim}, ambient={self.ambient_dim})"
        )

    def is_zero(self):
        return self.dim == 0

    @classmethod
    def from_builder(cls, builder):
        return cls(
            p=builder.p,
            ambient_dim=builder.dim,
            basis=builder.basis(),
            pivots=tuple(int(i) for i in builder.pivots()),
        )

    @classmethod
    def zero(cls, ambient_dim, p):
        return cls(
            p=p,
            ambient_dim=ambient_dim,
            basis=np.zeros((0, ambient_dim), dtype=np.uint8),
            pivots=(),
        )

    @classmethod
    def full(cls, ambient_dim, p):
        return cls(
            p=p,
            ambient_dim=ambient_dim,
            basis=np.eye(ambient_dim, dtype=np.uint8),
            pivots=tuple(range(ambient_dim)),
        )


def span(vectors, field, ambient_dim=None):
    """Canonical RREF span of a family of vectors over GF(p).

    `ambient_dim` is required when `vectors` is empty.
    """
    fs = _as_field(field)
    vecs = [np.asarray(v) for v in vectors]
    if not vecs:
        if ambient_dim is None:
            raise InputError("span of an empty family needs an explicit ambient_dim")
        return Subspace.zero(ambient_dim, fs.p)
    dims = {v.shape for v in vecs}
    if len(dims) > 1 or vecs[0].ndim != 1:
        raise InputError(f"span requires equal-length vectors, got shapes {sorted(dims)}")
    dim = vecs[0].shape[0]
    if ambient_dim is not None and ambient_dim != dim:
        raise InputError(f"vectors of length {dim} do not live in dimension {ambient_dim}")
    builder = SpanBuilder(dim, fs.p)
    builder.insert_batch(np.stack(vecs))
    return Subspace.from_builder(builder)


def _check_ambient(a, b):
    if a.ambient_dim != b.ambient_dim or a.p != b.p:
        raise InputError(
            f"subspace mismatch: GF({a.p})^{a.ambient_dim} vs GF({b.p})^{b.ambient_dim}"
        )


def subspace_contains(s, v):
    """True iff v reduces to zero against the basis of s."""
    vec = _as_vector(v, s.ambient_dim, s.p)
    return not reduce_rows(s.basis, np.asarray(s.pivots, dtype=np.intp), vec, s.p).any()


def subspace_leq(a, b):
    """True iff a is contained in b."""
    _check_ambient(a, b)
    if a.dim == 0:
        return True
    residues = reduce_rows(b.basis, np.asarray(b.pivots, dtype=np.intp), a.basis, a.p)
    return not residues.any()


def subspace_sum(a, b):
    """The subspace a + b."""
    _check_ambient(a, b)
    builder = SpanBuilder(a.ambient_dim, a.p)
    if a.dim:
        builder.insert_batch(a.basis)
    if b.dim:
        builder.insert_batch(b.basis)
    return Subspace.from_builder(builder)
