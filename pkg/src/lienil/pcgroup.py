"""Finite p-groups from power-commutator presentations.

Elements are normal words x_1^{e_1} ... x_n^{e_n} with 0 <= e_i < p,
indexed in mixed radix (x_1 most significant, identity = 0).  The full
Cayley table is materialized once per group by collection from the left;
associativity of the table is certified before a group is returned, so an
inconsistent presentation cannot leak out of build_group.
"""

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import (
    InputError,
    InternalInvariantError,
    PresentationError,
    ResourceLimitError,
)
from .ffkernel import is_prime

DEFAULT_ORDER_CAP = 1024
_COLLECT_STEP_CAP = 10_000_000

# A word is a tuple of (generator_index, exponent) with strictly increasing
# 0-based generator indices and exponents in [1, p).
Word = tuple


def _check_word(word, p, n_gens, min_gen, what):
    last = min_gen - 1
    for g, e in word:
        if not (0 <= g < n_gens):
            raise InputError(f"{what}: generator x{g + 1} out of range")
        if g <= last:
            raise InputError(
                f"{what}: generators must be strictly increasing and > x{min_gen}"
            )
        if not (1 <= e < p):
            raise InputError(f"{what}: exponent {e} outside [1, {p})")
        last = g


@dataclass
class PcPresentation:
    """Power-commutator presentation of a finite p-group.

    powers[i] is the word for x_{i+1}^p; commutators[(j, i)] (j > i) is the
    word for (x_{j+1}, x_{i+1}).  Missing relations default to the empty
    word, i.e. the identity.
    """

    p: int
    n_gens: int
    powers: dict = field(default_factory=dict)
    commutators: dict = field(default_factory=dict)
    names: tuple = None

    def __post_init__(self):
        if not is_prime(self.p):
            raise InputError(f"p must be prime, got {self.p}")
        if self.n_gens < 1:
            raise InputError("a presentation needs at least one generator")
        self.powers = {int(i): tuple(w) for i, w in self.powers.items() if w}
        self.commutators = {
            (int(j), int(i)): tuple(w) for (j, i), w in self.commutators.items() if w
        }
        for i, w in self.powers.items():
            if not (0 <= i < self.n_gens):
                raise InputError(f"power relation for unknown generator x{i + 1}")
            _check_word(w, self.p, self.n_gens, i + 1, f"pow x{i + 1}")
        for (j, i), w in self.commutators.items():
            if not (0 <= i < j < self.n_gens):
                raise InputError(
                    f"commutator relation needs j > i, got ({j + 1}, {i + 1})"
                )
            _check_word(w, self.p, self.n_gens, j + 1, f"comm (x{j + 1}, x{i + 1})")
        if self.names is not None:
            self.names = tuple(self.names)
            if len(self.names) != self.n_gens:
                raise InputError("names must match the generator count")


class _Collector:
    """Collection from the left on normal words, with an explicit work stack."""

    def __init__(self, pres):
        self.p = pres.p
        self.n = pres.n_gens
        self.powers = [pres.powers.get(i, ()) for i in range(self.n)]
        self.comms = {}
        for (j, i), w in pres.commutators.items():
            self.comms[(j, i)] = w

    def mult_gen(self, exps, k):
        """Normal form of (normal word exps) * x_k."""
        p = self.p
        runs = [[g, e] for g, e in enumerate(exps) if e]
        pending = [k]
        steps = 0
        while pending:
            steps += 1
            if steps > _COLLECT_STEP_CAP:
                raise PresentationError("collection did not terminate")
            g = pending.pop()
            if runs and runs[-1][0] > g:
                # trailing letter x_h moves right: x_h x_g = x_g x_h (x_h, x_g)
                h = runs[-1][0]
                runs[-1][1] -= 1
                if runs[-1][1] == 0:
                    runs.pop()
                for cg, ce in reversed(self.comms.get((h, g), ())):
                    for _ in range(ce):
                        pending.append(cg)
                pending.append(h)
                pending.append(g)
            elif runs and runs[-1][0] == g:
                runs[-1][1] += 1
                if runs[-1][1] == p:
                    runs.pop()
                    for cg, ce in reversed(self.powers[g]):
                        for _ in range(ce):
                            pending.append(cg)
            else:
                runs.append([g, 1])
        out = [0] * self.n
        for g, e in runs:
            out[g] = e
        return tuple(out)


@dataclass
class FiniteGroup:
    """A finite p-group as a certified Cayley table."""

    order: int
    p: int
    mul: np.ndarray
    inv: np.ndarray
    gen_indices: tuple
    element_words: tuple = None  # exponent vectors, when built from a presentation
    names: tuple = None
    identity: int = 0

    def __post_init__(self):
        self.mul.setflags(write=False)
        self.inv.setflags(write=False)

    @cached_property
    def n_log(self):
        n = 0
        order = self.order
        while order > 1:
            order //= self.p
            n += 1
        return n

    @cached_property
    def is_abelian(self):
        return bool(np.array_equal(self.mul, self.mul.T))

    def conjugate(self, g, h):
        """h^{-1} g h."""
        return int(self.mul[self.mul[self.inv[h], g], h])


def _index_of(exps, p):
    idx = 0
    for e in exps:
        idx = idx * p + e
    return idx


def _word_of(idx, p, n):
    exps = [0] * n
    for i in range(n - 1, -1, -1):
        exps[i] = idx % p
        idx //= p
    return tuple(exps)


def build_group(pres, order_cap=DEFAULT_ORDER_CAP):
    """Materialize the group of a pc presentation; certifies associativity.

    The certificate checks (g*x)*y = g*(x*y) for all g, x in G and y a
    generator, which by induction on the normal word of the last factor
    implies full associativity of the table.
    """
    p, n = pres.p, pres.n_gens
    order = p**n
    if order > order_cap:
        raise ResourceLimitError(f"group order {order} exceeds cap {order_cap}")
    coll = _Collector(pres)
    words = [_word_of(u, p, n) for u in range(order)]

    # right multiplication by each generator, via collection
    rg = np.empty((n, order), dtype=np.int32)
    for k in range(n):
        for u in range(order):
            rg[k, u] = _index_of(coll.mult_gen(words[u], k), p)
        if len(np.unique(rg[k])) != order:
            raise PresentationError(
                f"inconsistent presentation: right multiplication by x{k + 1} "
                "is not a bijection"
            )

    # full table: fold the generator tables over the normal word of v
    mul = np.empty((order, order), dtype=np.int32)
    for v in range(order):
        col = np.arange(order, dtype=np.int32)
        for g, e in enumerate(words[v]):
            for _ in range(e):
                col = rg[g][col]
        mul[:, v] = col

    for k in range(n):
        lhs = rg[k][mul]            # (g*x)*x_k
        rhs = mul[:, rg[k]]         # g*(x*x_k)
        if not np.array_equal(lhs, rhs):
            raise PresentationError(
                "inconsistent presentation: associativity certificate failed "
                f"at generator x{k + 1}"
            )

    inv = np.argmax(mul == 0, axis=1).astype(np.int32)
    if not (mul[np.arange(order), inv] == 0).all() or not (
        mul[inv, np.arange(order)] == 0
    ).all():
        raise PresentationError("inconsistent presentation: missing inverses")

    gen_indices = tuple(_index_of(tuple(int(i == k) for i in range(n)), p) for k in range(n))
    return FiniteGroup(
        order=order,
        p=p,
        mul=mul,
        inv=inv,
        gen_indices=gen_indices,
        element_words=tuple(words),
        names=pres.names,
    )


def group_from_table(mul, p):
    """Wrap an explicit Cayley table; associativity checked on all triples."""
    mul = np.ascontiguousarray(np.asarray(mul, dtype=np.int32))
    order = mul.shape[0]
    if mul.ndim != 2 or mul.shape[1] != order:
        raise InputError("Cayley table must be square")
    if mul.min() < 0 or mul.max() >= order:
        raise InputError("Cayley table entries out of range")
    q = order
    while q > 1 and q % p == 0:
        q //= p
    if q != 1:
        raise InputError(f"order {order} is not a power of p = {p}")
    rng = np.arange(order)
    if not np.array_equal(mul[0], rng) or not np.array_equal(mul[:, 0], rng):
        raise InputError("element 0 is not a two-sided identity")
    for a in range(order):
        if not np.array_equal(mul[mul[a]], mul[a][mul]):
            raise InputError(f"table is not associative (row {a})")
    inv = np.argmax(mul == 0, axis=1).astype(np.int32)
    if not (mul[rng, inv] == 0).all() or not (mul[inv, rng] == 0).all():
        raise InputError("table has no two-sided inverses")
    group = FiniteGroup(
        order=order, p=p, mul=mul, inv=inv, gen_indices=(), element_words=None
    )
    gens = _greedy_generators(group)
    group.gen_indices = gens
    return group


def _greedy_generators(group):
    """A small generating set, grown greedily by closure."""
    gens = []
    have = frozenset([0])
    for g in range(group.order):
        if g not in have:
            gens.append(g)
            have = subgroup_closure(group, gens).element_set
            if len(have) == group.order:
                break
    if group.order > 1 and len(have) != group.order:
        raise InternalInvariantError("generator search failed")
    return tuple(gens)


@dataclass
class Subgroup:
    """A subgroup as an explicit element set with witness generators."""

    elements: tuple
    generators: tuple

    @cached_property
    def element_set(self):
        return frozenset(self.elements)

    @property
    def order(self):
        return len(self.elements)

    def __contains__(self, g):
        return g in self.element_set

    def __eq__(self, other):
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.elements == other.elements


def group_commutator(group, g, h):
    """(g, h) = g^-1 h^-1 g h."""
    mul, inv = group.mul, group.inv
    return int(mul[mul[inv[g], inv[h]], mul[g, h]])


def left_normed_commutator(group, elems):
    """(e_1, ..., e_k), folded left-to-right."""
    acc = elems[0]
    for x in elems[1:]:
        acc = group_commutator(group, acc, x)
    return acc


def subgroup_closure(group, seed):
    """Smallest subgroup containing `seed` (closure under mul and inv)."""
    seed = tuple(int(s) for s in seed)
    mul, inv = group.mul, group.inv
    step = np.unique(np.concatenate([np.asarray(seed, dtype=np.int32), inv[list(seed)]])) if seed else np.zeros(1, np.int32)
    mask = np.zeros(group.order, dtype=bool)
    mask[0] = True
    frontier = np.array([0], dtype=np.int32)
    while frontier.size:
        prods = mul[np.ix_(frontier, step)].ravel()
        new = np.unique(prods[~mask[prods]])
        mask[new] = True
        frontier = new
    return Subgroup(elements=tuple(np.nonzero(mask)[0].tolist()), generators=seed)


def trivial_subgroup(group):
    return Subgroup(elements=(0,), generators=())


def whole_group(group):
    return Subgroup(
        elements=tuple(range(group.order)), generators=tuple(group.gen_indices)
    )


def lower_central_series(group):
    """gamma_1 >= gamma_2 >= ... >= gamma_{c+1} = 1.

    gamma_{i+1} is generated by the commutators (g, s) over all g in
    gamma_i and the group generators s; taking every g of the subgroup (not
    only its generators) makes the generator restriction on s valid.
    """
    series = [whole_group(group)]
    mul, inv = group.mul, group.inv
    gens = np.asarray(group.gen_indices, dtype=np.int32)
    while series[-1].order > 1:
        cur = np.asarray(series[-1].elements, dtype=np.int32)
        comms = set()
        for s in gens:
            c = mul[mul[inv[cur], inv[s]], mul[cur, s]]
            comms.update(np.unique(c).tolist())
        comms.discard(0)
        nxt = subgroup_closure(group, sorted(comms))
        if nxt.order >= series[-1].order and nxt.order > 1:
            raise InternalInvariantError("lower central series does not descend")
        series.append(nxt)
        if len(series) > group.order + 2:
            raise InternalInvariantError("lower central series did not terminate")
    return series


def nilpotency_class(group):
    return len(lower_central_series(group)) - 1


def power_map(group, elems, q):
    """Elementwise q-th powers by binary powering over the Cayley table."""
    elems = np.asarray(elems, dtype=np.int32)
    result = np.zeros_like(elems)
    base = elems.copy()
    e = int(q)
    while e:
        if e & 1:
            result = group.mul[result, base]
        base = group.mul[base, base]
        e >>= 1
    return result


def power_subgroup(group, sub, q):
    """Subgroup generated by {h^q : h in sub}; q must be a power of p."""
    qq = int(q)
    while qq > 1 and qq % group.p == 0:
        qq //= group.p
    if qq != 1:
        raise InputError(f"q = {q} is not a power of p = {group.p}")
    powers = np.unique(power_map(group, np.asarray(sub.elements), q))
    return subgroup_closure(group, powers[powers != 0].tolist())


def subgroup_product(group, h, k):
    """HK for subgroups with at least one normal; errors if HK is not a group."""
    prods = group.mul[np.ix_(np.asarray(h.elements), np.asarray(k.elements))]
    prod_set = np.unique(prods)
    closed = subgroup_closure(group, sorted(set(h.generators) | set(k.generators) | set(h.elements) | set(k.elements)))
    if closed.order != prod_set.size:
        raise InternalInvariantError(
            "product set HK is not a subgroup (normality assumption violated)"
        )
    return closed


def center(group):
    eq = group.mul == group.mul.T
    members = np.nonzero(eq.all(axis=1))[0]
    return Subgroup(elements=tuple(members.tolist()), generators=tuple(members.tolist()))


def is_abelian_subgroup(group, sub):
    elems = np.asarray(sub.elements)
    block = group.mul[np.ix_(elems, elems)]
    return bool(np.array_equal(block, block.T))


def abelian_invariants(group, sub):
    """Invariant exponents (m_1 >= m_2 >= ...) with sub == prod C_{p^{m_i}}.

    Determined by order counting: the number of elements killed by p^k-th
    powers is p^{sum_i min(m_i, k)}.
    """
    if not is_abelian_subgroup(group, sub):
        raise InputError("abelian invariants of a nonabelian subgroup")
    p = group.p
    elems = np.asarray(sub.elements, dtype=np.int32)
    counts = []  # counts[k] = #{h : h^{p^k} = 1}
    arr = elems.copy()
    while True:
        counts.append(int((arr == 0).sum()))
        if counts[-1] == sub.order:
            break
        arr = power_map(group, arr, p)
    logs = []
    for c in counts:
        k = 0
        while p**k < c:
            k += 1
        if p**k != c:
            raise InternalInvariantError("power-kernel size is not a p-power")
        logs.append(k)
    # n_k = #{i : m_i >= k}; the m_i are the conjugate partition
    n_ks = [logs[k] - logs[k - 1] for k in range(1, len(logs))]
    invariants = []
    for i in range(1, (n_ks[0] if n_ks else 0) + 1):
        invariants.append(sum(1 for nk in n_ks if nk >= i))
    return tuple(sorted(invariants, reverse=True))


def subgroup_leq(a, b):
    return a.element_set <= b.element_set


def section_rank(group, upper, lower):
    """Rank of upper/lower for lower normal in upper with abelian quotient.

    rank = log_p( |upper| / |lower * upper^p| ).
    """
    if not subgroup_leq(lower, upper):
        raise InputError("section_rank: lower subgroup is not contained in upper")
    p = group.p
    pth = power_map(group, np.asarray(upper.elements), p)
    denom = subgroup_closure(group, sorted(set(lower.elements) | set(pth.tolist())))
    quotient = upper.order // denom.order
    r = 0
    while p**r < quotient:
        r += 1
    if p**r != quotient:
        raise InternalInvariantError("section is not elementary abelian of p-power order")
    return r


def subgroup_as_group(group, sub):
    """Relabel a subgroup as a standalone FiniteGroup (element 0 = identity)."""
    elems = np.asarray(sub.elements, dtype=np.int32)
    lookup = np.full(group.order, -1, dtype=np.int32)
    lookup[elems] = np.arange(elems.size, dtype=np.int32)
    table = lookup[group.mul[np.ix_(elems, elems)]]
    if (table < 0).any():
        raise InternalInvariantError("element set is not closed under multiplication")
    inner = FiniteGroup(
        order=int(elems.size),
        p=group.p,
        mul=np.ascontiguousarray(table),
        inv=lookup[group.inv[elems]].astype(np.int32),
        gen_indices=(),
    )
    inner.gen_indices = _greedy_generators(inner)
    return inner


def exponent_of(group, sub):
    """Exponent (largest element order) of a subgroup; a power of p."""
    arr = np.asarray(sub.elements, dtype=np.int32)
    e = 1
    while not (arr == 0).all():
        arr = power_map(group, arr, group.p)
        e *= group.p
        if e > group.order:
            raise InternalInvariantError("exponent exceeds group order")
    return e
