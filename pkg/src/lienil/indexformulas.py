"""Closed forms over the dimension subgroup profile, plus the two bounds.

The upper Lie nilpotency index of KG is determined by the jumps d_(m) of
the chain D_(m) = prod of gamma_i(G)^{p^j} over (i-1)p^j >= m-1; this
module computes that chain group-theoretically and evaluates the closed
form 2 + (p-1) * sum m*d_(m+1), the abelian augmentation index
1 + sum(p^{m_i} - 1), a lower bound for the index in terms of the derived
subgroup, and the weighted rank inequality.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InternalInvariantError
from .pcgroup import (
    Subgroup,
    abelian_invariants,
    exponent_of,
    is_abelian_subgroup,
    lower_central_series,
    power_subgroup,
    section_rank,
    subgroup_closure,
    trivial_subgroup,
    whole_group,
)

__all__ = [
    "DimensionChain",
    "BoundReport",
    "RankProfile",
    "dimension_subgroup_chain",
    "upper_index_closed_form",
    "abelian_augmentation_index",
    "lower_bound_from_derived",
    "rank_weight_bound",
]


def _log_p(value, p):
    k = 0
    while p**k < value:
        k += 1
    if p**k != value:
        raise InternalInvariantError(f"{value} is not a power of {p}")
    return k


@dataclass
class DimensionChain:
    """D_(1) >= D_(2) >= ... >= D_(M) = 1 with the exponent profile d.

    D_(1) = G by convention and never enters the d sums; d[i] is d_(i+2).
    """

    subgroups: list
    d: tuple

    def orders(self):
        return tuple(s.order for s in self.subgroups)

    def d_sum(self):
        return sum(self.d)


def dimension_subgroup_chain(group):
    """The chain of Lie dimension subgroups of G over GF(p)."""
    p = group.p
    series = lower_central_series(group)
    cls = len(series) - 1
    expo = exponent_of(group, whole_group(group))
    subs = [whole_group(group)]
    m = 2
    while True:
        members = set()
        for i in range(2, cls + 2):
            gamma = series[i - 1] if i - 1 < len(series) else trivial_subgroup(group)
            if gamma.order == 1:
                continue
            # only the smallest admissible p-power contributes new elements
            q = 1
            while (i - 1) * q < m - 1:
                q *= p
            if q > expo:
                continue
            members |= set(power_subgroup(group, gamma, q).elements)
        sub = subgroup_closure(group, sorted(members - {0}))
        if sub.order > subs[-1].order:
            raise InternalInvariantError("dimension subgroup chain not descending")
        subs.append(sub)
        if sub.order == 1:
            break
        m += 1
        if m > 2 + group.n_log * (cls + 1) * (expo + 1):
            raise InternalInvariantError("dimension subgroup chain did not terminate")
    d = tuple(
        _log_p(subs[i].order // subs[i + 1].order, p) for i in range(1, len(subs) - 1)
    )
    return DimensionChain(subgroups=subs, d=d)


def upper_index_closed_form(d, p):
    """t_upper = 2 + (p-1) * sum_{m>=1} m * d_(m+1), with d indexed from 2."""
    return 2 + (p - 1) * sum((i + 1) * dm for i, dm in enumerate(d))


def abelian_augmentation_index(invariants, p):
    """Nilpotency index of the augmentation ideal of an abelian p-group:
    1 + sum(p^{m_i} - 1) over the invariant exponents."""
    return 1 + sum(p**m - 1 for m in invariants)


@dataclass
class RankProfile:
    """ranks[i] is the rank of gamma_{i+2}/gamma_{i+3}; empty when abelian."""

    ranks: tuple
    nilpotency_class: int


@dataclass
class BoundReport:
    """Outcome of one bound evaluation; inapplicability is report state."""

    name: str
    applicable: bool
    reason: str = None
    holds: bool = None
    details: dict = field(default_factory=dict)


def lower_bound_from_derived(group, t_lower=None):
    """Lower bound for t_L from the invariants of an abelian derived subgroup:
    t(G') + r + 1 when p = 3, else t(G') + r(p-1) + 1, where p^r is the
    index |gamma_3 G'^p : G'^p|.
    """
    p = group.p
    series = lower_central_series(group)
    g2 = series[1]
    if g2.order == 1:
        return BoundReport(
            name="derived-subgroup-bound",
            applicable=False,
            reason="G is abelian; the bound targets nonabelian groups",
        )
    if not is_abelian_subgroup(group, g2):
        return BoundReport(
            name="derived-subgroup-bound",
            applicable=False,
            reason="derived subgroup is nonabelian",
        )
    invariants = abelian_invariants(group, g2)
    t_prime = abelian_augmentation_index(invariants, p)
    gamma3 = series[2] if len(series) > 2 else trivial_subgroup(group)
    g2_p = power_subgroup(group, g2, p)
    merged = subgroup_closure(
        group, sorted(set(gamma3.elements) | set(g2_p.elements) - {0})
    )
    r = _log_p(merged.order // g2_p.order, p)
    bound = t_prime + r + 1 if p == 3 else t_prime + r * (p - 1) + 1
    report = BoundReport(
        name="derived-subgroup-bound",
        applicable=True,
        details={
            "invariants": list(invariants),
            "t_derived": t_prime,
            "r": r,
            "bound": bound,
        },
    )
    if t_lower is not None:
        report.holds = t_lower >= bound
        report.details["t_lower"] = t_lower
    return report


def rank_weight_bound(group, n):
    """Weighted rank inequality against (n-3)/(p-1), n the computed t_L.

    Weights: 1 for the first section, 3/2 for the second, i-2 beyond.
    Exact rational comparison; p = 2 and abelian groups are out of scope.
    """
    p = group.p
    if p == 2:
        return BoundReport(
            name="rank-weight-bound",
            applicable=False,
            reason="requires p >= 3",
        )
    series = lower_central_series(group)
    cls = len(series) - 1
    if cls < 2:
        return BoundReport(
            name="rank-weight-bound",
            applicable=False,
            reason="G is abelian; the weighted sum is empty",
        )
    ranks = tuple(
        section_rank(group, series[i - 1], series[i]) for i in range(2, cls + 1)
    )
    profile = RankProfile(ranks=ranks, nilpotency_class=cls)
    lhs = Fraction(0)
    for i, rank in zip(range(2, cls + 1), ranks):
        if i == 2:
            weight = Fraction(1)
        elif i == 3:
            weight = Fraction(3, 2)
        else:
            weight = Fraction(i - 2)
        lhs += weight * rank
    rhs = Fraction(n - 3, p - 1)
    return BoundReport(
        name="rank-weight-bound",
        applicable=True,
        holds=lhs <= rhs,
        details={
            "ranks": list(profile.ranks),
            "class": profile.nilpotency_class,
            "lhs": [lhs.numerator, lhs.denominator],
            "rhs": [rhs.numerator, rhs.denominator],
            "n": n,
        },
    )
