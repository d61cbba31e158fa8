"""Parabolic bundles presented as weighted sums of ordinary bundle classes.

A parabolic bundle here is a finite direct sum of summands, each an
ordinary bundle class together with a rational weight in [0, 1) per divisor
component.  All derived data (the cover order, the bundle induced on the
cover, Chern classes and character) is computed from that presentation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Mapping, Union

from .chow import CoverModel, Variety, make_cover
from .rings import (
    GradedRing,
    Rational,
    RingElement,
    character_from_chern,
    chern_from_character,
    exp_nilpotent,
)

WeightSpec = Union[Mapping[str, Rational], Iterable[tuple[str, Rational]]]

DEFAULT_WEIGHT_DENOMINATOR_CAP = 10**6


@dataclass(frozen=True, eq=False)
class OrdinaryBundleClass:
    """A rank together with a total Chern class whose degree-0 part is 1 and
    whose graded parts vanish above min(rank, cutoff)."""

    rank: int
    total_chern: RingElement

    def __post_init__(self):
        if int(self.rank) < 1:
            raise ValueError("bundle rank must be a positive integer")
        object.__setattr__(self, "rank", int(self.rank))
        ring = self.total_chern.ring
        if self.total_chern.graded_part(0) != ring.one():
            raise ValueError("total Chern class must have degree-0 part 1")
        for k in range(min(self.rank, ring.cutoff) + 1, ring.cutoff + 1):
            if not self.total_chern.graded_part(k).is_zero:
                raise ValueError(
                    f"Chern part of degree {k} exceeds the bundle rank {self.rank}"
                )

    @property
    def ring(self) -> GradedRing:
        return self.total_chern.ring

    def chern_list(self) -> list[RingElement]:
        """Classes c_0..c_rank; parts above the ring cutoff are zero."""
        ring = self.ring
        out = []
        for k in range(self.rank + 1):
            out.append(self.total_chern.graded_part(k) if k <= ring.cutoff else ring.zero())
        return out

    def character(self) -> RingElement:
        parts = character_from_chern(self.chern_list(), self.rank)
        total = self.ring.zero()
        for part in parts:
            total = total + part
        return total


def trivial_line(ring: GradedRing) -> OrdinaryBundleClass:
    return OrdinaryBundleClass(1, ring.one())


def line_bundle(ring: GradedRing, first_chern: RingElement) -> OrdinaryBundleClass:
    return OrdinaryBundleClass(1, ring.one() + first_chern)


Summand = tuple[OrdinaryBundleClass, tuple[tuple[str, Fraction], ...]]


@dataclass(frozen=True, eq=False)
class ParabolicBundle:
    """A weighted sum of bundle classes over one variety.

    Each summand carries a map divisor -> weight with weights exact
    rationals in [0, 1); omitted divisors have weight 0 and zero entries
    are dropped.  Weight denominators are capped to keep the cover order
    bounded.
    """

    variety: Variety
    summands: tuple[Summand, ...]
    max_weight_denominator: int = DEFAULT_WEIGHT_DENOMINATOR_CAP

    def __post_init__(self):
        if not self.summands:
            raise ValueError("a parabolic bundle needs at least one summand")
        divisor_order = {
            name: i for i, name in enumerate(self.variety.description.divisor_names)
        }
        canonical: list[Summand] = []
        for bundle, weights in self.summands:
            if bundle.ring is not self.variety.ring:
                raise ValueError("summand bundle lives on a different variety")
            items = weights.items() if isinstance(weights, Mapping) else weights
            cleaned: dict[str, Fraction] = {}
            for name, value in items:
                if name not in divisor_order:
                    raise ValueError(f"unknown divisor {name!r}")
                w = Fraction(value)
                if not (0 <= w < 1):
                    raise ValueError("weight must lie in [0,1)")
                if w.denominator > self.max_weight_denominator:
                    raise ValueError(
                        f"weight denominator exceeds the cap {self.max_weight_denominator}"
                    )
                if w:
                    cleaned[name] = w
            ordered = tuple(
                sorted(cleaned.items(), key=lambda kv: divisor_order[kv[0]])
            )
            canonical.append((bundle, ordered))
        object.__setattr__(self, "summands", tuple(canonical))

    @property
    def rank(self) -> int:
        return sum(bundle.rank for bundle, _ in self.summands)

    @property
    def ring(self) -> GradedRing:
        return self.variety.ring


def cover_order(E: ParabolicBundle) -> int:
    """Least common multiple of all weight denominators; 1 when every
    weight vanishes."""
    n = 1
    for _, weights in E.summands:
        for _, w in weights:
            n = lcm(n, w.denominator)
    return n


def weight_multiplicities(
    E: ParabolicBundle, divisor: str
) -> list[tuple[Fraction, int]]:
    """Distinct weights on one divisor, sorted increasing, each with the
    total rank of the summands carrying it."""
    if divisor not in E.variety.description.divisor_names:
        raise ValueError(f"unknown divisor {divisor!r}")
    acc: dict[Fraction, int] = {}
    for bundle, weights in E.summands:
        w = dict(weights).get(divisor, Fraction(0))
        acc[w] = acc.get(w, 0) + bundle.rank
    return sorted(acc.items())


def direct_sum(E: ParabolicBundle, F: ParabolicBundle) -> ParabolicBundle:
    if E.variety is not F.variety:
        raise ValueError("direct sum requires bundles on the same variety")
    cap = max(E.max_weight_denominator, F.max_weight_denominator)
    return ParabolicBundle(E.variety, E.summands + F.summands, cap)


def _conjugate_character(ch: RingElement) -> RingElement:
    # Negating every Chern root flips the sign of the odd graded parts.
    ring = ch.ring
    acc = ring.zero()
    for k in range(ring.cutoff + 1):
        part = ch.graded_part(k)
        acc = acc + (part if k % 2 == 0 else -part)
    return acc


def _bundle_from_character(
    ring: GradedRing, ch: RingElement, rank: int
) -> OrdinaryBundleClass:
    parts = [ch.graded_part(k) for k in range(ring.cutoff + 1)]
    classes = chern_from_character(parts, rank)
    total = ring.zero()
    for c in classes:
        total = total + c
    return OrdinaryBundleClass(rank, total)


def dual(E: ParabolicBundle) -> ParabolicBundle:
    """Summand-wise dual: weight 0 stays 0; weight w > 0 becomes 1 - w and
    the underlying dual bundle picks up a twist by minus that divisor."""
    ring = E.ring
    out = []
    for bundle, weights in E.summands:
        twist = ring.zero()
        new_weights = {}
        for name, w in weights:
            new_weights[name] = 1 - w
            twist = twist - ring.generator(name)
        ch = _conjugate_character(bundle.character()) * exp_nilpotent(twist)
        out.append((_bundle_from_character(ring, ch, bundle.rank), new_weights))
    return ParabolicBundle(E.variety, tuple(out), E.max_weight_denominator)


def tensor(E: ParabolicBundle, F: ParabolicBundle) -> ParabolicBundle:
    """Summand-wise product: weights add per divisor; a sum reaching 1
    wraps around and twists the product bundle by that divisor."""
    if E.variety is not F.variety:
        raise ValueError("tensor requires bundles on the same variety")
    ring = E.ring
    out = []
    for bv, wv in E.summands:
        map_v = dict(wv)
        for bw, ww in F.summands:
            map_w = dict(ww)
            twist = ring.zero()
            weights = {}
            for name in set(map_v) | set(map_w):
                s = map_v.get(name, Fraction(0)) + map_w.get(name, Fraction(0))
                if s >= 1:
                    s -= 1
                    twist = twist + ring.generator(name)
                if s:
                    weights[name] = s
            ch = bv.character() * bw.character() * exp_nilpotent(twist)
            out.append(
                (_bundle_from_character(ring, ch, bv.rank * bw.rank), weights)
            )
    cap = max(E.max_weight_denominator, F.max_weight_denominator)
    return ParabolicBundle(E.variety, tuple(out), cap)


def cover_bundle(E: ParabolicBundle, cm: CoverModel) -> OrdinaryBundleClass:
    """The ordinary bundle class induced on the cover: each summand's
    character is pulled back and twisted by the integer multiples
    (order * weight) of the cover divisors."""
    if cm.base is not E.variety:
        raise ValueError("cover is not over this bundle's variety")
    n = cover_order(E)
    if cm.order % n:
        raise ValueError(
            f"cover order {cm.order} is not a multiple of the bundle's order {n}"
        )
    ru = cm.cover_ring
    total = ru.zero()
    for bundle, weights in E.summands:
        twist = ru.zero()
        for name, w in weights:
            m = w * cm.order
            twist = twist + int(m) * cm.divisor(name)
        total = total + cm.pullback(bundle.character()) * exp_nilpotent(twist)
    return _bundle_from_character(ru, total, E.rank)


def parabolic_chern(E: ParabolicBundle) -> list[RingElement]:
    """Classes c_0..c_rank on the base: the cover bundle's classes carried
    back down through the cover of minimal order."""
    cm = make_cover(E.variety, cover_order(E))
    upstairs = cover_bundle(E, cm)
    return [cm.pushdown(c) for c in upstairs.chern_list()]


def relation_classes(E: ParabolicBundle) -> list[RingElement]:
    """The normalized classes entering the tautological relation: the i-th
    Chern class divided by order^(rank - i), so index 0 is 1/order^rank."""
    n = cover_order(E)
    r = E.rank
    return [c / Fraction(n) ** (r - i) for i, c in enumerate(parabolic_chern(E))]


def character_element(E: ParabolicBundle) -> RingElement:
    """The full Chern character computed directly on the base ring."""
    ring = E.ring
    acc = ring.zero()
    for bundle, weights in E.summands:
        twist = ring.zero()
        for name, w in weights:
            twist = twist + w * ring.generator(name)
        acc = acc + bundle.character() * exp_nilpotent(twist)
    return acc


def chern_character(E: ParabolicBundle) -> list[RingElement]:
    """Graded parts 0..cutoff of :func:`character_element`."""
    ch = character_element(E)
    return [ch.graded_part(k) for k in range(E.ring.cutoff + 1)]


def chern_polynomial(E: ParabolicBundle, up_to: int | None = None) -> list[RingElement]:
    """Coefficient list of the Chern polynomial, optionally padded or
    truncated to the requested degree."""
    classes = parabolic_chern(E)
    if up_to is None:
        return classes
    if up_to < len(classes) - 1:
        return classes[: up_to + 1]
    return classes + [E.ring.zero()] * (up_to - len(classes) + 1)
