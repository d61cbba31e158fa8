"""Truncated graded polynomial rings with exact rational coefficients.

This is the value layer for every class computation in the package: sparse
polynomials in named graded generators, truncated above a fixed degree
cutoff, normalized against a list of monomial substitution rules.
Coefficients are `fractions.Fraction` throughout; nothing here touches
floating point.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence, Union

Monomial = tuple[int, ...]
Rational = Union[int, Fraction]
MonoSpec = Union[Mapping[str, int], Iterable[tuple[str, int]]]


class RingMismatchError(ValueError):
    """Two elements that live in different rings were combined."""


class RewriteCapError(ValueError):
    """Normalization failed to reach a fixpoint within the iteration cap."""


class RuleError(ValueError):
    """A rewrite rule is malformed; carries the index of the offending rule."""

    def __init__(self, message: str, rule_index: int):
        super().__init__(message)
        self.rule_index = rule_index


def _as_exponent_items(spec: MonoSpec) -> Iterable[tuple[str, int]]:
    if isinstance(spec, Mapping):
        return spec.items()
    return spec


class GradedRing:
    """Commutative polynomial ring over Q with graded generators, a degree
    cutoff and monomial substitution rules.

    Terms of total degree above ``cutoff`` are identically zero.  Each rule
    maps a monomial to a polynomial of the same degree; normalization
    substitutes rules (in declaration order) until no monomial is divisible
    by any rule's left side, bounded by ``rule_iteration_cap`` passes.  Rule
    right sides are themselves reduced to a fixpoint at construction time,
    so a non-terminating rule set is rejected when the ring is built.
    """

    def __init__(
        self,
        generators: Sequence[tuple[str, int]],
        cutoff: int,
        rules: Sequence[tuple[MonoSpec, Iterable[tuple[Rational, MonoSpec]]]] = (),
        rule_iteration_cap: int = 1000,
    ):
        names = []
        degrees = []
        for name, degree in generators:
            if not isinstance(name, str) or not name:
                raise ValueError("generator names must be non-empty strings")
            if name in names:
                raise ValueError(f"duplicate generator name {name!r}")
            if int(degree) < 1:
                raise ValueError(f"generator {name!r} must have degree >= 1")
            names.append(name)
            degrees.append(int(degree))
        if int(cutoff) < 1:
            raise ValueError("cutoff must be a positive integer")
        if int(rule_iteration_cap) < 1:
            raise ValueError("rule_iteration_cap must be a positive integer")
        self._names = tuple(names)
        self._degrees = tuple(degrees)
        self._index = {name: i for i, name in enumerate(names)}
        self.cutoff = int(cutoff)
        self.rule_iteration_cap = int(rule_iteration_cap)
        self._zero_mono: Monomial = (0,) * len(names)
        self._rules: list[tuple[Monomial, dict[Monomial, Fraction]]] = []
        for idx, (lhs_spec, rhs_terms) in enumerate(rules):
            lhs = self.monomial(lhs_spec)
            if lhs == self._zero_mono:
                raise RuleError("rule left side must be a non-constant monomial", idx)
            lhs_degree = self.monomial_degree(lhs)
            rhs: dict[Monomial, Fraction] = {}
            for coeff, mono_spec in rhs_terms:
                mono = self.monomial(mono_spec)
                if self.monomial_degree(mono) != lhs_degree:
                    raise RuleError("rule is not degree-homogeneous", idx)
                value = Fraction(coeff)
                if value:
                    rhs[mono] = rhs.get(mono, Fraction(0)) + value
            self._rules.append((lhs, {m: c for m, c in rhs.items() if c}))
        # Reduce every right side to a fixpoint under the full rule list;
        # a cyclic rule set fails here instead of at first use.
        for idx, (lhs, rhs) in enumerate(self._rules):
            try:
                reduced = self._normalize(dict(rhs))
            except RewriteCapError:
                raise RuleError(
                    "rule right side does not normalize within the iteration cap",
                    idx,
                ) from None
            self._rules[idx] = (lhs, reduced)

    @property
    def names(self) -> tuple[str, ...]:
        return self._names

    @property
    def degrees(self) -> tuple[int, ...]:
        return self._degrees

    @property
    def rules(self) -> tuple[tuple[Monomial, Mapping[Monomial, Fraction]], ...]:
        return tuple((lhs, MappingProxyType(rhs)) for lhs, rhs in self._rules)

    def monomial(self, spec: MonoSpec) -> Monomial:
        """Canonical exponent tuple for a {name: exponent} mapping."""
        exps = [0] * len(self._names)
        for name, exp in _as_exponent_items(spec):
            if name not in self._index:
                raise KeyError(f"unknown generator {name!r}")
            if int(exp) < 0:
                raise ValueError("exponents must be non-negative")
            exps[self._index[name]] += int(exp)
        return tuple(exps)

    def monomial_degree(self, mono: Monomial) -> int:
        return sum(e * d for e, d in zip(mono, self._degrees))

    def sort_key(self, mono: Monomial):
        """Graded-lexicographic key: degree first, then earlier generators
        with higher exponents first."""
        return (self.monomial_degree(mono), tuple(-e for e in mono))

    def format_monomial(self, mono: Monomial) -> str:
        parts = []
        for name, exp in zip(self._names, mono):
            if exp == 1:
                parts.append(name)
            elif exp > 1:
                parts.append(f"{name}^{exp}")
        return "*".join(parts)

    def basis_monomials(self, degree: int) -> list[Monomial]:
        """All monomials of the given total degree that no rule rewrites."""
        if degree < 0 or degree > self.cutoff:
            return []
        out: list[Monomial] = []
        n = len(self._names)

        def rec(i: int, remaining: int, acc: list[int]):
            if i == n:
                if remaining == 0:
                    mono = tuple(acc)
                    if self._matching_rule(mono) is None:
                        out.append(mono)
                return
            step = self._degrees[i]
            for e in range(remaining // step + 1):
                rec(i + 1, remaining - e * step, acc + [e])

        rec(0, degree, [])
        out.sort(key=self.sort_key)
        return out

    def zero(self) -> RingElement:
        return RingElement(self, {})

    def one(self) -> RingElement:
        return RingElement(self, {self._zero_mono: Fraction(1)})

    def scalar(self, value: Rational) -> RingElement:
        return RingElement(self, {self._zero_mono: Fraction(value)})

    def generator(self, name: str) -> RingElement:
        mono = self.monomial({name: 1})
        return RingElement(self, {mono: Fraction(1)})

    def generators(self) -> list[RingElement]:
        return [self.generator(name) for name in self._names]

    def _matching_rule(self, mono: Monomial):
        for lhs, rhs in self._rules:
            if all(m >= l for m, l in zip(mono, lhs)):
                return lhs, rhs
        return None

    def _normalize(self, raw: dict[Monomial, Fraction]) -> dict[Monomial, Fraction]:
        current: dict[Monomial, Fraction] = {}
        for mono, coeff in raw.items():
            if not coeff or self.monomial_degree(mono) > self.cutoff:
                continue
            current[mono] = current.get(mono, Fraction(0)) + coeff
        current = {m: c for m, c in current.items() if c}
        if not self._rules:
            return current
        for _ in range(self.rule_iteration_cap):
            rewritten = False
            nxt: dict[Monomial, Fraction] = {}
            for mono, coeff in current.items():
                match = self._matching_rule(mono)
                if match is None:
                    nxt[mono] = nxt.get(mono, Fraction(0)) + coeff
                    continue
                rewritten = True
                lhs, rhs = match
                quot = tuple(m - l for m, l in zip(mono, lhs))
                for rmono, rcoeff in rhs.items():
                    prod = tuple(q + e for q, e in zip(quot, rmono))
                    if self.monomial_degree(prod) <= self.cutoff:
                        nxt[prod] = nxt.get(prod, Fraction(0)) + coeff * rcoeff
            current = {m: c for m, c in nxt.items() if c}
            if not rewritten:
                return current
        raise RewriteCapError(
            f"normalization did not stabilize within {self.rule_iteration_cap} passes"
        )

    def __repr__(self):
        gens = ", ".join(f"{n}:{d}" for n, d in zip(self._names, self._degrees))
        return f"GradedRing([{gens}], cutoff={self.cutoff}, rules={len(self._rules)})"


class RingElement:
    """A normalized element of a :class:`GradedRing`.

    Immutable after construction; equality is exact equality of term maps
    within the same ring.  Arithmetic accepts ``int`` and ``Fraction``
    scalars on either side.
    """

    __slots__ = ("ring", "_terms")

    def __init__(self, ring: GradedRing, terms: Mapping[Monomial, Rational]):
        raw = {mono: Fraction(coeff) for mono, coeff in terms.items()}
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "_terms", ring._normalize(raw))

    def __setattr__(self, name, value):
        raise AttributeError("RingElement is immutable")

    @property
    def terms(self) -> Mapping[Monomial, Fraction]:
        return MappingProxyType(self._terms)

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        return sorted(self._terms.items(), key=lambda kv: self.ring.sort_key(kv[0]))

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> int:
        """Largest total degree with a nonzero term (0 for the zero element)."""
        if not self._terms:
            return 0
        return max(self.ring.monomial_degree(m) for m in self._terms)

    def graded_part(self, k: int) -> RingElement:
        """The sum of terms of total degree exactly ``k``."""
        if k < 0 or k > self.ring.cutoff:
            raise ValueError(f"degree {k} outside [0, {self.ring.cutoff}]")
        picked = {
            m: c for m, c in self._terms.items() if self.ring.monomial_degree(m) == k
        }
        return RingElement(self.ring, picked)

    def is_homogeneous_of(self, k: int) -> bool:
        return all(self.ring.monomial_degree(m) == k for m in self._terms)

    def _coerce(self, other):
        if isinstance(other, RingElement):
            if other.ring is not self.ring:
                raise RingMismatchError("elements belong to different rings")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.scalar(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        raw = dict(self._terms)
        for mono, coeff in o._terms.items():
            raw[mono] = raw.get(mono, Fraction(0)) + coeff
        return RingElement(self.ring, raw)

    __radd__ = __add__

    def __neg__(self):
        return RingElement(self.ring, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        raw: dict[Monomial, Fraction] = {}
        for ma, ca in self._terms.items():
            for mb, cb in o._terms.items():
                prod = tuple(x + y for x, y in zip(ma, mb))
                raw[prod] = raw.get(prod, Fraction(0)) + ca * cb
        return RingElement(self.ring, raw)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division of a ring element by zero")
            return self * (Fraction(1) / Fraction(other))
        return NotImplemented

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = self.ring.one()
        for _ in range(exponent):
            result = result * self
            if result.is_zero:
                break
        return result

    def __eq__(self, other):
        if isinstance(other, RingElement):
            return self.ring is other.ring and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == self.ring.scalar(other)._terms
        return NotImplemented

    def __str__(self):
        if not self._terms:
            return "0"
        out = []
        for mono, coeff in self.sorted_terms():
            mono_str = self.ring.format_monomial(mono)
            magnitude = -coeff if coeff < 0 else coeff
            if not mono_str:
                body = str(magnitude)
            elif magnitude == 1:
                body = mono_str
            else:
                body = f"{magnitude}*{mono_str}"
            if not out:
                out.append(body if coeff > 0 else f"-{body}")
            else:
                out.append(f"+ {body}" if coeff > 0 else f"- {body}")
        return " ".join(out)

    def __repr__(self):
        return f"RingElement({self})"


def _require_same_ring(parts: Sequence[RingElement]) -> GradedRing:
    ring = parts[0].ring
    for part in parts[1:]:
        if part.ring is not ring:
            raise RingMismatchError("elements belong to different rings")
    return ring


def _require_homogeneous(part: RingElement, k: int, label: str):
    if not part.is_homogeneous_of(k):
        raise ValueError(f"{label}[{k}] is not homogeneous of degree {k}")


def exp_nilpotent(a: RingElement) -> RingElement:
    """Exponential sum(a^k / k!) of an element with vanishing degree-0 part.

    Finite because a^k has degree at least k, which exceeds the cutoff for
    large k.  Satisfies exp(a) * exp(b) = exp(a + b).
    """
    if not a.graded_part(0).is_zero:
        raise ValueError("exp_nilpotent requires a vanishing degree-0 part")
    result = a.ring.one()
    power = a.ring.one()
    for k in range(1, a.ring.cutoff + 1):
        power = power * a
        if power.is_zero:
            break
        result = result + power * Fraction(1, factorial(k))
    return result


def log_unipotent(a: RingElement) -> RingElement:
    """Logarithm of an element with degree-0 part 1; inverse of exp_nilpotent."""
    if a.graded_part(0) != a.ring.one():
        raise ValueError("log_unipotent requires degree-0 part equal to 1")
    u = a - 1
    result = a.ring.zero()
    power = a.ring.one()
    for k in range(1, a.ring.cutoff + 1):
        power = power * u
        if power.is_zero:
            break
        result = result + power * Fraction((-1) ** (k + 1), k)
    return result


def chern_from_character(ch_parts: Sequence[RingElement], rank: int) -> list[RingElement]:
    """Recover Chern classes c_0..c_rank from graded character parts.

    The power sums p_k = k! * ch_k and the classes satisfy Newton's
    identities p_k - c_1 p_{k-1} + ... + (-1)^(k-1) c_{k-1} p_1
    + (-1)^k k c_k = 0.  Classes above the ring cutoff come back as zero.
    """
    if not ch_parts:
        raise ValueError("character parts must be non-empty")
    if int(rank) < 1:
        raise ValueError("rank must be a positive integer")
    ring = _require_same_ring(list(ch_parts))
    if ch_parts[0] != ring.scalar(rank):
        raise ValueError("character part 0 must equal the rank")
    for k, part in enumerate(ch_parts):
        _require_homogeneous(part, k, "ch")
    top = min(rank, ring.cutoff)
    p = [ring.zero()]
    for k in range(1, top + 1):
        if k < len(ch_parts):
            p.append(ch_parts[k] * factorial(k))
        else:
            p.append(ring.zero())
    classes = [ring.one()]
    for k in range(1, top + 1):
        acc = ring.zero()
        for j in range(k):
            acc = acc + classes[j] * p[k - j] * ((-1) ** j)
        classes.append(acc * Fraction((-1) ** (k + 1), k))
    classes.extend(ring.zero() for _ in range(rank - top))
    return classes


def character_from_chern(chern: Sequence[RingElement], rank: int) -> list[RingElement]:
    """Graded character parts ch_0..ch_cutoff of a rank-``rank`` class list.

    Inverse of :func:`chern_from_character` up to the degree cutoff; part 0
    equals the rank.
    """
    if not chern:
        raise ValueError("class list must be non-empty")
    if int(rank) < 1:
        raise ValueError("rank must be a positive integer")
    if len(chern) > rank + 1:
        raise ValueError("more Chern classes than the rank allows")
    ring = _require_same_ring(list(chern))
    if chern[0] != ring.one():
        raise ValueError("class 0 must equal 1")
    for k, part in enumerate(chern):
        _require_homogeneous(part, k, "c")
    padded = list(chern) + [ring.zero()] * (rank + 1 - len(chern))
    p = [ring.zero()]
    parts = [ring.scalar(rank)]
    for k in range(1, ring.cutoff + 1):
        acc = ring.zero()
        for j in range(1, min(k - 1, rank) + 1):
            acc = acc + padded[j] * p[k - j] * ((-1) ** (j - 1))
        if k <= rank:
            acc = acc + padded[k] * ((-1) ** (k + 1) * k)
        p.append(acc)
        parts.append(acc * Fraction(1, factorial(k)))
    return parts
