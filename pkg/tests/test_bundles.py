from fractions import Fraction
from math import lcm

import pytest
from hypothesis import given
import hypothesis.strategies as st

from parachern.chow import ChowDescription, build_variety, integrate, make_cover
from parachern.bundles import (
    OrdinaryBundleClass,
    ParabolicBundle,
    character_element,
    chern_character,
    chern_polynomial,
    cover_bundle,
    cover_order,
    direct_sum,
    dual,
    line_bundle,
    parabolic_chern,
    relation_classes,
    tensor,
    trivial_line,
    weight_multiplicities,
)
from parachern.rings import exp_nilpotent


@pytest.fixture(scope="module")
def surface():
    return build_variety(ChowDescription("X", 2, ("D1",)))


@pytest.fixture(scope="module")
def two_divisor_surface():
    return build_variety(
        ChowDescription("S", 2, ("D1", "D2"), relations=(({"D1": 1, "D2": 1}, ()),))
    )


@pytest.fixture(scope="module")
def curve():
    return build_variety(ChowDescription("C", 1, ("p",), integrals={(("p", 1),): 1}))


def worked_example(surface):
    ring = surface.ring
    third, two_thirds = Fraction(1, 3), Fraction(2, 3)
    return ParabolicBundle(
        surface,
        (
            (trivial_line(ring), {"D1": third}),
            (trivial_line(ring), {"D1": two_thirds}),
        ),
    )


# --- construction and bookkeeping -------------------------------------------


def test_ordinary_bundle_validation(surface):
    ring = surface.ring
    d1 = ring.generator("D1")
    with pytest.raises(ValueError):
        OrdinaryBundleClass(0, ring.one())
    with pytest.raises(ValueError):
        OrdinaryBundleClass(1, 2 * ring.one())
    with pytest.raises(ValueError):
        OrdinaryBundleClass(1, 1 + d1 + d1 ** 2)  # degree-2 part above rank 1
    ok = OrdinaryBundleClass(2, 1 + d1 + d1 ** 2)
    assert ok.chern_list() == [ring.one(), d1, d1 ** 2]


def test_parabolic_validation(surface):
    ring = surface.ring
    with pytest.raises(ValueError):
        ParabolicBundle(surface, ())
    with pytest.raises(ValueError):
        ParabolicBundle(surface, ((trivial_line(ring), {"D1": Fraction(3, 2)}),))
    with pytest.raises(ValueError):
        ParabolicBundle(surface, ((trivial_line(ring), {"D9": Fraction(1, 2)}),))
    with pytest.raises(ValueError):
        ParabolicBundle(
            surface,
            ((trivial_line(ring), {"D1": Fraction(1, 7)}),),
            max_weight_denominator=5,
        )


def test_cover_order(surface):
    E = worked_example(surface)
    assert cover_order(E) == 3
    ring = surface.ring
    plain = ParabolicBundle(surface, ((trivial_line(ring), {}),))
    assert cover_order(plain) == 1
    Y = build_variety(ChowDescription("Y", 2, ("D1", "D2")))
    F = ParabolicBundle(
        Y,
        ((trivial_line(Y.ring), {"D1": Fraction(1, 2), "D2": Fraction(1, 3)}),),
    )
    assert cover_order(F) == 6


def test_weight_multiplicities(surface):
    E = worked_example(surface)
    assert weight_multiplicities(E, "D1") == [
        (Fraction(1, 3), 1),
        (Fraction(2, 3), 1),
    ]
    ring = surface.ring
    merged = ParabolicBundle(
        surface,
        (
            (trivial_line(ring), {"D1": Fraction(1, 2)}),
            (trivial_line(ring), {"D1": Fraction(1, 2)}),
        ),
    )
    assert weight_multiplicities(merged, "D1") == [(Fraction(1, 2), 2)]
    plain = ParabolicBundle(surface, ((OrdinaryBundleClass(2, ring.one()), {}),))
    assert weight_multiplicities(plain, "D1") == [(Fraction(0), 2)]
    with pytest.raises(ValueError):
        weight_multiplicities(plain, "nope")
    assert sum(m for _, m in weight_multiplicities(E, "D1")) == E.rank


def test_direct_sum(surface):
    E = worked_example(surface)
    both = direct_sum(E, E)
    assert both.rank == 4
    assert len(both.summands) == 4
    with pytest.raises(ValueError):
        direct_sum(E, worked_example(build_variety(ChowDescription("Z", 2, ("D1",)))))


# --- dual and tensor ---------------------------------------------------------


def test_dual_single_weight(surface):
    ring = surface.ring
    d1 = ring.generator("D1")
    E = ParabolicBundle(surface, ((trivial_line(ring), {"D1": Fraction(1, 3)}),))
    D = dual(E)
    bundle, weights = D.summands[0]
    assert dict(weights) == {"D1": Fraction(2, 3)}
    assert bundle.total_chern == line_bundle(ring, -d1).total_chern  # O(-D1)
    assert character_element(D) == exp_nilpotent(-d1 / 3)


def test_dual_fixes_weightless(surface):
    ring = surface.ring
    E = ParabolicBundle(surface, ((trivial_line(ring), {}),))
    D = dual(E)
    assert D.summands[0][0].total_chern == ring.one()
    assert D.summands[0][1] == ()


def test_dual_involution_on_character(surface):
    E = worked_example(surface)
    assert character_element(dual(dual(E))) == character_element(E)


def test_tensor_carry(surface):
    ring = surface.ring
    d1 = ring.generator("D1")
    E = ParabolicBundle(surface, ((trivial_line(ring), {"D1": Fraction(2, 3)}),))
    T = tensor(E, E)
    bundle, weights = T.summands[0]
    assert dict(weights) == {"D1": Fraction(1, 3)}
    assert bundle.total_chern == 1 + d1  # carried into an integral twist
    assert character_element(T) == exp_nilpotent(Fraction(4, 3) * d1)


def test_tensor_no_carry(surface):
    ring = surface.ring
    E = ParabolicBundle(surface, ((trivial_line(ring), {"D1": Fraction(1, 3)}),))
    T = tensor(E, E)
    bundle, weights = T.summands[0]
    assert dict(weights) == {"D1": Fraction(2, 3)}
    assert bundle.total_chern == ring.one()


def test_tensor_unit(surface):
    ring = surface.ring
    E = worked_example(surface)
    unit = ParabolicBundle(surface, ((trivial_line(ring), {}),))
    T = tensor(E, unit)
    assert character_element(T) == character_element(E)
    assert parabolic_chern(T) == parabolic_chern(E)


# --- the cover bundle --------------------------------------------------------


def test_cover_bundle_worked_example(surface):
    E = worked_example(surface)
    cm = make_cover(surface, 3)
    up = cover_bundle(E, cm)
    t = cm.divisor("D1")
    assert up.total_chern == 1 + 3 * t + 2 * t ** 2
    assert up.rank == 2


def test_cover_bundle_weightless_identity(surface):
    ring = surface.ring
    d1 = ring.generator("D1")
    V = OrdinaryBundleClass(2, 1 + d1 + d1 ** 2)
    E = ParabolicBundle(surface, ((V, {}),))
    cm = make_cover(surface, 1)
    up = cover_bundle(E, cm)
    assert up.total_chern == cm.pullback(V.total_chern)


def test_cover_bundle_disjoint_divisors(two_divisor_surface):
    S = two_divisor_surface
    E = ParabolicBundle(
        S,
        ((trivial_line(S.ring), {"D1": Fraction(1, 2), "D2": Fraction(1, 2)}),),
    )
    cm = make_cover(S, 2)
    up = cover_bundle(E, cm)
    assert up.total_chern == 1 + cm.divisor("D1") + cm.divisor("D2")


def test_cover_bundle_requires_compatible_order(surface):
    E = worked_example(surface)
    with pytest.raises(ValueError):
        cover_bundle(E, make_cover(surface, 2))
    # any multiple of the bundle's own order works
    up = cover_bundle(E, make_cover(surface, 6))
    assert up.rank == 2


# --- Chern data --------------------------------------------------------------


def test_parabolic_chern_worked_example(surface):
    E = worked_example(surface)
    ring = surface.ring
    d1 = ring.generator("D1")
    assert parabolic_chern(E) == [ring.one(), d1, Fraction(2, 9) * d1 ** 2]


def test_parabolic_chern_weightless_is_ordinary(surface):
    ring = surface.ring
    d1 = ring.generator("D1")
    V = OrdinaryBundleClass(2, 1 + 2 * d1 + d1 ** 2)
    E = ParabolicBundle(surface, ((V, {}),))
    assert cover_order(E) == 1
    assert parabolic_chern(E) == V.chern_list()


def test_parabolic_chern_curve(curve):
    p = curve.ring.generator("p")
    L = ParabolicBundle(curve, ((trivial_line(curve.ring), {"p": Fraction(1, 2)}),))
    classes = parabolic_chern(L)
    assert classes == [curve.ring.one(), p / 2]
    assert integrate(curve, classes[1]) == Fraction(1, 2)
    assert integrate(curve, character_element(L)) == Fraction(1, 2)


def test_relation_classes(surface):
    E = worked_example(surface)
    ring = surface.ring
    d1 = ring.generator("D1")
    tilde = relation_classes(E)
    assert tilde[0] == ring.scalar(Fraction(1, 9))
    assert tilde[1] == d1 / 3
    assert tilde[2] == Fraction(2, 9) * d1 ** 2


def test_relation_classes_weightless(surface):
    ring = surface.ring
    d1 = ring.generator("D1")
    V = OrdinaryBundleClass(2, 1 + d1)
    E = ParabolicBundle(surface, ((V, {}),))
    assert relation_classes(E) == parabolic_chern(E)


def test_relation_class_normalization_rank1(curve):
    L = ParabolicBundle(curve, ((trivial_line(curve.ring), {"p": Fraction(1, 2)}),))
    assert relation_classes(L)[0] == curve.ring.scalar(Fraction(1, 2))


def test_chern_character_worked_example(surface):
    E = worked_example(surface)
    ring = surface.ring
    d1 = ring.generator("D1")
    assert chern_character(E) == [ring.scalar(2), d1, Fraction(5, 18) * d1 ** 2]


def test_chern_character_trivial(surface):
    ring = surface.ring
    E = ParabolicBundle(surface, ((OrdinaryBundleClass(3, ring.one()), {}),))
    assert chern_character(E) == [ring.scalar(3), ring.zero(), ring.zero()]


def test_chern_polynomial_whitney_by_hand(surface):
    # (1 + 1/3 D1 t)(1 + 2/3 D1 t) = 1 + D1 t + 2/9 D1^2 t^2
    ring = surface.ring
    d1 = ring.generator("D1")
    a = ParabolicBundle(surface, ((trivial_line(ring), {"D1": Fraction(1, 3)}),))
    b = ParabolicBundle(surface, ((trivial_line(ring), {"D1": Fraction(2, 3)}),))
    ca, cb = chern_polynomial(a), chern_polynomial(b)
    assert ca == [ring.one(), d1 / 3]
    assert cb == [ring.one(), Fraction(2, 3) * d1]
    combined = chern_polynomial(direct_sum(a, b))
    product = [
        ca[0] * cb[0],
        ca[0] * cb[1] + ca[1] * cb[0],
        ca[1] * cb[1],
    ]
    assert combined == product
    assert combined == [ring.one(), d1, Fraction(2, 9) * d1 ** 2]


def test_chern_polynomial_padding(surface):
    E = worked_example(surface)
    padded = chern_polynomial(E, up_to=4)
    assert len(padded) == 5
    assert padded[3].is_zero and padded[4].is_zero
    truncated = chern_polynomial(E, up_to=1)
    assert truncated == parabolic_chern(E)[:2]


# --- structural properties ---------------------------------------------------


def weight_strategy():
    return st.fractions(min_value=0, max_value=Fraction(11, 12), max_denominator=12)


@st.composite
def random_bundle(draw, variety):
    ring = variety.ring
    summands = []
    for _ in range(draw(st.integers(min_value=1, max_value=3))):
        rank = draw(st.integers(min_value=1, max_value=2))
        d1 = ring.generator("D1")
        c1 = draw(st.integers(min_value=-2, max_value=2)) * d1
        total = ring.one() + (c1 if rank >= 1 else ring.zero())
        if rank >= 2:
            total = total + draw(st.integers(min_value=-1, max_value=2)) * d1 ** 2
        bundle = OrdinaryBundleClass(rank, total)
        weights = {"D1": draw(weight_strategy())}
        summands.append((bundle, weights))
    return ParabolicBundle(variety, tuple(summands))


@given(st.data())
def test_two_path_character_consistency(data):
    variety = build_variety(ChowDescription("X", 2, ("D1",)))
    E = data.draw(random_bundle(variety))
    cm = make_cover(variety, cover_order(E))
    assert cm.pushdown(cover_bundle(E, cm).character()) == character_element(E)


@given(st.data())
def test_big_n_dual_and_sum(data):
    variety = build_variety(ChowDescription("X", 2, ("D1",)))
    E = data.draw(random_bundle(variety))
    F = data.draw(random_bundle(variety))
    assert cover_order(dual(E)) == cover_order(E)
    assert cover_order(direct_sum(E, F)) == lcm(cover_order(E), cover_order(F))
    assert lcm(cover_order(E), cover_order(F)) % cover_order(tensor(E, F)) == 0


@given(st.data())
def test_dual_negates_odd_classes(data):
    variety = build_variety(ChowDescription("X", 2, ("D1",)))
    E = data.draw(random_bundle(variety))
    cd = parabolic_chern(dual(E))
    cc = parabolic_chern(E)
    for i, (a, b) in enumerate(zip(cd, cc)):
        assert a == (b if i % 2 == 0 else -b)


@given(st.data())
def test_tensor_multiplies_characters(data):
    variety = build_variety(ChowDescription("X", 2, ("D1",)))
    E = data.draw(random_bundle(variety))
    F = data.draw(random_bundle(variety))
    assert character_element(tensor(E, F)) == character_element(E) * character_element(F)
