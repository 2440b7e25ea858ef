import random
from fractions import Fraction as F

import pytest

import laxkit as lk
from laxkit import (
    Carrier,
    ConstLift,
    DFin,
    Discount,
    FuzzyRel,
    Hausdorff,
    Id,
    IdEl,
    IdLift,
    KantorovichD,
    KantorovichGrid,
    MaybeLift,
    NOTHING,
    PFin,
    StructureError,
    WassersteinD,
    claims_converse,
    fdist,
    fset,
    grid_error_bound,
    grid_kantorovich_value,
    just,
    lift_value,
    match_lifting,
    range_bound,
    sup_distance,
)
from laxkit.axioms import rand_carrier, rand_element, rand_hemimetric, rand_rel
from laxkit.modalities import PredicateLifting, standard_modalities
from laxkit.transport import min_sup_over_set_couplings
from tests.conftest import number_const, rel_from

SET_FUNCTOR = PFin(Id())
DIST_FUNCTOR = DFin(Id())
H_SYM = Hausdorff("sym", IdLift())
H_LEFT = Hausdorff("left", IdLift())
H_RIGHT = Hausdorff("right", IdLift())


def two_carriers():
    return Carrier.of("x1", "x2"), Carrier.of("y1", "y2")


def test_worked_example_values(labelled_frames):
    sys_a, sys_b, functor, lifting, cert = labelled_frames
    rel = cert.relation
    assert lift_value(lifting, functor, rel, sys_a.step("a1"), sys_b.step("b1")) == F(1, 5)
    assert lift_value(lifting, functor, rel, sys_a.step("a2"), sys_b.step("b3")) == F(1, 10)
    assert lift_value(lifting, functor, rel, sys_a.step("a3"), sys_b.step("b2")) == F(1, 20)


def test_hausdorff_empty_set_conventions():
    a, b = two_carriers()
    rel = rel_from(a, b, {("x1", "y1"): F(1, 3)})
    singleton_a = fset([IdEl("x1")])
    singleton_b = fset([IdEl("y1")])
    empty = fset([])
    assert lift_value(H_SYM, SET_FUNCTOR, rel, singleton_a, singleton_b) == F(1, 3)
    assert lift_value(H_SYM, SET_FUNCTOR, rel, empty, empty) == 0
    assert lift_value(H_SYM, SET_FUNCTOR, rel, singleton_a, empty) == 1
    assert lift_value(H_LEFT, SET_FUNCTOR, rel, empty, singleton_b) == 0
    assert lift_value(H_RIGHT, SET_FUNCTOR, rel, empty, singleton_b) == 1


def test_hausdorff_one_sided_split():
    a, b = two_carriers()
    rel = rel_from(a, b, {("x1", "y1"): F(0), ("x2", "y1"): F(1)})
    u = fset([IdEl("x1"), IdEl("x2")])
    v = fset([IdEl("y1")])
    assert lift_value(H_LEFT, SET_FUNCTOR, rel, u, v) == 1
    assert lift_value(H_RIGHT, SET_FUNCTOR, rel, u, v) == 0
    assert lift_value(H_SYM, SET_FUNCTOR, rel, u, v) == 1


def test_transport_lifting_point_masses():
    a, b = two_carriers()
    rel = rel_from(a, b, {("x1", "y1"): F(2, 5)})
    for lifting in (KantorovichD(IdLift()), WassersteinD(IdLift())):
        assert lift_value(
            lifting, DIST_FUNCTOR, rel,
            fdist([(IdEl("x1"), F(1))]), fdist([(IdEl("y1"), F(1))]),
        ) == F(2, 5)
        # unique coupling: split source against a point target
        split = fdist([(IdEl("x1"), F(1, 2)), (IdEl("x2"), F(1, 2))])
        point = fdist([(IdEl("y1"), F(1))])
        expected = F(1, 2) * rel.at("x1", "y1") + F(1, 2) * rel.at("x2", "y1")
        assert lift_value(lifting, DIST_FUNCTOR, rel, split, point) == expected


def test_kantorovich_equals_wasserstein_by_shared_solver():
    rng = random.Random("kw")
    for _ in range(30):
        a = rand_carrier(rng, "a", 4)
        b = rand_carrier(rng, "b", 4)
        rel = rand_rel(rng, a, b)
        t1 = rand_element(rng, DIST_FUNCTOR, a)
        t2 = rand_element(rng, DIST_FUNCTOR, b)
        k = lift_value(KantorovichD(IdLift()), DIST_FUNCTOR, rel, t1, t2)
        w = lift_value(WassersteinD(IdLift()), DIST_FUNCTOR, rel, t1, t2)
        assert k == w


def test_hausdorff_is_min_over_set_couplings():
    rng = random.Random("hw")
    for _ in range(60):
        a = rand_carrier(rng, "a", 4)
        b = rand_carrier(rng, "b", 4)
        rel = rand_rel(rng, a, b)
        t1 = rand_element(rng, SET_FUNCTOR, a)
        t2 = rand_element(rng, SET_FUNCTOR, b)
        m1 = [m.value for m in t1.members]
        m2 = [m.value for m in t2.members]
        coupled = min_sup_over_set_couplings(
            len(m1), len(m2), lambda i, j: rel.at(m1[i], m2[j])
        )
        assert lift_value(H_SYM, SET_FUNCTOR, rel, t1, t2) == coupled


def test_pair_and_discount_combinators(labelled_frames):
    _, _, functor, lifting, _ = labelled_frames
    const = functor.left
    a = Carrier.of("p")
    b = Carrier.of("q")
    rel = rel_from(a, b, {("p", "q"): F(1)})
    t1 = lk.PairEl(lk.ConstEl("7/10"), fset([lk.IdEl("p")]))
    t2 = lk.PairEl(lk.ConstEl("2/5"), fset([lk.IdEl("q")]))
    # weighted sum: 1/2 * 3/10 + 1/2 * 1
    assert lift_value(lifting, functor, rel, t1, t2) == F(13, 20)
    pmax = lk.PairMax(ConstLift(), Hausdorff("sym", IdLift()))
    assert lift_value(pmax, functor, rel, t1, t2) == F(1)
    half = Discount(F(1, 2), lifting)
    assert lift_value(half, functor, rel, t1, t2) == F(13, 40)


def test_maybe_lift_deadlock_conventions():
    functor = lk.Maybe(DIST_FUNCTOR)
    lifting = MaybeLift(KantorovichD(IdLift()))
    a, b = two_carriers()
    rel = rel_from(a, b, {("x1", "y1"): F(1, 4)})
    dist_a = just(fdist([(IdEl("x1"), F(1))]))
    dist_b = just(fdist([(IdEl("y1"), F(1))]))
    assert lift_value(lifting, functor, rel, NOTHING, NOTHING) == 0
    assert lift_value(lifting, functor, rel, NOTHING, dist_b) == 1
    assert lift_value(lifting, functor, rel, dist_a, NOTHING) == 1
    assert lift_value(lifting, functor, rel, dist_a, dist_b) == F(1, 4)


def test_match_lifting_shapes():
    assert match_lifting(H_SYM, SET_FUNCTOR) == []
    assert match_lifting(H_SYM, DIST_FUNCTOR) != []
    assert match_lifting(KantorovichD(IdLift()), SET_FUNCTOR) != []
    const = number_const(("0", "1/4"))
    functor = lk.Pair(const, Id())
    heavy = lk.PairSum(F(1), F(1), ConstLift(), IdLift())
    problems = match_lifting(heavy, functor)
    assert problems and "weighted sum can reach" in problems[0][1]
    ok = lk.PairSum(F(1), F(1, 2), ConstLift(), IdLift())
    assert match_lifting(ok, functor) == []  # label range 1/4 <= 1 - 1/2


def test_range_bound_tracks_discounts():
    const = number_const(("0", "1/4"))
    functor = lk.Pair(const, Id())
    assert range_bound(ConstLift(), const) == F(1, 4)
    assert range_bound(Discount(F(1, 2), IdLift()), Id()) == F(1, 2)
    combo = lk.PairSum(F(1), F(1, 2), ConstLift(), IdLift())
    assert range_bound(combo, functor) == F(3, 4)


def test_claims_converse():
    assert claims_converse(H_SYM, SET_FUNCTOR)
    assert not claims_converse(H_LEFT, SET_FUNCTOR)
    assert not claims_converse(H_RIGHT, SET_FUNCTOR)
    assert claims_converse(KantorovichD(IdLift()), DIST_FUNCTOR)
    assert claims_converse(KantorovichGrid(("dia", "box"), F(1, 4)), SET_FUNCTOR)
    assert not claims_converse(KantorovichGrid(("dia",), F(1, 4)), SET_FUNCTOR)


def test_grid_matches_one_sided_hausdorff_within_step():
    rng = random.Random("grid")
    step = F(1, 8)
    grid = KantorovichGrid(("dia",), step)
    for _ in range(25):
        a = rand_carrier(rng, "a", 3)
        b = rand_carrier(rng, "b", 3)
        rel = rand_rel(rng, a, b)
        t1 = rand_element(rng, SET_FUNCTOR, a)
        t2 = rand_element(rng, SET_FUNCTOR, b)
        closed = lift_value(H_LEFT, SET_FUNCTOR, rel, t1, t2)
        approx = lift_value(grid, SET_FUNCTOR, rel, t1, t2)
        assert approx <= closed <= approx + step


def test_grid_exact_on_single_state_carriers():
    step = F(1, 5)
    grid = KantorovichGrid(("dia",), step)
    a, b = Carrier.of("x"), Carrier.of("y")
    for value in (F(0), F(2, 5), F(1)):
        rel = rel_from(a, b, {("x", "y"): value})
        t1, t2 = fset([IdEl("x")]), fset([IdEl("y")])
        closed = lift_value(H_LEFT, SET_FUNCTOR, rel, t1, t2)
        approx = lift_value(grid, SET_FUNCTOR, rel, t1, t2)
        assert approx <= closed <= approx + step


def test_grid_on_all_one_relation():
    step = F(1, 8)
    grid = KantorovichGrid(("dia",), step)
    a, b = two_carriers()
    rel = FuzzyRel.constant(a, b, F(1))
    t1 = fset([IdEl("x1"), IdEl("x2")])
    t2 = fset([IdEl("y1")])
    closed = lift_value(H_LEFT, SET_FUNCTOR, rel, t1, t2)
    approx = lift_value(grid, SET_FUNCTOR, rel, t1, t2)
    assert approx <= closed <= approx + step


def test_grid_error_bound_contract():
    mods = standard_modalities(SET_FUNCTOR)
    assert grid_error_bound([mods["dia"]], F(1, 16)) == F(1, 16)
    clamped = PredicateLifting("jump", 1, True, False, mods["dia"].evaluator)
    with pytest.raises(StructureError):
        grid_error_bound([clamped], F(1, 16))


def test_grid_refuses_non_monotone():
    a, b = two_carriers()
    rel = FuzzyRel.constant(a, b, F(1))
    flip = PredicateLifting(
        "flip", 1, False, True,
        lambda el, args: F(1) - max((args[0][m.value] for m in el.members), default=F(1)),
    )
    with pytest.raises(StructureError):
        grid_kantorovich_value([flip], F(1, 2), rel, fset([IdEl("x1")]), fset([IdEl("y1")]))


def test_nonexpansive_in_the_relation():
    rng = random.Random("nonexp")
    const = number_const(("0", "1/4"))
    labelled = lk.Pair(const, SET_FUNCTOR)
    cases = [
        (H_SYM, SET_FUNCTOR),
        (H_LEFT, SET_FUNCTOR),
        (KantorovichD(IdLift()), DIST_FUNCTOR),
        (MaybeLift(KantorovichD(IdLift())), lk.Maybe(DIST_FUNCTOR)),
        (lk.PairSum(F(1, 2), F(1, 2), ConstLift(), Hausdorff("sym", IdLift())), labelled),
        (Hausdorff("left", lk.PairSum(F(1), F(1, 2), ConstLift(), IdLift())),
         PFin(lk.Pair(const, Id()))),
        (KantorovichGrid(("dia",), F(1, 4)), SET_FUNCTOR),
    ]
    for lifting, functor in cases:
        for _ in range(25):
            a = rand_carrier(rng, "a", 4)
            b = rand_carrier(rng, "b", 4)
            r1 = rand_rel(rng, a, b)
            r2 = rand_rel(rng, a, b)
            t1 = rand_element(rng, functor, a)
            t2 = rand_element(rng, functor, b)
            gap = abs(
                lift_value(lifting, functor, r1, t1, t2)
                - lift_value(lifting, functor, r2, t1, t2)
            )
            assert gap <= sup_distance(r1, r2)


def test_lifted_hemimetric_stays_hemimetric():
    rng = random.Random("hemi")
    for lifting, functor in ((H_SYM, SET_FUNCTOR), (KantorovichD(IdLift()), DIST_FUNCTOR)):
        for _ in range(25):
            a = rand_carrier(rng, "a", 4)
            d = rand_hemimetric(rng, a, symmetric=False)
            ts = [rand_element(rng, functor, a) for _ in range(3)]
            for t in ts:
                assert lift_value(lifting, functor, d, t, t) == 0
            lhs = lift_value(lifting, functor, d, ts[0], ts[2])
            rhs = lk.sat_add(
                lift_value(lifting, functor, d, ts[0], ts[1]),
                lift_value(lifting, functor, d, ts[1], ts[2]),
            )
            assert lhs <= rhs


def test_lifted_pseudometric_stays_symmetric():
    rng = random.Random("pseudo")
    for _ in range(25):
        a = rand_carrier(rng, "a", 4)
        d = rand_hemimetric(rng, a, symmetric=True)
        t1 = rand_element(rng, SET_FUNCTOR, a)
        t2 = rand_element(rng, SET_FUNCTOR, a)
        assert lift_value(H_SYM, SET_FUNCTOR, d, t1, t2) == \
            lift_value(H_SYM, SET_FUNCTOR, d, t2, t1)
