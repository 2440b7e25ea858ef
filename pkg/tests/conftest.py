import os
import sys
from fractions import Fraction as F

import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

import laxkit as lk

FIXTURES = os.path.join(os.path.dirname(__file__), "..", "fixtures")


def fixture_path(name: str) -> str:
    return os.path.join(FIXTURES, name)


def number_const(values):
    labels = lk.Carrier(tuple(values))
    nums = {v: F(v) for v in values}
    metric = lk.FuzzyRel.from_function(labels, labels, lambda x, y: abs(nums[x] - nums[y]))
    return lk.Const(labels, metric)


def rel_from(source, target, entries, default=F(1)):
    return lk.FuzzyRel.from_function(
        source, target, lambda a, b: entries.get((a, b), default)
    )


@pytest.fixture(scope="session")
def labelled_frames():
    """Two small labelled Kripke frames, their lifting, and the tight
    bisimulation certificate between them."""
    const = number_const(("0", "1/5", "2/5", "7/10", "4/5"))
    functor = lk.Pair(const, lk.PFin(lk.Id()))

    def state(label, succs):
        return lk.PairEl(lk.ConstEl(label), lk.fset(lk.IdEl(s) for s in succs))

    sys_a = lk.Coalgebra.of(functor, lk.Carrier.of("a1", "a2", "a3"), {
        "a1": state("7/10", ["a2", "a3"]),
        "a2": state("1/5", []),
        "a3": state("4/5", []),
    })
    sys_b = lk.Coalgebra.of(functor, lk.Carrier.of("b1", "b2", "b3"), {
        "b1": state("2/5", ["b2", "b3"]),
        "b2": state("7/10", []),
        "b3": state("0", []),
    })
    lifting = lk.PairSum(F(1, 2), F(1, 2), lk.ConstLift(), lk.Hausdorff("sym", lk.IdLift()))
    rel = rel_from(sys_a.carrier, sys_b.carrier, {
        ("a1", "b1"): F(1, 5), ("a2", "b3"): F(1, 10), ("a3", "b2"): F(1, 20),
    })
    cert = lk.Certificate(rel, "bisimulation")
    return sys_a, sys_b, functor, lifting, cert


@pytest.fixture(scope="session")
def weighted_loops():
    """One-state weighted transition systems whose distance chain is an
    infinite geometric sum (limit 1/2, never attained)."""
    const = number_const(("0", "1/4"))
    functor = lk.PFin(lk.Pair(const, lk.Id()))
    lifting = lk.Hausdorff("left", lk.PairSum(F(1), F(1, 2), lk.ConstLift(), lk.IdLift()))
    sys_a = lk.Coalgebra.of(functor, lk.Carrier.of("s"), {
        "s": lk.fset([lk.PairEl(lk.ConstEl("0"), lk.IdEl("s"))]),
    })
    sys_b = lk.Coalgebra.of(functor, lk.Carrier.of("t"), {
        "t": lk.fset([lk.PairEl(lk.ConstEl("1/4"), lk.IdEl("t"))]),
    })
    return sys_a, sys_b, functor, lifting


@pytest.fixture(scope="session")
def prob_deadlock():
    """Probabilistic system with a deadlock state."""
    functor = lk.Maybe(lk.DFin(lk.Id()))
    system = lk.Coalgebra.of(functor, lk.Carrier.of("u0", "u1", "u2"), {
        "u0": lk.just(lk.fdist([(lk.IdEl("u1"), F(1, 3)), (lk.IdEl("u2"), F(2, 3))])),
        "u1": lk.just(lk.fdist([(lk.IdEl("u1"), F(1))])),
        "u2": lk.NOTHING,
    })
    lifting = lk.MaybeLift(lk.KantorovichD(lk.IdLift()))
    return system, functor, lifting
