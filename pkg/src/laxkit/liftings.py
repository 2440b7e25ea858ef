"""Fuzzy relation liftings along the functor grammar.

A lifting node mirrors a functor node and says how a relation between two
carriers is extended to a distance between functor elements:

  * IdLift reads the relation itself,
  * ConstLift reads the label hemimetric,
  * Hausdorff (symmetric or one-sided) handles finite sets,
  * KantorovichD / WassersteinD handle finite distributions; both are
    computed through the same exact transportation program, which is
    sound because the sup-over-nonexpansive-pairs and inf-over-couplings
    formulations coincide on finite distributions, and the shared solver
    is cross-checked elsewhere against brute-force coupling enumeration,
  * PairSum / PairMax / Discount / MaybeLift combine and rescale; no
    general law status is claimed for weighted or discounted
    composites, each instance is certified empirically by the law
    suite in laxkit.axioms,
  * KantorovichGrid is a generic sup-over-modalities oracle on a finite
    value grid; it restricts the right-hand table of each candidate pair
    to the companion of the left-hand one, which is lossless for monotone
    modalities, and its value is within one grid step below the true
    supremum when all modalities are nonexpansive.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .core import (
    FuzzyRel,
    ONE,
    StructureError,
    ZERO,
    as_unit,
    companion,
    format_unit,
    inf,
    is_pseudometric,
    sat_sub,
    sup,
)
from .functors import (
    Const,
    DFin,
    DistEl,
    FunctorElement,
    FunctorSpec,
    Id,
    Maybe,
    PFin,
    Pair,
    SetEl,
)
from .modalities import is_dual_closed, resolve_modality, standard_modalities
from .transport import min_cost_transport


class LiftingSpec:
    """Base class of lifting grammar nodes."""


@dataclass(frozen=True)
class IdLift(LiftingSpec):
    pass


@dataclass(frozen=True)
class ConstLift(LiftingSpec):
    pass


@dataclass(frozen=True)
class Hausdorff(LiftingSpec):
    variant: str  # 'sym' | 'left' | 'right'
    sub: LiftingSpec

    def __post_init__(self):
        if self.variant not in ("sym", "left", "right"):
            raise StructureError(f"unknown Hausdorff variant {self.variant!r}")


@dataclass(frozen=True)
class KantorovichD(LiftingSpec):
    sub: LiftingSpec


@dataclass(frozen=True)
class WassersteinD(LiftingSpec):
    sub: LiftingSpec


@dataclass(frozen=True)
class PairSum(LiftingSpec):
    w_left: Fraction
    w_right: Fraction
    left: LiftingSpec
    right: LiftingSpec

    def __post_init__(self):
        for w in (self.w_left, self.w_right):
            if not isinstance(w, Fraction) or w < 0:
                raise StructureError("pair-sum weights must be nonnegative rationals")


@dataclass(frozen=True)
class PairMax(LiftingSpec):
    left: LiftingSpec
    right: LiftingSpec


@dataclass(frozen=True)
class Discount(LiftingSpec):
    factor: Fraction
    sub: LiftingSpec

    def __post_init__(self):
        if not isinstance(self.factor, Fraction) or not ZERO <= self.factor < ONE:
            raise StructureError("discount factor must be a rational in [0, 1)")


@dataclass(frozen=True)
class MaybeLift(LiftingSpec):
    sub: LiftingSpec


@dataclass(frozen=True)
class KantorovichGrid(LiftingSpec):
    modality_names: tuple
    step: Fraction

    def __post_init__(self):
        if self.step <= 0 or (1 / self.step).denominator != 1:
            raise StructureError("grid step must be 1/k for a positive integer k")


# ---------------------------------------------------------------------------
# Shape matching and static bounds


def range_bound(lifting: LiftingSpec, functor: FunctorSpec) -> Fraction:
    """An upper bound for the values this lifting can produce."""
    if isinstance(lifting, IdLift):
        return ONE
    if isinstance(lifting, ConstLift):
        return sup(v for row in functor.metric.values for v in row)
    if isinstance(lifting, Hausdorff):
        return ONE  # a nonempty set against an empty one is at distance 1
    if isinstance(lifting, (KantorovichD, WassersteinD)):
        return range_bound(lifting.sub, functor.sub)
    if isinstance(lifting, PairSum):
        return (
            lifting.w_left * range_bound(lifting.left, functor.left)
            + lifting.w_right * range_bound(lifting.right, functor.right)
        )
    if isinstance(lifting, PairMax):
        return max(
            range_bound(lifting.left, functor.left),
            range_bound(lifting.right, functor.right),
        )
    if isinstance(lifting, Discount):
        return lifting.factor * range_bound(lifting.sub, functor)
    if isinstance(lifting, MaybeLift):
        return ONE  # mixed step/deadlock pairs are at distance 1
    if isinstance(lifting, KantorovichGrid):
        return ONE
    raise StructureError(f"not a lifting spec: {lifting!r}")


def match_lifting(lifting: LiftingSpec, functor: FunctorSpec, path: str = "") -> list:
    """Shape-check a lifting against a functor; returns (path, message) pairs.

    Besides shapes this checks the weight constraints: combined weights must
    keep values inside the unit interval given each component's range bound
    (so a label metric bounded by 1 - lambda admits weight 1 next to a
    lambda-discounted component).
    """
    where = path or "<root>"
    if isinstance(lifting, IdLift):
        return [] if isinstance(functor, Id) else [(where, "IdLift needs the identity functor")]
    if isinstance(lifting, ConstLift):
        return [] if isinstance(functor, Const) else [(where, "ConstLift needs a label component")]
    if isinstance(lifting, Hausdorff):
        if not isinstance(functor, PFin):
            return [(where, "Hausdorff needs a finite-set component")]
        return match_lifting(lifting.sub, functor.sub, f"{path}.sub")
    if isinstance(lifting, (KantorovichD, WassersteinD)):
        if not isinstance(functor, DFin):
            return [(where, "transport liftings need a distribution component")]
        return match_lifting(lifting.sub, functor.sub, f"{path}.sub")
    if isinstance(lifting, PairSum):
        if not isinstance(functor, Pair):
            return [(where, "pair-sum needs a pair component")]
        out = match_lifting(lifting.left, functor.left, f"{path}.left")
        out += match_lifting(lifting.right, functor.right, f"{path}.right")
        if not out:
            bound = range_bound(lifting, functor)
            if bound > 1:
                out.append(
                    (where,
                     f"weighted sum can reach {format_unit(bound)} > 1; "
                     "lower the weights or the label metric's range")
                )
        return out
    if isinstance(lifting, PairMax):
        if not isinstance(functor, Pair):
            return [(where, "pair-max needs a pair component")]
        return (
            match_lifting(lifting.left, functor.left, f"{path}.left")
            + match_lifting(lifting.right, functor.right, f"{path}.right")
        )
    if isinstance(lifting, Discount):
        return match_lifting(lifting.sub, functor, f"{path}.sub")
    if isinstance(lifting, MaybeLift):
        if not isinstance(functor, Maybe):
            return [(where, "MaybeLift needs an optional component")]
        return match_lifting(lifting.sub, functor.sub, f"{path}.sub")
    if isinstance(lifting, KantorovichGrid):
        available = standard_modalities(functor)
        out = []
        for name in lifting.modality_names:
            try:
                lam = resolve_modality(available, name)
            except StructureError as exc:
                out.append((where, str(exc)))
                continue
            if not lam.monotone:
                out.append(
                    (where,
                     f"modality {lam.name} is not monotone; the grid search "
                     "restricts right-hand tables to companions, which is "
                     "only sound for monotone modalities")
                )
        return out
    return [(where, f"not a lifting spec: {lifting!r}")]


def require_match(lifting: LiftingSpec, functor: FunctorSpec) -> None:
    problems = match_lifting(lifting, functor)
    if problems:
        lines = "; ".join(f"{p}: {m}" for p, m in problems)
        raise StructureError(f"lifting does not fit the functor: {lines}")


def claims_converse(lifting: LiftingSpec, functor: FunctorSpec) -> bool:
    """Whether the lifting is expected to preserve relational converse."""
    if isinstance(lifting, IdLift):
        return True
    if isinstance(lifting, ConstLift):
        return is_pseudometric(functor.metric)
    if isinstance(lifting, Hausdorff):
        return lifting.variant == "sym" and claims_converse(lifting.sub, functor.sub)
    if isinstance(lifting, (KantorovichD, WassersteinD)):
        return claims_converse(lifting.sub, functor.sub)
    if isinstance(lifting, (PairSum, PairMax)):
        return claims_converse(lifting.left, functor.left) and claims_converse(
            lifting.right, functor.right
        )
    if isinstance(lifting, Discount):
        return claims_converse(lifting.sub, functor)
    if isinstance(lifting, MaybeLift):
        return claims_converse(lifting.sub, functor.sub)
    if isinstance(lifting, KantorovichGrid):
        return is_dual_closed(
            {
                name: resolve_modality(standard_modalities(functor), name)
                for name in lifting.modality_names
            }
        )
    raise StructureError(f"not a lifting spec: {lifting!r}")


def approximation_slack(lifting: LiftingSpec) -> Fraction:
    """Zero for exact liftings; the grid step wherever a grid oracle occurs."""
    if isinstance(lifting, KantorovichGrid):
        return lifting.step
    slack = ZERO
    for attr in ("sub", "left", "right"):
        child = getattr(lifting, attr, None)
        if isinstance(child, LiftingSpec):
            slack = max(slack, approximation_slack(child))
    return slack


def contraction_factor(lifting: LiftingSpec) -> Fraction:
    """A structural Lipschitz constant of the lifting in its relation.

    Moving every relation entry by delta moves the lifted value by at most
    factor * delta.  Discounted or label-weighted composites contract
    (factor < 1), which turns a fixpoint residual into a bound on the
    remaining gap to the limit; a factor of 1 promises nothing beyond
    nonexpansiveness.
    """
    if isinstance(lifting, IdLift):
        return ONE
    if isinstance(lifting, ConstLift):
        return ZERO  # ignores the relation entirely
    if isinstance(lifting, (Hausdorff, KantorovichD, WassersteinD, MaybeLift)):
        return contraction_factor(lifting.sub)
    if isinstance(lifting, PairSum):
        return (lifting.w_left * contraction_factor(lifting.left)
                + lifting.w_right * contraction_factor(lifting.right))
    if isinstance(lifting, PairMax):
        return max(contraction_factor(lifting.left), contraction_factor(lifting.right))
    if isinstance(lifting, Discount):
        return lifting.factor * contraction_factor(lifting.sub)
    if isinstance(lifting, KantorovichGrid):
        return ONE
    raise StructureError(f"not a lifting spec: {lifting!r}")


# ---------------------------------------------------------------------------
# Evaluation


def lift_value(lifting: LiftingSpec, functor: FunctorSpec, rel: FuzzyRel,
               t1: FunctorElement, t2: FunctorElement) -> Fraction:
    """Distance between two functor elements across a lifted relation.

    t1 lives over rel.source, t2 over rel.target; the lifting must fit the
    functor shape (see require_match).
    """
    if isinstance(lifting, IdLift):
        return rel.at(t1.value, t2.value)
    if isinstance(lifting, ConstLift):
        return functor.metric.at(t1.label, t2.label)
    if isinstance(lifting, Hausdorff):
        return _hausdorff(lifting, functor, rel, t1, t2)
    if isinstance(lifting, (KantorovichD, WassersteinD)):
        return _transport(lifting, functor, rel, t1, t2)
    if isinstance(lifting, PairSum):
        value = (
            lifting.w_left * lift_value(lifting.left, functor.left, rel, t1.left, t2.left)
            + lifting.w_right
            * lift_value(lifting.right, functor.right, rel, t1.right, t2.right)
        )
        return as_unit(value)
    if isinstance(lifting, PairMax):
        return max(
            lift_value(lifting.left, functor.left, rel, t1.left, t2.left),
            lift_value(lifting.right, functor.right, rel, t1.right, t2.right),
        )
    if isinstance(lifting, Discount):
        return lifting.factor * lift_value(lifting.sub, functor, rel, t1, t2)
    if isinstance(lifting, MaybeLift):
        if t1.value is None and t2.value is None:
            return ZERO
        if t1.value is None or t2.value is None:
            return ONE
        return lift_value(lifting.sub, functor.sub, rel, t1.value, t2.value)
    if isinstance(lifting, KantorovichGrid):
        modalities = standard_modalities(functor)
        chosen = [resolve_modality(modalities, n) for n in lifting.modality_names]
        return grid_kantorovich_value(chosen, lifting.step, rel, t1, t2)
    raise StructureError(f"not a lifting spec: {lifting!r}")


def _hausdorff(lifting, functor, rel, t1, t2):
    if not isinstance(t1, SetEl) or not isinstance(t2, SetEl):
        raise StructureError("Hausdorff lifting expects set elements")

    def d(a, b):
        return lift_value(lifting.sub, functor.sub, rel, a, b)

    left = lambda: sup(inf(d(a, b) for b in t2.members) for a in t1.members)
    right = lambda: sup(inf(d(a, b) for a in t1.members) for b in t2.members)
    if lifting.variant == "left":
        return left()
    if lifting.variant == "right":
        return right()
    return max(left(), right())


def _transport(lifting, functor, rel, t1, t2):
    if not isinstance(t1, DistEl) or not isinstance(t2, DistEl):
        raise StructureError("transport liftings expect distribution elements")
    mu = [p for _, p in t1.pairs]
    nu = [p for _, p in t2.pairs]
    cost = [
        [lift_value(lifting.sub, functor.sub, rel, a, b) for b, _ in t2.pairs]
        for a, _ in t1.pairs
    ]
    return min_cost_transport(mu, nu, cost).value


_GRID_CAP = 2_000_000


def grid_kantorovich_value(modalities, step: Fraction, rel: FuzzyRel,
                           t1: FunctorElement, t2: FunctorElement) -> Fraction:
    """Sup over modalities and grid-valued left tables, right = companion.

    Returns a value in [true - step, true] when all modalities are
    nonexpansive (see grid_error_bound); exact whenever the optimum is
    attained on the grid.
    """
    levels = []
    k = 0
    while True:
        v = k * step
        if v > 1:
            break
        levels.append(v)
        k += 1
    if levels[-1] != 1:
        levels.append(ONE)
    source = rel.source.elements
    best = ZERO
    for lam in modalities:
        if not lam.monotone:
            raise StructureError(
                f"modality {lam.name} is not monotone; refusing the companion-"
                "restricted grid search"
            )
        dims = lam.arity * len(source)
        if len(levels) ** dims > _GRID_CAP:
            raise StructureError(
                f"grid search over {len(levels)}^{dims} tables exceeds the cap; "
                "use a coarser step or smaller carriers"
            )
        for combo in product(levels, repeat=dims):
            fs = tuple(
                dict(zip(source, combo[i * len(source):(i + 1) * len(source)]))
                for i in range(lam.arity)
            )
            gs = tuple(companion(rel, f) for f in fs)
            value = sat_sub(lam.evaluator(t1, fs), lam.evaluator(t2, gs))
            if value > best:
                best = value
    return best


def grid_error_bound(modalities, step: Fraction) -> Fraction:
    """The guaranteed gap of the grid oracle below the true supremum.

    Snapping a left table down to the grid moves it by less than one step;
    companions follow suit, and nonexpansive modalities translate both
    movements into at most one step of value loss.  Refuses modalities
    without the nonexpansiveness flag, for which no bound is claimed.
    """
    for lam in modalities:
        if not lam.nonexpansive:
            raise StructureError(
                f"modality {lam.name} is not flagged nonexpansive; the grid "
                "oracle carries no error bound for it"
            )
    return step
