"""Compositional functor grammar and its elements.

The supported transition types are generated by

    Id | Const(labels, metric) | PFin(F) | DFin(F) | Pair(F, G) | Maybe(F)

with Id at the leaves.  Elements are tagged trees mirroring the grammar:
finite sets (set semantics, members deduplicated), finitely supported
distributions (merged on collision, pushforward semantics), ordered pairs,
labels, optional values, and carrier elements at Id positions.

Elements are immutable, hashable and carry a cached canonical sort key, so
sets and distributions have a reproducible member order that does not
depend on Python's per-process string hashing.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional

from .core import Carrier, FuzzyRel, StructureError, ZERO, format_unit, is_hemimetric


# ---------------------------------------------------------------------------
# Functor grammar


class FunctorSpec:
    """Base class of grammar nodes."""


@dataclass(frozen=True)
class Id(FunctorSpec):
    pass


@dataclass(frozen=True)
class Const(FunctorSpec):
    """A fixed label set together with a hemimetric on it."""

    labels: Carrier
    metric: FuzzyRel

    def __post_init__(self):
        if self.metric.source != self.labels or self.metric.target != self.labels:
            raise StructureError("label metric must be a square relation on the labels")
        if not is_hemimetric(self.metric):
            raise StructureError("label metric is not a hemimetric")


@dataclass(frozen=True)
class PFin(FunctorSpec):
    sub: FunctorSpec


@dataclass(frozen=True)
class DFin(FunctorSpec):
    sub: FunctorSpec


@dataclass(frozen=True)
class Pair(FunctorSpec):
    left: FunctorSpec
    right: FunctorSpec


@dataclass(frozen=True)
class Maybe(FunctorSpec):
    sub: FunctorSpec


# ---------------------------------------------------------------------------
# Canonical ordering

def canonical_key(value):
    """A deterministic, total sort key over carrier values and elements.

    Never relies on object hashes, so orderings are identical across runs.
    """
    if isinstance(value, str):
        return ("s", value)
    if isinstance(value, bool):
        return ("b", value)
    if isinstance(value, int):
        return ("i", value)
    if isinstance(value, Fraction):
        return ("q", value.numerator, value.denominator)
    if isinstance(value, tuple):
        return ("t",) + tuple(canonical_key(v) for v in value)
    keyed = getattr(value, "_canonical_key", None)
    if keyed is not None:
        return keyed()
    return ("r", repr(value))


def _cached_key(node, build):
    key = getattr(node, "_ckey", None)
    if key is None:
        key = build()
        object.__setattr__(node, "_ckey", key)
    return key


def _cached_hash(node, key_fn):
    h = getattr(node, "_hashval", None)
    if h is None:
        h = hash(key_fn())
        object.__setattr__(node, "_hashval", h)
    return h


# ---------------------------------------------------------------------------
# Elements


class FunctorElement:
    """Base class of element nodes."""

    def _canonical_key(self):
        raise NotImplementedError


@dataclass(frozen=True, eq=True)
class IdEl(FunctorElement):
    value: object

    def _canonical_key(self):
        return _cached_key(self, lambda: ("el-id", canonical_key(self.value)))

    def __hash__(self):
        return _cached_hash(self, self._canonical_key)


@dataclass(frozen=True, eq=True)
class ConstEl(FunctorElement):
    label: object

    def _canonical_key(self):
        return _cached_key(self, lambda: ("el-const", canonical_key(self.label)))

    def __hash__(self):
        return _cached_hash(self, self._canonical_key)


@dataclass(frozen=True, eq=True)
class SetEl(FunctorElement):
    """A finite set of sub-elements, stored sorted by canonical key."""

    members: tuple

    def __post_init__(self):
        keys = [m._canonical_key() for m in self.members]
        if any(k1 >= k2 for k1, k2 in zip(keys, keys[1:])):
            raise StructureError("set members must be strictly sorted; use fset()")

    def _canonical_key(self):
        return _cached_key(
            self, lambda: ("el-set", tuple(m._canonical_key() for m in self.members))
        )

    def __hash__(self):
        return _cached_hash(self, self._canonical_key)


@dataclass(frozen=True, eq=True)
class DistEl(FunctorElement):
    """A finitely supported distribution: ((element, probability), ...).

    Support elements are distinct and sorted; the mass and positivity
    invariants are enforced by the fdist() factory, while system validation
    reports them as diagnostics for ingested files.
    """

    pairs: tuple

    def __post_init__(self):
        keys = [el._canonical_key() for el, _ in self.pairs]
        if any(k1 >= k2 for k1, k2 in zip(keys, keys[1:])):
            raise StructureError("distribution support must be strictly sorted; use fdist()")

    def _canonical_key(self):
        return _cached_key(
            self,
            lambda: (
                "el-dist",
                tuple((el._canonical_key(), canonical_key(p)) for el, p in self.pairs),
            ),
        )

    def __hash__(self):
        return _cached_hash(self, self._canonical_key)


@dataclass(frozen=True, eq=True)
class PairEl(FunctorElement):
    left: FunctorElement
    right: FunctorElement

    def _canonical_key(self):
        return _cached_key(
            self,
            lambda: ("el-pair", self.left._canonical_key(), self.right._canonical_key()),
        )

    def __hash__(self):
        return _cached_hash(self, self._canonical_key)


@dataclass(frozen=True, eq=True)
class MaybeEl(FunctorElement):
    value: Optional[FunctorElement]

    def _canonical_key(self):
        # empty and filled values get different key lengths, never a bare
        # None inside the tuple (tuples of mixed None/tuple do not sort)
        return _cached_key(
            self,
            lambda: ("el-maybe",) if self.value is None
            else ("el-maybe", self.value._canonical_key()),
        )

    def __hash__(self):
        return _cached_hash(self, self._canonical_key)


def fset(members: Iterable[FunctorElement]) -> SetEl:
    """Build a set element: deduplicate and sort by canonical key."""
    by_key = {m._canonical_key(): m for m in members}
    return SetEl(tuple(by_key[k] for k in sorted(by_key)))


def fdist(pairs: Iterable[tuple]) -> DistEl:
    """Build a distribution: merge duplicate support, check mass exactly 1."""
    merged: dict = {}
    elements: dict = {}
    for el, p in pairs:
        p = Fraction(p)
        if p <= 0:
            raise StructureError("distribution probabilities must be positive")
        key = el._canonical_key()
        merged[key] = merged.get(key, ZERO) + p
        elements[key] = el
    total = sum(merged.values(), ZERO)
    if total != 1:
        raise StructureError(f"distribution mass {total} is not 1")
    return DistEl(tuple((elements[k], merged[k]) for k in sorted(merged)))


def just(el: FunctorElement) -> MaybeEl:
    return MaybeEl(el)


NOTHING = MaybeEl(None)


# ---------------------------------------------------------------------------
# Operations


def apply_map(fn: Callable, element: FunctorElement) -> FunctorElement:
    """Functor action on a map: rename Id leaves, rebuild the structure.

    Sets deduplicate collided members; distributions merge their
    probabilities (image-measure semantics).
    """
    if isinstance(element, IdEl):
        return IdEl(fn(element.value))
    if isinstance(element, ConstEl):
        return element
    if isinstance(element, SetEl):
        return fset(apply_map(fn, m) for m in element.members)
    if isinstance(element, DistEl):
        return fdist((apply_map(fn, el), p) for el, p in element.pairs)
    if isinstance(element, PairEl):
        return PairEl(apply_map(fn, element.left), apply_map(fn, element.right))
    if isinstance(element, MaybeEl):
        return element if element.value is None else MaybeEl(apply_map(fn, element.value))
    raise StructureError(f"not a functor element: {element!r}")


def base(element: FunctorElement) -> tuple:
    """The ordered tuple of distinct carrier values occurring in Id leaves."""
    seen: dict = {}

    def walk(el):
        if isinstance(el, IdEl):
            seen.setdefault(el.value, None)
        elif isinstance(el, ConstEl):
            pass
        elif isinstance(el, SetEl):
            for m in el.members:
                walk(m)
        elif isinstance(el, DistEl):
            for sub, _ in el.pairs:
                walk(sub)
        elif isinstance(el, PairEl):
            walk(el.left)
            walk(el.right)
        elif isinstance(el, MaybeEl):
            if el.value is not None:
                walk(el.value)
        else:
            raise StructureError(f"not a functor element: {el!r}")

    walk(element)
    return tuple(seen)


def element_errors(spec: FunctorSpec, element: FunctorElement, leaf_ok: Callable,
                   path: str = "") -> list:
    """Type-check an element against a grammar node.

    Returns (severity, path, message) triples; severity is 'error' or
    'warning'.  leaf_ok decides whether an Id leaf value is admissible.
    """
    where = path or "<root>"
    out = []
    if isinstance(spec, Id):
        if not isinstance(element, IdEl):
            return [("error", where, f"expected a carrier element, got {type(element).__name__}")]
        if not leaf_ok(element.value):
            out.append(("error", where, f"state {element.value!r} is not in the carrier"))
        return out
    if isinstance(spec, Const):
        if not isinstance(element, ConstEl):
            return [("error", where, f"expected a label, got {type(element).__name__}")]
        if element.label not in spec.labels:
            out.append(("error", where, f"label {element.label!r} is not in the label set"))
        return out
    if isinstance(spec, PFin):
        if not isinstance(element, SetEl):
            return [("error", where, f"expected a finite set, got {type(element).__name__}")]
        for i, m in enumerate(element.members):
            out.extend(element_errors(spec.sub, m, leaf_ok, f"{path}.set[{i}]"))
        return out
    if isinstance(spec, DFin):
        if not isinstance(element, DistEl):
            return [("error", where, f"expected a distribution, got {type(element).__name__}")]
        mass = ZERO
        for i, (sub, p) in enumerate(element.pairs):
            if p <= 0:
                out.append(("error", f"{path}.dist[{i}]", f"probability {format_unit(p)} is not positive"))
            elif p > 1:
                out.append(("error", f"{path}.dist[{i}]", f"probability {format_unit(p)} exceeds 1"))
            mass += p
            out.extend(element_errors(spec.sub, sub, leaf_ok, f"{path}.dist[{i}]"))
        if mass != 1:
            out.append(("error", where, f"distribution mass {format_unit(mass)} is not 1"))
        return out
    if isinstance(spec, Pair):
        if not isinstance(element, PairEl):
            return [("error", where, f"expected a pair, got {type(element).__name__}")]
        out.extend(element_errors(spec.left, element.left, leaf_ok, f"{path}.fst"))
        out.extend(element_errors(spec.right, element.right, leaf_ok, f"{path}.snd"))
        return out
    if isinstance(spec, Maybe):
        if not isinstance(element, MaybeEl):
            return [("error", where, f"expected an optional value, got {type(element).__name__}")]
        if element.value is not None:
            out.extend(element_errors(spec.sub, element.value, leaf_ok, f"{path}.just"))
        return out
    raise StructureError(f"not a functor spec: {spec!r}")


def render_element(element: FunctorElement) -> str:
    """Compact human-readable rendering, used in diagnostics."""
    if isinstance(element, IdEl):
        return str(element.value)
    if isinstance(element, ConstEl):
        return str(element.label)
    if isinstance(element, SetEl):
        return "{" + ", ".join(render_element(m) for m in element.members) + "}"
    if isinstance(element, DistEl):
        return "{" + ", ".join(
            f"{render_element(el)}: {format_unit(p)}" for el, p in element.pairs
        ) + "}"
    if isinstance(element, PairEl):
        return f"({render_element(element.left)}, {render_element(element.right)})"
    if isinstance(element, MaybeEl):
        return "nothing" if element.value is None else f"just {render_element(element.value)}"
    raise StructureError(f"not a functor element: {element!r}")
