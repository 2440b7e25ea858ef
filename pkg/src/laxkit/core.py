"""Exact arithmetic on the unit interval and the algebra of fuzzy relations.

All values are `fractions.Fraction` instances in [0, 1]; nothing in this
module ever rounds.  The two saturating operations are

    sat_add(x, y) = min(x + y, 1)        (truncated addition)
    sat_sub(x, y) = max(x - y, 0)        (truncated subtraction)

A fuzzy relation is a dense matrix between two finite carriers.  The crisp
reading follows the convention that 0 means "related" and 1 means
"unrelated", so relation composition uses inf/sat_add and the diagonal is
the 0/1 matrix with 0 on the diagonal.  Infima over an empty index range
are 1 and suprema are 0 (the lattice bounds of the unit interval).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Mapping

ZERO = Fraction(0)
ONE = Fraction(1)


class LaxkitError(Exception):
    """Base class for all errors raised by this package."""


class StructureError(LaxkitError):
    """Shapes, carriers or grammar nodes do not fit together."""


def as_unit(value) -> Fraction:
    """Coerce to an exact Fraction and check it lies in [0, 1]."""
    x = Fraction(value)
    if not ZERO <= x <= ONE:
        raise StructureError(f"value {x} outside the unit interval")
    return x


def parse_unit(text: str) -> Fraction:
    """Parse 'p/q' or an exact decimal string ('0.2' becomes 1/5)."""
    try:
        x = Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise StructureError(f"cannot parse rational {text!r}: {exc}") from None
    return as_unit(x)


def format_unit(x: Fraction) -> str:
    """Render as 'p/q', or 'p' for integral values."""
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def sat_add(x: Fraction, y: Fraction) -> Fraction:
    return min(x + y, ONE)


def sat_sub(x: Fraction, y: Fraction) -> Fraction:
    return max(x - y, ZERO)


def sup(values: Iterable[Fraction]) -> Fraction:
    """Supremum with sup of the empty family = 0."""
    return max(values, default=ZERO)


def inf(values: Iterable[Fraction]) -> Fraction:
    """Infimum with inf of the empty family = 1."""
    return min(values, default=ONE)


@dataclass(frozen=True)
class Carrier:
    """An ordered finite list of distinct state identifiers.

    Elements are usually strings, but any hashable value is allowed (the
    logic machinery uses integer indices and formula objects as carrier
    elements).  Index order is fixed and reproducible.
    """

    elements: tuple

    def __post_init__(self):
        if len(set(self.elements)) != len(self.elements):
            raise StructureError("carrier elements must be distinct")
        object.__setattr__(self, "_index", {x: i for i, x in enumerate(self.elements)})

    @staticmethod
    def of(*elements) -> "Carrier":
        return Carrier(tuple(elements))

    def index(self, element) -> int:
        try:
            return self._index[element]
        except KeyError:
            raise StructureError(f"{element!r} is not in the carrier") from None

    def __contains__(self, element) -> bool:
        return element in self._index

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)


@dataclass(frozen=True)
class FuzzyRel:
    """A [0,1]-valued relation between two carriers, stored densely.

    values[i][j] relates source.elements[i] to target.elements[j].
    """

    source: Carrier
    target: Carrier
    values: tuple

    def __post_init__(self):
        if len(self.values) != len(self.source):
            raise StructureError("row count does not match source carrier")
        for row in self.values:
            if len(row) != len(self.target):
                raise StructureError("column count does not match target carrier")
            for v in row:
                as_unit(v)

    @staticmethod
    def from_function(source: Carrier, target: Carrier, fn: Callable) -> "FuzzyRel":
        rows = tuple(
            tuple(as_unit(fn(a, b)) for b in target.elements) for a in source.elements
        )
        return FuzzyRel(source, target, rows)

    @staticmethod
    def constant(source: Carrier, target: Carrier, value) -> "FuzzyRel":
        c = as_unit(value)
        row = (c,) * len(target)
        return FuzzyRel(source, target, (row,) * len(source))

    def at(self, a, b) -> Fraction:
        return self.values[self.source.index(a)][self.target.index(b)]

    def entry(self, i: int, j: int) -> Fraction:
        return self.values[i][j]

    def is_square(self) -> bool:
        return self.source == self.target

    def entrywise_le(self, other: "FuzzyRel") -> bool:
        _require_same_carriers(self, other)
        return all(
            x <= y for row_x, row_y in zip(self.values, other.values)
            for x, y in zip(row_x, row_y)
        )

    def map_entries(self, fn: Callable[[Fraction], Fraction]) -> "FuzzyRel":
        return FuzzyRel(
            self.source, self.target,
            tuple(tuple(as_unit(fn(v)) for v in row) for row in self.values),
        )


def _require_same_carriers(r: FuzzyRel, s: FuzzyRel) -> None:
    if r.source != s.source or r.target != s.target:
        raise StructureError("relations live between different carriers")


def compose(r: FuzzyRel, s: FuzzyRel) -> FuzzyRel:
    """Relation composition r;s with (r;s)(a,c) = inf_b r(a,b) (+) s(b,c).

    An empty middle carrier yields the all-1 relation (inf over nothing).
    """
    if r.target != s.source:
        raise StructureError("composition: middle carriers disagree")
    mid = range(len(r.target))
    rows = tuple(
        tuple(
            inf(sat_add(r.values[i][k], s.values[k][j]) for k in mid)
            for j in range(len(s.target))
        )
        for i in range(len(r.source))
    )
    return FuzzyRel(r.source, s.target, rows)


def converse(r: FuzzyRel) -> FuzzyRel:
    rows = tuple(
        tuple(r.values[i][j] for i in range(len(r.source)))
        for j in range(len(r.target))
    )
    return FuzzyRel(r.target, r.source, rows)


def graph(fn: Mapping, source: Carrier, target: Carrier, eps=ZERO) -> FuzzyRel:
    """The eps-graph of a function: eps where fn(a) = b, 1 elsewhere."""
    e = as_unit(eps)
    rows = []
    for a in source.elements:
        if a not in fn:
            raise StructureError(f"function undefined on {a!r}")
        fa = fn[a]
        if fa not in target:
            raise StructureError(f"function maps {a!r} outside the target carrier")
        rows.append(tuple(e if fa == b else ONE for b in target.elements))
    return FuzzyRel(source, target, tuple(rows))


def diagonal(carrier: Carrier, eps=ZERO) -> FuzzyRel:
    """The eps-diagonal on a carrier; eps = 0 gives the identity relation."""
    return graph({x: x for x in carrier.elements}, carrier, carrier, eps)


def is_hemimetric(d: FuzzyRel) -> bool:
    """d <= diagonal (reflexivity) and d <= d;d (triangle inequality)."""
    if not d.is_square():
        raise StructureError("hemimetric check needs a square relation")
    return d.entrywise_le(diagonal(d.source)) and d.entrywise_le(compose(d, d))


def is_pseudometric(d: FuzzyRel) -> bool:
    """A symmetric hemimetric."""
    return is_hemimetric(d) and converse(d) == d


def sup_distance(r: FuzzyRel, s: FuzzyRel) -> Fraction:
    """Largest entrywise absolute difference (exact)."""
    _require_same_carriers(r, s)
    return sup(
        abs(x - y)
        for row_x, row_y in zip(r.values, s.values)
        for x, y in zip(row_x, row_y)
    )


PredTable = Mapping[Hashable, Fraction]


def companion(r: FuzzyRel, f: PredTable) -> dict:
    """The pointwise-least g making (f, g) nonexpansive across r.

    g(b) = sup_a f(a) (-) r(a,b); the sup over an empty source is 0.
    """
    out = {}
    for j, b in enumerate(r.target.elements):
        out[b] = sup(
            sat_sub(as_unit(f[a]), r.values[i][j])
            for i, a in enumerate(r.source.elements)
        )
    return out


def table_le(f: PredTable, g: PredTable, carrier: Carrier) -> bool:
    return all(f[x] <= g[x] for x in carrier.elements)


def is_nonexpansive_pair(r: FuzzyRel, f: PredTable, g: PredTable) -> bool:
    """f(a) - g(b) <= r(a,b) for all a, b."""
    return all(
        f[a] - g[b] <= r.values[i][j]
        for i, a in enumerate(r.source.elements)
        for j, b in enumerate(r.target.elements)
    )


@dataclass(frozen=True)
class NonexpansivePair:
    """A pair of unit-valued tables recorded against a specific relation.

    Construction fails unless f(a) - g(b) <= rel(a,b) holds everywhere.
    """

    rel: FuzzyRel
    f: tuple
    g: tuple

    def __post_init__(self):
        ftab, gtab = self.f_table(), self.g_table()
        for x in ftab.values():
            as_unit(x)
        for x in gtab.values():
            as_unit(x)
        if not is_nonexpansive_pair(self.rel, ftab, gtab):
            raise StructureError("pair is not nonexpansive across the relation")

    @staticmethod
    def from_tables(rel: FuzzyRel, f: PredTable, g: PredTable) -> "NonexpansivePair":
        return NonexpansivePair(
            rel,
            tuple((a, as_unit(f[a])) for a in rel.source.elements),
            tuple((b, as_unit(g[b])) for b in rel.target.elements),
        )

    @staticmethod
    def from_left(rel: FuzzyRel, f: PredTable) -> "NonexpansivePair":
        """Complete f with its companion, the least valid right-hand table."""
        return NonexpansivePair.from_tables(rel, f, companion(rel, f))

    def f_table(self) -> dict:
        return dict(self.f)

    def g_table(self) -> dict:
        return dict(self.g)
