"""JSON encodings of relations, systems, liftings, certificates, formulas.

Rationals travel as strings, either 'p/q' or an exact decimal; both are
parsed exactly.  Element encodings are positional against the functor
grammar: finite sets are lists, distributions are lists of [target, "p/q"]
pairs, pairs are two-element lists, labels and carrier elements are bare
ids, optional values are null or the inner encoding.

Decoding errors carry a JSON-path-like location to make malformed files
easy to fix; they are format errors, distinct from the report-valued
semantic validation of systems.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction

from .core import Carrier, FuzzyRel, LaxkitError, format_unit, parse_unit
from .distance import Certificate
from .functors import (
    Const,
    ConstEl,
    DFin,
    DistEl,
    FunctorElement,
    FunctorSpec,
    Id,
    IdEl,
    Maybe,
    MaybeEl,
    PFin,
    Pair,
    PairEl,
    SetEl,
)
from .liftings import (
    ConstLift,
    Discount,
    Hausdorff,
    IdLift,
    KantorovichD,
    KantorovichGrid,
    LiftingSpec,
    MaybeLift,
    PairMax,
    PairSum,
    WassersteinD,
)
from .logic import (
    And,
    Const as FmConst,
    Formula,
    MinusC,
    Modal,
    MossDelta,
    MossNabla,
    Neg,
    Or,
    PlusC,
)
from .systems import Coalgebra


class JsonFormatError(LaxkitError):
    def __init__(self, message: str, path: str):
        super().__init__(f"{path}: {message}")
        self.path = path


def _expect(condition, message, path):
    if not condition:
        raise JsonFormatError(message, path)


def _unit(raw, path) -> Fraction:
    _expect(isinstance(raw, (str, int)), "expected a rational string", path)
    try:
        return parse_unit(str(raw))
    except LaxkitError as exc:
        raise JsonFormatError(str(exc), path) from None


# ---------------------------------------------------------------------------
# Relations


def encode_rel(rel: FuzzyRel) -> dict:
    return {
        "source": list(rel.source.elements),
        "target": list(rel.target.elements),
        "values": [[format_unit(v) for v in row] for row in rel.values],
    }


def decode_rel(raw, path="rel") -> FuzzyRel:
    _expect(isinstance(raw, dict), "expected an object", path)
    for key in ("source", "target", "values"):
        _expect(key in raw, f"missing key {key!r}", path)
    _expect(isinstance(raw["source"], list), "source must be a list", f"{path}.source")
    _expect(isinstance(raw["target"], list), "target must be a list", f"{path}.target")
    try:
        source = Carrier(tuple(raw["source"]))
        target = Carrier(tuple(raw["target"]))
    except LaxkitError as exc:
        raise JsonFormatError(str(exc), path) from None
    values = raw["values"]
    _expect(isinstance(values, list) and len(values) == len(source),
            f"need {len(source)} rows", f"{path}.values")
    rows = []
    for i, row in enumerate(values):
        _expect(isinstance(row, list) and len(row) == len(target),
                f"need {len(target)} columns", f"{path}.values[{i}]")
        rows.append(tuple(_unit(v, f"{path}.values[{i}][{j}]") for j, v in enumerate(row)))
    return FuzzyRel(source, target, tuple(rows))


# ---------------------------------------------------------------------------
# Functor grammar


def encode_functor(spec: FunctorSpec) -> dict:
    if isinstance(spec, Id):
        return {"kind": "id"}
    if isinstance(spec, Const):
        return {
            "kind": "const",
            "labels": list(spec.labels.elements),
            "metric": [[format_unit(v) for v in row] for row in spec.metric.values],
        }
    if isinstance(spec, PFin):
        return {"kind": "pfin", "sub": encode_functor(spec.sub)}
    if isinstance(spec, DFin):
        return {"kind": "dfin", "sub": encode_functor(spec.sub)}
    if isinstance(spec, Pair):
        return {"kind": "pair", "left": encode_functor(spec.left),
                "right": encode_functor(spec.right)}
    if isinstance(spec, Maybe):
        return {"kind": "maybe", "sub": encode_functor(spec.sub)}
    raise LaxkitError(f"not a functor spec: {spec!r}")


def decode_functor(raw, path="functor") -> FunctorSpec:
    _expect(isinstance(raw, dict) and "kind" in raw, "expected a node with 'kind'", path)
    kind = raw["kind"]
    if kind == "id":
        return Id()
    if kind == "const":
        _expect("labels" in raw and "metric" in raw,
                "label component needs 'labels' and 'metric'", path)
        labels = raw["labels"]
        _expect(isinstance(labels, list) and labels, "labels must be a nonempty list",
                f"{path}.labels")
        rel = decode_rel(
            {"source": labels, "target": labels, "values": raw["metric"]},
            f"{path}.metric",
        )
        try:
            return Const(Carrier(tuple(labels)), rel)
        except LaxkitError as exc:
            raise JsonFormatError(str(exc), path) from None
    if kind == "pfin":
        return PFin(decode_functor(raw.get("sub"), f"{path}.sub"))
    if kind == "dfin":
        return DFin(decode_functor(raw.get("sub"), f"{path}.sub"))
    if kind == "pair":
        return Pair(
            decode_functor(raw.get("left"), f"{path}.left"),
            decode_functor(raw.get("right"), f"{path}.right"),
        )
    if kind == "maybe":
        return Maybe(decode_functor(raw.get("sub"), f"{path}.sub"))
    raise JsonFormatError(f"unknown functor kind {kind!r}", path)


# ---------------------------------------------------------------------------
# Elements (positional against the functor)


def encode_element(spec: FunctorSpec, el: FunctorElement, leaf_encoder=None):
    if isinstance(spec, Id):
        return leaf_encoder(el.value) if leaf_encoder else el.value
    if isinstance(spec, Const):
        return el.label
    if isinstance(spec, PFin):
        return [encode_element(spec.sub, m, leaf_encoder) for m in el.members]
    if isinstance(spec, DFin):
        return [
            [encode_element(spec.sub, sub, leaf_encoder), format_unit(p)]
            for sub, p in el.pairs
        ]
    if isinstance(spec, Pair):
        return [encode_element(spec.left, el.left, leaf_encoder),
                encode_element(spec.right, el.right, leaf_encoder)]
    if isinstance(spec, Maybe):
        if el.value is None:
            return None
        return encode_element(spec.sub, el.value, leaf_encoder)
    raise LaxkitError(f"not a functor spec: {spec!r}")


def decode_element(spec: FunctorSpec, raw, path, leaf_decoder=None, notes=None):
    """Decode positionally; structural problems raise, semantic ones are
    collected into notes (duplicate set members, for instance) so system
    validation can surface them as warnings."""
    if isinstance(spec, Id):
        if leaf_decoder:
            return leaf_decoder(raw, path)
        _expect(isinstance(raw, str), "expected a state id", path)
        return IdEl(raw)
    if isinstance(spec, Const):
        _expect(isinstance(raw, str), "expected a label id", path)
        return ConstEl(raw)
    if isinstance(spec, PFin):
        _expect(isinstance(raw, list), "expected a list (finite set)", path)
        members = [
            decode_element(spec.sub, item, f"{path}[{i}]", leaf_decoder, notes)
            for i, item in enumerate(raw)
        ]
        by_key = {}
        for m in members:
            if m._canonical_key() in by_key and notes is not None:
                notes.append(f"duplicate set member {raw!r} deduplicated")
            by_key[m._canonical_key()] = m
        return SetEl(tuple(by_key[k] for k in sorted(by_key)))
    if isinstance(spec, DFin):
        _expect(isinstance(raw, list), "expected a list of [target, probability]", path)
        seen = {}
        for i, item in enumerate(raw):
            _expect(isinstance(item, list) and len(item) == 2,
                    "expected a [target, probability] pair", f"{path}[{i}]")
            sub = decode_element(spec.sub, item[0], f"{path}[{i}]", leaf_decoder, notes)
            p = _unit(item[1], f"{path}[{i}]")
            key = sub._canonical_key()
            if key in seen:
                if notes is not None:
                    notes.append(f"duplicate support entry at {path}[{i}] merged")
                seen[key] = (seen[key][0], seen[key][1] + p)
            else:
                seen[key] = (sub, p)
        return DistEl(tuple(seen[k] for k in sorted(seen)))
    if isinstance(spec, Pair):
        _expect(isinstance(raw, list) and len(raw) == 2, "expected a two-element list", path)
        return PairEl(
            decode_element(spec.left, raw[0], f"{path}[0]", leaf_decoder, notes),
            decode_element(spec.right, raw[1], f"{path}[1]", leaf_decoder, notes),
        )
    if isinstance(spec, Maybe):
        if raw is None:
            return MaybeEl(None)
        return MaybeEl(decode_element(spec.sub, raw, f"{path}.just", leaf_decoder, notes))
    raise LaxkitError(f"not a functor spec: {spec!r}")


# ---------------------------------------------------------------------------
# Systems


def encode_system(system: Coalgebra) -> dict:
    return {
        "functor": encode_functor(system.functor),
        "states": list(system.carrier.elements),
        "alpha": {
            s: encode_element(system.functor, system.step(s))
            for s in system.carrier.elements
        },
    }


def decode_system(raw, path="system"):
    """Returns (coalgebra, notes) where notes records ingestion warnings."""
    _expect(isinstance(raw, dict), "expected an object", path)
    for key in ("functor", "states", "alpha"):
        _expect(key in raw, f"missing key {key!r}", path)
    functor = decode_functor(raw["functor"], f"{path}.functor")
    states = raw["states"]
    _expect(isinstance(states, list) and all(isinstance(s, str) for s in states),
            "states must be a list of ids", f"{path}.states")
    try:
        carrier = Carrier(tuple(states))
    except LaxkitError as exc:
        raise JsonFormatError(str(exc), f"{path}.states") from None
    alpha_raw = raw["alpha"]
    _expect(isinstance(alpha_raw, dict), "alpha must be an object", f"{path}.alpha")
    missing = [s for s in states if s not in alpha_raw]
    _expect(not missing, f"alpha is missing states {missing}", f"{path}.alpha")
    extra = [s for s in alpha_raw if s not in carrier]
    _expect(not extra, f"alpha mentions unknown states {extra}", f"{path}.alpha")
    notes: dict = {}
    alpha = {}
    for s in states:
        state_notes: list = []
        alpha[s] = decode_element(functor, alpha_raw[s], f"{path}.alpha[{s}]",
                                  notes=state_notes)
        if state_notes:
            notes[s] = state_notes
    return Coalgebra.of(functor, carrier, alpha), notes


# ---------------------------------------------------------------------------
# Liftings


def encode_lifting(spec: LiftingSpec) -> dict:
    if isinstance(spec, IdLift):
        return {"kind": "id"}
    if isinstance(spec, ConstLift):
        return {"kind": "const"}
    if isinstance(spec, Hausdorff):
        return {"kind": "hausdorff", "variant": spec.variant,
                "sub": encode_lifting(spec.sub)}
    if isinstance(spec, KantorovichD):
        return {"kind": "kantorovich", "sub": encode_lifting(spec.sub)}
    if isinstance(spec, WassersteinD):
        return {"kind": "wasserstein", "sub": encode_lifting(spec.sub)}
    if isinstance(spec, PairSum):
        return {"kind": "pair-sum",
                "weights": [format_unit(spec.w_left), format_unit(spec.w_right)],
                "left": encode_lifting(spec.left), "right": encode_lifting(spec.right)}
    if isinstance(spec, PairMax):
        return {"kind": "pair-max", "left": encode_lifting(spec.left),
                "right": encode_lifting(spec.right)}
    if isinstance(spec, Discount):
        return {"kind": "discount", "factor": format_unit(spec.factor),
                "sub": encode_lifting(spec.sub)}
    if isinstance(spec, MaybeLift):
        return {"kind": "maybe", "sub": encode_lifting(spec.sub)}
    if isinstance(spec, KantorovichGrid):
        return {"kind": "kantorovich-grid", "modalities": list(spec.modality_names),
                "step": format_unit(spec.step)}
    raise LaxkitError(f"not a lifting spec: {spec!r}")


def decode_lifting(raw, path="lifting") -> LiftingSpec:
    _expect(isinstance(raw, dict) and "kind" in raw, "expected a node with 'kind'", path)
    kind = raw["kind"]
    try:
        if kind == "id":
            return IdLift()
        if kind == "const":
            return ConstLift()
        if kind == "hausdorff":
            _expect("variant" in raw, "hausdorff needs a 'variant'", path)
            return Hausdorff(raw["variant"], decode_lifting(raw.get("sub"), f"{path}.sub"))
        if kind == "kantorovich":
            return KantorovichD(decode_lifting(raw.get("sub"), f"{path}.sub"))
        if kind == "wasserstein":
            return WassersteinD(decode_lifting(raw.get("sub"), f"{path}.sub"))
        if kind == "pair-sum":
            weights = raw.get("weights")
            _expect(isinstance(weights, list) and len(weights) == 2,
                    "pair-sum needs two weights", f"{path}.weights")
            return PairSum(
                Fraction(_unit(weights[0], f"{path}.weights[0]")),
                Fraction(_unit(weights[1], f"{path}.weights[1]")),
                decode_lifting(raw.get("left"), f"{path}.left"),
                decode_lifting(raw.get("right"), f"{path}.right"),
            )
        if kind == "pair-max":
            return PairMax(
                decode_lifting(raw.get("left"), f"{path}.left"),
                decode_lifting(raw.get("right"), f"{path}.right"),
            )
        if kind == "discount":
            _expect("factor" in raw, "discount needs a 'factor'", path)
            return Discount(_unit(raw["factor"], f"{path}.factor"),
                            decode_lifting(raw.get("sub"), f"{path}.sub"))
        if kind == "maybe":
            return MaybeLift(decode_lifting(raw.get("sub"), f"{path}.sub"))
        if kind == "kantorovich-grid":
            names = raw.get("modalities")
            _expect(isinstance(names, list) and names,
                    "kantorovich-grid needs a list of modality names", path)
            _expect("step" in raw, "kantorovich-grid needs a 'step'", path)
            return KantorovichGrid(tuple(names), _unit(raw["step"], f"{path}.step"))
    except LaxkitError as exc:
        if isinstance(exc, JsonFormatError):
            raise
        raise JsonFormatError(str(exc), path) from None
    raise JsonFormatError(f"unknown lifting kind {kind!r}", path)


# ---------------------------------------------------------------------------
# Certificates


def encode_certificate(cert: Certificate) -> dict:
    return {"kind": cert.kind, "relation": encode_rel(cert.relation)}


def decode_certificate(raw, path="certificate") -> Certificate:
    _expect(isinstance(raw, dict), "expected an object", path)
    _expect(raw.get("kind") in ("simulation", "bisimulation"),
            "kind must be 'simulation' or 'bisimulation'", f"{path}.kind")
    return Certificate(decode_rel(raw.get("relation"), f"{path}.relation"), raw["kind"])


# ---------------------------------------------------------------------------
# Formulas


def encode_formula(formula: Formula, functor: FunctorSpec | None = None):
    if isinstance(formula, FmConst):
        return {"kind": "const", "value": format_unit(formula.value)}
    if isinstance(formula, MinusC):
        return {"kind": "minus", "sub": encode_formula(formula.sub, functor),
                "value": format_unit(formula.value)}
    if isinstance(formula, PlusC):
        return {"kind": "plus", "sub": encode_formula(formula.sub, functor),
                "value": format_unit(formula.value)}
    if isinstance(formula, And):
        return {"kind": "and", "left": encode_formula(formula.left, functor),
                "right": encode_formula(formula.right, functor)}
    if isinstance(formula, Or):
        return {"kind": "or", "left": encode_formula(formula.left, functor),
                "right": encode_formula(formula.right, functor)}
    if isinstance(formula, Modal):
        return {"kind": "modal", "name": formula.name,
                "args": [encode_formula(a, functor) for a in formula.args]}
    if isinstance(formula, Neg):
        return {"kind": "neg", "sub": encode_formula(formula.sub, functor)}
    if isinstance(formula, (MossDelta, MossNabla)):
        if functor is None:
            raise LaxkitError("encoding a structural modality needs the functor")
        kind = "moss-delta" if isinstance(formula, MossDelta) else "moss-nabla"
        return {
            "kind": kind,
            "element": encode_element(
                functor, formula.element, lambda f: encode_formula(f, functor)
            ),
        }
    raise LaxkitError(f"not a formula: {formula!r}")


def decode_formula(raw, path="formula", functor: FunctorSpec | None = None) -> Formula:
    _expect(isinstance(raw, dict) and "kind" in raw, "expected a node with 'kind'", path)
    kind = raw["kind"]
    if kind == "const":
        return FmConst(_unit(raw.get("value"), f"{path}.value"))
    if kind == "minus":
        return MinusC(decode_formula(raw.get("sub"), f"{path}.sub", functor),
                      _unit(raw.get("value"), f"{path}.value"))
    if kind == "plus":
        return PlusC(decode_formula(raw.get("sub"), f"{path}.sub", functor),
                     _unit(raw.get("value"), f"{path}.value"))
    if kind == "and":
        return And(decode_formula(raw.get("left"), f"{path}.left", functor),
                   decode_formula(raw.get("right"), f"{path}.right", functor))
    if kind == "or":
        return Or(decode_formula(raw.get("left"), f"{path}.left", functor),
                  decode_formula(raw.get("right"), f"{path}.right", functor))
    if kind == "modal":
        _expect(isinstance(raw.get("name"), str), "modal needs a 'name'", path)
        args = raw.get("args", [])
        _expect(isinstance(args, list), "modal args must be a list", f"{path}.args")
        return Modal(raw["name"], tuple(
            decode_formula(a, f"{path}.args[{i}]", functor) for i, a in enumerate(args)
        ))
    if kind == "neg":
        return Neg(decode_formula(raw.get("sub"), f"{path}.sub", functor))
    if kind in ("moss-delta", "moss-nabla"):
        _expect(functor is not None,
                "decoding a structural modality needs the system functor", path)
        element = decode_element(
            functor, raw.get("element"), f"{path}.element",
            leaf_decoder=lambda item, p: IdEl(decode_formula(item, p, functor)),
        )
        return MossDelta(element) if kind == "moss-delta" else MossNabla(element)
    raise JsonFormatError(f"unknown formula kind {kind!r}", path)


# ---------------------------------------------------------------------------
# Files


def load_json(path: str):
    try:
        with open(path, "rb") as handle:
            blob = handle.read()
    except OSError as exc:
        raise JsonFormatError(str(exc), path) from None
    try:
        return json.loads(blob.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise JsonFormatError(f"invalid JSON: {exc}", path) from None


def file_digest(path: str) -> str:
    with open(path, "rb") as handle:
        return hashlib.sha256(handle.read()).hexdigest()


def dump_json(data, path: str | None) -> str:
    text = json.dumps(data, indent=2, sort_keys=True) + "\n"
    if path:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)
    return text
