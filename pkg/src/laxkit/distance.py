"""Behavioural-distance engine: fixpoint iteration and certificates.

The distance chain starts at the zero matrix and repeatedly applies the
lifting across both transition maps.  With exact rationals, reaching the
fixpoint is decidable (two consecutive matrices coincide); a tolerance is
the fallback for contractive chains that approach but never attain their
limit.  The residual reported is the sup-norm of the last step, which
bounds the remaining gap only in the presence of a contraction factor, so
non-convergence within max_iter is reported honestly rather than rounded
away.

A certificate is a fuzzy relation claimed to simulate one system by
another; checking it means verifying that the lifted relation applied to
the transition structure never exceeds it.  Pairs sitting at 1 are
vacuous and skipped.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import FuzzyRel, ONE, StructureError, ZERO, converse, sup_distance
from .liftings import LiftingSpec, contraction_factor, lift_value, require_match
from .systems import Coalgebra


@dataclass(frozen=True)
class Certificate:
    relation: FuzzyRel
    kind: str  # 'simulation' | 'bisimulation'

    def __post_init__(self):
        if self.kind not in ("simulation", "bisimulation"):
            raise StructureError(f"unknown certificate kind {self.kind!r}")


@dataclass(frozen=True)
class SlackRow:
    pair: tuple
    claimed: Fraction
    lifted: Fraction

    @property
    def slack(self) -> Fraction:
        return self.claimed - self.lifted


@dataclass(frozen=True)
class CertificateVerdict:
    ok: bool
    forward: tuple  # SlackRow per non-vacuous pair
    backward: tuple | None  # converse direction, for bisimulation certificates

    def violations(self) -> list:
        rows = list(self.forward) + list(self.backward or ())
        return [r for r in rows if r.slack < 0]


@dataclass(frozen=True)
class DistanceResult:
    matrix: FuzzyRel
    iterations: int
    residual: Fraction
    converged: bool
    trace: tuple | None = None
    # bound on the remaining gap below the limit; only available when the
    # lifting contracts (factor < 1), None otherwise
    gap_bound: Fraction | None = None


def _check_setup(lifting: LiftingSpec, sys_a: Coalgebra, sys_b: Coalgebra) -> None:
    if sys_a.functor != sys_b.functor:
        raise StructureError("the two systems must share a functor")
    require_match(lifting, sys_a.functor)


def _zero(sys_a: Coalgebra, sys_b: Coalgebra) -> FuzzyRel:
    return FuzzyRel.constant(sys_a.carrier, sys_b.carrier, ZERO)


def _step(lifting, functor, sys_a, sys_b, current: FuzzyRel) -> FuzzyRel:
    rows = tuple(
        tuple(
            lift_value(lifting, functor, current, sys_a.step(a), sys_b.step(b))
            for b in sys_b.carrier.elements
        )
        for a in sys_a.carrier.elements
    )
    return FuzzyRel(sys_a.carrier, sys_b.carrier, rows)


def distance_chain(lifting: LiftingSpec, sys_a: Coalgebra, sys_b: Coalgebra,
                   steps: int) -> list:
    """The first entries of the iteration chain, starting at the zero matrix."""
    if steps < 0:
        raise StructureError("steps must be nonnegative")
    _check_setup(lifting, sys_a, sys_b)
    chain = [_zero(sys_a, sys_b)]
    for _ in range(steps):
        chain.append(_step(lifting, sys_a.functor, sys_a, sys_b, chain[-1]))
    return chain


def behavioural_distance(lifting: LiftingSpec, sys_a: Coalgebra, sys_b: Coalgebra,
                         tol: Fraction = ZERO, max_iter: int = 100,
                         keep_trace: bool = False) -> DistanceResult:
    """Iterate to the least fixpoint from below.

    Stops on an exact fixpoint (residual 0), on residual <= tol for a
    positive tol, or after max_iter steps (reported as not converged).
    The matrix always underapproximates the true distance from below;
    when the lifting contracts with factor c < 1, the result additionally
    carries gap_bound = residual * c / (1 - c), a bound on how far below
    the limit the matrix can be.  Without a contraction factor only the
    residual is reported.
    """
    if tol < 0:
        raise StructureError("tolerance must be nonnegative")
    if max_iter < 1:
        raise StructureError("max_iter must be at least 1")
    _check_setup(lifting, sys_a, sys_b)
    factor = contraction_factor(lifting)

    def finish(matrix, n, residual, converged, trace):
        gap = residual * factor / (1 - factor) if factor < 1 else None
        return DistanceResult(matrix, n, residual, converged,
                              tuple(trace) if trace else None, gap)

    current = _zero(sys_a, sys_b)
    trace = [current] if keep_trace else None
    residual = ONE
    for n in range(1, max_iter + 1):
        nxt = _step(lifting, sys_a.functor, sys_a, sys_b, current)
        if not current.entrywise_le(nxt):
            raise StructureError(
                "iteration chain decreased; the lifting violates monotonicity"
            )
        residual = sup_distance(nxt, current)
        current = nxt
        if trace is not None:
            trace.append(current)
        if residual == 0:
            return finish(current, n, ZERO, True, trace)
        if tol > 0 and residual <= tol:
            return finish(current, n, residual, True, trace)
    return finish(current, max_iter, residual, False, trace)


def check_certificate(lifting: LiftingSpec, sys_a: Coalgebra, sys_b: Coalgebra,
                      cert: Certificate) -> CertificateVerdict:
    """Verify a simulation or bisimulation certificate, with per-pair slack."""
    _check_setup(lifting, sys_a, sys_b)
    rel = cert.relation
    if rel.source != sys_a.carrier or rel.target != sys_b.carrier:
        raise StructureError("certificate carriers do not match the systems")

    def direction(r: FuzzyRel, left: Coalgebra, right: Coalgebra):
        rows = []
        for a in left.carrier.elements:
            for b in right.carrier.elements:
                claimed = r.at(a, b)
                if claimed == ONE:
                    continue  # vacuously satisfied
                lifted = lift_value(lifting, left.functor, r, left.step(a), right.step(b))
                rows.append(SlackRow((a, b), claimed, lifted))
        return tuple(rows)

    forward = direction(rel, sys_a, sys_b)
    backward = None
    if cert.kind == "bisimulation":
        backward = direction(converse(rel), sys_b, sys_a)
    ok = all(r.slack >= 0 for r in forward) and (
        backward is None or all(r.slack >= 0 for r in backward)
    )
    return CertificateVerdict(ok, forward, backward)


def least_certificate_gap(lifting: LiftingSpec, sys_a: Coalgebra, sys_b: Coalgebra,
                          cert: Certificate, tol: Fraction = ZERO,
                          max_iter: int = 100) -> Fraction:
    """Sup-norm between a valid certificate and the computed distance matrix.

    Valid certificates bound the distance from above pointwise, so the gap
    is nonnegative; it measures how much slack the certificate wastes.
    """
    verdict = check_certificate(lifting, sys_a, sys_b, cert)
    if not verdict.ok:
        raise StructureError("certificate does not hold; gap is undefined")
    result = behavioural_distance(lifting, sys_a, sys_b, tol=tol, max_iter=max_iter)
    return sup_distance(cert.relation, result.matrix)
