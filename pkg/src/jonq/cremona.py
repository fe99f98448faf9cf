"""Rational maps between projective spaces and birationality certificates.

A map is an ordered tuple of equal-degree forms in its source ring; the
target ring names the coordinates it maps to.  Birationality is certified
constructively: composing a candidate inverse with the map must return the
identity up to a single nonzero form, the inversion factor.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import combinations

from . import groebner
from .polycore import (
    JonqError,
    Polynomial,
    RingSpec,
    RingMismatchError,
    exact_div,
    partial_derivative,
    substitute,
    transport,
    x_decompose,
    xprime_order,
)

log = logging.getLogger(__name__)


class MapError(JonqError):
    pass


class RationalMap:
    """Tuple of equal-degree forms from Proj(source) to Proj(target)."""

    __slots__ = ("source", "target", "forms", "degree")

    def __init__(self, source: RingSpec, target: RingSpec, forms):
        forms = tuple(forms)
        if len(forms) != target.nvars:
            raise MapError("coordinate count does not match the target space")
        if all(f.is_zero() for f in forms):
            raise MapError("the zero tuple defines no rational map")
        degree = None
        for f in forms:
            if f.ring != source:
                raise RingMismatchError("coordinate forms must live in the source ring")
            if f.is_zero():
                continue
            if not f.is_homogeneous():
                raise MapError(f"coordinate {f} is not homogeneous")
            d = f.total_degree()
            if degree is None:
                degree = d
            elif d != degree:
                raise MapError("coordinate forms have different degrees")
        self.source = source
        self.target = target
        self.forms = forms
        self.degree = degree

    def base_ideal(self) -> list[Polynomial]:
        return [f for f in self.forms if f]

    def __repr__(self):
        return "(" + " : ".join(str(f) for f in self.forms) + ")"

    def __eq__(self, other):
        return (isinstance(other, RationalMap) and self.source == other.source
                and self.target == other.target and self.forms == other.forms)


def identity_map(ring: RingSpec, target: RingSpec | None = None) -> RationalMap:
    return RationalMap(ring, target or ring, ring.variables())


@dataclass(frozen=True)
class InversionCertificate:
    """Witness that G inverts a map: G(F) = factor * (coordinate variables)."""

    inverse: RationalMap
    factor: Polynomial
    degree: int


@dataclass(frozen=True)
class CertificateFailure:
    index: int
    reason: str


def compose(g: RationalMap, f: RationalMap) -> tuple[Polynomial, ...]:
    """Coordinatewise substitution g(f); no normalization is applied."""
    if f.target != g.source:
        raise RingMismatchError("target of the inner map must be the source of the outer")
    assignment = {name: form for name, form in zip(g.source.names, f.forms)}
    return tuple(substitute(p, assignment) for p in g.forms)


def gcd_many(forms) -> Polynomial:
    from .polycore import gcd
    nz = [f for f in forms if f]
    if not nz:
        raise MapError("all forms are zero")
    acc = nz[0]
    for f in nz[1:]:
        if acc.total_degree() == 0:
            break
        acc = gcd(acc, f)
    return acc.monic()


def normalize_map(forms, source: RingSpec, target: RingSpec) -> RationalMap:
    """Divide out the common factor of the coordinates; idempotent."""
    forms = tuple(forms)
    if all(not f for f in forms):
        raise MapError("cannot normalize the zero map")
    g = gcd_many(forms)
    if g.total_degree() == 0:
        return RationalMap(source, target, forms)
    out = []
    for f in forms:
        if f.is_zero():
            out.append(f)
            continue
        q = exact_div(f, g)
        if q is None:
            raise MapError("common factor does not divide a coordinate")
        out.append(q)
    return RationalMap(source, target, out)


def inversion_certificate(f: RationalMap, g: RationalMap):
    """Certificate that g inverts f, or the first coordinate where it breaks.

    Success means g(f) = factor * (x_1, ..., x_m) exactly for one nonzero
    factor, computed as the exact quotient of the first nonzero composed
    coordinate by its variable.
    """
    comp = compose(g, f)
    xs = f.source.variables()
    if len(comp) != len(xs):
        raise MapError("composition does not land back in the source space")
    pivot = next((i for i, c in enumerate(comp) if c), None)
    if pivot is None:
        return CertificateFailure(0, "composition is identically zero")
    factor = exact_div(comp[pivot], xs[pivot])
    if factor is None:
        return CertificateFailure(pivot, "composed coordinate not divisible by its variable")
    for i, c in enumerate(comp):
        if c != factor * xs[i]:
            return CertificateFailure(i, "coordinate is not proportional")
    return InversionCertificate(g, factor, int(factor.total_degree()))


def is_confluent(j: RationalMap, f: RationalMap) -> bool:
    """True iff dropping j's last coordinate factors through f.

    Concretely: the first n coordinates of j are one common multiple of f's
    coordinates pulled back through the coordinate projection, and the
    multiplier is coprime to j's last coordinate.
    """
    n = f.target.nvars
    if j.target.nvars != n + 1:
        raise MapError("dimension mismatch between the map and its support")
    pulled = [transport(p, j.source) for p in f.forms]
    mult = None
    for ji, fi in zip(j.forms[:n], pulled):
        if fi.is_zero():
            if ji:
                return False
            continue
        if ji.is_zero():
            return False
        q = exact_div(ji, fi)
        if q is None:
            return False
        if mult is None:
            mult = q
        elif q != mult:
            return False
    if mult is None or mult.is_zero():
        return False
    g = j.forms[n]
    if g.is_zero():
        return False
    from .polycore import gcd
    return gcd(mult, g).total_degree() == 0


def _jacobian_rank_full(forms, ring: RingSpec) -> bool:
    """Exact test that the Jacobian matrix has full row rank over Frac(ring)."""
    rows = [[partial_derivative(f, i) for i in range(ring.nvars)] for f in forms]
    r = len(rows)

    def det(sub):
        if len(sub) == 1:
            return sub[0][0]
        acc = ring.zero()
        for k in range(len(sub)):
            entry = sub[0][k]
            if entry.is_zero():
                continue
            minor = [[row[c] for c in range(len(sub)) if c != k] for row in sub[1:]]
            term = entry * det(minor)
            acc = acc + term if k % 2 == 0 else acc - term
        return acc

    for cols in combinations(range(ring.nvars), r):
        sub = [[row[c] for c in cols] for row in rows]
        if not det(sub).is_zero():
            return True
    return False


def algebraically_independent(forms) -> bool:
    """True iff the forms are algebraically independent over the base field.

    Over Q this is the Jacobian rank criterion.  Over F_p a full-rank
    Jacobian still certifies independence, but a degenerate one does not
    refute it; that case falls back to an elimination kernel computation.
    """
    forms = list(forms)
    if not forms:
        return True
    ring = forms[0].ring
    if any(f.ring != ring for f in forms):
        raise RingMismatchError("forms live in different rings")
    if any(f.is_zero() for f in forms):
        return False
    if len(forms) > ring.nvars:
        return False
    if _jacobian_rank_full(forms, ring):
        return True
    if ring.modulus is None:
        return False
    log.debug("Jacobian degenerate over GF(%d); falling back to elimination", ring.modulus)
    unames = []
    k = 0
    while len(unames) < len(forms):
        name = f"_u{k}"
        if name not in ring.names:
            unames.append(name)
        k += 1
    big = RingSpec(ring.names + tuple(unames), ring.modulus)
    gens = [big.variable(u) - transport(f, big) for u, f in zip(unames, forms)]
    kernel = groebner.eliminate(gens, ring.nvars)
    return not kernel


def fiber_ideal(f: RationalMap, point) -> list[Polynomial]:
    """Ideal of the fiber of f over a target point: saturated 2x2 minors.

    The minors of the matrix with rows (coordinate forms) and (point values)
    are saturated by the base ideal.
    """
    point = tuple(point)
    if len(point) != f.target.nvars:
        raise MapError("point arity does not match the target space")
    ring = f.source
    vals = [ring.coeff(v) for v in point]
    if all(not v for v in vals):
        raise MapError("point has all coordinates zero (degenerate image point)")
    base = f.base_ideal()
    if not base:
        raise MapError("base ideal is zero")
    minors = []
    m = len(f.forms)
    for i in range(m):
        for j in range(i + 1, m):
            p = f.forms[i] * vals[j] - f.forms[j] * vals[i]
            if p:
                minors.append(p)
    if not minors:
        raise MapError("all fiber minors vanish identically")
    return groebner.saturate(minors, base)


def downgrade_general(j: RationalMap, syzygy, support_inverse,
                      support_degree: int | None = None) -> list[Polynomial]:
    """Fully downgraded sequence attached to a syzygy of j's coordinates.

    `syzygy` is a tuple of forms in j's source ring with nonzero last entry
    satisfying sum_i syzygy_i * j_i = 0; `support_inverse` lists the n forms
    (in the first n target variables) inverting the support map.  Trades one
    order of content in the first n source variables for support forms per
    step; returns the biforms F_1 .. F_{delta+1} in the combined bigraded
    ring, where delta is the largest k with every syzygy entry inside the
    k-th power of the ideal of the first n source variables.
    """
    n = j.source.nvars - 1
    syzygy = tuple(syzygy)
    if len(syzygy) != n + 1:
        raise MapError("syzygy length does not match the coordinate count")
    if syzygy[-1].is_zero():
        raise MapError("syzygy must have a nonzero last coordinate")
    acc = j.source.zero()
    for z, form in zip(syzygy, j.forms):
        acc = acc + z * form
    if not acc.is_zero():
        raise MapError("input is not a syzygy of the coordinate forms")
    degrees = {z.total_degree() for z in syzygy if z}
    if len(degrees) != 1 or any(not z.is_homogeneous() for z in syzygy if z):
        raise MapError("syzygy entries must be homogeneous of one degree")
    support_inverse = tuple(support_inverse)
    if len(support_inverse) != n:
        raise MapError("support inverse must have n coordinates")
    dprime = support_degree
    for h in support_inverse:
        if h.is_zero() or not h.is_homogeneous():
            raise MapError("support inverse coordinates must be nonzero forms")
        if dprime is None:
            dprime = h.total_degree()
        elif h.total_degree() != dprime:
            raise MapError("support inverse coordinates have inconsistent degrees")

    xblock = j.source.names[:n]
    delta = min(xprime_order(z, block=xblock) for z in syzygy if z)

    work = RingSpec(j.source.names + j.target.names, j.source.modulus,
                    split=(j.source.nvars, j.target.nvars))
    ys = [work.variable(nm) for nm in j.target.names]
    hs = [transport(h, work) for h in support_inverse]
    current = work.zero()
    for y, z in zip(ys, syzygy):
        current = current + y * transport(z, work)
    out = [current]
    for step in range(delta):
        parts = x_decompose(current, block=xblock)
        nxt = work.zero()
        for part, h in zip(parts, hs):
            nxt = nxt + part * h
        if nxt.is_zero():
            raise MapError(f"downgrading collapsed to zero at step {step + 1}")
        out.append(nxt)
        current = nxt
    return out
