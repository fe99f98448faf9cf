"""Syzygies and minimal graded free resolutions over free modules.

A module element is a dict {(component, monomial): coefficient}.  Syzygies
of columns f_1..f_m inside R^s are computed by running module Buchberger on
the augmented vectors (f_i, e_i) in R^(s+m) under an order whose first s
components dominate: basis elements supported entirely on the tag block are
a Groebner basis of the syzygy module.

Resolutions iterate: take a minimal generating set of the current syzygy
module (ascending-degree greedy, so minimality holds by graded Nakayama),
record the matrix, continue with its syzygies.  Matrices therefore have all
entries in the maximal ideal and the resulting resolution is minimal; no
unit-stripping pass is needed.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from .polycore import (
    JonqError,
    Polynomial,
    RingSpec,
    RingMismatchError,
    mono_divides,
    mono_lcm,
)


class ResolutionBoundError(JonqError):
    """Raised when the length bound is hit before the resolution terminates."""

    def __init__(self, partial):
        super().__init__("length bound exceeded before the resolution terminated")
        self.partial = partial


def _module_key(ring: RingSpec, block: int | None):
    """Sort key on (component, monomial); components < block dominate."""
    ringkey = ring.key
    if block is None:
        def key(term):
            comp, mono = term
            return ringkey(mono) + (-comp,)
    else:
        def key(term):
            comp, mono = term
            return ((1 if comp < block else 0,) + ringkey(mono) + (-comp,))
    return key


def _neg(key):
    return tuple(-v for v in key)


def _mv_lead(v: dict, key):
    return max(v, key=key)


def _mv_monic(v: dict, ring: RingSpec, key) -> dict:
    c = v[_mv_lead(v, key)]
    if c == 1:
        return v
    inv = ring.cinv(c)
    mod = ring.modulus
    if mod is None:
        return {t: co * inv for t, co in v.items()}
    return {t: co * inv % mod for t, co in v.items()}


def _mv_reduce(work: dict, reducers, ring: RingSpec, key) -> dict:
    """Full normal form of a module element modulo monic reducers.

    reducers: list of ((comp, mono) lead, tail terms).
    """
    mod = ring.modulus
    heap = [(_neg(key(t)), t) for t in work]
    heapq.heapify(heap)
    remainder: dict = {}
    while heap:
        _, t = heapq.heappop(heap)
        c = work.get(t)
        if not c:
            continue
        comp, mono = t
        hit = None
        for (lcomp, lmono), tail in reducers:
            if lcomp == comp and mono_divides(lmono, mono):
                hit = (lmono, tail)
                break
        if hit is None:
            remainder[t] = c
            del work[t]
            continue
        del work[t]
        lmono, tail = hit
        shift = tuple(a - b for a, b in zip(mono, lmono))
        for (tcomp, tmono), tc in tail:
            t2 = (tcomp, tuple(a + b for a, b in zip(shift, tmono)))
            nc = work.get(t2, 0) - c * tc
            if mod is not None:
                nc %= mod
            if nc:
                if t2 not in work:
                    heapq.heappush(heap, (_neg(key(t2)), t2))
                work[t2] = nc
            else:
                work.pop(t2, None)
    return remainder


def _mv_reducer(v: dict, key):
    lead = _mv_lead(v, key)
    tail = tuple((t, c) for t, c in v.items() if t != lead)
    return (lead, tail)


def _mv_spair(vi: dict, vj: dict, leadi, leadj, ring: RingSpec) -> dict:
    gamma = mono_lcm(leadi[1], leadj[1])
    si = tuple(a - b for a, b in zip(gamma, leadi[1]))
    sj = tuple(a - b for a, b in zip(gamma, leadj[1]))
    mod = ring.modulus
    out: dict = {}
    for (c0, m), co in vi.items():
        out[(c0, tuple(a + b for a, b in zip(si, m)))] = co
    for (c0, m), co in vj.items():
        t2 = (c0, tuple(a + b for a, b in zip(sj, m)))
        nc = out.get(t2, 0) - co
        if mod is not None:
            nc %= mod
        if nc:
            out[t2] = nc
        else:
            out.pop(t2, None)
    return out


class _ModuleGB:
    """Incremental module Groebner basis (chain criterion only).

    The product criterion is not valid over free modules, so pair pruning
    uses only the Gebauer-Moeller divisibility rules.
    """

    def __init__(self, ring: RingSpec, block: int | None = None):
        self.ring = ring
        self.key = _module_key(ring, block)
        self.basis: list[dict] = []
        self.leads: list[tuple] = []
        self.reducers: list = []
        self.pairs: list[tuple[int, int]] = []

    def reduce(self, v: dict) -> dict:
        return _mv_reduce(dict(v), self.reducers, self.ring, self.key)

    def _update_pairs(self, new: int):
        leads = self.leads
        lead_new = leads[new]
        comp = lead_new[0]
        kept = []
        for i, j in self.pairs:
            if leads[i][0] != comp:
                kept.append((i, j))
                continue
            lij = mono_lcm(leads[i][1], leads[j][1])
            if (not mono_divides(lead_new[1], lij)
                    or mono_lcm(leads[i][1], lead_new[1]) == lij
                    or mono_lcm(leads[j][1], lead_new[1]) == lij):
                kept.append((i, j))
        groups: dict = {}
        for i in range(new):
            if leads[i][0] == comp:
                groups.setdefault(mono_lcm(leads[i][1], lead_new[1]), []).append(i)
        ringkey = self.ring.key
        minimal: list = []
        for lcm in sorted(groups, key=ringkey):
            if not any(mono_divides(m, lcm) for m in minimal):
                minimal.append(lcm)
        for lcm in minimal:
            kept.append((min(groups[lcm]), new))
        self.pairs = kept

    def _append(self, v: dict):
        self.basis.append(v)
        self.leads.append(_mv_lead(v, self.key))
        self.reducers.append(_mv_reducer(v, self.key))
        self._update_pairs(len(self.basis) - 1)

    def _saturate(self):
        while self.pairs:
            best = min(
                range(len(self.pairs)),
                key=lambda k: self.key(
                    (self.leads[self.pairs[k][0]][0],
                     mono_lcm(self.leads[self.pairs[k][0]][1],
                              self.leads[self.pairs[k][1]][1]))))
            i, j = self.pairs.pop(best)
            s = _mv_spair(self.basis[i], self.basis[j], self.leads[i], self.leads[j], self.ring)
            r = _mv_reduce(s, self.reducers, self.ring, self.key)
            if r:
                self._append(_mv_monic(r, self.ring, self.key))

    def add(self, v: dict) -> bool:
        """Adjoin v; False if it was already in the module (basis unchanged)."""
        r = self.reduce(v)
        if not r:
            return False
        self._append(_mv_monic(r, self.ring, self.key))
        self._saturate()
        return True


def _module_groebner(vectors, ring: RingSpec, block: int | None = None) -> _ModuleGB:
    gb = _ModuleGB(ring, block)
    sortkey = gb.key
    for v in sorted((v for v in vectors if v), key=lambda v: sortkey(_mv_lead(v, sortkey))):
        r = gb.reduce(v)
        if r:
            gb._append(_mv_monic(r, ring, gb.key))
    gb._saturate()
    return gb


# ---------- columns <-> module dicts ----------

def _column_to_dict(column, ring: RingSpec) -> dict:
    out: dict = {}
    for comp, p in enumerate(column):
        if p.ring != ring:
            raise RingMismatchError("column entries live in different rings")
        for mono, c in p.terms:
            out[(comp, mono)] = c
    return out


def _dict_to_column(v: dict, ring: RingSpec, rank: int):
    parts: list[dict] = [dict() for _ in range(rank)]
    for (comp, mono), c in v.items():
        parts[comp][mono] = c
    return tuple(Polynomial(ring, d) for d in parts)


def _column_degree(column, shifts) -> int:
    """Common degree of a homogeneous column; raises if not homogeneous."""
    degs = set()
    for comp, p in enumerate(column):
        for mono, _ in p.terms:
            degs.add(sum(mono) + shifts[comp])
    if len(degs) != 1:
        raise JonqError("column is not homogeneous for the given shifts")
    return degs.pop()


def syzygies(gens, shifts=None) -> list[tuple[Polynomial, ...]]:
    """Generating syzygies of scalar polynomials or of module columns.

    `gens` is either a list of polynomials (syzygies of an ideal's
    generators) or a list of equal-length polynomial columns.  Returns a
    list of syzygy columns of length len(gens); they generate the full
    syzygy module (in fact form a Groebner basis of it).
    """
    gens = list(gens)
    if not gens:
        return []
    if isinstance(gens[0], Polynomial):
        columns = [(g,) for g in gens]
    else:
        columns = [tuple(col) for col in gens]
    rank = len(columns[0])
    if any(len(c) != rank for c in columns):
        raise JonqError("columns have inconsistent lengths")
    ring = next(p.ring for c in columns for p in c)
    m = len(columns)
    zero_mono = (0,) * ring.nvars
    augmented = []
    for i, col in enumerate(columns):
        v = _column_to_dict(col, ring)
        v[(rank + i, zero_mono)] = ring.coeff(1)
        augmented.append(v)
    gb = _module_groebner(augmented, ring, block=rank)
    out = []
    for v in gb.basis:
        if all(comp >= rank for comp, _ in v):
            shifted = {(comp - rank, mono): c for (comp, mono), c in v.items()}
            out.append(_dict_to_column(shifted, ring, m))
    return out


def minimal_generators(columns, ring: RingSpec, rank: int, shifts=None):
    """Minimal generating subset of homogeneous columns (ascending degree greedy)."""
    if shifts is None:
        shifts = (0,) * rank
    degreed = [( _column_degree(c, shifts), i, c) for i, c in enumerate(columns)
               if any(p for p in c)]
    degreed.sort(key=lambda t: (t[0], t[1]))
    gb = _ModuleGB(ring)
    kept = []
    for deg, _, col in degreed:
        if gb.add(_column_to_dict(col, ring)):
            kept.append((deg, col))
    return kept


@dataclass(frozen=True)
class BettiTable:
    """Graded Betti data: per homological position, sorted (shift, rank) pairs."""

    rows: tuple[tuple[tuple[int, int], ...], ...]

    @classmethod
    def from_shift_lists(cls, shift_lists) -> "BettiTable":
        rows = []
        for shifts in shift_lists:
            counts: dict[int, int] = {}
            for s in shifts:
                counts[s] = counts.get(s, 0) + 1
            rows.append(tuple(sorted(counts.items())))
        return cls(tuple(rows))

    def ranks(self) -> tuple[int, ...]:
        return tuple(sum(r for _, r in row) for row in self.rows)

    def shifts(self, i: int) -> dict[int, int]:
        return dict(self.rows[i])

    def length(self) -> int:
        return len(self.rows) - 1

    def alternating_numerator(self) -> dict[int, int]:
        """Sum_i (-1)^i sum_shifts rank * t^shift; equals the Hilbert numerator
        of the resolved module when the rows come from one of its resolutions."""
        out: dict[int, int] = {}
        for i, row in enumerate(self.rows):
            sign = -1 if i % 2 else 1
            for shift, rank in row:
                nc = out.get(shift, 0) + sign * rank
                if nc:
                    out[shift] = nc
                else:
                    out.pop(shift, None)
        return out

    def __str__(self):
        parts = []
        for row in self.rows:
            parts.append(",".join(f"{s}^{r}" if r > 1 else str(s) for s, r in row))
        return " | ".join(parts)


@dataclass(frozen=True)
class Resolution:
    """A minimal graded free resolution of R^rank0 / im(gens).

    matrices[k] presents the map from position k+1 to position k as a tuple
    of columns, each column a tuple of polynomials over position k's rank.
    """

    ring: RingSpec
    shifts: tuple[tuple[int, ...], ...]
    matrices: tuple[tuple[tuple[Polynomial, ...], ...], ...]
    complete: bool

    @property
    def betti(self) -> BettiTable:
        return BettiTable.from_shift_lists(self.shifts)

    def length(self) -> int:
        return len(self.shifts) - 1

    def verify_complex(self) -> bool:
        """Check consecutive matrices compose to zero."""
        for k in range(len(self.matrices) - 1):
            rows = len(self.shifts[k])
            for col in self.matrices[k + 1]:
                for r in range(rows):
                    acc = self.ring.zero()
                    for c, entry in enumerate(col):
                        acc = acc + self.matrices[k][c][r] * entry
                    if not acc.is_zero():
                        return False
        return True


def minimal_free_resolution(gens, length_bound: int | None = None) -> Resolution:
    """Minimal graded free resolution of R/I (or of R^s modulo column span).

    `gens` is a list of homogeneous polynomials (ideal case) or of
    homogeneous columns.  Raises ResolutionBoundError (carrying the partial
    resolution) if the bound is hit before the syzygies vanish.
    """
    gens = list(gens)
    if not gens:
        raise JonqError("need at least one generator")
    if isinstance(gens[0], Polynomial):
        columns = [(g,) for g in gens if g]
        ring = gens[0].ring
        rank0 = 1
    else:
        columns = [tuple(c) for c in gens]
        ring = next(p.ring for c in columns for p in c)
        rank0 = len(columns[0])
    if length_bound is not None and length_bound < 1:
        raise JonqError("length bound must be at least 1")
    shifts: list[tuple[int, ...]] = [(0,) * rank0]
    matrices: list = []
    current = minimal_generators(columns, ring, rank0, shifts[0])
    while current:
        if length_bound is not None and len(matrices) >= length_bound:
            partial = Resolution(ring, tuple(shifts), tuple(matrices), False)
            raise ResolutionBoundError(partial)
        matrices.append(tuple(col for _, col in current))
        shifts.append(tuple(deg for deg, _ in current))
        syz = syzygies([col for _, col in current])
        current = minimal_generators(syz, ring, len(shifts[-1]), shifts[-1])
    return Resolution(ring, tuple(shifts), tuple(matrices), True)
