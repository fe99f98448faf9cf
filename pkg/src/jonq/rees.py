"""Blowup presentation ideal of a de Jonquieres base ideal and its structure.

The presentation ideal lives in the bigraded ring S = k[x_1..x_{n+1},
y_1..y_{n+1}] and is computed exactly by eliminating t from
(y_i - t x_i f, y_{n+1} - t g).  The expected minimal generators are the
2-minors p_ij = x_j y_i - x_i y_j of the generic (x | y) matrix together
with the downgraded sequence F_0..F_{d-2}; verification compares reduced
bases, certifies minimality by exclusion, and cross-checks the iterated
mapping-cone Betti data against the Hilbert series.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from . import groebner
from .dejonq import DeJonquieresMap, _binomial, downgraded_sequence, inverse
from .polycore import (
    JonqError,
    Polynomial,
    RingSpec,
    exact_div,
    substitute,
    transport,
)


def working_ring(j: DeJonquieresMap) -> RingSpec:
    return j.working_ring()


def rees_ideal(j: DeJonquieresMap) -> groebner.GroebnerBasis:
    """Reduced Groebner basis of the presentation ideal, by eliminating t.

    The t-free part of the reduced elimination basis is itself the reduced
    grevlex basis of the contraction, so no second Buchberger run is needed.
    """
    s_ring = working_ring(j)
    big = RingSpec(("t",) + s_ring.names, s_ring.modulus)
    t = big.variable("t")
    gens = []
    for name, form in zip(j.target.names, j.base_forms):
        gens.append(big.variable(name) - t * transport(form, big))
    eliminated = groebner.eliminate(gens, 1)
    basis = tuple(transport(p, s_ring) for p in eliminated)
    return groebner.GroebnerBasis(s_ring, basis, basis)


def minor_generators(j: DeJonquieresMap) -> list[Polynomial]:
    """The 2-minors p_ij = x_j y_i - x_i y_j, 1 <= i < j <= n."""
    s_ring = working_ring(j)
    xs = [s_ring.variable(nm) for nm in j.source.names]
    ys = [s_ring.variable(nm) for nm in j.target.names]
    out = []
    for i in range(j.n):
        for k in range(i + 1, j.n):
            out.append(xs[k] * ys[i] - xs[i] * ys[k])
    return out


def predicted_generators(j: DeJonquieresMap, seq=None) -> list[Polynomial]:
    if seq is None:
        seq = downgraded_sequence(j)
    return minor_generators(j) + list(seq.forms)


def chain(j: DeJonquieresMap, seq=None) -> tuple[tuple[Polynomial, ...], ...]:
    """P_0 = (p_ij) and P_{i+1} = (P_i, F_i), ending at the full predicted set."""
    if seq is None:
        seq = downgraded_sequence(j)
    minors = tuple(minor_generators(j))
    out = [minors]
    for form in seq.forms:
        out.append(out[-1] + (form,))
    return tuple(out)


@dataclass(frozen=True)
class ReesPresentation:
    ring: RingSpec
    eliminated: groebner.GroebnerBasis
    predicted: tuple[Polynomial, ...]
    chain: tuple[tuple[Polynomial, ...], ...]


def rees_presentation(j: DeJonquieresMap) -> ReesPresentation:
    seq = downgraded_sequence(j)
    return ReesPresentation(
        ring=working_ring(j),
        eliminated=rees_ideal(j),
        predicted=tuple(predicted_generators(j, seq)),
        chain=chain(j, seq),
    )


def minimal_generator_count(gens) -> int:
    """Number of minimal generators of the homogeneous ideal spanned by gens."""
    from .resolutions import minimal_generators
    gens = [g for g in gens if g]
    if not gens:
        return 0
    ring = gens[0].ring
    kept = minimal_generators([(g,) for g in gens], ring, 1, (0,))
    return len(kept)


@dataclass(frozen=True)
class TheoremReport:
    """Outcome of the generation theorem check for one map."""

    ideal_matches: bool
    minimal: bool
    count: int
    expected_count: int
    witnesses: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return self.ideal_matches and self.minimal and self.count == self.expected_count


def verify_main_theorem(j: DeJonquieresMap) -> TheoremReport:
    """Predicted generators equal the eliminated ideal, minimally, with
    count C(n,2) + d - 1."""
    seq = downgraded_sequence(j)
    predicted = predicted_generators(j, seq)
    eliminated = rees_ideal(j)
    witnesses = []

    matches = groebner.ideal_equal(predicted, eliminated)
    if not matches:
        for p in predicted:
            if not eliminated.contains(p):
                witnesses.append(f"predicted generator not in the ideal: {p}")
        pred_gb = groebner.buchberger(predicted)
        for p in eliminated.basis:
            if not pred_gb.contains(p):
                witnesses.append(f"ideal element not generated: {p}")

    minimal = True
    for k, p in enumerate(predicted):
        others = predicted[:k] + predicted[k + 1:]
        if groebner.normal_form(p, others).is_zero():
            minimal = False
            witnesses.append(f"redundant generator: {p}")

    count = len(predicted)
    expected = _binomial(j.n, 2) + j.d - 1
    if count != expected:
        witnesses.append(f"generator count {count} != {expected}")
    return TheoremReport(ideal_matches=matches, minimal=minimal, count=count,
                         expected_count=expected, witnesses=tuple(witnesses))


def symmetric_algebra_ideal(j: DeJonquieresMap) -> list[Polynomial]:
    """Syzygy-generated subideal (y-degree one part): the p_ij together with F_0."""
    seq = downgraded_sequence(j)
    return minor_generators(j) + [seq.forms[0]]


def linear_type(j: DeJonquieresMap) -> bool:
    return groebner.ideal_equal(symmetric_algebra_ideal(j), rees_ideal(j))


@dataclass(frozen=True)
class ColonReport:
    base_stable: bool
    support_colons: tuple[bool, ...]
    witnesses: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return self.base_stable and all(self.support_colons)


def colon_lemma_checks(j: DeJonquieresMap) -> ColonReport:
    """P_0 : F_0 = P_0, and P_i : F_i = (x_1..x_n) for 1 <= i <= d-2."""
    seq = downgraded_sequence(j)
    links = chain(j, seq)
    s_ring = working_ring(j)
    witnesses = []

    base = list(links[0])
    first = groebner.colon(base, seq.forms[0])
    base_stable = groebner.ideal_equal(first, base)
    if not base_stable:
        witnesses.append("P_0 : F_0 enlarged P_0")

    support = [s_ring.variable(nm) for nm in j.source.names[: j.n]]
    results = []
    for i in range(1, j.d - 1):
        got = groebner.colon(list(links[i]), seq.forms[i])
        ok = groebner.ideal_equal(got, support)
        results.append(ok)
        if not ok:
            witnesses.append(f"P_{i} : F_{i} != (x_1..x_{j.n})")
    return ColonReport(base_stable=base_stable, support_colons=tuple(results),
                       witnesses=tuple(witnesses))


@dataclass(frozen=True)
class ConeBettiData:
    """Shift/rank data of the iterated mapping cone resolving S/(presentation ideal).

    Seeded by the 2-linear resolution of the minors ideal, one cone for F_0
    twisted by its degree d, then d-2 Koszul layers; the alternating shift
    sum must reproduce the Hilbert numerator of the quotient.
    """

    n: int
    d: int
    table: groebner.BettiTable
    hilbert_match: bool

    @property
    def ok(self) -> bool:
        return self.hilbert_match


def cone_betti_table(n: int, d: int) -> groebner.BettiTable:
    """The combinatorial cone table alone (no Hilbert cross-check)."""
    length = n if d == 2 else n + 1
    shifts: list[list[int]] = [[0]] + [[] for _ in range(length)]
    for i in range(1, n):
        shifts[i].extend([i + 1] * (i * _binomial(n, i + 1)))
    # one cone for F_0: the seed table again, twisted by deg F_0 = d
    shifts[1].append(d)
    for i in range(2, n + 1):
        shifts[i].extend([d + i] * ((i - 1) * _binomial(n, i)))
    for _ in range(d - 2):
        for i in range(1, n + 2):
            rank = _binomial(n, i - 1)
            if rank and i < len(shifts):
                shifts[i].extend([d + i - 1] * rank)
    return groebner.BettiTable.from_shift_lists(shifts)


def cone_betti(j: DeJonquieresMap) -> ConeBettiData:
    table = cone_betti_table(j.n, j.d)
    ideal = rees_ideal(j)
    numerator = groebner.hilbert_series_numerator(ideal)
    return ConeBettiData(n=j.n, d=j.d, table=table,
                         hilbert_match=table.alternating_numerator() == numerator)


def projdim_probe(j: DeJonquieresMap, length_bound: int | None = None) -> int:
    """Length of the minimal free resolution of S/(presentation ideal)."""
    ideal = rees_ideal(j)
    bound = length_bound if length_bound is not None else 2 * j.n + 2
    res = groebner.minimal_free_resolution(list(ideal.basis), length_bound=bound)
    return res.length()


def is_cohen_macaulay(j: DeJonquieresMap, projdim: int | None = None) -> bool:
    if projdim is None:
        projdim = projdim_probe(j)
    return projdim == j.n


@dataclass(frozen=True)
class SpecializationReport:
    lam: Polynomial
    regular: bool
    implicit_degree: int | None
    degree_ok: bool
    proportional: bool
    scalar: object | None
    rejected: tuple[Polynomial, ...] = ()

    @property
    def ok(self) -> bool:
        return self.regular and self.degree_ok and self.proportional


def specialization_check(j: DeJonquieresMap, lam: Polynomial | None = None,
                         rng: random.Random | None = None,
                         tries: int = 25) -> SpecializationReport:
    """Implicit equation of the specialized map versus the inverse coordinates.

    Cuts by a linear form ell = x_{n+1} - lam regular on R/I, eliminates the
    x-variables from the specialized blowup construction to get the implicit
    equation h of degree d, and certifies that ell evaluated on the inverse
    coordinates is a scalar multiple of h.
    """
    ring = j.source
    n = j.n
    last = ring.names[n]
    base = list(j.base_forms)
    base_gb = groebner.buchberger(base)
    rng = rng or random.Random(0)

    def candidate_regular(cand: Polynomial) -> bool:
        ell_ = ring.variable(last) - cand
        return groebner.ideal_equal(groebner.colon(list(base_gb.basis), ell_), base_gb)

    rejected = []
    if lam is not None:
        if not candidate_regular(lam):
            return SpecializationReport(lam=lam, regular=False, implicit_degree=None,
                                        degree_ok=False, proportional=False,
                                        scalar=None, rejected=(lam,))
    else:
        for _ in range(tries):
            coeffs = [rng.randrange(1, 1001) if ring.modulus is None
                      else rng.randrange(0, ring.modulus) for _ in range(n)]
            cand = ring.zero()
            for c, nm in zip(coeffs, ring.names[:n]):
                cand = cand + ring.variable(nm) * c
            if candidate_regular(cand):
                lam = cand
                break
            rejected.append(cand)
        if lam is None:
            raise JonqError("no regular linear form found; all candidates rejected")

    ell = ring.variable(last) - lam
    small = RingSpec(ring.names[:n], ring.modulus)
    spec_forms = [transport(substitute(form, {last: lam}), small) for form in base]

    big = RingSpec(("t",) + small.names + j.target.names, ring.modulus)
    t = big.variable("t")
    gens = [big.variable(nm) - t * transport(sf, big)
            for nm, sf in zip(j.target.names, spec_forms)]
    implicit = groebner.eliminate(gens, 1 + n)
    if len(implicit) != 1:
        return SpecializationReport(lam=lam, regular=True, implicit_degree=None,
                                    degree_ok=False, proportional=False,
                                    scalar=None, rejected=tuple(rejected))
    h = transport(implicit[0], j.target)
    degree_ok = h.total_degree() == j.d

    inv, _ = inverse(j)
    inv_forms = inv.base_forms
    ell_of_inverse = substitute(ell, {nm: form for nm, form in zip(ring.names, inv_forms)})
    quotient = exact_div(ell_of_inverse, h)
    proportional = quotient is not None and quotient.total_degree() == 0
    scalar = quotient.lc() if proportional else None
    return SpecializationReport(lam=lam, regular=True,
                                implicit_degree=int(h.total_degree()),
                                degree_ok=degree_ok, proportional=proportional,
                                scalar=scalar, rejected=tuple(rejected))


REPORT_CHECKS = ("theorem", "colon", "cone", "projdim", "special")


def case_report(j: DeJonquieresMap, seed=None, checks=REPORT_CHECKS,
                length_bound: int | None = None) -> dict:
    """JSON-ready report for one map; schema used by the CLI and the probe."""
    import time

    start = time.monotonic()
    report: dict = {
        "case": {
            "n": j.n,
            "d": j.d,
            "seed": seed,
            "f": str(j.f),
            "g": str(j.g),
        },
        "modulus": j.source.modulus,
    }
    if "theorem" in checks:
        report["theorem"] = "pass" if verify_main_theorem(j).ok else "fail"
    if "colon" in checks:
        report["colon"] = "pass" if colon_lemma_checks(j).ok else "fail"
    if "cone" in checks:
        report["cone_hilbert"] = "pass" if cone_betti(j).ok else "fail"
    if "projdim" in checks:
        try:
            pd = projdim_probe(j, length_bound)
            report["projdim"] = pd
            report["cm"] = pd == j.n
            report["conjecture_expected_cm"] = j.d <= j.n + 1
            if report["cm"] != report["conjecture_expected_cm"]:
                report["conjecture_counterexample"] = True
        except groebner.ResolutionBoundError:
            report["projdim"] = None
            report["cm"] = None
            report["skipped"] = "resolution bound exceeded"
    if "special" in checks:
        rng = random.Random(seed if seed is not None else 0)
        report["special"] = "pass" if specialization_check(j, rng=rng).ok else "fail"
    report["runtime_ms"] = int((time.monotonic() - start) * 1000)
    return report
