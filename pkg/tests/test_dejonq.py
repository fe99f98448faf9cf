"""Identity-support maps: construction, sequences, inverses, resolutions."""

import random

import pytest

from jonq import dejonq, groebner as gb
from jonq.cremona import inversion_certificate, normalize_map
from jonq.dejonq import ConstructionError
from jonq.polycore import degree_in, parse_polynomial, substitute, transport, xprime_order
from conftest import make_map


def P(text, ring):
    return parse_polynomial(text, ring)


def base_assignment(j):
    return {name: form for name, form in zip(j.target.names, j.base_forms)}


# ---------- construct ----------

def test_construct_e1(e1):
    assert (e1.n, e1.d) == (2, 2)
    R = e1.source
    assert e1.base_forms == (P("x1*x3", R), P("x2*x3", R), P("x1^2 - x2*x3", R))


def test_construct_rejects_common_factor():
    with pytest.raises(ConstructionError, match="gcd"):
        make_map(2, "x3", "x3^2")


def test_construct_rejects_missing_distinguished_variable():
    with pytest.raises(ConstructionError, match="involves"):
        make_map(2, "x1", "x1^2 + x2^2")


def test_construct_rejects_degree_mismatch():
    with pytest.raises(ConstructionError, match="degree mismatch"):
        make_map(2, "x3^2", "x1^2 - x2*x3")


def test_construct_rejects_non_monoid():
    with pytest.raises(ConstructionError, match="monoid"):
        make_map(2, "x3^2", "x1^3 - x2*x3^2")


def test_construct_rejects_g_monoid_violation():
    # degree 2 in the distinguished variable; the gcd check passes first
    with pytest.raises(ConstructionError, match="monoid"):
        make_map(2, "x2^2", "x1*x3^2")


# ---------- q decomposition ----------

def test_q_decomposition_examples(e1, e2, e3):
    R1, R2, R3 = e1.source, e2.source, e3.source
    assert dejonq.q_decomposition(e1) == (P("x1", R1), P("0 - x3", R1))
    assert dejonq.q_decomposition(e2) == (P("x2", R2), R2.zero(), P("0 - x4", R2))
    assert dejonq.q_decomposition(e3) == (P("x1*x3", R3), P("x2^2", R3))


def test_q_decomposition_reexpands(e1, e2, e3):
    for j in (e1, e2, e3):
        q = dejonq.q_decomposition(j)
        acc = j.source.zero()
        for qi, name in zip(q, j.source.names):
            acc = acc + qi * j.source.variable(name)
        assert acc == j.g


# ---------- downgraded sequences ----------

def test_sequence_e1(e1):
    seq = dejonq.downgraded_sequence(e1)
    W = seq.ring
    assert len(seq.forms) == 1
    assert seq.forms[0] == P("x3*y3 + x3*y2 - x1*y1", W)


def test_sequence_e3(e3):
    seq = dejonq.downgraded_sequence(e3)
    W = seq.ring
    f0 = P("x1*x3 + x2^2", W) * P("y3", W) - P("x1*x3*y1 + x2^2*y2", W)
    f1 = P("x3", W) * P("y1", W) * P("y3 - y1", W) + P("x2", W) * P("y2", W) * P("y3 - y2", W)
    assert seq.forms == (f0, f1)


def test_sequence_length_is_d_minus_one(e1, e2, e3):
    for j in (e1, e2, e3):
        assert len(dejonq.downgraded_sequence(j).forms) == j.d - 1


def _sequence_invariants(j):
    seq = dejonq.downgraded_sequence(j)
    W = seq.ring
    assignment = {name: transport(form, W)
                  for name, form in zip(j.target.names, j.base_forms)}
    last_target = j.target.names[j.n]
    for i, form in enumerate(seq.forms):
        assert substitute(form, assignment).is_zero()
        assert form.bidegree() == (j.d - 1 - i, i + 1)
        assert degree_in(form, last_target) == 1
        # measured content order: at least d - (i+2); the exact value is logged
        order = xprime_order(form, block=j.support_block())
        assert order >= j.d - (i + 2)
    # recurrence: x_j F_i - y_j F_{i-1} = sum_k (x_j y_k - x_k y_j) F_{i-1,k}
    for i in range(1, j.d - 1):
        for jj in range(j.n):
            xj = W.variable(j.source.names[jj])
            yj = W.variable(j.target.names[jj])
            lhs = xj * seq.forms[i] - yj * seq.forms[i - 1]
            rhs = W.zero()
            for k in range(j.n):
                xk = W.variable(j.source.names[k])
                yk = W.variable(j.target.names[k])
                rhs = rhs + (xj * yk - xk * yj) * seq.content[i - 1][k]
            assert lhs == rhs
    # final form depends effectively on the distinguished source variable
    assert degree_in(seq.forms[-1], j.source.names[j.n]) >= 1
    return seq


def test_sequence_invariants_worked_examples(e1, e2, e3):
    for j in (e1, e2, e3):
        _sequence_invariants(j)


def test_sequence_invariants_randomized():
    rng = random.Random(55)
    for n in (2, 3):
        for d in (2, 3, 4):
            for _ in range(3):
                _sequence_invariants(dejonq.random_map(n, d, rng))


# ---------- inverse ----------

def test_inverse_e1(e1):
    inv, cert = dejonq.inverse(e1)
    Ry = e1.target
    assert inv.base_forms == (P("y1*y2 + y1*y3", Ry), P("y2^2 + y2*y3", Ry),
                              P("y1^2", Ry))
    assert cert.factor == P("x1^2*x3", e1.source)
    assert cert.degree == 3


def test_inverse_e2(e2):
    inv, cert = dejonq.inverse(e2)
    Ry = e2.target
    assert inv.base_forms == (P("y1*y3 + y1*y4", Ry), P("y2*y3 + y2*y4", Ry),
                              P("y3^2 + y3*y4", Ry), P("y1*y2", Ry))
    assert cert.factor == P("x1*x2*x4", e2.source)
    assert cert.degree == 3


def test_inverse_e3(e3):
    inv, cert = dejonq.inverse(e3)
    Ry = e3.target
    assert inv.f == P("y1*y3 - y1^2", Ry)
    assert inv.g == P("y2^3 - y2^2*y3", Ry)
    # delta = x1*x2^2*(x2-x1)*f^2 of degree d^2-1 = 8
    f = e3.f
    R = e3.source
    delta = P("x1", R) * P("x2^2", R) * P("x2 - x1", R) * f * f
    assert cert.factor == delta
    assert cert.degree == 8


def test_inverse_is_dejonquieres(e1, e2, e3):
    for j in (e1, e2, e3):
        inv, cert = dejonq.inverse(j)
        assert (inv.n, inv.d) == (j.n, j.d)
        assert cert.degree == j.d ** 2 - 1


def test_double_inverse_proportional(e1, e3):
    for j in (e1, e3):
        inv, _ = dejonq.inverse(j)
        back, cert = dejonq.inverse(inv)
        assert cert.degree == j.d ** 2 - 1
        m = normalize_map(back.base_forms, j.source, j.target)
        jm = normalize_map(j.base_forms, j.source, j.target)
        scale = None
        for a, b in zip(m.forms, jm.forms):
            if a.is_zero() and b.is_zero():
                continue
            ratio = (a.lc() / b.lc()) if j.source.modulus is None else None
            scale = scale or ratio
            assert a * b.lc() == b * a.lc()
        # the double inverse is still inverted by the first inverse
        cert2 = inversion_certificate(back.rational_map(), inv.rational_map())
        from jonq.cremona import InversionCertificate
        assert isinstance(cert2, InversionCertificate)


# ---------- resolution ----------

def test_resolution_e1_shifts(e1):
    fc = dejonq.resolution(e1)
    assert fc.shifts == ((0,), (2, 2, 2), (3, 3))
    assert fc.verify()


def test_resolution_e2_shifts(e2):
    fc = dejonq.resolution(e2)
    assert fc.shifts == ((0,), (2, 2, 2, 2), (3, 3, 3, 3), (4,))
    assert fc.verify()
    oracle = gb.minimal_free_resolution(list(e2.base_forms))
    assert fc.betti() == oracle.betti


def test_resolution_matches_oracle(e1, e2, e3):
    for j in (e1, e2, e3):
        fc = dejonq.resolution(j)
        assert fc.verify()
        oracle = gb.minimal_free_resolution(list(j.base_forms))
        assert fc.betti() == oracle.betti
        # Auslander-Buchsbaum: projdim n forces depth 1 over n+1 variables
        assert oracle.betti.length() == j.n


def test_resolution_random_n3_d3():
    rng = random.Random(33)
    j = dejonq.random_map(3, 3, rng)
    fc = dejonq.resolution(j)
    assert fc.shifts[2] == (4, 4, 4, 5)
    assert fc.shifts[3] == (5,)
    assert fc.verify()
    oracle = gb.minimal_free_resolution(list(j.base_forms))
    assert fc.betti() == oracle.betti


def test_resolution_closed_form_randomized():
    rng = random.Random(44)
    from jonq.dejonq import _binomial
    for n in (2, 3):
        for d in (2, 3, 4):
            j = dejonq.random_map(n, d, rng)
            fc = dejonq.resolution(j)
            assert fc.verify()
            assert fc.shifts[1] == (d,) * (n + 1)
            expected2 = tuple(sorted([d + 1] * _binomial(n, 2) + [2 * d - 1]))
            assert tuple(sorted(fc.shifts[2])) == expected2
            for p in range(3, n + 1):
                assert fc.shifts[p] == (d + p - 1,) * _binomial(n, p)
            oracle = gb.minimal_free_resolution(list(j.base_forms))
            assert fc.betti() == oracle.betti


# ---------- structural checks ----------

def test_structural_e1(e1):
    rep = dejonq.structural_checks(e1)
    assert rep.ok
    assert rep.saturated and rep.colon_contains_support
    assert rep.cm and rep.projdim == 2
    assert rep.multiplicity == 3 == rep.multiplicity_expected


def test_structural_e2(e2):
    rep = dejonq.structural_checks(e2)
    assert rep.ok
    assert not rep.cm  # n = 3
    assert rep.projdim == 3


def test_structural_e3(e3):
    rep = dejonq.structural_checks(e3)
    assert rep.ok
    assert rep.multiplicity == 7  # d(d-1) + 1 with d = 3


# ---------- random map generation ----------

def test_random_map_validity():
    rng = random.Random(2)
    for n in (2, 3):
        for d in (2, 3, 4):
            j = dejonq.random_map(n, d, rng)
            assert (j.n, j.d) == (n, d)
            assert j.source.modulus == 32003
            # re-validates all conditions
            dejonq.construct(j.f, j.g, n)
