"""Identity-support generalized de Jonquieres maps.

A map of degree d >= 2 on P^n is determined by a pair of relatively prime
forms f (degree d-1) and g (degree d) in k[x_1..x_{n+1}] that are monoids in
the distinguished last variable (degree <= 1 in it, at least one degree
exactly 1) with g inside (x_1,..,x_n); the map is (x_1 f : .. : x_n f : g).

The module builds the downgraded sequence F_0,..,F_{d-2} living in the
bigraded ring k[x, y], derives the inverse map from the last member's
partial derivatives, writes down the closed-form minimal free resolution of
the base ideal, and checks the structural consequences (saturation,
associated support prime, Cohen-Macaulayness exactly in the plane case,
plane multiplicity d(d-1)+1).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import groebner
from .cremona import InversionCertificate, RationalMap, inversion_certificate
from .polycore import (
    JonqError,
    Polynomial,
    RingSpec,
    degree_in,
    gcd,
    partial_derivative,
    transport,
    x_decompose,
    xprime_order,
)


class ConstructionError(JonqError):
    """A proposed (f, g, n) violates the de Jonquieres conditions."""


def _binomial(n: int, k: int) -> int:
    if k < 0 or k > n:
        return 0
    out = 1
    for i in range(k):
        out = out * (n - i) // (i + 1)
    return out


def source_ring(n: int, modulus: int | None = None) -> RingSpec:
    return RingSpec([f"x{i}" for i in range(1, n + 2)], modulus)


def target_ring(n: int, modulus: int | None = None, stem: str = "y") -> RingSpec:
    return RingSpec([f"{stem}{i}" for i in range(1, n + 2)], modulus)


@dataclass(frozen=True)
class DeJonquieresMap:
    """Validated identity-support de Jonquieres map (x_1 f : .. : x_n f : g)."""

    n: int
    d: int
    f: Polynomial
    g: Polynomial
    source: RingSpec
    target: RingSpec

    @property
    def base_forms(self) -> tuple[Polynomial, ...]:
        xs = self.source.variables()
        return tuple(xs[i] * self.f for i in range(self.n)) + (self.g,)

    def rational_map(self) -> RationalMap:
        return RationalMap(self.source, self.target, self.base_forms)

    def working_ring(self) -> RingSpec:
        """Bigraded ring on source then target variables."""
        return RingSpec(self.source.names + self.target.names,
                        self.source.modulus,
                        split=(self.source.nvars, self.target.nvars))

    def support_block(self) -> tuple[str, ...]:
        return self.source.names[: self.n]

    def __repr__(self):
        return f"DeJonquieresMap(n={self.n}, d={self.d}, f={self.f}, g={self.g})"


def construct(f: Polynomial, g: Polynomial, n: int,
              target: RingSpec | None = None) -> DeJonquieresMap:
    """Validate (f, g, n) and build the map; raises ConstructionError with the
    first violated condition otherwise."""
    if f.ring != g.ring:
        raise ConstructionError("f and g live in different rings")
    ring = f.ring
    if ring.nvars != n + 1:
        raise ConstructionError(f"ring must have n+1 = {n + 1} variables")
    if n < 1:
        raise ConstructionError("n must be at least 1")
    if f.is_zero() or g.is_zero():
        raise ConstructionError("f and g must be nonzero")
    if not f.is_homogeneous() or not g.is_homogeneous():
        raise ConstructionError("f and g must be homogeneous")
    d = g.total_degree()
    if d < 2:
        raise ConstructionError(f"deg g = {d} < 2")
    if f.total_degree() != d - 1:
        raise ConstructionError(
            f"degree mismatch: deg f = {f.total_degree()} but deg g - 1 = {d - 1}")
    if gcd(f, g).total_degree() != 0:
        raise ConstructionError("gcd(f,g) != 1")
    last = ring.names[n]
    rf, rg = degree_in(f, last), degree_in(g, last)
    if rf > 1:
        raise ConstructionError(f"f has degree {rf} > 1 in {last} (not a monoid)")
    if rg > 1:
        raise ConstructionError(f"g has degree {rg} > 1 in {last} (not a monoid)")
    if rf != 1 and rg != 1:
        raise ConstructionError(f"neither f nor g involves {last}")
    block = ring.names[:n]
    if xprime_order(g, block=block) < 1:
        raise ConstructionError(f"g is not inside ({', '.join(block)})")
    tgt = target or target_ring(n, ring.modulus, stem="y" if ring.names[0][0] != "y" else "z")
    return DeJonquieresMap(n=n, d=d, f=f, g=g, source=ring, target=tgt)


def q_decomposition(j: DeJonquieresMap) -> tuple[Polynomial, ...]:
    """The greedy decomposition g = q_1 x_1 + .. + q_n x_n."""
    return x_decompose(j.g, block=j.support_block())


@dataclass(frozen=True)
class DowngradedSequence:
    """Forms F_0..F_{d-2} with the content matrices used to derive them.

    content[i] holds the tuple (F_{i,1}, .., F_{i,n}) with
    F_i = sum_k F_{i,k} x_k; the next form is F_{i+1} = sum_k F_{i,k} y_k.
    """

    map: DeJonquieresMap
    q: tuple[Polynomial, ...]
    forms: tuple[Polynomial, ...]
    content: tuple[tuple[Polynomial, ...], ...]

    @property
    def ring(self) -> RingSpec:
        return self.forms[0].ring


def downgraded_sequence(j: DeJonquieresMap) -> DowngradedSequence:
    """F_0 = f y_{n+1} - sum q_i y_i, then trade x-content for y-variables."""
    work = j.working_ring()
    n, d = j.n, j.d
    ys = [work.variable(nm) for nm in j.target.names]
    q = q_decomposition(j)
    f0 = transport(j.f, work) * ys[n]
    for qi, y in zip(q, ys[:n]):
        f0 = f0 - transport(qi, work) * y
    forms = [f0]
    content = []
    xblock = j.support_block()
    for _ in range(d - 2):
        parts = x_decompose(forms[-1], block=xblock)
        content.append(parts)
        nxt = work.zero()
        for part, y in zip(parts, ys[:n]):
            nxt = nxt + part * y
        if nxt.is_zero():
            raise JonqError("downgrading collapsed to zero on a valid map")
        forms.append(nxt)
    return DowngradedSequence(map=j, q=q, forms=tuple(forms), content=tuple(content))


class InverseError(JonqError):
    pass


def inverse(j: DeJonquieresMap) -> tuple[DeJonquieresMap, InversionCertificate]:
    """Inverse map from the partials of the last downgraded form.

    The inverse is (f' y_1 : .. : f' y_n : g') with f' the partial of
    F_{d-2} in the last source variable and g' = s * sum_i (dF_{d-2}/dx_i) y_i,
    the sign s in {+1,-1} fixed by whichever inversion certificate succeeds.
    """
    seq = downgraded_sequence(j)
    last = seq.forms[-1]
    work = last.ring
    n = j.n
    fprime_w = partial_derivative(last, j.source.names[n])
    if fprime_w.is_zero():
        raise InverseError("last downgraded form does not involve the last variable")
    gsum_w = work.zero()
    for i in range(n):
        gsum_w = gsum_w + partial_derivative(last, j.source.names[i]) * work.variable(j.target.names[i])
    fprime = transport(fprime_w, j.target)
    gsum = transport(gsum_w, j.target)
    ys = j.target.variables()
    jmap = j.rational_map()
    failures = []
    for sign in (1, -1):
        gprime = gsum if sign == 1 else -gsum
        forms = tuple(fprime * ys[i] for i in range(n)) + (gprime,)
        candidate = RationalMap(j.target, j.source, forms)
        cert = inversion_certificate(jmap, candidate)
        if isinstance(cert, InversionCertificate):
            inv = construct(fprime, gprime, n, target=j.source)
            return inv, cert
        failures.append((sign, cert))
    detail = "; ".join(f"sign {s:+d}: coordinate {c.index} ({c.reason})" for s, c in failures)
    raise InverseError(f"no sign yields an inversion certificate: {detail}")


@dataclass(frozen=True)
class FreeComplex:
    """Explicit graded free complex; matrices[k] maps position k+1 to k.

    Each matrix is stored as a tuple of rows of polynomials; shifts[k] lists
    the generator degrees of the position-k free module.
    """

    ring: RingSpec
    shifts: tuple[tuple[int, ...], ...]
    matrices: tuple[tuple[tuple[Polynomial, ...], ...], ...]

    def betti(self) -> groebner.BettiTable:
        return groebner.BettiTable.from_shift_lists(self.shifts)

    def length(self) -> int:
        return len(self.shifts) - 1

    def verify(self) -> bool:
        """Consecutive products vanish and entries are homogeneous of the
        degree dictated by the shifts."""
        for k, mat in enumerate(self.matrices):
            rows, cols = len(self.shifts[k]), len(self.shifts[k + 1])
            for r in range(rows):
                for c in range(cols):
                    entry = mat[r][c]
                    if entry.is_zero():
                        continue
                    want = self.shifts[k + 1][c] - self.shifts[k][r]
                    if not entry.is_homogeneous() or entry.total_degree() != want:
                        return False
        for k in range(len(self.matrices) - 1):
            a, b = self.matrices[k], self.matrices[k + 1]
            rows, mid, cols = len(self.shifts[k]), len(self.shifts[k + 1]), len(self.shifts[k + 2])
            for r in range(rows):
                for c in range(cols):
                    acc = self.ring.zero()
                    for m in range(mid):
                        acc = acc + a[r][m] * b[m][c]
                    if not acc.is_zero():
                        return False
        return True


def _koszul_differential(ring: RingSpec, vars_idx, p: int):
    """Matrix of the p-th Koszul differential of the given variables.

    Rows are indexed by (p-1)-subsets, columns by p-subsets, both in
    lexicographic order; entry signs follow the alternating convention.
    """
    from itertools import combinations
    varlist = list(vars_idx)
    rows = list(combinations(range(len(varlist)), p - 1))
    cols = list(combinations(range(len(varlist)), p))
    row_index = {s: i for i, s in enumerate(rows)}
    zero = ring.zero()
    mat = [[zero for _ in cols] for _ in rows]
    for cidx, subset in enumerate(cols):
        for t, elem in enumerate(subset):
            rest = subset[:t] + subset[t + 1:]
            sign = 1 if t % 2 == 0 else -1
            entry = ring.variable(varlist[elem])
            mat[row_index[rest]][cidx] = entry if sign == 1 else -entry
    return mat


def resolution(j: DeJonquieresMap) -> FreeComplex:
    """Closed-form minimal graded free resolution of R / (base ideal).

    Position 1 is R(-d)^{n+1}; position 2 is R(-(d+1))^C(n,2) + R(-(2d-1))
    with matrix [Koszul(x_1..x_n) | (-q_1,..,-q_n,f)^T]; the tail repeats the
    Koszul tail of (x_1..x_n) shifted by d-1.
    """
    ring = j.source
    n, d = j.n, j.d
    q = q_decomposition(j)
    shifts: list[tuple[int, ...]] = [(0,), (d,) * (n + 1)]
    matrices: list = []
    matrices.append((tuple(j.base_forms),))  # single row: the coordinate forms
    # rows: n+1 coordinates; columns: C(n,2) Koszul + 1 extra
    koszul2 = _koszul_differential(ring, range(n), 2)
    ncols = _binomial(n, 2)
    rows = []
    for r in range(n + 1):
        row = []
        for c in range(ncols):
            row.append(koszul2[r][c] if r < n else ring.zero())
        row.append(-q[r] if r < n else j.f)
        rows.append(tuple(row))
    matrices.append(tuple(rows))
    shifts.append((d + 1,) * ncols + (2 * d - 1,))
    for p in range(3, n + 1):
        kos = _koszul_differential(ring, range(n), p)
        cols = _binomial(n, p)
        if p == 3:
            rows = [tuple(kos[r]) for r in range(len(kos))]
            rows.append(tuple(ring.zero() for _ in range(cols)))  # extra summand row
        else:
            rows = [tuple(kos[r]) for r in range(len(kos))]
        matrices.append(tuple(rows))
        shifts.append((d + p - 1,) * cols)
    return FreeComplex(ring=ring, shifts=tuple(shifts), matrices=tuple(matrices))


@dataclass(frozen=True)
class StructuralReport:
    """Outcome of the structural corollaries for one map."""

    saturated: bool
    colon_contains_support: bool
    projdim: int
    cm: bool
    cm_iff_plane: bool
    multiplicity: int | None
    multiplicity_expected: int | None
    witnesses: tuple[str, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        mult_ok = (self.multiplicity is None
                   or self.multiplicity == self.multiplicity_expected)
        return (self.saturated and self.colon_contains_support
                and self.cm_iff_plane and mult_ok)


def structural_checks(j: DeJonquieresMap) -> StructuralReport:
    """Saturation, the associated support prime, CM iff n = 2, plane multiplicity."""
    ring = j.source
    n = j.n
    base = list(j.base_forms)
    gb = groebner.buchberger(base)
    witnesses = []

    maximal = [ring.variable(i) for i in range(ring.nvars)]
    sat = groebner.saturate(list(gb.basis), maximal)
    saturated = groebner.ideal_equal(sat, gb)
    if not saturated:
        extra = [str(p) for p in sat if not gb.contains(p)]
        witnesses.append(f"saturation added {extra}")

    colon_f = groebner.colon(list(gb.basis), j.f)
    colon_gb = groebner.buchberger(colon_f)
    support_ok = all(colon_gb.contains(ring.variable(i)) for i in range(n))
    if not support_ok:
        witnesses.append("support variables missing from I : f")

    res = groebner.minimal_free_resolution(base)
    projdim = res.length()
    cm = projdim == 2
    cm_iff_plane = cm == (n == 2)
    if not cm_iff_plane:
        witnesses.append(f"projdim {projdim} contradicts CM iff n=2 (n={n})")

    multiplicity = expected = None
    if n == 2:
        num = groebner.hilbert_series_numerator(gb)
        _, multiplicity = groebner.dim_and_multiplicity(num, ring.nvars)
        expected = j.d * (j.d - 1) + 1
        if multiplicity != expected:
            witnesses.append(f"multiplicity {multiplicity} != {expected}")

    return StructuralReport(
        saturated=saturated,
        colon_contains_support=support_ok,
        projdim=projdim,
        cm=cm,
        cm_iff_plane=cm_iff_plane,
        multiplicity=multiplicity,
        multiplicity_expected=expected,
        witnesses=tuple(witnesses),
    )


def random_map(n: int, d: int, rng, modulus: int = 32003) -> DeJonquieresMap:
    """Random valid map: f = f0 + f1 x_{n+1}, g = g0 + g1 x_{n+1} with sparse
    random forms f0, f1, g0, g1 in the support variables, resampled until the
    gcd, monoid and effectivity conditions hold."""
    from .polycore import random_form
    ring = source_ring(n, modulus)
    last = ring.variable(n)
    block = ring.names[:n]
    for _ in range(1000):
        f0 = random_form(ring, d - 1, rng, terms=min(3, d), block=block)
        f1 = random_form(ring, d - 2, rng, terms=2, block=block) if d >= 2 else ring.zero()
        g0 = random_form(ring, d, rng, terms=3, block=block)
        g1 = random_form(ring, d - 1, rng, terms=2, block=block)
        drop_f1 = rng.random() < 0.25
        f = f0 if drop_f1 else f0 + f1 * last
        g = g0 + g1 * last
        try:
            return construct(f, g, n)
        except ConstructionError:
            continue
    raise JonqError(f"failed to sample a valid map for n={n}, d={d}")
