"""Buchberger's algorithm, normal forms, lifting, and graded quotient bases.

Everything is homogeneous and uses the global grevlex order. Gröbner bases
track representations of their elements over the original generators so that
membership certificates can be re-expressed in the input sequence.
"""

from __future__ import annotations

from functools import lru_cache
from math import comb

from .arith import (
    Polynomial,
    grevlex_key,
    monomial_div,
    monomial_divides,
    monomial_lcm,
    monomial_mul,
)
from .errors import InhomogeneousInputError, NotInIdealError

_MAX_LEAD_GENERATORS = 24


def _require_homogeneous(polys):
    for p in polys:
        if not p.is_homogeneous():
            raise InhomogeneousInputError(f"{p} is not homogeneous")


def divide_tracking(f, divisors):
    """Multivariate division of f by monic divisors, in fixed order.

    Returns (quotients, remainder) with f == sum(q_k * divisors[k]) + remainder
    and no remainder term divisible by any divisor lead monomial. Deterministic:
    the leading term of the running polynomial is always processed next, against
    the first divisor whose lead monomial divides it.
    """
    ring, field = f.ring, f.field
    quotients = [Polynomial.zero(ring, field) for _ in divisors]
    remainder = {}
    leads = [d.leading_monomial() for d in divisors]
    work = f
    while not work.is_zero():
        lm = work.leading_monomial()
        lc = work.terms[lm]
        for k, dlm in enumerate(leads):
            if monomial_divides(dlm, lm):
                q = monomial_div(lm, dlm)
                quotients[k] = quotients[k] + Polynomial.monomial(ring, field, q, lc)
                work = work - divisors[k].term_mul(q, lc)
                break
        else:
            remainder[lm] = lc
            work = work - Polynomial.monomial(ring, field, lm, lc)
    return quotients, Polynomial(ring, field, remainder)


@lru_cache(maxsize=None)
def monomials_of_degree(nvars, d):
    """All exponent tuples of total degree d, in descending grevlex order."""
    def gen(prefix, remaining, slots):
        if slots == 1:
            yield prefix + (remaining,)
            return
        for e in range(remaining + 1):
            yield from gen(prefix + (e,), remaining - e, slots - 1)

    monos = list(gen((), d, nvars))
    monos.sort(key=grevlex_key, reverse=True)
    return tuple(monos)


def hilbert_dim_from_leads(leads, nvars, d):
    """dim_F (S / lead-term ideal)_d by inclusion-exclusion over generator lcms."""
    if d < 0:
        return 0
    leads = tuple(leads)
    if len(leads) > _MAX_LEAD_GENERATORS:
        raise ValueError("too many lead-term generators for inclusion-exclusion")
    total = 0
    for mask in range(1 << len(leads)):
        lcm = (0,) * nvars
        sign = 1
        m = mask
        i = 0
        while m:
            if m & 1:
                lcm = monomial_lcm(lcm, leads[i])
                sign = -sign
            m >>= 1
            i += 1
        e = d - sum(lcm)
        if e >= 0:
            total += sign * comb(e + nvars - 1, nvars - 1)
    return total


def lead_ideal_dimension(leads, nvars):
    """Krull dimension of S / (monomial ideal): size of the largest variable
    subset containing no generator's support. Returns -1 for the unit ideal."""
    supports = [frozenset(i for i, e in enumerate(mono) if e) for mono in leads]
    if any(not s for s in supports):
        return -1
    for size in range(nvars, -1, -1):
        for mask in range(1 << nvars):
            if bin(mask).count("1") != size:
                continue
            subset = {i for i in range(nvars) if mask >> i & 1}
            if all(not s <= subset for s in supports):
                return size
    return 0


class QuotientDegreeBasis:
    """Field basis of (S/I)_degree: normal-form monomials, descending grevlex."""

    __slots__ = ("degree", "monomials", "index")

    def __init__(self, degree, monomials):
        self.degree = degree
        self.monomials = tuple(monomials)
        self.index = {m: i for i, m in enumerate(self.monomials)}

    def __len__(self):
        return len(self.monomials)


class GroebnerBasis:
    """Reduced monic Gröbner basis with representation tracking.

    Every generator records a vector over the original input sequence;
    the identity generator == sum(rep_i * original_i) is certified at
    construction, as is reduction of all S-pairs to zero.
    """

    def __init__(self, ring, field, generators, representations, originals, ideal_degrees):
        self.ring = ring
        self.field = field
        self.generators = tuple(generators)
        self.representations = tuple(tuple(r) for r in representations)
        self.originals = tuple(originals)
        self.ideal_degrees = tuple(ideal_degrees)
        self._nf_cache = {}
        self._qbasis_cache = {}
        self._certify()

    def _certify(self):
        leads = self.lead_monomials()
        for g, rep in zip(self.generators, self.representations):
            if g.leading_coefficient() != 1:
                raise AssertionError("basis element not monic")
            acc = Polynomial.zero(self.ring, self.field)
            for q, orig in zip(rep, self.originals):
                acc = acc + q * orig
            if acc != g:
                raise AssertionError("representation identity fails")
        for i, gi in enumerate(self.generators):
            for e, _ in gi.terms.items():
                if e != gi.leading_monomial() and any(
                    monomial_divides(l, e) for l in leads
                ):
                    raise AssertionError("basis not fully inter-reduced")
            for j in range(i + 1, len(self.generators)):
                s = _spoly(gi, self.generators[j])
                _, rem = divide_tracking(s, self.generators)
                if not rem.is_zero():
                    raise AssertionError("S-pair does not reduce to zero")

    def lead_monomials(self):
        return tuple(g.leading_monomial() for g in self.generators)

    def _nf_monomial(self, expo):
        nf = self._nf_cache.get(expo)
        if nf is None:
            mono = Polynomial.monomial(self.ring, self.field, expo)
            _, nf = divide_tracking(mono, self.generators)
            self._nf_cache[expo] = nf
        return nf

    def normal_form(self, poly):
        """Remainder modulo the basis; field-linear, computed termwise."""
        out = Polynomial.zero(self.ring, self.field)
        for expo, coeff in poly.sorted_terms():
            out = out + self._nf_monomial(expo).scale(coeff)
        return out

    def reduce_with_quotients(self, poly):
        return divide_tracking(poly, self.generators)

    def is_member(self, poly):
        return self.normal_form(poly).is_zero()

    def quotient_degree_basis(self, d):
        """All normal-form monomials of degree d, checked against the
        inclusion-exclusion Hilbert count of the lead-term ideal."""
        if d < 0:
            return QuotientDegreeBasis(d, ())
        cached = self._qbasis_cache.get(d)
        if cached is not None:
            return cached
        leads = self.lead_monomials()
        monos = [
            m
            for m in monomials_of_degree(self.ring.nvars, d)
            if not any(monomial_divides(l, m) for l in leads)
        ]
        expected = hilbert_dim_from_leads(leads, self.ring.nvars, d)
        if len(monos) != expected:
            raise AssertionError(
                f"quotient basis in degree {d} has {len(monos)} monomials, "
                f"Hilbert count expects {expected}"
            )
        basis = QuotientDegreeBasis(d, monos)
        self._qbasis_cache[d] = basis
        return basis

    def dimension(self):
        return lead_ideal_dimension(self.lead_monomials(), self.ring.nvars)

    def __repr__(self):
        gens = ", ".join(str(g) for g in self.generators)
        return f"GroebnerBasis({gens})"


def _spoly(f, g):
    lf, lg = f.leading_monomial(), g.leading_monomial()
    lcm = monomial_lcm(lf, lg)
    return f.term_mul(monomial_div(lcm, lf)) - g.term_mul(monomial_div(lcm, lg))


def _spoly_rep(f, rep_f, g, rep_g):
    lf, lg = f.leading_monomial(), g.leading_monomial()
    lcm = monomial_lcm(lf, lg)
    uf, ug = monomial_div(lcm, lf), monomial_div(lcm, lg)
    s = f.term_mul(uf) - g.term_mul(ug)
    rep = [a.term_mul(uf) - b.term_mul(ug) for a, b in zip(rep_f, rep_g)]
    return s, rep


def buchberger(gens):
    """Reduced Gröbner basis in grevlex with the normal selection strategy.

    Pairs are processed by (lcm total degree, pair index); output is
    deterministic for a fixed input order.
    """
    gens = list(gens)
    if not gens:
        raise ValueError("empty generating set")
    ring, field = gens[0].ring, gens[0].field
    for g in gens:
        if g.ring != ring or g.field != field:
            raise InhomogeneousInputError("mixed contexts in generating set")
    _require_homogeneous(gens)

    def unit_vector(i, scale=1):
        return [
            Polynomial.constant(ring, field, scale) if j == i else Polynomial.zero(ring, field)
            for j in range(len(gens))
        ]

    basis = []  # (monic poly, representation over gens)
    pairs = []

    def add_element(poly, rep):
        inv = field.inv(poly.leading_coefficient())
        poly = poly.scale(inv)
        rep = [r.scale(inv) for r in rep]
        k = len(basis)
        basis.append((poly, rep))
        for i in range(k):
            pairs.append((i, k))

    for i, g in enumerate(gens):
        if g.is_zero():
            continue
        add_element(g, unit_vector(i))

    while pairs:
        pairs.sort(
            key=lambda ij: (
                sum(monomial_lcm(basis[ij[0]][0].leading_monomial(),
                                 basis[ij[1]][0].leading_monomial())),
                ij,
            )
        )
        i, j = pairs.pop(0)
        fi, fj = basis[i][0], basis[j][0]
        li, lj = fi.leading_monomial(), fj.leading_monomial()
        if monomial_lcm(li, lj) == monomial_mul(li, lj):
            continue  # coprime lead terms: S-pair reduces to zero
        s, rep_s = _spoly_rep(fi, basis[i][1], fj, basis[j][1])
        quots, rem = divide_tracking(s, [b[0] for b in basis])
        if rem.is_zero():
            continue
        rep = [
            acc - sum((q * basis[k][1][idx] for k, q in enumerate(quots)),
                      Polynomial.zero(ring, field))
            for idx, acc in enumerate(rep_s)
        ]
        add_element(rem, rep)

    # minimalize: drop elements whose lead monomial is divisible by another's
    basis.sort(key=lambda br: grevlex_key(br[0].leading_monomial()))
    kept = []
    for poly, rep in basis:
        if not any(
            monomial_divides(other.leading_monomial(), poly.leading_monomial())
            for other, _ in kept
        ):
            kept.append((poly, rep))

    # inter-reduce tails against the rest, updating representations
    reduced = []
    for idx, (poly, rep) in enumerate(kept):
        others = [kept[k][0] for k in range(len(kept)) if k != idx]
        other_reps = [kept[k][1] for k in range(len(kept)) if k != idx]
        quots, rem = divide_tracking(poly, others)
        new_rep = list(rep)
        for q, orep in zip(quots, other_reps):
            new_rep = [a - q * b for a, b in zip(new_rep, orep)]
        inv = field.inv(rem.leading_coefficient())
        reduced.append((rem.scale(inv), [r.scale(inv) for r in new_rep]))

    reduced.sort(key=lambda br: grevlex_key(br[0].leading_monomial()))
    return GroebnerBasis(
        ring,
        field,
        [poly for poly, _ in reduced],
        [rep for _, rep in reduced],
        gens,
        [g.total_degree() for g in gens],
    )


def normal_form(poly, gb):
    return gb.normal_form(poly)


def ideal_member(poly, gb):
    return gb.is_member(poly)


def lift_through(g, f, gb=None):
    """Coefficients (q_1, ..., q_n) with g == sum(q_i * f_i), deterministic.

    Obtained by quotient-tracked division against the Gröbner basis of (f)
    and re-expansion through the basis representations. Raises NotInIdealError
    when g is outside (f).
    """
    _require_homogeneous([g] + list(f))
    if gb is None:
        gb = buchberger(f)
    quots, rem = gb.reduce_with_quotients(g)
    if not rem.is_zero():
        raise NotInIdealError(f"{g} is not in the ideal; normal form {rem}")
    ring, field = g.ring, g.field
    coeffs = [Polynomial.zero(ring, field) for _ in f]
    for q, rep in zip(quots, gb.representations):
        if q.is_zero():
            continue
        for i, r in enumerate(rep):
            coeffs[i] = coeffs[i] + q * r
    acc = Polynomial.zero(ring, field)
    for c, fi in zip(coeffs, f):
        acc = acc + c * fi
    if acc != g:
        raise AssertionError("lift identity failed after re-expansion")
    for c, fi in zip(coeffs, f):
        if not c.is_zero():
            if not c.is_homogeneous() or c.total_degree() != g.total_degree() - fi.total_degree():
                raise AssertionError("lift coefficient has wrong degree")
    return coeffs


def quotient_degree_basis(gb, d):
    return gb.quotient_degree_basis(d)


def is_regular_sequence(f):
    """Codimension test: for homogeneous f in a polynomial ring, regularity
    is equivalent to dim S/(f) == nvars - len(f), read off the lead-term ideal."""
    f = list(f)
    if not f:
        return True
    _require_homogeneous(f)
    nvars = f[0].ring.nvars
    if any(g.is_zero() or g.total_degree() == 0 for g in f):
        return False
    if len(f) > nvars:
        return False
    gb = buchberger(f)
    return gb.dimension() == nvars - len(f)
