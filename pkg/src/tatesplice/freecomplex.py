"""Graded free modules, polynomial matrices, and chain complexes over S or S/I.

Conventions fixed here and relied on everywhere else:
  * twists are Macaulay2-style: the term S(a) is recorded as the integer a,
    so the Koszul complex on three quadrics has twists (0, -2, -4, -6) and a
    generator of S(a) lives in internal degree -a;
  * a nonzero entry in row r, column c is homogeneous of degree
    target.twists[r] - source.twists[c];
  * the dual places the transpose of d_i at position 1-i with sign (-1)^i;
  * shifting by k reindexes term_i to term_{i-k} and scales differentials
    by (-1)^k;
  * the cone of a degree-0 chain map phi: C -> D has term_i = C_i (+) D_{i+1}
    and block differential ((d_C, 0), ((-1)^i phi_i, d_D)).
"""

from __future__ import annotations

from math import comb

import numpy as np

from .arith import Polynomial
from .errors import (
    DegreeMismatchError,
    NotAComplexError,
    NotChainMapError,
    WindowEdgeError,
)
from .groebner import monomials_of_degree
from .linalg import FieldMatrix


class BaseRing:
    """Ring tag: polynomial ring S over F_p, or the quotient R = S/I."""

    __slots__ = ("ctx", "field", "modulus")

    def __init__(self, ctx, field, modulus=None):
        self.ctx = ctx
        self.field = field
        self.modulus = modulus  # GroebnerBasis of I, or None for S itself

    @property
    def is_quotient(self):
        return self.modulus is not None

    def reduce(self, poly):
        if self.modulus is None:
            return poly
        return self.modulus.normal_form(poly)

    def contains(self, poly):
        """Membership of poly in the defining ideal (always False over S)."""
        if self.modulus is None:
            return poly.is_zero()
        return self.modulus.is_member(poly)

    def degree_basis(self, d):
        """Monomial basis of the degree-d piece, descending grevlex."""
        if d < 0:
            return ()
        if self.modulus is None:
            return monomials_of_degree(self.ctx.nvars, d)
        return self.modulus.quotient_degree_basis(d).monomials

    def dim_degree(self, d):
        if d < 0:
            return 0
        if self.modulus is None:
            return comb(d + self.ctx.nvars - 1, self.ctx.nvars - 1)
        return len(self.modulus.quotient_degree_basis(d))

    def zero(self):
        return Polynomial.zero(self.ctx, self.field)

    def one(self):
        return Polynomial.constant(self.ctx, self.field, 1)

    def __eq__(self, other):
        if not isinstance(other, BaseRing):
            return NotImplemented
        if self.ctx != other.ctx or self.field != other.field:
            return False
        if (self.modulus is None) != (other.modulus is None):
            return False
        if self.modulus is None:
            return True
        return self.modulus.generators == other.modulus.generators

    def __hash__(self):
        gens = None if self.modulus is None else self.modulus.generators
        return hash((self.ctx, self.field, gens))

    def __repr__(self):
        if self.modulus is None:
            return f"S = F_{self.field.p}[{','.join(self.ctx.names)}]"
        gens = ", ".join(str(g) for g in self.modulus.generators)
        return f"R = F_{self.field.p}[{','.join(self.ctx.names)}]/({gens})"


class GradedFreeModule:
    """Free module with one twist per generator."""

    __slots__ = ("ring", "twists")

    def __init__(self, ring, twists):
        self.ring = ring
        self.twists = tuple(int(t) for t in twists)

    @property
    def rank(self):
        return len(self.twists)

    def dual(self):
        return GradedFreeModule(self.ring, tuple(-t for t in self.twists))

    def twist(self, t):
        return GradedFreeModule(self.ring, tuple(a + t for a in self.twists))

    def degree_dim(self, d):
        return sum(self.ring.dim_degree(d + a) for a in self.twists)

    def degree_labels(self, d):
        """Basis of the degree-d piece: (generator index, monomial) pairs."""
        labels = []
        for k, a in enumerate(self.twists):
            for mono in self.ring.degree_basis(d + a):
                labels.append((k, mono))
        return labels

    def __eq__(self, other):
        return (
            isinstance(other, GradedFreeModule)
            and self.ring == other.ring
            and self.twists == other.twists
        )

    def __hash__(self):
        return hash((self.ring, self.twists))

    def __repr__(self):
        return f"Free(rank {self.rank}, twists {self.twists})"


def direct_sum(modules):
    modules = list(modules)
    if not modules:
        raise ValueError("empty direct sum needs an explicit ring")
    ring = modules[0].ring
    twists = []
    for m in modules:
        if m.ring != ring:
            raise ValueError("mixed rings in direct sum")
        twists.extend(m.twists)
    return GradedFreeModule(ring, twists)


class DegreeLayout:
    """Coordinates of a module's degree-d piece, with offsets per generator."""

    __slots__ = ("module", "degree", "labels", "index", "offsets")

    def __init__(self, module, d):
        self.module = module
        self.degree = d
        self.labels = module.degree_labels(d)
        self.index = {lab: i for i, lab in enumerate(self.labels)}
        offsets = []
        pos = 0
        for a in module.twists:
            offsets.append(pos)
            pos += module.ring.dim_degree(d + a)
        self.offsets = offsets

    @property
    def dim(self):
        return len(self.labels)

    def coordinates(self, polys):
        """Coordinate vector of an element given as one polynomial per generator."""
        ring = self.module.ring
        vec = np.zeros(self.dim, dtype=np.int64)
        for k, poly in enumerate(polys):
            poly = ring.reduce(poly)
            for mono, coeff in poly.terms.items():
                idx = self.index.get((k, mono))
                if idx is None:
                    raise ValueError(
                        f"term {mono} of generator {k} is not in degree {self.degree}"
                    )
                vec[idx] = coeff
        return vec

    def element(self, vec):
        """Inverse of coordinates: a list of polynomials, one per generator."""
        ring = self.module.ring
        polys = [dict() for _ in range(self.module.rank)]
        for idx, value in enumerate(vec):
            v = int(value) % ring.field.p
            if v:
                k, mono = self.labels[idx]
                polys[k][mono] = v
        return [Polynomial(ring.ctx, ring.field, t) for t in polys]


class PolyMatrix:
    """Degree-compatible polynomial matrix between graded free modules.

    Over a quotient ring every entry is stored in normal form.
    """

    __slots__ = ("source", "target", "entries")

    def __init__(self, source, target, entries, reduce=True):
        if source.ring != target.ring:
            raise ValueError("source and target over different rings")
        self.source = source
        self.target = target
        ring = source.ring
        rows = []
        if len(entries) != target.rank:
            raise ValueError("row count does not match target rank")
        for r, row in enumerate(entries):
            if len(row) != source.rank:
                raise ValueError("column count does not match source rank")
            new_row = []
            for c, e in enumerate(row):
                if reduce:
                    e = ring.reduce(e)
                if not e.is_zero():
                    want = target.twists[r] - source.twists[c]
                    if not e.is_homogeneous() or e.total_degree() != want:
                        raise DegreeMismatchError(
                            f"entry ({r},{c}) = {e} must be homogeneous of degree {want}"
                        )
                new_row.append(e)
            rows.append(tuple(new_row))
        self.entries = tuple(rows)

    # --- constructors ---------------------------------------------------
    @classmethod
    def zero(cls, source, target):
        z = source.ring.zero()
        return cls(
            source,
            target,
            [[z] * source.rank for _ in range(target.rank)],
            reduce=False,
        )

    @classmethod
    def identity(cls, module):
        z = module.ring.zero()
        one = module.ring.one()
        return cls(
            module,
            module,
            [
                [one if r == c else z for c in range(module.rank)]
                for r in range(module.rank)
            ],
        )

    @classmethod
    def scalar(cls, module, poly):
        """poly * identity, landing in the module twisted by deg(poly)."""
        d = poly.total_degree()
        if d is None:
            return cls.zero(module, module)
        z = module.ring.zero()
        return cls(
            module,
            module.twist(d),
            [
                [poly if r == c else z for c in range(module.rank)]
                for r in range(module.rank)
            ],
        )

    # --- structure ------------------------------------------------------
    def is_zero(self):
        return all(e.is_zero() for row in self.entries for e in row)

    def entry(self, r, c):
        return self.entries[r][c]

    def compose(self, other):
        """self o other (apply other first)."""
        if other.target != self.source:
            raise ValueError("composition shape/twist mismatch")
        ring = self.source.ring
        rows = []
        for r in range(self.target.rank):
            row = []
            for c in range(other.source.rank):
                acc = ring.zero()
                for k in range(self.source.rank):
                    a = self.entries[r][k]
                    b = other.entries[k][c]
                    if not a.is_zero() and not b.is_zero():
                        acc = acc + a * b
                row.append(acc)
            rows.append(row)
        return PolyMatrix(other.source, self.target, rows)

    def transpose(self):
        return PolyMatrix(
            self.target.dual(),
            self.source.dual(),
            [
                [self.entries[c][r] for c in range(self.target.rank)]
                for r in range(self.source.rank)
            ],
            reduce=False,
        )

    def twisted(self, t):
        """Same entries between modules twisted by t."""
        return PolyMatrix(
            self.source.twist(t), self.target.twist(t), self.entries, reduce=False
        )

    def __add__(self, other):
        if self.source != other.source or self.target != other.target:
            raise ValueError("sum shape/twist mismatch")
        return PolyMatrix(
            self.source,
            self.target,
            [
                [a + b for a, b in zip(r1, r2)]
                for r1, r2 in zip(self.entries, other.entries)
            ],
        )

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, scalar):
        return PolyMatrix(
            self.source,
            self.target,
            [[e.scale(scalar) for e in row] for row in self.entries],
            reduce=False,
        )

    def __eq__(self, other):
        return (
            isinstance(other, PolyMatrix)
            and self.source == other.source
            and self.target == other.target
            and self.entries == other.entries
        )

    def __repr__(self):
        body = "; ".join(
            ", ".join(str(e) for e in row) for row in self.entries
        )
        return f"PolyMatrix[{body}]"


def block_matrix(col_modules, row_modules, blocks):
    """Assemble a PolyMatrix from blocks[(i, j)]: col_modules[j] -> row_modules[i]."""
    source = direct_sum(col_modules)
    target = direct_sum(row_modules)
    ring = source.ring
    z = ring.zero()
    entries = [[z] * source.rank for _ in range(target.rank)]
    row_off = []
    pos = 0
    for m in row_modules:
        row_off.append(pos)
        pos += m.rank
    col_off = []
    pos = 0
    for m in col_modules:
        col_off.append(pos)
        pos += m.rank
    for (i, j), blk in blocks.items():
        if blk is None:
            continue
        if blk.source != col_modules[j] or blk.target != row_modules[i]:
            raise ValueError(f"block ({i},{j}) has wrong shape or twists")
        for r in range(blk.target.rank):
            for c in range(blk.source.rank):
                entries[row_off[i] + r][col_off[j] + c] = blk.entries[r][c]
    return PolyMatrix(source, target, entries)


class ChainComplex:
    """Window of a complex of graded free modules; d_i maps term_i to term_{i-1}."""

    __slots__ = ("ring", "lo", "hi", "terms", "diffs")

    def __init__(self, ring, terms, diffs, validate=True):
        if not terms:
            raise ValueError("complex needs at least one term")
        self.ring = ring
        self.lo = min(terms)
        self.hi = max(terms)
        self.terms = dict(terms)
        for i in range(self.lo, self.hi + 1):
            if i not in self.terms:
                self.terms[i] = GradedFreeModule(ring, ())
        self.diffs = dict(diffs)
        if validate:
            self._validate()

    def _validate(self):
        for i, d in self.diffs.items():
            if not (self.lo < i <= self.hi):
                raise ValueError(f"differential at {i} outside window")
            if d.source != self.term(i) or d.target != self.term(i - 1):
                raise DegreeMismatchError(
                    f"differential at {i} does not match its terms"
                )
        for i in range(self.lo + 2, self.hi + 1):
            prod = self.diff(i - 1).compose(self.diff(i))
            if not prod.is_zero():
                for r, row in enumerate(prod.entries):
                    for c, e in enumerate(row):
                        if not e.is_zero():
                            raise NotAComplexError(i, r, c, str(e))

    def term(self, i):
        return self.terms.get(i, GradedFreeModule(self.ring, ()))

    def diff(self, i):
        d = self.diffs.get(i)
        if d is None:
            return PolyMatrix.zero(self.term(i), self.term(i - 1))
        return d

    @property
    def window(self):
        return (self.lo, self.hi)

    def dual(self):
        """Contravariant dual: term at -i is term_i dualized; the transpose of
        d_i sits at position 1-i with sign (-1)^i."""
        terms = {-i: self.term(i).dual() for i in range(self.lo, self.hi + 1)}
        diffs = {}
        for i, d in self.diffs.items():
            sign = -1 if i % 2 else 1
            diffs[1 - i] = d.transpose().scale(sign)
        return ChainComplex(self.ring, terms, diffs, validate=False)

    def shift(self, k):
        """term_i of the output is term_{i-k}; differentials pick up (-1)^k."""
        sign = -1 if k % 2 else 1
        terms = {i + k: m for i, m in self.terms.items()}
        diffs = {i + k: d.scale(sign) for i, d in self.diffs.items()}
        return ChainComplex(self.ring, terms, diffs, validate=False)

    def twist(self, t):
        terms = {i: m.twist(t) for i, m in self.terms.items()}
        diffs = {i: d.twisted(t) for i, d in self.diffs.items()}
        return ChainComplex(self.ring, terms, diffs, validate=False)

    def subwindow(self, lo, hi):
        terms = {i: self.term(i) for i in range(lo, hi + 1)}
        diffs = {i: self.diffs[i] for i in self.diffs if lo < i <= hi}
        return ChainComplex(self.ring, terms, diffs, validate=False)

    def ranks(self):
        return {i: self.term(i).rank for i in range(self.lo, self.hi + 1)}

    def __repr__(self):
        ranks = " <- ".join(
            str(self.term(i).rank) for i in range(self.lo, self.hi + 1)
        )
        return f"ChainComplex[{self.lo},{self.hi}]({ranks})"


def make_complex(ring, terms, diffs):
    """Validated construction: shapes, twists, and d^2 = 0 over the base ring."""
    return ChainComplex(ring, terms, diffs, validate=True)


def graded_piece(matrix, d):
    """Exact F_p matrix of the degree-d component of a PolyMatrix."""
    ring = matrix.source.ring
    src = DegreeLayout(matrix.source, d)
    tgt = DegreeLayout(matrix.target, d)
    triplets = []
    for c, (k, mono) in enumerate(src.labels):
        for r_gen in range(matrix.target.rank):
            e = matrix.entries[r_gen][k]
            if e.is_zero():
                continue
            prod = ring.reduce(e.term_mul(mono))
            for pm, coeff in prod.terms.items():
                triplets.append((tgt.index[(r_gen, pm)], c, coeff))
    return FieldMatrix.from_triplets(tgt.dim, src.dim, triplets, ring.field.p)


def _homology_dim(complex_, i, d, lo_zero=False, hi_zero=False):
    """dim H_i in internal degree d; missing boundary differentials are taken
    to be zero maps only when the corresponding *_zero flag says the complex
    genuinely ends there."""
    if i < complex_.lo or i > complex_.hi:
        raise WindowEdgeError(f"position {i} outside window {complex_.window}")
    dim_here = complex_.term(i).degree_dim(d)
    if i > complex_.lo:
        rank_out = graded_piece(complex_.diff(i), d).rank()
    elif lo_zero:
        rank_out = 0
    else:
        raise WindowEdgeError(f"no differential out of position {i}")
    if i < complex_.hi:
        rank_in = graded_piece(complex_.diff(i + 1), d).rank()
    elif hi_zero:
        rank_in = 0
    else:
        raise WindowEdgeError(f"no differential into position {i}")
    return dim_here - rank_out - rank_in


def homology_dims(complex_, i, degrees):
    """dim H_i per internal degree; requires i interior to the window."""
    if not (complex_.lo < i < complex_.hi):
        raise WindowEdgeError(
            f"position {i} is not interior to window {complex_.window}"
        )
    return [_homology_dim(complex_, i, d) for d in degrees]


def fanout(fn, items, workers=None):
    """Apply a pure function over items, optionally on a thread pool;
    results are returned in input order regardless of completion order.

    Complexes and bases are immutable after construction (caches only ever
    fill in identical values), so per-degree rank sweeps are safe to run
    concurrently. Worker count defaults to the TATESPLICE_WORKERS
    environment variable, or 1 (serial)."""
    import os

    if workers is None:
        workers = int(os.environ.get("TATESPLICE_WORKERS", "1"))
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    from concurrent.futures import ThreadPoolExecutor

    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


class ChainMapReport:
    """Outcome of a chain-map check, with a witness when it fails."""

    __slots__ = ("ok", "position", "row", "col", "witness")

    def __init__(self, ok, position=None, row=None, col=None, witness=None):
        self.ok = ok
        self.position = position
        self.row = row
        self.col = col
        self.witness = witness

    def __bool__(self):
        return self.ok


def is_chain_map(phi, C, D):
    """Check d_D o phi_i == phi_{i-1} o d_C on every aligned square."""
    for i, f in phi.items():
        if f.source != C.term(i) or f.target != D.term(i):
            raise ValueError(f"component {i} has wrong source/target")
    positions = sorted(phi)
    for i in positions:
        if i - 1 not in phi and C.term(i - 1).rank and D.term(i - 1).rank:
            if C.lo < i and D.lo < i:
                raise ValueError(f"component {i-1} missing below component {i}")
        lhs = D.diff(i).compose(phi[i]) if D.lo < i <= D.hi else None
        rhs = (
            phi[i - 1].compose(C.diff(i))
            if (i - 1 in phi and C.lo < i <= C.hi)
            else None
        )
        if lhs is None and rhs is None:
            continue
        if lhs is None:
            diff = rhs
        elif rhs is None:
            diff = lhs
        else:
            diff = lhs - rhs
        if not diff.is_zero():
            for r, row in enumerate(diff.entries):
                for c, e in enumerate(row):
                    if not e.is_zero():
                        return ChainMapReport(False, i, r, c, str(e))
    return ChainMapReport(True)


def mapping_cone(phi, C, D):
    """Cone of a verified degree-0 chain map phi: C -> D.

    cone_i = C_i (+) D_{i+1}; the phi block carries sign (-1)^i. Returns the
    complex together with a layout dict {i: rank of the C-part at i}.
    """
    report = is_chain_map(phi, C, D)
    if not report:
        raise NotChainMapError(report.position, report.row, report.col, report.witness)
    ring = C.ring
    lo = min(C.lo, D.lo - 1)
    hi = max(C.hi, D.hi - 1)
    terms = {}
    layout = {}
    for i in range(lo, hi + 1):
        upper = D.term(i + 1)
        lower = C.term(i)
        terms[i] = GradedFreeModule(ring, lower.twists + upper.twists)
        layout[i] = lower.rank
    diffs = {}
    for i in range(lo + 1, hi + 1):
        sign = -1 if i % 2 else 1
        dC = C.diff(i) if C.lo < i <= C.hi else PolyMatrix.zero(C.term(i), C.term(i - 1))
        dD = (
            D.diff(i + 1)
            if D.lo < i + 1 <= D.hi
            else PolyMatrix.zero(D.term(i + 1), D.term(i))
        )
        f = phi.get(i)
        if f is None:
            f = PolyMatrix.zero(C.term(i), D.term(i))
        blocks = {(0, 0): dC, (1, 0): f.scale(sign), (1, 1): dD}
        diffs[i] = block_matrix(
            [C.term(i), D.term(i + 1)], [C.term(i - 1), D.term(i)], blocks
        )
        if diffs[i].source.rank == 0 and diffs[i].target.rank == 0:
            del diffs[i]
    cone = ChainComplex(ring, terms, diffs, validate=True)
    return cone, layout


def solve_factorization(through, rhs):
    """Find X with through o X == rhs by exact degreewise linear algebra.

    through: A -> B and rhs: C -> B; the solution X: C -> A is produced
    column by column (one graded solve per generator of C). Returns None
    when some column is inconsistent.
    """
    if through.target != rhs.target:
        raise ValueError("targets must agree")
    ring = through.source.ring
    columns = []
    for c in range(rhs.source.rank):
        gen_degree = -rhs.source.twists[c]
        src_layout = DegreeLayout(through.source, gen_degree)
        rhs_elem = [rhs.entries[r][c] for r in range(rhs.target.rank)]
        tgt_layout = DegreeLayout(rhs.target, gen_degree)
        b = tgt_layout.coordinates(rhs_elem)
        A = graded_piece(through, gen_degree)
        x = A.solve(b)
        if x is None:
            return None
        columns.append(src_layout.element(x))
    entries = [
        [columns[c][r] for c in range(rhs.source.rank)]
        for r in range(through.source.rank)
    ]
    return PolyMatrix(rhs.source, through.source, entries)


# --- serialization --------------------------------------------------------


def ring_to_doc(ring):
    doc = {
        "field_char": ring.field.p,
        "variables": list(ring.ctx.names),
    }
    if ring.modulus is not None:
        doc["modulus"] = [str(g) for g in ring.modulus.generators]
    return doc


def ring_from_doc(doc):
    from .arith import PrimeField, VariableContext, parse_polynomial
    from .groebner import buchberger

    field = PrimeField(doc["field_char"])
    ctx = VariableContext(doc["variables"])
    modulus = None
    if "modulus" in doc:
        gens = [parse_polynomial(s, ctx, field) for s in doc["modulus"]]
        modulus = buchberger(gens)
    return BaseRing(ctx, field, modulus)


def complex_to_doc(complex_):
    return {
        "ring": ring_to_doc(complex_.ring),
        "window": [complex_.lo, complex_.hi],
        "terms": {
            str(i): list(complex_.term(i).twists)
            for i in range(complex_.lo, complex_.hi + 1)
        },
        "diffs": {
            str(i): [[str(e) for e in row] for row in d.entries]
            for i, d in sorted(complex_.diffs.items())
        },
    }


def complex_from_doc(doc, validate=True):
    from .arith import parse_polynomial

    ring = ring_from_doc(doc["ring"])
    lo, hi = doc["window"]
    terms = {
        int(i): GradedFreeModule(ring, twists) for i, twists in doc["terms"].items()
    }
    diffs = {}
    for i_str, rows in doc["diffs"].items():
        i = int(i_str)
        entries = [
            [parse_polynomial(s, ring.ctx, ring.field) for s in row] for row in rows
        ]
        diffs[i] = PolyMatrix(terms[i], terms[i - 1], entries)
    return ChainComplex(ring, terms, diffs, validate=validate)
