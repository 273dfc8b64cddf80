"""Problem-instance ingestion, end-to-end pipelines, and brute-force oracles.

Instances are strict JSON (unknown fields rejected). Outputs are serialized
with sorted keys so repeated builds of the same instance are byte-identical.
The homology oracle here shares no matrix code with the graded_piece path:
it enumerates bases, assembles dense integer grids, and row-reduces them
with plain Python loops.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .arith import PrimeField, VariableContext, monomial_divides, parse_polynomial
from .errors import (
    ContainmentError,
    NotInIdealError,
    NotRegularError,
    WindowEdgeError,
)
from .freecomplex import BaseRing, complex_from_doc, complex_to_doc
from .groebner import buchberger, is_regular_sequence
from .koszul import LiftMatrix
from .shamash import es_resolution, is_minimal
from .tate import (
    is_two_periodic,
    mcm_generator_count,
    mcm_presentation,
    minimize,
    normalize_matrix_factorization,
    tate_splice,
    TateResolution,
)

FORMAT = "tatesplice/1"

_INSTANCE_FIELDS = {
    "field_char",
    "variables",
    "f",
    "g",
    "A",
    "window",
    "max_internal_degree",
}
_REQUIRED_FIELDS = _INSTANCE_FIELDS - {"A"}


@dataclass
class ProblemInstance:
    """One build request: base field, variables, the two regular sequences,
    an optional explicit lift matrix, the window, and the degree bound."""

    field_char: int
    variables: list
    f: list
    g: list
    window: tuple
    max_internal_degree: int
    A: list = None

    @classmethod
    def from_doc(cls, doc):
        keys = set(doc)
        unknown = keys - _INSTANCE_FIELDS
        if unknown:
            raise ValueError(f"unknown instance fields: {sorted(unknown)}")
        missing = _REQUIRED_FIELDS - keys
        if missing:
            raise ValueError(f"missing instance fields: {sorted(missing)}")
        return cls(
            field_char=doc["field_char"],
            variables=list(doc["variables"]),
            f=list(doc["f"]),
            g=list(doc["g"]),
            A=doc.get("A"),
            window=tuple(doc["window"]),
            max_internal_degree=doc["max_internal_degree"],
        )

    def to_doc(self):
        doc = {
            "field_char": self.field_char,
            "variables": list(self.variables),
            "f": list(self.f),
            "g": list(self.g),
            "window": list(self.window),
            "max_internal_degree": self.max_internal_degree,
        }
        if self.A is not None:
            doc["A"] = [list(row) for row in self.A]
        return doc


class InstanceData:
    """Parsed and validated instance: rings, sequences, and the lift matrix."""

    def __init__(self, instance):
        self.instance = instance
        self.field = PrimeField(instance.field_char)
        self.ctx = VariableContext(instance.variables)
        self.f = [parse_polynomial(s, self.ctx, self.field) for s in instance.f]
        self.g = [parse_polynomial(s, self.ctx, self.field) for s in instance.g]
        if not is_regular_sequence(self.f):
            raise NotRegularError("f is not a regular sequence")
        if not is_regular_sequence(self.g):
            raise NotRegularError("g is not a regular sequence")
        self.ring_S = BaseRing(self.ctx, self.field)
        self.gb_J = buchberger(self.f)
        self.gb_I = buchberger(self.g)
        self.ring_R = BaseRing(self.ctx, self.field, self.gb_I)
        self.ring_M = BaseRing(self.ctx, self.field, self.gb_J)
        if instance.A is not None:
            A = [
                [parse_polynomial(s, self.ctx, self.field) for s in row]
                for row in instance.A
            ]
            self.lift = LiftMatrix(A, self.f, self.g)
        else:
            try:
                self.lift = LiftMatrix.from_lift(self.f, self.g, self.gb_J)
            except NotInIdealError as exc:
                raise ContainmentError(f"NotInIdeal: {exc}") from exc


def run_build(instance):
    """Full pipeline: parse, validate, resolve, splice, minimize, extract.

    Returns the output document (deterministic content); serialize with
    `dump_output` for byte-identical files.
    """
    data = InstanceData(instance)
    lo, hi = instance.window
    m = len(data.f) - len(data.g)
    length = max(hi, m - 1 - lo) + 1
    resolution = es_resolution(
        data.f, data.g, data.ring_R, length, A=data.lift, check=False
    )
    tate = tate_splice(
        resolution,
        window=(lo, hi),
        dmax=instance.max_internal_degree,
    )
    minimized, provenance = minimize(
        tate.complex, splice=tate.splice, labels=tate.provenance
    )
    normalized = False
    if len(data.g) == 1:
        # exact g*identity products need the terms to pair up across the
        # window; possible iff the whole window is already periodic
        try:
            minimized = normalize_matrix_factorization(
                minimized, data.g[0], data.ring_S
            )
            normalized = True
        except ValueError:
            pass
    final = TateResolution(
        minimized, tate.splice, provenance, tate.certificates, tate.meta
    )
    final.meta["mf_normalized"] = normalized
    final.certificates["minimal_after_reduction"] = {"passed": is_minimal(minimized)}
    if normalized:
        final.certificates["two_periodic"] = {"passed": is_two_periodic(minimized)}
    pres = mcm_presentation(final)

    doc = {
        "format": FORMAT,
        "instance": instance.to_doc(),
        "tate": complex_to_doc(final.complex),
        "splice": final.splice,
        "meta": final.meta,
        "betti": {
            str(i): {str(t): n for t, n in sorted(counts.items())}
            for i, counts in final.betti().items()
        },
        "provenance": {str(i): v for i, v in final.provenance.items()},
        "certificates": final.certificates,
        "mcm": {
            "generator_count": pres.generator_count,
            "twists": list(pres.twists),
            "matrix": [[str(e) for e in row] for row in pres.matrix.entries],
            "minimal": pres.minimal,
            "formula_count": mcm_generator_count(len(data.f), len(data.g)),
        },
    }
    return doc


def dump_output(doc):
    return json.dumps(doc, sort_keys=True, indent=1) + "\n"


def run_verify(doc, dmax=None):
    """Recompute d^2 = 0, interior acyclicity, and minimality from a persisted
    document; returns (ok, rows) with one (check, passed, detail) per row."""
    rows = []
    if doc.get("format") != FORMAT:
        return False, [("format", False, f"unknown format {doc.get('format')!r}")]
    complex_ = complex_from_doc(doc["tate"], validate=False)
    if dmax is None:
        dmax = doc["meta"]["dmax"]

    d2_ok, d2_detail = True, "all products vanish"
    for i in range(complex_.lo + 2, complex_.hi + 1):
        prod = complex_.diff(i - 1).compose(complex_.diff(i))
        if not prod.is_zero():
            d2_ok = False
            d2_detail = f"d^2 != 0 at position {i}"
            break
    rows.append(("d_squared_zero", d2_ok, d2_detail))

    from .freecomplex import _homology_dim
    from .tate import _content_degree_range

    acyclic_ok, detail = True, "interior homology vanishes"
    if complex_.hi - complex_.lo < 2:
        acyclic_ok = False
        detail = "WindowEdge: window too narrow to certify interior homology"
    else:
        degrees = _content_degree_range(complex_, complex_.lo, complex_.hi, dmax)
        try:
            for i in range(complex_.lo + 1, complex_.hi):
                for d in degrees:
                    dim = _homology_dim(complex_, i, d)
                    if dim:
                        acyclic_ok = False
                        detail = f"H_{i} nonzero in degree {d} (dim {dim})"
                        raise StopIteration
        except StopIteration:
            pass
        except WindowEdgeError as exc:
            acyclic_ok = False
            detail = f"WindowEdge: {exc}"
    rows.append(("acyclicity", acyclic_ok, detail))

    minimal_ok = is_minimal(complex_)
    rows.append(
        (
            "minimality",
            minimal_ok,
            "no unit entries" if minimal_ok else "unit entry present",
        )
    )

    betti_ok = True
    for i in range(complex_.lo, complex_.hi + 1):
        counts = {}
        for t in complex_.term(i).twists:
            counts[str(t)] = counts.get(str(t), 0) + 1
        if doc["betti"].get(str(i), {}) != counts:
            betti_ok = False
            break
    rows.append(
        (
            "betti_table",
            betti_ok,
            "matches recomputation" if betti_ok else f"mismatch at position {i}",
        )
    )
    return all(passed for _, passed, _ in rows), rows


def report_text(rows):
    width = max(len(name) for name, _, _ in rows)
    lines = []
    for name, passed, detail in rows:
        status = "PASS" if passed else "FAIL"
        lines.append(f"{name.ljust(width)}  {status}  {detail}")
    return "\n".join(lines) + "\n"


def betti_text(betti):
    """Aligned Betti table: rows are generator degrees, columns positions."""
    positions = sorted(int(i) for i in betti)
    degrees = sorted(
        {-int(t) for i in betti for t in betti[i]}
    )
    if not degrees:
        return "(empty)\n"
    header = ["deg\\i"] + [str(i) for i in positions]
    rows = [header]
    for d in degrees:
        row = [str(d)]
        for i in positions:
            n = betti[str(i)].get(str(-d), 0)
            row.append(str(n) if n else ".")
        rows.append(row)
    totals = ["total"] + [
        str(sum(betti[str(i)].values())) for i in positions
    ]
    rows.append(totals)
    widths = [max(len(r[k]) for r in rows) for k in range(len(header))]
    lines = [
        "  ".join(cell.rjust(widths[k]) for k, cell in enumerate(row)) for row in rows
    ]
    return "\n".join(lines) + "\n"


# --- the independent dense oracle -------------------------------------------


def _oracle_monomials(nvars, d):
    """All exponent tuples of total degree d (plain recursive enumeration)."""
    if nvars == 1:
        return [(d,)]
    out = []
    for e in range(d + 1):
        for rest in _oracle_monomials(nvars - 1, d - e):
            out.append((e,) + rest)
    return out


def _oracle_basis(ring, d):
    """Degree-d monomial basis; over a quotient, keep monomials not divisible
    by any lead monomial of the defining Groebner basis."""
    if d < 0:
        return []
    monos = _oracle_monomials(ring.ctx.nvars, d)
    if ring.modulus is None:
        return monos
    leads = ring.modulus.lead_monomials()
    return [m for m in monos if not any(monomial_divides(l, m) for l in leads)]


def _oracle_matrix(matrix, d):
    """Dense integer grid of the degree-d piece, assembled naively."""
    ring = matrix.source.ring
    col_labels = []
    for k, a in enumerate(matrix.source.twists):
        for mono in _oracle_basis(ring, d + a):
            col_labels.append((k, mono))
    row_labels = []
    row_index = {}
    for k, a in enumerate(matrix.target.twists):
        for mono in _oracle_basis(ring, d + a):
            row_index[(k, mono)] = len(row_labels)
            row_labels.append((k, mono))
    grid = [[0] * len(col_labels) for _ in row_labels]
    for c, (k, mono) in enumerate(col_labels):
        for r_gen in range(matrix.target.rank):
            e = matrix.entries[r_gen][k]
            if e.is_zero():
                continue
            prod = ring.reduce(e.term_mul(mono))
            for pm, coeff in prod.terms.items():
                grid[row_index[(r_gen, pm)]][c] += coeff
    return grid, len(row_labels), len(col_labels)


def _oracle_rank(grid, p):
    """Plain Gaussian elimination on lists of lists."""
    grid = [[v % p for v in row] for row in grid]
    if not grid or not grid[0]:
        return 0
    nrows, ncols = len(grid), len(grid[0])
    rank = 0
    for col in range(ncols):
        pivot = None
        for r in range(rank, nrows):
            if grid[r][col] % p:
                pivot = r
                break
        if pivot is None:
            continue
        grid[rank], grid[pivot] = grid[pivot], grid[rank]
        inv = pow(grid[rank][col], -1, p)
        grid[rank] = [(v * inv) % p for v in grid[rank]]
        for r in range(nrows):
            if r != rank and grid[r][col]:
                factor = grid[r][col]
                grid[r] = [
                    (a - factor * b) % p for a, b in zip(grid[r], grid[rank])
                ]
        rank += 1
        if rank == nrows:
            break
    return rank


def oracle_homology(complex_, i, d):
    """dim H_i in internal degree d, by the dense naive route; differentials
    missing from the window are taken to be zero maps."""
    if isinstance(complex_, dict):
        complex_ = complex_from_doc(
            complex_["tate"] if "tate" in complex_ else complex_, validate=False
        )
    p = complex_.ring.field.p
    dim_here = sum(len(_oracle_basis(complex_.ring, d + a)) for a in complex_.term(i).twists)
    rank_out = 0
    if complex_.lo < i <= complex_.hi and complex_.term(i - 1).rank:
        grid, _, _ = _oracle_matrix(complex_.diff(i), d)
        rank_out = _oracle_rank(grid, p)
    rank_in = 0
    if complex_.lo < i + 1 <= complex_.hi and complex_.term(i + 1).rank:
        grid, _, _ = _oracle_matrix(complex_.diff(i + 1), d)
        rank_in = _oracle_rank(grid, p)
    return dim_here - rank_out - rank_in
