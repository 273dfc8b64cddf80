"""Homotopies on S-free resolutions, composed sigma maps, and certificates.

A homotopy for g on (K, d) is a degree +1 graded map tau with
d tau + tau d = g id. For Koszul complexes the closed wedge form is used;
for arbitrary finite resolutions a degreewise linear solver produces one.
Composites tau_{i1} o ... o tau_{is} over increasing indices realize the
comparison maps from the Koszul resolution of the base quotient.
"""

from __future__ import annotations

import numpy as np

from .errors import H0IsoError, LiftIdentityError, NoSolutionError, NotChainMapError
from .freecomplex import (
    ChainComplex,
    DegreeLayout,
    GradedFreeModule,
    PolyMatrix,
    graded_piece,
    is_chain_map,
)
from .koszul import koszul_complex, koszul_homotopy
from .linalg import FieldMatrix


class HomotopySystem:
    """A base resolution K over S plus one verified homotopy per generator."""

    def __init__(self, K, g_list, taus, provenance):
        self.K = K
        self.g_list = tuple(g_list)
        self.taus = [dict(t) for t in taus]
        self.provenance = provenance
        self._verify()

    @classmethod
    def koszul_wedge(cls, lift, ring):
        """Wedge homotopies for every column of a lift matrix A."""
        K = koszul_complex(list(lift.f), ring)
        taus = []
        for j in range(lift.c):
            a = [lift.A[i][j] for i in range(lift.n)]
            taus.append(koszul_homotopy(a, list(lift.f), ring, g=lift.g[j]))
        system = cls(K, lift.g, taus, "koszul-wedge")
        system.lift = lift
        return system

    @classmethod
    def solved(cls, K, g_list):
        taus = [solve_homotopy(K, g) for g in g_list]
        return cls(K, g_list, taus, "solved")

    def _verify(self):
        for g, tau in zip(self.g_list, self.taus):
            _check_homotopy_identity(self.K, g, tau)

    def tau(self, j):
        """Homotopy for g_j (1-based index, matching the paper's subscripts)."""
        return self.taus[j - 1]

    @property
    def c(self):
        return len(self.g_list)


def _check_homotopy_identity(K, g, tau):
    dg = g.total_degree()
    Ktw = K.twist(dg)
    for i in range(K.lo, K.hi + 1):
        if K.term(i).rank == 0:
            continue
        lhs = PolyMatrix.zero(K.term(i), Ktw.term(i))
        if i + 1 <= K.hi and i in tau:
            lhs = lhs + Ktw.diff(i + 1).compose(tau[i])
        elif i < K.hi and K.term(i + 1).rank:
            raise NoSolutionError(f"missing homotopy component at {i}")
        if i > K.lo and i - 1 in tau:
            lhs = lhs + tau[i - 1].compose(K.diff(i))
        want = PolyMatrix.scalar(K.term(i), g)
        if lhs != want:
            raise LiftIdentityError(
                f"homotopy identity d tau + tau d = ({g}) id fails on term {i}"
            )


def solve_homotopy(K, g, verify=True):
    """Find tau with d tau + tau d = g id by exact degreewise linear solves.

    Proceeds up the window; at each homological degree the unknown block is
    solved columnwise through the next differential (pivoted elimination in
    fixed column order). Raises NoSolutionError when inconsistent: g does not
    annihilate H_0, or the window is too short to close the system.
    """
    if not g.is_homogeneous() or g.is_zero():
        raise NoSolutionError("g must be nonzero homogeneous")
    dg = g.total_degree()
    Ktw = K.twist(dg)
    taus = {}
    for i in range(K.lo, K.hi):
        src = K.term(i)
        tgt = Ktw.term(i + 1)
        if src.rank == 0:
            taus[i] = PolyMatrix.zero(src, tgt)
            continue
        rhs = PolyMatrix.scalar(src, g)
        if i > K.lo and taus.get(i - 1) is not None:
            rhs = rhs - taus[i - 1].compose(K.diff(i))
        through = Ktw.diff(i + 1)
        sol = _solve_through(through, rhs)
        if sol is None:
            raise NoSolutionError(
                f"no homotopy for {g} at position {i}: g does not act "
                "null-homotopically or the window is too short"
            )
        taus[i] = sol
    if verify:
        try:
            _check_homotopy_identity(K, g, taus)
        except LiftIdentityError as exc:
            raise NoSolutionError(
                f"homotopy system does not close: {exc} (window too short?)"
            ) from exc
    return taus


def _solve_through(through, rhs):
    """X with through o X == rhs, solved per column; None if inconsistent."""
    columns = []
    for c in range(rhs.source.rank):
        gen_degree = -rhs.source.twists[c]
        A = graded_piece(through, gen_degree)
        tgt_layout = DegreeLayout(rhs.target, gen_degree)
        b = tgt_layout.coordinates([rhs.entries[r][c] for r in range(rhs.target.rank)])
        x = A.solve(b)
        if x is None:
            return None
        src_layout = DegreeLayout(through.source, gen_degree)
        columns.append(src_layout.element(x))
    entries = [
        [columns[c][r] for c in range(rhs.source.rank)]
        for r in range(through.source.rank)
    ]
    return PolyMatrix(rhs.source, through.source, entries)


def sigma_component(system, indices, j):
    """sigma on e_{i1}^...^e_{is} (x) K_j: the composite tau_{i1} o ... o tau_{is},
    rightmost factor applied first; indices are 1-based and strictly increasing."""
    indices = tuple(indices)
    if any(a >= b for a, b in zip(indices, indices[1:])):
        raise ValueError("indices must be strictly increasing")
    K = system.K
    if not indices:
        return PolyMatrix.identity(K.term(j))
    acc = None
    pos = j
    twist_acc = 0
    for idx in reversed(indices):
        tau = system.tau(idx).get(pos)
        if tau is None:
            # composite leaves the stored window: the zero map onto nothing
            src = K.term(j) if acc is None else acc.source
            dg = sum(system.g_list[i - 1].total_degree() for i in indices)
            return PolyMatrix.zero(src, K.term(j + len(indices)).twist(dg))
        step = tau.twisted(twist_acc)
        acc = step if acc is None else step.compose(acc)
        twist_acc += system.g_list[idx - 1].total_degree()
        pos += 1
    return acc


def sigma_maps(system, s):
    """All components sigma_{s,j} indexed by (subset, j), subsets lex ordered."""
    from itertools import combinations

    K = system.K
    out = {}
    for subset in combinations(range(1, system.c + 1), s):
        for j in range(K.lo, K.hi + 1 - s):
            out[(subset, j)] = sigma_component(system, subset, j)
    return out


class SigmaCertificate:
    """Recorded evidence that sigma_c is a chain map over R inducing
    degreewise isomorphisms H_0 -> H_c."""

    def __init__(self, chain_map_ok, iso_table):
        self.chain_map_ok = chain_map_ok
        self.iso_table = dict(iso_table)

    @property
    def passed(self):
        return self.chain_map_ok and all(
            h0 == hc == rk for (h0, hc, rk) in self.iso_table.values()
        )

    def to_doc(self):
        return {
            "chain_map": self.chain_map_ok,
            "h0_hc_iso": {
                str(d): {"dim_h0": h0, "dim_hc": hc, "induced_rank": rk}
                for d, (h0, hc, rk) in sorted(self.iso_table.items())
            },
            "passed": self.passed,
        }


def sigma_c_chain_map(system, ring_R, dmax, raise_on_fail=True):
    """sigma_c = tau_1 o ... o tau_c reduced mod I, with its certificate.

    Returns (components over R, target complex, certificate). The certificate
    recomputes (a) the chain-map property of sigma_c: R (x) K -> R (x) K[-c]
    and (b) per internal degree <= dmax, that the induced map
    H_0(R (x) K) -> H_c(R (x) K) is an isomorphism of F_p spaces.
    """
    K = system.K
    c = system.c
    D = sum(g.total_degree() for g in system.g_list)
    f_top = K.hi

    RK = _base_change(K, ring_R)
    target = RK.shift(-c).twist(D)
    sigma = {}
    for i in range(RK.lo, RK.hi + 1):
        if i + c > f_top:
            sigma[i] = PolyMatrix.zero(RK.term(i), target.term(i))
            continue
        over_S = sigma_component(system, tuple(range(1, c + 1)), i)
        sigma[i] = PolyMatrix(
            RK.term(i), target.term(i), over_S.entries, reduce=True
        )

    report = is_chain_map(sigma, RK, target)
    if not report and raise_on_fail:
        raise NotChainMapError(report.position, report.row, report.col, report.witness)

    iso_table = {}
    for d in range(0, dmax + 1):
        dim0 = RK.term(0).degree_dim(d)
        boundaries0 = graded_piece(RK.diff(1), d)
        h0 = dim0 - boundaries0.rank()
        e = d + D
        dimc = RK.term(c).degree_dim(e)
        rank_out = graded_piece(RK.diff(c), e).rank() if c > RK.lo else 0
        if c < RK.hi:
            bc = graded_piece(RK.diff(c + 1), e)
            rank_in = bc.rank()
        else:
            bc = None
            rank_in = 0
        hc = dimc - rank_out - rank_in
        m_sigma = graded_piece(sigma[0], d)
        if bc is None:
            induced = m_sigma.rank()
        else:
            stacked = np.hstack([m_sigma.array, bc.array])
            induced = FieldMatrix(stacked, m_sigma.p).rank() - rank_in
        iso_table[d] = (h0, hc, induced)
        if raise_on_fail and not (h0 == hc == induced):
            raise H0IsoError(
                d, f"dim H_0 = {h0}, dim H_c = {hc}, induced rank = {induced}"
            )

    return sigma, target, SigmaCertificate(bool(report), iso_table)


def _base_change(K, ring_R):
    """R (x) K: the same twists with entries reduced modulo the defining ideal."""
    terms = {
        i: GradedFreeModule(ring_R, K.term(i).twists)
        for i in range(K.lo, K.hi + 1)
    }
    diffs = {}
    for i, d in K.diffs.items():
        diffs[i] = PolyMatrix(terms[i], terms[i - 1], d.entries, reduce=True)
    return ChainComplex(ring_R, terms, diffs, validate=True)


def tor_identity_check(g_list, ring_M, dmax, slot=None):
    """Graded comparison dim Tor_slot(R, M)_d == dim M_{d - D}, D = sum deg g.

    Computed from the Koszul complex of g tensored with M, as in the kernel
    description Tor_c = ker(E_c (x) M -> E_{c-1} (x) M); with the correct
    slot (= c) this holds degreewise, with a wrong slot it fails.
    Returns (ok, table of (dim_ker, dim_M_shifted) per degree).
    """
    c = len(g_list)
    if slot is None:
        slot = c
    if not 1 <= slot <= c:
        raise ValueError("slot must be between 1 and c")
    D = sum(g.total_degree() for g in g_list)
    EM = koszul_complex(list(g_list), ring_M)
    table = {}
    ok = True
    for d in range(0, dmax + 1):
        dim_slot = EM.term(slot).degree_dim(d)
        rank_out = graded_piece(EM.diff(slot), d).rank()
        dim_ker = dim_slot - rank_out
        dim_m = ring_M.dim_degree(d - D)
        table[d] = (dim_ker, dim_m)
        if dim_ker != dim_m:
            ok = False
    return ok, table
