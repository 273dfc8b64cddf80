"""Splices, certificates, minimization, MCM extraction, duality."""

import pytest

from tatesplice.arith import PrimeField, VariableContext, parse_polynomial
from tatesplice.errors import H0IsoError, LiftError, WindowTooSmallError
from tatesplice.freecomplex import (
    BaseRing,
    ChainComplex,
    GradedFreeModule,
    PolyMatrix,
)
from tatesplice.harness import run_build
from tatesplice.homotopy import _base_change
from tatesplice.koszul import (
    ExteriorVector,
    LiftMatrix,
    alpha_element,
    koszul_complex,
    wedge_map,
)
from tatesplice.shamash import es_resolution
from tatesplice.syzygies import dual_module_presentation, minimal_resolution
from tatesplice.tate import (
    TateResolution,
    betti_dual_match,
    expand_phi,
    general_splice,
    is_two_periodic,
    lift_matrix_to_S,
    mcm_generator_count,
    mcm_presentation,
    minimize,
    normalize_matrix_factorization,
    orthogonality_check,
    phi_prime,
    poly_exact_divide,
    tate_splice,
)

F = PrimeField(32003)
XY = VariableContext(["x", "y"])
XYZ = VariableContext(["x", "y", "z"])
S2 = BaseRing(XY, F)
S3 = BaseRing(XYZ, F)


def pxy(s):
    return parse_polynomial(s, XY, F)


def p3(s):
    return parse_polynomial(s, XYZ, F)


@pytest.fixture(scope="module")
def splice_t(inst_t):
    res = es_resolution(inst_t.f, inst_t.g, inst_t.ring_R, 6, A=inst_t.lift, check=False)
    return res, tate_splice(res, window=(-4, 5), dmax=10)


@pytest.fixture(scope="module")
def splice_c(inst_c):
    res = es_resolution(inst_c.f, inst_c.g, inst_c.ring_R, 7, A=inst_c.lift, check=False)
    return res, tate_splice(res, window=(-4, 6), dmax=12)


def test_phi_prime_socle_component(inst_t):
    K = koszul_complex(inst_t.f, inst_t.ring_S)
    RK = _base_change(K, inst_t.ring_R)
    alpha = alpha_element(inst_t.lift)
    phi, target = phi_prime(RK, alpha, [1, 1])
    assert phi[0].entries == ((pxy("x*y"),),)


def test_phi_prime_hypersurface_matrix_factorization(inst_h):
    K = koszul_complex(inst_h.f, inst_h.ring_S)
    RK = _base_change(K, inst_h.ring_R)
    alpha = alpha_element(inst_h.lift)
    phi, target = phi_prime(RK, alpha, [1, 1])
    # two components, 2x1 and 1x2
    assert phi[0].target.rank == 2 and phi[1].target.rank == 1
    prod = lift_matrix_to_S(phi[1], inst_h.ring_S).compose(K.diff(2))
    assert prod.entries == ((pxy("x^2 + y^2"),),)


def test_zero_comparison_map_rejected_by_h0(inst_t):
    res = es_resolution(inst_t.f, inst_t.g, inst_t.ring_R, 6, A=inst_t.lift, check=False)
    phi, target = expand_phi(res)
    zero_phi = {
        i: PolyMatrix.zero(res.complex.term(i), target.term(i)) for i in phi
    }
    with pytest.raises(H0IsoError):
        tate_splice(res, window=(-2, 3), dmax=6, phi=zero_phi, target=target)


def test_tate_splice_instance_t(splice_t):
    _, tate = splice_t
    ranks = [tate.complex.term(i).rank for i in range(-4, 6)]
    assert ranks == [4, 3, 2, 1, 1, 2, 3, 4, 5, 6]
    assert tate.passed
    # splice entry: the socle generator det A = xy
    assert tate.complex.diff(0).entries == ((pxy("x*y"),),)
    # lower half carries generator degree i at position i, upper its mirror
    betti = tate.betti()
    for i in range(0, 6):
        assert betti[i] == {-i: i + 1}
    for j in range(0, 4):
        assert betti[-1 - j] == {j + 2: j + 1}


def test_tate_splice_instance_c(splice_c):
    _, tate = splice_c
    assert tate.passed
    assert tate.certificates["minimal"]["passed"]  # x^3 in m*(x^2)
    assert tate.complex.term(0).rank == 2


def test_tate_splice_provenance_labels(splice_t):
    _, tate = splice_t
    at0 = tate.provenance[0]
    assert [lab["half"] for lab in at0] == ["lower"]
    at_m1 = tate.provenance[-1]
    assert [lab["half"] for lab in at_m1] == ["upper"]


def test_hypersurface_cone_two_periodic(inst_h):
    res = es_resolution(inst_h.f, inst_h.g, inst_h.ring_R, 7, A=inst_h.lift, check=False)
    tate = tate_splice(res, window=(-4, 5), dmax=10)
    minimized = minimize(tate.complex)
    normalized = normalize_matrix_factorization(minimized, inst_h.g[0], inst_h.ring_S)
    assert is_two_periodic(normalized)
    g = inst_h.g[0]
    for i in range(normalized.lo + 1, normalized.hi):
        left = lift_matrix_to_S(normalized.diff(i), inst_h.ring_S)
        right = lift_matrix_to_S(normalized.diff(i + 1), inst_h.ring_S)
        prod = left.compose(right)
        expected = PolyMatrix.scalar(right.source, g)
        assert prod.entries == expected.entries


def test_general_splice_reproduces_instance_t(splice_t, inst_t):
    res, tate = splice_t
    other = general_splice(
        res.complex, res.complex, 0, window=(-4, 5), dmax=10, check_duality=True
    )
    assert other.certificates["duality"]["passed"]
    assert other.meta["twist_offset"] == 2
    for i in range(-4, 6):
        assert sorted(other.complex.term(i).twists) == sorted(
            tate.complex.term(i).twists
        )


def test_general_splice_duality_instance_c(inst_c, splice_c):
    res, tate_direct = splice_c
    tate = general_splice(
        res.complex, res.complex, 1, window=(-3, 4), dmax=10, check_duality=True
    )
    assert tate.certificates["duality"]["passed"]
    assert tate.meta["twist_offset"] == 0
    # the two construction routes agree positionwise on the shared window
    for i in range(-3, 5):
        assert sorted(tate.complex.term(i).twists) == sorted(
            tate_direct.complex.term(i).twists
        )


def test_general_splice_rejects_free_module(inst_t):
    R = inst_t.ring_R
    free = ChainComplex(
        R, {0: GradedFreeModule(R, (0,)), 1: GradedFreeModule(R, ())}, {}
    )
    with pytest.raises(LiftError):
        general_splice(free, free, 0, window=(-1, 1), dmax=4)


def test_minimize_fixpoint(splice_t):
    _, tate = splice_t
    once = minimize(tate.complex)
    twice = minimize(once)
    assert [once.term(i).twists for i in range(-4, 6)] == [
        twice.term(i).twists for i in range(-4, 6)
    ]
    for i in range(-3, 6):
        assert once.diff(i).entries == twice.diff(i).entries


def test_minimize_splits_trivial_pair():
    # Koszul(x, y) d_1 padded with a unit summand R <-1- R
    t1 = GradedFreeModule(S2, (-1, -1, 0))
    t0 = GradedFreeModule(S2, (0, 0))
    d1 = PolyMatrix(
        t1, t0, [[pxy("x"), pxy("y"), pxy("0")], [pxy("0"), pxy("0"), pxy("1")]]
    )
    C = ChainComplex(S2, {0: t0, 1: t1}, {1: d1})
    out = minimize(C, check=False)
    assert out.term(0).twists == (0,)
    assert out.term(1).twists == (-1, -1)
    assert out.diff(1).entries == ((pxy("x"), pxy("y")),)


def test_minimize_nonminimal_splice_matches_direct_build():
    # g_1 = f_1 makes the splice non-minimal; after minimization the interior
    # matches the directly-built minimal hypersurface k[t]/(t^2) instance
    from tatesplice.harness import ProblemInstance

    inst = ProblemInstance(
        field_char=32003, variables=["x", "y"], f=["x", "y"], g=["x", "y^2"],
        window=(-3, 4), max_internal_degree=8,
    )
    doc = run_build(inst)
    assert not doc["certificates"]["minimal"]["passed"]
    assert doc["certificates"]["minimal_after_reduction"]["passed"]
    direct = ProblemInstance(
        field_char=32003, variables=["t"], f=["t"], g=["t^2"],
        window=(-3, 4), max_internal_degree=8,
    )
    doc_direct = run_build(direct)
    for i in range(-2, 4):  # interior; edge ranks depend on the cut window
        assert sum(doc["betti"][str(i)].values()) == sum(
            doc_direct["betti"][str(i)].values()
        )


def test_mcm_presentation_instance_t(splice_t):
    _, tate = splice_t
    minimized, labels = minimize(tate.complex, labels=tate.provenance)
    final = TateResolution(minimized, 0, labels, tate.certificates, tate.meta)
    pres = mcm_presentation(final)
    assert pres.generator_count == 1
    assert pres.minimal
    assert pres.matrix.entries == ((pxy("x"), pxy("y")),)
    assert pres.twists == (0,)


def test_mcm_presentation_window_too_small(splice_t):
    _, tate = splice_t
    small = tate.complex.subwindow(-4, 0)
    clipped = TateResolution(small, 0, {}, {}, {})
    with pytest.raises(WindowTooSmallError):
        mcm_presentation(clipped)


def test_mcm_generator_count_formula():
    assert mcm_generator_count(3, 2) == 1
    assert mcm_generator_count(5, 2) == 3
    assert mcm_generator_count(4, 1) == 2
    assert mcm_generator_count(2, 2) == 1
    with pytest.raises(ValueError):
        mcm_generator_count(2, 3)


def test_orthogonality_instance_c(inst_c):
    assert orthogonality_check(inst_c.lift)


def test_orthogonality_random_lift():
    import random

    rng = random.Random(11)
    ctx = VariableContext(["x", "y", "z", "w"])
    field = PrimeField(32003)
    names = ["x", "y", "z", "w"]
    f = [parse_polynomial(f"{v}^2", ctx, field) for v in names]
    from tatesplice.arith import Polynomial

    lin = [parse_polynomial(v, ctx, field) for v in names]
    A = [
        [
            sum(
                (l.scale(rng.randrange(field.p)) for l in lin),
                Polynomial.zero(ctx, field),
            )
            for _ in range(2)
        ]
        for _ in range(4)
    ]
    g = []
    for j in range(2):
        acc = Polynomial.zero(ctx, field)
        for i in range(4):
            acc = acc + A[i][j] * f[i]
        g.append(acc)
    lift = LiftMatrix(A, f, g)
    assert orthogonality_check(lift)


def test_corrupted_alpha_detected(inst_c):
    alpha = alpha_element(inst_c.lift)
    bad = ExteriorVector(3, 2, {**alpha.coeffs, (1, 3): p3("z^2")}, alpha.degree)
    a2 = inst_c.lift.column(1)
    composite = wedge_map(bad, 1, [2, 2, 2], S3).twisted(a2.degree).compose(
        wedge_map(a2, 0, [2, 2, 2], S3)
    )
    assert not composite.is_zero()


def test_poly_exact_divide():
    q = poly_exact_divide(pxy("x^3 + x*y^2"), pxy("x"))
    assert q == pxy("x^2 + y^2")
    with pytest.raises(ValueError):
        poly_exact_divide(pxy("x^2 + y^2"), pxy("x"))


def test_syzygy_cross_check_instance_t(splice_t, inst_t):
    """The cokernel presentation agrees with the double-syzygy-dual route:
    Omega^2 of the dual of Omega^2(M), compared as graded Betti numbers up
    to a uniform twist."""
    res, tate = splice_t
    minimized = minimize(tate.complex)
    gens_tate = sorted(minimized.term(0).twists)
    rels_tate = sorted(minimized.term(1).twists)

    d3 = res.complex.diff(3)  # presents Omega^2(k) over R
    _, relations = dual_module_presentation(d3, 12)
    resolved = minimal_resolution(relations, 3, 14)
    gens_syz = sorted(resolved.term(2).twists)
    rels_syz = sorted(resolved.term(3).twists)
    assert len(gens_syz) == len(gens_tate) and len(rels_syz) == len(rels_tate)
    shift = gens_syz[0] - gens_tate[0]
    assert [t - shift for t in gens_syz] == gens_tate
    assert [t - shift for t in rels_syz] == rels_tate


def test_duality_betti_relation(splice_c, inst_c):
    res, tate = splice_c
    other = general_splice(
        res.complex, res.complex, 1, window=(-4, 6), dmax=12, check_duality=False
    )
    assert betti_dual_match(tate, other, 1, other.meta["twist_offset"])
