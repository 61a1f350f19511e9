"""Level-structure layer: admissibility, subgroup tables, quotient arrows,
and the multiplicity matrices, checked against independently re-derived
values wherever a matrix is frozen."""

import random

import pytest

from isograph.curves import (
    isomorphism_scale,
    torsion_basis,
    torsion_order_extension,
    velu_quotient,
    x_multiples,
)
from isograph.enhanced import (
    AdmissibilityError,
    BrandtValidationError,
    GraphBuilder,
    check_admissible,
    diagonal_parity_violations,
    sigma1,
    validate_brandt,
    validate_symmetry_and_row_sums,
    vertex_count,
)
from isograph.fields import get_embedding, make_extension_field
from isograph.supersingular import build_class_table


# ---------------------------------------------------------------- oracles


def level1_matrix_by_j(p, l, rng_seed):
    """Independent multiplicity count using only quotient j-invariants:
    enumerate the l + 1 kernels from a fresh random basis, Velu each one,
    and bucket by target class.  No arrow/pushforward bookkeeping."""
    table = build_class_table(p)
    big = make_extension_field(p, 2 * torsion_order_extension(p, l))
    emb = get_embedding(table.field, big)
    rng = random.Random(rng_seed)
    h = table.class_count
    M = [[0] * h for _ in range(h)]
    for ci, model in enumerate(table.models):
        E = model.change_field(emb)
        P, Q = torsion_basis(E, l, rng)
        gens = [P]
        R = E.identity()
        for _ in range(l):
            gens.append(Q + R)
            R = R + P
        for G in gens:
            image, _ = velu_quotient(E, G, l)
            j = emb.descend(image.j_invariant())
            M[ci][table.class_of_j(j)] += 1
    return M


def level2_matrix_13_5(rng_seed):
    """Independent re-derivation of the (p=13, l=5, N=2) matrix.

    Vertices are (class, 2-subgroup); the three 2-subgroups are found as
    roots of the 2-division cubic by scanning F_169, and each degree-5
    isogeny pushes them forward through its x-map directly.  Shares only
    the curve primitives with the builder, none of its table machinery."""
    p, l = 13, 5
    table = build_class_table(p)
    E = table.models[0]
    F2 = table.field
    big = make_extension_field(p, 8)
    emb = get_embedding(F2, big)
    Ebig = E.change_field(emb)

    two_xs = sorted(
        (x for x in map(F2.element, F2.iter_tuples()) if not E.rhs(x)),
        key=lambda x: x.coeffs,
    )
    assert len(two_xs) == 3
    index = {x.coeffs: i for i, x in enumerate(two_xs)}

    rng = random.Random(rng_seed)
    P, Q = torsion_basis(Ebig, l, rng)
    gens = [P]
    R = Ebig.identity()
    for _ in range(l):
        gens.append(Q + R)
        R = R + P

    M = [[0] * 3 for _ in range(3)]
    for G in gens:
        image, xmap = velu_quotient(Ebig, G, l)
        from isograph.curves import EllipticCurve

        small = EllipticCurve(emb.descend(image.a), emb.descend(image.b))
        u2 = isomorphism_scale(small, E)
        assert u2 is not None
        for x0 in two_xs:
            moved = u2 * emb.descend(xmap(emb(x0)))
            M[index[x0.coeffs]][index[moved.coeffs]] += 1
    return M


# ------------------------------------------------------------ admissibility


def test_admissibility_rejections():
    with pytest.raises(AdmissibilityError):
        check_admissible(11, 5, 1)  # 11 !== 1 mod 12
    with pytest.raises(AdmissibilityError):
        check_admissible(13, 4, 1)  # l not prime
    with pytest.raises(AdmissibilityError):
        check_admissible(13, 13, 1)  # l == p
    with pytest.raises(AdmissibilityError):
        check_admissible(13, 5, 12)  # not squarefree
    with pytest.raises(AdmissibilityError):
        check_admissible(13, 5, 65)  # shares factors with both l and p
    with pytest.raises(AdmissibilityError):
        check_admissible(13, 5, 0)
    assert check_admissible(13, 5, 6) == [2, 3]
    assert check_admissible(61, 7, 30) == [2, 3, 5]
    assert check_admissible(13, 5, 1) == []


def test_sigma1_and_vertex_count():
    assert sigma1(1) == 1
    assert sigma1(6) == 12
    assert sigma1(30) == 72
    assert vertex_count(13, 1) == 1
    assert vertex_count(13, 6) == 12
    assert vertex_count(37, 2) == 9
    assert vertex_count(61, 6) == 60


# ---------------------------------------------------------------- validation


def test_validation_split():
    good = [[0, 4], [4, 0]]
    validate_brandt(good, 3)
    validate_symmetry_and_row_sums(good, 3)
    assert diagonal_parity_violations(good) == ()

    odd_diag = [[1, 3, 2], [3, 1, 2], [2, 2, 2]]
    validate_symmetry_and_row_sums(odd_diag, 5)
    assert diagonal_parity_violations(odd_diag) == (0, 1)
    with pytest.raises(BrandtValidationError):
        validate_brandt(odd_diag, 5)

    with pytest.raises(BrandtValidationError):
        validate_symmetry_and_row_sums([[0, 4], [3, 2]], 3)  # asymmetric... and bad sum
    with pytest.raises(BrandtValidationError):
        validate_symmetry_and_row_sums([[2, 3], [3, 2]], 3)  # row sum 5 != 4
    with pytest.raises(BrandtValidationError):
        validate_symmetry_and_row_sums([[2, 2], [2, 2], [2, 2]], 3)
    with pytest.raises(BrandtValidationError):
        validate_symmetry_and_row_sums([[2, -1, 3], [-1, 4, 1], [3, 1, 0]], 3)


# --------------------------------------------------------- subgroup tables


def test_two_torsion_slots_are_division_cubic_roots():
    b = GraphBuilder(13, 5)
    slots = b.level_subgroups(2)[0]
    assert len(slots) == 3
    E = b.table.models[0]
    F2 = b.table.field
    roots = sorted(
        (x.coeffs for x in map(F2.element, F2.iter_tuples()) if not E.rhs(x))
    )
    assert sorted(s.xs[0].coeffs for s in slots) == roots
    assert all(len(s.xs) == 1 for s in slots)


def test_five_torsion_slots_partition_nonzero_torsion():
    b = GraphBuilder(13, 5)
    slots = b.level_subgroups(5)[0]
    assert len(slots) == 6
    assert all(len(s.xs) == 2 for s in slots)
    all_xs = [x.coeffs for s in slots for x in s.xs]
    # 24 nonzero 5-torsion points in +-pairs: 12 distinct x's
    assert len(set(all_xs)) == 12


def test_torsion_field_degrees():
    b = GraphBuilder(13, 5)
    assert b.torsion_field(2).deg == 2
    assert b.torsion_field(3).deg == 4
    assert b.torsion_field(5).deg == 8
    b37 = GraphBuilder(37, 5)
    assert b37.torsion_field(61).deg == 40


# ------------------------------------------------------------------ arrows


def test_arrow_duality_structure():
    b = GraphBuilder(13, 5)
    duals = [a.dual_index for a in b.arrows[0]]
    assert duals == [1, 0, 2, 3, 5, 4]
    # self-dual kernels belong to trace-zero endomorphisms, necessarily loops
    for t, a in enumerate(b.arrows[0]):
        if a.dual_index == t:
            assert a.target == a.source


def test_arrow_dual_of_dual_across_classes():
    b = GraphBuilder(37, 7)
    for ci, row in enumerate(b.arrows):
        for t, a in enumerate(row):
            back = b.arrows[a.target][a.dual_index]
            assert (back.target, back.dual_index) == (ci, t)


# ---------------------------------------------------------------- matrices


def test_level1_matrices_p13():
    for l in (3, 5, 7):
        g = GraphBuilder(13, l).build(1)
        assert g.brandt == ((l + 1,),)
        assert g.n == 1
        assert g.parity_violations == ()


def test_golden_37_5_level1_vs_j_oracle():
    g = GraphBuilder(37, 5).build(1)
    frozen = ((1, 3, 2), (3, 1, 2), (2, 2, 2))
    assert g.brandt == frozen
    oracle = level1_matrix_by_j(37, 5, rng_seed=24601)
    assert tuple(tuple(r) for r in oracle) == frozen
    # spectral cross-check: eigenvalues must be {6, 0, -2}
    M = [list(r) for r in frozen]
    tr = sum(M[i][i] for i in range(3))
    det = (
        M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1])
        - M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0])
        + M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0])
    )
    assert tr == 4 and det == 0
    assert g.parity_violations == (0, 1)


def test_level1_matrices_vs_j_oracle_more():
    for p, l in ((37, 3), (37, 7), (61, 5)):
        g = GraphBuilder(p, l).build(1)
        oracle = level1_matrix_by_j(p, l, rng_seed=555)
        assert g.brandt == tuple(tuple(r) for r in oracle)


def test_golden_61_7_level1():
    g = GraphBuilder(61, 7).build(1)
    assert g.brandt == (
        (0, 1, 2, 2, 3),
        (1, 1, 2, 2, 2),
        (2, 2, 2, 1, 1),
        (2, 2, 1, 2, 1),
        (3, 2, 1, 1, 1),
    )
    assert g.parity_violations == (1, 4)


def test_golden_13_5_level2_vs_independent_route():
    g = GraphBuilder(13, 5).build(2)
    frozen = ((0, 3, 3), (3, 1, 2), (3, 2, 1))
    assert g.brandt == frozen
    oracle = level2_matrix_13_5(rng_seed=31337)
    assert tuple(tuple(r) for r in oracle) == frozen
    assert g.parity_violations == (1, 2)


def test_level3_13_5_structure():
    g = GraphBuilder(13, 5).build(3)
    assert g.brandt == (
        (1, 3, 2, 0),
        (3, 1, 0, 2),
        (2, 0, 3, 1),
        (0, 2, 1, 3),
    )


# ------------------------------------------------------------ graph object


def test_edge_structure_consistency():
    g = GraphBuilder(13, 7).build(3)
    k = g.degree
    assert g.oriented_edge_count == g.n * k
    assert g.geometric_edge_count * 2 == g.oriented_edge_count
    for eid, de in enumerate(g.edge_dual):
        assert g.edge_dual[de] == eid
        assert g.edge_target[de] == g.edge_source(eid)
        if de == eid:
            assert g.edge_target[eid] == g.edge_source(eid)
    # matrix agrees with edge targets
    count = [[0] * g.n for _ in range(g.n)]
    for eid, w in enumerate(g.edge_target):
        count[g.edge_source(eid)][w] += 1
    assert g.brandt == tuple(tuple(r) for r in count)


def test_vertex_labels():
    b = GraphBuilder(13, 5)
    g1 = b.build(1)
    assert g1.vertex_label(0) == "j=5"
    g2 = b.build(2)
    assert g2.vertex_label(0) == "j=5 C[2:0]"
    g6 = b.build(6)
    assert "C[2:" in g6.vertex_label(5) and "3:" in g6.vertex_label(5)


def test_seed_independence_of_graphs():
    a = GraphBuilder(13, 5, seed=1).build(6)
    b = GraphBuilder(13, 5, seed=99).build(6)
    assert a.brandt == b.brandt
    assert a.vertices == b.vertices
    assert a.edge_target == b.edge_target
    assert a.edge_dual == b.edge_dual
    c = GraphBuilder(37, 5, seed=7).build(2)
    d = GraphBuilder(37, 5, seed=8).build(2)
    assert c.brandt == d.brandt and c.edge_target == d.edge_target


def test_level_sums_refine_coarser_level():
    # summing level-6 multiplicities over each level-2 fiber must
    # reproduce the level-2 matrix row by row
    b = GraphBuilder(13, 5)
    g6, g2 = b.build(6), b.build(2)
    pos2 = g6.primes.index(2)
    proj = [g2.vertices.index((c, (S[pos2],))) for c, S in g6.vertices]
    for vi in range(g6.n):
        sums = [0] * g2.n
        for wi in range(g6.n):
            sums[proj[wi]] += g6.brandt[vi][wi]
        assert sums == list(g2.brandt[proj[vi]])
