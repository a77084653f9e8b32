"""Extension algebra: cocycles, twisted products, classification, recocycling."""

import itertools

import pytest

from twistcech.errors import (
    CocycleViolation,
    CsNotCentral,
    InputError,
    NotAOneCocycle,
    NotNormalized,
    SectionNotNormalised,
    ValueNotCentral,
)
from twistcech.extensions import (
    GammaOneCochain,
    TwistedData,
    TwoCocycle,
    build_twisted_product,
    check_cocycle,
    cohomologous_iso,
    coboundary,
    extract_twisted_data,
    gamma_hat,
    make_twisted_data,
    multiply_cocycles,
    recocycle,
    second_cohomology,
    trivial_action,
)
from twistcech.fixtures import c_q_data, c_square_table, group, inversion_action
from twistcech.groups import center, find_isomorphism, validate_group

C2, C4, C8 = group("C2"), group("C4"), group("C8")
S3, D4, Q8 = group("S3"), group("D4"), group("Q8")
INV = inversion_action(C2, C4)


def brute_force_cocycles(action):
    """Oracle: filter all normalized tables by the cocycle identity directly."""
    gamma, g = action.gamma, action.g
    zelems = center(g).embed
    n = gamma.order
    out = []
    free = [(a, b) for a in range(1, n) for b in range(1, n)]
    for combo in itertools.product(zelems, repeat=len(free)):
        table = [[0] * n for _ in range(n)]
        for (a, b), v in zip(free, combo):
            table[a][b] = v
        good = True
        for g0 in gamma.elements():
            for g1 in gamma.elements():
                for g2 in gamma.elements():
                    lhs = g.mul[action.apply(g0, table[g1][g2])][table[g0][gamma.mul[g1][g2]]]
                    rhs = g.mul[table[g0][g1]][table[gamma.mul[g0][g1]][g2]]
                    if lhs != rhs:
                        good = False
        if good:
            out.append(tuple(tuple(r) for r in table))
    return out


def test_check_cocycle_trivial_and_cq():
    assert check_cocycle(INV, [[0, 0], [0, 0]]).is_trivial()
    coc = check_cocycle(INV, [[0, 0], [0, 2]])
    assert coc(1, 1) == 2


def test_check_cocycle_not_normalized():
    with pytest.raises(NotNormalized):
        check_cocycle(INV, [[0, 2], [0, 2]])


def test_check_cocycle_value_not_central():
    action = trivial_action(C2, S3)
    with pytest.raises(ValueNotCentral):
        check_cocycle(action, [[0, 0], [0, 1]])


def test_check_cocycle_violation():
    # the C4-action twist forces c(t,t) to be a fixed point of inversion
    with pytest.raises(CocycleViolation):
        check_cocycle(INV, [[0, 0], [0, 1]])


def test_coboundary_examples():
    assert coboundary(INV, GammaOneCochain((0, 0))).is_trivial()
    # inversion: da(t,t) = -a(t) + a(t) = 0
    assert coboundary(INV, GammaOneCochain((0, 1))).is_trivial()
    # trivial action: da(t,t) = 2 a(t)
    triv = trivial_action(C2, C4)
    assert coboundary(triv, GammaOneCochain((0, 1)))(1, 1) == 2


def test_second_cohomology_inversion():
    h2 = second_cohomology(INV)
    assert len(h2) == 2
    assert h2.class_of(make_twisted_data(INV).cocycle) != h2.class_of(c_q_data(INV).cocycle)
    # against the brute-force oracle: cocycles agree and coboundary cosets partition them
    assert sorted(h2.cocycles) == sorted(brute_force_cocycles(INV))


def test_second_cohomology_trivial_gamma():
    c1 = group("C1")
    h2 = second_cohomology(trivial_action(c1, C4))
    assert len(h2) == 1


def test_second_cohomology_class_invariant_under_coboundaries():
    for action in (INV, trivial_action(C2, C4), trivial_action(C2, C2)):
        h2 = second_cohomology(action)
        zelems = center(action.g).embed
        for table in h2.cocycles:
            base = TwoCocycle(action, table)
            cid = h2.class_of(base)
            for a_val in zelems:
                shifted = multiply_cocycles(base, coboundary(action, GammaOneCochain((0, a_val))))
                assert h2.class_of(shifted) == cid


def test_build_twisted_product_isomorphism_types():
    assert find_isomorphism(build_twisted_product(make_twisted_data(INV)).group, D4) is not None
    assert find_isomorphism(build_twisted_product(c_q_data(INV)).group, Q8) is not None


def test_product_inverse_of_section_elements():
    data = c_q_data(INV)
    built = build_twisted_product(data)
    for t in C2.elements():
        ti = C2.inv[t]
        expected = built.pair_index(C4.inv[data.c(ti, t)], ti)
        assert built.group.inv[built.pair_index(0, t)] == expected


def test_projection_section_and_kernel():
    built = build_twisted_product(c_q_data(INV))
    for t in C2.elements():
        assert built.proj.map[built.section[t]] == t
    kernel = {x for x in built.group.elements() if built.proj.map[x] == 0}
    assert kernel == set(built.embed_g.map)
    # the section meets every fibre exactly once
    fibres = {}
    for t in C2.elements():
        fibres.setdefault(built.proj.map[built.section[t]], []).append(t)
    assert all(len(v) == 1 for v in fibres.values())


def test_associativity_iff_cocycle_condition():
    """Every normalized 2-cochain: product table associative iff cocycle holds."""
    zelems = center(C4).embed
    n = C2.order
    for combo in itertools.product(zelems, repeat=(n - 1) * (n - 1)):
        table = [[0] * n for _ in range(n)]
        table[1][1] = combo[0]
        try:
            check_cocycle(INV, table)
            is_cocycle = True
        except CocycleViolation:
            is_cocycle = False
        # build the product table without validation and test associativity
        mul = [[0] * 8 for _ in range(8)]
        for a in C4.elements():
            for x in C2.elements():
                for b in C4.elements():
                    for y in C2.elements():
                        val = C4.mul[C4.mul[a][INV.apply(x, b)]][table[x][y]]
                        mul[a * 2 + x][b * 2 + y] = val * 2 + C2.mul[x][y]
        associative = all(
            mul[mul[i][j]][k] == mul[i][mul[j][k]]
            for i in range(8)
            for j in range(8)
            for k in range(8)
        )
        assert associative == is_cocycle


def test_corrupting_cocycle_entry_breaks_associativity():
    data = c_q_data(INV)
    table = [list(r) for r in data.cocycle.table]
    table[1][1] = 1  # not a cocycle value for the inversion action
    mul = [[0] * 8 for _ in range(8)]
    for a in C4.elements():
        for x in C2.elements():
            for b in C4.elements():
                for y in C2.elements():
                    val = C4.mul[C4.mul[a][INV.apply(x, b)]][table[x][y]]
                    mul[a * 2 + x][b * 2 + y] = val * 2 + C2.mul[x][y]
    with pytest.raises(InputError):
        validate_group(mul)


def test_gamma_hat_examples():
    small, embed = gamma_hat(c_q_data(INV))
    assert find_isomorphism(small.group, Q8) is not None
    triv = make_twisted_data(trivial_action(C2, C4))
    small2, _ = gamma_hat(triv)
    from twistcech.groups import cyclic_group, direct_product

    assert find_isomorphism(small2.group, direct_product(C4, C2)) is not None
    # the embedding commutes with both projections on every element
    big = build_twisted_product(c_q_data(INV))
    for x in small.group.elements():
        assert big.proj.map[embed.map[x]] == small.proj.map[x]


def test_cohomologous_iso():
    # a == 1 gives the identity map
    data = make_twisted_data(INV)
    iso = cohomologous_iso(data, GammaOneCochain((0, 0)))
    assert iso.map == tuple(range(8))
    # a(t) = 2: explicit isomorphism between the two builds
    iso2 = cohomologous_iso(data, GammaOneCochain((0, 2)))
    assert iso2.is_bijective()
    # composing with the pointwise-inverse cochain returns to the start
    delta = coboundary(INV, GammaOneCochain((0, 2)))
    data2 = TwistedData(INV, multiply_cocycles(data.cocycle, delta))
    inv_cochain = GammaOneCochain((0, C4.inv[2]))
    iso_back = cohomologous_iso(data2, inv_cochain)
    composed = tuple(iso_back.map[iso2.map[x]] for x in range(8))
    assert composed == tuple(range(8))


def test_extract_from_d4():
    # D4 with its rotation subgroup: any reflection section gives inversion, trivial c
    rot = None
    for x in D4.elements():
        if D4.element_order(x) == 4:
            rot = sorted({D4.power(x, k) for k in range(4)})
            break
    reflection = next(y for y in D4.elements() if y not in rot)
    ext = extract_twisted_data(D4, rot, [0, reflection])
    theta = ext.data.action.theta[1].map
    c4sub = ext.data.g
    assert theta == tuple(c4sub.inv)  # conjugation by a reflection inverts rotations
    assert ext.data.cocycle.is_trivial()


def test_extract_from_q8():
    i_sub = sorted({Q8.power(2, k) for k in range(4)})  # <i>
    j = next(x for x in Q8.elements() if x not in i_sub and Q8.element_order(x) == 4)
    ext = extract_twisted_data(Q8, i_sub, [0, j])
    sub = ext.data.g
    assert ext.data.action.theta[1].map == tuple(sub.inv)
    c_val = ext.data.cocycle(1, 1)
    # j^2 = -1: the defect is the order-2 element of <i>
    assert sub.element_order(c_val) == 2


def test_extract_from_direct_product():
    from twistcech.groups import direct_product

    prod = direct_product(C4, C2)
    g_part = [x for x in prod.elements() if x % 2 == 0]
    section = [0, 1]
    ext = extract_twisted_data(prod, g_part, section)
    assert ext.data.cocycle.is_trivial()
    assert all(a.map == tuple(range(4)) for a in ext.data.action.theta)


def test_extract_roundtrip_recovers_data():
    for data in (make_twisted_data(INV), c_q_data(INV)):
        built = build_twisted_product(data)
        ext = extract_twisted_data(
            built.group,
            list(built.embed_g.map),
            list(built.section),
        )
        assert ext.data.cocycle.table == data.cocycle.table
        assert tuple(a.map for a in ext.data.action.theta) == tuple(a.map for a in data.action.theta)


def test_extract_rejects_bad_sections():
    built = build_twisted_product(make_twisted_data(INV))
    with pytest.raises(SectionNotNormalised):
        extract_twisted_data(built.group, list(built.embed_g.map), [1, built.section[1]])


def test_recocycle_identity_map():
    data = c_q_data(INV)
    rec = recocycle(data, (0, 0))
    assert rec.new.cocycle.table == data.cocycle.table
    assert tuple(a.map for a in rec.new.action.theta) == tuple(a.map for a in data.action.theta)


def test_recocycle_s3_transposition():
    data = make_twisted_data(trivial_action(C2, S3))
    transposition = next(x for x in S3.elements() if S3.element_order(x) == 2)
    rec = recocycle(data, (0, transposition))
    assert rec.c_s.is_trivial()  # s(t)^2 == 1
    assert rec.new.action.theta[1].map == tuple(S3.conjugate(transposition, x) for x in S3.elements())


def test_recocycle_rejects_bad_s():
    data = make_twisted_data(trivial_action(C2, S3))
    three_cycle = next(x for x in S3.elements() if S3.element_order(x) == 3)
    with pytest.raises((NotAOneCocycle, CsNotCentral)):
        recocycle(data, (0, three_cycle))


def test_recocycle_abelian_preserves_class():
    h2 = second_cohomology(INV)
    for s_val in C4.elements():
        for data in (make_twisted_data(INV), c_q_data(INV)):
            rec = recocycle(data, (0, s_val))
            # abelian G: Int is trivial, so theta is unchanged and c_s is a coboundary
            assert tuple(a.map for a in rec.new.action.theta) == tuple(a.map for a in INV.theta)
            assert h2.class_of(rec.new.cocycle) == h2.class_of(data.cocycle)
