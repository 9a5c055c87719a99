import itertools
import random

import pytest

from groupsystems.errors import ShapeMismatch, UnrealizedTriangle
from groupsystems.generators import (
    alpha_t,
    alpha_t_hom,
    beta,
    beta_inv,
    build_context,
    circ,
    component_group_r,
    elementary_group,
    lower_elementary_group,
    multiply_via_elementary,
    nested_anchors,
    nested_hom,
    recover_system_fhgs,
    star,
    theta_t,
    triangle,
    triangle_projection,
    u_minus_subgroup,
    u_plus_subgroup,
)
from groupsystems.groups import is_normal, product_of_subgroups
from groupsystems.systems import all_tensors, identity_tensor, tensor_from_items


@pytest.fixture(scope="module")
def ctx_r2(r2):
    return build_context(r2)


@pytest.fixture(scope="module")
def ctx_c2(c2):
    return build_context(c2)


@pytest.fixture(scope="module")
def ctx_s3(s3_rep):
    return build_context(s3_rep)


def test_star_identity_and_involution(ctx_r2):
    basis = ctx_r2.basis
    ident = identity_tensor(basis)
    nontriv = tensor_from_items(basis, {(1, 0): 1})
    assert star(ctx_r2, nontriv, ident).choice == nontriv.choice
    # 11 * 11 = 00
    assert star(ctx_r2, nontriv, nontriv).choice == ident.choice


def test_star_associative_exhaustive(ctx_r2, ctx_c2):
    for ctx in (ctx_r2, ctx_c2):
        tensors = list(all_tensors(ctx.basis))
        if len(tensors) > 8:
            tensors = tensors[:8]
        for a, b, c in itertools.product(tensors, repeat=3):
            lhs = star(ctx, star(ctx, a, b), c)
            rhs = star(ctx, a, star(ctx, b, c))
            assert lhs.choice == rhs.choice


def test_u_group_is_a_group(ctx_r2, ctx_c2, ctx_s3):
    for ctx in (ctx_r2, ctx_c2, ctx_s3):
        assert ctx.u_group.order == len(ctx.system)
        # table validated exhaustively (axioms checked on construction)
        from groupsystems.groups import FiniteGroup
        FiniteGroup(ctx.u_group.op_table, name="check")


def test_circ_mirrors_star(ctx_r2, ctx_c2):
    for ctx in (ctx_r2, ctx_c2):
        for lab1 in ctx.tensors:
            for lab2 in ctx.tensors:
                u1, u2 = ctx.tensor_u(lab1), ctx.tensor_u(lab2)
                via_star = star(ctx, beta_inv(ctx, u1), beta_inv(ctx, u2))
                assert circ(ctx, u1, u2).labels == beta(ctx, via_star).labels


def test_triangle_shapes(ctx_c2):
    u = ctx_c2.identity_u()
    tri = triangle(ctx_c2, u, 0, 1)
    assert tri.positions == ((1, 1), (1, 0), (0, 1))
    assert tri.is_identity()
    top = triangle(ctx_c2, u, 1, 1)
    assert top.positions == ((1, 1),)


def test_elementary_groups_c2(ctx_c2):
    # interior anchors carry two independent span-2 labels: order 4
    for t in (1, 2):
        elem = elementary_group(ctx_c2, 0, t)
        assert elem.group.order == 4
    assert elementary_group(ctx_c2, 0, 0).group.order == 2
    assert elementary_group(ctx_c2, 0, 3).group.order == 4  # clipped tail slot


def test_elementary_groups_r2(ctx_r2):
    assert elementary_group(ctx_r2, 0, 0).group.order == 2
    assert elementary_group(ctx_r2, 1, 0).group.order == 2


def test_elementary_group_trivial_system(trivial_sys):
    ctx = build_context(trivial_sys)
    for (k, t) in ctx.slots:
        assert elementary_group(ctx, k, t).group.order == 1


def test_component_group_mirrors_elementary(ctx_r2, ctx_c2):
    for ctx in (ctx_r2, ctx_c2):
        for t in ctx.system.times():
            comp = component_group_r(ctx, t)
            elem = elementary_group(ctx, 0, t)
            assert comp.group.op_table == elem.group.op_table


def test_theta_is_surjective_with_one_sided_kernel(ctx_r2, ctx_c2):
    for ctx in (ctx_r2, ctx_c2):
        for t in ctx.system.times():
            hom = theta_t(ctx, 0, t)
            assert hom.is_surjective()
            prod = product_of_subgroups(
                ctx.u_group,
                u_plus_subgroup(ctx, t + 1),
                u_minus_subgroup(ctx, t - 1))
            assert hom.kernel().members == prod.members


def test_alpha_t_homomorphism_and_surjectivity(ctx_r2, ctx_c2, ctx_s3):
    for ctx in (ctx_r2, ctx_c2, ctx_s3):
        for t in ctx.system.times():
            alpha_t_hom(ctx, t)  # raises if not a surjective homomorphism


def test_alpha_t_r2_values(ctx_r2):
    comp = component_group_r(ctx_r2, 0)
    letters = sorted(alpha_t(ctx_r2, tri, 0) for tri in comp.elements)
    assert letters == [0, 1]


def test_alpha_t_rejects_wrong_anchor(ctx_c2):
    tri = triangle(ctx_c2, ctx_c2.identity_u(), 1, 1)
    with pytest.raises(ShapeMismatch):
        alpha_t(ctx_c2, tri, 1)


def test_nested_homomorphisms_all_anchors(ctx_r2, ctx_c2):
    for ctx in (ctx_r2, ctx_c2):
        for (k, t) in ctx.slots:
            for dst in nested_anchors(ctx, k, t):
                hom = triangle_projection(ctx, (k, t), dst)
                assert hom.is_surjective()


def test_nested_hom_identity_at_j_equals_k(ctx_c2):
    hom = nested_hom(ctx_c2, 0, 1, 0)
    assert hom.image_of == tuple(range(hom.domain.order))


def test_nested_hom_left_edge(ctx_c2):
    hom = nested_hom(ctx_c2, 0, 2, 1)  # target anchor (1, 1)
    assert hom.codomain.order == elementary_group(ctx_c2, 1, 1).group.order
    with pytest.raises(ShapeMismatch):
        nested_hom(ctx_c2, 1, 1, 0)


def test_multiply_via_elementary_r2_full(ctx_r2):
    for lab1 in ctx_r2.tensors:
        for lab2 in ctx_r2.tensors:
            u1, u2 = ctx_r2.tensor_u(lab1), ctx_r2.tensor_u(lab2)
            assert multiply_via_elementary(ctx_r2, u1, u2).labels == \
                circ(ctx_r2, u1, u2).labels


def test_multiply_via_elementary_c2_sampled(ctx_c2):
    rng = random.Random(0)
    pairs = [(rng.choice(ctx_c2.tensors), rng.choice(ctx_c2.tensors))
             for _ in range(100)]
    for lab1, lab2 in pairs:
        u1, u2 = ctx_c2.tensor_u(lab1), ctx_c2.tensor_u(lab2)
        assert multiply_via_elementary(ctx_c2, u1, u2).labels == \
            circ(ctx_c2, u1, u2).labels


def test_lower_elementary_groups(ctx_r2, ctx_c2):
    sub = lower_elementary_group(ctx_r2, 1, 0)
    assert sub.order == 2
    assert is_normal(ctx_r2.u_group, sub)
    for (k, t) in ctx_c2.slots:
        sub = lower_elementary_group(ctx_c2, k, t)
        assert is_normal(ctx_c2.u_group, sub)


def test_lower_elementary_whole_group_blockcode(parity3):
    ctx = build_context(parity3)
    t0, t1 = parity3.window
    sub = lower_elementary_group(ctx, ctx.ell, t0)
    # the only members NOT in A^[0, ell] are those using later slots
    assert sub.order == len(parity3.finite_support_members(t0, t0 + ctx.ell))


def test_fhgs_recovery(ctx_r2, ctx_c2, ctx_s3, trivial_sys):
    for ctx in (ctx_r2, ctx_c2, ctx_s3, build_context(trivial_sys)):
        recovered = recover_system_fhgs(ctx)
        assert recovered.sequences == ctx.system.sequences


def test_unrealized_triangle_raises(ctx_r2):
    elem = elementary_group(ctx_r2, 0, 0)
    from groupsystems.generators import Triangle
    fake = Triangle(elem.anchor, elem.positions,
                    tuple(9 for _ in elem.positions))
    with pytest.raises(UnrealizedTriangle):
        elem.index(fake)
