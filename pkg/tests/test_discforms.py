import random

import pytest
from fractions import Fraction as Q

from latglue.discforms import (
    FiniteAbelianMap,
    GlueError,
    IsotropicSubgroup,
    discriminant_group,
    enumerate_isotropic_subgroups,
    extend_to_overlattice,
    extends_to_overlattice,
    glue_extension_check,
    glue_subgroup,
    induced_map,
    is_anti_isometry,
    overlattice_from_isotropic,
    overlattice_with_basis,
    pullback_form,
    solve_psi_bar,
    with_generators,
)
from latglue.exact import identity, mat_mul, transpose
from latglue.isometries import isometry_between
from latglue.lattices import IntegerLattice, LatticeError

S_GRAM = ((6, 3, 0), (3, 6, 0), (0, 0, 6))
F_LIFTS = (
    (Q(2, 3), Q(-1, 3), Q(-1, 3)),
    (Q(-2, 3), Q(1), Q(0)),
    (Q(2, 9), Q(-1, 9), Q(-1, 6)),
)


@pytest.fixture(scope="module")
def invariant():
    return IntegerLattice(S_GRAM)


@pytest.fixture(scope="module")
def disc(invariant):
    return discriminant_group(invariant)


@pytest.fixture(scope="module")
def pinned(disc):
    return with_generators(disc, F_LIFTS)


# glue of T = T_X + L for the L = e-f case, on the basis (e+f, h, e-f)
T_EF_GRAM = ((18, 0, 0), (0, 6, 0), (0, 0, 6))


def test_group_order_matches_determinant(disc):
    assert disc.order() == 162
    assert disc.orders == (3, 3, 18)


def test_rank_one_example():
    group = discriminant_group(IntegerLattice(((2,),)))
    assert group.orders == (2,)
    assert group.lifts == ((Q(1, 2),),)
    assert group.q(group.generator(0)) == Q(1, 2)
    assert group.b(group.generator(0), group.generator(0)) == Q(1, 2)


def test_odd_lattice_rejected():
    with pytest.raises(LatticeError):
        discriminant_group(IntegerLattice(((3,),)))


def test_pinned_generators(pinned):
    assert pinned.orders == (3, 3, 18)
    f1, f2, f3 = (pinned.generator(i) for i in range(3))
    assert pinned.q(f1) == Q(2, 3)
    assert pinned.q(f2) == Q(2, 3)
    assert pinned.q(f3) == Q(7, 18)
    assert pinned.b(f1, f2) == 0
    assert pinned.b(f1, f3) == 0
    assert pinned.b(f2, f3) == Q(1, 3)


def test_q_of_zero_is_zero(pinned):
    assert pinned.q(pinned.zero()) == 0
    assert pinned.b(pinned.zero(), pinned.generator(2)) == 0


def test_q_b_compatibility(pinned):
    elems = list(pinned.elements())
    rng = random.Random(31)
    for _ in range(400):
        x, y = rng.choice(elems), rng.choice(elems)
        lhs = (pinned.q(x + y) - pinned.q(x) - pinned.q(y)) % 2
        assert lhs == (2 * pinned.b(x, y)) % 2


def test_existence_walkthrough_dual_classes():
    """The printed generating classes of A_T exist and generate it."""
    group = discriminant_group(IntegerLattice(T_EF_GRAM))
    assert group.order() == 648
    # (e+f)/18, f/3 = (e+f)/6 - (e-f)/6, h/6, in (e+f, h, e-f)-coordinates
    printed = [
        (Q(1, 18), 0, 0),
        (Q(1, 6), 0, Q(-1, 6)),
        (0, Q(1, 6), 0),
    ]
    elems = [group.element_from_dual_vector(v) for v in printed]
    span = {group.zero().coeffs}
    frontier = [group.zero()]
    while frontier:
        current = frontier.pop()
        for gen in elems:
            nxt = current + gen
            if nxt.coeffs not in span:
                span.add(nxt.coeffs)
                frontier.append(nxt)
    assert len(span) == 648


def test_claimed_glue_generator_is_not_isotropic():
    """q((e+f)/2) = 1/2: the printed glue coset cannot be the glue.

    The actual order-2 glue of the L = e-f case is the class of f; the
    discrepancy with the printed claim is recorded, not normalized away.
    """
    group = discriminant_group(IntegerLattice(T_EF_GRAM))
    half_sum = group.element_from_dual_vector((Q(1, 2), 0, 0))
    assert group.q(half_sum) == Q(1, 2)
    f_class = group.element_from_dual_vector((Q(1, 2), 0, Q(-1, 2)))
    assert group.q(f_class) == 0
    assert half_sum != f_class


def test_enumerate_isotropic_order_two():
    """Exactly two isotropic order-2 subgroups; one recovers the invariant lattice."""
    group = discriminant_group(IntegerLattice(T_EF_GRAM))
    subs = enumerate_isotropic_subgroups(group, 2)
    assert len(subs) == 2
    recovered = []
    invariant = IntegerLattice(S_GRAM)
    for sub in subs:
        lattice = overlattice_from_isotropic(sub)
        assert lattice.determinant() == 162
        if isometry_between(lattice, invariant) is not None:
            recovered.append(sub)
    assert len(recovered) == 2  # both glues give isometric copies
    f_class = group.element_from_dual_vector((Q(1, 2), 0, Q(-1, 2)))
    assert any(f_class in sub.elements() for sub in subs)


def test_enumerate_isotropic_trivial_and_empty():
    group = discriminant_group(IntegerLattice(((2,),)))
    assert len(enumerate_isotropic_subgroups(group, 1)) == 1
    assert enumerate_isotropic_subgroups(group, 2) == []


def test_non_isotropic_subgroup_rejected():
    group = discriminant_group(IntegerLattice(((2,),)))
    with pytest.raises(GlueError):
        IsotropicSubgroup(group, (group.generator(0),))


def test_overlattice_trivial_glue(invariant):
    group = discriminant_group(invariant)
    trivial = IsotropicSubgroup(group, ())
    assert overlattice_from_isotropic(trivial) == invariant


def test_overlattice_determinant_law():
    group = discriminant_group(IntegerLattice(T_EF_GRAM))
    for sub in enumerate_isotropic_subgroups(group, 2):
        lattice = overlattice_from_isotropic(sub)
        assert lattice.determinant() * 2 * 2 == 648


def test_glue_subgroup_of_direct_sum(invariant):
    """S / (T_X + L) for L = e-f is generated by the class of f."""
    sub = invariant.span(((1, 1, 0), (0, 0, 1), (1, -1, 0)))
    glue = glue_subgroup(sub)
    assert glue.order() == 2
    f_class = glue.parent.element_from_dual_vector(
        sub.coordinates_of((0, 1, 0))
    )
    assert f_class in glue.elements()


def test_induced_map_identity_and_negation(pinned):
    eye = induced_map(identity(3), pinned)
    assert eye.matrix == identity(3)
    minus = tuple(tuple(-int(i == j) for j in range(3)) for i in range(3))
    neg = induced_map(minus, pinned)
    for i in range(3):
        gen = pinned.generator(i)
        assert neg.apply(gen) == -gen


def test_induced_map_printed_values(pinned):
    """phi for L = e-f sends f1 to 2 f1 and f2 to f2 + 12 f3."""
    phi = ((0, -1, 0), (-1, 0, 0), (0, 0, -1))
    bar = induced_map(phi, pinned)
    f1, f2, f3 = (pinned.generator(i) for i in range(3))
    assert bar.apply(f1) == 2 * f1
    assert bar.apply(f2) == f2 + 12 * f3
    assert bar.apply(2 * f3) == f2 + 4 * f3


def test_induced_map_preserves_forms(pinned, invariant):
    """Every isometry of the source lattice acts by a form isometry on A."""
    from latglue.isometries import orthogonal_group

    elems = list(pinned.elements())
    for g in orthogonal_group(invariant).elements:
        bar = induced_map(g.matrix, pinned)
        for x in elems[::7]:
            assert pinned.q(bar.apply(x)) == pinned.q(x)
        for i in range(3):
            for j in range(i, 3):
                x, y = pinned.generator(i), pinned.generator(j)
                assert pinned.b(bar.apply(x), bar.apply(y)) == pinned.b(x, y)


def test_with_generators_rejects_bad_sets(disc):
    # a non-generating set: twice the same order-3 class
    f1 = (Q(2, 3), Q(-1, 3), Q(-1, 3))
    with pytest.raises(GlueError):
        with_generators(disc, (f1, f1, (Q(2, 9), Q(-1, 9), Q(-1, 6))))
    # wrong length / not in the dual
    with pytest.raises(GlueError):
        with_generators(disc, ((Q(1, 5), 0, 0),))


def test_extends_to_overlattice_printed_case(invariant):
    """-1 on T_X and +1 on L extends across the glue for L = e-f."""
    sub = invariant.span(((1, 1, 0), (0, 0, 1), (1, -1, 0)))
    glue = glue_subgroup(sub)
    phi_t = ((-1, 0, 0), (0, -1, 0), (0, 0, 1))
    assert extends_to_overlattice(phi_t, glue)
    assert extends_to_overlattice(identity(3), glue)
    extended = extend_to_overlattice(phi_t, glue)
    lattice, _basis = overlattice_with_basis(glue)
    assert mat_mul(mat_mul(transpose(extended), lattice.gram), extended) == lattice.gram


def test_extension_can_fail():
    """An isometry swapping two inequivalent glue directions does not extend."""
    # <4> + <-4>: q(1/4, 0) = 1/4 and q(0, 1/4) = -1/4, glue (1,1)/4 is isotropic
    lattice = IntegerLattice(((4, 0), (0, -4)))
    group = discriminant_group(lattice)
    diag = group.element_from_dual_vector((Q(1, 4), Q(1, 4)))
    glue = IsotropicSubgroup(group, (diag,))
    swap = ((0, 1), (1, 0))  # isometry only of the quadratic space with sign flip
    flip = ((1, 0), (0, -1))
    assert extends_to_overlattice(flip, glue) is False
    assert extends_to_overlattice(identity(2), glue) is True
    with pytest.raises(GlueError):
        extend_to_overlattice(flip, glue)
    del swap


def test_is_anti_isometry_pullback(pinned):
    gamma_matrix = ((0, 1, 0), (1, 0, 0), (0, 0, 2))
    domain = pullback_form(pinned, gamma_matrix, (3, 3, 9))
    gamma = FiniteAbelianMap(domain, pinned, gamma_matrix)
    assert is_anti_isometry(gamma)


def test_is_anti_isometry_reports_non_injective():
    group = discriminant_group(IntegerLattice(((2,),)))
    doubling = FiniteAbelianMap(group, group, ((2,),))
    with pytest.raises(GlueError):
        is_anti_isometry(doubling)


def test_is_anti_isometry_trivial_domain():
    unimodular = discriminant_group(IntegerLattice(((0, 1), (1, 0))))
    assert unimodular.order() == 1
    target = discriminant_group(IntegerLattice(((2,),)))
    trivial = FiniteAbelianMap(unimodular, target, ((),))
    assert is_anti_isometry(trivial)


def test_map_serialization_round_trip(pinned):
    gamma_matrix = ((0, 1, 0), (1, 0, 0), (0, 0, 2))
    domain = pullback_form(pinned, gamma_matrix, (3, 3, 9))
    gamma = FiniteAbelianMap(domain, pinned, gamma_matrix)
    text = gamma.to_json()
    import json

    payload = json.loads(text)
    assert payload == {
        "orders_dom": [3, 3, 9],
        "orders_cod": [3, 3, 18],
        "matrix": [[0, 1, 0], [1, 0, 0], [0, 0, 2]],
    }
    rebuilt = FiniteAbelianMap.from_json(text)
    assert rebuilt.matrix == gamma.matrix
    attached = FiniteAbelianMap.from_json(text, domain=domain, codomain=pinned)
    assert attached == gamma
    with pytest.raises(GlueError):
        FiniteAbelianMap.from_json(text, domain=pinned)


def test_map_well_definedness_enforced(pinned):
    # sending an order-3 generator to an order-18 element is not a map
    with pytest.raises(GlueError):
        FiniteAbelianMap(pinned, pinned, ((0, 0, 0), (0, 1, 0), (1, 0, 1)))


def test_glue_extension_check_and_solver(pinned):
    """Printed data for L = e-f: psi_bar solves the gluing equation."""
    phi = ((0, -1, 0), (-1, 0, 0), (0, 0, -1))
    phi_bar = induced_map(phi, pinned)
    gamma_matrix = ((0, 1, 0), (1, 0, 0), (0, 0, 2))
    domain = pullback_form(pinned, gamma_matrix, (3, 3, 9))
    gamma = FiniteAbelianMap(domain, pinned, gamma_matrix)
    psi_bar = solve_psi_bar(phi_bar, gamma)
    assert psi_bar.matrix == ((1, 0, 1), (0, 2, 0), (6, 0, 2))
    assert glue_extension_check(phi_bar, psi_bar, gamma)
    eye = FiniteAbelianMap(domain, domain, identity(3))
    assert not glue_extension_check(phi_bar, eye, gamma)
    eye_s = FiniteAbelianMap(pinned, pinned, identity(3))
    assert solve_psi_bar(eye_s, gamma).matrix == identity(3)


def test_solver_rejects_images_outside_glue():
    lattice = IntegerLattice(((4, 0), (0, 12)))
    group = discriminant_group(lattice)
    # domain Z/2 glued onto the order-2 class of the first factor
    gamma_matrix = ((2,), (0,))
    domain = pullback_form(group, gamma_matrix, (2,))
    gamma = FiniteAbelianMap(domain, group, gamma_matrix)
    # g1 -> g1 + 3 g2 sends the glue class 2 g1 to 2 g1 + 6 g2, outside <2 g1>
    phi_bar = FiniteAbelianMap(group, group, ((1, 0), (3, 1)))
    with pytest.raises(GlueError):
        solve_psi_bar(phi_bar, gamma)
