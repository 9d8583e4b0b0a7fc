from __future__ import annotations

import dataclasses

import numpy as np
import pytest

from lietype.errors import AppError
from lietype.lattice import max_modulus
from lietype.padic import teichmuller_lift
from lietype.pipeline import fingerprint
from lietype.rootdata import (
    RootDatum,
    cartan_matrix,
    compose,
    default_twist,
    diagram_automorphism,
    expected_weyl_order,
    fundamental_group,
    gl_datum,
    parse_label,
    parse_twist,
    product,
    scalar_automorphism,
    simple_datum,
    torus_datum,
    validate,
)


def test_cartan_matrix_bourbaki_numbering():
    assert cartan_matrix("B", 2) == [[2, -1], [-2, 2]]
    assert cartan_matrix("C", 2) == [[2, -2], [-1, 2]]
    assert cartan_matrix("G", 2) == [[2, -3], [-1, 2]]


@pytest.mark.parametrize("label", ["A1", "A3ad", "B3", "C3ad", "D4", "G2", "F4", "E6", "GL3", "T2", "A1xA1", "B2ad*T1"])
def test_builtin_data_validate(label):
    assert validate(parse_label(label)) == []


def test_parse_label_keeps_factor_structure():
    datum = parse_label("B3ad*T1")
    assert datum.rank == 4
    assert datum.label.text == "B3ad*T1"
    assert datum.label.torus_rank == 1
    assert expected_weyl_order(datum.label) == 48


@pytest.mark.parametrize("label", ["Z9", "B1", "E9", "D2", ""])
def test_parse_label_rejects_unknown_types(label):
    with pytest.raises(AppError) as excinfo:
        parse_label(label)
    assert excinfo.value.code == "INVALID_TYPE"


@pytest.mark.parametrize(
    ("datum", "divisors"),
    [
        (simple_datum("A", 2), ()),
        (simple_datum("A", 1, "ad"), (2,)),
        (simple_datum("A", 2, "ad"), (3,)),
        (simple_datum("D", 4, "ad"), (2, 2)),
        (gl_datum(2), (0,)),
        (torus_datum(1), (0,)),
    ],
)
def test_fundamental_group(datum, divisors):
    assert fundamental_group(datum).divisors == divisors


def test_diagram_automorphisms():
    d4 = parse_label("D4")
    triality = default_twist(d4, "triality")
    assert triality.order == 3
    assert compose(triality, triality).order == 3
    assert default_twist(parse_label("A2"), "diagram").order == 2
    assert default_twist(parse_label("E6"), "diagram").order == 2
    with pytest.raises(AppError) as excinfo:
        diagram_automorphism(parse_label("B3"), [2, 1, 0])
    assert excinfo.value.code == "NOT_A_DIAGRAM_SYMMETRY"
    with pytest.raises(AppError):
        default_twist(parse_label("G2"), "diagram")


def test_swap_permutes_identical_factors():
    swap = default_twist(parse_label("A2xA2"), "swap")
    assert swap.order == 2
    with pytest.raises(AppError):
        default_twist(parse_label("A2xB2"), "swap")


def test_scalar_automorphisms():
    a2 = parse_label("A2")
    minus = scalar_automorphism(a2, -1)
    assert minus.scalar is None
    assert minus.order == 2
    zeta = teichmuller_lift(2, 7, 3)
    psi = scalar_automorphism(a2, zeta)
    assert psi.scalar == zeta
    assert psi.modulus == 7**3
    assert psi.order == 3
    with pytest.raises(AppError):
        scalar_automorphism(a2, 2)


def test_parse_twist_composes_terms():
    a2 = parse_label("A2")
    phi = parse_twist(a2, "diagram+psi:-1")
    assert phi.scalar is None
    assert phi.order == 2
    assert parse_twist(a2, "id").order == 1


def test_validate_reports_broken_reflections():
    broken = RootDatum(rank=1, weyl_generators=(((1,),),), coroot_basis=((1,),))
    codes = {v.code for v in validate(broken)}
    assert {"REFLECTION_ORDER", "REFLECTION_RANK", "COROOT_RANK_MISMATCH"} <= codes


def test_validate_reports_dependent_coroots():
    a2 = parse_label("A2")
    broken = dataclasses.replace(a2, coroot_basis=((1, 1), (1, 1)), label=None)
    assert "COROOT_BASIS_DEPENDENT" in {v.code for v in validate(broken)}


def test_weyl_generators_are_involutions():
    for g in parse_label("F4").generator_arrays():
        assert np.array_equal(g @ g, np.eye(4, dtype=np.int64))


def test_product_with_rank_zero_torus_is_neutral():
    a2 = parse_label("A2")
    extended = product(a2, torus_datum(0))
    assert extended.rank == 2
    assert extended.weyl_generators == a2.weyl_generators
    assert extended.coroot_basis == a2.coroot_basis
    assert extended.label == a2.label


def test_product_is_associative_on_fingerprints():
    a1, b2, t1 = parse_label("A1"), parse_label("B2ad"), parse_label("T1")
    left = product(product(a1, b2), t1)
    right = product(a1, product(b2, t1))
    assert left.label == right.label
    assert fingerprint(left) == fingerprint(right)


def test_scalar_seven_mod_25_has_order_four():
    psi = scalar_automorphism(parse_label("A2"), 7, ell=5, precision=2)
    assert psi.modulus == 25
    assert psi.order == 4


def test_modulus_bound_shrinks_with_rank():
    assert max_modulus(5) < 7**11 < max_modulus(1)
    scalar_automorphism(parse_label("A1"), 3, ell=7, precision=11)
    with pytest.raises(AppError) as excinfo:
        scalar_automorphism(parse_label("A5"), 3, ell=7, precision=11)
    assert excinfo.value.code == "INVALID_INPUT"
    with pytest.raises(AppError):
        RootDatum(rank=10, weyl_generators=(), coroot_basis=tuple(() for _ in range(10)), modulus=3**19)
    RootDatum(rank=1, weyl_generators=(), coroot_basis=((),), modulus=3**19)
