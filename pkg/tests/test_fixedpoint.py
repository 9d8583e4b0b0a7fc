from __future__ import annotations

import numpy as np
import pytest

from lietype.errors import AppError
from lietype.fixedpoint import (
    best_lift,
    compute_fixed_point,
    fixed_datum,
    fixed_lattice,
    maximal_lifts,
)
from lietype.invariants import degrees, enumerate_weyl, springer_rank
from lietype.padic import teichmuller_lift
from lietype.pipeline import fingerprint
from lietype.rootdata import (
    default_twist,
    fundamental_group,
    make_automorphism,
    parse_label,
    scalar_automorphism,
    validate,
)


def test_triality_fixed_datum_is_g2():
    d4 = parse_label("D4")
    data = compute_fixed_point(d4, default_twist(d4, "triality"), 2)
    assert data.datum.rank == 2
    assert data.relative.order == 12
    assert data.springer == 2
    assert degrees(data.datum).degrees == (2, 6)
    assert fundamental_group(data.datum).divisors == ()
    assert validate(data.datum) == []


def test_minus_one_on_a2_at_three():
    a2 = parse_label("A2")
    data = compute_fixed_point(a2, scalar_automorphism(a2, -1), 3)
    assert data.datum.rank == 1
    assert data.relative.order == 2


def test_scalar_twist_gives_modular_fixed_datum():
    a2 = parse_label("A2")
    zeta = teichmuller_lift(2, 7, 4)
    data = compute_fixed_point(a2, scalar_automorphism(a2, zeta), 7)
    assert data.datum.modulus == 7**4
    assert data.datum.rank == 1
    assert data.relative.order == 3
    assert degrees(data.datum).degrees == (3,)


def test_fixed_lattice_membership():
    d4 = parse_label("D4")
    triality = default_twist(d4, "triality")
    sub = fixed_lattice(triality)
    assert sub.rank == 2
    for column in sub.basis.T:
        assert np.array_equal(triality.array() @ column, column)
        assert sub.contains(column)
    assert not sub.contains([1, 0, 0, 0])
    with pytest.raises(AppError):
        sub.coordinates([1, 0, 0, 0])


def test_lifts_share_rank_and_are_sorted():
    a2 = parse_label("A2")
    tau = scalar_automorphism(a2, -1)
    lifts = maximal_lifts(a2, tau, 3)
    keys = [tuple(np.asarray(lift.array()).reshape(-1)) for lift in lifts]
    assert keys == sorted(keys)
    assert {fixed_lattice(lift).rank for lift in lifts} == {1}
    assert best_lift(a2, tau, 3).matrix == lifts[0].matrix


def test_no_lift_when_every_coset_element_has_order_divisible_by_ell():
    a2 = parse_label("A2")
    with pytest.raises(AppError) as excinfo:
        best_lift(a2, default_twist(a2, "diagram"), 2)
    assert excinfo.value.code == "NO_PRIME_ORDER_LIFT"


@pytest.mark.parametrize(
    ("label", "twists"),
    [("A2", ["id", "-1", "diagram"]), ("B2", ["id", "-1"]), ("G2", ["id", "-1"])],
)
def test_max_fixed_rank_over_coset_equals_springer_rank(label, twists):
    datum = parse_label(label)
    enumeration = enumerate_weyl(datum)
    for name in twists:
        tau = scalar_automorphism(datum, -1) if name == "-1" else default_twist(datum, name)
        springer = springer_rank(enumeration, tau)
        ranks = [
            fixed_lattice(make_automorphism(w @ tau.array(), kind="composite")).rank
            for w in enumeration.elements
        ]
        assert max(ranks) == springer


@pytest.mark.parametrize(("label", "factor"), [("A1xA1", "A1"), ("A2xA2", "A2")])
@pytest.mark.parametrize("ell", [3, 5])
def test_swap_fixed_datum_is_the_diagonal_factor(label, factor, ell):
    datum = parse_label(label)
    fixed = fixed_datum(datum, default_twist(datum, "swap"), ell)
    assert fingerprint(fixed) == fingerprint(parse_label(factor))


@pytest.mark.parametrize(("label", "factor"), [("A1xA1xA1", "A1"), ("A2xA2xA2", "A2")])
@pytest.mark.parametrize("ell", [5, 7])
def test_cycle_fixed_datum_is_the_diagonal_factor(label, factor, ell):
    datum = parse_label(label)
    fixed = fixed_datum(datum, default_twist(datum, "cycle"), ell)
    assert fixed.rank == parse_label(factor).rank
    assert fingerprint(fixed) == fingerprint(parse_label(factor))


@pytest.mark.parametrize("label", ["A2", "B3", "G2", "GL2", "B2ad*T1"])
def test_identity_twist_fixes_the_whole_datum(label):
    datum = parse_label(label)
    fixed = fixed_datum(datum, default_twist(datum, "id"), 5)
    assert fixed.rank == datum.rank
    assert fingerprint(fixed) == fingerprint(datum)
