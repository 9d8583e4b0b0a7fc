from __future__ import annotations

import dataclasses
import random
from collections import defaultdict

import pytest

from lietype import pipeline
from lietype.errors import AppError, fail
from lietype.padic import AT_PRECISION, PAdicUnit, Sentinel, descriptor_of
from lietype.pipeline import (
    GUARANTEED_EXAMPLES,
    GUARANTEED_EXAMPLES2,
    UNKNOWN,
    Fingerprint,
    classification_key,
    ennola_self_dual,
    fingerprint,
    fundamental_class_verdict,
    group_order,
    lift_diagnostics,
    scalar_equivalent,
    sylow_torus_exponent,
    tezuka_report,
    untwist,
)
from lietype.rootdata import default_twist, parse_label
from lietype.series import PoincareSeries


@pytest.mark.parametrize(
    ("label", "expected"),
    [("A2", Fingerprint((2, 3), 6, ())), ("GL2", Fingerprint((1, 2), 2, (0,))), ("T1", Fingerprint((1,), 1, (0,)))],
)
def test_fingerprints(label, expected):
    assert fingerprint(parse_label(label)) == expected


def test_untwist_a2_at_three_folds_q_into_minus_one():
    a2 = parse_label("A2")
    result = untwist(a2, default_twist(a2, "id"), 2, 3, precision=6)
    assert result.e == 2
    assert result.zeta.residue == 3**6 - 1
    assert (result.zeta * result.q_prime).residue == 2
    assert result.q_prime.residue % 3 == 1
    assert result.fixed_datum.rank == 1
    assert result.valuation == 1
    assert fingerprint(result.fixed_datum) == Fingerprint((2,), 2, ())
    assert sylow_torus_exponent(result) == 1


def test_untwist_keeps_tau_when_q_is_one_mod_ell():
    a2 = parse_label("A2")
    tau = default_twist(a2, "id")
    result = untwist(a2, tau, 4, 3)
    assert result.e == 1
    assert result.tau_e is tau


def test_untwist_triality_at_two():
    d4 = parse_label("D4")
    result = untwist(d4, default_twist(d4, "triality"), 5, 2)
    assert result.valuation == 2
    assert result.mod4 == {"q_prime_mod_4": 1, "valuation": 2}
    assert fingerprint(result.fixed_datum) == Fingerprint((2, 6), 12, ())


def test_untwist_rejects_outer_order_divisible_by_ell():
    a2 = parse_label("A2")
    with pytest.raises(AppError) as excinfo:
        untwist(a2, default_twist(a2, "diagram"), 3, 2)
    assert excinfo.value.code == "TAU_ORDER_DIVISIBLE_BY_ELL"


def test_classification_key():
    a1 = parse_label("A1")
    key = classification_key(untwist(a1, default_twist(a1, "id"), 3, 2, precision=6))
    assert key.fingerprint == Fingerprint((2,), 2, ())
    assert key.valuation == 1

    at_precision = untwist(a1, default_twist(a1, "id"), 1, 2, precision=6)
    assert at_precision.valuation is AT_PRECISION
    with pytest.raises(AppError) as excinfo:
        classification_key(at_precision)
    assert excinfo.value.code == "VALUATION_AT_PRECISION"


def test_classification_key_depends_only_on_closed_subgroup():
    a2 = parse_label("A2")
    tau = default_twist(a2, "id")
    keys = {classification_key(untwist(a2, tau, q, 3)) for q in (2, "1/2", 2 ** (1 + 3**10))}
    assert len(keys) == 1


@pytest.mark.parametrize(
    ("label", "twist", "q", "expected"),
    [
        ("GL2", "id", 3, 48),
        ("A2", "diagram", 2, 216),
        ("D4", "triality", 2, 211341312),
        ("GL3", "id", 4, 181440),
    ],
)
def test_group_order(label, twist, q, expected):
    datum = parse_label(label)
    assert group_order(datum, default_twist(datum, twist), q) == expected


def test_group_order_needs_integer_q():
    a1 = parse_label("A1")
    with pytest.raises(AppError):
        group_order(a1, default_twist(a1, "id"), 1)


def test_ennola_and_scalar_equivalence():
    assert ennola_self_dual(parse_label("B2"))
    assert not ennola_self_dual(parse_label("A2"))
    a2, d4 = parse_label("A2"), parse_label("D4")
    assert scalar_equivalent(a2, default_twist(a2, "diagram"))
    assert not scalar_equivalent(d4, default_twist(d4, "triality"))


@pytest.mark.parametrize(
    ("label", "twist", "ell", "status", "reason"),
    [
        ("B3", "id", 2, GUARANTEED_EXAMPLES, "SIMPLY_CONNECTED"),
        ("E8", "id", 3, UNKNOWN, "EXCLUDED_CASE"),
        ("D4", "triality", 2, GUARANTEED_EXAMPLES, "TAU_ORDER_PRIME_TO_ELL"),
        ("A2ad", "id", 3, UNKNOWN, "NONPOLYNOMIAL_FACTOR"),
        ("B3ad", "id", 2, GUARANTEED_EXAMPLES2, "POLYNOMIAL_OR_SPIN_FACTORS"),
        ("D4sc*T1", "triality", 2, GUARANTEED_EXAMPLES2, "PRODUCT_OF_GUARANTEED_FACTORS"),
    ],
)
def test_fundamental_class_verdict(label, twist, ell, status, reason):
    datum = parse_label(label)
    verdict = fundamental_class_verdict(datum, default_twist(datum, twist), ell)
    assert verdict.status == status
    assert reason in verdict.reasons


def test_verdict_requires_label():
    datum = dataclasses.replace(parse_label("A1"), label=None)
    with pytest.raises(AppError) as excinfo:
        fundamental_class_verdict(datum, default_twist(datum, "id"), 2)
    assert excinfo.value.code == "UNLABELED_DATUM"


def test_tezuka_report_for_gl3():
    gl3 = parse_label("GL3")
    report = tezuka_report(gl3, default_twist(gl3, "id"), 4, 3, truncation=20)
    assert report.series["LBG"] == PoincareSeries.from_degrees([1, 3, 5], [2, 4, 6])
    assert report.checks_passed
    assert report.order == 181440
    assert report.verdict.status == GUARANTEED_EXAMPLES2
    payload = report.to_payload()
    assert payload["group_order"] == "181440"
    assert payload["classification_key"]["valuation"] == 1


def test_tezuka_report_for_su2_and_torus():
    a1 = parse_label("A1")
    report = tezuka_report(a1, default_twist(a1, "id"), 3, 2, truncation=12)
    assert report.module_check.generator == (0, 3)
    assert report.checks_passed

    t1 = parse_label("T1")
    report = tezuka_report(t1, default_twist(t1, "id"), 3, 2, truncation=8)
    assert report.series["BGq"] == PoincareSeries.from_degrees([], [1])
    assert report.expansions["BGq"] == [1] * 9


def test_tezuka_report_warns_below_dim():
    a2 = parse_label("A2")
    report = tezuka_report(a2, default_twist(a2, "id"), 4, 3, truncation=4)
    assert report.module_check is None
    assert "TRUNCATION_BELOW_DIM" in report.warnings


def test_tezuka_report_rejects_nonpolynomial_cohomology():
    e8 = parse_label("E8")
    with pytest.raises(AppError) as excinfo:
        tezuka_report(e8, default_twist(e8, "id"), 2, 3, truncation=8)
    assert excinfo.value.code == "NONPOLYNOMIAL_UNSUPPORTED"


def test_lift_diagnostics_agree_for_triality():
    d4 = parse_label("D4")
    diagnostics = lift_diagnostics(d4, default_twist(d4, "triality"), 2)
    assert diagnostics.lifts >= 1
    assert diagnostics.agree
    assert diagnostics.fingerprints[0] == Fingerprint((2, 6), 12, ())


@pytest.mark.parametrize("label", ["A1", "A2", "G2"])
def test_untwist_without_fixed_torus_gives_rank_zero_datum(label):
    datum = parse_label(label)
    result = untwist(datum, default_twist(datum, "id"), 2, 5, precision=4)
    assert result.e == 4
    assert result.fixed_datum.rank == 0
    assert result.fixed.relative.order == 1
    assert classification_key(result) == pipeline.ClassificationKey(Fingerprint((), 1, ()), 1)
    assert sylow_torus_exponent(result) == 0


def test_tezuka_report_with_rank_zero_fixed_datum():
    a2 = parse_label("A2")
    report = tezuka_report(a2, default_twist(a2, "id"), 2, 5, truncation=10, precision=4)
    assert report.fixed_degrees.degrees == ()
    assert report.expansions["BGq"] == [1] + [0] * 10
    assert report.checks_passed
    assert report.order == 168


def test_tezuka_report_rejects_fixed_datum_without_polynomial_invariants(monkeypatch):
    real_degrees = pipeline.degrees

    def degrees_or_fail(datum, cap=None):
        if datum.label is None:
            raise fail("NORMALIZATION_FAILED")
        return real_degrees(datum, cap)

    monkeypatch.setattr(pipeline, "degrees", degrees_or_fail)
    a2 = parse_label("A2")
    with pytest.raises(AppError) as excinfo:
        tezuka_report(a2, default_twist(a2, "id"), 4, 3, truncation=8)
    assert excinfo.value.code == "NONPOLYNOMIAL_UNSUPPORTED"
    assert excinfo.value.details["factor"] == "fixed"


def test_classification_key_is_constant_on_closed_subgroups():
    a2 = parse_label("A2")
    tau = default_twist(a2, "id")
    rng = random.Random(20240612)
    keys = defaultdict(set)
    sampled = 0
    while sampled < 40:
        q = rng.randint(2, 10**6)
        if q % 3 == 0:
            continue
        result = untwist(a2, tau, q, 3, precision=8)
        if isinstance(result.valuation, Sentinel):
            continue
        keys[descriptor_of(PAdicUnit.from_value(q, 3, 8))].add(classification_key(result))
        sampled += 1
    assert all(len(found) == 1 for found in keys.values())
