"""Comandos compartilhados pela CLI e pela API: resolvem entradas e montam payloads."""

from __future__ import annotations

import logging
from typing import Any

import numpy as np

from lietype import pipeline
from lietype.datafile import DatumFile, from_file
from lietype.errors import AppError, fail
from lietype.fixedpoint import compute_fixed_point
from lietype.invariants import degrees, enumerate_weyl, twisting_eigenvalues
from lietype.padic import (
    SubgroupDescriptor,
    as_unit,
    closed_subgroup_equal,
    descriptor_of,
    mod4_report,
    subgroup_membership,
    unit_valuation,
    untwist_factor,
)
from lietype.rootdata import (
    DatumAutomorphism,
    RootDatum,
    fundamental_group,
    parse_label,
    parse_twist,
    validate,
)

logger = logging.getLogger("lietype")


def resolve_datum(type_: str | None, doc: DatumFile | None) -> tuple[RootDatum, dict[str, DatumAutomorphism]]:
    if doc is not None:
        return from_file(doc)
    if not type_:
        raise fail("INVALID_INPUT", status_code=400, reason="a type label or a datum file is required")
    return parse_label(type_), {}


def resolve_twist(
    datum: RootDatum,
    automorphisms: dict[str, DatumAutomorphism],
    text: str | None,
    ell: int | None = None,
    precision: int | None = None,
) -> DatumAutomorphism:
    """Nome de automorfismo do arquivo, ou a sintaxe de parse_twist."""
    text = (text or "id").strip()
    if text in automorphisms:
        return automorphisms[text]
    return parse_twist(datum, text, ell, precision)


def _is_identity(tau: DatumAutomorphism) -> bool:
    return tau.scalar is None and np.array_equal(tau.array(), np.eye(tau.rank, dtype=np.int64))


def degrees_payload(datum: RootDatum, tau: DatumAutomorphism, cap: int | None = None) -> dict[str, Any]:
    data = degrees(datum, cap)
    payload = data.to_payload()
    payload["label"] = datum.label.text if datum.label is not None else None
    payload["pi1"] = list(fundamental_group(datum).divisors)
    if not _is_identity(tau):
        pairs = twisting_eigenvalues(enumerate_weyl(datum, cap), tau, data)
        payload["eigenvalues"] = [[d, str(eps)] for d, eps in pairs]
    return payload


def fixed_datum_payload(
    datum: RootDatum,
    tau: DatumAutomorphism,
    ell: int,
    cap: int | None = None,
    all_lifts: bool = False,
) -> dict[str, Any]:
    fixed = compute_fixed_point(datum, tau, ell, cap)
    payload = {
        "ell": ell,
        "rank": fixed.datum.rank,
        "relative_weyl_order": fixed.relative.order,
        "springer_rank": fixed.springer,
        "modulus": fixed.datum.modulus,
        "lift": fixed.lift.to_payload(),
        "fingerprint": pipeline.fingerprint(fixed.datum, cap).to_payload(),
        "weyl_generators": [[list(row) for row in g] for g in fixed.datum.weyl_generators],
        "coroot_basis": [list(row) for row in fixed.datum.coroot_basis],
    }
    if all_lifts:
        payload["lift_diagnostics"] = pipeline.lift_diagnostics(datum, tau, ell, cap).to_payload()
    return payload


def untwist_payload(
    datum: RootDatum,
    tau: DatumAutomorphism,
    q: str | int,
    ell: int,
    precision: int | None = None,
    cap: int | None = None,
) -> dict[str, Any]:
    result = pipeline.untwist(datum, tau, q, ell, precision, cap)
    payload = result.to_payload()
    payload["fingerprint"] = pipeline.fingerprint(result.fixed_datum, cap).to_payload()
    try:
        payload["classification_key"] = pipeline.classification_key(result, cap).to_payload()
        payload["sylow_torus_exponent"] = pipeline.sylow_torus_exponent(result)
    except AppError as exc:
        if exc.code != "VALUATION_AT_PRECISION":
            raise
        payload["classification_key"] = None
        payload["sylow_torus_exponent"] = None
    return payload


def tezuka_payload(
    datum: RootDatum,
    tau: DatumAutomorphism,
    q: str | int,
    ell: int,
    truncation: int | None = None,
    precision: int | None = None,
    cap: int | None = None,
) -> dict[str, Any]:
    return pipeline.tezuka_report(datum, tau, q, ell, truncation, precision, cap).to_payload()


def verdict_payload(datum: RootDatum, tau: DatumAutomorphism, ell: int, cap: int | None = None) -> dict[str, Any]:
    payload = pipeline.fundamental_class_verdict(datum, tau, ell, cap).to_payload()
    payload["label"] = datum.label.text if datum.label is not None else None
    payload["ell"] = ell
    return payload


def subgroup_payload(
    ell: int,
    q: str | int,
    precision: int | None = None,
    other: str | None = None,
    descriptor: str | None = None,
) -> dict[str, Any]:
    unit = as_unit(q, ell, precision)
    factor = untwist_factor(unit)
    valuation = unit_valuation(factor.q_prime)
    payload: dict[str, Any] = {
        "ell": ell,
        "precision": unit.precision,
        "residue": unit.residue,
        "e": factor.e,
        "zeta": factor.zeta.residue,
        "q_prime": factor.q_prime.residue,
        "valuation": valuation if isinstance(valuation, int) else valuation.value,
    }
    try:
        payload["closure"] = descriptor_of(unit).label
    except AppError as exc:
        if exc.code != "PRECISION_TOO_LOW":
            raise
        payload["closure"] = None
    if ell == 2:
        payload["mod4"] = mod4_report(unit)
    if other is not None:
        payload["closed_subgroup_equal"] = closed_subgroup_equal(unit, as_unit(other, ell, unit.precision))
    if descriptor is not None:
        parsed = SubgroupDescriptor.parse(descriptor, ell)
        payload["member_of"] = {"descriptor": parsed.label, "member": subgroup_membership(unit, parsed)}
    return payload


def validate_payload(datum: RootDatum) -> dict[str, Any]:
    violations = validate(datum)
    if violations:
        logger.info("validate_failed codes=%s", [v.code for v in violations])
    return {
        "ok": not violations,
        "rank": datum.rank,
        "modulus": datum.modulus,
        "violations": [{"code": v.code, "detail": v.detail} for v in violations],
    }
