"""Fluxo completo: destorcao, chave de classificacao, veredito e relatorio de Tezuka."""

from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, prod

import numpy as np
from sympy import cyclotomic_poly, totient

from lietype import cohomology
from lietype.config import DEFAULT_TRUNCATION
from lietype.errors import AppError, fail
from lietype.fixedpoint import FixedPointData, compute_fixed_point, fixed_point_of_lift, maximal_lifts
from lietype.invariants import (
    DegreeData,
    degrees,
    enumerate_weyl,
    is_inner,
    outer_order,
    twisting_eigenvalues,
)
from lietype.padic import (
    PAdicUnit,
    Sentinel,
    UntwistFactor,
    Valuation,
    as_unit,
    check_prime,
    mod4_report,
    unit_valuation,
    untwist_factor,
)
from lietype.rootdata import (
    DatumAutomorphism,
    DatumLabel,
    LabelFactor,
    RootDatum,
    block_offsets,
    compose,
    fundamental_group,
    make_automorphism,
    parse_label,
    scalar_automorphism,
)

logger = logging.getLogger("lietype")


# ─── Impressao digital ───────────────────────────────────────────────────────


@dataclass(frozen=True)
class Fingerprint:
    """(graus ordenados, |W|, pi_1 em SNF). Nao e um invariante completo de isomorfismo."""

    degrees: tuple[int, ...]
    weyl_order: int
    pi1: tuple[int, ...]

    def to_payload(self) -> dict:
        return {"degrees": list(self.degrees), "weyl_order": self.weyl_order, "pi1": list(self.pi1)}


def fingerprint(datum: RootDatum, cap: int | None = None) -> Fingerprint:
    data = degrees(datum, cap)
    return Fingerprint(data.degrees, data.weyl_order, fundamental_group(datum).divisors)


@dataclass(frozen=True)
class LiftDiagnostics:
    lifts: int
    fingerprints: tuple[Fingerprint, ...]

    @property
    def agree(self) -> bool:
        return len(self.fingerprints) <= 1

    def to_payload(self) -> dict:
        return {
            "lifts": self.lifts,
            "agree": self.agree,
            "fingerprints": [fp.to_payload() for fp in self.fingerprints],
        }


def lift_diagnostics(
    datum: RootDatum,
    tau: DatumAutomorphism,
    ell: int,
    cap: int | None = None,
    limit: int = 32,
) -> LiftDiagnostics:
    """Impressoes digitais dos datums fixos sobre os levantamentos de posto maximo."""
    enumeration = enumerate_weyl(datum, cap)
    lifts = maximal_lifts(datum, tau, ell, enumeration)
    seen: list[Fingerprint] = []
    for lift in lifts[:limit]:
        fixed, _, _ = fixed_point_of_lift(datum, enumeration, lift, cap)
        fp = fingerprint(fixed, cap)
        if fp not in seen:
            seen.append(fp)
    if len(seen) > 1:
        logger.warning("lift_fingerprints_disagree lifts=%s distinct=%s", len(lifts), len(seen))
    return LiftDiagnostics(len(lifts), tuple(seen))


# ─── Destorcao ───────────────────────────────────────────────────────────────


@dataclass(frozen=True, eq=False)
class UntwistResult:
    e: int
    zeta: PAdicUnit
    q_prime: PAdicUnit
    tau_e: DatumAutomorphism
    chosen_lift: DatumAutomorphism
    fixed_datum: RootDatum
    valuation: Valuation
    ell: int
    fixed: FixedPointData | None = None
    mod4: dict | None = None

    def to_payload(self) -> dict:
        payload = {
            "ell": self.ell,
            "precision": self.q_prime.precision,
            "e": self.e,
            "zeta": self.zeta.residue,
            "q_prime": self.q_prime.residue,
            "valuation": self.valuation.value if isinstance(self.valuation, Sentinel) else self.valuation,
            "tau_e": self.tau_e.to_payload(),
            "chosen_lift": self.chosen_lift.to_payload(),
            "fixed_rank": self.fixed_datum.rank,
            "fixed_modulus": self.fixed_datum.modulus,
        }
        if self.mod4 is not None:
            payload["mod4"] = self.mod4
        return payload


def untwist(
    datum: RootDatum,
    tau: DatumAutomorphism,
    q: PAdicUnit | int | Fraction | str,
    ell: int,
    precision: int | None = None,
    cap: int | None = None,
) -> UntwistResult:
    """BG^{h tau psi^q} = (BG^{h tau_e})(q') com tau_e = tau psi^zeta e q' = 1 mod ell."""
    check_prime(ell)
    unit = as_unit(q, ell, precision)
    enumeration = enumerate_weyl(datum, cap)
    n = outer_order(enumeration, tau)
    if n % ell == 0:
        raise fail("TAU_ORDER_DIVISIBLE_BY_ELL", ell=ell, order=n)
    factor: UntwistFactor = untwist_factor(unit)
    tau_e = tau if factor.e == 1 else compose(tau, scalar_automorphism(datum, factor.zeta))
    fixed = compute_fixed_point(datum, tau_e, ell, cap, enumeration=enumeration)
    valuation = unit_valuation(factor.q_prime)
    logger.info(
        "untwist ell=%s e=%s fixed_rank=%s valuation=%s",
        ell,
        factor.e,
        fixed.datum.rank,
        valuation,
    )
    return UntwistResult(
        e=factor.e,
        zeta=factor.zeta,
        q_prime=factor.q_prime,
        tau_e=tau_e,
        chosen_lift=fixed.lift,
        fixed_datum=fixed.datum,
        valuation=valuation,
        ell=ell,
        fixed=fixed,
        mod4=mod4_report(unit) if ell == 2 else None,
    )


@dataclass(frozen=True)
class ClassificationKey:
    fingerprint: Fingerprint
    valuation: int

    def to_payload(self) -> dict:
        return {"fingerprint": self.fingerprint.to_payload(), "valuation": self.valuation}


def classification_key(result: UntwistResult, cap: int | None = None) -> ClassificationKey:
    if isinstance(result.valuation, Sentinel):
        raise fail("VALUATION_AT_PRECISION", precision=result.q_prime.precision)
    fp = fingerprint(result.fixed_datum, cap)
    if prod(fp.degrees) != fp.weyl_order:
        raise fail("INTERNAL_ERROR", status_code=500, reason="fingerprint degrees disagree with |W|")
    return ClassificationKey(fp, result.valuation)


def sylow_torus_exponent(result: UntwistResult) -> int:
    """BT^{h psi^q'} = B(Z/ell^s)^r: devolve s * r."""
    if isinstance(result.valuation, Sentinel):
        raise fail("VALUATION_AT_PRECISION", precision=result.q_prime.precision)
    return result.valuation * result.fixed_datum.rank


# ─── Ordem do grupo finito ───────────────────────────────────────────────────


def group_order(datum: RootDatum, tau: DatumAutomorphism, q: int, cap: int | None = None) -> int:
    """q^N Prod_i (q^{d_i} - eps_i), agrupando eps por grau em polinomios ciclotomicos."""
    if not isinstance(q, int) or q < 2:
        raise fail("INVALID_INPUT", status_code=400, reason=f"group order needs an integer q >= 2, got {q!r}")
    enumeration = enumerate_weyl(datum, cap)
    pairs = twisting_eigenvalues(enumeration, tau)
    reflections = sum(d - 1 for d, _ in pairs)
    by_degree: dict[int, defaultdict[int, int]] = defaultdict(lambda: defaultdict(int))
    for d, eps in pairs:
        by_degree[d][Fraction(eps).denominator] += 1
    order = q**reflections
    for d, counts in by_degree.items():
        for n, count in counts.items():
            width = int(totient(n))
            if count % width:
                raise fail("NO_CONSISTENT_EIGENVALUES")
            order *= int(cyclotomic_poly(n, q**d)) ** (count // width)
    return order


def ennola_self_dual(datum: RootDatum, cap: int | None = None) -> bool:
    """-1 em W, entao BG(q) = BG(-q)."""
    enumeration = enumerate_weyl(datum, cap)
    return enumeration.contains(-np.eye(datum.rank, dtype=np.int64), datum.modulus)


def scalar_equivalent(datum: RootDatum, tau: DatumAutomorphism, cap: int | None = None) -> bool:
    """tau = psi^{-1} modulo W."""
    enumeration = enumerate_weyl(datum, cap)
    return is_inner(enumeration, compose(tau, scalar_automorphism(datum, -1)))


# ─── Veredito de classe fundamental ──────────────────────────────────────────

GUARANTEED_EXAMPLES = "GUARANTEED_THM_EXAMPLES"
GUARANTEED_EXAMPLES2 = "GUARANTEED_THM_EXAMPLES2"
UNKNOWN = "UNKNOWN"

# (ell, somando) fora do teorema para grupos simplesmente conexos
_EXCLUDED: dict[int, set[tuple[str, int]]] = {
    5: {("E", 8)},
    3: {("F", 4), ("E", 6), ("E", 7), ("E", 8)},
    2: {("E", 6), ("E", 7), ("E", 8)},
}


@dataclass(frozen=True)
class Verdict:
    status: str
    reasons: tuple[str, ...] = field(default_factory=tuple)

    @property
    def guaranteed(self) -> bool:
        return self.status != UNKNOWN

    def to_payload(self) -> dict:
        return {"status": self.status, "reasons": list(self.reasons)}


def _center_order(factor: LabelFactor) -> int:
    """|pi_1| do fator adjunto."""
    n = factor.rank
    if factor.kind == "A":
        return n + 1
    if factor.kind in "BC":
        return 2
    if factor.kind == "D":
        return 4
    return {("E", 6): 3, ("E", 7): 2}.get((factor.kind, n), 1)


def _torsion_order(factor: LabelFactor) -> int:
    if factor.kind in ("T", "GL") or factor.isogeny != "ad":
        return 1
    return _center_order(factor)


def _is_spin(factor: LabelFactor) -> bool:
    if factor.isogeny != "sc":
        return False
    return (
        (factor.kind == "B" and factor.rank >= 2)
        or (factor.kind == "D" and factor.rank >= 3)
        or (factor.kind, factor.rank) in {("A", 1), ("C", 2)}
    )


def polynomial_status(factor: LabelFactor, ell: int) -> bool | None:
    """H*(BG; F_ell) polinomial? None quando a classificacao em ell = 2 nao decide."""
    kind, n = factor.kind, factor.rank
    if kind in ("T", "GL"):
        return True
    if ell != 2:
        return _torsion_order(factor) % ell != 0 and (kind, n) not in _EXCLUDED.get(ell, set())
    if kind in ("G", "F"):
        return True
    if factor.isogeny == "sc":
        if kind in ("A", "C"):
            return True
        if kind == "B":
            return n <= 4
        if kind == "D":
            return n <= 4
        return False
    if kind == "B" or (kind == "A" and (n == 1 or (n + 1) % 2 == 1)) or (kind == "C" and n % 2 == 1):
        return True
    if _center_order(factor) % 2 == 0:
        return None
    return False


def _outer_order(datum: RootDatum, tau: DatumAutomorphism, cap: int | None) -> int:
    if tau.scalar is None and np.array_equal(tau.array(), np.eye(datum.rank, dtype=np.int64)):
        return 1
    try:
        return outer_order(enumerate_weyl(datum, cap), tau)
    except AppError as exc:
        if exc.code != "CAP_EXCEEDED":
            raise
    if tau.order is None:
        raise fail("INVALID_INPUT", status_code=400, reason="automorphism of infinite order")
    logger.warning("outer_order_fallback label=%s order=%s", datum.label.text if datum.label else None, tau.order)
    return tau.order


def _single_verdict(label: DatumLabel, order: int, ell: int) -> Verdict:
    reasons: list[str] = []
    simple = label.simple_factors
    sc = len(simple) == len(label.factors) and all(f.isogeny == "sc" for f in simple)
    excluded = [f for f in simple if (f.kind, f.rank) in _EXCLUDED.get(ell, set())]
    prime_to_ell = order % ell != 0
    if not prime_to_ell:
        reasons.append("TAU_ORDER_DIVISIBLE_BY_ELL")
    if excluded:
        reasons.append("EXCLUDED_CASE")
    if sc and prime_to_ell and not excluded:
        return Verdict(GUARANTEED_EXAMPLES, ("SIMPLY_CONNECTED", "TAU_ORDER_PRIME_TO_ELL", "NO_EXCLUDED_SUMMAND"))
    if not sc:
        reasons.append("NOT_SIMPLY_CONNECTED")

    statuses = [polynomial_status(f, ell) for f in label.factors]
    factors_ok = all(s is True or _is_spin(f) for f, s in zip(label.factors, statuses))
    if any(s is None and not _is_spin(f) for f, s in zip(label.factors, statuses)):
        reasons.append("CLASSIFICATION_GAP")
    elif not factors_ok:
        reasons.append("NONPOLYNOMIAL_FACTOR")
    twist_ok = order == 1 if ell == 2 else prime_to_ell
    if ell == 2 and order != 1:
        reasons.append("TWISTED_AT_TWO")
    if factors_ok and twist_ok:
        tag = "TAU_TRIVIAL_AT_TWO" if ell == 2 else "TAU_ORDER_PRIME_TO_ELL"
        return Verdict(GUARANTEED_EXAMPLES2, ("POLYNOMIAL_OR_SPIN_FACTORS", tag))
    return Verdict(UNKNOWN, tuple(dict.fromkeys(reasons)))


def _tau_blocks(label: DatumLabel, tau: DatumAutomorphism) -> list[list[int]]:
    """Orbitas de tau sobre os fatores do rotulo (uniao de blocos ligados pela matriz)."""
    offsets = block_offsets(label)
    matrix = tau.array()
    parent = list(range(len(offsets)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, (row, fi) in enumerate(offsets):
        for j, (col, fj) in enumerate(offsets):
            if i != j and np.any(matrix[row : row + fi.rank, col : col + fj.rank] != 0):
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = defaultdict(list)
    for i in range(len(offsets)):
        groups[find(i)].append(i)
    return sorted(groups.values())


def fundamental_class_verdict(
    datum: RootDatum,
    tau: DatumAutomorphism,
    ell: int,
    cap: int | None = None,
) -> Verdict:
    """Tabela dos teoremas de existencia de classe fundamental, com fecho por produtos."""
    check_prime(ell)
    if datum.label is None:
        raise fail("UNLABELED_DATUM", status_code=400)
    label = datum.label
    verdict = _single_verdict(label, _outer_order(datum, tau, cap), ell)
    if verdict.guaranteed:
        return verdict
    blocks = _tau_blocks(label, tau)
    if len(blocks) < 2:
        return verdict
    offsets = block_offsets(label)
    parts: list[Verdict] = []
    for block in blocks:
        sub_label = DatumLabel(tuple(label.factors[i] for i in block))
        indices = [row + k for i in block for row, f in [offsets[i]] for k in range(f.rank)]
        sub_matrix = tau.array()[np.ix_(indices, indices)]
        sub_tau = make_automorphism(sub_matrix, scalar=tau.scalar, kind=tau.kind)
        sub_datum = parse_label(sub_label.text)
        parts.append(_single_verdict(sub_label, _outer_order(sub_datum, sub_tau, cap), ell))
    if all(part.guaranteed for part in parts):
        status = GUARANTEED_EXAMPLES if all(p.status == GUARANTEED_EXAMPLES for p in parts) else GUARANTEED_EXAMPLES2
        tags = ["PRODUCT_OF_GUARANTEED_FACTORS"] + [tag for p in parts for tag in p.reasons]
        return Verdict(status, tuple(dict.fromkeys(tags)))
    return verdict


# ─── Relatorio de Tezuka ─────────────────────────────────────────────────────


@dataclass(frozen=True, eq=False)
class TezukaReport:
    untwisted: UntwistResult
    fixed_degrees: DegreeData
    truncation: int
    series: dict[str, cohomology.PoincareSeries]
    expansions: dict[str, list[int]]
    series_equal: bool
    em_check: cohomology.CollapseCheck
    module_check: cohomology.ModuleCheck | None
    psiq: cohomology.PsiqAction
    verdict: Verdict | None
    key: ClassificationKey
    order: int | None = None
    warnings: tuple[str, ...] = ()

    @property
    def checks_passed(self) -> bool:
        module_ok = self.module_check is None or self.module_check.ok
        return self.series_equal and self.em_check.ok and module_ok

    def to_payload(self) -> dict:
        return {
            "untwist": self.untwisted.to_payload(),
            "fixed_degrees": self.fixed_degrees.to_payload(),
            "truncation": self.truncation,
            "series": {name: s.to_payload() for name, s in self.series.items()},
            "expansions": self.expansions,
            "model_series_equal": self.series_equal,
            "em_collapse": self.em_check.to_payload(),
            "module_rank_one": None if self.module_check is None else self.module_check.to_payload(),
            "psiq_action": self.psiq.to_payload(),
            "verdict": None if self.verdict is None else self.verdict.to_payload(),
            "classification_key": self.key.to_payload(),
            "group_order": None if self.order is None else str(self.order),
            "warnings": list(self.warnings),
            "checks_passed": self.checks_passed,
        }


def _as_integer(q: PAdicUnit | int | Fraction | str) -> int | None:
    if isinstance(q, PAdicUnit):
        return None
    try:
        value = Fraction(q)
    except (ValueError, ZeroDivisionError):
        return None
    return int(value) if value.denominator == 1 else None


def _require_polynomial(datum: RootDatum, ell: int) -> list[str]:
    if datum.label is None:
        logger.warning("polynomial_assumed unlabeled datum ell=%s", ell)
        return ["UNLABELED_POLYNOMIALITY_ASSUMED"]
    for factor in datum.label.factors:
        if polynomial_status(factor, ell) is not True:
            raise fail("NONPOLYNOMIAL_UNSUPPORTED", factor=factor.text, ell=ell)
    return []


def _fixed_degrees(result: UntwistResult, ell: int, cap: int | None) -> DegreeData:
    """Graus de W' no reticulado fixo; sem invariantes polinomiais as series nao valem."""
    try:
        return degrees(result.fixed_datum, cap)
    except AppError as exc:
        if exc.code != "NORMALIZATION_FAILED" or exc.status_code >= 500:
            raise
    logger.warning("fixed_datum_nonpolynomial ell=%s rank=%s", ell, result.fixed_datum.rank)
    raise fail("NONPOLYNOMIAL_UNSUPPORTED", factor="fixed", ell=ell)


def tezuka_report(
    datum: RootDatum,
    tau: DatumAutomorphism,
    q: PAdicUnit | int | Fraction | str,
    ell: int,
    truncation: int | None = None,
    precision: int | None = None,
    cap: int | None = None,
) -> TezukaReport:
    truncation = DEFAULT_TRUNCATION if truncation is None else truncation
    if truncation < 0:
        raise fail("INVALID_INPUT", status_code=400, reason=f"truncation={truncation} must be >= 0")
    warnings = _require_polynomial(datum, ell)
    result = untwist(datum, tau, q, ell, precision, cap)
    fixed_degrees = _fixed_degrees(result, ell, cap)
    degs = fixed_degrees.degrees
    series = {model: cohomology.poincare_series(degs, model) for model in ("LBG", "BGq")}
    expansions = {model: s.expand(truncation) for model, s in series.items()}
    em_check = cohomology.em_collapse_check(degs, truncation, ell)
    module_check = None
    if truncation >= cohomology.dim_g(degs):
        module_check = cohomology.module_rank_one_check(degs, truncation)
    else:
        warnings.append("TRUNCATION_BELOW_DIM")
    verdict = fundamental_class_verdict(datum, tau, ell, cap) if datum.label is not None else None
    order = None
    q_int = _as_integer(q)
    if q_int is not None and q_int >= 2 and tau.scalar is None and gcd(q_int, ell) == 1:
        order = group_order(datum, tau, q_int, cap)
    report = TezukaReport(
        untwisted=result,
        fixed_degrees=fixed_degrees,
        truncation=truncation,
        series=series,
        expansions=expansions,
        series_equal=series["LBG"] == series["BGq"],
        em_check=em_check,
        module_check=module_check,
        psiq=cohomology.psiq_action(degs, result.q_prime, ell),
        verdict=verdict,
        key=classification_key(result, cap),
        order=order,
        warnings=tuple(warnings),
    )
    logger.info("tezuka_report ell=%s degrees=%s checks_passed=%s", ell, list(degs), report.checks_passed)
    return report
