"""Enumeracao do grupo de Weyl, serie de Molien, graus e autovalores de torcao."""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from math import comb, prod

import numpy as np
from sympy import Matrix, multiplicity, primefactors

from lietype import lattice
from lietype.config import ENUMERATION_CAP
from lietype.cyclotomic import det_one_minus_t_batch, reduction_matrix
from lietype.errors import AppError, fail
from lietype.rootdata import (
    DatumAutomorphism,
    DatumLabel,
    RootDatum,
    expected_weyl_order,
    gl_datum,
    make_automorphism,
    simple_datum,
)
from lietype.series import PoincareSeries, extract_degrees, inverse_series, one_minus_power

logger = logging.getLogger("lietype")

# graus tabelados: E7 e E8 passam do limite de enumeracao padrao
DEGREE_TABLE: dict[tuple[str, int], tuple[int, ...]] = {
    ("E", 7): (2, 6, 8, 10, 12, 14, 18),
    ("E", 8): (2, 8, 12, 14, 18, 20, 24, 30),
}
_TABLE_CHECKS = {("E", 7): (2903040, 63), ("E", 8): (696729600, 120)}


def _check_degree_table() -> None:
    for key, degs in DEGREE_TABLE.items():
        order, reflections = _TABLE_CHECKS[key]
        if prod(degs) != order or sum(d - 1 for d in degs) != reflections:
            raise RuntimeError(f"degree table inconsistent for {key}")


_check_degree_table()


@dataclass(frozen=True, eq=False)
class WeylEnumeration:
    """Todos os elementos de W como pilha (N, r, r); residuos quando modulus != None."""

    rank: int
    elements: np.ndarray
    modulus: int | None = None

    @property
    def order(self) -> int:
        return int(self.elements.shape[0])

    def key(self, matrix: np.ndarray, modulus: int | None = None) -> bytes:
        reduced = lattice.reduce(np.asarray(matrix, dtype=np.int64), modulus or self.modulus)
        return np.ascontiguousarray(reduced, dtype=np.int64).tobytes()

    def keys(self, modulus: int | None = None) -> frozenset[bytes]:
        cache_name = f"_keys_{modulus}"
        cached = self.__dict__.get(cache_name)
        if cached is None:
            cached = frozenset(self.key(w, modulus) for w in self.elements)
            object.__setattr__(self, cache_name, cached)
        return cached

    def contains(self, matrix: np.ndarray, modulus: int | None = None) -> bool:
        return self.key(matrix, modulus) in self.keys(modulus)

    @classmethod
    def from_matrices(cls, rank: int, matrices: list[np.ndarray], modulus: int | None = None) -> WeylEnumeration:
        seen: dict[bytes, np.ndarray] = {}
        for matrix in matrices:
            reduced = np.ascontiguousarray(lattice.reduce(np.asarray(matrix, dtype=np.int64), modulus))
            seen.setdefault(reduced.tobytes(), reduced)
        stack = np.stack(list(seen.values())) if seen else np.zeros((0, rank, rank), dtype=np.int64)
        return cls(rank, stack.reshape(len(seen), rank, rank), modulus)


@dataclass(frozen=True)
class DegreeData:
    degrees: tuple[int, ...]
    weyl_order: int
    reflection_count: int
    eigenvalues: tuple[tuple[int, Fraction], ...] | None = None

    def to_payload(self) -> dict:
        payload = {
            "degrees": list(self.degrees),
            "weyl_order": self.weyl_order,
            "reflection_count": self.reflection_count,
        }
        if self.eigenvalues is not None:
            payload["eigenvalues"] = [[d, str(eps)] for d, eps in self.eigenvalues]
        return payload


def _cap_exceeded(cap: int, count: int, expected: int | None = None) -> AppError:
    logger.warning("enumeration_cap cap=%s count=%s expected=%s", cap, count, expected)
    error = fail("CAP_EXCEEDED", cap=cap, count=count)
    if expected is not None:
        error.details["expected"] = expected
    return error


def enumerate_weyl(datum: RootDatum, cap: int | None = None) -> WeylEnumeration:
    """Busca em largura a partir de I pelos geradores."""
    cap = ENUMERATION_CAP if cap is None else cap
    if datum.label is not None and datum.modulus is None:
        expected = expected_weyl_order(datum.label)
        if expected > cap:
            raise _cap_exceeded(cap, 0, expected)
    r, modulus = datum.rank, datum.modulus
    generators = datum.generator_arrays()
    identity = np.eye(r, dtype=np.int64)
    seen = {np.ascontiguousarray(identity).tobytes()}
    elements = [identity]
    frontier = identity[None, ...]
    while frontier.shape[0]:
        fresh = []
        for g in generators:
            products = lattice.reduce(g @ frontier, modulus)
            for w in products:
                w = np.ascontiguousarray(w)
                key = w.tobytes()
                if key in seen:
                    continue
                if len(elements) >= cap:
                    raise _cap_exceeded(cap, len(elements))
                seen.add(key)
                elements.append(w)
                fresh.append(w)
        frontier = np.stack(fresh) if fresh else np.zeros((0, r, r), dtype=np.int64)
    logger.debug("weyl_enumerated rank=%s order=%s", r, len(elements))
    return WeylEnumeration(r, np.stack(elements).reshape(len(elements), r, r), modulus)


def _require_integral(enumeration: WeylEnumeration) -> None:
    if enumeration.modulus is not None:
        raise fail("INVALID_INPUT", status_code=400, reason="Molien series needs an integral group")


def _denominator_counts(stack: np.ndarray) -> Counter:
    if stack.shape[0] == 0:
        return Counter()
    dens = det_one_minus_t_batch(np.asarray(stack, dtype=np.int64))
    return Counter(tuple(int(c) for c in row) for row in dens)


def molien_series(enumeration: WeylEnumeration) -> PoincareSeries:
    """(1/|W|) Sum_w 1/det(1 - t w), reduzida."""
    _require_integral(enumeration)
    return PoincareSeries.weighted_inverse_sum(_denominator_counts(enumeration.elements), enumeration.order)


def twisted_molien(enumeration: WeylEnumeration, phi: DatumAutomorphism) -> PoincareSeries:
    """(1/|W|) Sum_w 1/det(1 - t phi w); phi precisa ser inteiro."""
    _require_integral(enumeration)
    if not phi.is_integral:
        raise fail("INVALID_INPUT", status_code=400, reason="twisted Molien series needs an integral automorphism")
    stack = phi.array()[None, ...] @ enumeration.elements
    return PoincareSeries.weighted_inverse_sum(_denominator_counts(stack), enumeration.order)


def _reflection_denominator(rank: int) -> tuple[int, ...]:
    """(1 - t)^(rank-1) * (1 + t)."""
    coeffs = np.array([1, 1], dtype=np.int64)
    for _ in range(rank - 1):
        coeffs = np.convolve(coeffs, [1, -1])
    return tuple(int(c) for c in coeffs)


def count_reflections(enumeration: WeylEnumeration) -> int:
    if enumeration.rank == 0:
        return 0
    if enumeration.modulus is None:
        target = _reflection_denominator(enumeration.rank)
        return _denominator_counts(enumeration.elements).get(target, 0)
    identity = np.eye(enumeration.rank, dtype=np.int64)
    return sum(
        1
        for w in enumeration.elements
        if lattice.rank(np.mod(w - identity, enumeration.modulus), enumeration.modulus) == 1
    )


def _degrees_from_series(series: PoincareSeries) -> list[int]:
    if series.numerator != (1,):
        raise fail("NORMALIZATION_FAILED")
    den = series.denominator_poly
    found: list[int] = []
    k = den.degree()
    while den.degree() > 0 and k >= 1:
        quotient, remainder = den.div(one_minus_power(k))
        if remainder.is_zero:
            found.append(k)
            den = quotient
        else:
            k -= 1
    if den.degree() != 0:
        raise fail("NORMALIZATION_FAILED")
    return sorted(found)


def _check_degrees(degs: list[int], order: int, reflections: int) -> None:
    if prod(degs) != order or sum(d - 1 for d in degs) != reflections:
        logger.error("degree_check_failed degrees=%s order=%s reflections=%s", degs, order, reflections)
        raise fail("NORMALIZATION_FAILED", status_code=500)


def enumeration_degrees(enumeration: WeylEnumeration) -> DegreeData:
    if enumeration.modulus is not None:
        return _modular_degrees(enumeration)
    degs = _degrees_from_series(molien_series(enumeration))
    reflections = count_reflections(enumeration)
    _check_degrees(degs, enumeration.order, reflections)
    return DegreeData(tuple(degs), enumeration.order, reflections)


def degrees(datum: RootDatum, cap: int | None = None) -> DegreeData:
    try:
        enumeration = enumerate_weyl(datum, cap)
    except AppError as exc:
        if exc.code != "CAP_EXCEEDED" or datum.label is None or datum.modulus is not None:
            raise
        return _degrees_from_label(datum.label, cap)
    return enumeration_degrees(enumeration)


def _degrees_from_label(label: DatumLabel, cap: int | None) -> DegreeData:
    """Uniao fator a fator: tabela para E7/E8, enumeracao para o resto."""
    degs: list[int] = []
    order = 1
    reflections = 0
    for factor in label.factors:
        key = (factor.kind, factor.rank)
        if key in DEGREE_TABLE:
            part = DEGREE_TABLE[key]
            part_order, part_reflections = _TABLE_CHECKS[key]
        elif factor.kind == "T":
            part, part_order, part_reflections = (1,) * factor.rank, 1, 0
        else:
            datum = gl_datum(factor.rank) if factor.kind == "GL" else simple_datum(factor.kind, factor.rank, factor.isogeny or "sc")
            data = enumeration_degrees(enumerate_weyl(datum, cap))
            part, part_order, part_reflections = data.degrees, data.weyl_order, data.reflection_count
        degs.extend(part)
        order *= part_order
        reflections += part_reflections
    logger.info("degrees_from_table label=%s", label.text)
    return DegreeData(tuple(sorted(degs)), order, reflections)


def _residue_denominator(matrix: np.ndarray, modulus: int) -> tuple[int, ...]:
    """det(I - t w) mod modulus pelo polinomio caracteristico sem divisoes."""
    charpoly = Matrix(matrix.tolist()).charpoly().all_coeffs()
    return tuple(int(c) % modulus for c in charpoly)


def _modular_degrees(enumeration: WeylEnumeration) -> DegreeData:
    """Graus de um grupo de pseudo-reflexoes sobre Z_ell dado por residuos.

    Os coeficientes c_n da serie de Molien sao inteiros entre 0 e
    binom(n + r - 1, r - 1); recupero-os de |N| * c_n mod ell^k enquanto
    essa cota couber na precisao que sobra.
    """
    modulus, r, order = enumeration.modulus, enumeration.rank, enumeration.order
    prime = primefactors(modulus)[0]
    precision = int(multiplicity(prime, modulus))
    lost = int(multiplicity(prime, order))
    if lost >= precision:
        raise fail("PRECISION_TOO_LOW", precision=precision)
    reflections = count_reflections(enumeration)
    if r == 0:
        return DegreeData((), order, reflections)
    remaining = prime ** (precision - lost)
    horizon = 0
    while horizon < order and comb(horizon + 1 + r - 1, r - 1) < remaining:
        horizon += 1
    counts = Counter(_residue_denominator(w, modulus) for w in enumeration.elements)
    sums = [0] * (horizon + 1)
    for den, count in counts.items():
        for n, value in enumerate(inverse_series(den, horizon, modulus)):
            sums[n] = (sums[n] + count * value) % modulus
    unit_inverse = pow(order // prime**lost, -1, remaining)
    coeffs = []
    for value in sums:
        if value % prime**lost:
            raise fail("PRECISION_TOO_LOW", precision=precision)
        coeffs.append((value // prime**lost) * unit_inverse % remaining)
    degs = extract_degrees(coeffs, r)
    if degs is None or prod(degs) != order:
        logger.warning("modular_degrees_incomplete horizon=%s order=%s", horizon, order)
        raise fail("PRECISION_TOO_LOW", precision=precision)
    _check_degrees(sorted(degs), order, reflections)
    return DegreeData(tuple(sorted(degs)), order, reflections)


# ─── Autovalores de torcao ───────────────────────────────────────────────────


def _fit_eigenvalues(series: PoincareSeries, degs: tuple[int, ...], order: int) -> list[tuple[int, int]] | None:
    """Multiconjuntos de expoentes a (mod order) por grau com Prod 1/(1 - x^a t^d) = serie."""
    if not degs:
        return [] if series.numerator == series.denominator == (1,) else None
    horizon = sum(degs) + max(degs)
    target = series.expand(horizon)
    reduction = reduction_matrix(order)
    groups = sorted(Counter(degs).items())

    def agrees(table: np.ndarray, limit: int) -> bool:
        diff = table[: limit + 1].astype(object)
        diff[:, 0] -= np.array(target[: limit + 1], dtype=object)
        return not np.any(diff.dot(reduction) != 0)

    def extend(table: np.ndarray, d: int, a: int) -> np.ndarray:
        out = table.copy()
        for n in range(d, horizon + 1):
            out[n] += np.roll(out[n - d], a)
        return out

    def search(index: int, table: np.ndarray) -> list[tuple[int, int]] | None:
        if index == len(groups):
            return [] if agrees(table, horizon) else None
        d, mult = groups[index]
        limit = groups[index + 1][0] - 1 if index + 1 < len(groups) else horizon
        for combo in combinations_with_replacement(range(order), mult):
            candidate = table
            for a in combo:
                candidate = extend(candidate, d, a)
            if agrees(candidate, limit):
                rest = search(index + 1, candidate)
                if rest is not None:
                    return [(d, a) for a in combo] + rest
        return None

    start = np.zeros((horizon + 1, order), dtype=object)
    start[0, 0] = 1
    return search(0, start)


def twisting_eigenvalues(
    enumeration: WeylEnumeration,
    phi: DatumAutomorphism,
    degree_data: DegreeData | None = None,
) -> list[tuple[int, Fraction]]:
    """Pares (d_i, eps_i) com eps_i = exp(2 pi i * fracao).

    Uma parte escalar zeta de ordem e multiplica eps_i por omega_e^{d_i}.
    """
    _require_integral(enumeration)
    degree_data = degree_data or enumeration_degrees(enumeration)
    integral = phi if phi.scalar is None else _integral_part(phi)
    order = integral.order
    if order is None:
        raise fail("INVALID_INPUT", status_code=400, reason="automorphism of infinite order")
    fitted = _fit_eigenvalues(twisted_molien(enumeration, integral), degree_data.degrees, order)
    if fitted is None:
        raise fail("NO_CONSISTENT_EIGENVALUES")
    shift = phi.scalar_order()
    pairs = [(d, (Fraction(a, order) + Fraction(d, shift)) % 1) for d, a in fitted]
    return sorted(pairs)


def _integral_part(phi: DatumAutomorphism) -> DatumAutomorphism:
    return make_automorphism(phi.array(), kind=phi.kind)


def springer_rank(enumeration: WeylEnumeration, phi: DatumAutomorphism) -> int:
    """Numero de autovalores de torcao iguais a 1 (invariante da classe W*phi)."""
    return sum(1 for _, eps in twisting_eigenvalues(enumeration, phi) if eps == 0)


# ─── Classes laterais ────────────────────────────────────────────────────────


def is_inner(enumeration: WeylEnumeration, phi: DatumAutomorphism) -> bool:
    modulus = phi.modulus if enumeration.modulus is None else enumeration.modulus
    return enumeration.contains(phi.residue_array(), modulus)


def outer_order(enumeration: WeylEnumeration, phi: DatumAutomorphism) -> int:
    """Menor n com phi^n em W."""
    if phi.order is None:
        raise fail("INVALID_INPUT", status_code=400, reason="automorphism of infinite order")
    modulus = phi.modulus if enumeration.modulus is None else enumeration.modulus
    base = phi.residue_array()
    power = base
    for n in range(1, phi.order + 1):
        if enumeration.contains(power, modulus):
            return n
        power = lattice.matmul_mod(power, base, modulus)
    return phi.order
