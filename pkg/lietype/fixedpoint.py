"""Reticulado fixo, melhor levantamento w*tau, grupo de Weyl relativo e datum fixo."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from lietype import lattice
from lietype.cyclotomic import (
    cyclotomic_profile,
    det_one_minus_t_batch,
    eigen_multiplicity,
    order_from_profile,
)
from lietype.errors import fail
from lietype.invariants import (
    WeylEnumeration,
    count_reflections,
    enumerate_weyl,
    springer_rank,
)
from lietype.padic import check_prime
from lietype.rootdata import DatumAutomorphism, RootDatum, freeze, make_automorphism, validate

logger = logging.getLogger("lietype")


@dataclass(frozen=True, eq=False)
class Sublattice:
    """Sub-reticulado saturado de Z^r (ou (Z/ell^k)^r) com base em colunas.

    projector leva Z^r para as coordenadas da base de Smith; x esta em S sse
    (projector @ x) se anula fora de kernel_index.
    """

    ambient_rank: int
    basis: np.ndarray
    projector: np.ndarray
    kernel_index: tuple[int, ...]
    modulus: int | None = None
    saturated: bool = True

    @property
    def rank(self) -> int:
        return len(self.kernel_index)

    @property
    def _outside(self) -> list[int]:
        return [i for i in range(self.ambient_rank) if i not in self.kernel_index]

    def contains(self, vector) -> bool:
        image = lattice.reduce(self.projector @ np.asarray(vector, dtype=np.int64), self.modulus)
        return not np.any(image[self._outside] != 0)

    def coordinates(self, vector) -> np.ndarray:
        if not self.contains(vector):
            raise fail("INVALID_INPUT", status_code=400, reason="vector outside the sublattice")
        image = lattice.reduce(self.projector @ np.asarray(vector, dtype=np.int64), self.modulus)
        return image[list(self.kernel_index)]

    def restrict_all(self, stack: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Para cada w da pilha: (estabiliza S?, matriz s x s de w|S)."""
        moved = lattice.reduce(self.projector[None, ...] @ stack, self.modulus)
        images = lattice.reduce(moved @ self.basis[None, ...], self.modulus)
        outside = images[:, self._outside, :]
        stable = ~np.any(outside.reshape(stack.shape[0], -1) != 0, axis=1)
        return stable, images[:, list(self.kernel_index), :]


def fixed_lattice(phi: DatumAutomorphism, check_stability: bool = True) -> Sublattice:
    """L^phi = ker(phi - 1), saturado; mod ell^k quando phi tem parte escalar."""
    r = phi.rank
    identity = np.eye(r, dtype=np.int64)
    modulus = phi.modulus
    moved = lattice.reduce(phi.residue_array() - identity, modulus)
    kernel = lattice.saturated_kernel(moved, modulus)
    if check_stability and phi.scalar is not None:
        higher = phi.scalar.at_precision(phi.scalar.precision + 2)
        moved_high = np.mod(phi.array() * higher.residue - identity, higher.modulus)
        rank_high = r - lattice.rank(moved_high, higher.modulus)
        if rank_high != len(kernel.kernel_index):
            raise fail("PRECISION_UNSTABLE_RANK", rank_low=len(kernel.kernel_index), rank_high=rank_high)
    return Sublattice(r, kernel.basis, kernel.projector, kernel.kernel_index, modulus)


def maximal_lifts(
    datum: RootDatum,
    tau: DatumAutomorphism,
    ell: int,
    enumeration: WeylEnumeration | None = None,
) -> list[DatumAutomorphism]:
    """Todos os w*tau de ordem prima com ell e posto fixo maximo, pela ordem das matrizes."""
    check_prime(ell)
    if datum.modulus is not None:
        raise fail("INVALID_INPUT", status_code=400, reason="lifts are searched over integral data")
    enumeration = enumeration or enumerate_weyl(datum)
    zeta_order = tau.scalar_order()
    stack = enumeration.elements @ tau.array()[None, ...]
    dens = det_one_minus_t_batch(stack)
    best_rank = -1
    ranked: list[tuple[tuple[int, ...], int]] = []
    for index, den in enumerate(dens):
        profile = cyclotomic_profile(tuple(int(c) for c in den))
        order = order_from_profile(profile)
        if order is None or order % ell == 0:
            continue
        fixed_rank = eigen_multiplicity(profile, zeta_order)
        if fixed_rank < best_rank:
            continue
        if fixed_rank > best_rank:
            best_rank, ranked = fixed_rank, []
        candidate = stack[index] if tau.scalar is None else np.mod(stack[index] * tau.scalar.residue, tau.modulus)
        ranked.append((tuple(int(v) for v in candidate.reshape(-1)), index))
    if not ranked:
        raise fail("NO_PRIME_ORDER_LIFT", ell=ell)
    lifts = []
    for _, index in sorted(ranked):
        inner = enumeration.elements[index]
        kind = tau.kind if lattice.is_identity(inner) else "composite"
        lifts.append(make_automorphism(stack[index], scalar=tau.scalar, kind=kind))
    logger.debug("maximal_lifts rank=%s count=%s", best_rank, len(lifts))
    return lifts


def best_lift(
    datum: RootDatum,
    tau: DatumAutomorphism,
    ell: int,
    enumeration: WeylEnumeration | None = None,
) -> DatumAutomorphism:
    """phi = w*tau de ordem prima com ell e posto fixo maximo; empate pela menor matriz."""
    return maximal_lifts(datum, tau, ell, enumeration)[0]


def relative_weyl(enumeration: WeylEnumeration, sub: Sublattice) -> WeylEnumeration:
    """N_W(S)/C_W(S) como o conjunto das restricoes distintas a S."""
    stable, restricted = sub.restrict_all(enumeration.elements)
    return WeylEnumeration.from_matrices(sub.rank, list(restricted[stable]), sub.modulus)


def _reflections(relative: WeylEnumeration) -> list[np.ndarray]:
    s = relative.rank
    identity = np.eye(s, dtype=np.int64)
    return [
        w
        for w in relative.elements
        if lattice.rank(lattice.reduce(w - identity, relative.modulus), relative.modulus) == 1
    ]


def _coroots_in(datum: RootDatum, sub: Sublattice) -> np.ndarray:
    """Base de L_0 intersecao S nas coordenadas de S."""
    coroots = datum.coroot_array()
    image = lattice.reduce(sub.projector @ coroots, sub.modulus)
    outside = image[sub._outside, :]
    kernel = lattice.saturated_kernel(outside, sub.modulus).basis
    return lattice.reduce(image[list(sub.kernel_index), :] @ kernel, sub.modulus)


@dataclass(frozen=True, eq=False)
class FixedPointData:
    datum: RootDatum
    lift: DatumAutomorphism
    sublattice: Sublattice
    relative: WeylEnumeration
    springer: int


def fixed_point_of_lift(
    datum: RootDatum,
    enumeration: WeylEnumeration,
    lift: DatumAutomorphism,
    cap: int | None = None,
) -> tuple[RootDatum, Sublattice, WeylEnumeration]:
    """(datum fixo, L^phi, W') para um levantamento ja escolhido."""
    sub = fixed_lattice(lift)
    relative = relative_weyl(enumeration, sub)
    generators = _reflections(relative)
    coroots = _coroots_in(datum, sub)
    fixed = RootDatum(
        rank=sub.rank,
        weyl_generators=tuple(freeze(g) for g in generators),
        coroot_basis=freeze(coroots) if coroots.shape[1] else tuple(() for _ in range(sub.rank)),
        modulus=sub.modulus,
    )
    generated = enumerate_weyl(fixed, cap)
    if generated.order != relative.order:
        raise fail("RELATIVE_WEYL_NOT_GENERATED", status_code=500, order=relative.order, generated=generated.order)
    violations = validate(fixed)
    if violations:
        logger.error("fixed_datum_invalid codes=%s", [v.code for v in violations])
        raise fail("RELATIVE_WEYL_NOT_GENERATED", status_code=500, order=relative.order, generated=generated.order)
    return fixed, sub, relative


def compute_fixed_point(
    datum: RootDatum,
    tau: DatumAutomorphism,
    ell: int,
    cap: int | None = None,
    check_springer: bool = True,
    enumeration: WeylEnumeration | None = None,
) -> FixedPointData:
    enumeration = enumeration or enumerate_weyl(datum, cap)
    lift = best_lift(datum, tau, ell, enumeration)
    fixed, sub, relative = fixed_point_of_lift(datum, enumeration, lift, cap)
    springer = springer_rank(enumeration, tau) if check_springer else sub.rank
    if springer != sub.rank:
        raise fail("SPRINGER_MISMATCH", status_code=500, rank=sub.rank, springer=springer)
    logger.info(
        "fixed_datum rank=%s relative_order=%s reflections=%s modulus=%s",
        sub.rank,
        relative.order,
        count_reflections(relative),
        sub.modulus,
    )
    return FixedPointData(fixed, lift, sub, relative, springer)


def fixed_datum(datum: RootDatum, tau: DatumAutomorphism, ell: int, cap: int | None = None) -> RootDatum:
    return compute_fixed_point(datum, tau, ell, cap).datum
