"""Polinomios caracteristicos de matrizes de ordem finita e aneis ciclotomicos."""

from __future__ import annotations

from functools import lru_cache
from math import lcm

import numpy as np
from sympy import Poly, Symbol, ZZ, cyclotomic_poly, primefactors, totient

from lietype.lattice import IntMatrix, is_identity, matpow_mod

x = Symbol("x")


def det_one_minus_t(matrix: IntMatrix) -> tuple[int, ...]:
    """Coeficientes crescentes de det(I - t*M) pelas identidades de Newton."""
    return tuple(int(c) for c in det_one_minus_t_batch(np.asarray(matrix, dtype=object)[None, ...])[0])


def det_one_minus_t_batch(stack: np.ndarray) -> np.ndarray:
    """det(I - t*M) para uma pilha (N, r, r); dtype int64 ou object."""
    count, size = stack.shape[0], stack.shape[1]
    dtype = stack.dtype if stack.dtype == object else np.int64
    traces = np.zeros((count, size + 1), dtype=dtype)
    power = stack
    for k in range(1, size + 1):
        traces[:, k] = np.trace(power, axis1=1, axis2=2)
        if k < size:
            power = power @ stack
    elementary = np.zeros((count, size + 1), dtype=dtype)
    elementary[:, 0] = 1
    for k in range(1, size + 1):
        acc = np.zeros(count, dtype=dtype)
        for i in range(1, k + 1):
            sign = 1 if i % 2 == 1 else -1
            acc = acc + sign * elementary[:, k - i] * traces[:, i]
        elementary[:, k] = acc // k
    signs = np.array([(-1) ** k for k in range(size + 1)], dtype=dtype)
    return elementary * signs


@lru_cache(maxsize=None)
def _candidates(degree: int) -> tuple[int, ...]:
    # phi(m) >= sqrt(m/2), entao m <= 2*degree^2 cobre tudo
    return tuple(m for m in range(1, 2 * degree * degree + 3) if totient(m) <= degree)


@lru_cache(maxsize=None)
def _phi_t(m: int) -> Poly:
    return Poly(cyclotomic_poly(m, x), x, domain=ZZ)


@lru_cache(maxsize=65536)
def cyclotomic_profile(coeffs: tuple[int, ...]) -> tuple[tuple[int, int], ...] | None:
    """Multiplicidade de cada Phi_m em det(I - t*M); None se sobra fator nao ciclotomico.

    As raizes de det(I - tM) sao os inversos dos autovalores, e Phi_m e
    estavel por inversao, entao as multiplicidades sao as do polinomio
    caracteristico.
    """
    poly = Poly(list(reversed(coeffs)), x, domain=ZZ)
    degree = poly.degree()
    profile: list[tuple[int, int]] = []
    if degree <= 0:
        return ()
    for m in _candidates(degree):
        factor = _phi_t(m)
        count = 0
        while poly.degree() >= factor.degree():
            quotient, remainder = poly.div(factor)
            if not remainder.is_zero:
                break
            poly = quotient
            count += 1
        if count:
            profile.append((m, count))
        if poly.degree() == 0:
            break
    if poly.degree() != 0:
        return None
    return tuple(profile)


def order_from_profile(profile: tuple[tuple[int, int], ...] | None) -> int | None:
    if profile is None:
        return None
    return lcm(1, *(m for m, _ in profile))


def eigen_multiplicity(profile: tuple[tuple[int, int], ...] | None, m: int) -> int:
    """Multiplicidade de cada raiz primitiva m-esima (todas iguais por Galois)."""
    if not profile:
        return 0
    return dict(profile).get(m, 0)


def integral_order(matrix: IntMatrix) -> int | None:
    matrix = np.asarray(matrix, dtype=object)
    if matrix.shape[0] == 0:
        return 1
    candidate = order_from_profile(cyclotomic_profile(det_one_minus_t(matrix)))
    if candidate is None or not is_identity(matpow_mod(matrix, candidate, None)):
        return None
    return candidate


def modular_order(matrix: IntMatrix, modulus: int, bound: int) -> int | None:
    """Menor d | bound com matrix^d = I mod modulus."""
    matrix = np.mod(np.asarray(matrix, dtype=np.int64), modulus)
    if not is_identity(matpow_mod(matrix, bound, modulus), modulus):
        return None
    order = bound
    for p in primefactors(bound):
        while order % p == 0 and is_identity(matpow_mod(matrix, order // p, modulus), modulus):
            order //= p
    return order


# ─── Anel de grupo Z[C_M] modulo Phi_M ───────────────────────────────────────


@lru_cache(maxsize=None)
def reduction_matrix(m: int) -> np.ndarray:
    """Linha a: coordenadas de x^a mod Phi_M na base 1, x, ..., x^(phi(M)-1)."""
    phi = _phi_t(m)
    width = phi.degree()
    rows = np.zeros((m, width), dtype=object)
    for a in range(m):
        remainder = Poly(x**a, x, domain=ZZ).rem(phi)
        for power, coeff in zip(range(remainder.degree(), -1, -1), remainder.all_coeffs()):
            rows[a, power] = int(coeff)
    return rows
