"""Forma normal de Smith e operacoes de reticulado (sobre Z ou Z/ell^k)."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, isqrt

import numpy as np
from sympy import Matrix
from sympy.polys.domains import ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import smith_normal_decomp

IntMatrix = np.ndarray

INT64_MAX = int(np.iinfo(np.int64).max)


def max_modulus(rank: int) -> int:
    """Maior m com rank * (m - 1)^2 <= INT64_MAX: produtos r x r de residuos mod m cabem em int64."""
    return isqrt(INT64_MAX // max(rank, 1)) + 1


def reduce(matrix: IntMatrix, modulus: int | None) -> IntMatrix:
    return matrix if modulus is None else np.mod(matrix, modulus)


def _to_domain(matrix: IntMatrix) -> DomainMatrix:
    rows, cols = matrix.shape
    entries = [[ZZ(int(value)) for value in row] for row in matrix.tolist()]
    return DomainMatrix(entries, (rows, cols), ZZ)


def _to_array(dm: DomainMatrix, modulus: int | None = None) -> IntMatrix:
    rows, cols = dm.shape
    values = [[int(value) for value in row] for row in dm.to_list()]
    if modulus is not None:
        values = [[value % modulus for value in row] for row in values]
    return np.array(values, dtype=object if modulus is None else np.int64).reshape(rows, cols)


@dataclass(frozen=True, eq=False)
class SmithForm:
    """left @ matrix @ right = diag(diagonal), com left e right unimodulares."""

    diagonal: tuple[int, ...]
    left: IntMatrix
    right: IntMatrix
    shape: tuple[int, int]

    def kernel_indices(self, modulus: int | None = None) -> tuple[int, ...]:
        rows, cols = self.shape
        found = []
        for j in range(cols):
            if j >= rows:
                found.append(j)
                continue
            d = self.diagonal[j]
            if d == 0 or (modulus is not None and d % modulus == 0):
                found.append(j)
        return tuple(found)

    def rank(self, modulus: int | None = None) -> int:
        return self.shape[1] - len(self.kernel_indices(modulus))


def smith(matrix: IntMatrix) -> SmithForm:
    matrix = np.asarray(matrix)
    rows, cols = matrix.shape
    if rows == 0 or cols == 0:
        return SmithForm((), np.eye(rows, dtype=object), np.eye(cols, dtype=object), (rows, cols))
    smf, left, right = smith_normal_decomp(_to_domain(matrix))
    values = smf.to_list()
    diagonal = tuple(abs(int(values[i][i])) for i in range(min(rows, cols)))
    return SmithForm(diagonal, _to_array(left), _to_array(right), (rows, cols))


def unimodular_inverse(matrix: IntMatrix) -> IntMatrix:
    size = matrix.shape[0]
    if size == 0:
        return np.eye(0, dtype=object)
    inverse = Matrix(matrix.tolist()).inv()
    return np.array([[int(value) for value in inverse.row(i)] for i in range(size)], dtype=object).reshape(size, size)


def rank(matrix: IntMatrix, modulus: int | None = None) -> int:
    return smith(matrix).rank(modulus)


@dataclass(frozen=True, eq=False)
class KernelData:
    basis: IntMatrix
    projector: IntMatrix
    kernel_index: tuple[int, ...]


def saturated_kernel(matrix: IntMatrix, modulus: int | None = None) -> KernelData:
    """Nucleo saturado de matrix via as colunas de right da forma de Smith.

    x pertence ao nucleo sse (projector @ x)_i = 0 para i fora de kernel_index;
    as coordenadas de x na base devolvida sao (projector @ x)[kernel_index].
    """
    form = smith(matrix)
    index = form.kernel_indices(modulus)
    right = form.right
    projector = unimodular_inverse(right)
    if modulus is not None:
        right = np.mod(right, modulus)
        projector = np.mod(projector, modulus)
    cols = form.shape[1]
    basis = np.asarray(right[:, list(index)], dtype=np.int64).reshape(cols, len(index))
    return KernelData(basis, np.asarray(projector, dtype=np.int64).reshape(cols, cols), index)


def span_contains(basis: IntMatrix, vector, modulus: int | None = None) -> bool:
    """vector esta no Z-span (ou no span mod m) das colunas de basis?"""
    basis = np.asarray(basis)
    target = np.asarray(vector, dtype=object).reshape(-1)
    rows, cols = basis.shape
    if cols == 0:
        return all(int(v) % modulus == 0 if modulus else int(v) == 0 for v in target)
    form = smith(basis)
    image = form.left.dot(target)
    for i in range(rows):
        value = int(image[i])
        d = form.diagonal[i] if i < len(form.diagonal) else 0
        if modulus is not None:
            d = gcd(d, modulus)
            value %= modulus
        if d == 0:
            if value != 0:
                return False
        elif value % d != 0:
            return False
    return True


def elementary_divisors(basis: IntMatrix, ambient: int, modulus: int | None = None) -> list[int]:
    """Fatores invariantes de Z^ambient / span(basis); 1 omitido, 0 para parte livre.

    No caso modular so a parte ell-primaria sobrevive; divisores com
    valoracao >= k viram 0.
    """
    basis = np.asarray(basis)
    basis = basis.reshape(ambient, basis.size // ambient if ambient else 0)
    form = smith(basis)
    divisors = list(form.diagonal) + [0] * (ambient - len(form.diagonal))
    result = []
    for d in divisors:
        if modulus is not None:
            d = gcd(d, modulus)
            if d == modulus:
                d = 0
        if d != 1:
            result.append(d)
    return sorted(result, key=lambda d: (d == 0, d))


def matmul_mod(a: IntMatrix, b: IntMatrix, modulus: int | None) -> IntMatrix:
    product = a @ b
    return product if modulus is None else np.mod(product, modulus)


def matpow_mod(matrix: IntMatrix, exponent: int, modulus: int | None) -> IntMatrix:
    size = matrix.shape[0]
    result = np.eye(size, dtype=matrix.dtype if matrix.dtype == object else np.int64)
    base = matrix
    while exponent:
        if exponent & 1:
            result = matmul_mod(result, base, modulus)
        exponent >>= 1
        if exponent:
            base = matmul_mod(base, base, modulus)
    return result


def is_identity(matrix: IntMatrix, modulus: int | None = None) -> bool:
    size = matrix.shape[0]
    diff = np.asarray(matrix, dtype=object) - np.eye(size, dtype=object)
    if modulus is not None:
        diff = np.mod(diff, modulus)
    return not np.any(diff != 0)
