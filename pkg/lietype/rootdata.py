"""Root data inteiros (ou sobre Z/ell^k), automorfismos e validacao."""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from math import factorial, lcm

import numpy as np
from sympy import primefactors

from lietype import lattice
from lietype.cyclotomic import integral_order, modular_order
from lietype.errors import fail
from lietype.lattice import IntMatrix, max_modulus
from lietype.padic import PAdicUnit, as_unit, root_of_unity_order

logger = logging.getLogger("lietype")

Matrix = tuple[tuple[int, ...], ...]

SIMPLE_KINDS = ("A", "B", "C", "D", "E", "F", "G")


def freeze(array) -> Matrix:
    return tuple(tuple(int(v) for v in row) for row in np.asarray(array).tolist())


def thaw(matrix: Matrix, rows: int, cols: int) -> IntMatrix:
    return np.array(matrix, dtype=np.int64).reshape(rows, cols)


# ─── Rotulos ─────────────────────────────────────────────────────────────────


@dataclass(frozen=True)
class LabelFactor:
    kind: str
    rank: int
    isogeny: str | None = None

    @property
    def is_simple(self) -> bool:
        return self.kind in SIMPLE_KINDS

    @property
    def text(self) -> str:
        return f"{self.kind}{self.rank}{self.isogeny or ''}"


@dataclass(frozen=True)
class DatumLabel:
    factors: tuple[LabelFactor, ...]

    @property
    def torus_rank(self) -> int:
        return sum(f.rank for f in self.factors if f.kind == "T")

    @property
    def simple_factors(self) -> tuple[LabelFactor, ...]:
        return tuple(f for f in self.factors if f.is_simple)

    @property
    def text(self) -> str:
        return "*".join(f.text for f in self.factors) or "T0"


_SIMPLE_RE = re.compile(r"^([A-G])(\d+)(sc|ad)?$")
_TORUS_RE = re.compile(r"^T(\d+)$")
_GL_RE = re.compile(r"^GL(\d+)$")


def _check_simple(kind: str, n: int) -> None:
    valid = {
        "A": n >= 1,
        "B": n >= 2,
        "C": n >= 2,
        "D": n >= 3,
        "E": 6 <= n <= 8,
        "F": n == 4,
        "G": n == 2,
    }[kind]
    if not valid:
        raise fail("INVALID_TYPE", status_code=400, label=f"{kind}{n}")


# ─── Matrizes de Cartan ──────────────────────────────────────────────────────


def cartan_matrix(kind: str, n: int) -> list[list[int]]:
    """a_ij = <alpha_i^vee, alpha_j>, numeracao de Bourbaki a partir de 0."""
    _check_simple(kind, n)
    a = [[2 if i == j else 0 for j in range(n)] for i in range(n)]

    def link(i: int, j: int, aij: int = -1, aji: int = -1) -> None:
        a[i][j] = aij
        a[j][i] = aji

    if kind in "ABC":
        for i in range(n - 1):
            link(i, i + 1)
        if kind == "B":
            link(n - 2, n - 1, -1, -2)
        elif kind == "C":
            link(n - 2, n - 1, -2, -1)
    elif kind == "D":
        for i in range(n - 2):
            link(i, i + 1)
        link(n - 3, n - 1)
    elif kind == "E":
        link(0, 2)
        link(1, 3)
        for i in range(2, n - 1):
            link(i, i + 1)
    elif kind == "F":
        link(0, 1)
        link(1, 2, -1, -2)
        link(2, 3)
    elif kind == "G":
        link(0, 1, -3, -1)
    return a


# ─── Root datum ──────────────────────────────────────────────────────────────


def _check_modulus(modulus: int | None, rank: int) -> None:
    if modulus is not None and modulus > max_modulus(rank):
        raise fail("INVALID_INPUT", status_code=400, reason=f"modulus {modulus} too large for rank {rank}")


@dataclass(frozen=True)
class RootDatum:
    """Reticulado L = Z^rank, geradores de W e base do sub-reticulado L_0.

    coroot_basis tem forma rank x m (colunas). modulus = ell^k quando os
    dados sao residuos sobre Z_ell.
    """

    rank: int
    weyl_generators: tuple[Matrix, ...]
    coroot_basis: Matrix
    modulus: int | None = None
    label: DatumLabel | None = None

    def __post_init__(self) -> None:
        _check_modulus(self.modulus, self.rank)

    @property
    def coroot_rank(self) -> int:
        return len(self.coroot_basis[0]) if self.coroot_basis else 0

    @property
    def prime(self) -> int | None:
        return primefactors(self.modulus)[0] if self.modulus else None

    @property
    def precision(self) -> int | None:
        if not self.modulus:
            return None
        prime, k, m = self.prime, 0, self.modulus
        while m > 1:
            m //= prime
            k += 1
        return k

    def generator_arrays(self) -> list[IntMatrix]:
        return [thaw(g, self.rank, self.rank) for g in self.weyl_generators]

    def coroot_array(self) -> IntMatrix:
        return thaw(self.coroot_basis, self.rank, self.coroot_rank)


def _reflection_sc(cartan: list[list[int]], i: int) -> IntMatrix:
    n = len(cartan)
    s = np.eye(n, dtype=np.int64)
    for j in range(n):
        s[i, j] -= cartan[j][i]
    return s


def _reflection_ad(cartan: list[list[int]], i: int) -> IntMatrix:
    n = len(cartan)
    s = np.eye(n, dtype=np.int64)
    for k in range(n):
        s[k, i] -= cartan[i][k]
    return s


def simple_datum(kind: str, n: int, isogeny: str = "sc") -> RootDatum:
    if isogeny not in ("sc", "ad"):
        raise fail("INVALID_TYPE", status_code=400, label=f"{kind}{n}{isogeny}")
    cartan = cartan_matrix(kind, n)
    if isogeny == "sc":
        generators = [_reflection_sc(cartan, i) for i in range(n)]
        coroots = np.eye(n, dtype=np.int64)
    else:
        generators = [_reflection_ad(cartan, i) for i in range(n)]
        coroots = np.array(cartan, dtype=np.int64).T
    return RootDatum(
        rank=n,
        weyl_generators=tuple(freeze(g) for g in generators),
        coroot_basis=freeze(coroots),
        label=DatumLabel((LabelFactor(kind, n, isogeny),)),
    )


def torus_datum(r: int) -> RootDatum:
    return RootDatum(
        rank=r,
        weyl_generators=(),
        coroot_basis=tuple(() for _ in range(r)),
        label=DatumLabel((LabelFactor("T", r),)) if r else DatumLabel(()),
    )


def gl_datum(n: int) -> RootDatum:
    if n < 1:
        raise fail("INVALID_TYPE", status_code=400, label=f"GL{n}")
    generators = []
    for i in range(n - 1):
        s = np.eye(n, dtype=np.int64)
        s[[i, i + 1]] = s[[i + 1, i]]
        generators.append(freeze(s))
    coroots = np.zeros((n, n - 1), dtype=np.int64)
    for i in range(n - 1):
        coroots[i, i] = 1
        coroots[i + 1, i] = -1
    return RootDatum(
        rank=n,
        weyl_generators=tuple(generators),
        coroot_basis=freeze(coroots) if n > 1 else tuple(() for _ in range(n)),
        label=DatumLabel((LabelFactor("GL", n),)),
    )


def product(*data: RootDatum) -> RootDatum:
    moduli = {d.modulus for d in data}
    if len(moduli) > 1:
        raise fail("INVALID_INPUT", status_code=400, reason="product of data over different moduli")
    total = sum(d.rank for d in data)
    width = sum(d.coroot_rank for d in data)
    generators: list[Matrix] = []
    coroots = np.zeros((total, width), dtype=np.int64)
    row = col = 0
    for d in data:
        for g in d.generator_arrays():
            block = np.eye(total, dtype=np.int64)
            block[row : row + d.rank, row : row + d.rank] = g
            generators.append(freeze(block))
        coroots[row : row + d.rank, col : col + d.coroot_rank] = d.coroot_array()
        row += d.rank
        col += d.coroot_rank
    labels = [d.label for d in data]
    label = None
    if all(lab is not None for lab in labels):
        label = DatumLabel(tuple(f for lab in labels for f in lab.factors))
    return RootDatum(
        rank=total,
        weyl_generators=tuple(generators),
        coroot_basis=freeze(coroots) if width else tuple(() for _ in range(total)),
        modulus=moduli.pop(),
        label=label,
    )


def parse_label(text: str) -> RootDatum:
    """Le 'A2', 'D4sc', 'B3ad*T1', 'GL3', 'A1xA1'."""
    tokens = [tok for tok in re.split(r"[x*\s]+", text.strip()) if tok]
    if not tokens:
        raise fail("INVALID_TYPE", status_code=400, label=text)
    factors = []
    for token in tokens:
        if match := _SIMPLE_RE.match(token):
            factors.append(simple_datum(match.group(1), int(match.group(2)), match.group(3) or "sc"))
        elif match := _TORUS_RE.match(token):
            factors.append(torus_datum(int(match.group(1))))
        elif match := _GL_RE.match(token):
            factors.append(gl_datum(int(match.group(1))))
        else:
            raise fail("INVALID_TYPE", status_code=400, label=token)
    return factors[0] if len(factors) == 1 else product(*factors)


def block_offsets(label: DatumLabel) -> list[tuple[int, LabelFactor]]:
    offsets, row = [], 0
    for factor in label.factors:
        offsets.append((row, factor))
        row += factor.rank
    return offsets


_WEYL_ORDERS = {"G": 12, "F": 1152}
_E_ORDERS = {6: 51840, 7: 2903040, 8: 696729600}


def factor_weyl_order(factor: LabelFactor) -> int:
    n = factor.rank
    if factor.kind == "A":
        return factorial(n + 1)
    if factor.kind in "BC":
        return 2**n * factorial(n)
    if factor.kind == "D":
        return 2 ** (n - 1) * factorial(n)
    if factor.kind == "E":
        return _E_ORDERS[n]
    if factor.kind == "GL":
        return factorial(n)
    if factor.kind == "T":
        return 1
    return _WEYL_ORDERS[factor.kind]


def expected_weyl_order(label: DatumLabel) -> int:
    order = 1
    for factor in label.factors:
        order *= factor_weyl_order(factor)
    return order


# ─── Automorfismos ───────────────────────────────────────────────────────────


AUTOMORPHISM_KINDS = ("diagram", "scalar", "composite")


@dataclass(frozen=True)
class DatumAutomorphism:
    """Parte inteira `matrix` vezes o escalar opcional `scalar`.

    Escalares +-1 sao absorvidos na matriz; os demais ficam como unidade
    ell-adica e a matriz completa so existe mod ell^k.
    """

    matrix: Matrix
    scalar: PAdicUnit | None = None
    kind: str = "diagram"
    order: int | None = None
    modulus: int | None = None

    @property
    def rank(self) -> int:
        return len(self.matrix)

    def array(self) -> IntMatrix:
        return thaw(self.matrix, self.rank, self.rank)

    def residue_array(self) -> IntMatrix:
        base = self.array()
        if self.scalar is not None:
            base = base * self.scalar.residue
        return lattice.reduce(base, self.modulus)

    @property
    def is_integral(self) -> bool:
        return self.scalar is None and self.modulus is None

    def scalar_order(self) -> int:
        if self.scalar is None:
            return 1
        order = root_of_unity_order(self.scalar)
        if order is None:
            raise fail("INVALID_INPUT", status_code=400, reason="scalar part is not a root of unity")
        return order

    def to_payload(self) -> dict:
        return {
            "kind": self.kind,
            "matrix": [list(row) for row in self.matrix],
            "scalar": None if self.scalar is None else {
                "prime": self.scalar.prime,
                "precision": self.scalar.precision,
                "residue": self.scalar.residue,
            },
            "order": self.order,
        }


def modular_exponent_bound(rank: int, ell: int) -> int:
    """Expoente de todo elemento de ordem finita de GL_rank(Z_ell)."""
    bound = lcm(1, *(ell**j - 1 for j in range(1, rank + 1)))
    power = 1
    while power * (ell - 1) <= rank:
        power *= ell
    return bound * power


def _compute_order(matrix: IntMatrix, scalar: PAdicUnit | None, modulus: int | None) -> int | None:
    if modulus is None:
        return integral_order(matrix)
    full = lattice.reduce(matrix * (scalar.residue if scalar is not None else 1), modulus)
    if scalar is not None:
        zeta_order = root_of_unity_order(scalar)
        if zeta_order is None:
            return None
        base_order = integral_order(matrix)
        if base_order is not None:
            order = modular_order(full, modulus, lcm(zeta_order, base_order))
            if order is not None:
                return order
    return modular_order(full, modulus, modular_exponent_bound(matrix.shape[0], primefactors(modulus)[0]))


def make_automorphism(matrix, scalar: PAdicUnit | None = None, kind: str = "diagram", modulus: int | None = None) -> DatumAutomorphism:
    """modulus e o do datum (residuos); com escalar a parte inteira nao e reduzida."""
    array = np.asarray(matrix, dtype=np.int64)
    if scalar is not None and scalar.is_sign():
        array = array * scalar.signed()
        scalar = None
    if scalar is not None:
        if modulus is not None and modulus != scalar.modulus:
            raise fail("INVALID_INPUT", status_code=400, reason="scalar precision differs from the datum")
        modulus = scalar.modulus
        _check_modulus(modulus, array.shape[0])
    elif modulus is not None:
        array = np.mod(array, modulus)
    if kind not in AUTOMORPHISM_KINDS:
        raise fail("INVALID_INPUT", status_code=400, reason=f"automorphism kind {kind}")
    return DatumAutomorphism(
        matrix=freeze(array),
        scalar=scalar,
        kind=kind,
        order=_compute_order(array, scalar, modulus),
        modulus=modulus,
    )


def identity_automorphism(datum: RootDatum) -> DatumAutomorphism:
    return make_automorphism(np.eye(datum.rank, dtype=np.int64), kind="diagram", modulus=datum.modulus)


def _generator_keys(matrices, modulus: int | None) -> set[bytes]:
    return {np.ascontiguousarray(lattice.reduce(np.asarray(m, dtype=np.int64), modulus)).tobytes() for m in matrices}


def _preserves_coroots(datum: RootDatum, matrix: IntMatrix) -> bool:
    coroots = datum.coroot_array()
    image = lattice.reduce(matrix @ coroots, datum.modulus)
    if image.shape[1] == 0:
        return True
    forward = all(lattice.span_contains(coroots, image[:, j], datum.modulus) for j in range(image.shape[1]))
    backward = all(lattice.span_contains(image, coroots[:, j], datum.modulus) for j in range(coroots.shape[1]))
    return forward and backward


def permutation_normalizes(datum: RootDatum, matrix: IntMatrix) -> bool:
    """A matriz de permutacao conjuga as reflexoes simples entre si e fixa L_0."""
    gens = datum.generator_arrays()
    conjugates = [matrix @ g @ matrix.T for g in gens]
    if _generator_keys(conjugates, datum.modulus) != _generator_keys(gens, datum.modulus):
        return False
    return _preserves_coroots(datum, matrix)


def diagram_automorphism(datum: RootDatum, permutation: list[int]) -> DatumAutomorphism:
    """Permutacao de nos/coordenadas, permutation[i] = imagem de i (base 0)."""
    r = datum.rank
    if sorted(permutation) != list(range(r)):
        raise fail("NOT_A_DIAGRAM_SYMMETRY")
    matrix = np.zeros((r, r), dtype=np.int64)
    for i, image in enumerate(permutation):
        matrix[image, i] = 1
    if not permutation_normalizes(datum, matrix):
        raise fail("NOT_A_DIAGRAM_SYMMETRY")
    return make_automorphism(matrix, kind="diagram", modulus=datum.modulus)


def scalar_automorphism(
    datum: RootDatum,
    u: PAdicUnit | int | Fraction | str,
    ell: int | None = None,
    precision: int | None = None,
) -> DatumAutomorphism:
    """psi^u = u * I."""
    identity = np.eye(datum.rank, dtype=np.int64)
    if ell is None and not isinstance(u, PAdicUnit):
        try:
            value = Fraction(u)
        except (ValueError, ZeroDivisionError):
            value = None
        if value not in (1, -1):
            raise fail("INVALID_INPUT", status_code=400, reason="ell is required for a scalar other than +-1")
        return make_automorphism(identity * int(value), kind="scalar", modulus=datum.modulus)
    unit = as_unit(u, ell if ell is not None else u.prime, precision)
    return make_automorphism(identity, scalar=unit, kind="scalar", modulus=datum.modulus)


def compose(first: DatumAutomorphism, second: DatumAutomorphism) -> DatumAutomorphism:
    """first o second."""
    if first.rank != second.rank:
        raise fail("INVALID_INPUT", status_code=400, reason="automorphisms of different ranks")
    if first.scalar is not None and second.scalar is not None:
        scalar = first.scalar * second.scalar
    else:
        scalar = first.scalar or second.scalar
    # modulus do datum: so vem de automorfismos sem escalar
    datum_moduli = {a.modulus for a in (first, second) if a.scalar is None and a.modulus is not None}
    if len(datum_moduli) > 1:
        raise fail("INVALID_INPUT", status_code=400, reason="automorphisms at different precisions")
    modulus = datum_moduli.pop() if datum_moduli else None
    kind = "scalar" if first.kind == second.kind == "scalar" else "composite"
    return make_automorphism(first.array() @ second.array(), scalar=scalar, kind=kind, modulus=modulus)


def _block_permutation(label: DatumLabel, order: list[int]) -> list[int]:
    """Permuta blocos de fatores: o bloco order[i] vai para a posicao do bloco i."""
    offsets = block_offsets(label)
    permutation = list(range(sum(f.rank for f in label.factors)))
    for target, source in enumerate(order):
        (src_off, src), (dst_off, dst) = offsets[source], offsets[target]
        if (src.kind, src.rank, src.isogeny) != (dst.kind, dst.rank, dst.isogeny):
            raise fail("NOT_A_DIAGRAM_SYMMETRY")
        for k in range(src.rank):
            permutation[src_off + k] = dst_off + k
    return permutation


def _node_symmetry(factor: LabelFactor, name: str) -> list[int] | None:
    n = factor.rank
    if name == "triality":
        return [2, 1, 3, 0] if (factor.kind, n) == ("D", 4) else None
    if factor.kind == "A" and n >= 2:
        return list(reversed(range(n)))
    if factor.kind == "D":
        return list(range(n - 2)) + [n - 1, n - 2]
    if (factor.kind, n) == ("E", 6):
        return [5, 1, 4, 3, 2, 0]
    return None


def default_twist(datum: RootDatum, name: str) -> DatumAutomorphism:
    """Automorfismos nomeados da CLI: diagram, triality, swap, cycle, diagram:<imagens>."""
    if name in ("id", "identity", "1"):
        return identity_automorphism(datum)
    if name.startswith("diagram:"):
        try:
            images = [int(v) - 1 for v in name.split(":", 1)[1].split(",")]
        except ValueError:
            raise fail("INVALID_INPUT", status_code=400, reason=f"bad permutation {name!r}") from None
        return diagram_automorphism(datum, images)
    if datum.label is None:
        raise fail("UNLABELED_DATUM", status_code=400)
    permutation = list(range(datum.rank))
    if name in ("diagram", "triality"):
        for offset, factor in block_offsets(datum.label):
            if not factor.is_simple:
                continue
            local = _node_symmetry(factor, name)
            if local is not None:
                for i, image in enumerate(local):
                    permutation[offset + i] = offset + image
                return diagram_automorphism(datum, permutation)
        raise fail("NOT_A_DIAGRAM_SYMMETRY")
    if name in ("swap", "cycle"):
        blocks = len(datum.label.factors)
        if blocks < 2:
            raise fail("NOT_A_DIAGRAM_SYMMETRY")
        order = [1, 0] + list(range(2, blocks)) if name == "swap" else [(i + 1) % blocks for i in range(blocks)]
        return diagram_automorphism(datum, _block_permutation(datum.label, order))
    raise fail("INVALID_INPUT", status_code=400, reason=f"unknown twist {name!r}")


def parse_twist(datum: RootDatum, text: str, ell: int | None = None, precision: int | None = None) -> DatumAutomorphism:
    """Composicao de termos separados por '+': nomes de default_twist ou psi:<u>."""
    result: DatumAutomorphism | None = None
    for term in [part.strip() for part in text.split("+") if part.strip()] or ["id"]:
        if term.startswith("psi:"):
            current = scalar_automorphism(datum, term[4:], ell, precision)
        else:
            current = default_twist(datum, term)
        result = current if result is None else compose(result, current)
    return result


# ─── Grupo fundamental e validacao ───────────────────────────────────────────


@dataclass(frozen=True)
class FundamentalGroupSNF:
    """Fatores invariantes de L / L_0 em cadeia de divisibilidade; 0 = Z."""

    divisors: tuple[int, ...]


def fundamental_group(datum: RootDatum) -> FundamentalGroupSNF:
    divisors = lattice.elementary_divisors(datum.coroot_array(), datum.rank, datum.modulus)
    return FundamentalGroupSNF(tuple(divisors))


@dataclass(frozen=True)
class Violation:
    code: str
    detail: str


def _reflection_order_ok(generator: IntMatrix, datum: RootDatum) -> bool:
    if datum.modulus is None:
        return lattice.is_identity(generator @ generator) and not lattice.is_identity(generator)
    ell = datum.prime
    bound = 2 if ell == 2 else ell - 1
    order = modular_order(generator, datum.modulus, bound)
    return order is not None and order > 1


def validate(datum: RootDatum) -> list[Violation]:
    violations: list[Violation] = []
    r, m, modulus = datum.rank, datum.coroot_rank, datum.modulus
    try:
        gens = datum.generator_arrays()
        coroots = datum.coroot_array()
    except ValueError as exc:
        return [Violation("SHAPE", str(exc))]
    if m > r or lattice.rank(coroots, modulus) != m:
        violations.append(Violation("COROOT_BASIS_DEPENDENT", f"rank(L0 basis) < {m}"))
    for index, s in enumerate(gens):
        if not _reflection_order_ok(s, datum):
            violations.append(Violation("REFLECTION_ORDER", f"generator {index}"))
        moved = lattice.reduce(s - np.eye(r, dtype=np.int64), modulus)
        if lattice.rank(moved, modulus) != 1:
            violations.append(Violation("REFLECTION_RANK", f"generator {index}"))
        for j in range(r):
            if not lattice.span_contains(coroots, moved[:, j], modulus):
                violations.append(Violation("COROOT_NOT_IN_L0", f"generator {index} column {j}"))
                break
        image = lattice.reduce(s @ coroots, modulus)
        for j in range(m):
            if not lattice.span_contains(coroots, image[:, j], modulus):
                violations.append(Violation("L0_NOT_W_STABLE", f"generator {index} coroot {j}"))
                break
    moved_all = (
        np.hstack([lattice.reduce(s - np.eye(r, dtype=np.int64), modulus) for s in gens])
        if gens
        else np.zeros((r, 0), dtype=np.int64)
    )
    if lattice.rank(moved_all, modulus) != lattice.rank(coroots, modulus):
        violations.append(Violation("COROOT_RANK_MISMATCH", "span of im(s - 1) and L0 differ in rank"))
    if violations:
        logger.info("datum_invalid codes=%s", ",".join(sorted({v.code for v in violations})))
    return violations
