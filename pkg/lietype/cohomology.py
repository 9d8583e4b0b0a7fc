"""Modelos de cohomologia mod ell: series de BG, G, LBG e BG(q), Koszul e E_2."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from sympy.polys.domains import GF
from sympy.polys.matrices import DomainMatrix
from sympy.polys.rings import ring

from lietype.errors import fail
from lietype.padic import PAdicUnit, as_unit, check_prime
from lietype.series import BigradedDims, PoincareSeries

logger = logging.getLogger("lietype")

MODELS = ("BG", "G", "LBG", "BGq")


def _degree_list(degrees) -> list[int]:
    """Aceita DegreeData ou uma sequencia de graus."""
    return list(getattr(degrees, "degrees", degrees))


def dim_g(degrees) -> int:
    return sum(2 * d - 1 for d in _degree_list(degrees))


def poincare_series(degrees, model: str) -> PoincareSeries:
    """BG: 1/Prod(1-t^{2d}); G: Prod(1+t^{2d-1}); LBG e BGq: o produto dos dois."""
    degrees = _degree_list(degrees)
    if model not in MODELS:
        raise fail("INVALID_INPUT", status_code=400, reason=f"unknown model {model!r}")
    odd = [2 * d - 1 for d in degrees] if model != "BG" else []
    even = [2 * d for d in degrees] if model != "G" else []
    return PoincareSeries.from_degrees(odd, even)


@dataclass(frozen=True)
class PsiqAction:
    eigenvalues: tuple[tuple[int, int], ...]
    verdict: str

    def to_payload(self) -> dict:
        return {"eigenvalues": [list(pair) for pair in self.eigenvalues], "verdict": self.verdict}


def _residue_mod_ell(q: PAdicUnit | int | Fraction | str, ell: int) -> int:
    if isinstance(q, PAdicUnit):
        return q.residue % ell
    return as_unit(q, ell, 1).residue


def psiq_action(degrees, q: PAdicUnit | int | Fraction | str, ell: int) -> PsiqAction:
    """psi^q multiplica o gerador de grau 2d por q^d mod ell."""
    check_prime(ell)
    residue = _residue_mod_ell(q, ell)
    eigenvalues = tuple((2 * d, pow(residue, d, ell)) for d in _degree_list(degrees))
    identity = ell == 2 or all(value == 1 for _, value in eigenvalues)
    return PsiqAction(eigenvalues, "IDENTITY" if identity else "NOT_IDENTITY")


# ─── Complexo de Koszul ──────────────────────────────────────────────────────


def _monomials(weights: list[int], bound: int) -> dict[int, list[tuple[int, ...]]]:
    """Expoentes a com Sum a_i * weights_i = t, para cada t <= bound."""
    table: dict[int, list[tuple[int, ...]]] = {t_: [] for t_ in range(bound + 1)}

    def walk(index: int, current: list[int], total: int) -> None:
        if index == len(weights):
            table[total].append(tuple(current))
            return
        power = 0
        while total + power * weights[index] <= bound:
            current.append(power)
            walk(index + 1, current, total + power * weights[index])
            current.pop()
            power += 1

    walk(0, [], 0)
    return table


def _rank(entries: dict[int, dict[int, int]], shape: tuple[int, int], field_) -> int:
    rows = {i: {j: field_(v) for j, v in row.items() if v} for i, row in entries.items()}
    rows = {i: row for i, row in rows.items() if row}
    if not rows:
        return 0
    return DomainMatrix(rows, shape, field_).rank()


def koszul_tor(degrees, truncation: int, ell: int = 2, q: PAdicUnit | int | None = None) -> BigradedDims:
    """Tor_{F[x,x']}(F[x], F[x]) pelo complexo de Koszul Lambda(z) (x) F[x].

    Sem q a segunda estrutura de modulo e a diagonal; com q ela e torcida
    por psi^q (x'_i -> q^{d_i} x_i). Entradas em bigrau (-s, t), t o grau
    interno; graus internos ate truncation + n, entao os totais sao exatos
    ate truncation.
    """
    check_prime(ell)
    degrees = _degree_list(degrees)
    n = len(degrees)
    weights = [2 * d for d in degrees]
    bound = truncation + n
    field_ = GF(ell)
    result = BigradedDims(truncation)
    if n == 0:
        result.add(0, 0, 1)
        return result
    names = [f"x{i}" for i in range(n)] + [f"xp{i}" for i in range(n)]
    poly_ring, *gens = ring(names, field_)
    xs, xps = gens[:n], gens[n:]
    scale = [1] * n if q is None else [pow(_residue_mod_ell(q, ell), d, ell) for d in degrees]
    images = []
    for i in range(n):
        relation = xps[i] - xs[i]
        images.append(relation.compose([(xps[j], scale[j] * xs[j]) for j in range(n)]))

    monomials = _monomials(weights, bound)

    def basis(s: int, t_: int) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
        out = []
        for subset in combinations(range(n), s):
            rest = t_ - sum(weights[i] for i in subset)
            if rest >= 0:
                out.extend((subset, mono) for mono in monomials[rest])
        return out

    def monomial(exponents: tuple[int, ...]):
        term = poly_ring.one
        for var, power in zip(xs, exponents):
            term *= var**power
        return term

    def differential(s: int, t_: int) -> tuple[dict[int, dict[int, int]], tuple[int, int]]:
        source = basis(s, t_)
        target = basis(s - 1, t_) if s >= 1 else []
        position = {item: k for k, item in enumerate(target)}
        entries: dict[int, dict[int, int]] = {}
        for col, (subset, mono) in enumerate(source):
            for j, var in enumerate(subset):
                if not images[var]:
                    continue
                rest = subset[:j] + subset[j + 1 :]
                sign = 1 if j % 2 == 0 else -1
                product = images[var] * monomial(mono)
                for exps, coeff in product.terms():
                    row = position[(rest, tuple(exps[:n]))]
                    cell = entries.setdefault(row, {})
                    cell[col] = (cell.get(col, 0) + sign * int(field_.to_int(coeff))) % ell
        return entries, (len(target), len(source))

    for t_ in range(bound + 1):
        ranks = {}
        sizes = {}
        for s in range(0, n + 2):
            entries, shape = differential(s, t_) if s <= n else ({}, (0, 0))
            sizes[s] = shape[1]
            ranks[s] = _rank(entries, shape, field_) if s >= 1 else 0
        for s in range(0, n + 1):
            if t_ - s > truncation:
                continue
            dim = sizes[s] - ranks[s] - ranks[s + 1]
            result.add(-s, t_, dim)
    logger.debug("koszul_tor degrees=%s truncation=%s entries=%s", degrees, truncation, len(result.entries))
    return result


def twisted_tor_series(degrees, q: PAdicUnit | int, ell: int) -> PoincareSeries:
    """Prod_{q^d = 1 mod ell} (1 + t^{2d-1}) / (1 - t^{2d})."""
    residue = _residue_mod_ell(q, ell)
    kept = [d for d in _degree_list(degrees) if pow(residue, d, ell) == 1]
    return poincare_series(kept, "BGq")


@dataclass(frozen=True)
class CollapseCheck:
    ok: bool
    koszul_totals: tuple[int, ...]
    expected_totals: tuple[int, ...]
    mismatches: tuple[int, ...] = ()

    def to_payload(self) -> dict:
        return {
            "ok": self.ok,
            "koszul_totals": list(self.koszul_totals),
            "expected_totals": list(self.expected_totals),
            "mismatches": list(self.mismatches),
        }


def em_collapse_check(degrees, truncation: int, ell: int = 2, q: PAdicUnit | int | None = None) -> CollapseCheck:
    """Totais do E_2 de Koszul contra a serie de BG(q) ate o grau truncation."""
    degrees = _degree_list(degrees)
    totals = koszul_tor(degrees, truncation, ell, q).totals()
    if q is None:
        expected = poincare_series(degrees, "BGq").expand(truncation)
    else:
        expected = twisted_tor_series(degrees, q, ell).expand(truncation)
    mismatches = tuple(k for k in range(truncation + 1) if totals[k] != expected[k])
    if mismatches:
        logger.warning("em_collapse_mismatch degrees=%s first=%s", degrees, mismatches[0])
    return CollapseCheck(not mismatches, tuple(totals), tuple(expected), mismatches)


# ─── Espectral de Serre ──────────────────────────────────────────────────────


def serre_e2(base: PoincareSeries, fiber: PoincareSeries, truncation: int) -> BigradedDims:
    """dim E_2^{s,t} = b_s * f_t para s + t <= truncation."""
    b = base.expand(truncation)
    f = fiber.expand(truncation)
    table = BigradedDims(truncation)
    for s in range(truncation + 1):
        if not b[s]:
            continue
        for t_ in range(truncation - s + 1):
            table.add(s, t_, b[s] * f[t_])
    return table


@dataclass(frozen=True)
class ModuleCheck:
    ok: bool
    generator: tuple[int, int]
    mismatches: tuple[tuple[int, int], ...] = field(default_factory=tuple)

    def to_payload(self) -> dict:
        return {"ok": self.ok, "generator": list(self.generator), "mismatches": [list(m) for m in self.mismatches]}


def module_rank_one_check(degrees, truncation: int) -> ModuleCheck:
    """E_2(BG^{h sigma}) e livre de posto 1 sobre E_2(LBG), gerador em E_2^{0, dim G}.

    Em dimensao: dims_fixed(s, t) = dims_loop(s, dim G - t) para s + t <= truncation.
    """
    degrees = _degree_list(degrees)
    top = dim_g(degrees)
    if truncation < top:
        raise fail("INVALID_INPUT", status_code=400, reason=f"truncation {truncation} below dim G = {top}")
    horizon = truncation + top
    base = poincare_series(degrees, "BG")
    fiber = poincare_series(degrees, "G")
    fixed = serre_e2(base, fiber, horizon)
    loop = serre_e2(base, fiber, horizon)
    mismatches = []
    for s in range(truncation + 1):
        for t_ in range(truncation - s + 1):
            mirrored = loop.get(s, top - t_) if t_ <= top else 0
            if fixed.get(s, t_) != mirrored:
                mismatches.append((s, t_))
    if fixed.get(0, top) != 1:
        mismatches.append((0, top))
    return ModuleCheck(not mismatches, (0, top), tuple(mismatches))
