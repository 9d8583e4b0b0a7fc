"""Series de Poincare racionais exatas e tabelas bigraduadas."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import reduce

from sympy import Poly, QQ, Symbol

from lietype.errors import fail

t = Symbol("t")


def _poly(coeffs) -> Poly:
    """Coeficientes em ordem crescente de grau."""
    coeffs = list(coeffs) or [0]
    return Poly(list(reversed(coeffs)), t, domain=QQ)


def _coeffs(poly: Poly) -> list:
    values = list(reversed(poly.all_coeffs()))
    while len(values) > 1 and values[-1] == 0:
        values.pop()
    return values


def one_minus_power(k: int) -> Poly:
    """1 - t^k."""
    return _poly([1] + [0] * (k - 1) + [-1])


@dataclass(frozen=True)
class PoincareSeries:
    """Serie racional reduzida numerator/denominator, denominador com termo constante 1."""

    numerator: tuple[int, ...]
    denominator: tuple[int, ...]

    @classmethod
    def from_polys(cls, numerator: Poly, denominator: Poly) -> PoincareSeries:
        if denominator.is_zero:
            raise fail("NORMALIZATION_FAILED")
        num, den = numerator.cancel(denominator, include=True)
        num = Poly(num, t, domain=QQ)
        den = Poly(den, t, domain=QQ)
        constant = den.eval(0)
        if constant == 0:
            raise fail("NORMALIZATION_FAILED")
        num_coeffs = [c / constant for c in _coeffs(num)]
        den_coeffs = [c / constant for c in _coeffs(den)]
        if not all(c.is_Integer for c in num_coeffs + den_coeffs):
            raise fail("NORMALIZATION_FAILED")
        return cls(tuple(int(c) for c in num_coeffs), tuple(int(c) for c in den_coeffs))

    @classmethod
    def from_degrees(cls, numerator_degrees, denominator_degrees) -> PoincareSeries:
        """Prod (1 + t^a) / Prod (1 - t^b)."""
        num = reduce(lambda acc, a: acc * _poly([1] + [0] * (a - 1) + [1]), numerator_degrees, _poly([1]))
        den = reduce(lambda acc, b: acc * one_minus_power(b), denominator_degrees, _poly([1]))
        return cls.from_polys(num, den)

    @classmethod
    def weighted_inverse_sum(cls, weights: Counter, total: int) -> PoincareSeries:
        """(1/total) * Sum_den weights[den] / den(t), com den em coeficientes crescentes."""
        if not weights:
            raise fail("NORMALIZATION_FAILED")
        polys = {den: _poly(den) for den in weights}
        common = reduce(lambda acc, p: acc.lcm(p), polys.values())
        numerator = _poly([0])
        for den, count in weights.items():
            quotient, remainder = common.div(polys[den])
            if not remainder.is_zero:
                raise fail("NORMALIZATION_FAILED")
            numerator += quotient * count
        return cls.from_polys(numerator, common * total)

    @property
    def numerator_poly(self) -> Poly:
        return _poly(self.numerator)

    @property
    def denominator_poly(self) -> Poly:
        return _poly(self.denominator)

    def as_expr(self):
        return self.numerator_poly.as_expr() / self.denominator_poly.as_expr()

    def expand(self, n: int) -> list[int]:
        """Coeficientes c_0..c_n."""
        den = self.denominator
        out: list[int] = []
        for k in range(n + 1):
            value = self.numerator[k] if k < len(self.numerator) else 0
            for j in range(1, min(k, len(den) - 1) + 1):
                value -= den[j] * out[k - j]
            out.append(value)
        return out

    def __mul__(self, other: PoincareSeries) -> PoincareSeries:
        return PoincareSeries.from_polys(
            self.numerator_poly * other.numerator_poly,
            self.denominator_poly * other.denominator_poly,
        )

    def to_payload(self) -> dict:
        return {"numerator": list(self.numerator), "denominator": list(self.denominator), "text": str(self.as_expr())}


def inverse_series(den: tuple[int, ...], n: int, modulus: int) -> list[int]:
    """Coeficientes de 1/den(t) mod modulus ate t^n (den[0] unidade)."""
    lead = pow(den[0], -1, modulus)
    out: list[int] = []
    for k in range(n + 1):
        value = 1 if k == 0 else 0
        for j in range(1, min(k, len(den) - 1) + 1):
            value -= den[j] * out[k - j]
        out.append(value * lead % modulus)
    return out


def extract_degrees(coefficients: list[int], count: int) -> list[int] | None:
    """Le graus d_i de uma expansao 1/Prod(1 - t^d_i) ate o grau disponivel."""
    series = list(coefficients)
    found: list[int] = []
    horizon = len(series) - 1
    while len(found) < count:
        nxt = next((k for k in range(1, horizon + 1) if series[k] != 0), None)
        if nxt is None or series[nxt] < 0:
            return None
        found.append(nxt)
        for k in range(horizon, nxt - 1, -1):
            series[k] -= series[k - nxt]
    if any(series[1:]):
        return None
    return found


# ─── Tabelas bigraduadas ─────────────────────────────────────────────────────


@dataclass
class BigradedDims:
    """dim E_2^{s,t} esparso, valido para grau total s + t <= truncation."""

    truncation: int
    entries: dict[tuple[int, int], int] = field(default_factory=dict)

    def add(self, s: int, t_: int, dim: int) -> None:
        if dim:
            self.entries[(s, t_)] = self.entries.get((s, t_), 0) + dim

    def get(self, s: int, t_: int) -> int:
        return self.entries.get((s, t_), 0)

    def totals(self) -> list[int]:
        """Soma por grau total 0..truncation."""
        out = [0] * (self.truncation + 1)
        for (s, t_), dim in self.entries.items():
            total = s + t_
            if 0 <= total <= self.truncation:
                out[total] += dim
        return out
