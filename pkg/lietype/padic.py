"""Unidades ell-adicas em precisao finita e os subgrupos fechados de Z_ell^x."""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass
from fractions import Fraction

from sympy import multiplicity, totient
from sympy.ntheory import discrete_log, isprime, n_order

from lietype.config import DEFAULT_PRECISION, SUBGROUP_ENUM_LIMIT
from lietype.errors import fail

logger = logging.getLogger("lietype")


class Sentinel(enum.Enum):
    AT_PRECISION = "AT_PRECISION"


AT_PRECISION = Sentinel.AT_PRECISION

Valuation = int | Sentinel


def check_prime(ell: int) -> int:
    if not isinstance(ell, int) or ell < 2 or not isprime(ell):
        raise fail("INVALID_INPUT", status_code=400, reason=f"ell={ell} is not a prime")
    return ell


@dataclass(frozen=True, eq=False)
class PAdicUnit:
    """Unidade de Z_ell conhecida modulo ell^precision.

    `source` guarda o valor racional exato quando a unidade veio de a/b, o que
    permite reconstruir a mesma unidade em precisao maior.
    """

    prime: int
    precision: int
    residue: int
    source: Fraction | None = None

    @property
    def modulus(self) -> int:
        return self.prime**self.precision

    @classmethod
    def from_value(cls, value: int | Fraction | str, prime: int, precision: int | None = None) -> PAdicUnit:
        check_prime(prime)
        precision = DEFAULT_PRECISION if precision is None else precision
        if precision < 1:
            raise fail("INVALID_INPUT", status_code=400, reason=f"precision={precision} must be >= 1")
        try:
            exact = Fraction(value)
        except (ValueError, ZeroDivisionError, TypeError):
            raise fail("INVALID_INPUT", status_code=400, reason=f"cannot read {value!r} as a rational") from None
        if exact.numerator % prime == 0 or exact.denominator % prime == 0:
            raise fail("INVALID_INPUT", status_code=400, reason=f"{value} is not an {prime}-adic unit")
        modulus = prime**precision
        residue = exact.numerator * pow(exact.denominator, -1, modulus) % modulus
        return cls(prime, precision, residue, exact)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PAdicUnit):
            return NotImplemented
        return (self.prime, self.precision, self.residue) == (other.prime, other.precision, other.residue)

    def __hash__(self) -> int:
        return hash((self.prime, self.precision, self.residue))

    def __mul__(self, other: PAdicUnit) -> PAdicUnit:
        self._check_compatible(other)
        source = self.source * other.source if self.source is not None and other.source is not None else None
        return PAdicUnit(self.prime, self.precision, self.residue * other.residue % self.modulus, source)

    def __pow__(self, exponent: int) -> PAdicUnit:
        source = self.source**exponent if self.source is not None else None
        return PAdicUnit(self.prime, self.precision, pow(self.residue, exponent, self.modulus), source)

    def inverse(self) -> PAdicUnit:
        return self**-1

    def signed(self) -> int:
        """Representante simetrico de residue."""
        half = self.modulus // 2
        return self.residue - self.modulus if self.residue > half else self.residue

    def is_sign(self) -> bool:
        return self.residue in (1, self.modulus - 1)

    def at_precision(self, precision: int) -> PAdicUnit:
        if precision <= self.precision:
            modulus = self.prime**precision
            source = self.source
            return PAdicUnit(self.prime, precision, self.residue % modulus, source)
        if self.source is not None:
            return PAdicUnit.from_value(self.source, self.prime, precision)
        if is_root_of_unity(self):
            return teichmuller_lift(self.residue % self.prime, self.prime, precision)
        raise fail("PRECISION_TOO_LOW", precision=self.precision)

    def _check_compatible(self, other: PAdicUnit) -> None:
        if (self.prime, self.precision) != (other.prime, other.precision):
            raise fail(
                "INVALID_INPUT",
                status_code=400,
                reason=f"mixed {self.prime}^{self.precision} and {other.prime}^{other.precision} units",
            )

    def __repr__(self) -> str:
        return f"PAdicUnit({self.residue} mod {self.prime}^{self.precision})"


def as_unit(value: PAdicUnit | int | Fraction | str, ell: int, precision: int | None = None) -> PAdicUnit:
    if isinstance(value, PAdicUnit):
        if value.prime != ell:
            raise fail("INVALID_INPUT", status_code=400, reason=f"unit over {value.prime} used at ell={ell}")
        return value if precision is None else value.at_precision(precision)
    return PAdicUnit.from_value(value, ell, precision)


# ─── Teichmuller ─────────────────────────────────────────────────────────────


def mult_order(q: PAdicUnit | int, ell: int) -> int:
    """Ordem de q mod ell; sempre 1 para ell = 2."""
    check_prime(ell)
    if ell == 2:
        return 1
    residue = q.residue if isinstance(q, PAdicUnit) else q
    if residue % ell == 0:
        raise fail("INVALID_INPUT", status_code=400, reason=f"{residue} is not a unit mod {ell}")
    return int(n_order(residue % ell, ell))


def teichmuller_lift(x: int, ell: int, precision: int) -> PAdicUnit:
    check_prime(ell)
    modulus = ell**precision
    if x % ell == 0:
        raise fail("INVALID_INPUT", status_code=400, reason=f"{x} is not a unit mod {ell}")
    current = x % modulus
    # cada iteracao fixa mais um digito
    for _ in range(precision + 1):
        following = pow(current, ell, modulus)
        if following == current:
            break
        current = following
    return PAdicUnit(ell, precision, current)


def is_root_of_unity(u: PAdicUnit) -> bool:
    exponent = 2 if u.prime == 2 else u.prime - 1
    return pow(u.residue, exponent, u.modulus) == 1


def root_of_unity_order(u: PAdicUnit) -> int | None:
    if not is_root_of_unity(u):
        return None
    if u.residue == 1:
        return 1
    return int(n_order(u.residue, u.modulus))


@dataclass(frozen=True)
class UntwistFactor:
    e: int
    zeta: PAdicUnit
    q_prime: PAdicUnit


def untwist_factor(q: PAdicUnit | int | Fraction | str, ell: int | None = None, precision: int | None = None) -> UntwistFactor:
    """Fatora q = zeta * q' com zeta de ordem e = ord(q mod ell) e q' = 1 mod ell."""
    if not isinstance(q, PAdicUnit):
        if ell is None:
            raise fail("INVALID_INPUT", status_code=400, reason="ell is required for a plain q")
        q = PAdicUnit.from_value(q, ell, precision)
    e = mult_order(q, q.prime)
    zeta = teichmuller_lift(q.residue % q.prime, q.prime, q.precision)
    return UntwistFactor(e=e, zeta=zeta, q_prime=q * zeta.inverse())


def unit_valuation(u: PAdicUnit) -> Valuation:
    """v_ell(u - 1), ou AT_PRECISION quando u = 1 mod ell^k."""
    if u.residue == 1:
        return AT_PRECISION
    return int(multiplicity(u.prime, (u.residue - 1) % u.modulus))


def mod4_report(q: PAdicUnit) -> dict[str, int | str]:
    """As duas normalizacoes possiveis em ell = 2: q' mod 4 e v_2(q' - 1)."""
    factor = untwist_factor(q)
    valuation = unit_valuation(factor.q_prime)
    return {
        "q_prime_mod_4": factor.q_prime.residue % 4,
        "valuation": valuation.value if isinstance(valuation, Sentinel) else valuation,
    }


# ─── Subgrupos fechados ──────────────────────────────────────────────────────


SUBGROUP_KINDS = ("mu_H", "H'", "pmH'", "mixed")


@dataclass(frozen=True)
class SubgroupDescriptor:
    """Forma canonica de um subgrupo fechado de Z_ell^x.

    ell impar: mu_e * H_n (kind "mu_H"). ell = 2: H'_n, +-H'_n e
    H'_n u (-1 + 2^(n-1)) H'_n (kinds "H'", "pmH'", "mixed").
    """

    prime: int
    kind: str
    n: int
    e: int = 1

    def __post_init__(self) -> None:
        odd = self.prime != 2
        if self.kind not in SUBGROUP_KINDS or odd != (self.kind == "mu_H"):
            raise fail("INVALID_INPUT", status_code=400, reason=f"subgroup kind {self.kind} at ell={self.prime}")
        if odd and ((self.prime - 1) % self.e != 0 or self.n < 1):
            raise fail("INVALID_INPUT", status_code=400, reason=f"mu_{self.e} H_{self.n} at ell={self.prime}")
        if not odd and (self.e != 1 or self.n < 2 or (self.kind == "mixed" and self.n < 3)):
            raise fail("INVALID_INPUT", status_code=400, reason=f"{self.kind}_{self.n} at ell=2")

    @classmethod
    def parse(cls, text: str, ell: int) -> SubgroupDescriptor:
        """Le 'mu:E:N', 'H:N', 'pmH:N' ou 'mixed:N'."""
        parts = text.strip().split(":")
        try:
            if parts[0] == "mu" and len(parts) == 3:
                return cls(ell, "mu_H", n=int(parts[2]), e=int(parts[1]))
            kind = {"H": "H'", "pmH": "pmH'", "mixed": "mixed"}[parts[0]]
            if len(parts) != 2:
                raise KeyError(text)
            return cls(ell, kind, n=int(parts[1]))
        except (KeyError, ValueError):
            raise fail("INVALID_INPUT", status_code=400, reason=f"bad subgroup descriptor {text!r}") from None

    @property
    def label(self) -> str:
        if self.kind == "mu_H":
            return f"mu_{self.e} H_{self.n}"
        if self.kind == "H'":
            return f"H'_{self.n}"
        if self.kind == "pmH'":
            return f"+-H'_{self.n}"
        return f"H'_{self.n} u ({2 ** (self.n - 1) - 1})H'_{self.n}"


def _at_least(valuation: Valuation, n: int, precision: int) -> bool:
    if isinstance(valuation, Sentinel):
        if n > precision:
            raise fail("PRECISION_TOO_LOW", precision=precision)
        return True
    return valuation >= n


def _in_h_prime(u: PAdicUnit, n: int) -> bool:
    return u.residue % 4 == 1 and _at_least(unit_valuation(u), n, u.precision)


def subgroup_membership(q: PAdicUnit, descriptor: SubgroupDescriptor) -> bool:
    if q.prime != descriptor.prime:
        raise fail("INVALID_INPUT", status_code=400, reason="prime of q and descriptor differ")
    if descriptor.kind == "mu_H":
        factor = untwist_factor(q)
        if descriptor.e % factor.e != 0:
            return False
        return _at_least(unit_valuation(factor.q_prime), descriptor.n, q.precision)
    if descriptor.kind == "H'":
        return _in_h_prime(q, descriptor.n)
    if descriptor.kind == "pmH'":
        minus = PAdicUnit(q.prime, q.precision, -q.residue % q.modulus)
        return _in_h_prime(q, descriptor.n) or _in_h_prime(minus, descriptor.n)
    shift = PAdicUnit.from_value(2 ** (descriptor.n - 1) - 1, 2, q.precision)
    shifted = q * PAdicUnit(2, q.precision, shift.inverse().residue)
    return _in_h_prime(q, descriptor.n) or _in_h_prime(shifted, descriptor.n)


def descriptor_of(q: PAdicUnit) -> SubgroupDescriptor:
    """Menor forma canonica que contem q (o fecho de <q>)."""
    if q.prime != 2:
        factor = untwist_factor(q)
        valuation = unit_valuation(factor.q_prime)
        if isinstance(valuation, Sentinel):
            raise fail("PRECISION_TOO_LOW", precision=q.precision)
        return SubgroupDescriptor(q.prime, "mu_H", n=valuation, e=factor.e)
    if q.residue % 4 == 1:
        valuation = unit_valuation(q)
        if isinstance(valuation, Sentinel):
            raise fail("PRECISION_TOO_LOW", precision=q.precision)
        return SubgroupDescriptor(2, "H'", n=valuation)
    minus = PAdicUnit(2, q.precision, -q.residue % q.modulus)
    valuation = unit_valuation(minus)
    if isinstance(valuation, Sentinel) or valuation + 1 > q.precision:
        raise fail("PRECISION_TOO_LOW", precision=q.precision)
    return SubgroupDescriptor(2, "mixed", n=valuation + 1)


def _powers(residue: int, modulus: int) -> frozenset[int]:
    seen = {1}
    current = residue % modulus
    while current not in seen:
        seen.add(current)
        current = current * residue % modulus
    return frozenset(seen)


def closed_subgroup_equal(q1: PAdicUnit, q2: PAdicUnit) -> bool:
    """Compara os subgrupos ciclicos gerados mod ell^k."""
    q1._check_compatible(q2)
    worst = 0
    for q in (q1, q2):
        valuation = unit_valuation(untwist_factor(q).q_prime)
        if isinstance(valuation, Sentinel):
            raise fail("PRECISION_TOO_LOW", precision=q.precision)
        worst = max(worst, valuation)
    if q1.precision < worst + 2:
        logger.warning("subgroup_precision_marginal precision=%s valuation=%s", q1.precision, worst)
    modulus = q1.modulus
    if int(totient(modulus)) <= SUBGROUP_ENUM_LIMIT:
        return _powers(q1.residue, modulus) == _powers(q2.residue, modulus)
    if n_order(q1.residue, modulus) != n_order(q2.residue, modulus):
        return False
    try:
        discrete_log(modulus, q2.residue, q1.residue)
    except ValueError:
        return False
    return True
