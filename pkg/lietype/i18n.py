from __future__ import annotations

from typing import Any

from lietype.config import LOCALE


_MESSAGES: dict[str, dict[str, str]] = {
    "pt": {
        "cap_exceeded": "Grupo de Weyl maior que o limite de enumeracao ({cap}); parei em {count} elementos.",
        "precision_too_low": "Precisao ell-adica insuficiente (k={precision}). Aumente --precision.",
        "not_a_diagram_symmetry": "A permutacao de nos nao preserva a matriz de Cartan.",
        "invalid_type": "Tipo de Lie invalido: {label}.",
        "invalid_input": "Entrada invalida: {reason}.",
        "invalid_datum_file": "Arquivo de root datum invalido: {reason}.",
        "normalization_failed": "Nao consegui normalizar a serie de Molien.",
        "no_consistent_eigenvalues": "Nenhuma escolha de autovalores de torcao reproduz a serie de Molien torcida.",
        "precision_unstable_rank": "O posto do reticulado fixo muda com a precisao ({rank_low} vs {rank_high}).",
        "no_prime_order_lift": "Nenhum levantamento w*tau tem ordem prima com ell={ell}.",
        "springer_mismatch": "Posto do datum fixo ({rank}) difere do posto de Springer ({springer}).",
        "tau_order_divisible_by_ell": "A ordem de tau ({order}) e divisivel por ell={ell}.",
        "valuation_at_precision": "A valoracao atingiu a precisao; chave de classificacao indefinida.",
        "unlabeled_datum": "O veredito exige um datum rotulado por tipo.",
        "nonpolynomial_unsupported": "Datum sem cohomologia polinomial em ell={ell}: fora do alcance do relatorio.",
        "relative_weyl_not_generated": "O grupo de Weyl relativo ({order}) nao e gerado por reflexoes ({generated}).",
        "internal_error": "Erro interno. Tente novamente.",
    },
    "en": {
        "cap_exceeded": "Weyl group exceeds the enumeration cap ({cap}); stopped at {count} elements.",
        "precision_too_low": "Insufficient ell-adic precision (k={precision}). Raise --precision.",
        "not_a_diagram_symmetry": "The node permutation does not preserve the Cartan matrix.",
        "invalid_type": "Invalid Lie type: {label}.",
        "invalid_input": "Invalid input: {reason}.",
        "invalid_datum_file": "Invalid root datum file: {reason}.",
        "normalization_failed": "Could not normalize the Molien series.",
        "no_consistent_eigenvalues": "No choice of twisting eigenvalues reproduces the twisted Molien series.",
        "precision_unstable_rank": "Fixed lattice rank changes with precision ({rank_low} vs {rank_high}).",
        "no_prime_order_lift": "No lift w*tau has order prime to ell={ell}.",
        "springer_mismatch": "Fixed datum rank ({rank}) differs from the Springer rank ({springer}).",
        "tau_order_divisible_by_ell": "The order of tau ({order}) is divisible by ell={ell}.",
        "valuation_at_precision": "Valuation reached the precision; classification key undefined.",
        "unlabeled_datum": "The verdict needs a type-labeled datum.",
        "nonpolynomial_unsupported": "Datum without polynomial cohomology at ell={ell}: outside the report's scope.",
        "relative_weyl_not_generated": "The relative Weyl group ({order}) is not generated by reflections ({generated}).",
        "internal_error": "Internal error. Try again.",
    },
}


def _lang(locale: str | None) -> str:
    if not locale:
        locale = LOCALE or "en"
    return "pt" if locale.lower().startswith("pt") else "en"


def msg(locale: str | None, key: str, **kwargs: Any) -> str:
    lang = _lang(locale)
    template = _MESSAGES.get(lang, {}).get(key) or _MESSAGES["en"].get(key) or key
    try:
        return template.format(**kwargs)
    except (KeyError, IndexError):
        return template
