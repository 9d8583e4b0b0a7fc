"""Linha de comando: python -m lietype <comando> [opcoes]."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import Any, Sequence

from lietype import service
from lietype.config import LOG_LEVEL
from lietype.datafile import loads
from lietype.errors import AppError, exit_code_for, fail
from lietype.models import EnvelopeError, EnvelopeOk, ErrorPayload

logger = logging.getLogger("lietype")


def _add_datum_args(parser: argparse.ArgumentParser, tau: bool = True) -> None:
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--type", help="rotulo, ex.: A2, D4sc, B3ad*T1, GL3")
    source.add_argument("--file", help="arquivo JSON de root datum")
    if tau:
        parser.add_argument("--tau", default="id", help="id, diagram, triality, swap, cycle, diagram:<imagens>, psi:<u>, ou nome do arquivo")
    parser.add_argument("--cap", type=int, default=None, help="limite de enumeracao de W")


def _add_json(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--json", action="store_true", help="saida JSON canonica")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lietype", description="Invariantes de root data sobre Z_ell.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("degrees", help="graus fundamentais, |W| e autovalores de torcao")
    _add_datum_args(p)
    p.add_argument("--ell", type=int, default=None)
    p.add_argument("--precision", type=int, default=None)
    _add_json(p)

    p = sub.add_parser("fixed-datum", help="datum fixo do melhor levantamento w*tau")
    _add_datum_args(p)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--precision", type=int, default=None)
    p.add_argument("--all-lifts", action="store_true", help="compara todos os levantamentos de posto maximo")
    _add_json(p)

    for name, help_text in (("untwist", "fatora q = zeta*q' e calcula o datum fixo"), ("tezuka", "relatorio de series e verificacoes")):
        p = sub.add_parser(name, help=help_text)
        _add_datum_args(p)
        p.add_argument("--q", required=True, help="inteiro ou racional a/b")
        p.add_argument("--ell", type=int, required=True)
        p.add_argument("--precision", type=int, default=None)
        if name == "tezuka":
            p.add_argument("--trunc", type=int, default=None)
        _add_json(p)

    p = sub.add_parser("verdict", help="veredito de classe fundamental")
    _add_datum_args(p)
    p.add_argument("--ell", type=int, required=True)
    _add_json(p)

    p = sub.add_parser("subgroup", help="fecho de <q> em Z_ell^x")
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--q", required=True)
    p.add_argument("--precision", type=int, default=None)
    p.add_argument("--other", default=None, help="compara o fecho com o de outro q")
    p.add_argument("--descriptor", default=None, help="mu:E:N, H:N, pmH:N ou mixed:N")
    _add_json(p)

    p = sub.add_parser("validate", help="valida um arquivo de root datum")
    p.add_argument("--file", required=True)
    _add_json(p)
    return parser


def _load(args: argparse.Namespace):
    if getattr(args, "file", None):
        try:
            with open(args.file, encoding="utf-8") as handle:
                text = handle.read()
        except OSError as exc:
            raise fail("INVALID_DATUM_FILE", status_code=400, reason=str(exc)) from None
        return service.resolve_datum(None, loads(text))
    return service.resolve_datum(args.type, None)


def run(args: argparse.Namespace) -> tuple[dict[str, Any], bool]:
    """(payload, verificacoes ok)."""
    if args.command == "subgroup":
        return service.subgroup_payload(args.ell, args.q, args.precision, args.other, args.descriptor), True
    datum, automorphisms = _load(args)
    if args.command == "validate":
        payload = service.validate_payload(datum)
        return payload, payload["ok"]
    tau = service.resolve_twist(datum, automorphisms, args.tau, getattr(args, "ell", None), getattr(args, "precision", None))
    if args.command == "degrees":
        return service.degrees_payload(datum, tau, args.cap), True
    if args.command == "fixed-datum":
        payload = service.fixed_datum_payload(datum, tau, args.ell, args.cap, args.all_lifts)
        diagnostics = payload.get("lift_diagnostics")
        return payload, diagnostics is None or diagnostics["agree"]
    if args.command == "untwist":
        return service.untwist_payload(datum, tau, args.q, args.ell, args.precision, args.cap), True
    if args.command == "tezuka":
        payload = service.tezuka_payload(datum, tau, args.q, args.ell, args.trunc, args.precision, args.cap)
        return payload, payload["checks_passed"]
    if args.command == "verdict":
        return service.verdict_payload(datum, tau, args.ell, args.cap), True
    raise fail("INVALID_INPUT", status_code=400, reason=f"unknown command {args.command}")


def _render(payload: dict[str, Any]) -> str:
    lines = []
    for key in sorted(payload):
        value = payload[key]
        text = value if isinstance(value, str) else json.dumps(value, sort_keys=True)
        lines.append(f"{key}: {text}")
    return "\n".join(lines)


def main(argv: Sequence[str] | None = None) -> int:
    logging.basicConfig(level=LOG_LEVEL, stream=sys.stderr)
    args = build_parser().parse_args(argv)
    try:
        payload, passed = run(args)
    except AppError as exc:
        logger.warning("cli_error code=%s", exc.code)
        if getattr(args, "json", False):
            envelope = EnvelopeError(error=ErrorPayload(code=exc.code, user_message=exc.user_message, details=exc.details))
            print(json.dumps(envelope.model_dump(), sort_keys=True))
        else:
            print(f"error {exc.code}: {exc.user_message}", file=sys.stderr)
        return exit_code_for(exc)
    if args.json:
        print(json.dumps(EnvelopeOk(data=payload).model_dump(), sort_keys=True))
    else:
        print(_render(payload))
    return 0 if passed else 1
