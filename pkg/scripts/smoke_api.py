#!/usr/bin/env python
"""Script de teste da API contra um servidor rodando (uvicorn lietype.main:app)."""

from __future__ import annotations

import os
import sys

import httpx

BASE = os.getenv("LIETYPE_BASE_URL", "http://localhost:8000")


def check(client: httpx.Client, path: str, payload: dict | None = None) -> dict:
    response = client.post(path, json=payload) if payload is not None else client.get(path)
    body = response.json()
    status = "ok" if body.get("ok") else f"erro {body.get('error', {}).get('code')}"
    print(f"   {path}: {response.status_code} {status}")
    return body


def main() -> int:
    failures = 0
    with httpx.Client(base_url=BASE, timeout=120.0) as client:
        print("1. Saude do servico...")
        failures += not check(client, "/health").get("ok")

        print("\n2. Graus de D4 com trialidade...")
        body = check(client, "/degrees", {"type": "D4", "tau": "triality"})
        print(f"   eigenvalues: {body.get('data', {}).get('eigenvalues')}")
        failures += not body.get("ok")

        print("\n3. Destorcao de A2 em ell=3, q=2...")
        body = check(client, "/untwist", {"type": "A2", "q": "2", "ell": 3})
        print(f"   classification_key: {body.get('data', {}).get('classification_key')}")
        failures += not body.get("ok")

        print("\n4. Relatorio de Tezuka para GL3...")
        body = check(client, "/tezuka", {"type": "GL3", "q": "4", "ell": 3, "truncation": 20})
        failures += not body.get("data", {}).get("checks_passed")

        print("\n5. Tipo invalido deve voltar INVALID_TYPE...")
        body = check(client, "/degrees", {"type": "Q7"})
        failures += body.get("error", {}).get("code") != "INVALID_TYPE"

    print("\nTeste concluido!" if not failures else f"\n{failures} verificacao(oes) falharam")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
