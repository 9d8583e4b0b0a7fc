from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from lietype.i18n import msg


@dataclass
class AppError(Exception):
    code: str
    user_message: str
    status_code: int = 400
    details: dict[str, Any] = field(default_factory=dict)

    def __str__(self) -> str:
        return f"{self.code}: {self.user_message}"


def fail(code: str, status_code: int = 422, locale: str | None = None, **details: Any) -> AppError:
    """Monta o AppError com a mensagem traduzida para o codigo."""
    return AppError(
        code=code,
        user_message=msg(locale, code.lower(), **details),
        status_code=status_code,
        details=details,
    )


def exit_code_for(exc: AppError) -> int:
    # 500 = falha de consistencia interna, o resto e erro de entrada
    return 1 if exc.status_code >= 500 else 2
