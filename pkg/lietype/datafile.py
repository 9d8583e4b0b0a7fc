from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Literal, Optional

from pydantic import BaseModel, Field, ValidationError, model_validator

from lietype.errors import fail
from lietype.rootdata import (
    DatumAutomorphism,
    RootDatum,
    freeze,
    make_automorphism,
    parse_label,
)

logger = logging.getLogger("lietype")

FORMAT = "lietype.datum/1"


class AutomorphismEntry(BaseModel):
    name: str
    matrix: list[list[int]]


class DatumFile(BaseModel):
    format: Literal["lietype.datum/1"] = FORMAT
    label: Optional[str] = None
    rank: int = Field(ge=0)
    weyl_generators: list[list[list[int]]]
    coroot_basis: list[list[int]]
    modulus: Optional[int] = Field(default=None, gt=1)
    automorphisms: list[AutomorphismEntry] = Field(default_factory=list)

    @model_validator(mode="after")
    def _check_shapes(self) -> "DatumFile":
        r = self.rank
        for g in self.weyl_generators:
            if len(g) != r or any(len(row) != r for row in g):
                raise ValueError(f"weyl generator is not {r}x{r}")
        if len(self.coroot_basis) != r:
            raise ValueError(f"coroot_basis needs {r} rows")
        widths = {len(row) for row in self.coroot_basis}
        if len(widths) > 1:
            raise ValueError("coroot_basis rows of different lengths")
        for entry in self.automorphisms:
            if len(entry.matrix) != r or any(len(row) != r for row in entry.matrix):
                raise ValueError(f"automorphism {entry.name} is not {r}x{r}")
        return self


def to_file(datum: RootDatum, automorphisms: dict[str, DatumAutomorphism] | None = None) -> DatumFile:
    return DatumFile(
        label=datum.label.text if datum.label is not None else None,
        rank=datum.rank,
        weyl_generators=[[list(row) for row in g] for g in datum.weyl_generators],
        coroot_basis=[list(row) for row in datum.coroot_basis],
        modulus=datum.modulus,
        automorphisms=[
            AutomorphismEntry(name=name, matrix=[list(row) for row in phi.matrix])
            for name, phi in sorted((automorphisms or {}).items())
        ],
    )


def from_file(doc: DatumFile) -> tuple[RootDatum, dict[str, DatumAutomorphism]]:
    datum = RootDatum(
        rank=doc.rank,
        weyl_generators=tuple(freeze(g) for g in doc.weyl_generators),
        coroot_basis=freeze(doc.coroot_basis) if doc.coroot_basis and doc.coroot_basis[0] else tuple(() for _ in range(doc.rank)),
        modulus=doc.modulus,
    )
    if doc.label:
        labeled = parse_label(doc.label)
        same = (
            labeled.rank == datum.rank
            and labeled.weyl_generators == datum.weyl_generators
            and labeled.coroot_basis == datum.coroot_basis
            and doc.modulus is None
        )
        if not same:
            raise fail("INVALID_DATUM_FILE", status_code=400, reason=f"matrices do not match label {doc.label}")
        datum = labeled
    automorphisms = {
        entry.name: make_automorphism(entry.matrix, kind="diagram", modulus=doc.modulus)
        for entry in doc.automorphisms
    }
    return datum, automorphisms


def dumps(doc: DatumFile) -> str:
    """Forma canonica: chaves ordenadas, sem espacos."""
    return json.dumps(doc.model_dump(), sort_keys=True, separators=(",", ":"))


def loads(text: str) -> DatumFile:
    try:
        return DatumFile.model_validate(json.loads(text))
    except json.JSONDecodeError as exc:
        raise fail("INVALID_DATUM_FILE", status_code=400, reason=f"not JSON ({exc.msg})") from None
    except ValidationError as exc:
        first = exc.errors()[0]
        where = ".".join(str(part) for part in first.get("loc", ())) or "document"
        raise fail("INVALID_DATUM_FILE", status_code=400, reason=f"{where}: {first.get('msg')}") from None


def read_datum(path: str | Path) -> tuple[RootDatum, dict[str, DatumAutomorphism]]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise fail("INVALID_DATUM_FILE", status_code=400, reason=str(exc)) from None
    datum, automorphisms = from_file(loads(text))
    logger.debug("datum_read path=%s rank=%s automorphisms=%s", path, datum.rank, len(automorphisms))
    return datum, automorphisms


def write_datum(path: str | Path, datum: RootDatum, automorphisms: dict[str, DatumAutomorphism] | None = None) -> None:
    Path(path).write_text(dumps(to_file(datum, automorphisms)) + "\n", encoding="utf-8")
