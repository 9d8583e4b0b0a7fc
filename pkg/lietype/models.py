from __future__ import annotations

from typing import Any, Optional

from pydantic import BaseModel, Field, field_validator, model_validator

from lietype.datafile import DatumFile


class DatumRequest(BaseModel):
    type: Optional[str] = None
    datum: Optional[DatumFile] = None
    tau: str = "id"
    cap: Optional[int] = Field(default=None, gt=0)

    @model_validator(mode="after")
    def _one_source(self) -> "DatumRequest":
        if (self.type is None) == (self.datum is None):
            raise ValueError("give exactly one of 'type' or 'datum'")
        return self


class DegreesRequest(DatumRequest):
    ell: Optional[int] = None
    precision: Optional[int] = Field(default=None, ge=1)


class FixedDatumRequest(DatumRequest):
    ell: int
    precision: Optional[int] = Field(default=None, ge=1)
    all_lifts: bool = False


class UntwistRequest(DatumRequest):
    q: str
    ell: int
    precision: Optional[int] = Field(default=None, ge=1)


class TezukaRequest(UntwistRequest):
    truncation: Optional[int] = Field(default=None, ge=0)


class VerdictRequest(DatumRequest):
    ell: int


class SubgroupRequest(BaseModel):
    ell: int
    q: str
    precision: Optional[int] = Field(default=None, ge=1)
    other: Optional[str] = None
    descriptor: Optional[str] = None


class ValidateRequest(BaseModel):
    datum: DatumFile


class ErrorPayload(BaseModel):
    code: str
    user_message: str
    correlation_id: Optional[str] = None
    details: dict[str, Any] = Field(default_factory=dict)

    @field_validator("details", mode="before")
    @classmethod
    def _plain_details(cls, value: dict[str, Any] | None) -> dict[str, Any]:
        return {k: v if isinstance(v, (int, str, float, bool)) or v is None else str(v) for k, v in (value or {}).items()}


class EnvelopeOk(BaseModel):
    ok: bool = True
    data: dict[str, Any]


class EnvelopeError(BaseModel):
    ok: bool = False
    error: ErrorPayload
