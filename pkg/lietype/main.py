from __future__ import annotations

import logging
from typing import Any, Callable
from uuid import uuid4

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from lietype import __version__, service, store
from lietype.config import LOG_LEVEL
from lietype.errors import AppError
from lietype.i18n import msg
from lietype.models import (
    DatumRequest,
    DegreesRequest,
    EnvelopeError,
    EnvelopeOk,
    ErrorPayload,
    FixedDatumRequest,
    SubgroupRequest,
    TezukaRequest,
    UntwistRequest,
    ValidateRequest,
    VerdictRequest,
)

logging.basicConfig(level=LOG_LEVEL)
logger = logging.getLogger("lietype")

app = FastAPI(title="lietype API", version=__version__)


@app.middleware("http")
async def log_requests(request: Request, call_next):
    logger.info("request method=%s path=%s", request.method, request.url.path)
    try:
        response = await call_next(request)
        logger.info("response method=%s path=%s status=%s", request.method, request.url.path, response.status_code)
        return response
    except Exception:
        logger.exception("request_failed method=%s path=%s", request.method, request.url.path)
        raise


report_store = store.get_store()


def envelope_ok(data: dict[str, Any]) -> JSONResponse:
    payload = EnvelopeOk(data=data)
    return JSONResponse(status_code=200, content=payload.model_dump())


def envelope_error(code: str, user_message: str, status_code: int, details: dict[str, Any] | None = None) -> JSONResponse:
    correlation_id = str(uuid4())
    payload = EnvelopeError(
        error=ErrorPayload(
            code=code,
            user_message=user_message,
            correlation_id=correlation_id,
            details=details or {},
        )
    )
    return JSONResponse(status_code=status_code, content=payload.model_dump())


def _locale(request: Request) -> str | None:
    return request.headers.get("accept-language")


@app.exception_handler(AppError)
async def app_error_handler(request: Request, exc: AppError) -> JSONResponse:
    logger.warning("app_error code=%s", exc.code)
    message = msg(_locale(request), exc.code.lower(), **exc.details)
    return envelope_error(exc.code, message, exc.status_code, exc.details)


@app.exception_handler(RequestValidationError)
async def validation_error_handler(request: Request, exc: RequestValidationError) -> JSONResponse:
    first = exc.errors()[0] if exc.errors() else {}
    reason = f"{'.'.join(str(p) for p in first.get('loc', ()))}: {first.get('msg', 'invalid request')}"
    return envelope_error("INVALID_INPUT", msg(_locale(request), "invalid_input", reason=reason), 400)


@app.exception_handler(Exception)
async def unhandled_error_handler(request: Request, exc: Exception) -> JSONResponse:
    logger.exception("unhandled_error")
    return envelope_error("INTERNAL_ERROR", msg(_locale(request), "internal_error"), 500)


def _cached(command: str, request: DatumRequest | SubgroupRequest, compute: Callable[[], dict[str, Any]]) -> dict[str, Any]:
    key = store.report_key(command, request.model_dump(mode="json"))
    report = report_store.get_report(key)
    if report is not None:
        logger.info("report_cache_hit command=%s", command)
        return report
    report = compute()
    report_store.put_report(key, report)
    return report


@app.get("/health")
async def health() -> JSONResponse:
    return envelope_ok({"status": "ok", "version": __version__})


@app.post("/degrees")
def degrees(request: DegreesRequest) -> JSONResponse:
    datum, automorphisms = service.resolve_datum(request.type, request.datum)
    tau = service.resolve_twist(datum, automorphisms, request.tau, request.ell, request.precision)
    return envelope_ok(service.degrees_payload(datum, tau, request.cap))


@app.post("/fixed-datum")
def fixed_datum(request: FixedDatumRequest) -> JSONResponse:
    def compute() -> dict[str, Any]:
        datum, automorphisms = service.resolve_datum(request.type, request.datum)
        tau = service.resolve_twist(datum, automorphisms, request.tau, request.ell, request.precision)
        return service.fixed_datum_payload(datum, tau, request.ell, request.cap, request.all_lifts)

    return envelope_ok(_cached("fixed-datum", request, compute))


@app.post("/untwist")
def untwist(request: UntwistRequest) -> JSONResponse:
    def compute() -> dict[str, Any]:
        datum, automorphisms = service.resolve_datum(request.type, request.datum)
        tau = service.resolve_twist(datum, automorphisms, request.tau, request.ell, request.precision)
        return service.untwist_payload(datum, tau, request.q, request.ell, request.precision, request.cap)

    return envelope_ok(_cached("untwist", request, compute))


@app.post("/tezuka")
def tezuka(request: TezukaRequest) -> JSONResponse:
    def compute() -> dict[str, Any]:
        datum, automorphisms = service.resolve_datum(request.type, request.datum)
        tau = service.resolve_twist(datum, automorphisms, request.tau, request.ell, request.precision)
        return service.tezuka_payload(
            datum, tau, request.q, request.ell, request.truncation, request.precision, request.cap
        )

    return envelope_ok(_cached("tezuka", request, compute))


@app.post("/verdict")
def verdict(request: VerdictRequest) -> JSONResponse:
    datum, automorphisms = service.resolve_datum(request.type, request.datum)
    tau = service.resolve_twist(datum, automorphisms, request.tau, request.ell)
    return envelope_ok(service.verdict_payload(datum, tau, request.ell, request.cap))


@app.post("/subgroup")
def subgroup(request: SubgroupRequest) -> JSONResponse:
    return envelope_ok(
        service.subgroup_payload(request.ell, request.q, request.precision, request.other, request.descriptor)
    )


@app.post("/validate")
def validate(request: ValidateRequest) -> JSONResponse:
    datum, _ = service.resolve_datum(None, request.datum)
    return envelope_ok(service.validate_payload(datum))
