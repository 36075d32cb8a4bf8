"""HTTP JSON API for interactive search.

Endpoints:
  POST /search        {query, engine, rerank?, k?}  -> {hits: [...]}
  GET  /formula/{doc}/{formula}                     -> latex + context text
  POST /autocomplete  {symbols: [...]}              -> {candidates: [...]}
  GET  /health                                      -> version + index stats

Responses are JSON/UTF-8. Client errors use status 400 with an
``{"error": ...}`` body, unknown formulas 404, and 503 while no index is
loaded. The search handler funnels through the same engine code path as
the command line, so results are identical for identical parameters.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import __version__
from .engine import ENGINES, EngineSpec, RERANKERS, SearchEngine, run_item_id
from .errors import MathfindError
from .phoc.layout import SymbolBox
from .phoc.search import autocomplete as phoc_autocomplete


class SearchRequest(BaseModel):
    query: str
    engine: str = "slt"
    rerank: str = "none"
    k: int = Field(default=10, ge=1)
    fusion: str = "rrf"
    components: list[str] = []


class AutocompleteRequest(BaseModel):
    symbols: list[str]
    k: int = Field(default=10, ge=1)


class ApiError(Exception):
    def __init__(self, status: int, message: str):
        self.status = status
        self.message = message


def create_app(engine: SearchEngine | None) -> FastAPI:
    app = FastAPI(title="mathfind", version=__version__)
    app.state.engine = engine

    @app.exception_handler(ApiError)
    async def handle_api_error(_: Request, err: ApiError):
        return JSONResponse(status_code=err.status, content={"error": err.message})

    @app.exception_handler(RequestValidationError)
    async def handle_validation(_: Request, err: RequestValidationError):
        return JSONResponse(status_code=400, content={"error": str(err)})

    @app.exception_handler(Exception)
    async def handle_unexpected(_: Request, err: Exception):
        return JSONResponse(status_code=400, content={"error": str(err)})

    def current_engine() -> SearchEngine:
        if app.state.engine is None:
            raise ApiError(503, "index loading")
        return app.state.engine

    @app.get("/health")
    def health():
        eng = current_engine()
        return {
            "status": "ok",
            "version": __version__,
            "docs": eng.index.n_docs,
            "formulas": sum(len(f) for f in eng.index.doc_formulas),
            "terms": len(eng.index.terms),
        }

    @app.post("/search")
    def search(request: SearchRequest):
        eng = current_engine()
        if request.engine not in ENGINES:
            raise ApiError(400, f"unknown engine {request.engine!r}")
        if request.rerank not in RERANKERS:
            raise ApiError(400, f"unknown reranker {request.rerank!r}")
        if not request.query.strip():
            raise ApiError(400, "empty query")
        try:
            spec = EngineSpec(
                engine=request.engine,
                rerank=request.rerank,
                k=request.k,
                fusion=request.fusion,
                components=tuple(request.components),
            )
            hits = eng.search(request.query, spec)
        except MathfindError as err:
            raise ApiError(400, str(err))
        payload = []
        for hit in hits:
            latex = ""
            if hit.formula_id is not None:
                latex = eng.index.formula(hit.doc_id, hit.formula_id).latex
            payload.append(
                {
                    "docId": hit.doc_id,
                    "formulaId": hit.formula_id,
                    "itemId": run_item_id(hit, spec.doc_level),
                    "latex": latex,
                    "score": hit.score,
                    "matchedTerms": list(hit.matched_terms),
                }
            )
        return {"hits": payload}

    @app.get("/formula/{doc_id}/{formula_id}")
    def formula(doc_id: str, formula_id: str):
        eng = current_engine()
        try:
            doc_idx = eng.index.doc_index(doc_id)
            stored = eng.index.formula(doc_id, formula_id)
        except KeyError:
            raise ApiError(404, f"unknown formula {doc_id}/{formula_id}")
        return {
            "docId": doc_id,
            "formulaId": formula_id,
            "latex": stored.latex,
            "text": eng.index.doc_text[doc_idx],
        }

    @app.post("/autocomplete")
    def autocomplete(request: AutocompleteRequest):
        eng = current_engine()
        labels = [s for s in request.symbols if s.strip()]
        if not labels:
            raise ApiError(400, "no symbols entered")
        boxes = [SymbolBox(label, i, 0.0, i + 1, 1.0) for i, label in enumerate(labels)]
        hits = phoc_autocomplete(boxes, eng.phoc_store, request.k)
        candidates = []
        for hit in hits:
            stored = eng.index.formula(hit.doc_id, hit.formula_id)
            candidates.append(
                {
                    "docId": hit.doc_id,
                    "formulaId": hit.formula_id,
                    "latex": stored.latex,
                    "score": hit.score,
                }
            )
        return {"candidates": candidates}

    return app
