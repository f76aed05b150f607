"""HTTP API for the analyst console.

Every response carries the active taxonomy version in the
``X-Taxonomy-Version`` header.  Computation endpoints are pure: same body,
same response.  Errors use structured problem documents
``{"code", "message", "details": [...]}``.
"""

from __future__ import annotations

import os
from pathlib import Path
from typing import Any, Optional

from fastapi import FastAPI, Request
from fastapi.responses import FileResponse, HTMLResponse, JSONResponse
from pydantic import BaseModel

from . import reporting
from .extended import analyze, extended_to_dict
from .hta import HtaParseError, count_nodes, collect_assignments, parse_hta, validate_hta
from .project import (Project, ProjectConflict, ProjectNotFound,
                      load_project, project_from_dict, project_to_dict,
                      save_project)
from .screening import AssessmentError, assessment_from_dict, screen, screening_to_dict
from .taxonomy import (Taxonomy, TaxonomyError, default_taxonomy,
                       load_taxonomy, taxonomy_from_dict, taxonomy_to_dict)
from .whatif import delta_to_dict, single_cpc_sweep

_PLACEHOLDER_HTML = """<!doctype html>
<html><head><title>creamkit</title></head>
<body><h1>creamkit API</h1>
<p>The analyst console assets are not installed. The JSON API is live under
<code>/api/</code>.</p></body></html>
"""


class ScreeningRequest(BaseModel):
    assessment: dict
    taxonomy: Optional[dict] = None


class HtaValidateRequest(BaseModel):
    hta: str
    taxonomy: Optional[dict] = None


class AnalysisRequest(BaseModel):
    hta: str
    assessment: dict
    taxonomy: Optional[dict] = None
    top: int = 5


def _problem(status: int, code: str, message: str, details: list | None = None):
    return JSONResponse(status_code=status, content={
        "code": code, "message": message, "details": details or []})


def resolve_base_taxonomy(explicit_path: str | Path | None = None) -> Taxonomy:
    """Startup resolution: explicit path > CREAMKIT_TAXONOMY env > default."""
    path = explicit_path or os.environ.get("CREAMKIT_TAXONOMY")
    if path:
        return load_taxonomy(Path(path))
    return default_taxonomy()


def create_app(taxonomy: Taxonomy | None = None,
               projects_dir: str | Path | None = None,
               static_dir: str | Path | None = None) -> FastAPI:
    base_taxonomy = taxonomy or resolve_base_taxonomy()
    projects_path = Path(projects_dir or os.environ.get("CREAMKIT_PROJECTS", "projects"))
    static_path = Path(static_dir) if static_dir else _default_static_dir()

    app = FastAPI(title="creamkit", version="0.1.0")

    @app.middleware("http")
    async def add_taxonomy_version(request: Request, call_next):
        response = await call_next(request)
        response.headers["X-Taxonomy-Version"] = base_taxonomy.version
        return response

    def effective_taxonomy(override: dict | None) -> Taxonomy:
        if override is not None:
            return taxonomy_from_dict(override)
        return base_taxonomy

    @app.get("/api/taxonomy")
    def get_taxonomy():
        return taxonomy_to_dict(base_taxonomy)

    @app.post("/api/hta/validate")
    def hta_validate(body: HtaValidateRequest):
        try:
            t = effective_taxonomy(body.taxonomy)
        except TaxonomyError as exc:
            return _problem(422, "taxonomy-invalid", "taxonomy rejected", exc.errors)
        try:
            tree = parse_hta(body.hta)
        except HtaParseError as exc:
            return _problem(422, "hta-parse", "document rejected",
                            [str(d) for d in exc.diagnostics])
        report = validate_hta(tree, t)
        if not report.ok:
            return _problem(422, "hta-invalid", "validation failed",
                            [str(v) for v in report.violations])
        return {"nodes": count_nodes(tree),
                "assignments": len(collect_assignments(tree))}

    @app.post("/api/screening")
    def screening(body: ScreeningRequest):
        try:
            t = effective_taxonomy(body.taxonomy)
            assessment = assessment_from_dict(body.assessment, t)
        except TaxonomyError as exc:
            return _problem(422, "taxonomy-invalid", "taxonomy rejected", exc.errors)
        except AssessmentError as exc:
            return _problem(422, "assessment-invalid", str(exc))
        return screening_to_dict(screen(assessment, t))

    @app.post("/api/analysis")
    def analysis(body: AnalysisRequest):
        try:
            t = effective_taxonomy(body.taxonomy)
            tree = parse_hta(body.hta)
            assessment = assessment_from_dict(body.assessment, t)
        except TaxonomyError as exc:
            return _problem(422, "taxonomy-invalid", "taxonomy rejected", exc.errors)
        except HtaParseError as exc:
            return _problem(422, "hta-parse", "document rejected",
                            [str(d) for d in exc.diagnostics])
        except AssessmentError as exc:
            return _problem(422, "assessment-invalid", str(exc))
        report = validate_hta(tree, t)
        if not report.ok:
            return _problem(422, "hta-invalid", "validation failed",
                            [str(v) for v in report.violations])
        result = analyze(tree, assessment, t)
        doc = extended_to_dict(result)
        doc["screening"] = screening_to_dict(screen(assessment, t))
        return doc

    @app.post("/api/whatif")
    def whatif(body: AnalysisRequest):
        try:
            t = effective_taxonomy(body.taxonomy)
            tree = parse_hta(body.hta)
            assessment = assessment_from_dict(body.assessment, t)
        except TaxonomyError as exc:
            return _problem(422, "taxonomy-invalid", "taxonomy rejected", exc.errors)
        except HtaParseError as exc:
            return _problem(422, "hta-parse", "document rejected",
                            [str(d) for d in exc.diagnostics])
        except AssessmentError as exc:
            return _problem(422, "assessment-invalid", str(exc))
        sweep = single_cpc_sweep(tree, assessment, t)
        return {"deltas": [delta_to_dict(d) for d in sweep]}

    @app.get("/api/projects/{project_id}")
    def get_project(project_id: str):
        try:
            return project_to_dict(load_project(project_id, projects_path))
        except ProjectNotFound as exc:
            return _problem(404, "project-missing", str(exc))

    @app.put("/api/projects/{project_id}")
    def put_project(project_id: str, body: dict):
        body = dict(body)
        body["id"] = project_id
        try:
            saved = save_project(project_from_dict(body), projects_path)
        except ProjectConflict as exc:
            return _problem(409, "project-conflict", str(exc))
        except (KeyError, ValueError) as exc:
            return _problem(422, "project-invalid", str(exc))
        return project_to_dict(saved)

    @app.get("/", response_class=HTMLResponse)
    def console():
        index = static_path / "index.html"
        if index.is_file():
            return HTMLResponse(index.read_text(encoding="utf-8"))
        return HTMLResponse(_PLACEHOLDER_HTML)

    @app.get("/static/{asset:path}")
    def static_asset(asset: str):
        target = (static_path / asset).resolve()
        if static_path.is_dir() and target.is_file() \
                and target.is_relative_to(static_path.resolve()):
            return FileResponse(target)
        return _problem(404, "asset-missing", f"no asset {asset!r}")

    return app


def _default_static_dir() -> Path:
    return Path(__file__).parent / "static"
