"""HTTP facade over the engine for the what-if console and for scripts.

Endpoints (UTF-8 JSON, stateless apart from the in-memory job registry):

    GET    /models                 model ids and names, lexicographic by id
    GET    /models/{id}/schema     variables, states, parents, role tags
    POST   /models/{id}/query      posterior + risk group under evidence/do
    POST   /models/{id}/bounds     start a bound search job (202 + job id)
    GET    /jobs/{job}             poll job progress / result
    DELETE /jobs/{job}             cancel a running job

Bound searches are the only potentially slow calls, so they run as
cancellable background jobs with polling; everything else is synchronous.
Responses depend only on the request and the model files, and numbers are
identical to the CLI's ``--json`` output for the same inputs.

Error mapping: 404 unknown model or job, 409 contradictory evidence or a
model whose bound job slot is busy, 413 capacity, 422 anything else invalid.
"""

from __future__ import annotations

import itertools
import threading
from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field

from . import __version__
from .causal import (
    DEFAULT_SPACE_CAP,
    InterventionChoice,
    InterventionSpace,
    bound_interventions,
    interventional_query,
)
from .classifier import DEFAULT_RISK_TABLE
from .errors import (
    CapacityError,
    EngineError,
    InconsistentEvidenceError,
    SearchCancelled,
)
from .manifest import ModelManifest, load_manifest
from .model import Network, parse_network


class TargetRef(BaseModel):
    variable: str
    state: str


class QueryRequest(BaseModel):
    target: TargetRef
    evidence: dict[str, str] = Field(default_factory=dict)
    do: dict[str, str] = Field(default_factory=dict)


class SpaceEntry(BaseModel):
    variable: str
    values: list[str]
    may_abstain: bool = True


class SpaceDoc(BaseModel):
    interventions: list[SpaceEntry] = Field(default_factory=list)


class BoundsRequest(BaseModel):
    target: TargetRef
    evidence: dict[str, str] = Field(default_factory=dict)
    direction: str = "max"
    space: SpaceDoc | None = None


def _to_space(doc: SpaceDoc) -> InterventionSpace:
    return InterventionSpace(
        tuple(
            InterventionChoice(e.variable, tuple(e.values), e.may_abstain)
            for e in doc.interventions
        )
    )


class ModelStore:
    """Immutable model cache over a directory of network documents."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self._cache: dict[str, tuple[Network, ModelManifest]] = {}
        self._lock = threading.Lock()

    def ids(self) -> list[str]:
        return sorted(
            p.stem
            for p in self.root.glob("*.json")
            if not p.name.endswith(".manifest.json")
        )

    def load(self, model_id: str) -> tuple[Network, ModelManifest]:
        with self._lock:
            if model_id in self._cache:
                return self._cache[model_id]
        path = self.root / f"{model_id}.json"
        if model_id not in self.ids() or not path.exists():
            raise HTTPException(status_code=404, detail=f"no model {model_id!r}")
        try:
            net = parse_network(path.read_text(encoding="utf-8"))
            manifest = load_manifest(path)
        except EngineError as exc:
            raise HTTPException(
                status_code=422,
                detail={"code": exc.code, "message": f"model {model_id!r}: {exc}"},
            ) from None
        with self._lock:
            self._cache[model_id] = (net, manifest)
        return net, manifest


class BoundJob:
    def __init__(self, job_id: str, model_id: str, total: int):
        self.id = job_id
        self.model_id = model_id
        self.total = total
        self.explored = 0
        self.status = "running"
        self.result: dict | None = None
        self.error: str | None = None
        self.cancel_event = threading.Event()


class JobRegistry:
    def __init__(self, max_per_model: int = 1):
        self.max_per_model = max_per_model
        self._jobs: dict[str, BoundJob] = {}
        self._counter = itertools.count(1)
        self._lock = threading.Lock()

    def create(self, model_id: str, total: int) -> BoundJob:
        with self._lock:
            running = sum(
                1
                for j in self._jobs.values()
                if j.model_id == model_id and j.status == "running"
            )
            if running >= self.max_per_model:
                raise HTTPException(
                    status_code=409,
                    detail=f"a bound job is already running for model {model_id!r}",
                )
            job = BoundJob(f"job-{next(self._counter)}", model_id, total)
            self._jobs[job.id] = job
            return job

    def get(self, job_id: str) -> BoundJob:
        job = self._jobs.get(job_id)
        if job is None:
            raise HTTPException(status_code=404, detail=f"no job {job_id!r}")
        return job


def _error_response(exc: EngineError) -> HTTPException:
    if isinstance(exc, InconsistentEvidenceError):
        return HTTPException(status_code=409, detail={"code": exc.code, "message": str(exc)})
    if isinstance(exc, CapacityError):
        return HTTPException(status_code=413, detail={"code": exc.code, "message": str(exc)})
    return HTTPException(status_code=422, detail={"code": exc.code, "message": str(exc)})


def create_app(
    model_dir: str | Path,
    *,
    ui_dir: str | Path | None = None,
    max_jobs_per_model: int = 1,
) -> FastAPI:
    """Build the service over a directory of model documents."""
    store = ModelStore(model_dir)
    jobs = JobRegistry(max_jobs_per_model)
    app = FastAPI(title="intervene-bn", version=__version__)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.get("/models")
    def list_models():
        out = []
        for model_id in store.ids():
            try:
                net, _ = store.load(model_id)
            except HTTPException:
                continue  # unparseable files surface on direct access, not here
            out.append({"id": model_id, "name": net.name})
        return out

    @app.get("/models/{model_id}/schema")
    def model_schema(model_id: str):
        net, manifest = store.load(model_id)
        return {
            "id": model_id,
            "name": net.name,
            "variables": [
                {
                    "name": v.name,
                    "states": list(v.states),
                    "parents": list(v.parents),
                    "roles": list(manifest.roles.get(v.name, ())),
                }
                for v in net.variables
            ],
        }

    @app.post("/models/{model_id}/query")
    def query(model_id: str, body: QueryRequest):
        net, manifest = store.load(model_id)
        table = manifest.risk_table or DEFAULT_RISK_TABLE
        try:
            state_idx = net.state_index(body.target.variable, body.target.state)
            dist = interventional_query(
                net, body.target.variable, body.evidence, body.do
            )
        except EngineError as exc:
            raise _error_response(exc) from None
        probability = dist.probs[state_idx]
        return {
            "variable": body.target.variable,
            "states": list(net.variable(body.target.variable).states),
            "distribution": list(dist.probs),
            "state": body.target.state,
            "probability": probability,
            "risk_group": table.group(probability),
        }

    @app.post("/models/{model_id}/bounds", status_code=202)
    def start_bounds(model_id: str, body: BoundsRequest):
        net, manifest = store.load(model_id)
        if body.space is not None:
            space = _to_space(body.space)
        elif manifest.default_space is not None:
            space = manifest.default_space
        else:
            raise HTTPException(
                status_code=422,
                detail={
                    "code": "no-space",
                    "message": "request has no intervention space and the model manifest defines no default",
                },
            )
        if body.direction not in ("max", "min"):
            raise HTTPException(
                status_code=422,
                detail={"code": "bad-direction", "message": f"direction {body.direction!r}"},
            )
        try:
            space.validate(net)
            net.state_index(body.target.variable, body.target.state)
            size = space.size()
            if size > DEFAULT_SPACE_CAP:
                raise CapacityError(
                    f"intervention space has {size} assignments, cap is {DEFAULT_SPACE_CAP}",
                    size=size,
                    cap=DEFAULT_SPACE_CAP,
                )
        except EngineError as exc:
            raise _error_response(exc) from None
        except ValueError as exc:
            raise HTTPException(
                status_code=422, detail={"code": "invalid-space", "message": str(exc)}
            ) from None

        job = jobs.create(model_id, size)

        def progress(explored: int, total: int):
            job.explored = explored
            job.total = total

        def run():
            try:
                result = bound_interventions(
                    net,
                    body.target.variable,
                    body.target.state,
                    body.evidence,
                    space,
                    body.direction,
                    progress=progress,
                    should_cancel=job.cancel_event.is_set,
                )
            except SearchCancelled:
                job.status = "cancelled"
            except EngineError as exc:
                job.status = "error"
                job.error = f"{exc.code}: {exc}"
            except Exception as exc:  # pragma: no cover - defensive
                job.status = "error"
                job.error = str(exc)
            else:
                job.result = {
                    "direction": result.direction,
                    "value": result.value,
                    "witness": result.witness,
                    "explored": result.explored,
                }
                job.status = "done"

        thread = threading.Thread(target=run, name=job.id, daemon=True)
        thread.start()
        return {"job": job.id, "status_url": f"/jobs/{job.id}"}

    @app.get("/jobs/{job_id}")
    def job_status(job_id: str):
        job = jobs.get(job_id)
        return {
            "job": job.id,
            "model": job.model_id,
            "status": job.status,
            "explored": job.explored,
            "total": job.total,
            "result": job.result,
            "error": job.error,
        }

    @app.delete("/jobs/{job_id}")
    def cancel_job(job_id: str):
        job = jobs.get(job_id)
        if job.status == "running":
            job.cancel_event.set()
        return {"job": job.id, "status": job.status, "cancelling": job.status == "running"}

    if ui_dir is not None and Path(ui_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="console")

    return app
