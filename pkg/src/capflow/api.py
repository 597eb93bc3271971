"""HTTP/JSON service: thin, gated, versioned wrappers over the module
operations.

Every mutating endpoint requires the ``X-Semester-Version`` header to
match the current state (optimistic concurrency: stale writers get a 409
and must re-read), checks the workflow gate, applies the module
operation, and persists the bumped snapshot. Response bodies are the
module results serialized canonically; the current version always rides
on the ``X-Semester-Version`` response header.
"""
from __future__ import annotations

import threading
from dataclasses import asdict
from pathlib import Path
from typing import Any, Callable

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from . import advisors as advisors_mod
from . import allocator, balance, ballots, intake, matching, store, surveys, workflow
from .errors import (
    CapacityError,
    CapflowError,
    DuplicateId,
    FinalizeError,
    IntegrityError,
    InvalidInput,
    LifecycleError,
    NotFound,
    OracleLimit,
    PhaseError,
    VersionConflict,
)
from .intake import ConformityChecklist, ProposalForm, SeatProfile
from .state import Semester

VERSION_HEADER = "X-Semester-Version"

_STATUS: tuple[tuple[type[CapflowError], int], ...] = (
    (VersionConflict, 409),
    (PhaseError, 409),
    (FinalizeError, 409),
    (LifecycleError, 409),
    (DuplicateId, 409),
    (CapacityError, 409),
    (NotFound, 404),
    (OracleLimit, 400),
    (InvalidInput, 400),
    (IntegrityError, 500),
)


def _status_for(exc: CapflowError) -> int:
    for klass, status in _STATUS:
        if isinstance(exc, klass):
            return status
    return 500


def create_app(
    semester: Semester,
    snapshot_path: str | Path | None = None,
    ui_dir: str | Path | None = None,
) -> FastAPI:
    app = FastAPI(title="capflow", docs_url=None, redoc_url=None)
    lock = threading.Lock()

    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    @app.exception_handler(CapflowError)
    async def _handle(request: Request, exc: CapflowError) -> JSONResponse:
        return JSONResponse(
            status_code=_status_for(exc),
            content=exc.to_dict(),
            headers={VERSION_HEADER: str(semester.version)},
        )

    def respond(body: Any, status: int = 200) -> JSONResponse:
        return JSONResponse(status_code=status, content=body, headers={VERSION_HEADER: str(semester.version)})

    def check_version(request: Request) -> None:
        raw = request.headers.get(VERSION_HEADER)
        if raw is None:
            raise VersionConflict(f"mutations require the {VERSION_HEADER} header", version=semester.version)
        try:
            seen = int(raw)
        except ValueError:
            raise VersionConflict(f"{VERSION_HEADER} must be an integer", header=raw) from None
        if seen != semester.version:
            raise VersionConflict(
                f"stale version {seen}; current is {semester.version}",
                seen=seen,
                version=semester.version,
            )

    def mutate(request: Request, action: str, op: Callable[[], Any], status: int = 200) -> JSONResponse:
        with lock:
            check_version(request)
            workflow.require_gate(action, semester.phase)
            body = op()
            if snapshot_path is not None:
                store.save(semester, snapshot_path)
            return respond(body, status)

    # -- reads ---------------------------------------------------------------

    @app.get("/state")
    def get_state() -> JSONResponse:
        with lock:
            return respond(store.semester_to_dict(semester))

    @app.get("/balance")
    def get_balance() -> JSONResponse:
        with lock:
            report = balance.coverage(semester.proposals.values(), semester.students.values(), semester.config)
            return respond(asdict(report))

    @app.get("/demand")
    def get_demand() -> JSONResponse:
        with lock:
            approved = [pid for pid, p in semester.proposals.items() if p.status == "approved"]
            stats = ballots.demand_stats(semester.ballots.values(), approved)
            return respond([asdict(s) for s in stats])

    @app.get("/allocation")
    def get_allocation() -> JSONResponse:
        with lock:
            if semester.allocation is None:
                raise NotFound("no allocation computed yet")
            return respond(store.allocation_to_dict(semester.allocation))

    @app.get("/allocation/metrics")
    def get_allocation_metrics() -> JSONResponse:
        # Per-card/per-column numbers for the board, computed server-side so
        # the UI never re-derives a metric.
        with lock:
            if semester.allocation is None:
                raise NotFound("no allocation computed yet")
            allocation = semester.allocation
            instance = semester.instance()
            alignment: dict[str, float] = {}
            assigned_rank: dict[str, int | None] = {}
            seat_unmatched: dict[str, int] = {}
            sizes: dict[str, int] = {}
            for pid in sorted(allocation.groups):
                members = sorted(allocation.groups[pid])
                proposal = instance.proposals[pid]
                sizes[pid] = len(members)
                seat_unmatched[pid] = matching.unmatched_count(
                    (instance.students[s] for s in members), proposal.seat_profile
                )
                for sid in members:
                    alignment[sid] = ballots.alignment_score(instance.students[sid], proposal)
                    assigned_rank[sid] = allocator.rank_on_ballot(instance, sid, pid)
            return respond(
                {
                    "alignment": alignment,
                    "assigned_rank": assigned_rank,
                    "seat_unmatched": seat_unmatched,
                    "sizes": sizes,
                }
            )

    @app.get("/surveys/summary")
    def get_survey_summary() -> JSONResponse:
        with lock:
            return respond(
                {
                    "partner_nps": asdict(surveys.nps_summary(semester.partner_surveys.values())),
                    "student_recommendations": asdict(
                        surveys.recommendation_breakdown(semester.student_surveys.values())
                    ),
                }
            )

    # -- intake ----------------------------------------------------------------

    @app.post("/students")
    async def post_student(request: Request) -> JSONResponse:
        payload = await request.json()

        def op() -> Any:
            student = store.student_from_dict(payload)
            sid = intake.register_student(semester, student)
            return {"student_id": sid}

        return mutate(request, "register_student", op, status=201)

    @app.patch("/students/{student_id}")
    async def patch_student(student_id: str, request: Request) -> JSONResponse:
        payload = await request.json()

        def op() -> Any:
            student = intake.update_student(semester, student_id, payload)
            return store.student_to_dict(student)

        return mutate(request, "update_student", op)

    @app.post("/proposals")
    async def post_proposal(request: Request) -> JSONResponse:
        payload = await request.json()

        def op() -> Any:
            form = ProposalForm(
                title=payload.get("title", ""),
                description=payload.get("description", ""),
                deliverables=payload.get("deliverables", ""),
                areas=frozenset(payload.get("areas", [])),
                org_id=payload.get("org_id", ""),
                resources=payload.get("resources"),
                observations=payload.get("observations"),
            )
            pid = intake.submit_proposal(semester, form, payload.get("proposal_id"))
            return {"proposal_id": pid}

        return mutate(request, "submit_proposal", op, status=201)

    @app.post("/proposals/{proposal_id}/review")
    async def post_review(proposal_id: str, request: Request) -> JSONResponse:
        payload = await request.json()

        def op() -> Any:
            checklist = ConformityChecklist(tuple(payload["items"]), payload.get("notes", ""))
            proposal = intake.review_conformity(semester, proposal_id, checklist, payload.get("decision_notes", ""))
            return store.proposal_to_dict(proposal)

        return mutate(request, "review_conformity", op)

    @app.post("/proposals/{proposal_id}/profile")
    async def post_profile(proposal_id: str, request: Request) -> JSONResponse:
        payload = await request.json()

        def op() -> Any:
            profile = SeatProfile(tuple(frozenset(seat) for seat in payload["seats"]))
            proposal = intake.set_seat_profile(semester, proposal_id, profile)
            return store.proposal_to_dict(proposal)

        return mutate(request, "set_seat_profile", op)

    # -- ballots -----------------------------------------------------------------

    @app.post("/ballots")
    async def post_ballot(request: Request) -> JSONResponse:
        payload = await request.json()

        def op() -> Any:
            ballot = ballots.submit_ballot(
                semester, payload["student_id"], payload["choices"], payload.get("submitted_at")
            )
            return {"student_id": ballot.student_id, "choices": list(ballot.choices), "submitted_at": ballot.submitted_at}

        return mutate(request, "submit_ballot", op, status=201)

    # -- allocation ----------------------------------------------------------------

    @app.post("/allocate")
    async def post_allocate(request: Request) -> JSONResponse:
        def op() -> Any:
            semester.allocation = allocator.allocate(semester.instance(), semester.config)
            semester.bump()
            return store.allocation_to_dict(semester.allocation)

        return mutate(request, "allocate", op)

    def _target(payload: dict) -> str | None:
        target = payload.get("target")
        if target in (None, "unassigned"):
            return None
        return target

    @app.post("/allocation/whatif")
    async def post_whatif(request: Request) -> JSONResponse:
        payload = await request.json()
        with lock:
            workflow.require_gate("what_if_move", semester.phase)
            if semester.allocation is None:
                raise NotFound("no allocation computed yet")
            preview = allocator.what_if_move(
                semester.allocation, payload["student_id"], _target(payload), semester.instance(), semester.config
            )
            return respond(asdict(preview))

    @app.post("/allocation/moves")
    async def post_move(request: Request) -> JSONResponse:
        payload = await request.json()

        def op() -> Any:
            if semester.allocation is None:
                raise NotFound("no allocation computed yet")
            semester.allocation = allocator.apply_move(
                semester.allocation, payload["student_id"], _target(payload), semester.instance(), semester.config
            )
            semester.bump()
            return store.allocation_to_dict(semester.allocation)

        return mutate(request, "apply_move", op)

    @app.post("/conflicts/waive")
    async def post_waive(request: Request) -> JSONResponse:
        payload = await request.json()

        def op() -> Any:
            if semester.allocation is None:
                raise NotFound("no allocation computed yet")
            semester.allocation = allocator.waive_conflict(
                semester.allocation, payload["student_id"], payload["proposal_id"], payload.get("kind")
            )
            semester.bump()
            return store.allocation_to_dict(semester.allocation)

        return mutate(request, "waive_conflict", op)

    @app.post("/allocation/finalize")
    async def post_finalize(request: Request) -> JSONResponse:
        def op() -> Any:
            if semester.allocation is None:
                raise NotFound("no allocation computed yet")
            semester.allocation = allocator.finalize(semester.allocation, semester.config)
            semester.bump()
            return store.allocation_to_dict(semester.allocation)

        return mutate(request, "finalize", op)

    # -- advisors ----------------------------------------------------------------

    @app.post("/advisors/assign")
    async def post_assign_advisors(request: Request) -> JSONResponse:
        payload = await request.json()

        def op() -> Any:
            for entry in payload.get("advisors", []):
                semester.register_advisor(
                    advisors_mod.Advisor(
                        entry["id"], entry["name"], entry.get("max_load", 2), frozenset(entry.get("area_prefs", []))
                    )
                )
            if semester.allocation is None or not semester.allocation.finalized:
                raise LifecycleError("advisors are assigned after the allocation is finalized")
            assignment = advisors_mod.assign_advisors(
                semester.allocation.groups, semester.advisors, semester.proposals
            )
            semester.advisor_assignments = assignment
            semester.bump()
            return assignment

        return mutate(request, "assign_advisors", op)

    # -- surveys -----------------------------------------------------------------

    @app.post("/surveys")
    async def post_survey(request: Request) -> JSONResponse:
        payload = await request.json()

        def op() -> Any:
            key = surveys.record_survey(semester, payload["kind"], payload["payload"])
            return {"key": key}

        return mutate(request, "record_survey", op, status=201)

    # -- workflow ----------------------------------------------------------------

    @app.post("/phase/advance")
    async def post_advance(request: Request) -> JSONResponse:
        payload = await request.json()

        def op() -> Any:
            try:
                target = workflow.Phase(payload["target"])
            except ValueError:
                raise InvalidInput(f"unknown phase {payload['target']!r}", phase=payload["target"]) from None
            workflow.advance(semester, target)
            return {"phase": semester.phase.value, "version": semester.version}

        return mutate(request, "advance", op)

    return app


def serve(snapshot_path: str | Path, bind: str = "127.0.0.1:8000", ui_dir: str | Path | None = None) -> None:
    """Load a snapshot and serve it until interrupted.

    With ``ui_dir`` pointing at a built frontend/ checkout, the admin
    board is mounted at /ui.
    """
    import uvicorn

    semester = store.load(snapshot_path)
    app = create_app(semester, snapshot_path, ui_dir)
    host, _, port = bind.partition(":")
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8000), log_level="warning")
