#!/usr/bin/env python3
"""Record API responses for the frontend contract tests.

The board must show exactly the numbers the service returns, so its tests
replay these recorded bodies through a stubbed fetch. Regenerate after
any engine change:

    python3 scripts/make_frontend_fixtures.py
"""
from __future__ import annotations

import json
from pathlib import Path

from fastapi.testclient import TestClient

from capflow import store
from capflow.api import VERSION_HEADER, create_app

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "frontend" / "tests" / "fixtures"
SOURCE = ROOT / "tests" / "fixtures" / "semester_12x4.json"


def _write(name: str, payload) -> None:
    (FIXTURES / name).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    print(f"wrote frontend/tests/fixtures/{name}")


def main() -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    semester = store.load(SOURCE)
    client = TestClient(create_app(semester))

    allocate = client.post("/allocate", headers={VERSION_HEADER: str(semester.version)})
    assert allocate.status_code == 200

    state = client.get("/state")
    _write("state.json", state.json())
    _write("balance.json", client.get("/balance").json())
    _write("demand.json", client.get("/demand").json())
    allocation = client.get("/allocation").json()
    _write("allocation.json", allocation)
    _write("metrics.json", client.get("/allocation/metrics").json())

    # a concrete move: first member of the first group to the second group
    pid, members = sorted(allocation["groups"].items())[0]
    sid = members[0]
    target = next(p for p in sorted(allocation["groups"]) if p != pid)
    whatif = client.post("/allocation/whatif", json={"student_id": sid, "target": target})
    assert whatif.status_code == 200
    _write("whatif_move.json", {"student_id": sid, "from": pid, "target": target, "response": whatif.json()})

    version = int(state.headers[VERSION_HEADER])
    moved = client.post(
        "/allocation/moves", headers={VERSION_HEADER: str(version)}, json={"student_id": sid, "target": target}
    )
    assert moved.status_code == 200
    _write("allocation_after_move.json", moved.json())
    _write("metrics_after_move.json", client.get("/allocation/metrics").json())

    inverse = client.post(
        "/allocation/moves",
        headers={VERSION_HEADER: str(version + 1)},
        json={"student_id": sid, "target": pid},
    )
    assert inverse.status_code == 200
    _write("allocation_after_inverse.json", inverse.json())

    _write(
        "meta.json",
        {
            "initial_version": version,
            "moved_version": version + 1,
            "student_id": sid,
            "from": pid,
            "target": target,
        },
    )


if __name__ == "__main__":
    main()
