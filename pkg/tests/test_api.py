from __future__ import annotations

import json
from dataclasses import asdict

import pytest
from fastapi.testclient import TestClient

from capflow import balance, ballots as ballots_mod, store, synth
from capflow.api import VERSION_HEADER, create_app
from capflow.workflow import Phase

from conftest import FIXTURES


@pytest.fixture
def service(tmp_path):
    semester = store.load(FIXTURES / "semester_12x4.json")
    path = tmp_path / "live.json"
    store.save(semester, path)
    app = create_app(semester, path)
    client = TestClient(app)
    return semester, client, path


def _vh(semester) -> dict[str, str]:
    return {VERSION_HEADER: str(semester.version)}


class TestReads:
    def test_state_passthrough(self, service):
        semester, client, _ = service
        r = client.get("/state")
        assert r.status_code == 200
        assert r.json() == store.semester_to_dict(semester)
        assert r.headers[VERSION_HEADER] == str(semester.version)

    def test_balance_passthrough(self, service):
        semester, client, _ = service
        r = client.get("/balance")
        expected = asdict(
            balance.coverage(semester.proposals.values(), semester.students.values(), semester.config)
        )
        assert r.status_code == 200
        assert r.json() == json.loads(json.dumps(expected))

    def test_demand_passthrough(self, service):
        semester, client, _ = service
        approved = [pid for pid, p in semester.proposals.items() if p.status == "approved"]
        expected = [asdict(s) for s in ballots_mod.demand_stats(semester.ballots.values(), approved)]
        assert client.get("/demand").json() == expected

    def test_allocation_404_until_computed(self, service):
        _, client, _ = service
        assert client.get("/allocation").status_code == 404


class TestVersioning:
    def test_missing_header_rejected(self, service):
        _, client, _ = service
        r = client.post("/allocate")
        assert r.status_code == 409
        assert r.json()["code"] == "version_conflict"

    def test_stale_header_rejected_with_details(self, service):
        semester, client, _ = service
        r = client.post("/allocate", headers={VERSION_HEADER: "0"})
        assert r.status_code == 409
        assert r.json()["details"]["version"] == semester.version

    def test_version_increments_and_persists(self, service):
        semester, client, path = service
        before = semester.version
        r = client.post("/allocate", headers=_vh(semester))
        assert r.status_code == 200
        assert semester.version > before
        assert int(r.headers[VERSION_HEADER]) == semester.version
        on_disk = store.load(path)
        assert on_disk.version == semester.version
        assert store.semester_to_dict(on_disk)["allocation"] == r.json()


class TestGates:
    def test_ballot_rejected_outside_window(self, service):
        semester, client, _ = service
        r = client.post(
            "/ballots",
            headers=_vh(semester),
            json={"student_id": "s001", "choices": ["p001", "p002", "p003", "p004"]},
        )
        assert r.status_code == 409
        assert r.json()["code"] == "phase_gate"
        assert r.json()["details"]["phase"] == Phase.allocation.value

    def test_move_during_wrong_phase_gated(self, tmp_path):
        semester = synth.make_semester(4, 8, 3, phase=Phase.ballot_window)
        client = TestClient(create_app(semester))
        r = client.post(
            "/allocation/moves", headers=_vh(semester), json={"student_id": "s001", "target": "p001"}
        )
        assert r.status_code == 409
        assert r.json()["code"] == "phase_gate"


class TestAllocationFlow:
    def test_whatif_matches_apply(self, service):
        semester, client, _ = service
        client.post("/allocate", headers=_vh(semester))
        allocation = client.get("/allocation").json()
        pid, members = sorted(allocation["groups"].items())[0]
        sid = members[0]
        target_pid = next(p for p in sorted(allocation["groups"]) if p != pid)
        preview = client.post("/allocation/whatif", json={"student_id": sid, "target": target_pid})
        assert preview.status_code == 200
        delta = preview.json()["objective_delta"]
        before_total = allocation["objective"]["total"]
        moved = client.post(
            "/allocation/moves", headers=_vh(semester), json={"student_id": sid, "target": target_pid}
        )
        assert moved.status_code == 200
        after_total = moved.json()["objective"]["total"]
        assert after_total - before_total == pytest.approx(delta, abs=0.0)

    def test_move_to_unassigned_roundtrip(self, service):
        semester, client, _ = service
        client.post("/allocate", headers=_vh(semester))
        allocation = client.get("/allocation").json()
        pid, members = sorted(allocation["groups"].items())[0]
        sid = members[0]
        out = client.post(
            "/allocation/moves", headers=_vh(semester), json={"student_id": sid, "target": "unassigned"}
        )
        assert sid in out.json()["unassigned"]

    def test_unknown_student_404(self, service):
        semester, client, _ = service
        client.post("/allocate", headers=_vh(semester))
        r = client.post("/allocation/whatif", json={"student_id": "ghost", "target": "p001"})
        assert r.status_code == 404

    def test_waive_flow(self, service):
        semester, client, _ = service
        client.post("/allocate", headers=_vh(semester))
        flags = client.get("/allocation").json()["conflicts"]
        if not flags:
            pytest.skip("fixture produced no conflicts")
        flag = flags[0]
        r = client.post(
            "/conflicts/waive",
            headers=_vh(semester),
            json={"student_id": flag["student_id"], "proposal_id": flag["proposal_id"]},
        )
        assert r.status_code == 200
        updated = [
            f
            for f in r.json()["conflicts"]
            if f["student_id"] == flag["student_id"] and f["proposal_id"] == flag["proposal_id"]
        ]
        assert all(f["status"] == "waived" for f in updated)


class TestIntakeEndpoints:
    def test_student_registration_flow(self, tmp_path):
        semester = synth.make_semester(4, 4, 3, phase=Phase.interest_collection)
        client = TestClient(create_app(semester))
        r = client.post(
            "/students",
            headers=_vh(semester),
            json={"id": "zz1", "name": "Zed", "program": "CS", "gpa": 9.1},
        )
        assert r.status_code == 201
        assert r.json() == {"student_id": "zz1"}
        r = client.patch(
            "/students/zz1", headers=_vh(semester), json={"interests": ["robotics"]}
        )
        assert r.status_code == 200
        assert r.json()["interests"] == ["robotics"]

    def test_proposal_review_profile_flow(self, tmp_path):
        semester = synth.make_semester(4, 4, 3, phase=Phase.sourcing)
        client = TestClient(create_app(semester))
        r = client.post(
            "/proposals",
            headers=_vh(semester),
            json={
                "title": "New rig",
                "description": "Build it",
                "deliverables": "Rig",
                "areas": ["robotics"],
                "org_id": sorted(semester.organizations)[0],
            },
        )
        assert r.status_code == 201
        pid = r.json()["proposal_id"]
        r = client.post(
            f"/proposals/{pid}/profile",
            headers=_vh(semester),
            json={"seats": [["EC"], ["EC", "CS"]]},
        )
        assert r.status_code == 200
        r = client.post(
            f"/proposals/{pid}/review",
            headers=_vh(semester),
            json={"items": [True] * 10, "notes": "fine"},
        )
        assert r.status_code == 200
        assert r.json()["status"] == "approved"


class TestAdvisorsAndSurveys:
    def _advance(self, client, semester, target):
        r = client.post("/phase/advance", headers=_vh(semester), json={"target": target})
        assert r.status_code == 200, r.text

    def test_full_tail_of_semester(self, tmp_path):
        semester = synth.make_semester(8, 8, 2, phase=Phase.allocation)
        client = TestClient(create_app(semester))
        r = client.post("/allocate", headers=_vh(semester))
        assert r.status_code == 200
        # make the allocation finalizable: everyone placed, sizes 4+4
        sizes = sorted(len(m) for m in semester.allocation.groups.values())
        assert sizes == [4, 4], sizes
        r = client.post("/allocation/finalize", headers=_vh(semester))
        assert r.status_code == 200, r.text
        self._advance(client, semester, "advisor_assignment")
        r = client.post(
            "/advisors/assign",
            headers=_vh(semester),
            json={"advisors": [{"id": "a1", "name": "Prof A"}, {"id": "a2", "name": "Prof B"}]},
        )
        assert r.status_code == 200
        assert set(r.json()) == set(semester.allocation.groups)
        for phase in ("execution", "midterm_review", "final_review", "executive_presentation", "surveys_open"):
            self._advance(client, semester, phase)
        org = sorted(semester.organizations)[0]
        pid = sorted(semester.allocation.groups)[0]
        r = client.post(
            "/surveys",
            headers=_vh(semester),
            json={"kind": "partner", "payload": {"org_id": org, "proposal_id": pid, "recommend_score": 10}},
        )
        assert r.status_code == 201
        summary = client.get("/surveys/summary").json()
        assert summary["partner_nps"]["mean_score"] == 10.0
        assert summary["partner_nps"]["responses"] == 1

    def test_phase_skip_rejected(self, tmp_path):
        semester = synth.make_semester(8, 8, 2, phase=Phase.allocation)
        client = TestClient(create_app(semester))
        r = client.post("/phase/advance", headers=_vh(semester), json={"target": "execution"})
        assert r.status_code == 409
        r = client.post("/phase/advance", headers=_vh(semester), json={"target": "not_a_phase"})
        assert r.status_code == 400


class TestAllocationMetrics:
    def test_metrics_are_projections_of_the_allocation(self, service):
        semester, client, _ = service
        assert client.get("/allocation/metrics").status_code == 404
        client.post("/allocate", headers=_vh(semester))
        metrics = client.get("/allocation/metrics").json()
        allocation = client.get("/allocation").json()
        assert set(metrics["sizes"]) == set(allocation["groups"])
        for pid, members in allocation["groups"].items():
            assert metrics["sizes"][pid] == len(members)
            for sid in members:
                assert 0.0 <= metrics["alignment"][sid] <= 1.0
                rank = metrics["assigned_rank"][sid]
                ballot = semester.ballots.get(sid)
                if rank is not None:
                    assert ballot.choices[rank] == pid
        for sid in allocation["unassigned"]:
            assert sid not in metrics["alignment"]


class TestConcurrentAccess:
    def test_parallel_reads_during_mutations_never_tear(self, tmp_path):
        import threading

        semester = synth.make_semester(9, 40, 10, phase=Phase.interest_collection)
        client = TestClient(create_app(semester))
        errors: list[str] = []
        stop = threading.Event()

        def reader():
            while not stop.is_set():
                r = client.get("/state")
                if r.status_code != 200:
                    errors.append(f"read failed: {r.status_code}")
                    return

        threads = [threading.Thread(target=reader) for _ in range(4)]
        for t in threads:
            t.start()
        try:
            for i in range(30):
                r = client.post(
                    "/students",
                    headers=_vh(semester),
                    json={"id": f"new{i}", "name": f"N{i}", "program": "CS", "gpa": 7.0},
                )
                if r.status_code != 201:
                    errors.append(f"write failed: {r.status_code} {r.text}")
                    break
        finally:
            stop.set()
            for t in threads:
                t.join()
        assert errors == []
        assert len(semester.students) == 70
