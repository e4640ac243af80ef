import pytest
from fastapi.testclient import TestClient

from guardnet.bundle import Bundle, bundle_to_dict, functor_to_dict
from guardnet.fixtures import fixture_bundle, sync_witness
from guardnet.guards import GuardedNet
from guardnet.service import app


@pytest.fixture(scope="module")
def client():
    with TestClient(app) as c:
        yield c


def _bundle(name: str) -> dict:
    return bundle_to_dict(fixture_bundle(name))


def test_healthz(client):
    response = client.get("/healthz")
    assert response.status_code == 200
    assert response.json()["name"] == "guardnet"


def test_validate_ok(client):
    response = client.post("/validate", json={"bundle": _bundle("A")})
    assert response.status_code == 200
    assert response.json() == {"valid": True, "diagnostics": []}


def test_validate_reports_diagnostics(client):
    data = _bundle("A")
    data["guard"]["tables"]["t1"][0]["out"] = ["crimson"]
    response = client.post("/validate", json={"bundle": data})
    body = response.json()
    assert response.status_code == 200 and not body["valid"]
    assert any("crimson" in d for d in body["diagnostics"])


def test_internalize_counts(client):
    response = client.post("/internalize", json={"bundle": _bundle("A")})
    body = response.json()
    assert (body["places"], body["transitions"]) == (7, 3)
    assert "projection" in body["bundle"]
    # the compiled bundle itself validates
    check = client.post("/validate", json={"bundle": body["bundle"]})
    assert check.json()["valid"]


def test_reach_exit_codes(client):
    blocked = client.post(
        "/reach", json={"bundle": _bundle("A"), "source": "red", "target": "purple"}
    ).json()
    assert blocked["outcome"] == "not_reachable" and blocked["exit_code"] == 1
    found = client.post(
        "/reach", json={"bundle": _bundle("A"), "source": "red", "target": "green"}
    ).json()
    assert found["outcome"] == "reachable" and found["exit_code"] == 0
    assert found["run"][0]["transition"] == "t1"


def test_reach_inline_marking(client):
    response = client.post(
        "/reach",
        json={
            "bundle": _bundle("C"),
            "source": {"kind": "colored", "tokens": [["X", "x"]]},
            "target": {"kind": "colored", "tokens": [["Z", "z"]]},
        },
    )
    body = response.json()
    assert body["outcome"] == "reachable"
    assert [s["witness"] for s in body["run"]] == ["w1", "v1"]


def test_reach_unknown_marking_name(client):
    response = client.post(
        "/reach", json={"bundle": _bundle("A"), "source": "nope", "target": "red"}
    )
    assert response.status_code == 422
    assert "nope" in response.json()["detail"]
    assert response.json()["error"] == "BundleError"


def test_reach_state_cap_inconclusive(client):
    response = client.post(
        "/reach",
        json={
            "bundle": _bundle("A"),
            "source": "red",
            "target": "purple",
            "state_cap": 1,
        },
    )
    assert response.json()["outcome"] == "inconclusive"
    assert response.json()["exit_code"] == 2


def test_fire_plain(client):
    response = client.post(
        "/fire", json={"bundle": _bundle("A"), "marking": "p1", "transition": "t1"}
    )
    assert response.json()["marking"] == {"kind": "plain", "tokens": ["P2"]}


def test_fire_colored(client):
    response = client.post(
        "/fire", json={"bundle": _bundle("A"), "marking": "red", "transition": "t1"}
    )
    assert response.json()["marking"] == {"kind": "colored", "tokens": [["P2", "green"]]}


def test_fire_span_requires_witness_when_ambiguous(client):
    ambiguous = client.post(
        "/fire", json={"bundle": _bundle("B"), "marking": "red", "transition": "t1"}
    )
    assert ambiguous.status_code == 422 and "ambiguous" in ambiguous.json()["detail"]
    chosen = client.post(
        "/fire",
        json={
            "bundle": _bundle("B"),
            "marking": "red",
            "transition": "t1",
            "witness": "s3",
        },
    )
    assert chosen.status_code == 200


def test_fire_not_enabled(client):
    response = client.post(
        "/fire", json={"bundle": _bundle("A"), "marking": "red", "transition": "t2"}
    )
    assert response.status_code == 422
    assert response.json()["error"] == "TokenGameError"


def test_compose_erase_and_sync(client):
    erased = client.post(
        "/compose/erase", json={"bundle": _bundle("D"), "victims": ["f", "g"]}
    ).json()
    assert erased["bundle"]["net"]["transitions"] == []

    w_net, along = sync_witness()
    w_bundle = bundle_to_dict(Bundle.from_guarded(GuardedNet(w_net, None)))
    synced = client.post(
        "/compose/sync",
        json={
            "bundle": _bundle("D"),
            "victims": ["f", "g"],
            "generators": w_bundle["net"],
            "along": functor_to_dict(along),
        },
    ).json()
    transitions = synced["bundle"]["net"]["transitions"]
    assert [t["id"] for t in transitions] == ["fg"]
    assert synced["bundle"]["guard"]["tables"]["fg"] == [{"in": ["x"], "out": ["z"]}]


def test_compose_add(client):
    w_net, along = sync_witness()
    w_bundle = bundle_to_dict(Bundle.from_guarded(GuardedNet(w_net, None)))
    response = client.post(
        "/compose/add",
        json={
            "bundle": _bundle("D"),
            "generators": w_bundle["net"],
            "along": functor_to_dict(along),
        },
    ).json()
    assert [t["id"] for t in response["bundle"]["net"]["transitions"]] == ["f", "fg", "g"]


def test_compose_identify_maps_markings(client):
    # merging nothing: identical witnesses keep the bundle intact
    data = _bundle("A")
    response = client.post(
        "/compose/identify",
        json={
            "bundle": data,
            "witness_net": {"places": [{"id": "P"}], "transitions": []},
            "left": {"object_map": {"P": ["P1"]}, "morphism_map": {}},
            "right": {"object_map": {"P": ["P1"]}, "morphism_map": {}},
        },
    ).json()
    assert response["place_map"] == {p: p for p in ("P1", "P2", "P3")}
    assert response["bundle"]["markings"] == data["markings"]


def test_compose_precondition_violation_is_422(client):
    response = client.post(
        "/compose/erase", json={"bundle": _bundle("D"), "victims": ["nope"]}
    )
    assert response.status_code == 422
    assert response.json()["error"] == "PreconditionError"


def test_compile_then_reach_flow(client):
    compiled = client.post("/internalize", json={"bundle": _bundle("A")}).json()["bundle"]
    response = client.post(
        "/reach",
        json={
            "bundle": compiled,
            "source": {"kind": "plain", "tokens": ["P1@red"]},
            "target": {"kind": "plain", "tokens": ["P3@purple"]},
        },
    ).json()
    assert response["outcome"] == "not_reachable" and response["exit_code"] == 1
    reachable = client.post(
        "/reach",
        json={
            "bundle": compiled,
            "source": {"kind": "plain", "tokens": ["P1@red"]},
            "target": {"kind": "plain", "tokens": ["P2@green"]},
        },
    ).json()
    assert reachable["sequence"] == ["t1@red"]


def test_export_dot_deterministic(client):
    first = client.post("/export-dot", json={"bundle": _bundle("A")}).json()["dot"]
    second = client.post("/export-dot", json={"bundle": _bundle("A")}).json()["dot"]
    assert first == second and first.startswith("digraph net {")


def test_check_counterexamples(client):
    response = client.post("/check", json={"suite": "counterexamples"}).json()
    assert response["passed"] is True
    assert len(response["results"]) == 8


def test_check_rejects_unknown_suite(client):
    response = client.post("/check", json={"suite": "nonsense"})
    assert response.status_code == 422
