import pytest
from fastapi.testclient import TestClient

from transversal.api.app import app
from transversal.graph import gen_grid, serialize_gg


@pytest.fixture(scope="module")
def client():
    return TestClient(app)


@pytest.fixture(scope="module")
def grid_id(client):
    r = client.post("/graphs", json={"gen": "grid:8"})
    assert r.status_code == 201
    body = r.json()
    assert (body["name"], body["n"], body["m"]) == ("grid:8", 64, 112)
    return body["id"]


def test_create_validation(client):
    assert client.post("/graphs", json={}).status_code == 422
    assert client.post("/graphs", json={"gen": "grid:4", "gg": "gg 0 0\n"}).status_code == 422
    assert client.post("/graphs", json={"gen": "hex:2"}).status_code == 422
    r = client.post("/graphs", json={"gg": serialize_gg(gen_grid(3)), "name": "tiny"})
    assert r.status_code == 201 and r.json()["name"] == "tiny"


def test_unknown_graph_404(client):
    assert client.get("/graphs/999999/stats").status_code == 404


def test_stats(client, grid_id):
    s = client.get(f"/graphs/{grid_id}/stats").json()
    assert (s["n"], s["m"], s["max_degree"], s["component_count"]) == (64, 112, 4, 1)
    assert s["total_edge_length"] == 112.0


def test_estimate_deterministic(client, grid_id):
    body = {"kind": "lines", "trials": 200, "seed": 7}
    a = client.post(f"/graphs/{grid_id}/estimate", json=body).json()
    assert a == client.post(f"/graphs/{grid_id}/estimate", json=body).json()
    assert a["trials"] == 200 and a["mean"] > 0
    assert client.post(f"/graphs/{grid_id}/estimate", json={"trials": 10}).status_code == 422


def test_ply_and_planarize(client, grid_id):
    p = client.post(f"/graphs/{grid_id}/ply", json={"target_ply": 4}).json()
    assert p["residual_ply"] <= 4 and p["n"] == 64
    assert client.post(f"/graphs/{grid_id}/planarize").json() == {"crossings": 0, "n_prime": 64, "m_prime": 112}
    s = client.post(f"/graphs/{grid_id}/structure").json()
    assert s["faces"] > 49 and s["max_face_size"] >= 4


def test_traverse_and_locate(client, grid_id):
    # queries use the graph's own coordinates; grid:8 spans [0, 7]^2
    r = client.post(f"/graphs/{grid_id}/traverse", json={"a": [0.5, 3.1], "b": [6.5, 3.2]})
    assert r.status_code == 200
    body = r.json()
    assert body["crossings"] == len(body["crossed_edges"]) == 6
    assert body["end"]["kind"] == "face"
    on_vertex = client.post(f"/graphs/{grid_id}/traverse", json={"a": [0.5, 3.1], "b": [2, 3]}).json()
    assert on_vertex["end"]["kind"] == "vertex"
    assert client.post(f"/graphs/{grid_id}/traverse", json={"a": [0, 0], "b": [0, 0]}).status_code == 422
    assert client.post(f"/graphs/{grid_id}/traverse", json={"a": [1, 1], "b": [60, 0]}).status_code == 422
    loc = client.post(f"/graphs/{grid_id}/locate", json={"point": [3.3, 2.4]}).json()
    assert loc["kind"] == "face" and loc["region"] is not None
    edge = client.post(f"/graphs/{grid_id}/locate", json={"point": [3.5, 2.0]}).json()
    assert edge["kind"] == "edge" and edge["edge"] is not None
    assert client.post(f"/graphs/{grid_id}/locate", json={"point": [70, 70]}).status_code == 422
