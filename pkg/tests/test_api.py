import json

import pytest

from db.jobs import complete_run_job, create_run_job, get_run_status


@pytest.fixture
def queued_tasks(monkeypatch):
    """Capture background experiments instead of training"""
    calls = []
    monkeypatch.setattr("routes.experiments.experiment_background_task", lambda *args: calls.append(args))
    return calls


def test_health(test_client):
    response = test_client.get("/api/health")
    assert response.status_code == 200
    assert response.json()["status"] == "ok"


def test_list_presets(test_client):
    """Every preset is listed with its resolved config"""
    response = test_client.get("/api/presets")
    assert response.status_code == 200
    presets = {p["name"]: p["config"] for p in response.json()}
    assert "xor" in presets and "mnist-scanline" in presets
    assert presets["xor"]["hidden"] == [5]


def test_start_experiment_from_preset(test_client, queued_tasks, tmp_path):
    response = test_client.post("/api/experiments", json={
        "preset": "xor", "seed": 3, "runs": 2, "out_dir": str(tmp_path)
    })
    assert response.status_code == 200
    data = response.json()
    assert data["out_dir"] == str(tmp_path)

    job = get_run_status(data["job_id"])
    assert job["status"] == "running"
    assert job["preset"] == "xor"
    assert job["config"]["seed"] == 3

    assert len(queued_tasks) == 1
    job_id, kind, cfg, out_dir, grid = queued_tasks[0]
    assert (job_id, kind, out_dir, grid) == (data["job_id"], "train", str(tmp_path), None)
    assert cfg.runs == 2


def test_start_sweep(test_client, queued_tasks, tmp_path):
    response = test_client.post("/api/experiments", json={
        "preset": "iris-sweep", "kind": "sweep", "grid": ["eta0=0.01,0.1"], "out_dir": str(tmp_path)
    })
    assert response.status_code == 200
    assert queued_tasks[0][4] == {"eta0": [0.01, 0.1]}


def test_start_experiment_validation(test_client, queued_tasks):
    """Bad requests are rejected before any job is created"""
    assert test_client.post("/api/experiments", json={}).status_code == 422
    assert test_client.post("/api/experiments", json={"preset": "xor", "config": {}}).status_code == 422
    assert test_client.post("/api/experiments", json={"preset": "xor", "kind": "sweep"}).status_code == 422
    assert test_client.post("/api/experiments", json={"preset": "xor", "kind": "plot"}).status_code == 422

    assert test_client.post("/api/experiments", json={"preset": "cifar"}).status_code == 400
    assert test_client.post("/api/experiments", json={"config": {"dataset": "xor"}}).status_code == 400
    assert test_client.post("/api/experiments", json={"preset": "xor", "runs": 0}).status_code == 400
    assert test_client.post("/api/experiments", json={
        "preset": "xor", "kind": "sweep", "grid": ["nonsense=1"]
    }).status_code == 400
    assert queued_tasks == []


def test_list_experiments(test_client):
    first = create_run_job(preset="xor")
    create_run_job(preset="iris")
    complete_run_job(first)

    response = test_client.get("/api/experiments")
    assert response.status_code == 200
    assert len(response.json()) == 2

    completed = test_client.get("/api/experiments?status=completed").json()
    assert [j["id"] for j in completed] == [first]
    assert test_client.get("/api/experiments?status=paused").status_code == 400


def test_get_experiment(test_client):
    job_id = create_run_job(preset="xor")
    response = test_client.get(f"/api/experiments/{job_id}")
    assert response.status_code == 200
    assert response.json()["id"] == job_id
    assert test_client.get("/api/experiments/99999").status_code == 404


def test_latest_experiment(test_client):
    assert test_client.get("/api/experiments/latest").status_code == 404

    create_run_job(preset="xor")
    newest = create_run_job(kind="sweep", preset="iris")
    response = test_client.get("/api/experiments/latest")
    assert response.status_code == 200
    assert response.json()["id"] == newest
    assert response.json()["kind"] == "sweep"


def test_stop_experiment(test_client):
    job_id = create_run_job(preset="xor")
    assert test_client.post(f"/api/experiments/{job_id}/stop").status_code == 200
    assert get_run_status(job_id)["cancel_requested"] is True

    complete_run_job(job_id)
    assert test_client.post(f"/api/experiments/{job_id}/stop").status_code == 400
    assert test_client.post("/api/experiments/99999/stop").status_code == 404


def test_experiment_summary(test_client, tmp_path):
    running = create_run_job(out_dir=str(tmp_path))
    assert test_client.get(f"/api/experiments/{running}/summary").status_code == 400

    complete_run_job(running)
    assert test_client.get(f"/api/experiments/{running}/summary").status_code == 404

    (tmp_path / "summary.json").write_text(json.dumps({"aggregate": {"accuracy": {"mean": 1.0}}}))
    response = test_client.get(f"/api/experiments/{running}/summary")
    assert response.status_code == 200
    assert response.json()["aggregate"]["accuracy"]["mean"] == 1.0

    assert test_client.get("/api/experiments/99999/summary").status_code == 404


def test_background_experiment_completes_job(test_client, xor_config, tmp_path):
    """The real background task trains and marks the job completed"""
    from harness import experiment_background_task

    job_id = create_run_job(preset="xor", out_dir=str(tmp_path))
    experiment_background_task(job_id, "train", xor_config, str(tmp_path))

    job = get_run_status(job_id)
    assert job["status"] == "completed"
    assert job["current_iteration"] == 3
    assert job["last_accuracy"] is not None
    assert (tmp_path / "summary.json").exists()
    assert test_client.get(f"/api/experiments/{job_id}/summary").status_code == 200


def test_cancelled_experiment_is_marked_failed(test_db, xor_config, tmp_path):
    from harness import experiment_background_task

    job_id = create_run_job(preset="xor", out_dir=str(tmp_path))
    test_db.execute("UPDATE run_jobs SET cancel_requested = 1 WHERE id = ?", (job_id,))
    experiment_background_task(job_id, "train", xor_config, str(tmp_path))

    job = get_run_status(job_id)
    assert job["status"] == "failed"
    assert job["errors"] == ["Run cancelled by user"]
    assert job["current_iteration"] == 1
