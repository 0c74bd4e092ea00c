import json
import time
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "ci",
    derandomize=True,
    max_examples=50,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ci")

REPO_ROOT = Path(__file__).resolve().parents[1]
MODELS_DIR = REPO_ROOT / "models"


@pytest.fixture(scope="session")
def models_dir() -> Path:
    return MODELS_DIR


@pytest.fixture(scope="session")
def models_db():
    from heapseg.meshio import ModelDatabase

    return ModelDatabase.load(MODELS_DIR)


@pytest.fixture(scope="session")
def run_config():
    """Default run config pointed at the bundled model library."""
    from heapseg.pipeline import RunConfig

    doc = RunConfig().to_json()
    doc["gen"]["models_dir"] = str(MODELS_DIR)
    return RunConfig.from_json(doc)


@pytest.fixture(scope="session")
def tiny_dataset(run_config, tmp_path_factory):
    """Six generated scenes shared by IO, pipeline, and CLI tests."""
    import dataclasses

    from heapseg.pipeline import generate_dataset

    config = dataclasses.replace(
        run_config, gen=dataclasses.replace(run_config.gen, master_seed=3)
    )
    out = tmp_path_factory.mktemp("tiny") / "ds"
    generate_dataset(config, 6, out)
    return out, config


@pytest.fixture(scope="session")
def bench_dataset(run_config, tmp_path_factory):
    """200 single-threaded scenes with wall time, for throughput and baselines."""
    import dataclasses

    from heapseg.pipeline import generate_dataset

    config = dataclasses.replace(
        run_config, gen=dataclasses.replace(run_config.gen, master_seed=11)
    )
    out = tmp_path_factory.mktemp("bench") / "ds"
    start = time.perf_counter()
    generate_dataset(config, 200, out, jobs=1)
    elapsed = time.perf_counter() - start
    (out / "walltime.json").write_text(json.dumps({"seconds": elapsed}))
    return out, config, elapsed
