import json

import numpy as np
import pytest

from src.sampling.engine import generate_chunk
from src.sampling.schemas import ChunkRequest, RhoSpec, Scenario
from src.worker.celery_app import app
from src.worker.tasks.sample_chunk import sample_chunk


def chunk_request(**overrides):
    fields = dict(scenario=Scenario(case='iid_uniform', d=2), T=50.0, rho=RhoSpec.uniform(),
                  seed=11, index=2, start=200, size=100)
    fields.update(overrides)
    return ChunkRequest(**fields)


def test_app_runs_eagerly_under_test_settings():
    assert app.conf.task_always_eager
    assert 'sample_chunk' in app.tasks


def test_sample_chunk_task_matches_direct_generation():
    request = chunk_request()
    result = sample_chunk.delay(json.loads(request.json())).get(timeout=10)
    assert result['index'] == 2 and result['start'] == 200
    t, delta, nerr = generate_chunk(request)
    assert result['t'] == t.tolist()
    assert result['delta'] == delta.tolist()
    assert result['normalized_error'] == nerr.tolist()
    assert result['processing_time'] >= 0


def test_sample_chunk_result_survives_json_serialization():
    request = chunk_request(scenario=Scenario(case='diagonal', d=3, x0=0.1))
    result = sample_chunk.delay(json.loads(request.json())).get(timeout=10)
    decoded = json.loads(json.dumps(result))
    assert np.array_equal(np.asarray(decoded['delta']), generate_chunk(request)[1])


def test_sample_chunk_rejects_malformed_request():
    payload = json.loads(chunk_request().json())
    payload['size'] = 0
    with pytest.raises(ValueError):
        sample_chunk.delay(payload).get(timeout=10)
