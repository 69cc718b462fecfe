import json

import numpy as np
import pytest

from src.config import settings
from src.core.lattice import reduction_gap_bound
from src.sampling import engine
from src.sampling.engine import derive_seed, generate_batch, generate_chunk, plan_chunks
from src.sampling.schemas import ChunkRequest, RhoSpec, SampleBatch, Scenario
from src.utils.errors import ArgumentError, ConfigError, DomainError, NumericError, ResourceError

DIAGONAL = Scenario(case='diagonal', d=2, x0=0.25)
IID = Scenario(case='iid_uniform', d=3)
UNIFORM = RhoSpec.uniform()


def assert_same_batch(a, b):
    assert np.array_equal(a.t_samples, b.t_samples)
    assert np.array_equal(a.delta_samples, b.delta_samples)
    assert np.array_equal(a.normalized_error_samples, b.normalized_error_samples)


def test_batch_is_deterministic():
    a = generate_batch(IID, 100.0, 5000, UNIFORM, seed=42, chunk_size=1024)
    b = generate_batch(IID, 100.0, 5000, UNIFORM, seed=42, chunk_size=1024)
    assert_same_batch(a, b)
    c = generate_batch(IID, 100.0, 5000, UNIFORM, seed=43, chunk_size=1024)
    assert not np.array_equal(a.delta_samples, c.delta_samples)


def test_worker_count_does_not_change_batch():
    serial = generate_batch(IID, 50.0, 6000, UNIFORM, seed=9, workers=1, chunk_size=1000)
    parallel = generate_batch(IID, 50.0, 6000, UNIFORM, seed=9, workers=2, chunk_size=1000)
    assert_same_batch(serial, parallel)


def test_celery_backend_matches_local():
    local = generate_batch(DIAGONAL, 30.0, 2500, UNIFORM, seed=3, chunk_size=1000)
    remote = generate_batch(DIAGONAL, 30.0, 2500, UNIFORM, seed=3, backend='celery', chunk_size=1000)
    assert_same_batch(local, remote)


def test_prefix_is_stable_across_batch_sizes():
    small = generate_batch(IID, 10.0, 1500, UNIFORM, seed=1, chunk_size=1000)
    large = generate_batch(IID, 10.0, 3000, UNIFORM, seed=1, chunk_size=1000)
    assert np.array_equal(small.delta_samples[:1000], large.delta_samples[:1000])


def test_batch_fields():
    batch = generate_batch(DIAGONAL, 20.0, 300, UNIFORM, seed=5)
    assert batch.N == 300 and len(batch.delta_samples) == 300
    assert batch.chunk_size == settings.SAMPLING_CHUNK_SIZE
    assert "PCG64" in batch.generator
    assert np.all((batch.t_samples > 0) & (batch.t_samples <= 20.0))


def test_batch_invariants_hold():
    batch = generate_batch(IID, 1000.0, 20000, UNIFORM, seed=77)
    bound = IID.d * 2 ** (IID.d - 1)
    assert np.all(batch.delta_samples > -bound) and np.all(batch.delta_samples <= bound)
    t = batch.t_samples
    mask = t >= 1.0
    gap = np.abs(batch.normalized_error_samples - batch.delta_samples)[mask]
    assert np.all(gap <= np.asarray(reduction_gap_bound(IID.d, t[mask])) + 1e-9)


def test_diagonal_delta_is_scaled_delta_tilde():
    from src.core.lattice import delta_tilde
    batch = generate_batch(DIAGONAL, 40.0, 1000, UNIFORM, seed=8)
    expected = 2 * 2 * delta_tilde(batch.t_samples, np.full(1000, 0.25))
    assert np.allclose(batch.delta_samples, expected, atol=1e-9)


def test_generate_batch_errors():
    with pytest.raises(ArgumentError):
        generate_batch(IID, 10.0, 0, UNIFORM, seed=1)
    with pytest.raises(DomainError):
        generate_batch(IID, -1.0, 10, UNIFORM, seed=1)
    with pytest.raises(ResourceError):
        generate_batch(IID, 10.0, settings.MAX_BATCH_SAMPLES + 1, UNIFORM, seed=1)
    with pytest.raises(ConfigError):
        generate_batch(IID, 10.0, 10, UNIFORM, seed=1, backend='spark')


def test_invariant_violation_raises(monkeypatch):
    monkeypatch.setattr(engine, 'delta_array', lambda t, X: 100.0 * np.ones(len(t)))
    with pytest.raises(NumericError):
        generate_batch(IID, 10.0, 10, UNIFORM, seed=1)


def test_plan_chunks_cover_the_batch():
    requests = plan_chunks(IID, 10.0, 2500, UNIFORM, 4, 1000)
    assert [(r.index, r.start, r.size) for r in requests] == [(0, 0, 1000), (1, 1000, 1000), (2, 2000, 500)]


def test_chunk_request_survives_json():
    request = ChunkRequest(scenario=DIAGONAL, T=12.5, rho=RhoSpec.tabulated([0, 1], [0, 2]),
                           seed=2 ** 64 - 1, index=3, start=3000, size=10)
    again = ChunkRequest.parse_obj(json.loads(request.json()))
    assert again == request
    for a, b in zip(generate_chunk(request), generate_chunk(again)):
        assert np.array_equal(a, b)


def test_derive_seed():
    assert derive_seed(42, 0) == derive_seed(42, 0)
    seeds = {derive_seed(42, k) for k in range(10)}
    assert len(seeds) == 10
    assert all(0 <= s < 2 ** 64 for s in seeds)
    assert derive_seed(42, 0) != derive_seed(43, 0)


def test_sample_batch_rejects_wrong_lengths():
    with pytest.raises(ValueError):
        SampleBatch(scenario=IID, T=1.0, N=3, seed=0, rho=UNIFORM, t_samples=[1.0, 1.0],
                    delta_samples=[0.0, 0.0, 0.0], normalized_error_samples=[0.0, 0.0, 0.0],
                    generator='x', chunk_size=1)
