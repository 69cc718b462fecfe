"""
Batch generation of (t, Delta, R/t^(d-1)) samples.

A batch of N samples is cut into fixed-size chunks. Chunk i draws from its own
PCG64 stream seeded with SeedSequence(entropy=seed, spawn_key=(i,)), first the
dilations and then the translations, so the output only depends on
(scenario, T, N, rho, seed, chunk_size) and never on how chunks are executed.
"""
import json
import math
import time
from multiprocessing import Pool

import numpy as np

from src.config import settings
from src.config.logging import sampling_logger
from src.core.lattice import delta_array, normalized_error_array, reduction_gap_bound
from src.sampling.rho import sample_ts
from src.sampling.schemas import ChunkRequest, SampleBatch, ScenarioCase
from src.utils.errors import ArgumentError, ConfigError, DomainError, NumericError, ResourceError

BIT_GENERATOR = "PCG64"
# absolute slack for the range and reduction checks; Delta and the bound are O(d 2^d)
INVARIANT_SLACK = 1e-9


def generator_name():
    return f"numpy-{np.__version__}/{BIT_GENERATOR}/SeedSequence(entropy=seed,spawn_key=(chunk,))"


def chunk_rng(seed, index):
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy=seed, spawn_key=(index,))))


def derive_seed(master, index):
    """Child seed for run `index` of a sweep: first 64-bit word of SeedSequence(master, (index,))."""
    state = np.random.SeedSequence(entropy=master, spawn_key=(index,)).generate_state(1, np.uint64)
    return int(state[0])


def _check_invariants(scenario, t, delta, nerr):
    d = scenario.d
    bound = d * 2.0 ** (d - 1)
    out_of_range = (delta <= -bound - INVARIANT_SLACK) | (delta > bound + INVARIANT_SLACK)
    if np.any(out_of_range):
        k = int(np.argmax(out_of_range))
        sampling_logger.error(f"Delta range violated at t={t[k]!r}: {delta[k]!r}")
        raise NumericError(f"Delta sample {delta[k]!r} outside (-{bound}, {bound}]")

    mask = t >= 1.0
    if np.any(mask):
        gap = np.abs(nerr[mask] - delta[mask])
        envelope = np.asarray(reduction_gap_bound(d, t[mask]))
        violated = gap > envelope + INVARIANT_SLACK * (1.0 + envelope)
        if np.any(violated):
            k = int(np.argmax(violated))
            sampling_logger.error(
                f"Reduction bound violated at t={t[mask][k]!r}: gap {gap[k]!r} > {envelope[k]!r}"
            )
            raise NumericError(f"reduction gap {gap[k]!r} exceeds envelope {envelope[k]!r}")


def generate_chunk(request: ChunkRequest):
    """Samples of one chunk as (t, delta, normalized_error) arrays."""
    scenario = request.scenario
    rng = chunk_rng(request.seed, request.index)
    t = sample_ts(request.T, request.rho, rng, request.size)
    if scenario.case == ScenarioCase.DIAGONAL:
        X = np.full((request.size, scenario.d), scenario.x0)
    else:
        X = rng.random((request.size, scenario.d)) - 0.5

    delta = delta_array(t, X)
    nerr = normalized_error_array(t, X)
    _check_invariants(scenario, t, delta, nerr)
    return t, delta, nerr


def plan_chunks(scenario, T, N, rho, seed, chunk_size):
    requests = []
    for index, start in enumerate(range(0, N, chunk_size)):
        requests.append(ChunkRequest(
            scenario=scenario, T=T, rho=rho, seed=seed,
            index=index, start=start, size=min(chunk_size, N - start),
        ))
    return requests


def _run_celery(requests):
    from celery import group
    from src.worker.tasks.sample_chunk import sample_chunk

    job = group(sample_chunk.s(json.loads(r.json())) for r in requests)
    async_result = job.apply_async(queue=settings.CELERY_QUEUE)
    # collected one by one, in chunk order
    results = [r.get(timeout=settings.CELERY_RESULT_TIMEOUT) for r in async_result.results]
    return [
        (np.asarray(r['t'], dtype=float), np.asarray(r['delta'], dtype=float),
         np.asarray(r['normalized_error'], dtype=float))
        for r in results
    ]


def generate_batch(scenario, T, N, rho, seed, workers=None, backend=None, chunk_size=None):
    """
    Draw N samples of (t, Delta, R/t^(d-1)).

    Args:
        workers: parallel processes for the local backend; has no effect on the result
        backend: 'local' (in-process or multiprocessing.Pool) or 'celery'

    Raises:
        ArgumentError: N < 1 or bad worker count
        DomainError: T not positive and finite
        ResourceError: N above MAX_BATCH_SAMPLES
        NumericError: a sampled range or reduction invariant failed
    """
    workers = settings.SAMPLING_WORKERS if workers is None else workers
    backend = settings.SAMPLING_BACKEND if backend is None else backend
    chunk_size = settings.SAMPLING_CHUNK_SIZE if chunk_size is None else chunk_size

    if not isinstance(N, (int, np.integer)) or N < 1:
        sampling_logger.error(f"Invalid sample count N={N!r}")
        raise ArgumentError(f"N must be a positive integer, got {N!r}")
    if not math.isfinite(T) or T <= 0:
        sampling_logger.error(f"Invalid horizon T={T!r}")
        raise DomainError(f"T must be a positive finite real, got {T!r}")
    if N > settings.MAX_BATCH_SAMPLES:
        sampling_logger.error(f"N={N} exceeds MAX_BATCH_SAMPLES={settings.MAX_BATCH_SAMPLES}")
        raise ResourceError(f"N={N} exceeds the batch budget of {settings.MAX_BATCH_SAMPLES} samples")
    if workers < 1 or chunk_size < 1:
        raise ArgumentError(f"workers and chunk_size must be positive, got {workers}, {chunk_size}")

    requests = plan_chunks(scenario, float(T), int(N), rho, int(seed), chunk_size)
    start_time = time.time()
    sampling_logger.info(
        f"Generating {N} samples for {scenario.describe()} T={T} in {len(requests)} chunks "
        f"(backend={backend}, workers={workers})"
    )

    if backend == 'local':
        if workers == 1 or len(requests) == 1:
            parts = [generate_chunk(r) for r in requests]
        else:
            with Pool(min(workers, len(requests))) as pool:
                parts = pool.map(generate_chunk, requests)
    elif backend == 'celery':
        parts = _run_celery(requests)
    else:
        sampling_logger.error(f"Unknown sampling backend {backend!r}")
        raise ConfigError(f"unknown backend {backend!r}; expected local or celery")

    t, delta, nerr = (np.concatenate(cols) for cols in zip(*parts))
    sampling_logger.info(f"Generated {N} samples in {round(time.time() - start_time, 3)}s")

    return SampleBatch(
        scenario=scenario,
        T=float(T),
        N=int(N),
        seed=int(seed),
        rho=rho,
        t_samples=t,
        delta_samples=delta,
        normalized_error_samples=nerr,
        generator=generator_name(),
        chunk_size=chunk_size,
    )
