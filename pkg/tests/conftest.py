import os
import tempfile

# Settings are read at import time, so the test environment is fixed before src is imported
os.environ.setdefault('LOG_DIR', tempfile.mkdtemp(prefix='lattice-logs-'))
os.environ['CELERY_TASK_ALWAYS_EAGER'] = 'True'
os.environ['CELERY_BROKER_URL'] = 'memory://'
os.environ['CELERY_RESULT_BACKEND'] = 'cache+memory://'

import pytest

ALTERNATE_SEEDS = (101, 202, 303)


def passes_with_reruns(check, primary_seed, alternates=ALTERNATE_SEEDS):
    """Primary seed first; on failure a majority of the fixed alternates must pass."""
    if check(primary_seed):
        return True
    return sum(bool(check(seed)) for seed in alternates) >= 2


@pytest.fixture
def rng():
    import numpy as np
    return np.random.default_rng(12345)


@pytest.fixture
def output_dir(tmp_path, monkeypatch):
    from src.config import settings
    monkeypatch.setattr(settings, 'OUTPUT_DIR', str(tmp_path))
    return tmp_path


@pytest.fixture
def seed_policy():
    return passes_with_reruns
