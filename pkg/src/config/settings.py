import os
from pathlib import Path
from dotenv import load_dotenv

# Load environment variables from .env file if it exists
env_path = Path(__file__).parent.parent.parent / '.env'
if env_path.exists():
    load_dotenv(dotenv_path=env_path)

# Output Settings
OUTPUT_DIR = os.getenv('LATTICE_OUTPUT_DIR', 'results')
OUTPUT_FORMAT = os.getenv('OUTPUT_FORMAT', 'csv')  # 'csv' or 'json'
FLOAT_FORMAT = '.17g'  # binary64 round-trip

# Lattice Counting Settings
BOUNDARY_TOLERANCE = float(os.getenv('BOUNDARY_TOLERANCE', '1e-9'))
BRUTEFORCE_BUDGET = int(float(os.getenv('BRUTEFORCE_BUDGET', '1e8')))

# Limit Law Settings
SERIES_THRESHOLD = float(os.getenv('SERIES_THRESHOLD', '1e-4'))
QUAD_TOLERANCE = float(os.getenv('QUAD_TOLERANCE', '1e-10'))
QUAD_LIMIT = int(os.getenv('QUAD_LIMIT', '200'))
LAW_TABLE_STEPS = int(os.getenv('LAW_TABLE_STEPS', '201'))

# CF Comparison Settings
CF_GRID_MIN = float(os.getenv('CF_GRID_MIN', '-20'))
CF_GRID_MAX = float(os.getenv('CF_GRID_MAX', '20'))
CF_GRID_STEP = float(os.getenv('CF_GRID_STEP', '0.25'))
CF_TOLERANCE = float(os.getenv('CF_TOLERANCE', '0.02'))

# Sampling Settings
MAX_BATCH_SAMPLES = int(float(os.getenv('MAX_BATCH_SAMPLES', '1e7')))
SAMPLING_CHUNK_SIZE = int(os.getenv('SAMPLING_CHUNK_SIZE', '16384'))
SAMPLING_BACKEND = os.getenv('SAMPLING_BACKEND', 'local')  # 'local' or 'celery'
SAMPLING_WORKERS = int(os.getenv('SAMPLING_WORKERS', '1'))
KS_NOISE_CONSTANT = 1.36  # 95% Kolmogorov critical value
TREND_ALLOWANCE = float(os.getenv('TREND_ALLOWANCE', '1.5'))

# Celery Settings
CELERY_BROKER_URL = os.getenv('CELERY_BROKER_URL', 'redis://localhost:6379/0')
CELERY_RESULT_BACKEND = os.getenv('CELERY_RESULT_BACKEND', 'redis://localhost:6379/0')
CELERY_TASK_SERIALIZER = 'json'
CELERY_RESULT_SERIALIZER = 'json'
CELERY_ACCEPT_CONTENT = ['json']
CELERY_TIMEZONE = 'UTC'
CELERY_ENABLE_UTC = True
CELERY_TASK_TRACK_STARTED = True
CELERY_TASK_TIME_LIMIT = 30 * 60  # 30 minutes
CELERY_TASK_ALWAYS_EAGER = os.getenv('CELERY_TASK_ALWAYS_EAGER', 'False').lower() == 'true'
CELERY_WORKER_CONCURRENCY = int(os.getenv('CELERY_WORKER_CONCURRENCY', '1'))
CELERY_QUEUE = os.getenv('CELERY_QUEUE', 'sampling')
CELERY_RESULT_TIMEOUT = float(os.getenv('CELERY_RESULT_TIMEOUT', '600'))
