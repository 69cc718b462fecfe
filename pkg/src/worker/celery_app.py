from celery import Celery
from src.config import settings
from src.config.logging import worker_logger

app = Celery('lattice_worker')

app.conf.update(
    broker_url=settings.CELERY_BROKER_URL,
    result_backend=settings.CELERY_RESULT_BACKEND,
    task_serializer=settings.CELERY_TASK_SERIALIZER,
    result_serializer=settings.CELERY_RESULT_SERIALIZER,
    accept_content=settings.CELERY_ACCEPT_CONTENT,
    timezone=settings.CELERY_TIMEZONE,
    enable_utc=settings.CELERY_ENABLE_UTC,
    task_track_started=settings.CELERY_TASK_TRACK_STARTED,
    task_time_limit=settings.CELERY_TASK_TIME_LIMIT,
    task_always_eager=settings.CELERY_TASK_ALWAYS_EAGER,
    # every chunk goes to the sampling queue; one chunk per worker slot at a time
    task_default_queue=settings.CELERY_QUEUE,
    task_routes={'sample_chunk': {'queue': settings.CELERY_QUEUE}},
    worker_prefetch_multiplier=1,
    worker_concurrency=settings.CELERY_WORKER_CONCURRENCY,
    # chunk columns are large; drop them once the batch has been assembled
    result_expires=settings.CELERY_RESULT_TIMEOUT * 2,
)

# Register tasks
import src.worker.tasks.sample_chunk  # noqa: E402,F401

worker_logger.info(
    f"Celery app ready (queue={settings.CELERY_QUEUE}, eager={settings.CELERY_TASK_ALWAYS_EAGER})"
)
