import time
from celery import states
from src.worker.celery_app import app
from src.sampling.engine import generate_chunk
from src.sampling.schemas import ChunkRequest
from src.config.logging import worker_logger

@app.task(bind=True, name='sample_chunk')
def sample_chunk(self, request):
    """
    Celery task computing one chunk of a sample batch.

    Args:
        self: Task instance
        request (dict): ChunkRequest fields (JSON form)

    Returns:
        dict: chunk index, start offset and the t, delta and normalized_error columns
    """
    task_id = self.request.id
    start_time = time.time()  # 记录开始时间

    chunk = ChunkRequest.parse_obj(request)
    worker_logger.info(f"Starting chunk task {task_id}: chunk {chunk.index} ({chunk.size} samples from {chunk.start})")

    if not self.request.is_eager:
        self.update_state(state=states.STARTED, meta={'status': 'processing', 'chunk': chunk.index})

    try:
        t, delta, nerr = generate_chunk(chunk)
    except Exception as e:
        error_message = f"Error in chunk task {task_id}: {str(e)}"
        worker_logger.error(error_message)
        # 计算失败时的处理时间
        if not self.request.is_eager:
            self.update_state(state=states.FAILURE, meta={
                'status': 'failed',
                'error': error_message,
                'processing_time': round(time.time() - start_time, 3)
            })
        raise

    # 计算总处理时间
    processing_time = time.time() - start_time
    worker_logger.info(f"Chunk task {task_id} completed in {round(processing_time, 3)}s")

    # JSON floats are emitted with repr, so the arrays survive the result backend bit for bit
    return {
        'index': chunk.index,
        'start': chunk.start,
        't': t.tolist(),
        'delta': delta.tolist(),
        'normalized_error': nerr.tolist(),
        'processing_time': round(processing_time, 3)
    }
