import os
import logging
from logging.handlers import RotatingFileHandler

LOG_LEVEL = os.getenv('LOG_LEVEL', 'INFO')
LOG_DIR = os.getenv('LOG_DIR', 'logs')
LOG_FILE_MAX_BYTES = 10 * 1024 * 1024  # 10MB
LOG_FILE_BACKUP_COUNT = 5
LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

# component -> rotating log file under LOG_DIR
COMPONENT_LOG_FILES = {
    'cli': 'cli.log',
    'lattice': 'lattice.log',
    'laws': 'laws.log',
    'sampling': 'sampling.log',
    'worker': 'worker.log',
    'io': 'io.log',
}

os.makedirs(LOG_DIR, exist_ok=True)


def _level(name):
    return getattr(logging, str(name).upper(), logging.INFO)


def setup_logger(name, log_file=None):
    """Logger writing to stderr and, if log_file is given, to a rotating file."""
    logger = logging.getLogger(name)
    logger.setLevel(_level(LOG_LEVEL))

    # a re-imported module must not stack a second pair of handlers
    if logger.handlers:
        return logger

    formatter = logging.Formatter(LOG_FORMAT)

    # stderr keeps stdout free for CSV/JSON records
    console_handler = logging.StreamHandler()
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    if log_file:
        file_handler = RotatingFileHandler(
            os.path.join(LOG_DIR, log_file),
            maxBytes=LOG_FILE_MAX_BYTES,
            backupCount=LOG_FILE_BACKUP_COUNT
        )
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

    return logger


def set_level(level_name):
    """Apply --log-level to every component logger."""
    for name in COMPONENT_LOG_FILES:
        logging.getLogger(name).setLevel(_level(level_name))


cli_logger = setup_logger('cli', COMPONENT_LOG_FILES['cli'])
lattice_logger = setup_logger('lattice', COMPONENT_LOG_FILES['lattice'])
laws_logger = setup_logger('laws', COMPONENT_LOG_FILES['laws'])
sampling_logger = setup_logger('sampling', COMPONENT_LOG_FILES['sampling'])
worker_logger = setup_logger('worker', COMPONENT_LOG_FILES['worker'])
io_logger = setup_logger('io', COMPONENT_LOG_FILES['io'])
