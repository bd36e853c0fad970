import logging
from logging.handlers import RotatingFileHandler
import os

import config


class CommandFilter(logging.Filter):
    """Stamps every record with the running subcommand ('-' outside the CLI)."""

    def __init__(self):
        super().__init__()
        self.command = '-'

    def filter(self, record):
        if not hasattr(record, 'command'):
            record.command = self.command
        return True


_command_filter = CommandFilter()


def ensure_logs_dir(path: str):
    os.makedirs(path, exist_ok=True)

def get_logger(log_dir: str = None, command: str = None):
    """Configure and return the 'eigenseg' logger for recording runs.
    Logs are written to <log_dir>/runs.log (config.LOG_DIR by default) and rotated.
    Library modules log through child loggers such as 'eigenseg.spectral'.
    """
    if command is not None:
        _command_filter.command = command

    logger = logging.getLogger('eigenseg')

    if logger.handlers:
        return logger

    if log_dir is None:
        log_dir = config.LOG_DIR

    ensure_logs_dir(log_dir)
    log_path = os.path.join(log_dir, 'runs.log')
    log_path2 = os.path.join(log_dir, 'runs2.log')

    logger.setLevel(logging.INFO)

    # primary rotating file
    handler1 = RotatingFileHandler(log_path, maxBytes=5 * 1024 * 1024, backupCount=5, encoding='utf-8')
    # secondary rotating file
    handler2 = RotatingFileHandler(log_path2, maxBytes=10 * 1024 * 1024, backupCount=10, encoding='utf-8')

    formatter = logging.Formatter('%(asctime)s | %(levelname)s | %(name)s | %(command)s | %(message)s')
    for handler in (handler1, handler2):
        handler.setFormatter(formatter)
        handler.addFilter(_command_filter)
        logger.addHandler(handler)

    # stdout/stderr carry results and error JSON only
    logger.propagate = False

    return logger
