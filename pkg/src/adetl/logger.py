# logger.py

import logging

# Configure the base logger
logger = logging.getLogger("adetl")
logging_level = logging.INFO

# Create formatters
console_formatter = logging.Formatter(
    fmt='%(asctime)s - %(module)s - %(levelname)s - %(message)s',
    datefmt='%Y-%m-%d %H:%M:%S'
)

# Console handler
console_handler = logging.StreamHandler()
console_handler.setFormatter(console_formatter)

# Add handlers
logger.addHandler(console_handler)


def get_logger(name: str = None) -> logging.Logger:
    """Get a logger below the package logger.

    Args:
        name: Optional module name, usually ``__name__``. A leading ``adetl.``
            is not repeated.

    Returns:
        Logger instance
    """
    base = "adetl"
    if name and name.startswith(base + "."):
        name = name[len(base) + 1:]
    full_name = f"{base}.{name}" if name and name != base else base
    return logging.getLogger(full_name)


def set_logger_level(level):
    level = getattr(logging, str(level).upper(), logging.WARNING)

    logger.setLevel(level)
    for handler in logger.handlers:
        handler.setLevel(level)
