import hashlib
import logging
import os


def setup_logging(level: int = logging.INFO) -> None:
    """Sets up the logging configuration for the application.

    Configures the logging module to output log messages to the console with
    the given level. The log messages include the timestamp, log level, and the
    actual log message.
    """
    logging.basicConfig(level=level, format="%(asctime)s - %(levelname)s - %(message)s")


def derive_seed(master: int, name: str) -> int:
    """Derives a stable 64-bit seed for a named consumer of the master seed.

    Args:
        master (int): The run's master seed.
        name (str): Stage or component name, e.g. ``"embed.node2vec"``.

    Returns:
        int: The first eight bytes of SHA-256 over ``"{master}:{name}"``, big-endian.
    """
    digest = hashlib.sha256(f"{master}:{name}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def ensure_parent(path: str) -> None:
    """Creates the parent directory of ``path`` when it does not exist yet."""
    parent = os.path.dirname(os.path.abspath(path))
    os.makedirs(parent, exist_ok=True)


def format_real(value: float) -> str:
    """Formats a float with 17 significant digits, enough for an exact round trip."""
    return format(float(value), ".17g")
