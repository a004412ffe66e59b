"""Runtime knobs read from the environment."""
import os


def thread_count() -> int:
    """Parallelism cap from ``BOUNDARY_LAB_THREADS`` (default 1, never below 1)."""
    raw = os.environ.get("BOUNDARY_LAB_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1
