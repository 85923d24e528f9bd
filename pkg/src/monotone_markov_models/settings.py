import os

import psutil
from dotenv import load_dotenv

load_dotenv()

default_presets_path = "presets.json"

MMM_THREADS = int(os.getenv("MMM_THREADS", "0"))
MMM_LOG_LEVEL = os.getenv("MMM_LOG_LEVEL", "WARNING").upper()
MMM_CHUNK_SIZE = int(os.getenv("MMM_CHUNK_SIZE", "4096"))
MMM_LONG_RUN_CHAINS = int(os.getenv("MMM_LONG_RUN_CHAINS", "2048"))


def max_workers() -> int:
    """Worker threads for replication chunks, capped by MMM_THREADS when set."""
    available = psutil.cpu_count(logical=True) or 1
    if MMM_THREADS > 0:
        return max(1, min(MMM_THREADS, available))
    return available
