import os
from pathlib import Path

from dotenv import load_dotenv

load_dotenv()

# Default directory for CSV output when --output is not given
OUTPUT_DIR = Path(os.getenv("LAGUERRE_OUTPUT_DIR", "."))

DEFAULT_GRID_N = 1024
DEFAULT_GRADING = 2.0
DEFAULT_LENGTH = 1.0
DEFAULT_TOL = 1e-10
DEFAULT_NU = -1.5


def default_output_path(command: str) -> Path:
    return OUTPUT_DIR / f"{command}.csv"
