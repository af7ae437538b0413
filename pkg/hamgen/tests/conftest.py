import sys
from pathlib import Path

# make chemref importable regardless of the pytest invocation directory
sys.path.insert(0, str(Path(__file__).resolve().parent))
