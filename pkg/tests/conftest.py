import sys
from pathlib import Path

from hypothesis import settings

# Make the oracles helper importable, and let the suite run straight from a
# checkout without an editable install.
sys.path.insert(0, str(Path(__file__).parent))
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

# The whole suite is meant to be a deterministic function of its seeds.
settings.register_profile("deterministic", derandomize=True)
settings.load_profile("deterministic")
