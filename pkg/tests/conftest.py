import sys
from pathlib import Path

from hypothesis import settings

# tests import sibling helper modules (naive oracles)
sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", deadline=None)
settings.load_profile("default")
