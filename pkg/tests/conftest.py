import pathlib
import sys

# Make the package importable without installation, and the shared oracle
# helpers importable from test modules.
ROOT = pathlib.Path(__file__).resolve().parent.parent
for entry in (str(ROOT / "src"), str(ROOT / "tests")):
    if entry not in sys.path:
        sys.path.insert(0, entry)
