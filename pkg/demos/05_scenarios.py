"""
Scenario files
==============

The command-line runner reads an INI scenario and writes one CSV per
stage. Here the bundled rotating square runs in-process.
"""

import tempfile
from pathlib import Path

from contchoquet.cli import main
from contchoquet.config import bundled_scenarios

print("bundled:", bundled_scenarios())
main(["describe", "rotating-square"])

out = Path(tempfile.mkdtemp())
code = main(["run", "rotating-square", "--out", str(out)])
print("exit code", code)
print((out / "summary.ini").read_text())
print((out / "verify_delta_selection.csv").read_text().splitlines()[:4])
