"""
One report per preset
=====================

``run_report`` chains every stage and records a named check for each
expected value.  The JSON is stable across seeds and thread counts.
"""

import json

from wallcross.presets import load_preset
from wallcross.shell.report import run_report

rep = run_report(load_preset("p1xp1-t129"), seed=0, threads=2)
doc = json.loads(rep.to_json())
for check in doc["checks"]:
    print(f"{check['name']:40} {'ok' if check['ok'] else 'FAILED'}")
print("exit code", rep.exit_code)
