import sys
from typing import List, TextIO

STATUS_MARKS = {
    "completed": "✅",
    "failed": "❌",
    "skipped": "⏭️",
}


def render_verdicts(label: str, verdicts: List, stream: TextIO = None):
    """Write one line per check stage to stderr"""
    stream = stream if stream is not None else sys.stderr
    print(f"{label}", file=stream)
    for verdict in verdicts:
        mark = STATUS_MARKS.get(verdict.status, "?")
        print(f"  {mark} {verdict.name}: {verdict.status} - {verdict.detail}", file=stream)
    failed = [v.name for v in verdicts if v.status == "failed"]
    if failed:
        print(f"  failed verdicts: {', '.join(failed)}", file=stream)
