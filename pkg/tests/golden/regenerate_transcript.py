"""Regenerate the frozen debug-session transcript.

Runs a fixed command script against the power corpus and records every
request/response line verbatim. Run from the repository root:

    python3 tests/golden/regenerate_transcript.py

The replay test asserts byte equality, so regenerate only when the wire
protocol deliberately changes.
"""

import json
import pathlib
import shutil
import sys
import tempfile

HERE = pathlib.Path(__file__).parent
sys.path.insert(0, str(HERE.parent))  # for the DebugClient test helper

from test_debugsvc import DebugClient, loop_body_line  # noqa: E402

COMMANDS = [
    {"cmd": "nextStage"},
    {"cmd": "step"},
    {"cmd": "step"},
    {"cmd": "step"},
    {"cmd": "setBreakpoint", "line": "@loop"},
    {"cmd": "continue"},
    {"cmd": "inspect", "name": "res"},
    {"cmd": "step"},
    {"cmd": "inspect", "name": "res"},
    {"cmd": "step"},
    {"cmd": "step"},
    {"cmd": "step"},  # runs the stage out: the reply is the stageEnd event
    {"cmd": "nextStage"},
    {"cmd": "quit"},
]


def record(workdir) -> list:
    client = DebugClient(workdir, "power.sjs")
    exchange = []
    loop_line = None
    try:
        for command in COMMANDS:
            msg = dict(command)
            if msg.get("line") == "@loop":
                msg["line"] = loop_line
            request = json.dumps(msg)
            client.send_raw(request)
            response = client.reader.readline().rstrip("\n")
            exchange.append({"send": request, "recv": response})
            if msg["cmd"] == "nextStage" and loop_line is None:
                loop_line = loop_body_line(json.loads(response)["source"])
    finally:
        client.close()
    return exchange


def main() -> None:
    corpus = HERE.parent / "corpus"
    with tempfile.TemporaryDirectory() as tmp:
        workdir = pathlib.Path(tmp)
        for entry in corpus.iterdir():
            shutil.copy(entry, workdir / entry.name)
        exchange = record(workdir)
    out = HERE / "power_debug_transcript.json"
    out.write_text(json.dumps(exchange, indent=1) + "\n", encoding="utf-8")
    print(f"wrote {out} ({len(exchange)} exchanges)")


if __name__ == "__main__":
    main()
