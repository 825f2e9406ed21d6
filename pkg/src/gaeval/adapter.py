"""Line protocol for external transcription processes.

One adapter process serves a whole run.  The harness writes one request per
utterance to the adapter's stdin::

    <sample_id>\\t<audio_path>\\n

then closes stdin; the adapter answers on stdout, in any order::

    <sample_id>\\t<transcript>\\n

Backslash, tab and newline inside a field are escaped as ``\\\\``, ``\\t`` and
``\\n``.  The harness never touches the audio itself.

Timeouts: while requests are outstanding, the harness waits at most
``timeout`` seconds for the next reply.  When that window passes in silence
the oldest outstanding request is given up on (empty hypothesis, flagged) and
the wait restarts for the rest.  Late replies to abandoned requests are
dropped.  Requests still open when an adapter exits cleanly are reported as
unanswered.
"""

from __future__ import annotations

import queue
import shlex
import subprocess
import threading
import time
from dataclasses import dataclass, field
from typing import Sequence

from .corpus_io import Utterance

__all__ = ["AdapterError", "AdapterProtocolError", "AdapterResult", "escape_field", "unescape_field", "run_adapter"]

DEFAULT_TIMEOUT_SECS = 300.0
SHUTDOWN_GRACE_SECS = 5.0
_EOF = object()


class AdapterError(RuntimeError):
    """The adapter process failed; carries its stderr tail."""

    def __init__(self, message: str, returncode: int | None = None, stderr: str = ""):
        self.returncode = returncode
        self.stderr = stderr
        if stderr:
            message = f"{message}\n--- adapter stderr ---\n{stderr.rstrip()}"
        super().__init__(message)


class AdapterProtocolError(AdapterError):
    """The adapter sent a reply the harness cannot interpret."""


def escape_field(s: str) -> str:
    return s.replace("\\", "\\\\").replace("\t", "\\t").replace("\n", "\\n")


def unescape_field(s: str) -> str:
    out = []
    i = 0
    while i < len(s):
        ch = s[i]
        if ch == "\\" and i + 1 < len(s):
            nxt = s[i + 1]
            out.append({"t": "\t", "n": "\n", "\\": "\\"}.get(nxt, "\\" + nxt))
            i += 2
        else:
            out.append(ch)
            i += 1
    return "".join(out)


@dataclass
class AdapterResult:
    hypotheses: dict[str, str]
    timed_out: list[str] = field(default_factory=list)
    unanswered: list[str] = field(default_factory=list)
    stderr: str = ""


def _pump_stdout(stream, q: queue.Queue) -> None:
    for line in stream:
        q.put(line)
    q.put(_EOF)


def _write_requests(stream, utterances: Sequence[Utterance], errors: list) -> None:
    try:
        for u in utterances:
            stream.write(f"{escape_field(u.sample_id)}\t{escape_field(u.audio_path)}\n".encode("utf-8"))
            stream.flush()
        # EOF after the last request lets batching adapters start work
        stream.close()
    except (BrokenPipeError, OSError, ValueError) as e:
        errors.append(e)


def run_adapter(
    adapter_command: str | Sequence[str],
    utterances: Sequence[Utterance],
    timeout: float = DEFAULT_TIMEOUT_SECS,
) -> AdapterResult:
    """Transcribe ``utterances`` through an adapter process.

    Raises:
        ValueError: an utterance has no audio path.
        AdapterError: the adapter exits nonzero.
        AdapterProtocolError: a malformed reply or an unknown sample id.
    """
    for u in utterances:
        if not u.audio_path:
            raise ValueError(f"utterance {u.sample_id!r} has no audio path")
    argv = shlex.split(adapter_command) if isinstance(adapter_command, str) else list(adapter_command)
    proc = subprocess.Popen(
        argv,
        stdin=subprocess.PIPE,
        stdout=subprocess.PIPE,
        stderr=subprocess.PIPE,
    )
    stderr_chunks: list[bytes] = []
    err_thread = threading.Thread(target=lambda: stderr_chunks.extend(proc.stderr), daemon=True)
    err_thread.start()
    replies: queue.Queue = queue.Queue()
    reader = threading.Thread(target=_pump_stdout, args=(proc.stdout, replies), daemon=True)
    reader.start()
    write_errors: list = []
    writer = threading.Thread(target=_write_requests, args=(proc.stdin, utterances, write_errors), daemon=True)
    writer.start()

    known = {u.sample_id for u in utterances}
    outstanding = [u.sample_id for u in utterances]
    pending = set(outstanding)
    hyps: dict[str, str] = {}
    timed_out: list[str] = []

    def stderr_text() -> str:
        return b"".join(stderr_chunks).decode("utf-8", errors="replace")

    def fail(exc_type, message):
        proc.kill()
        proc.wait()
        err_thread.join(timeout=1)
        raise exc_type(message, proc.returncode, stderr_text())

    deadline = time.monotonic() + timeout
    while pending:
        try:
            item = replies.get(timeout=max(0.0, deadline - time.monotonic()))
        except queue.Empty:
            while outstanding[0] not in pending:
                outstanding.pop(0)
            sid = outstanding.pop(0)
            pending.discard(sid)
            hyps[sid] = ""
            timed_out.append(sid)
            deadline = time.monotonic() + timeout
            continue
        if item is _EOF:
            break
        try:
            line = item.decode("utf-8").rstrip("\n")
        except UnicodeDecodeError:
            fail(AdapterProtocolError, f"adapter reply is not UTF-8: {item[:80]!r}")
        if "\t" not in line:
            fail(AdapterProtocolError, f"malformed adapter reply {line!r}")
        raw_id, raw_text = line.split("\t", 1)
        sid = unescape_field(raw_id)
        if sid not in known:
            fail(AdapterProtocolError, f"adapter replied for unknown sample id {sid!r}")
        if sid in pending:
            pending.discard(sid)
            hyps[sid] = unescape_field(raw_text)
            deadline = time.monotonic() + timeout

    writer.join(timeout=SHUTDOWN_GRACE_SECS)
    try:
        proc.stdin.close()
    except (BrokenPipeError, OSError):
        pass
    try:
        proc.wait(timeout=SHUTDOWN_GRACE_SECS)
        killed = False
    except subprocess.TimeoutExpired:
        proc.kill()
        proc.wait()
        killed = True
    err_thread.join(timeout=1)
    stderr = stderr_text()
    if not killed and proc.returncode != 0:
        raise AdapterError(f"adapter exited with status {proc.returncode}", proc.returncode, stderr)
    unanswered = [sid for sid in outstanding if sid in pending]
    for sid in unanswered:
        hyps[sid] = ""
    return AdapterResult({u.sample_id: hyps[u.sample_id] for u in utterances}, timed_out, unanswered, stderr)
