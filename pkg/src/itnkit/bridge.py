"""Line-delimited JSON bridge to external models running as subprocesses.

Protocol (UTF-8, LF-terminated, one JSON object per line):

* request on the child's stdin:   ``{"id": ..., "text": ...}``
* response on the child's stdout: ``{"id": ..., "text": ...}`` or
  ``{"id": ..., "error": ...}``

Responses may arrive in any order; results are returned in input order.
Every input id gets exactly one result, successful or failed, so a
misbehaving model never loses other ids.
"""

from __future__ import annotations

import json
import queue
import subprocess
import threading
import time
from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Optional, Sequence, Union

from .domain import ItnKitError

_EOF = object()


class BridgeSpawnError(ItnKitError):
    """The external model could not be started."""


@dataclass(frozen=True)
class BridgeSpec:
    command: tuple[str, ...]
    timeout_per_item: float = 30.0  # seconds, counted from when the request is sent
    max_batch: int = 64  # most requests in flight at once
    restart_on_crash: bool = True

    def __post_init__(self):
        object.__setattr__(self, "command", tuple(self.command))
        if not self.command:
            raise ValueError("command must not be empty")
        if not self.timeout_per_item > 0:
            raise ValueError("timeout_per_item must be positive")
        if self.max_batch < 1:
            raise ValueError("max_batch must be at least 1")

    @classmethod
    def from_json(cls, data: Mapping) -> "BridgeSpec":
        command = data["command"]
        if isinstance(command, str):
            command = command.split()
        return cls(tuple(command), float(data.get("timeout_per_item", 30.0)),
                   int(data.get("max_batch", 64)), bool(data.get("restart_on_crash", True)))

    @classmethod
    def load(cls, path: Union[str, Path]) -> "BridgeSpec":
        return cls.from_json(json.loads(Path(path).read_text(encoding="utf-8")))


@dataclass(frozen=True)
class BridgeResult:
    id: str
    text: Optional[str] = None
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.error is None

    def to_json(self) -> dict:
        if self.ok:
            return {"id": self.id, "text": self.text}
        return {"id": self.id, "error": self.error}


class _Child:
    """One running model process with a reader thread feeding a queue."""

    def __init__(self, command: Sequence[str]):
        try:
            self.proc = subprocess.Popen(
                list(command), stdin=subprocess.PIPE, stdout=subprocess.PIPE, bufsize=0)
        except OSError as exc:
            raise BridgeSpawnError(f"cannot start {command[0]!r}: {exc}") from exc
        self.lines: queue.Queue = queue.Queue()
        self.reader = threading.Thread(target=self._read, daemon=True)
        self.reader.start()

    def _read(self) -> None:
        stream = self.proc.stdout
        try:
            for raw in stream:
                self.lines.put(raw)
        except (OSError, ValueError):
            pass
        self.lines.put(_EOF)

    def send(self, ident: str, text: str) -> bool:
        line = json.dumps({"id": ident, "text": text}, ensure_ascii=False) + "\n"
        try:
            self.proc.stdin.write(line.encode("utf-8"))
            self.proc.stdin.flush()
            return True
        except (BrokenPipeError, OSError, ValueError):
            return False

    def close(self) -> None:
        try:
            self.proc.stdin.close()
        except OSError:
            pass
        try:
            self.proc.wait(timeout=1)
        except subprocess.TimeoutExpired:
            self.proc.kill()
            self.proc.wait()
        self.reader.join(timeout=1)


def _parse(raw: bytes) -> Optional[dict]:
    try:
        obj = json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, ValueError):
        return None
    if not isinstance(obj, dict) or "id" not in obj:
        return None
    return obj


def _run_shard(items: Sequence[tuple[str, str]], spec: BridgeSpec) -> list[BridgeResult]:
    results: list[Optional[BridgeResult]] = [None] * len(items)
    pending = deque(range(len(items)))  # positions not yet sent
    inflight: dict[int, float] = {}  # position -> deadline
    by_id: dict[str, deque] = {}  # id -> positions in flight, oldest first
    order: deque = deque()  # positions in send order, for unattributable lines

    def finish(pos: int, text=None, error=None):
        if results[pos] is not None:
            return
        results[pos] = BridgeResult(items[pos][0], text, error)
        inflight.pop(pos, None)
        q = by_id.get(items[pos][0])
        if q is not None and pos in q:
            q.remove(pos)

    child = _Child(spec.command)
    try:
        progressed = True
        while pending or inflight:
            # Keep up to max_batch requests outstanding.
            crashed = False
            while pending and len(inflight) < spec.max_batch:
                pos = pending[0]
                ident, text = items[pos]
                if by_id.get(ident):
                    break  # a duplicate id waits until its twin is answered
                if not child.send(ident, text):
                    crashed = True
                    break
                pending.popleft()
                inflight[pos] = time.monotonic() + spec.timeout_per_item
                by_id.setdefault(ident, deque()).append(pos)
                order.append(pos)
            if not crashed:
                if not inflight:
                    continue
                wait = max(0.0, min(inflight.values()) - time.monotonic())
                try:
                    raw = child.lines.get(timeout=wait)
                except queue.Empty:
                    raw = None
                if raw is _EOF:
                    crashed = True
                elif raw is not None:
                    obj = _parse(raw)
                    if obj is None:
                        # Attribute a garbled line to the oldest request in flight.
                        while order and order[0] not in inflight:
                            order.popleft()
                        if order:
                            finish(order.popleft(), error="malformed response")
                    else:
                        q = by_id.get(str(obj["id"]))
                        if q:
                            pos = q[0]
                            if isinstance(obj.get("text"), str):
                                finish(pos, text=obj["text"])
                            else:
                                finish(pos, error=str(obj.get("error", "malformed response")))
                            progressed = True
                now = time.monotonic()
                for pos, deadline in list(inflight.items()):
                    if deadline <= now:
                        finish(pos, error="timeout")
            if crashed:
                for pos in list(inflight):
                    finish(pos, error="model crashed")
                    progressed = True
                child.close()
                if spec.restart_on_crash and pending and progressed:
                    progressed = False
                    child = _Child(spec.command)
                else:
                    for pos in pending:
                        finish(pos, error="model crashed")
                    pending.clear()
    finally:
        child.close()
    return [r for r in results if r is not None]


def run_batch(items: Sequence[tuple[str, str]], spec: BridgeSpec, jobs: int = 1) -> list[BridgeResult]:
    """Send ``(id, text)`` items through the model; one result per item, in input order.

    With ``jobs > 1`` the input is split into contiguous shards, each served
    by its own child process.
    """
    items = [(str(i), t) for i, t in items]
    if not items:
        return []
    jobs = max(1, min(jobs, len(items)))
    if jobs == 1:
        return _run_shard(items, spec)
    size = -(-len(items) // jobs)
    shards = [items[k:k + size] for k in range(0, len(items), size)]
    out: list[Optional[list[BridgeResult]]] = [None] * len(shards)
    errors: list[BaseException] = []

    def work(k):
        try:
            out[k] = _run_shard(shards[k], spec)
        except BaseException as exc:  # surfaced in the caller's thread
            errors.append(exc)

    threads = [threading.Thread(target=work, args=(k,)) for k in range(len(shards))]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    if errors:
        raise errors[0]
    return [r for shard in out for r in shard]
