"""Human-in-the-loop annotation: append-only JSON-lines session store and the
loopback HTTP service the annotation UI talks to.

A session file starts with one ``session`` record, followed by ``task``
records and then ``annotation`` records appended as labels arrive. The last
annotation per sample_id wins; earlier ones stay in the log.
"""

from __future__ import annotations

import json
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .corpus import Decade
from .query import ConcordanceLine
from .stats import PurposiveEstimate, estimate_purposive

VALID_LABELS = ("purposive", "non_purposive", "unclear")


class SessionError(Exception):
    pass


class SessionNotFound(SessionError):
    pass


class UnknownTask(SessionError):
    pass


class BadLabel(SessionError):
    pass


@dataclass(frozen=True)
class AnnotationTask:
    sample_id: str
    left: str
    hit: str
    right: str
    decade: int
    doc_id: str

    def to_dict(self, status: str) -> dict:
        return {
            "sample_id": self.sample_id,
            "left": self.left,
            "hit": self.hit,
            "right": self.right,
            "decade": self.decade,
            "doc_id": self.doc_id,
            "status": status,
        }


@dataclass(frozen=True)
class AnnotationRecord:
    sample_id: str
    label: str
    annotator: str
    timestamp: float


@dataclass
class Session:
    session_id: str
    patterns: list[str]
    seed: int
    corpus_hash: str
    # per-decade total pmw of the sampled construction, fixed at session creation
    decade_total_pmw: dict[int, float]
    tasks: dict[str, AnnotationTask] = field(default_factory=dict)
    records: dict[str, AnnotationRecord] = field(default_factory=dict)

    def labeled_counts(self, decade: int) -> tuple[int, int]:
        """(k_purposive, n_labeled) for one decade; unclear labels excluded."""
        k = n = 0
        for task in self.tasks.values():
            if task.decade != decade:
                continue
            record = self.records.get(task.sample_id)
            if record is None or record.label == "unclear":
                continue
            n += 1
            if record.label == "purposive":
                k += 1
        return k, n

    def estimate(self, decade: int) -> PurposiveEstimate | None:
        """Live estimate for a decade; None until at least one usable label."""
        total_pmw = self.decade_total_pmw.get(decade)
        if total_pmw is None:
            raise SessionError(f"decade {decade} not in session")
        k, n = self.labeled_counts(decade)
        if n == 0:
            return None
        return estimate_purposive(Decade(decade), total_pmw, k, n)

    def decades(self) -> list[int]:
        return sorted(self.decade_total_pmw)


class SessionStore:
    """Crash-safe append-only JSONL persistence for one session.

    Every annotation write is appended and flushed before the call returns;
    writers are serialized through a lock.
    """

    def __init__(self, path: Path):
        self.path = Path(path)
        self._lock = threading.Lock()
        self.session = self._load()

    @classmethod
    def create(
        cls,
        path: Path,
        session_id: str,
        patterns: Iterable[str],
        seed: int,
        corpus_hash: str,
        decade_total_pmw: dict[int, float],
        tasks: Iterable[AnnotationTask],
    ) -> "SessionStore":
        path = Path(path)
        records = [
            {
                "type": "session",
                "session_id": session_id,
                "patterns": list(patterns),
                "seed": seed,
                "corpus_hash": corpus_hash,
                "decade_total_pmw": {str(d): p for d, p in decade_total_pmw.items()},
            }
        ]
        seen: set[str] = set()
        for task in tasks:
            if task.sample_id in seen:
                raise SessionError(f"duplicate sample_id {task.sample_id}")
            seen.add(task.sample_id)
            records.append(
                {
                    "type": "task",
                    "sample_id": task.sample_id,
                    "left": task.left,
                    "hit": task.hit,
                    "right": task.right,
                    "decade": task.decade,
                    "doc_id": task.doc_id,
                }
            )
        with open(path, "w", encoding="utf-8") as fh:
            for record in records:
                fh.write(json.dumps(record, sort_keys=True) + "\n")
        return cls(path)

    def _load(self) -> Session:
        if not self.path.exists():
            raise SessionNotFound(f"no session file at {self.path}")
        session: Session | None = None
        with open(self.path, encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                record = json.loads(line)
                kind = record.get("type")
                if kind == "session":
                    session = Session(
                        session_id=record["session_id"],
                        patterns=list(record["patterns"]),
                        seed=record["seed"],
                        corpus_hash=record["corpus_hash"],
                        decade_total_pmw={
                            int(d): float(p)
                            for d, p in record["decade_total_pmw"].items()
                        },
                    )
                elif kind == "task":
                    if session is None:
                        raise SessionError(f"task before session header (line {line_no})")
                    task = AnnotationTask(
                        sample_id=record["sample_id"],
                        left=record["left"],
                        hit=record["hit"],
                        right=record["right"],
                        decade=record["decade"],
                        doc_id=record["doc_id"],
                    )
                    session.tasks[task.sample_id] = task
                elif kind == "annotation":
                    if session is None:
                        raise SessionError(f"annotation before session header (line {line_no})")
                    session.records[record["sample_id"]] = AnnotationRecord(
                        sample_id=record["sample_id"],
                        label=record["label"],
                        annotator=record.get("annotator", ""),
                        timestamp=record.get("timestamp", 0.0),
                    )
                else:
                    raise SessionError(f"unknown record type {kind!r} (line {line_no})")
        if session is None:
            raise SessionError(f"{self.path} has no session header")
        return session

    def annotate(self, sample_id: str, label: str, annotator: str = "") -> AnnotationRecord:
        if label not in VALID_LABELS:
            raise BadLabel(f"label must be one of {VALID_LABELS}, got {label!r}")
        with self._lock:
            if sample_id not in self.session.tasks:
                raise UnknownTask(f"sample {sample_id!r} is not part of this session")
            record = AnnotationRecord(sample_id, label, annotator, time.time())
            payload = {
                "type": "annotation",
                "sample_id": record.sample_id,
                "label": record.label,
                "annotator": record.annotator,
                "timestamp": record.timestamp,
            }
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(json.dumps(payload, sort_keys=True) + "\n")
                fh.flush()
            self.session.records[sample_id] = record
            return record

    def task_status(self, sample_id: str) -> str:
        return "labeled" if sample_id in self.session.records else "pending"

    def progress(self) -> dict:
        total = len(self.session.tasks)
        labeled = len(self.session.records)
        return {"total": total, "labeled": labeled, "pending": total - labeled}


def create_app(store: SessionStore, static_dir: Path | None = None):
    """FastAPI application exposing the annotation API over loopback."""
    from fastapi import FastAPI, HTTPException
    from fastapi.responses import FileResponse

    app = FastAPI(title="obsolens annotation service")
    session = store.session

    @app.get("/api/session")
    def get_session():
        return {
            "session_id": session.session_id,
            "patterns": session.patterns,
            "seed": session.seed,
            "corpus_hash": session.corpus_hash,
            "decades": session.decades(),
            "decade_total_pmw": {str(d): p for d, p in session.decade_total_pmw.items()},
        }

    @app.get("/api/tasks")
    def list_tasks(status: str | None = None):
        if status not in (None, "pending", "labeled"):
            raise HTTPException(400, f"unknown status filter {status!r}")
        out = []
        for task in session.tasks.values():
            task_status = store.task_status(task.sample_id)
            if status is None or task_status == status:
                out.append(task.to_dict(task_status))
        return out

    @app.get("/api/tasks/{sample_id}")
    def get_task(sample_id: str):
        task = session.tasks.get(sample_id)
        if task is None:
            raise HTTPException(404, f"unknown task {sample_id!r}")
        return task.to_dict(store.task_status(sample_id))

    @app.post("/api/annotations")
    def post_annotation(body: dict):
        sample_id = body.get("sample_id")
        label = body.get("label")
        annotator = body.get("annotator", "")
        if not sample_id or not isinstance(sample_id, str):
            raise HTTPException(400, "sample_id is required")
        try:
            record = store.annotate(sample_id, label, annotator)
        except BadLabel as exc:
            raise HTTPException(400, str(exc)) from None
        except UnknownTask as exc:
            raise HTTPException(409, str(exc)) from None
        return {
            "sample_id": record.sample_id,
            "label": record.label,
            "annotator": record.annotator,
            "progress": store.progress(),
        }

    @app.get("/api/estimate")
    def get_estimate(decade: int):
        try:
            estimate = session.estimate(decade)
        except SessionError as exc:
            raise HTTPException(404, str(exc)) from None
        if estimate is None:
            return {"decade": decade, "sample_size": 0, "k_purposive": 0,
                    "total_pmw": session.decade_total_pmw[decade],
                    "purposive_pmw": None, "non_purposive_pmw": None}
        return {
            "decade": decade,
            "sample_size": estimate.sample_size,
            "k_purposive": estimate.k_purposive,
            "total_pmw": estimate.total_pmw,
            "purposive_pmw": estimate.purposive_pmw,
            "non_purposive_pmw": estimate.non_purposive_pmw,
        }

    @app.get("/api/progress")
    def get_progress():
        return store.progress()

    if static_dir is not None and static_dir.is_dir():
        from fastapi.staticfiles import StaticFiles

        @app.get("/")
        def root():
            return FileResponse(static_dir / "index.html")

        app.mount("/", StaticFiles(directory=static_dir), name="static")

    return app


def serve_annotation(store: SessionStore, port: int, static_dir: Path | None = None):
    """Run the annotation service on loopback until interrupted."""
    import uvicorn

    app = create_app(store, static_dir=static_dir)
    uvicorn.run(app, host="127.0.0.1", port=port, log_level="warning")
