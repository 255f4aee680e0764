"""Persistent experiment results using LMDB."""

from __future__ import annotations

from pathlib import Path
from typing import Any, Iterable, List, Optional

import lmdb
import msgpack
import structlog

from ergavg.core.errors import StorageError
from ergavg.types import ExperimentKind, ExperimentReport

logger = structlog.get_logger(__name__)

REPORT_PREFIX = "reports/"


def report_key(kind: ExperimentKind, seed: int) -> str:
    """Store key ``reports/<kind>/<seed>``."""
    return f"{REPORT_PREFIX}{ExperimentKind(kind).value}/{int(seed)}"


class ResultStore:
    """LMDB-backed store of experiment reports."""

    def __init__(self, path: Path, map_size: int = 64 * 1024 * 1024):
        """Initialize result store.

        Args:
            path: Path to LMDB database directory
            map_size: Maximum size database may grow to

        """
        self.path = Path(path)
        try:
            self.path.mkdir(parents=True, exist_ok=True)
            self.env = lmdb.open(str(self.path), map_size=map_size)
        except (OSError, lmdb.Error) as exc:
            msg = f"cannot open result store at {self.path}: {exc}"
            raise StorageError(msg) from exc

    def _pack(self, value: Any) -> bytes:
        return msgpack.packb(value, use_bin_type=True)

    def _unpack(self, data: Optional[bytes]) -> Any:
        if data is None:
            return None
        return msgpack.unpackb(data, raw=False)

    def close(self) -> None:
        self.env.close()

    def __enter__(self) -> ResultStore:
        return self

    def __exit__(self, *exc_info: Any) -> None:
        self.close()

    def set(self, key: str, value: Any) -> None:
        """Set a key-value pair in the store.

        Args:
            key: Key to set
            value: Value to store

        """
        try:
            with self.env.begin(write=True) as txn:
                txn.put(key.encode(), self._pack(value))
        except lmdb.Error as exc:
            raise StorageError(f"write of {key} failed: {exc}") from exc

    def get(self, key: str) -> Any:
        """Get a value from the store.

        Args:
            key: Key to retrieve

        Returns:
            The stored value or None if not found

        """
        with self.env.begin() as txn:
            return self._unpack(txn.get(key.encode()))

    def delete(self, key: str) -> bool:
        """Delete a key from the store.

        Args:
            key: Key to delete

        Returns:
            True if the key was deleted, False if it didn't exist

        """
        with self.env.begin(write=True) as txn:
            return txn.delete(key.encode())

    def keys(self, prefix: str = "") -> Iterable[str]:
        """Iterate over keys, optionally only those starting with ``prefix``.

        Yields:
            Each matching key in sorted order

        """
        with self.env.begin() as txn:
            cursor = txn.cursor()
            if prefix and not cursor.set_range(prefix.encode()):
                return
            for key in cursor.iternext(keys=True, values=False):
                name = key.decode()
                if not name.startswith(prefix):
                    break
                yield name

    # reports

    def put_report(self, report: ExperimentReport) -> str:
        """Store a report under its kind and seed, replacing any earlier one."""
        key = report_key(report.kind, report.config.seed)
        self.set(key, report.model_dump(mode="json"))
        logger.info("report_stored", key=key, passed=report.passed)
        return key

    def get_report(self, kind: ExperimentKind, seed: int) -> Optional[ExperimentReport]:
        """Load a stored report, re-judging its pass flags from the stored points."""
        from ergavg.lab.acceptance import reevaluate

        data = self.get(report_key(kind, seed))
        if data is None:
            return None
        return reevaluate(ExperimentReport.model_validate(data))

    def list_reports(self, kind: Optional[ExperimentKind] = None) -> List[str]:
        """Keys of stored reports, all kinds unless ``kind`` is given."""
        prefix = REPORT_PREFIX
        if kind is not None:
            prefix += f"{ExperimentKind(kind).value}/"
        return list(self.keys(prefix))

    def delete_report(self, kind: ExperimentKind, seed: int) -> bool:
        return self.delete(report_key(kind, seed))
