"""
Structured run journal.

Each CLI run is appended to ./logs/runs_YYYYMMDD.jsonl (JSON Lines) so counts,
witnesses and timings can be compared across runs later.
"""

import json
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, Optional


class RunLogger:
    """
    JSON-Lines journal of runs.

    Records:
    - command and fully resolved configuration
    - result summary (counts, field sizes, witnesses)
    - wall-clock duration
    """

    def __init__(self, log_dir: str | Path = "./logs"):
        self.log_dir = Path(log_dir)

    def log_run(
        self,
        command: str,
        config: Any,
        result: Any,
        duration_seconds: float,
        metadata: Optional[Dict] = None,
    ) -> Path:
        """
        Append one run to the journal.

        Args:
            command: Sub-command name (census, minor, minfield, ...)
            config: Resolved RunConfig (pydantic model or dict)
            result: Result model or dict
            duration_seconds: Wall-clock duration
            metadata: Extra fields

        Returns:
            Path of the journal file written
        """
        entry = {
            "timestamp": datetime.now(timezone.utc).isoformat(),
            "command": command,
            "config": self._serialize(config),
            "result": self._serialize(result),
            "duration_seconds": round(duration_seconds, 6),
            "metadata": metadata or {},
        }
        self.log_dir.mkdir(parents=True, exist_ok=True)
        log_file = self.log_dir / f"runs_{datetime.now(timezone.utc).strftime('%Y%m%d')}.jsonl"
        with open(log_file, "a", encoding="utf-8") as f:
            f.write(json.dumps(entry, ensure_ascii=False, default=str) + "\n")
        return log_file

    def _serialize(self, data: Any) -> Dict:
        """Serialize a pydantic model or dict into a dict"""
        if hasattr(data, "model_dump"):
            return data.model_dump(mode="json")
        elif isinstance(data, dict):
            return data
        else:
            return {"value": str(data)}


# Global instance
run_logger = RunLogger()


def log_run(command: str, config: Any, result: Any, duration: float, log_dir: Optional[Path] = None) -> Path:
    """Helper to journal a run quickly"""
    logger = RunLogger(log_dir) if log_dir is not None else run_logger
    return logger.log_run(command, config, result, duration)
