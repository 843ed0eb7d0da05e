"""Atomic file output for run artifacts."""

import json
import logging
import shutil
from pathlib import Path
from typing import Dict, Optional

logger = logging.getLogger(__name__)


class FileManager:
    """Writes artifacts under an optional base directory via temp file plus rename."""

    def __init__(self, base_path: Optional[Path] = None):
        self.base_path = Path(base_path) if base_path is not None else None

    def resolve(self, path: Path) -> Path:
        path = Path(path)
        if self.base_path is not None and not path.is_absolute():
            return self.base_path / path
        return path

        try:
            with open(path, "r") as f:
                return json.load(f)
        except json.JSONDecodeError as e:
            logger.warning("Invalid JSON in %s: %s", path, e)
            self._create_backup(path)
            return {}

    def write_json(self, path: Path, data: Dict, backup: bool = True) -> Path:
        """Save data as JSON, keeping the previous file as .bak."""
        text = json.dumps(data, indent=2, ensure_ascii=False) + "\n"
        return self.write_text(path, text, backup=backup)

    def write_text(self, path: Path, text: str, backup: bool = False) -> Path:
        """Write text atomically; with backup, an existing file is copied to <name>.bak first."""
        path = self.resolve(path)
        path.parent.mkdir(parents=True, exist_ok=True)

        if backup and path.exists():
            shutil.copy2(path, path.with_name(path.name + ".bak"))

        # Write to temporary file first, then rename for atomic operation
        temp_path = path.with_name(path.name + ".tmp")
        try:
            with open(temp_path, "w") as f:
                f.write(text)
            temp_path.replace(path)
        except OSError:
            if temp_path.exists():
                temp_path.unlink()
            raise

        logger.debug("wrote %d characters to %s", len(text), path)
        return path
