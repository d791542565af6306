"""
File repository for instances and JSON artifacts.
"""
import json
import os
from typing import Any, Dict, Optional


class ArtifactRepository:
    """Repository class for reading inputs and writing JSON outputs."""

    def __init__(self, base_dir: Optional[str] = None, indent: int = 2, sort_keys: bool = True):
        """
        Initialize repository with an optional base directory.

        Args:
            base_dir: Directory relative paths are resolved against
            indent: JSON indentation for written files
            sort_keys: Sort object keys so identical payloads give identical files
        """
        self.base_dir = base_dir
        self.indent = indent
        self.sort_keys = sort_keys

    def resolve(self, path: str) -> str:
        if self.base_dir and not os.path.isabs(path):
            return os.path.join(self.base_dir, path)
        return path

    def read_bytes(self, path: str) -> bytes:
        """
        Read a file as bytes.

        Raises:
            OSError: If the file cannot be read
        """
        with open(self.resolve(path), 'rb') as handle:
            return handle.read()

    def read_json(self, path: str) -> Any:
        return json.loads(self.read_bytes(path).decode('utf-8'))

    def dumps(self, payload: Any) -> str:
        """JSON text with a trailing newline."""
        return json.dumps(payload, indent=self.indent, sort_keys=self.sort_keys) + '\n'

    def write_json(self, path: str, payload: Any) -> str:
        """
        Write a payload as deterministic JSON, creating parent directories.

        Returns:
            The resolved path written
        """
        target = self.resolve(path)
        parent = os.path.dirname(target)
        if parent and not os.path.exists(parent):
            os.makedirs(parent)
        with open(target, 'w', encoding='utf-8') as handle:
            handle.write(self.dumps(payload))
        return target

    def write_timings(self, path: str, timings: Dict[str, float]) -> str:
        """Write timings next to an artifact, kept apart so artifacts stay byte-identical."""
        root, _ = os.path.splitext(path)
        return self.write_json(f"{root}.timings.json", timings)
