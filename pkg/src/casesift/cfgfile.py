"""Reader for the bracket-sectioned config files shipped in data/.

Format: `[section header]` lines open a section; every following non-blank,
non-comment line belongs to it. `#` starts a comment only at the beginning
of a line, so phrases containing `#` survive verbatim.
"""

from __future__ import annotations

from pathlib import Path


class ConfigError(ValueError):
    """Malformed config file; message carries file and line number."""


def read_sections(path: str | Path) -> list[tuple[str, list[str], int]]:
    """Return (header, item_lines, first_line_number) per section, in file order."""
    path = Path(path)
    sections: list[tuple[str, list[str], int]] = []
    current: list[str] | None = None
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("[") and line.endswith("]"):
            header = line[1:-1].strip()
            if not header:
                raise ConfigError(f"{path}:{lineno}: empty section header")
            current = []
            sections.append((header, current, lineno))
        else:
            if current is None:
                raise ConfigError(f"{path}:{lineno}: item before any [section] header")
            current.append(line)
    return sections
