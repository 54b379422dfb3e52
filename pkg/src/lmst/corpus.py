"""Plain-text corpora: one formula per line, ``#`` starts a comment."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from .formula import ParseError, parse

__all__ = ["CorpusError", "parse_corpus", "load_corpus", "bundled_corpus", "BUNDLED"]

BUNDLED = ("sample", "scheme5", "scheme7")


class CorpusError(ValueError):
    def __init__(self, source: str, line: int, error: ParseError):
        super().__init__(f"{source}: line {line}: {error}")
        self.line = line
        self.error = error


def parse_corpus(text: str, source: str = "<corpus>") -> list:
    """Return ``(line_number, text, formula)`` triples."""
    out = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            out.append((number, line, parse(line)))
        except ParseError as exc:
            raise CorpusError(source, number, exc) from None
    return out


def load_corpus(path) -> list:
    path = Path(path)
    return parse_corpus(path.read_text(encoding="utf-8"), str(path))


def bundled_corpus(name: str) -> list:
    if name not in BUNDLED:
        raise KeyError(f"no bundled corpus {name!r}; choose from {', '.join(BUNDLED)}")
    text = resources.files("lmst").joinpath("data", f"{name}.lmst").read_text(encoding="utf-8")
    return parse_corpus(text, f"bundled:{name}")
