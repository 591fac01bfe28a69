"""Greedy sentence-boundary chunking of documents into bounded-length parts.

Long documents exceed the encoding window of embedding models; splitting them
into parts of up to 150 words (roughly one paragraph) keeps each part
embeddable. Sentences are packed greedily: a sentence is appended to the
current chunk unless that would push it over the word budget. A single
sentence longer than the budget becomes its own chunk, flagged as over-limit.

Sentence segmentation is rule based (terminal punctuation followed by an
upper-case or numeric start, with an abbreviation list), which is plenty for
chunking: the downstream measures are insensitive to exact boundaries. All
whitespace is normalized to single spaces, so concatenating a document's
chunks reproduces its whitespace-normalized text exactly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable

DEFAULT_MAX_WORDS = 150

# Trailing tokens after which a period does not end a sentence.
ABBREVIATIONS = {
    "bspw.", "bzw.", "ca.", "d.h.", "dr.", "e.g.", "etc.", "evtl.", "ggf.",
    "i.e.", "inkl.", "jr.", "mr.", "mrs.", "ms.", "nr.", "o.ä.", "prof.",
    "s.", "sog.", "st.", "u.a.", "usw.", "v.a.", "vgl.", "vs.", "z.b.",
}

_BOUNDARY = re.compile(r"(?<=[.!?])\s+(?=[\"'«(]?[A-ZÄÖÜ0-9])")


@dataclass(frozen=True)
class Chunk:
    source_id: str
    ordinal: int
    text: str
    n_words: int
    over_limit: bool

    @property
    def chunk_id(self) -> str:
        return f"{self.source_id}#{self.ordinal}"


def split_sentences(text: str) -> list[str]:
    """Whitespace-normalized sentences of one document."""
    normalized = " ".join(text.split())
    if not normalized:
        return []
    parts: list[str] = []
    start = 0
    for match in _BOUNDARY.finditer(normalized):
        candidate = normalized[start : match.start()]
        last_word = candidate.rsplit(" ", 1)[-1].lower()
        if last_word in ABBREVIATIONS or _is_initial(last_word):
            continue
        parts.append(candidate)
        start = match.end()
    tail = normalized[start:]
    if tail:
        parts.append(tail)
    return parts


def _is_initial(word: str) -> bool:
    return len(word) == 2 and word[1] == "." and word[0].isalpha()


def split_paragraphs(
    texts: Iterable[tuple[str, str] | dict],
    max_words: int = DEFAULT_MAX_WORDS,
) -> list[Chunk]:
    """Chunk ``(doc_id, text)`` pairs (or ``{id, text}`` dicts) by sentence packing.

    Chunks keep document order; each records its source id and ordinal within
    that document.
    """
    if max_words < 1:
        raise ValueError(f"max_words must be at least 1, got {max_words}")
    chunks: list[Chunk] = []
    for entry in texts:
        if isinstance(entry, dict):
            doc_id, text = str(entry["id"]), entry["text"]
        else:
            doc_id, text = str(entry[0]), entry[1]
        chunks.extend(_split_one(doc_id, text, max_words))
    return chunks


def _split_one(doc_id: str, text: str, max_words: int) -> list[Chunk]:
    sentences = split_sentences(text)
    chunks: list[Chunk] = []
    current: list[str] = []
    count = 0

    def flush():
        nonlocal current, count
        if current:
            chunks.append(
                Chunk(
                    source_id=doc_id,
                    ordinal=len(chunks),
                    text=" ".join(current),
                    n_words=count,
                    over_limit=count > max_words,
                )
            )
            current, count = [], 0

    for sentence in sentences:
        words = sentence.count(" ") + 1
        if count and count + words > max_words:
            flush()
        current.append(sentence)
        count += words
        if count > max_words:
            # A single sentence over the budget stands alone.
            flush()
    flush()
    return chunks
