"""Command-line entry points: ``btm-export`` and ``btm-split``.

Corpus files are JSON lines, one ``{"id": ..., "text": ...}`` object per line.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import pickle
import sys
from pathlib import Path

import numpy as np

from .errors import ExportError
from .export import ExportRequest, export_bundle
from .split import DEFAULT_MAX_WORDS, split_paragraphs

log = logging.getLogger(__name__)


def read_corpus_jsonl(path: str | Path) -> list[dict]:
    entries = []
    with Path(path).open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                entry = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ExportError(f"{path}:{lineno}: not valid JSON ({exc})") from exc
            if "id" not in entry or "text" not in entry:
                raise ExportError(f"{path}:{lineno}: entry needs 'id' and 'text'")
            entries.append(entry)
    return entries


def _read_f32le(path: str) -> np.ndarray:
    return np.frombuffer(Path(path).read_bytes(), dtype="<f4")


def _read_generic(doc_path: str, topic_path: str, assign_path: str):
    assignments = []
    doc_ids = []
    with Path(assign_path).open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["doc_id", "topic_id"]:
            raise ExportError(f"{assign_path}: expected header 'doc_id,topic_id'")
        for doc_id, topic in reader:
            doc_ids.append(doc_id)
            assignments.append(int(topic))
    flat_docs = _read_f32le(doc_path)
    if not doc_ids or flat_docs.size % len(doc_ids):
        raise ExportError(
            f"{doc_path}: {flat_docs.size} floats do not divide into {len(doc_ids)} documents"
        )
    dim = flat_docs.size // len(doc_ids)
    flat_topics = _read_f32le(topic_path)
    if flat_topics.size % dim:
        raise ExportError(f"{topic_path}: {flat_topics.size} floats are not rows of dim {dim}")
    return (
        doc_ids,
        flat_docs.reshape(len(doc_ids), dim),
        flat_topics.reshape(-1, dim),
        assignments,
    )


def main_export(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="btm-export", description="Serialize a topic model run into a bundle directory."
    )
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--model", help="pickled fitted topic model")
    source.add_argument(
        "--generic",
        nargs=3,
        metavar=("DOC_EMB", "TOPIC_EMB", "ASSIGNMENTS"),
        help="doc_emb.f32le topic_emb.f32le assignments.csv",
    )
    parser.add_argument("--texts", help="corpus.jsonl with {id, text} per line")
    parser.add_argument("--embeddings", help="doc_embeddings.f32le to pair with --model")
    parser.add_argument("--out", required=True)
    parser.add_argument("--corpus-id", required=True)
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(levelname)s: %(message)s")

    try:
        texts = read_corpus_jsonl(args.texts) if args.texts else None
        if args.generic:
            doc_ids, doc_emb, topic_emb, assignments = _read_generic(*args.generic)
            request = ExportRequest(
                corpus_id=args.corpus_id,
                out=args.out,
                doc_ids=doc_ids,
                doc_embeddings=doc_emb,
                topic_embeddings=topic_emb,
                assignments=assignments,
                texts=texts,
            )
        else:
            with open(args.model, "rb") as fh:
                model = pickle.load(fh)
            doc_emb = None
            if args.embeddings and texts:
                flat = _read_f32le(args.embeddings)
                doc_emb = flat.reshape(len(texts), -1)
            request = ExportRequest(
                corpus_id=args.corpus_id,
                out=args.out,
                model=model,
                doc_embeddings=doc_emb,
                texts=texts,
            )
        export_bundle(request)
    except (ExportError, OSError, pickle.UnpicklingError) as exc:
        log.error("%s", exc)
        return 1
    return 0


def main_split(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="btm-split", description="Chunk documents into bounded-length parts."
    )
    parser.add_argument("--max-words", type=int, default=DEFAULT_MAX_WORDS)
    parser.add_argument("--in", dest="infile", required=True, help="corpus.jsonl")
    parser.add_argument("--out", required=True, help="chunks.jsonl")
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(levelname)s: %(message)s")

    try:
        entries = read_corpus_jsonl(args.infile)
        chunks = split_paragraphs(entries, max_words=args.max_words)
    except (ExportError, OSError, ValueError) as exc:
        log.error("%s", exc)
        return 1
    with Path(args.out).open("w", encoding="utf-8") as fh:
        for chunk in chunks:
            fh.write(
                json.dumps(
                    {
                        "id": chunk.chunk_id,
                        "source_id": chunk.source_id,
                        "ordinal": chunk.ordinal,
                        "n_words": chunk.n_words,
                        "over_limit": chunk.over_limit,
                        "text": chunk.text,
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )
    log.info("%d chunks written to %s", len(chunks), args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main_export())
