"""Bridge from fitted topic models to the corpus bundle interchange format."""

from .errors import CountMismatchError, ExportError
from .export import ExportRequest, export_bundle
from .split import Chunk, split_paragraphs, split_sentences

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "ExportError",
    "CountMismatchError",
    "ExportRequest",
    "export_bundle",
    "Chunk",
    "split_paragraphs",
    "split_sentences",
]
