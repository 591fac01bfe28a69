class ExportError(Exception):
    """Input cannot be serialized into a valid bundle."""


class CountMismatchError(ExportError):
    """Texts, embeddings, and assignments disagree on the document count."""
