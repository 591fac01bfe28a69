import numpy as np
import pytest

from helpers import bundle


@pytest.fixture
def hand_bundles():
    """3-doc/2-topic corpus 1 against a doc-less 2-topic corpus 2.

    Corpus-2 topic embeddings sit at 45 and -45 degrees, so document (1, 0) is
    an exact cosine tie between them.
    """
    b1 = bundle(
        "hand1",
        doc_vecs=[(2.0, 1.0), (1.0, 3.0), (1.0, 0.0)],
        assignments=[0, 1, 0],
        topic_vecs=[(1.0, 0.0), (0.0, 1.0)],
    )
    b2 = bundle(
        "hand2",
        doc_vecs=np.zeros((0, 2)),
        assignments=[],
        topic_vecs=[(1.0, 1.0), (1.0, -1.0)],
        topic_ids=[0, 1],
    )
    return b1, b2
