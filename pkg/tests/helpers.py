"""Small constructors shared by the tests."""
import numpy as np

from chatprofiler.resources import EmbeddingTable, Resources
from chatprofiler.transcript import Message, Role, Segment

# filled by test_acceptance.py, printed in the terminal summary
ACCEPTANCE_RESULTS: dict[str, tuple[bool, str]] = {}


def bot(text, t=0.0, qid=None):
    return Message(Role.BOT, text, float(t), qid)


def user(text, t=0.0, qid=None):
    return Message(Role.USER, text, float(t), qid)


def seg(*messages, question_id=1, advanced=True, session_id="s"):
    return Segment(session_id, question_id, tuple(messages), advanced)


def make_resources(base: Resources, **kw) -> Resources:
    fields = dict(
        frequency=base.frequency,
        empathy=base.empathy,
        sentiment=base.sentiment,
        offensive=base.offensive,
        pii=base.pii,
        embeddings=base.embeddings,
    )
    fields.update(kw)
    return Resources(**fields)


def toy_embeddings(vectors):
    words = list(vectors)
    matrix = np.array([vectors[w] for w in words], dtype=float)
    return EmbeddingTable(matrix.shape[1], {w: i for i, w in enumerate(words)}, matrix)
