import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from chatprofiler.resources import FrequencyTable, default_resources  # noqa: E402
from chatprofiler.transcript import InterviewConfig  # noqa: E402
from helpers import ACCEPTANCE_RESULTS  # noqa: E402

DEMO = Path(__file__).resolve().parents[1] / "src" / "chatprofiler" / "data" / "demo"

COVID_QUESTIONS = [
    "How are you feeling today?",
    "Where are you located?",
    "What do you do outside work?",
    "What are the challenges you currently face?",
    "What do you think you can do to help w/ this pandemic?",
]



def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS, key=lambda k: int(k[2:])):
        ok, detail = ACCEPTANCE_RESULTS[key]
        terminalreporter.write_line(f"{key} {'PASS' if ok else 'FAIL'}  {detail}")


@pytest.fixture(scope="session")
def resources():
    return default_resources()


@pytest.fixture
def tiny_freq():
    return FrequencyTable.from_counts({"the": 1000, "quantum": 1})


@pytest.fixture
def covid_config():
    return InterviewConfig.from_dict(
        {
            "questions": COVID_QUESTIONS
            + [
                "How satisfied are you with the interview experience? Please rate it on a scale of 1 to 5",
                "How much do you trust this chatbot? Please rate it on a scale of 1 to 5",
                "Could you tell me why you gave those ratings?",
            ],
            "rating_question_ids": {"satisfaction": 6, "trust": 7, "feedback": [8]},
        }
    )
