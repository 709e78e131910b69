"""Names, trigger directions and display labels of the question-level metrics."""

BELOW = "below"
ABOVE = "above"

# order is the canonical column order used in profiles and reports
QUESTION_METRICS = (
    "informativeness",
    "response_length",
    "engagement_duration",
    "completion_rate",
    "empathy_level",
    "repetition_rate",
    "hate_speech_rate",
    "privacy_intrusion_rate",
)

# metrics that are averaged over segments (completion rate is computed per question)
SEGMENT_METRICS = tuple(m for m in QUESTION_METRICS if m != "completion_rate")

DIRECTIONS = {
    "informativeness": BELOW,
    "response_length": BELOW,
    "engagement_duration": BELOW,
    "completion_rate": BELOW,
    "empathy_level": BELOW,
    "repetition_rate": ABOVE,
    "hate_speech_rate": ABOVE,
    "privacy_intrusion_rate": ABOVE,
}

DISPLAY_NAMES = {
    "informativeness": "Informativeness",
    "response_length": "Response Length",
    "engagement_duration": "Engagement Duration",
    "completion_rate": "Completion Rate",
    "empathy_level": "Level of Empathy",
    "repetition_rate": "Repetition Rate",
    "hate_speech_rate": "Hate Speech Rate",
    "privacy_intrusion_rate": "Privacy Intrusion Rate",
}

# the hate speech threshold is fixed: any detected hate speech triggers
PINNED_THRESHOLDS = {"hate_speech_rate": 0.0}

# per-metric display precision in reports
DECIMALS = {"engagement_duration": 1}
DEFAULT_DECIMALS = 2


def metric_key(name: str) -> str:
    """Map a display name or key ("Repetition Rate", "repetition_rate") to its key."""
    key = name.strip().lower().replace(" ", "_").replace("-", "_")
    if key in DIRECTIONS:
        return key
    for k, label in DISPLAY_NAMES.items():
        if label.lower().replace(" ", "_") == key:
            return k
    raise KeyError(name)


def fmt(metric: str, value: float) -> str:
    return f"{value:.{DECIMALS.get(metric, DEFAULT_DECIMALS)}f}"
