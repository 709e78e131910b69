"""Profile interview chatbots from chat transcripts and generate design suggestions."""

__version__ = "0.1.0"
