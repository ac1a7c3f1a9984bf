"""Real-time-strategy evaluation and search laboratory with online weight adaptation."""

__version__ = "0.1.0"
