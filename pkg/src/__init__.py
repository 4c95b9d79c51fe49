"""Four-dimensional double singular oscillator toolkit."""

__version__ = "0.1.0"
