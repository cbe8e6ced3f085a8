"""dualpair: exact local constants for quaternionic dual pairs over Q."""

__version__ = "0.1.0"
