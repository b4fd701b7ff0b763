"""
gridlocal package.
"""

__version__ = "0.1.0"

from .harness import Certificate, GameParams, Referee, Transcript, run_match
from .verifyTranscript import TranscriptVerifier

__all__ = ["Certificate", "GameParams", "Referee", "Transcript", "TranscriptVerifier", "run_match"]
