"""
Reference online-LOCAL coloring algorithms.

All of them look only at the View the referee hands out. The oracle cheater is
the exception: it reads group-frame coordinates and only works when the
GRIDLOCAL_BACKDOOR flag is set.
"""
import logging
import os
from typing import Dict, Optional, Type

from dotenv import load_dotenv

from .errors import DomainError, ProtocolError
from .harness import RandomBits, View
from .potential import Color

logger = logging.getLogger(__name__)

BACKDOOR_ENV = "GRIDLOCAL_BACKDOOR"


def greedy_first_fit(view: View, pending: int) -> int:
    """Smallest color no labeled visible neighbour uses; 1 when all three are taken."""
    used = set(view.neighbor_labels(pending).values())
    for c in Color:
        if c not in used:
            return int(c)
    return int(Color.ONE)


def component_parity(view: View, pending: int) -> int:
    """
    Color by the parity of the node in its component frame.

    Even cells get 1, odd cells 2. When a neighbour already holds that color the
    node takes 3, or the other of 1/2 if 3 is taken as well.
    """
    _, xy = view.locate(pending)
    preferred = Color.ONE if (xy.x + xy.y) % 2 == 0 else Color.TWO
    used = set(view.neighbor_labels(pending).values())
    if preferred not in used:
        return int(preferred)
    if Color.THREE not in used:
        return int(Color.THREE)
    other = Color.TWO if preferred == Color.ONE else Color.ONE
    return int(other) if other not in used else int(Color.THREE)


def seeded_hash(view: View, pending: int, randomness: Optional[RandomBits]) -> int:
    """
    Uniform pick among the colors free of conflicts, uniform over all three if none is free.

    Raises:
        DomainError: If no bit stream is given
    """
    if randomness is None:
        raise DomainError("seeded_hash needs a bit stream")
    used = set(view.neighbor_labels(pending).values())
    free = [int(c) for c in Color if c not in used] or [int(c) for c in Color]
    return randomness.choice(free)


class GreedyFirstFit:
    name = "greedy"
    randomized = False

    def label(self, view: View, pending: int, randomness: Optional[RandomBits] = None) -> int:
        return greedy_first_fit(view, pending)


class ComponentParity:
    name = "parity"
    randomized = False

    def label(self, view: View, pending: int, randomness: Optional[RandomBits] = None) -> int:
        return component_parity(view, pending)


class SeededHash:
    name = "hash"
    randomized = True

    def label(self, view: View, pending: int, randomness: Optional[RandomBits] = None) -> int:
        return seeded_hash(view, pending, randomness)


class OracleCheater:
    """Parity 2-coloring of absolute coordinates; proper on every bipartite grid."""

    name = "oracle"
    randomized = False

    def label(self, view: View, pending: int, randomness: Optional[RandomBits] = None) -> int:
        xy = view.absolute(pending)
        return int(Color.ONE) if (xy.x + xy.y) % 2 == 0 else int(Color.TWO)


ALGORITHMS: Dict[str, Type] = {
    "greedy": GreedyFirstFit,
    "parity": ComponentParity,
    "hash": SeededHash,
}


def backdoor_enabled() -> bool:
    """True when GRIDLOCAL_BACKDOOR=1 is set in the environment or the .env file."""
    load_dotenv()
    return os.getenv(BACKDOOR_ENV, "0") == "1"


def get_algorithm(name: str):
    """
    Instantiate a shipped algorithm by name.

    Raises:
        ProtocolError: For "oracle" while the backdoor is disabled
        DomainError: If the name is unknown
    """
    if name == OracleCheater.name:
        if not backdoor_enabled():
            raise ProtocolError(f"the oracle cheater needs {BACKDOOR_ENV}=1")
        logger.warning("oracle cheater selected; absolute coordinates will be exposed")
        return OracleCheater()
    try:
        return ALGORITHMS[name]()
    except KeyError:
        raise DomainError(f"unknown algorithm {name!r}, expected one of {', '.join(sorted(ALGORITHMS))}")
