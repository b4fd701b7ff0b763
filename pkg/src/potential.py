"""
Potential function on colored walks.

p(u, v) = c(u) - c(v) when neither endpoint has color 3, else 0; the potential of
a walk is the sum over its consecutive pairs. The laws (zero on properly colored
closed walks, forced parity on paths, at most one unit per three edges) only bind
proper colorings, but the function itself is evaluated on any coloring.
"""
import logging
from dataclasses import dataclass
from enum import IntEnum
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .errors import DomainError
from .gridCore import GridCoord, Path, thread_walk

logger = logging.getLogger(__name__)


class Color(IntEnum):
    ONE = 1
    TWO = 2
    THREE = 3

    @classmethod
    def parse(cls, value: int) -> "Color":
        """
        Raises:
            DomainError: If value is not one of 1, 2, 3
        """
        try:
            return cls(int(value))
        except (TypeError, ValueError):
            raise DomainError(f"color must be 1, 2 or 3, got {value!r}")


def parity_indicator(c: int) -> int:
    """i(v): 1 iff the node has color 3."""
    return 1 if c == Color.THREE else 0


def edge_potential(cu: int, cv: int) -> int:
    """
    Potential of one directed edge.

    Args:
        cu (int): Color of the tail
        cv (int): Color of the head

    Returns:
        int: +1 for a 2 to 1 edge, -1 for 1 to 2, 0 otherwise
    """
    if cu == Color.THREE or cv == Color.THREE:
        return 0
    return cu - cv


def sequence_potential(colors: Sequence[int]) -> int:
    """Sum of the edge potentials along a color sequence."""
    return sum(edge_potential(a, b) for a, b in zip(colors, colors[1:]))


def is_proper_sequence(colors: Sequence[int]) -> bool:
    """True if no two consecutive colors are equal."""
    return all(a != b for a, b in zip(colors, colors[1:]))


@dataclass(frozen=True)
class ColoredWalk:
    """A walk together with the color of each of its nodes, in walk order."""

    walk: Path
    colors: Tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.colors) != len(self.walk.nodes):
            raise DomainError(f"{len(self.walk.nodes)} nodes but {len(self.colors)} colors")

    @classmethod
    def from_labels(cls, walk: Path, labels: Mapping[GridCoord, int]) -> "ColoredWalk":
        missing = [p for p in walk.nodes if p not in labels]
        if missing:
            raise DomainError(f"walk node {missing[0]} has no color")
        return cls(walk, tuple(labels[p] for p in walk.nodes))

    @property
    def proper(self) -> bool:
        return is_proper_sequence(self.colors)


def walk_potential(w: ColoredWalk) -> int:
    return sequence_potential(w.colors)


@dataclass(frozen=True)
class ClosedWalkVerdict:
    """Outcome of the closed-walk law on one walk."""

    holds: bool
    potential: int
    improper: bool

    @property
    def kind(self) -> str:
        if not self.holds:
            return "violated"
        return "holds_vacuously" if self.improper else "holds"


def check_closed_walk(w: ColoredWalk) -> ClosedWalkVerdict:
    """
    Check that a properly colored closed walk has potential zero.

    Returns:
        ClosedWalkVerdict: violated iff the walk coloring is proper and the potential is nonzero

    Raises:
        DomainError: If the walk is not closed
    """
    if not w.walk.closed:
        raise DomainError("closed-walk law needs a closed walk")
    p = walk_potential(w)
    improper = not w.proper
    return ClosedWalkVerdict(holds=improper or p == 0, potential=p, improper=improper)


def parity_predict(cu: int, cv: int, length: int) -> int:
    """Forced parity of p(P) for a properly colored path of the given length between colors cu and cv."""
    if length < 0:
        raise DomainError(f"length must be non-negative, got {length}")
    return (parity_indicator(cu) + parity_indicator(cv) + length) % 2


def max_potential_bound(length: int, c_const: int) -> int:
    """Upper bound floor(len/3) + c on |p| of a properly colored walk with len edges."""
    if length < 0 or c_const < 0:
        raise DomainError("length and constant must be non-negative")
    return length // 3 + c_const


def max_potential_oracle(max_len: int) -> List[int]:
    """
    Exact max |p| over all proper colorings of paths with 0..max_len edges.

    Dynamic programme over the last color keeping the largest and smallest
    reachable potential.
    """
    hi: Dict[int, int] = {c: 0 for c in Color}
    lo: Dict[int, int] = {c: 0 for c in Color}
    best = [0]
    for _ in range(max_len):
        new_hi: Dict[int, int] = {}
        new_lo: Dict[int, int] = {}
        for c in Color:
            new_hi[c] = max(hi[a] + edge_potential(a, c) for a in Color if a != c)
            new_lo[c] = min(lo[a] + edge_potential(a, c) for a in Color if a != c)
        hi, lo = new_hi, new_lo
        best.append(max(max(hi.values()), -min(lo.values())))
    return best


def fit_ledger_constant(max_len: int = 30) -> int:
    """Smallest integer c with max|p| <= floor(len/3) + c for every len <= max_len."""
    return max(m - length // 3 for length, m in enumerate(max_potential_oracle(max_len)))


def _check_steps(f: Sequence[int], k: int) -> None:
    if k <= 0:
        raise DomainError(f"step bound must be positive, got {k}")
    for x, (a, b) in enumerate(zip(f, f[1:])):
        if abs(b - a) > k:
            raise DomainError(f"|f({x + 1}) - f({x})| = {abs(b - a)} exceeds {k}")


def ivt_witness(f: Sequence[int], k: int) -> int:
    """
    Smallest x with |f(x)| <= k.

    Raises:
        DomainError: If f is empty, a step exceeds k, f(0) < 0 or f(last) > 0
    """
    if not f:
        raise DomainError("empty sequence")
    _check_steps(f, k)
    if f[0] < 0 or f[-1] > 0:
        raise DomainError(f"boundary conditions f(0) >= 0 >= f(last) violated: {f[0]}, {f[-1]}")
    for x, value in enumerate(f):
        if abs(value) <= k:
            return x
    raise DomainError("no witness although preconditions hold")


def window_scan(f: Sequence[int], ell: int, bound: int) -> Optional[int]:
    """First x with |f(x + ell) - f(x)| <= bound, or None."""
    for x in range(len(f) - ell):
        if abs(f[x + ell] - f[x]) <= bound:
            return x
    return None


def mvt_witness(f: Sequence[int], ell: int, k: int) -> int:
    """
    Smallest x in [0, b - ell] with |f(x + ell) - f(x)| <= 2k.

    Raises:
        DomainError: If f(0) != 0, f(b) != 0, a step exceeds k, or not 0 < ell < sqrt(b)
    """
    if len(f) < 2:
        raise DomainError("sequence needs at least two values")
    _check_steps(f, k)
    b = len(f) - 1
    if f[0] != 0 or f[b] != 0:
        raise DomainError(f"boundary values must be zero, got {f[0]} and {f[b]}")
    if ell <= 0 or ell * ell >= b:
        raise DomainError(f"window length {ell} must satisfy 0 < ell < sqrt({b})")
    x = window_scan(f, ell, 2 * k)
    if x is None:
        raise DomainError("no witness although preconditions hold")
    return x


@dataclass(frozen=True)
class WalkPotentialProfile:
    """Prefix potentials f(0..B) along a diagonal, one value per column step."""

    f: Tuple[int, ...]
    step_bound: int = 2

    @property
    def span(self) -> int:
        return len(self.f) - 1


def potential_profile(diag: Path, colors: Mapping[GridCoord, int]) -> WalkPotentialProfile:
    """
    Prefix potential profile of a diagonal path.

    The diagonal is threaded into a unit-step walk; f(x) is the potential of the
    walk prefix ending at the node x columns east of the start.

    Raises:
        DomainError: If a node of the threaded walk has no color
    """
    walk, index = thread_walk(diag)
    colored = ColoredWalk.from_labels(walk, colors)
    prefix = [0]
    for a, b in zip(colored.colors, colored.colors[1:]):
        prefix.append(prefix[-1] + edge_potential(a, b))
    return WalkPotentialProfile(tuple(prefix[i] for i in index))
