"""
Integer-lattice geometry for oriented grids.

Everything here is exact: slopes are Fractions built from two lattice points and
all rounding goes through math.floor/math.ceil on rationals, never floats.
"""
import logging
import math
from collections import deque
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import FrozenSet, Iterable, Iterator, List, Optional, Set, Tuple

from .errors import DomainError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class GridCoord:
    """A lattice cell; ordering is lexicographic (x, then y)."""

    x: int
    y: int

    def __add__(self, other: "GridCoord") -> "GridCoord":
        return GridCoord(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "GridCoord") -> "GridCoord":
        return GridCoord(self.x - other.x, self.y - other.y)

    def __neg__(self) -> "GridCoord":
        return GridCoord(-self.x, -self.y)

    def l1(self, other: "GridCoord") -> int:
        return abs(self.x - other.x) + abs(self.y - other.y)

    def neighbors(self) -> List["GridCoord"]:
        return [self + o.delta for o in Orientation]

    def to_list(self) -> List[int]:
        return [self.x, self.y]

    @classmethod
    def from_list(cls, xy: Iterable[int]) -> "GridCoord":
        x, y = xy
        return cls(int(x), int(y))


ORIGIN = GridCoord(0, 0)


class Orientation(Enum):
    """Cardinal direction of an edge end; east edges go (i,j)->(i+1,j), north edges (i,j)->(i,j+1)."""

    NORTH = (0, 1)
    EAST = (1, 0)
    SOUTH = (0, -1)
    WEST = (-1, 0)

    @property
    def delta(self) -> GridCoord:
        return GridCoord(*self.value)

    @property
    def opposite(self) -> "Orientation":
        dx, dy = self.value
        return Orientation((-dx, -dy))

    @classmethod
    def between(cls, u: GridCoord, v: GridCoord) -> "Orientation":
        """
        Direction of the edge from u to v.

        Raises:
            DomainError: If u and v are not grid neighbours
        """
        d = v - u
        try:
            return cls((d.x, d.y))
        except ValueError:
            raise DomainError(f"{u} and {v} are not adjacent")


@dataclass(frozen=True)
class Symmetry:
    """
    One of the 8 lattice symmetries fixing the origin.

    apply() first swaps the axes (if swap) and then multiplies x by sx and y by sy.
    """

    swap: bool = False
    sx: int = 1
    sy: int = 1

    def apply(self, p: GridCoord) -> GridCoord:
        x, y = (p.y, p.x) if self.swap else (p.x, p.y)
        return GridCoord(self.sx * x, self.sy * y)

    def invert(self, p: GridCoord) -> GridCoord:
        x, y = self.sx * p.x, self.sy * p.y
        return GridCoord(y, x) if self.swap else GridCoord(x, y)

    def inverse(self) -> "Symmetry":
        if not self.swap:
            return self
        # (a, b) -> (sx*b, sy*a); the inverse maps (c, d) -> (d/sy, c/sx)
        return Symmetry(True, self.sy, self.sx)

    def compose(self, inner: "Symmetry") -> "Symmetry":
        """Symmetry equal to applying inner first, then self."""
        for candidate in SYMMETRIES:
            if all(candidate.apply(p) == self.apply(inner.apply(p)) for p in (GridCoord(1, 0), GridCoord(0, 1))):
                return candidate
        raise DomainError("symmetries are not closed under composition")

    def orientation(self, o: Orientation) -> Orientation:
        d = self.apply(o.delta)
        return Orientation((d.x, d.y))

    def to_list(self) -> List[int]:
        return [int(self.swap), self.sx, self.sy]


IDENTITY = Symmetry()
SYMMETRIES: Tuple[Symmetry, ...] = tuple(
    Symmetry(swap, sx, sy) for swap in (False, True) for sx in (1, -1) for sy in (1, -1)
)
TRANSPOSE = Symmetry(True, 1, 1)


def canonicalize(v: GridCoord) -> Tuple[Symmetry, GridCoord]:
    """
    Find the symmetry taking a canonical vector (dx > 0, 0 <= dy <= dx) to v.

    Args:
        v (GridCoord): Nonzero vector

    Returns:
        Tuple[Symmetry, GridCoord]: (sigma, c) with sigma.apply(c) == v and c canonical

    Raises:
        DomainError: If v is the zero vector
    """
    if v == ORIGIN:
        raise DomainError("cannot canonicalize the zero vector")
    for sym in SYMMETRIES:
        c = sym.invert(v)
        if c.x > 0 and 0 <= c.y <= c.x:
            return sym, c
    raise DomainError(f"no canonical form for {v}")


@dataclass(frozen=True)
class Box:
    """Closed axis-aligned box of lattice cells."""

    x0: int
    y0: int
    x1: int
    y1: int

    def contains(self, p: GridCoord) -> bool:
        return self.x0 <= p.x <= self.x1 and self.y0 <= p.y <= self.y1

    def expand(self, margin: int) -> "Box":
        return Box(self.x0 - margin, self.y0 - margin, self.x1 + margin, self.y1 + margin)

    def translate(self, d: GridCoord) -> "Box":
        return Box(self.x0 + d.x, self.y0 + d.y, self.x1 + d.x, self.y1 + d.y)

    def hull(self, other: "Box") -> "Box":
        return Box(min(self.x0, other.x0), min(self.y0, other.y0), max(self.x1, other.x1), max(self.y1, other.y1))

    @property
    def width(self) -> int:
        return self.x1 - self.x0 + 1

    @property
    def height(self) -> int:
        return self.y1 - self.y0 + 1

    def to_list(self) -> List[int]:
        return [self.x0, self.y0, self.x1, self.y1]

    @classmethod
    def around(cls, points: Iterable[GridCoord]) -> "Box":
        pts = list(points)
        if not pts:
            raise DomainError("cannot build a box around no points")
        return cls(min(p.x for p in pts), min(p.y for p in pts), max(p.x for p in pts), max(p.y for p in pts))


@dataclass
class Fragment:
    """
    A floating piece of the grid with its own private frame.

    The reservation is the bounding box of the intended extent widened by T on all
    sides. committed_offset is the translation of this frame into the parent's frame
    and is set at most once.
    """

    id: int
    extent: FrozenSet[GridCoord]
    reservation: Box
    committed_offset: Optional[GridCoord] = None
    parent: Optional[int] = None
    absolute_origin: Optional[GridCoord] = None

    @classmethod
    def create(cls, fragment_id: int, extent: Iterable[GridCoord], T: int,
               absolute_origin: Optional[GridCoord] = None) -> "Fragment":
        cells = frozenset(extent)
        return cls(fragment_id, cells, Box.around(cells).expand(T), absolute_origin=absolute_origin)

    @property
    def committed(self) -> bool:
        return self.committed_offset is not None

    def commit(self, parent: int, offset: GridCoord) -> None:
        """
        Fix this fragment's placement inside the parent's frame.

        Raises:
            DomainError: If the fragment was already committed
        """
        if self.committed_offset is not None:
            raise DomainError(f"fragment {self.id} is already committed at {self.committed_offset}")
        self.parent = parent
        self.committed_offset = offset


def ball_cells(center: GridCoord, T: int) -> Iterator[GridCoord]:
    """Cells at L1 distance at most T from center, in lexicographic order."""
    if T < 0:
        raise DomainError(f"radius must be non-negative, got {T}")
    for dx in range(-T, T + 1):
        rest = T - abs(dx)
        for dy in range(-rest, rest + 1):
            yield GridCoord(center.x + dx, center.y + dy)


def ball(fragment: Fragment, center: GridCoord, T: int, grid_side: Optional[int] = None) -> Set[GridCoord]:
    """
    Radius-T ball around center inside a fragment.

    Args:
        fragment (Fragment): Host fragment; cells are in its private frame
        center (GridCoord): Ball center, must lie in the fragment's reservation
        T (int): Radius
        grid_side (Optional[int]): Host grid side; used for clipping only when the
            fragment's absolute origin is known (host cells are 1..grid_side)

    Returns:
        Set[GridCoord]: Cells of the ball clipped to the reservation and the host grid

    Raises:
        DomainError: If center lies outside the fragment
    """
    if not fragment.reservation.contains(center):
        raise DomainError(f"{center} is outside fragment {fragment.id}")
    cells = {c for c in ball_cells(center, T) if fragment.reservation.contains(c)}
    if grid_side is not None and fragment.absolute_origin is not None:
        o = fragment.absolute_origin
        cells = {c for c in cells if 1 <= c.x + o.x <= grid_side and 1 <= c.y + o.y <= grid_side}
    return cells


@dataclass(frozen=True)
class Path:
    """
    Ordered nodes of a walk.

    max_step bounds the grid distance of consecutive nodes: 1 for genuine walks,
    2 for diagonal point sets.
    """

    nodes: Tuple[GridCoord, ...]
    closed: bool = False
    max_step: int = 1

    def __post_init__(self) -> None:
        if not self.nodes:
            raise DomainError("a path needs at least one node")
        for a, b in zip(self.nodes, self.nodes[1:]):
            step = a.l1(b)
            if step < 1 or step > self.max_step:
                raise DomainError(f"consecutive nodes {a} and {b} are at distance {step}")
        if self.closed and self.nodes[0] != self.nodes[-1]:
            raise DomainError("a closed walk must end where it starts")

    def __len__(self) -> int:
        return len(self.nodes) - 1

    @property
    def start(self) -> GridCoord:
        return self.nodes[0]

    @property
    def end(self) -> GridCoord:
        return self.nodes[-1]

    def concat(self, other: "Path", closed: bool = False) -> "Path":
        if self.end != other.start:
            raise DomainError(f"cannot join a path ending at {self.end} to one starting at {other.start}")
        return Path(self.nodes + other.nodes[1:], closed=closed, max_step=max(self.max_step, other.max_step))

    def reversed(self) -> "Path":
        return Path(tuple(reversed(self.nodes)), self.closed, self.max_step)


def straight_path(start: GridCoord, end: GridCoord) -> Path:
    """Unit-step path along a single row or column."""
    if start.x != end.x and start.y != end.y:
        raise DomainError(f"{start} and {end} share neither a row nor a column")
    n = start.l1(end)
    if n == 0:
        return Path((start,))
    d = GridCoord((end.x - start.x) // n, (end.y - start.y) // n)
    return Path(tuple(GridCoord(start.x + d.x * i, start.y + d.y * i) for i in range(n + 1)))


def l_shaped_path(start: GridCoord, end: GridCoord) -> Path:
    """Shortest path going vertically first, then horizontally."""
    corner = GridCoord(start.x, end.y)
    return straight_path(start, corner).concat(straight_path(corner, end))


@dataclass(frozen=True)
class LPath:
    """A row path joined at its last node to a column path."""

    row_part: Path
    col_part: Path

    def __post_init__(self) -> None:
        if len({p.y for p in self.row_part.nodes}) != 1:
            raise DomainError("row part of an L-path must stay in one row")
        if len({p.x for p in self.col_part.nodes}) != 1:
            raise DomainError("column part of an L-path must stay in one column")
        if self.row_part.end != self.col_part.start:
            raise DomainError("row part must end at the corner where the column part starts")

    @property
    def corner(self) -> GridCoord:
        return self.row_part.end

    @property
    def walk(self) -> Path:
        return self.row_part.concat(self.col_part)


@dataclass(frozen=True)
class SlopeLine:
    """A line through a lattice node with exact rational slope."""

    anchor: GridCoord
    slope: Fraction

    @property
    def theta(self) -> float:
        # display only; geometry never uses this value
        return math.atan(self.slope) % (2 * math.pi)

    def ordinate(self, i: int) -> Fraction:
        return self.anchor.y + self.slope * i

    @classmethod
    def through(cls, u: GridCoord, v: GridCoord) -> "SlopeLine":
        if u.x == v.x:
            raise DomainError("vertical lines have no finite slope")
        return cls(u, Fraction(v.y - u.y, v.x - u.x))


def parse_slope(text: str) -> Fraction:
    """
    Parse a slope given as an integer ratio "dy/dx".

    Raises:
        DomainError: If the text is not a ratio of integers with nonzero dx
    """
    try:
        dy, dx = (int(part) for part in text.split("/"))
    except ValueError:
        raise DomainError(f"slope must be written dy/dx, got {text!r}")
    if dx == 0:
        raise DomainError("slope denominator must be nonzero")
    return Fraction(dy, dx)


def diagonal_path(u: GridCoord, v: GridCoord) -> Path:
    """
    Lattice staircase y = y0 + floor(m (x - x0)) between u and v.

    Args:
        u (GridCoord): West endpoint
        v (GridCoord): East endpoint, |slope| <= 1

    Returns:
        Path: x1 - x0 + 1 nodes ordered by x; consecutive nodes are at grid distance <= 2

    Raises:
        DomainError: If u.x >= v.x or the slope is steeper than 1
    """
    if u.x >= v.x:
        raise DomainError(f"diagonal path needs u.x < v.x, got {u} and {v}")
    m = Fraction(v.y - u.y, v.x - u.x)
    if abs(m) > 1:
        raise DomainError(f"diagonal path slope {m} is steeper than 1")
    nodes = tuple(GridCoord(x, u.y + math.floor(m * (x - u.x))) for x in range(u.x, v.x + 1))
    return Path(nodes, max_step=2)


def thread_walk(points: Path) -> Tuple[Path, List[int]]:
    """
    Unit-step walk through a diagonal point set.

    A diagonal step (1, +-1) is routed through the east neighbour first.

    Returns:
        Tuple[Path, List[int]]: The walk and, for every input point, its index in the walk
    """
    nodes = [points.nodes[0]]
    index = [0]
    for a, b in zip(points.nodes, points.nodes[1:]):
        if a.x != b.x and a.y != b.y:
            nodes.append(GridCoord(b.x, a.y))
        nodes.append(b)
        index.append(len(nodes) - 1)
    return Path(tuple(nodes)), index


def line_rounding(anchor: GridCoord, slope: Fraction, i: int) -> Tuple[Fraction, GridCoord, GridCoord]:
    """
    Round the line through anchor at horizontal offset i to the two nodes around it.

    Args:
        anchor (GridCoord): Node the line passes through
        slope (Fraction): Slope in [0, 1]
        i (int): Non-negative horizontal offset

    Returns:
        Tuple[Fraction, GridCoord, GridCoord]: (d, D_minus, D_plus) with d = i * slope,
        D_minus on or below the line and D_plus directly above it
    """
    if not 0 <= slope <= 1:
        raise DomainError(f"slope {slope} must be canonicalized into [0, 1]")
    if i < 0:
        raise DomainError(f"offset must be non-negative, got {i}")
    d = slope * i
    low = math.floor(d)
    d_minus = GridCoord(anchor.x + i, anchor.y + low)
    return d, d_minus, d_minus + GridCoord(0, 1)


def slope_width(level: int, T: int, copies: int = 2) -> int:
    """
    Closed form of w_{j+1} = w_j + (copies - 1)(w_j + 2T + 2), w_0 = 0.

    With two copies per level this is 2 (2^level - 1)(T + 1).
    """
    return (copies ** level - 1) * (2 * T + 2)


def slope_recursion_widths(level: int, T: int, copies: int = 2) -> List[int]:
    """Widths w_0..w_level by iterating the recursion."""
    if level < 0 or T < 0:
        raise DomainError("level and T must be non-negative")
    if copies < 2:
        raise DomainError(f"a level needs at least two copies, got {copies}")
    widths = [0]
    for _ in range(level):
        widths.append(widths[-1] + (copies - 1) * (widths[-1] + 2 * T + 2))
    return widths


@dataclass(frozen=True)
class Parallelogram:
    """
    Enclosure with two vertical sides of length level + 1 and two sides of the given slope.

    The lower side passes through (origin_x, base); base may be fractional, the
    anchor is the lexicographically smallest lattice node inside.
    """

    level: int
    slope: Fraction
    origin_x: int
    base: Fraction
    width: int

    @classmethod
    def from_anchor(cls, level: int, slope: Fraction, anchor: GridCoord, width: int) -> "Parallelogram":
        return cls(level, Fraction(slope), anchor.x, Fraction(anchor.y), width)

    @property
    def height(self) -> int:
        return self.level + 1

    @property
    def anchor(self) -> GridCoord:
        return GridCoord(self.origin_x, math.ceil(self.base))

    @property
    def theta(self) -> float:
        return math.atan(self.slope)

    def floor_at(self, x: int) -> Fraction:
        return self.base + self.slope * (x - self.origin_x)

    def contains(self, p: GridCoord) -> bool:
        if not self.origin_x <= p.x <= self.origin_x + self.width:
            return False
        low = self.floor_at(p.x)
        return low <= p.y <= low + self.height

    def translate(self, d: GridCoord) -> "Parallelogram":
        return Parallelogram(self.level, self.slope, self.origin_x + d.x, self.base + d.y, self.width)

    def placements(self, T: int) -> Tuple[GridCoord, GridCoord]:
        """Translations putting a copy's anchor on D_minus and D_plus of this anchor at w + 2T + 2."""
        a = self.anchor
        _, d_minus, d_plus = line_rounding(a, self.slope, self.width + 2 * T + 2)
        return d_minus - a, d_plus - a

    def next_level(self, T: int) -> "Parallelogram":
        """The unique enclosure of this parallelogram and both placement choices of a copy."""
        i = self.width + 2 * T + 2
        shift = math.floor(self.slope * i) - self.slope * i
        return Parallelogram(self.level + 1, self.slope, self.origin_x, self.base + shift, self.width + i)

    def chain(self, T: int, copies: int) -> Tuple[List[GridCoord], "Parallelogram"]:
        """
        Line copies up along the slope, one every w + 2T + 2 columns.

        Copy j has its anchor on D_minus of the first anchor at offset j (w + 2T + 2),
        so all lower sides lie within one unit of each other and the copies share a
        single parallelogram one level up. Two copies give next_level.

        Returns:
            Tuple[List[GridCoord], Parallelogram]: Translation of every copy (the first is
            zero) and the common enclosure
        """
        if copies < 2:
            raise DomainError(f"a chain needs at least two copies, got {copies}")
        a = self.anchor
        step = self.width + 2 * T + 2
        offsets = [line_rounding(a, self.slope, j * step)[1] - a for j in range(copies)]
        base = min(self.base + t.y - self.slope * t.x for t in offsets)
        return offsets, Parallelogram(self.level + 1, self.slope, self.origin_x, base, self.width + (copies - 1) * step)

    def to_dict(self) -> dict:
        return {
            "level": self.level,
            "slope": [self.slope.numerator, self.slope.denominator],
            "anchor": self.anchor.to_list(),
            "width": self.width,
            "height": self.height,
        }


def parallelogram_contains(par: Parallelogram, p: GridCoord) -> bool:
    return par.contains(p)


def lattice_points(par: Parallelogram) -> List[GridCoord]:
    """All lattice nodes inside the parallelogram, column by column, bottom to top."""
    points = []
    for x in range(par.origin_x, par.origin_x + par.width + 1):
        low = par.floor_at(x)
        for y in range(math.ceil(low), math.floor(low + par.height) + 1):
            points.append(GridCoord(x, y))
    return points


def enclosing_parallelogram(points: Iterable[GridCoord], slope: Fraction) -> Parallelogram:
    """Smallest-level parallelogram of the given slope containing all points."""
    pts = list(points)
    if not pts:
        raise DomainError("no points to enclose")
    x0 = min(p.x for p in pts)
    offsets = [p.y - slope * (p.x - x0) for p in pts]
    low, high = min(offsets), max(offsets)
    level = max(0, math.ceil(high - low) - 1)
    return Parallelogram(level, Fraction(slope), x0, low, max(p.x for p in pts) - x0)


def enclosed_cells(walk: Path, limit: Optional[int] = None) -> Optional[Set[GridCoord]]:
    """
    Cells enclosed by a closed walk, the walk's own nodes excluded.

    A cell is enclosed when no 4-connected route avoiding the walk leads from it
    to the border of the walk's bounding box widened by one.

    Args:
        walk (Path): Closed walk
        limit (Optional[int]): Give up (return None) when the bounding box has more cells

    Returns:
        Optional[Set[GridCoord]]: The enclosed cells, or None when over the limit
    """
    if not walk.closed:
        raise DomainError("only closed walks enclose cells")
    box = Box.around(walk.nodes).expand(1)
    if limit is not None and box.width * box.height > limit:
        return None
    blocked = set(walk.nodes)
    outside = {GridCoord(box.x0, box.y0)}
    stack = [GridCoord(box.x0, box.y0)]
    while stack:
        c = stack.pop()
        for n in c.neighbors():
            if box.contains(n) and n not in blocked and n not in outside:
                outside.add(n)
                stack.append(n)
    return {
        GridCoord(x, y)
        for x in range(box.x0, box.x1 + 1)
        for y in range(box.y0, box.y1 + 1)
        if GridCoord(x, y) not in outside and GridCoord(x, y) not in blocked
    }


def inner_band(walk: Path, limit: int) -> List[GridCoord]:
    """
    Up to limit cells on the inner side of a closed walk, nearest to the walk first.

    The sign of the walk's shoelace area tells the inner side: left of every step
    for counterclockwise walks, right for clockwise ones. The search never steps
    onto the walk. Stretches where the walk retraces itself have no inner side,
    and the search spills out there.

    Args:
        walk (Path): Closed walk
        limit (int): Most cells to return

    Returns:
        List[GridCoord]: Cells in breadth-first order from the walk
    """
    if not walk.closed:
        raise DomainError("only closed walks have an inner side")
    nodes = walk.nodes
    area2 = sum(a.x * b.y - b.x * a.y for a, b in zip(nodes, nodes[1:]))
    turn = 1 if area2 >= 0 else -1
    blocked = set(nodes)
    seen: Set[GridCoord] = set()
    queue: deque = deque()
    for a, b in zip(nodes, nodes[1:]):
        normal = GridCoord(-(b.y - a.y) * turn, (b.x - a.x) * turn)
        for c in (a + normal, b + normal):
            if c not in blocked and c not in seen:
                seen.add(c)
                queue.append(c)
    band: List[GridCoord] = []
    while queue and len(band) < limit:
        c = queue.popleft()
        band.append(c)
        for n in c.neighbors():
            if n not in blocked and n not in seen:
                seen.add(n)
                queue.append(n)
    return band
