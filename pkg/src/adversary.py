"""
Lower-bound strategies against online-LOCAL 3-coloring of oriented grids.

The builders here only ever talk to the referee: they reveal nodes, read back the
labels the algorithm chose, and commit placements of floating fragments. Every
potential an artifact claims is recomputed from the labels before it is used.
"""
import hashlib
import logging
from collections import Counter, deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .errors import BoostStalled, BudgetExhausted, ConstructionError, DomainError
from .gridCore import (
    IDENTITY,
    ORIGIN,
    SYMMETRIES,
    TRANSPOSE,
    canonicalize,
    GridCoord,
    LPath,
    Parallelogram,
    Path,
    Symmetry,
    diagonal_path,
    enclosed_cells,
    inner_band,
    lattice_points,
    enclosing_parallelogram,
    slope_width,
    straight_path,
    thread_walk,
)
from .harness import (
    AlgorithmInterface,
    Certificate,
    CertificateKind,
    GameParams,
    RandomBits,
    Referee,
    Transcript,
    run_match,
)
from .potential import (
    ColoredWalk,
    edge_potential,
    fit_ledger_constant,
    mvt_witness,
    parity_indicator,
    potential_profile,
    sequence_potential,
    walk_potential,
    window_scan,
)

logger = logging.getLogger(__name__)

GUARANTEED = "guaranteed"
EMPIRICAL = "empirical-only"
ROW_ATTEMPTS = 3


@dataclass(frozen=True)
class AdversaryParams:
    """
    Knobs of the lower-bound strategies.

    kappa is the potential the slope artifact must reach, L0 bounds the base rows
    the row and column arms are compared against, L1 is the row arm length.
    c_ledger of None means the constant is taken from the exhaustive oracle.
    """

    T: int
    n_budget: int
    kappa: int
    L0: int
    L1: int
    c_ledger: Optional[int] = None
    trials: int = 1
    grid_side: int = 65536
    column_cap_factor: int = 4
    level_copies: int = 2

    @property
    def gap(self) -> int:
        return 2 * self.T + 2

    @property
    def ledger_constant(self) -> int:
        return fit_ledger_constant() if self.c_ledger is None else self.c_ledger

    def game(self, backdoor: bool = False) -> GameParams:
        return GameParams(self.T, self.n_budget, self.grid_side, backdoor)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "T": self.T,
            "n_budget": self.n_budget,
            "kappa": self.kappa,
            "L0": self.L0,
            "L1": self.L1,
            "c_ledger": self.ledger_constant,
            "trials": self.trials,
            "grid_side": self.grid_side,
            "column_cap_factor": self.column_cap_factor,
            "level_copies": self.level_copies,
        }


@dataclass(frozen=True)
class LedgerCheck:
    """One inequality of the parameter ledger with both sides evaluated."""

    name: str
    lhs: Fraction
    relation: str
    rhs: Fraction
    holds: bool

    def describe(self) -> str:
        mark = "ok" if self.holds else "FAILS"
        return f"{self.name}: {self.lhs} {self.relation} {self.rhs} [{mark}]"


@dataclass(frozen=True)
class ParamsReport:
    checks: Tuple[LedgerCheck, ...]
    regime: str
    feasible: bool
    valid: bool

    def check(self, name: str) -> LedgerCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def lines(self) -> List[str]:
        lines = [c.describe() for c in self.checks]
        lines.append(f"regime: {self.regime}")
        lines.append(f"feasible at this budget: {'yes' if self.feasible else 'no'}")
        return lines


def log_row_max_length(k: int, T: int) -> int:
    """Longest row a level-k logarithmic boost can produce (both gaps 2T+3)."""
    length = 1
    for _ in range(k):
        length = 2 * length + 2 * T + 2
    return length


def base_level(L0: int, T: int) -> int:
    """Largest boosting level whose row surely fits into L0 nodes."""
    k = 0
    while log_row_max_length(k + 1, T) <= L0:
        k += 1
    return k


def slope_reveal_estimate(kappa: int, T: int, copies: int = 2) -> int:
    """Nodes revealed by a slope boost up to level kappa with the given copies per level."""
    total = copies ** kappa
    for j in range(1, kappa + 1):
        total += copies ** (kappa - j) * (slope_width(j, T, copies) + 1) * (j + 2)
    return total


def strike_margin(kappa: int, T: int, c_const: int) -> Fraction:
    """kappa minus the window bound minus two connector bounds of length 12T+7."""
    return kappa - 2 - 2 * (Fraction(12 * T + 7, 3) + c_const)


def estimate_visible(p: AdversaryParams) -> int:
    """Rough count of visible cells one full deterministic run charges."""
    k0 = base_level(p.L0, p.T)
    nodes = 2 * log_row_max_length(k0, p.T) + 2 * p.L1 + 2 * p.L1
    nodes += slope_reveal_estimate(p.kappa, p.T, p.level_copies) + 2 * (p.kappa + 4 * p.T + 8)
    return nodes * (2 * p.T + 1)


def validate_params(p: AdversaryParams) -> ParamsReport:
    """
    Evaluate the parameter ledger.

    Never raises; a report with valid=False marks parameters no strategy accepts.
    """
    checks = []
    smallest = min(p.T, p.n_budget, p.kappa, p.L0, p.L1, p.trials)
    checks.append(LedgerCheck("positivity", Fraction(smallest), ">", Fraction(0), smallest > 0))
    valid = smallest > 0
    if not valid:
        return ParamsReport(tuple(checks), EMPIRICAL, False, False)

    paired = p.level_copies >= 2
    checks.append(LedgerCheck("copies per level", Fraction(p.level_copies), ">=", Fraction(2), paired))
    if not paired:
        return ParamsReport(tuple(checks), EMPIRICAL, False, False)

    fits = p.L0 >= log_row_max_length(1, p.T)
    checks.append(LedgerCheck("base row fits", Fraction(p.L0), ">=", Fraction(log_row_max_length(1, p.T)), fits))
    valid = valid and fits

    c_const = p.ledger_constant
    margin = strike_margin(p.kappa, p.T, c_const)
    checks.append(LedgerCheck("strike margin", margin, ">", Fraction(0), margin > 0))

    width = slope_width(p.kappa, p.T, p.level_copies)
    long_enough = p.L1 > width * width
    checks.append(LedgerCheck("row arm vs window", Fraction(p.L1), ">", Fraction(width * width), long_enough))

    estimate = estimate_visible(p)
    affordable = estimate <= p.n_budget
    checks.append(LedgerCheck("budget", Fraction(estimate), "<=", Fraction(p.n_budget), affordable))

    k0 = base_level(p.L0, p.T)
    armed = k0 >= 4 * p.T + 5
    checks.append(LedgerCheck("row band excludes zero", Fraction(k0), ">=", Fraction(4 * p.T + 5), armed))

    regime = GUARANTEED if margin > 0 else EMPIRICAL
    return ParamsReport(tuple(checks), regime, long_enough and affordable, valid)


def require_valid(p: AdversaryParams) -> ParamsReport:
    """
    Raises:
        DomainError: If the ledger marks the parameters invalid
    """
    report = validate_params(p)
    if not report.valid:
        failed = [c.describe() for c in report.checks if not c.holds]
        raise DomainError(f"invalid adversary parameters: {failed[0]}")
    if report.regime == EMPIRICAL:
        logger.warning(f"strike margin {report.check('strike margin').lhs} is not positive; empirical regime")
    return report


class Chooser:
    """
    Source of the strategy's choices.

    The adaptive chooser evaluates the decision the construction computed from the
    labels seen so far and logs it.
    """

    adaptive = True

    def __init__(self) -> None:
        self.log: List[Tuple[str, Any]] = []

    def choose(self, kind: str, decide: Callable[[], Any], options: Sequence[Any]) -> Any:
        value = decide()
        self.log.append((kind, value))
        return value

    def note(self, kind: str, value: Any) -> None:
        self.log.append((kind, value))


class ObliviousPlan(Chooser):
    """
    All choices fixed from the adversary's own seed, never from labels.

    forced values (per kind, in order) take precedence over drawn ones; this is how
    an adaptive run's choices are replayed non-adaptively.
    """

    adaptive = False

    def __init__(self, seed: int, forced: Optional[Dict[str, List[Any]]] = None):
        super().__init__()
        self.seed = seed
        self._bits = RandomBits(seed, -1)
        self.forced = bool(forced)
        self._forced = {kind: list(values) for kind, values in (forced or {}).items()}

    def choose(self, kind: str, decide: Callable[[], Any], options: Sequence[Any]) -> Any:
        queue = self._forced.get(kind)
        if queue:
            value = queue.pop(0)
        else:
            value = options[self._bits.randbelow(len(options))]
        self.log.append((kind, value))
        return value

    @classmethod
    def from_log(cls, seed: int, log: Iterable[Tuple[str, Any]]) -> "ObliviousPlan":
        forced: Dict[str, List[Any]] = {}
        for kind, value in log:
            forced.setdefault(kind, []).append(value)
        return cls(seed, forced)


def derive_seed(master: int, trial: int, purpose: str) -> int:
    digest = hashlib.sha256(f"{master}:{trial}:{purpose}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


@dataclass(frozen=True)
class RowArtifact:
    """
    A labeled straight walk and its boosted node pair.

    Coordinates are builder coordinates: node i of the row sits at sym.apply((i, 0))
    in the fragment's frame. u and v are builder indices with u < v.
    """

    fragment: int
    sym: Symmetry
    length: int
    u: int
    v: int
    potential: int

    @property
    def sign(self) -> int:
        return (self.potential > 0) - (self.potential < 0)

    @property
    def span(self) -> int:
        return self.v - self.u

    def node(self, i: int) -> GridCoord:
        return self.sym.apply(GridCoord(i, 0))

    def walk(self, start: Optional[int] = None, end: Optional[int] = None) -> Path:
        """Fragment-frame path from builder index start to end (defaults: the boosted pair)."""
        a = self.u if start is None else start
        b = self.v if end is None else end
        return Path(tuple(self.node(i) for i in range(a, b + 1)))

    def to_dict(self) -> Dict[str, Any]:
        return {"ev": "artifact", "kind": "row", "frag": self.fragment, "length": self.length,
                "u": self.node(self.u).to_list(), "v": self.node(self.v).to_list(), "p": self.potential}


@dataclass(frozen=True)
class SlopeArtifact:
    """Pair of nodes with potential difference kappa inside a (kappa, slope)-parallelogram."""

    fragment: int
    sym: Symmetry
    parallelogram: Parallelogram
    u: GridCoord
    v: GridCoord
    potential: int

    @property
    def width(self) -> int:
        return self.parallelogram.width

    @property
    def height(self) -> int:
        return self.parallelogram.height

    def region(self) -> List[GridCoord]:
        return region_of(self.parallelogram)

    def to_dict(self) -> Dict[str, Any]:
        data = {"ev": "artifact", "kind": "slope", "frag": self.fragment, "p": self.potential,
                "u": self.u.to_list(), "v": self.v.to_list()}
        data.update(self.parallelogram.to_dict())
        return data


@dataclass(frozen=True)
class DiagWindow:
    """Window [x, x + ell] of the diagonal; u1 and v1 in canonical coordinates."""

    x: int
    ell: int
    u1: GridCoord
    v1: GridCoord
    potential: int


@dataclass(frozen=True)
class LPathArtifact:
    fragment: int
    lpath: LPath
    potential: int

    def to_dict(self) -> Dict[str, Any]:
        return {"ev": "artifact", "kind": "lpath", "frag": self.fragment,
                "row": len(self.lpath.row_part), "col": len(self.lpath.col_part), "p": self.potential}


@dataclass(frozen=True)
class CanonicalFrame:
    """
    Frame in which an L-path reads: start (0, 0), corner (B, 0), far end (B, H), 0 <= H <= B.

    real(c) = sym.apply(c) + shift maps canonical coordinates into the fragment's frame.
    """

    fragment: int
    sym: Symmetry
    shift: GridCoord
    B: int
    H: int

    def real(self, c: GridCoord) -> GridCoord:
        return self.sym.apply(c) + self.shift

    def canonical(self, p: GridCoord) -> GridCoord:
        return self.sym.invert(p - self.shift)

    @property
    def slope(self) -> Fraction:
        return Fraction(self.H, self.B)

    @classmethod
    def for_lpath(cls, fragment: int, lpath: LPath) -> "CanonicalFrame":
        """
        Raises:
            DomainError: If both arms are empty
        """
        u, corner, w = lpath.row_part.start, lpath.corner, lpath.col_part.end
        if corner.l1(u) >= w.l1(corner):
            first, last = u, w
        else:
            first, last = w, u
        leg1, leg2 = corner - first, last - corner
        if leg1 == ORIGIN:
            raise DomainError("an L-path needs a non-empty arm")
        for sym in SYMMETRIES:
            a, b = sym.invert(leg1), sym.invert(leg2)
            if a.y == 0 and a.x > 0 and b.x == 0 and b.y >= 0:
                return cls(fragment, sym, first, a.x, b.y)
        raise DomainError(f"no canonical frame for legs {leg1} and {leg2}")


def region_of(par: Parallelogram) -> List[GridCoord]:
    """Revealed nodes of a slope-boost level: the anchor alone at level 0, all lattice points above."""
    return [par.anchor] if par.level == 0 else lattice_points(par)


def potential_field(labels: Dict[GridCoord, int], region: Iterable[GridCoord], root: GridCoord) -> Dict[GridCoord, int]:
    """
    Potential of a walk from root to every node of a labeled connected region.

    On a properly colored simply connected region the value does not depend on the
    walk; breadth-first order fixes one.
    """
    nodes = set(region)
    if root not in nodes:
        raise DomainError(f"root {root} is not in the region")
    field_ = {root: 0}
    queue = deque([root])
    while queue:
        c = queue.popleft()
        for n in c.neighbors():
            if n in nodes and n not in field_:
                field_[n] = field_[c] + edge_potential(labels[c], labels[n])
                queue.append(n)
    if len(field_) != len(nodes):
        raise DomainError("region is not connected")
    return field_


def field_range(values: Dict[GridCoord, int]) -> Tuple[int, int]:
    return min(values.values()), max(values.values())


def range_pair(values: Dict[GridCoord, int], k: int) -> Tuple[GridCoord, GridCoord]:
    """
    Lexicographically first pair (a, b) with values[b] - values[a] == k.

    Raises:
        DomainError: If no such pair exists
    """
    by_value: Dict[int, List[GridCoord]] = {}
    for c, v in values.items():
        by_value.setdefault(v, []).append(c)
    for v in sorted(by_value):
        if v + k in by_value:
            return min(by_value[v]), min(by_value[v + k])
    raise DomainError(f"no pair with potential difference {k}")


def widest_pair(values: Dict[GridCoord, int], k: int) -> Optional[Tuple[GridCoord, GridCoord]]:
    """
    Pair with |potential difference| == k and the largest horizontal span, west node first.

    Ties go to the smallest lower value, then to the first extreme columns.
    """
    by_value: Dict[int, List[GridCoord]] = {}
    for c, v in values.items():
        by_value.setdefault(v, []).append(c)
    best: Optional[Tuple[int, GridCoord, GridCoord]] = None
    for v in sorted(by_value):
        if v + k not in by_value:
            continue
        low, high = by_value[v], by_value[v + k]
        for a, b in ((min(low), max(high)), (min(high), max(low))):
            if b.x - a.x > 0 and (best is None or b.x - a.x > best[0]):
                best = (b.x - a.x, a, b)
    return None if best is None else (best[1], best[2])


def region_path(region: Iterable[GridCoord], start: GridCoord, end: GridCoord) -> Path:
    """Shortest unit-step path from start to end inside region."""
    nodes = set(region)
    previous: Dict[GridCoord, Optional[GridCoord]] = {start: None}
    queue = deque([start])
    while queue:
        c = queue.popleft()
        if c == end:
            break
        for n in c.neighbors():
            if n in nodes and n not in previous:
                previous[n] = c
                queue.append(n)
    if end not in previous:
        raise DomainError(f"{end} is not reachable from {start} inside the region")
    route = [end]
    while previous[route[-1]] is not None:
        route.append(previous[route[-1]])
    return Path(tuple(reversed(route)))


def _reveal_points(referee: Referee, fid: int, points: Sequence[GridCoord]) -> None:
    """Reserve room for points in fid's group, then reveal the ones not revealed yet."""
    if not points:
        return
    referee.reserve(fid, points)
    referee.reveal_all(fid, points)


def _colors(referee: Referee, fid: int, nodes: Iterable[GridCoord]) -> List[int]:
    colors = []
    for p in nodes:
        c = referee.label_of(fid, p)
        if c is None:
            raise ConstructionError(f"node {p} of fragment {fid} is not labeled")
        colors.append(c)
    return colors


def _prefix(colors: Sequence[int]) -> List[int]:
    values = [0]
    for a, b in zip(colors, colors[1:]):
        values.append(values[-1] + edge_potential(a, b))
    return values


def _certificate_for_walk(referee: Referee, fid: int, walk: Path, colors: Sequence[int], potential: int,
                          detail: str) -> Certificate:
    state = referee.state
    root = state.root_of(fid)[0]
    nodes = tuple(state.to_root(fid, p)[1] for p in walk.nodes)
    return Certificate(CertificateKind.POTENTIAL_VIOLATION, fragment=root, nodes=nodes,
                       colors=tuple(colors), potential=potential, detail=detail)


def close_walk(referee: Referee, fid: int, walk: Path, fill: bool = True) -> Certificate:
    """
    Evaluate a labeled closed walk and force the contradiction it carries.

    A nonzero potential cannot survive a proper coloring of the enclosed region, so
    the region is revealed; the referee raises ImproperEdgeFound on the first clash.
    A region larger than the remaining budget is revealed from the walk inwards,
    one band of cells after the other, until the budget runs out. When it does,
    the walk itself is returned as a potential_violation certificate.
    """
    colors = _colors(referee, fid, walk.nodes)
    p = sequence_potential(colors)
    if p == 0:
        return Certificate.survived("closed walk has potential 0")
    logger.info(f"closed walk of length {len(walk)} has potential {p}, filling its interior")
    if fill:
        cells = enclosed_cells(walk, limit=4 * referee.remaining() + 64)
        if cells is None or len(cells) > referee.remaining():
            logger.info("interior exceeds the budget, revealing it band by band")
            cells = inner_band(walk, referee.remaining())
        try:
            _reveal_points(referee, fid, sorted(cells))
        except BudgetExhausted as exhausted:
            logger.warning(f"fill stopped: {exhausted}")
        else:
            logger.error(f"interior of a walk with potential {p} was colored properly")
    return _certificate_for_walk(referee, fid, walk, colors, p, "closed walk with nonzero potential")


def _boost_row(referee: Referee, k: int, sym: Symmetry, chooser: Chooser) -> Tuple[int, int]:
    """Build a level-k row; returns its root fragment and length."""
    T = referee.T
    if k == 0:
        fid = referee.new_fragment([sym.apply(ORIGIN)])
        referee.reveal(fid, sym.apply(ORIGIN))
        return fid, 1

    f1, n1 = _boost_row(referee, k - 1, sym, chooser)
    f2, n2 = _boost_row(referee, k - 1, sym, chooser)
    c1 = _colors(referee, f1, [sym.apply(GridCoord(i, 0)) for i in range(n1)])
    c2 = _colors(referee, f2, [sym.apply(GridCoord(i, 0)) for i in range(n2)])
    phi1, phi2 = _prefix(c1), _prefix(c2)
    # with public coordinates only the gap keeping the host parity is playable
    gaps = tuple(g for g in (2 * T + 2, 2 * T + 3)
                 if not referee.parity_conflict(f1, f2, sym.apply(GridCoord(n1 - 1 + g, 0))))

    def decide() -> int:
        if max(phi1) - min(phi1) >= k or max(phi2) - min(phi2) >= k:
            return gaps[0]
        # the union of both ranges only stays narrow when the joining walk has this potential
        bad = min(phi1) - min(phi2) - phi1[-1]
        forced = parity_indicator(c1[-1]) + parity_indicator(c2[0])
        return next((g for g in gaps if (forced + g) % 2 != bad % 2), gaps[0])

    g = chooser.choose("gap", decide, gaps)
    referee.commit(f1, f2, sym.apply(GridCoord(n1 - 1 + g, 0)))
    _reveal_points(referee, f1, [sym.apply(GridCoord(i, 0)) for i in range(n1, n1 + g - 1)])
    length = n1 + g - 1 + n2
    if chooser.adaptive:
        phi = _prefix(_colors(referee, f1, [sym.apply(GridCoord(i, 0)) for i in range(length)]))
        if max(phi) - min(phi) < k:
            raise BoostStalled(f"level {k} row only spans potentials {min(phi)}..{max(phi)}")
    logger.debug(f"level {k} row of length {length} built with gap {g}")
    return f1, length


def log_boost_row(referee: Referee, k: int, sym: Symmetry = IDENTITY, chooser: Optional[Chooser] = None) -> RowArtifact:
    """
    Build a row containing two nodes at potential difference k.

    Two level-(k-1) rows are built as separate fragments and joined at gap 2T+2 or
    2T+3, whichever gives the joining walk a potential parity that widens the range.

    Args:
        referee (Referee): The match referee
        k (int): Target potential
        sym (Symmetry): Maps builder coordinates (i, 0) into the fragment frame; the
            transpose builds a column
        chooser (Optional[Chooser]): Source of the gap choices (adaptive by default)

    Returns:
        RowArtifact: The row and its boosted pair, re-verified from the labels

    Raises:
        ImproperEdgeFound: As soon as the algorithm creates an improper edge
        BoostStalled: If the range did not grow although the coloring stayed proper
    """
    if k < 0:
        raise DomainError(f"boost level must be non-negative, got {k}")
    chooser = chooser or Chooser()
    fid, length = _boost_row(referee, k, sym, chooser)
    colors = _colors(referee, fid, [sym.apply(GridCoord(i, 0)) for i in range(length)])
    phi = _prefix(colors)
    lo, hi = min(phi), max(phi)
    target = min(k, hi - lo)
    a, b = phi.index(lo), phi.index(hi)
    if a <= b:
        u = a
        v = next(i for i in range(a, length) if phi[i] == lo + target)
    else:
        u = b
        v = next(i for i in range(b, length) if phi[i] == hi - target)
    potential = sequence_potential(colors[u:v + 1])
    if abs(potential) != target:
        raise ConstructionError(f"row pair re-check gave {potential}, expected {target}")
    artifact = RowArtifact(fid, sym, length, u, v, potential)
    referee.note(artifact.to_dict())
    logger.info(f"level {k} row: length {length}, pair potential {potential}")
    return artifact


def _straight_step(walk: Path) -> GridCoord:
    steps = {b - a for a, b in zip(walk.nodes, walk.nodes[1:])}
    if len(steps) != 1:
        raise DomainError("walk is not straight")
    return steps.pop()


def alignment_attack(referee: Referee, fa: int, w1: Path, fb: int, w2: Path) -> Certificate:
    """
    Place a second straight walk parallel to the first at distance 2T+2 and close the cycle.

    Rows get their partner to the south, columns to the east. The two connecting
    segments have potential at most 2T+2 each, so a potential difference of at
    least 4T+5 between the walks leaves the cycle with nonzero potential.

    Args:
        referee (Referee): The match referee
        fa (int): Fragment holding w1 (stays in place)
        w1 (Path): Labeled straight walk in fa's frame
        fb (int): Fragment holding w2; its whole group is moved
        w2 (Path): Labeled straight walk in fb's frame, same length and direction as w1

    Returns:
        Certificate: potential_violation if the fill could not run; normally the
        referee raises ImproperEdgeFound during the fill instead

    Raises:
        DomainError: If the walks differ in length or direction, share a group, or
            their potentials differ by less than 4T+5
    """
    T = referee.T
    state = referee.state
    if len(w1) != len(w2) or len(w1) == 0:
        raise DomainError(f"walks of lengths {len(w1)} and {len(w2)} cannot be aligned")
    if _straight_step(w1) != _straight_step(w2):
        raise DomainError("walks run in different directions")
    if state.same_group(fa, fb):
        raise DomainError(f"fragments {fa} and {fb} already share a group")
    dp = sequence_potential(_colors(referee, fa, w1.nodes)) - sequence_potential(_colors(referee, fb, w2.nodes))
    if abs(dp) < 4 * T + 5:
        raise DomainError(f"potential difference {dp} is below the attack threshold {4 * T + 5}")

    root_b, off_b = state.root_of(fb)
    normal = GridCoord(0, -(2 * T + 2)) if _straight_step(w1).y == 0 else GridCoord(2 * T + 2, 0)
    referee.commit(fa, root_b, w1.start + normal - (w2.start + off_b))
    logger.info(f"alignment attack: walks of length {len(w1)} differ by {dp}")

    near = straight_path(w1.end, w1.end + normal)
    far = straight_path(w1.start + normal, w1.start)
    _reveal_points(referee, fa, list(near.nodes[1:-1]) + list(far.nodes[1:-1]))
    partner = Path(tuple(p + normal for p in reversed(w1.nodes)))
    cycle = w1.concat(near).concat(partner).concat(far, closed=True)
    return close_walk(referee, fa, cycle)


def _extend_arm(referee: Referee, fid: int, start: GridCoord, step: GridCoord, count: int,
                base_fid: int, base_walk: Path, chooser: Chooser, offset: int = 0,
                stop: Optional[Callable[[int, int], bool]] = None) -> Union[List[int], Certificate]:
    """
    Reveal count nodes after start, comparing every segment as long as the base walk with it.

    stop(j, p) is asked after node j with the potential of the arm so far (plus offset).

    Returns:
        Union[List[int], Certificate]: Colors of the arm (start included), or the
        certificate of an alignment attack fired on a segment outside the band
    """
    T = referee.T
    s = len(base_walk)
    base_p = sequence_potential(_colors(referee, base_fid, base_walk.nodes))
    nodes = [start]
    colors = _colors(referee, fid, [start])
    running = offset
    for j in range(1, count + 1):
        p = GridCoord(start.x + step.x * j, start.y + step.y * j)
        if not referee.state.is_revealed(fid, p):
            referee.reveal(fid, p)
        nodes.append(p)
        colors.append(referee.label_of(fid, p))
        running += edge_potential(colors[-2], colors[-1])
        if chooser.adaptive and j % s == 0:
            seg_p = sequence_potential(colors[j - s:])
            if abs(seg_p - base_p) >= 4 * T + 5:
                return alignment_attack(referee, fid, Path(tuple(nodes[j - s:])), base_fid, base_walk)
        if stop is not None and stop(j, running):
            break
    return colors


def quasilinear_row(referee: Referee, base: RowArtifact, N: int, chooser: Optional[Chooser] = None) -> Union[RowArtifact, Certificate]:
    """
    Reveal a long row west to east, checking each segment against the base walk.

    A segment whose potential leaves [p(W) - (4T+4), p(W) + (4T+4)] is attacked on
    the spot; otherwise the row is returned with N rounded up to a multiple of the
    base span.
    """
    chooser = chooser or Chooser()
    s = base.span
    if s <= 0:
        raise DomainError("base walk has no length")
    N = max(s, -(-N // s) * s)
    fid = referee.new_fragment([ORIGIN, GridCoord(N, 0)])
    referee.reveal(fid, ORIGIN)
    result = _extend_arm(referee, fid, ORIGIN, GridCoord(1, 0), N, base.fragment, base.walk(), chooser)
    if isinstance(result, Certificate):
        return result
    artifact = RowArtifact(fid, IDENTITY, N + 1, 0, N, sequence_potential(result))
    referee.note(artifact.to_dict())
    logger.info(f"row of length {N + 1} built, potential {artifact.potential}")
    return artifact


def _row_starts(referee: Referee, row: RowArtifact, min_arm: int) -> Dict[int, int]:
    """First row index of every prefix potential, over starts that leave at least min_arm edges."""
    prefix = _prefix(_colors(referee, row.fragment, row.walk().nodes))
    starts: Dict[int, int] = {}
    for i, value in enumerate(prefix[:max(1, row.length - min_arm)]):
        starts.setdefault(value, i)
    return starts


def _column_arm(referee: Referee, row: RowArtifact, base_col: RowArtifact, direction: int, cap: int,
                chooser: Chooser, starts: Dict[int, int]) -> Union[Tuple[int, int], Certificate, None]:
    """
    Reveal a column from the row's east end until the L-path it closes has potential zero.

    The column stops at the first node whose running potential (row included)
    equals the prefix potential of an admissible start in starts. Start 0 is always
    admissible; a later start must leave a row arm at least as long as the column.

    Returns:
        Union[Tuple[int, int], Certificate, None]: (row start, column length), the
        certificate of an alignment attack, or None when the cap comes first
    """
    last = row.length - 1
    found: List[int] = []

    def stop(j: int, running: int) -> bool:
        i = starts.get(running)
        if i is not None and (i == 0 or last - i >= j):
            found.append(i)
            return True
        return False

    corner = row.node(last)
    base_walk = base_col.walk() if direction == 1 else base_col.walk().reversed()
    referee.reserve(row.fragment, [corner, corner + GridCoord(0, direction * cap)])
    result = _extend_arm(referee, row.fragment, corner, GridCoord(0, direction), cap, base_col.fragment,
                         base_walk, chooser, offset=row.potential, stop=stop)
    if isinstance(result, Certificate):
        return result
    if not found:
        return None
    return found[0], len(result) - 1


def _adaptive_lpath(referee: Referee, params: AdversaryParams, base_row: RowArtifact, base_col: RowArtifact,
                    chooser: Chooser) -> Union[Tuple[RowArtifact, int, int, int], Certificate]:
    """Row, row start, column direction and column length of an L-path with potential zero."""
    cap = params.column_cap_factor * params.L1
    for attempt in range(ROW_ATTEMPTS):
        row = quasilinear_row(referee, base_row, params.L1 if attempt == 0 else 2 * params.L1, chooser)
        if isinstance(row, Certificate):
            return row
        starts = {0: 0} if attempt == 0 else _row_starts(referee, row, params.L1)
        if row.potential in starts:
            return row, starts[row.potential], 1, 0
        want = -1 if row.potential > 0 else 1
        first = chooser.choose("direction", lambda: 1 if base_col.sign == want else -1, (1, -1))
        for direction in (first, -first):
            found = _column_arm(referee, row, base_col, direction, cap, chooser, starts)
            if isinstance(found, Certificate):
                return found
            if found is not None:
                return row, found[0], direction, found[1]
            logger.warning(f"row {attempt}: column of direction {direction} reached its cap of {cap} nodes "
                           f"with nonzero potential")
    return Certificate.survived(f"no column closed an L-path with potential 0 on {ROW_ATTEMPTS} rows")


def build_lpath(referee: Referee, params: AdversaryParams, chooser: Optional[Chooser] = None) -> Union[LPathArtifact, Certificate]:
    """
    Build a row arm and a column arm from its east end with total potential zero.

    The column runs north or south, whichever way the base column's potential
    drifts against the row's. Edge potentials are -1, 0 or 1, so the running
    potential cannot jump over zero; the column stops at the first zero. A column
    that reaches its cap is tried the other way. When both miss, a fresh row of
    twice the length is built and the L-path may start after a prefix of it: the
    column then stops at the first running potential some prefix matches.

    Oblivious plans draw the column direction and an even column length before
    anything is revealed.
    """
    chooser = chooser or Chooser()
    drawn = None
    if not chooser.adaptive:
        cap = params.column_cap_factor * params.L1
        drawn = chooser.choose("column", lambda: None, [(d, n) for d in (1, -1) for n in range(0, cap + 1, 2)])
    k0 = base_level(params.L0, params.T)
    base_row = log_boost_row(referee, k0, IDENTITY, chooser)
    base_col = log_boost_row(referee, k0, TRANSPOSE, chooser)
    if drawn is None:
        found = _adaptive_lpath(referee, params, base_row, base_col, chooser)
        if isinstance(found, Certificate):
            return found
        row, start, direction, col_len = found
        chooser.note("column", (direction, col_len))
        if start:
            chooser.note("row_start", start)
    else:
        row = quasilinear_row(referee, base_row, params.L1, chooser)
        if isinstance(row, Certificate):
            return row
        start = 0
        direction, col_len = drawn
        corner = row.node(row.length - 1)
        _reveal_points(referee, row.fragment, [corner + GridCoord(0, direction * j) for j in range(1, col_len + 1)])

    fid = row.fragment
    corner = row.node(row.length - 1)
    lpath = LPath(row.walk(start, row.length - 1), straight_path(corner, corner + GridCoord(0, direction * col_len)))
    potential = sequence_potential(_colors(referee, fid, lpath.walk.nodes))
    artifact = LPathArtifact(fid, lpath, potential)
    referee.note(artifact.to_dict())
    logger.info(f"L-path built: row {len(lpath.row_part)}, column {len(lpath.col_part)}, potential {potential}")
    return artifact


def _labels_of(referee: Referee, fid: int, points: Sequence[GridCoord], sym: Symmetry) -> Dict[GridCoord, int]:
    """Labels keyed by builder coordinates."""
    return dict(zip(points, _colors(referee, fid, [sym.apply(p) for p in points])))


def _chain_copies(referee: Referee, f1: int, par: Parallelogram, level: int, slope: Fraction, sym: Symmetry,
                  chooser: Chooser, copies: int) -> Tuple[int, Parallelogram]:
    """Oblivious repetition: line up copies of the previous level inside one parallelogram."""
    offsets, nxt = par.chain(referee.T, copies)
    for t in offsets[1:]:
        f2, _ = _boost_slope(referee, level - 1, slope, sym, chooser, copies)
        referee.commit(f1, f2, sym.apply(t))
    _reveal_points(referee, f1, [sym.apply(p) for p in region_of(nxt)])
    logger.debug(f"level {level} chain of {copies} copies: width {nxt.width}")
    return f1, nxt


def _boost_slope(referee: Referee, level: int, slope: Fraction, sym: Symmetry, chooser: Chooser,
                 copies: int = 2) -> Tuple[int, Parallelogram]:
    T = referee.T
    if level == 0:
        fid = referee.new_fragment([sym.apply(ORIGIN)])
        referee.reveal(fid, sym.apply(ORIGIN))
        return fid, Parallelogram.from_anchor(0, slope, ORIGIN, 0)

    f1, par = _boost_slope(referee, level - 1, slope, sym, chooser, copies)
    if copies > 2 and not chooser.adaptive:
        return _chain_copies(referee, f1, par, level, slope, sym, chooser, copies)
    f2, _ = _boost_slope(referee, level - 1, slope, sym, chooser, copies)
    region = region_of(par)
    labels1 = _labels_of(referee, f1, region, sym)
    labels2 = _labels_of(referee, f2, region, sym)
    phi1 = potential_field(labels1, region, par.anchor)
    phi2 = potential_field(labels2, region, par.anchor)
    t_minus, t_plus = par.placements(T)
    allowed = tuple(c for c in (0, 1) if not referee.parity_conflict(f1, f2, sym.apply((t_minus, t_plus)[c])))

    def decide() -> int:
        lo1, hi1 = field_range(phi1)
        lo2, hi2 = field_range(phi2)
        if hi1 - lo1 >= level or hi2 - lo2 >= level:
            return allowed[0]
        bad = lo1 - lo2
        forced = parity_indicator(labels1[par.anchor]) + parity_indicator(labels2[par.anchor])
        best = 0 if (forced + t_minus.x + t_minus.y) % 2 != bad % 2 else 1
        return best if best in allowed else allowed[0]

    choice = chooser.choose("placement", decide, allowed)
    t = (t_minus, t_plus)[choice]
    referee.commit(f1, f2, sym.apply(t))
    nxt = par.next_level(T)
    points = region_of(nxt)
    _reveal_points(referee, f1, [sym.apply(p) for p in points])
    if chooser.adaptive:
        lo, hi = field_range(potential_field(_labels_of(referee, f1, points, sym), points, nxt.anchor))
        if hi - lo < level:
            raise BoostStalled(f"level {level} parallelogram only spans potentials {lo}..{hi}")
    logger.debug(f"level {level} parallelogram: width {nxt.width}, copy placed at {t}")
    return f1, nxt


def slope_boost(referee: Referee, slope: Fraction, kappa: int, chooser: Optional[Chooser] = None,
                sym: Symmetry = IDENTITY, copies: int = 2) -> SlopeArtifact:
    """
    Boost the potential to kappa inside a parallelogram of the given slope.

    Level 0 is a single node. Each level places a copy's anchor on the lattice node
    just below or just above the slope line at horizontal distance w + 2T + 2 and
    reveals every lattice point of the enclosing next-level parallelogram.
    A non-adaptive chooser with copies > 2 skips the guess and instead chains that
    many copies per level (Parallelogram.chain); the height stays kappa + 1.

    Args:
        referee (Referee): The match referee
        slope (Fraction): Canonical slope in [0, 1]
        kappa (int): Target potential (and final level)
        chooser (Optional[Chooser]): Source of the placement choices
        sym (Symmetry): Maps builder coordinates into the fragment frame
        copies (int): Copies per level in the non-adaptive construction

    Returns:
        SlopeArtifact: The widest pair at potential difference kappa, re-verified along a walk

    Raises:
        DomainError: If slope lies outside [0, 1], kappa is negative or copies is below 2
    """
    if not 0 <= slope <= 1:
        raise DomainError(f"slope {slope} must be canonicalized into [0, 1]")
    if kappa < 0:
        raise DomainError(f"kappa must be non-negative, got {kappa}")
    if copies < 2:
        raise DomainError(f"a level needs at least two copies, got {copies}")
    chooser = chooser or Chooser()
    fid, par = _boost_slope(referee, kappa, Fraction(slope), sym, chooser, copies)
    region = region_of(par)
    labels = _labels_of(referee, fid, region, sym)
    phi = potential_field(labels, region, par.anchor)

    def decide() -> Optional[Tuple[GridCoord, GridCoord]]:
        pair = widest_pair(phi, kappa)
        if pair is None and field_range(phi)[1] - field_range(phi)[0] >= kappa:
            pair = range_pair(phi, kappa)
        return pair

    pair = chooser.choose("pair", decide, (None,))
    if pair is None:
        east = par.origin_x + par.width
        pair = (par.anchor, min(p for p in region if p.x == east))
    u, v = pair
    walk = region_path(region, u, v)
    potential = walk_potential(ColoredWalk.from_labels(walk, labels))
    if potential != phi[v] - phi[u]:
        raise ConstructionError(f"slope pair re-check gave {potential}, field says {phi[v] - phi[u]}")
    artifact = SlopeArtifact(fid, sym, par, u, v, potential)
    referee.note(artifact.to_dict())
    logger.info(f"slope {slope} level {kappa}: width {par.width}, height {par.height}, potential {potential}")
    return artifact


def canonical_slope(theta: Fraction) -> Tuple[Symmetry, Fraction]:
    """Symmetry and canonical slope in [0, 1] for a direction of slope theta."""
    sym, c = canonicalize(GridCoord(theta.denominator, theta.numerator))
    return sym, Fraction(c.y, c.x)


def reveal_diagonal(referee: Referee, frame: CanonicalFrame) -> Tuple[Path, Dict[GridCoord, int]]:
    """Reveal the threaded diagonal from (0, 0) to (B, H); labels keyed by canonical coordinates."""
    diag = diagonal_path(ORIGIN, GridCoord(frame.B, frame.H))
    walk, _ = thread_walk(diag)
    real = [frame.real(c) for c in walk.nodes]
    _reveal_points(referee, frame.fragment, real)
    level = enclosing_parallelogram(diag.nodes, frame.slope).level
    referee.note({"ev": "artifact", "kind": "diagonal", "B": frame.B, "H": frame.H, "level": level})
    return diag, dict(zip(walk.nodes, _colors(referee, frame.fragment, real)))


def find_constant_diag(diag: Path, labels: Dict[GridCoord, int], ell: int, strict: bool = True) -> DiagWindow:
    """
    Window of ell columns along the diagonal with potential at most 2 in absolute value.

    Needs zero boundary values and ell * ell < B for the mean value witness.
    With strict=False a failed precondition falls back to an exhaustive scan, and
    to the window of smallest potential when none reaches the bound.

    Args:
        diag (Path): Diagonal point set from (0, 0) to (B, H)
        labels (Dict[GridCoord, int]): Colors of the threaded diagonal
        ell (int): Window length in columns
        strict (bool): Raise instead of scanning when the preconditions fail

    Returns:
        DiagWindow: Start column, ends and potential of the window

    Raises:
        DomainError: If ell is outside 1..B, or strict and the mean value preconditions fail
    """
    f = potential_profile(diag, labels).f
    B = len(f) - 1
    if ell <= 0 or ell > B:
        raise DomainError(f"window length {ell} does not fit a diagonal spanning {B} columns")
    if f[0] == 0 and f[B] == 0 and ell * ell < B:
        x = mvt_witness(f, ell, 1)
    elif strict:
        raise DomainError(f"mean value preconditions fail: f(B) = {f[B]}, ell = {ell}, B = {B}")
    else:
        found = window_scan(f, ell, 2)
        x = found if found is not None else min(range(B - ell + 1), key=lambda i: (abs(f[i + ell] - f[i]), i))
    return DiagWindow(x, ell, diag.nodes[x], diag.nodes[x + ell], f[x + ell] - f[x])


def _window_at(diag: Path, labels: Dict[GridCoord, int], x: int, ell: int) -> DiagWindow:
    f = potential_profile(diag, labels).f
    return DiagWindow(x, ell, diag.nodes[x], diag.nodes[x + ell], f[x + ell] - f[x])


def final_strike(referee: Referee, frame: CanonicalFrame, diag: Path, window: DiagWindow,
                 artifact: SlopeArtifact) -> Certificate:
    """
    Commit the slope artifact above the window and close the cycle through both.

    The artifact's pair is aligned vertically with the window ends, at the
    smallest height of at least 2T+2 that keeps every revealed node of the two
    groups 2T+2 apart. Backdoor games skip heights that flip the host parity.

    Raises:
        DomainError: If the spans of window and artifact differ
        ConstructionError: If no admissible height exists
    """
    T = referee.T
    state = referee.state
    rw, re = artifact.u, artifact.v
    if re.x - rw.x != window.ell:
        raise DomainError(f"artifact span {re.x - rw.x} differs from window length {window.ell}")
    d1, d2 = window.u1, window.v1
    shift = None
    for dy in range(2 * T + 2, 4 * T + 7 + artifact.height):
        t_can = GridCoord(d1.x - rw.x, d1.y + dy - rw.y)
        t_real = frame.shift + frame.sym.apply(t_can)
        if referee.parity_conflict(frame.fragment, artifact.fragment, t_real):
            continue
        if state.separation_violation(frame.fragment, artifact.fragment, t_real) is None:
            shift = t_can
            break
    if shift is None:
        raise ConstructionError("no height above the window keeps the artifact separated")
    referee.commit(frame.fragment, artifact.fragment, frame.shift + frame.sym.apply(shift))
    logger.info(f"final strike: artifact placed at {shift} over window {window.x}..{window.x + window.ell}")

    west = straight_path(rw + shift, d1)
    east = straight_path(d2, re + shift)
    inner = list(west.nodes[1:-1]) + list(east.nodes[1:-1])
    _reveal_points(referee, frame.fragment, [frame.real(c) for c in inner])
    window_walk, _ = thread_walk(Path(diag.nodes[window.x:window.x + window.ell + 1], max_step=2))
    r_walk = Path(tuple(p + shift for p in region_path(artifact.region(), re, rw).nodes))
    cycle = window_walk.concat(east).concat(r_walk).concat(west, closed=True)
    return close_walk(referee, frame.fragment, Path(tuple(frame.real(c) for c in cycle.nodes), closed=True))


def deterministic_pipeline(referee: Referee, params: AdversaryParams, chooser: Optional[Chooser] = None,
                           strict: bool = False) -> Certificate:
    """
    L-path, diagonal, slope artifact, window, strike.

    Any improper edge on the way ends the match through ImproperEdgeFound. Unless
    strict is set, the window search falls back to an exhaustive scan.
    """
    chooser = chooser or Chooser()
    lp = build_lpath(referee, params, chooser)
    if isinstance(lp, Certificate):
        return lp
    frame = CanonicalFrame.for_lpath(lp.fragment, lp.lpath)
    diag, labels = reveal_diagonal(referee, frame)
    f_end = potential_profile(diag, labels).f[-1]
    walk = lp.lpath.walk
    if frame.canonical(walk.start) != ORIGIN:
        walk = walk.reversed()
    if f_end != sequence_potential(_colors(referee, lp.fragment, walk.nodes)):
        threaded, _ = thread_walk(diag)
        cycle = walk.concat(Path(tuple(frame.real(c) for c in reversed(threaded.nodes))), closed=True)
        return close_walk(referee, lp.fragment, cycle)

    artifact = slope_boost(referee, frame.slope, params.kappa, chooser, frame.sym, params.level_copies)
    ell = artifact.v.x - artifact.u.x
    if ell <= 0 or ell > frame.B:
        return Certificate.survived(f"artifact span {ell} does not fit a diagonal of {frame.B} columns")
    x = chooser.choose("window", lambda: find_constant_diag(diag, labels, ell, strict=strict).x, range(frame.B - ell + 1))
    window = _window_at(diag, labels, x, ell)
    return final_strike(referee, frame, diag, window, artifact)


@dataclass
class ObliviousStats:
    """Outcome counts of a batch of oblivious trials, the first winning match and the last match."""

    trials: int = 0
    wins: int = 0
    kinds: Counter = field(default_factory=Counter)
    best: Optional[Tuple[Certificate, Transcript]] = None
    last: Optional[Tuple[Certificate, Transcript]] = None

    @property
    def win_rate(self) -> float:
        return self.wins / self.trials if self.trials else 0.0

    def to_dict(self) -> Dict[str, Any]:
        return {"trials": self.trials, "wins": self.wins, "win_rate": self.win_rate, "kinds": dict(self.kinds)}


STRATEGY_NAMES = ("log-boost", "quasilinear", "slope-boost", "lpath", "full-det", "full-oblivious")


def make_strategy(name: str, params: AdversaryParams, theta: Fraction = Fraction(0),
                  seed: int = 0, chooser: Optional[Chooser] = None) -> Callable[[Referee], Certificate]:
    """
    Strategy callable for one of STRATEGY_NAMES.

    The artifact builders end their match as survived with the artifact in the
    transcript; only the full pipelines aim for a win.

    Raises:
        DomainError: If the name is unknown
    """
    if name not in STRATEGY_NAMES:
        raise DomainError(f"unknown strategy {name!r}, expected one of {', '.join(STRATEGY_NAMES)}")

    def strategy(referee: Referee) -> Certificate:
        pick = chooser or (ObliviousPlan(seed) if name == "full-oblivious" else Chooser())
        if name == "log-boost":
            row = log_boost_row(referee, params.kappa, IDENTITY, pick)
            return Certificate.survived(f"row potential {row.potential}")
        if name == "quasilinear":
            base = log_boost_row(referee, base_level(params.L0, params.T), IDENTITY, pick)
            result = quasilinear_row(referee, base, params.L1, pick)
            if isinstance(result, Certificate):
                return result
            return Certificate.survived(f"row potential {result.potential}")
        if name == "slope-boost":
            sym, slope = canonical_slope(theta)
            art = slope_boost(referee, slope, params.kappa, pick, sym, params.level_copies)
            return Certificate.survived(f"width {art.width}, height {art.height}, potential {art.potential}")
        if name == "lpath":
            result = build_lpath(referee, params, pick)
            if isinstance(result, Certificate):
                return result
            return Certificate.survived(f"L-path potential {result.potential}")
        return deterministic_pipeline(referee, params, pick)

    return strategy


def run_strategy(name: str, algorithm: AlgorithmInterface, params: AdversaryParams, seed: int = 0,
                 theta: Fraction = Fraction(0), backdoor: bool = False,
                 config: Optional[Dict[str, Any]] = None,
                 chooser: Optional[Chooser] = None) -> Tuple[Certificate, Transcript]:
    """Validate the parameters, play one match and return its outcome and transcript."""
    report = require_valid(params)
    header = {
        "strategy": name,
        "regime": report.regime,
        "adversary": params.to_dict(),
        "theta": f"{theta.numerator}/{theta.denominator}",
        "config": config or {},
    }
    if isinstance(chooser, ObliviousPlan) and not chooser.forced:
        header["plan_seed"] = chooser.seed
    strategy = make_strategy(name, params, theta, seed, chooser)
    return run_match(algorithm, strategy, params.game(backdoor), seed, header)


def run_deterministic_lb(algorithm: AlgorithmInterface, params: AdversaryParams, seed: int = 0,
                         backdoor: bool = False, chooser: Optional[Chooser] = None) -> Tuple[Certificate, Transcript]:
    """
    Full adaptive lower-bound run.

    Args:
        algorithm (AlgorithmInterface): The coloring algorithm under attack
        params (AdversaryParams): Strategy parameters; the ledger regime goes into the header
        seed (int): Seed of the algorithm's bit stream
        backdoor (bool): Resolve absolute coordinates for the oracle cheater
        chooser (Optional[Chooser]): Records the adaptive choices when given

    Returns:
        Tuple[Certificate, Transcript]: The outcome and the replayable transcript
    """
    return run_strategy("full-det", algorithm, params, seed, backdoor=backdoor, chooser=chooser or Chooser())


def run_oblivious_lb(algorithm: AlgorithmInterface, params: AdversaryParams, trials: int, seed: int = 0,
                     forced: Optional[Iterable[Tuple[str, Any]]] = None, backdoor: bool = False) -> ObliviousStats:
    """
    Independent matches with every adversary choice drawn before the algorithm's coins.

    Trial t draws its plan from derive_seed(seed, t, "plan") and gives the algorithm
    derive_seed(seed, t, "algo"). forced replays a recorded choice log instead of
    drawing (the algorithm then gets the master seed).
    """
    stats = ObliviousStats()
    recorded = list(forced) if forced is not None else None
    for t in range(trials):
        plan_seed = derive_seed(seed, t, "plan")
        if recorded is not None:
            plan = ObliviousPlan.from_log(plan_seed, recorded)
            algo_seed = seed
        else:
            plan = ObliviousPlan(plan_seed)
            algo_seed = derive_seed(seed, t, "algo")
        cert, transcript = run_strategy("full-oblivious", algorithm, params, algo_seed, backdoor=backdoor, chooser=plan)
        stats.trials += 1
        stats.kinds[cert.kind.value] += 1
        stats.last = (cert, transcript)
        if cert.is_win:
            stats.wins += 1
            if stats.best is None:
                stats.best = (cert, transcript)
        logger.debug(f"oblivious trial {t}: {cert.kind.value}")
    logger.info(f"oblivious run: {stats.wins}/{stats.trials} wins")
    return stats


def params_from_header(header: Dict[str, Any]) -> AdversaryParams:
    adv = header["adversary"]
    return AdversaryParams(
        T=adv["T"], n_budget=adv["n_budget"], kappa=adv["kappa"], L0=adv["L0"], L1=adv["L1"],
        c_ledger=adv.get("c_ledger"), trials=adv.get("trials", 1), grid_side=adv.get("grid_side", 65536),
        column_cap_factor=adv.get("column_cap_factor", 4), level_copies=adv.get("level_copies", 2),
    )


def replay_match(transcript: Transcript, algorithm: AlgorithmInterface) -> Transcript:
    """Re-run the match a transcript records, from its header alone."""
    header = transcript.header
    num, den = (int(part) for part in header.get("theta", "0/1").split("/"))
    plan = ObliviousPlan(header["plan_seed"]) if "plan_seed" in header else None
    _, replayed = run_strategy(
        header["strategy"], algorithm, params_from_header(header), header["seed"],
        Fraction(num, den), header["params"].get("backdoor", False), header.get("config"), plan,
    )
    return replayed
