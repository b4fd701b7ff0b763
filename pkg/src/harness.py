"""
The online-LOCAL referee.

The referee keeps the hidden placement of fragments, materializes radius-T balls
around revealed nodes, hands the algorithm a View that only exposes per-component
frames and orientations, enforces the reveal/label turn order and the node budget,
and records a replayable transcript.
"""
import hashlib
import json
import logging
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path as FilePath
from typing import Any, Callable, Dict, Iterable, List, Optional, Protocol, Set, Tuple

from .errors import (
    BoostStalled,
    BudgetExhausted,
    ConstructionError,
    DomainError,
    GridLocalError,
    ImproperEdgeFound,
    ProtocolError,
)
from .gridCore import Box, Fragment, GridCoord, Orientation, ball, ball_cells
from .potential import Color

logger = logging.getLogger(__name__)

__all__ = [
    "BoostStalled",
    "BudgetExhausted",
    "Certificate",
    "CertificateKind",
    "ConstructionError",
    "DomainError",
    "GameParams",
    "GameState",
    "GridLocalError",
    "ImproperEdgeFound",
    "ProtocolError",
    "RandomBits",
    "Referee",
    "Transcript",
    "View",
    "run_match",
]


@dataclass(frozen=True)
class GameParams:
    """Referee parameters: locality, node budget and host grid side."""

    T: int
    n_budget: int
    grid_side: int = 65536
    backdoor: bool = False

    def __post_init__(self) -> None:
        if self.T < 0:
            raise DomainError(f"T must be non-negative, got {self.T}")
        if self.n_budget <= 0:
            raise DomainError(f"budget must be positive, got {self.n_budget}")

    @property
    def separation(self) -> int:
        """Smallest distance two revealed nodes of different groups may have."""
        return 2 * self.T + 2

    def to_dict(self) -> Dict[str, Any]:
        return {"T": self.T, "n_budget": self.n_budget, "grid_side": self.grid_side, "backdoor": self.backdoor}


class CertificateKind(str, Enum):
    IMPROPER_EDGE = "improper_edge"
    POTENTIAL_VIOLATION = "potential_violation"
    SURVIVED = "survived"
    BUDGET_EXHAUSTED = "budget_exhausted"


@dataclass(frozen=True)
class Certificate:
    """
    The adversary's win proof, or the reason there is none.

    Nodes are given in the frame of the root fragment of the group holding them.
    For an improper edge the two endpoints are listed; for a potential violation
    the closed walk is listed, first node repeated at the end.
    """

    kind: CertificateKind
    fragment: Optional[int] = None
    nodes: Tuple[GridCoord, ...] = ()
    colors: Tuple[int, ...] = ()
    potential: Optional[int] = None
    detail: str = ""

    @property
    def is_win(self) -> bool:
        return self.kind in (CertificateKind.IMPROPER_EDGE, CertificateKind.POTENTIAL_VIOLATION)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "ev": "cert",
            "kind": self.kind.value,
            "frag": self.fragment,
            "walk": [p.to_list() for p in self.nodes],
            "colors": list(self.colors),
            "p": self.potential,
            "detail": self.detail,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Certificate":
        return cls(
            kind=CertificateKind(data["kind"]),
            fragment=data.get("frag"),
            nodes=tuple(GridCoord.from_list(xy) for xy in data.get("walk", [])),
            colors=tuple(data.get("colors", [])),
            potential=data.get("p"),
            detail=data.get("detail", ""),
        )

    @classmethod
    def survived(cls, detail: str = "") -> "Certificate":
        return cls(CertificateKind.SURVIVED, detail=detail)


@dataclass(frozen=True)
class Transcript:
    """Header plus ordered event log; serialized as JSON lines."""

    header: Dict[str, Any]
    events: Tuple[Dict[str, Any], ...]

    def to_jsonl(self) -> str:
        lines = [json.dumps(self.header, sort_keys=True)]
        lines.extend(json.dumps(ev, sort_keys=True) for ev in self.events)
        return "\n".join(lines) + "\n"

    def write(self, path: FilePath) -> None:
        path = FilePath(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8") as f:
            f.write(self.to_jsonl())

    @classmethod
    def from_jsonl(cls, text: str) -> "Transcript":
        rows = [json.loads(line) for line in text.splitlines() if line.strip()]
        if not rows:
            raise DomainError("empty transcript")
        return cls(rows[0], tuple(rows[1:]))

    @classmethod
    def read(cls, path: FilePath) -> "Transcript":
        with open(path, "r", encoding="utf-8") as f:
            return cls.from_jsonl(f.read())

    def labels(self) -> List[Tuple[int, int]]:
        return [(ev["n"], ev["c"]) for ev in self.events if ev.get("ev") == "label"]

    @property
    def peak_potential(self) -> int:
        """Largest |p| any artifact or the certificate reports."""
        return max((abs(ev["p"]) for ev in self.events
                    if ev.get("ev") in ("artifact", "cert") and isinstance(ev.get("p"), int)), default=0)

    @property
    def certificate(self) -> Optional[Certificate]:
        for ev in reversed(self.events):
            if ev.get("ev") == "cert":
                return Certificate.from_dict(ev)
        return None


class RandomBits:
    """
    Deterministic bit stream keyed by (seed, reveal index).

    SHA-256 in counter mode; the same key always yields the same stream.
    """

    def __init__(self, seed: int, index: int):
        self.seed = seed
        self.index = index
        self._counter = 0
        self._buffer = b""

    def _refill(self) -> None:
        block = hashlib.sha256(f"{self.seed}:{self.index}:{self._counter}".encode("utf-8")).digest()
        self._counter += 1
        self._buffer += block

    def getrandbits(self, n: int) -> int:
        nbytes = (n + 7) // 8
        while len(self._buffer) < nbytes:
            self._refill()
        chunk, self._buffer = self._buffer[:nbytes], self._buffer[nbytes:]
        return int.from_bytes(chunk, "big") >> (8 * nbytes - n)

    def randbelow(self, k: int) -> int:
        if k <= 0:
            raise DomainError(f"randbelow needs a positive bound, got {k}")
        n = max(1, (k - 1).bit_length())
        while True:
            r = self.getrandbits(n)
            if r < k:
                return r

    def choice(self, items: List[Any]) -> Any:
        return items[self.randbelow(len(items))]


@dataclass
class _Group:
    """Cells of one group of committed fragments, in the root fragment's frame."""

    root: int
    visible: Dict[GridCoord, int] = field(default_factory=dict)
    labels: Dict[GridCoord, int] = field(default_factory=dict)
    names: Dict[GridCoord, int] = field(default_factory=dict)
    comps: Set[int] = field(default_factory=set)


class View:
    """
    What the algorithm sees when labeling the pending node.

    Each component of the induced subgraph has a private frame whose origin is the
    lexicographically smallest node of the ball that created it. Node names are
    reveal indices. Absolute placement is not exposed (except through the oracle
    backdoor).
    """

    def __init__(self, state: "GameState", pending: int):
        self._state = state
        self.pending = pending

    def components(self) -> List[int]:
        """Component ids in order of creation (first-revealed order)."""
        return self._state._live_components()

    def locate(self, name: int) -> Tuple[int, GridCoord]:
        """Component id and frame coordinates of a revealed node."""
        return self._state._locate(name)

    def position(self) -> GridCoord:
        return self.locate(self.pending)[1]

    def label_at(self, component: int, xy: GridCoord) -> Optional[int]:
        group, q = self._state._component_cell(component, xy)
        return None if group is None else group.labels.get(q)

    def name_at(self, component: int, xy: GridCoord) -> Optional[int]:
        group, q = self._state._component_cell(component, xy)
        return None if group is None else group.names.get(q)

    def neighbor_labels(self, name: Optional[int] = None) -> Dict[Orientation, int]:
        """Labels of the visible, already labeled grid neighbours of a revealed node."""
        group, q = self._state._node_at[self.pending if name is None else name]
        g = self._state._groups[group]
        result = {}
        for o in Orientation:
            c = g.labels.get(q + o.delta)
            if c is not None:
                result[o] = c
        return result

    def cells(self, component: int) -> List[GridCoord]:
        return self._state._component_cells(component)

    def snapshot(self) -> Dict[str, Any]:
        """Canonical serialization of the whole view."""
        comps = []
        for cid in self.components():
            cells = self.cells(cid)
            labels = []
            for xy in cells:
                c = self.label_at(cid, xy)
                if c is not None:
                    labels.append([xy.x, xy.y, self.name_at(cid, xy), c])
            comps.append({"id": cid, "cells": [p.to_list() for p in cells], "labels": labels})
        cid, xy = self.locate(self.pending)
        return {"components": comps, "pending": [cid, xy.x, xy.y], "name": self.pending}

    def digest(self) -> str:
        """Short digest of the pending node's local situation."""
        cid, xy = self.locate(self.pending)
        neighbours = sorted((o.name, c) for o, c in self.neighbor_labels().items())
        raw = json.dumps([cid, xy.to_list(), neighbours])
        return hashlib.sha256(raw.encode("utf-8")).hexdigest()[:16]

    def absolute(self, name: Optional[int] = None) -> GridCoord:
        """
        Coordinates of a node in its group's root frame (oracle backdoor only).

        Raises:
            ProtocolError: If the backdoor is disabled
        """
        if not self._state.params.backdoor:
            raise ProtocolError("absolute coordinates are hidden from the algorithm")
        group, q = self._state._node_at[self.pending if name is None else name]
        origin = self._state.fragments[group].absolute_origin
        return q if origin is None else q + origin


class GameState:
    """Mutable state of one match."""

    def __init__(self, params: GameParams, seed: Optional[int] = None):
        self.params = params
        self.rng_seed = seed
        self.fragments: Dict[int, Fragment] = {}
        self._groups: Dict[int, _Group] = {}
        self._node_at: List[Tuple[int, GridCoord]] = []
        self._reveal_frame: List[Tuple[int, GridCoord]] = []
        self._comp_parent: List[int] = []
        self._comp_origin: Dict[int, GridCoord] = {}
        self._comp_group: Dict[int, int] = {}
        self.pending: Optional[int] = None
        self.spent = 0
        self.improper: List[Tuple[int, int]] = []
        self.events: List[Dict[str, Any]] = []

    # fragments and frames

    def new_fragment(self, extent: Iterable[GridCoord], absolute_origin: Optional[GridCoord] = None) -> int:
        fid = len(self.fragments)
        frag = Fragment.create(fid, extent, self.params.T, absolute_origin)
        self.fragments[fid] = frag
        self._groups[fid] = _Group(fid)
        self.events.append({"ev": "fragment", "id": fid, "box": frag.reservation.to_list()})
        return fid

    def root_of(self, fid: int) -> Tuple[int, GridCoord]:
        """Root fragment of fid's group and the offset of fid's frame inside it."""
        offset = GridCoord(0, 0)
        frag = self.fragments[fid]
        while frag.parent is not None:
            offset = offset + frag.committed_offset
            frag = self.fragments[frag.parent]
        return frag.id, offset

    def to_root(self, fid: int, p: GridCoord) -> Tuple[int, GridCoord]:
        root, offset = self.root_of(fid)
        return root, p + offset

    def same_group(self, fa: int, fb: int) -> bool:
        return self.root_of(fa)[0] == self.root_of(fb)[0]

    def parity_conflict(self, fa: int, fb: int, offset: GridCoord) -> bool:
        """
        Whether placing fb at offset in fa's frame moves fb's nodes to host coordinates
        of the other parity than the algorithm was shown.

        Only games with the backdoor show coordinates; elsewhere this is always False.

        Args:
            fa (int): Host fragment
            fb (int): Uncommitted fragment to place
            offset (GridCoord): Position of fb's origin in fa's frame

        Returns:
            bool: True when the placement would contradict the shown parity
        """
        if not self.params.backdoor:
            return False
        root_a, off_a = self.root_of(fa)
        origin_a = self.fragments[root_a].absolute_origin or GridCoord(0, 0)
        origin_b = self.fragments[fb].absolute_origin or GridCoord(0, 0)
        moved = offset + off_a + origin_a - origin_b
        return (moved.x + moved.y) % 2 == 1

    def reserve(self, fid: int, points: Iterable[GridCoord]) -> None:
        """Grow the reservation of fid's group to cover points (in fid's frame) with margin T."""
        root, offset = self.root_of(fid)
        box = Box.around(p + offset for p in points).expand(self.params.T)
        frag = self.fragments[root]
        frag.reservation = frag.reservation.hull(box)
        self.events.append({"ev": "reserve", "frag": root, "box": frag.reservation.to_list()})

    # adversary-side queries (full knowledge)

    def label_of(self, fid: int, p: GridCoord) -> Optional[int]:
        """Label at p, or None while p is hidden."""
        root, q = self.to_root(fid, p)
        return self._groups[root].labels.get(q)

    def is_revealed(self, fid: int, p: GridCoord) -> bool:
        root, q = self.to_root(fid, p)
        return q in self._groups[root].names

    def labels_in(self, fid: int) -> Dict[GridCoord, int]:
        """All labels of fid's group, keyed by coordinates in fid's frame."""
        root, offset = self.root_of(fid)
        return {q - offset: c for q, c in self._groups[root].labels.items()}

    def revealed_in(self, fid: int) -> Set[GridCoord]:
        root, offset = self.root_of(fid)
        return {q - offset for q in self._groups[root].names}

    # components

    def _find(self, c: int) -> int:
        while self._comp_parent[c] != c:
            self._comp_parent[c] = self._comp_parent[self._comp_parent[c]]
            c = self._comp_parent[c]
        return c

    def _new_component(self, group: int, origin: GridCoord) -> int:
        cid = len(self._comp_parent)
        self._comp_parent.append(cid)
        self._comp_origin[cid] = origin
        self._comp_group[cid] = group
        self._groups[group].comps.add(cid)
        return cid

    def _union(self, comps: Set[int]) -> int:
        oldest = min(comps)
        for c in comps:
            if c != oldest:
                self._comp_parent[c] = oldest
                self._groups[self._comp_group[c]].comps.discard(c)
        return oldest

    def _live_components(self) -> List[int]:
        return sorted(c for g in self._groups.values() for c in g.comps)

    def _locate(self, name: int) -> Tuple[int, GridCoord]:
        group, q = self._node_at[name]
        cid = self._find(self._groups[group].visible[q])
        return cid, q - self._comp_origin[cid]

    def _component_cell(self, component: int, xy: GridCoord) -> Tuple[Optional[_Group], GridCoord]:
        cid = self._find(component)
        group = self._groups[self._comp_group[cid]]
        q = xy + self._comp_origin[cid]
        comp = group.visible.get(q)
        if comp is None or self._find(comp) != cid:
            return None, q
        return group, q

    def _component_cells(self, component: int) -> List[GridCoord]:
        cid = self._find(component)
        group = self._groups[self._comp_group[cid]]
        origin = self._comp_origin[cid]
        return sorted(q - origin for q, c in group.visible.items() if self._find(c) == cid)

    # turns

    def reveal(self, fid: int, node: GridCoord) -> View:
        """
        Reveal a node of a fragment and materialize its ball.

        Args:
            fid (int): Fragment whose frame node is given in
            node (GridCoord): Node to reveal

        Returns:
            View: The algorithm-facing view; the algorithm must now label the node

        Raises:
            ProtocolError: If a label is pending or the node was revealed before
            DomainError: If the node is outside the group's reservation
            BudgetExhausted: If the new ball cells exceed the budget
        """
        if self.pending is not None:
            raise ProtocolError(f"node {self.pending} must be labeled before the next reveal")
        root, q = self.to_root(fid, node)
        group = self._groups[root]
        if q in group.names:
            raise ProtocolError(f"node {node} of fragment {fid} was already revealed")
        cells = ball(self.fragments[root], q, self.params.T, self.params.grid_side)
        if q not in cells:
            raise DomainError(f"{node} is outside the host grid")
        new = sorted(c for c in cells if c not in group.visible)
        if self.spent + len(new) > self.params.n_budget:
            raise BudgetExhausted(self.spent, len(new), self.params.n_budget)

        touched = {self._find(group.visible[c]) for c in cells if c in group.visible}
        for c in new:
            for n in c.neighbors():
                if n in group.visible:
                    touched.add(self._find(group.visible[n]))
        cid = self._union(touched) if touched else self._new_component(root, new[0])
        for c in new:
            group.visible[c] = cid
        self.spent += len(new)

        name = len(self._node_at)
        self._node_at.append((root, q))
        self._reveal_frame.append((fid, node))
        group.names[q] = name
        self.pending = name
        view = View(self, name)
        self.events.append({"ev": "reveal", "n": name, "frag": fid, "xy": node.to_list(),
                            "new": len(new), "vd": view.digest()})
        return view

    def submit_label(self, name: int, color: int) -> List[Tuple[int, int]]:
        """
        Record the label of the pending node.

        Returns:
            List[Tuple[int, int]]: Improper edges created by this label (name pairs)

        Raises:
            ProtocolError: If name is not the pending node
            DomainError: If color is not 1, 2 or 3
        """
        if self.pending is None or name != self.pending:
            raise ProtocolError(f"node {name} is not pending (pending: {self.pending})")
        c = int(Color.parse(color))
        root, q = self._node_at[name]
        group = self._groups[root]
        group.labels[q] = c
        self.pending = None
        fid, xy = self._reveal_frame[name]
        self.events.append({"ev": "label", "n": name, "frag": fid, "xy": xy.to_list(), "c": c})
        created = []
        for n in q.neighbors():
            if group.labels.get(n) == c:
                edge = (group.names[n], name)
                created.append(edge)
                self.improper.append(edge)
        return created

    # placement

    def separation_violation(self, fa: int, fb: int, offset: GridCoord) -> Optional[Tuple[int, int]]:
        """Pair of revealed nodes (names) that committing fb at offset in fa's frame would bring within 2T+1."""
        root_a, off_a = self.root_of(fa)
        root_b, off_b = self.root_of(fb)
        shift = offset + off_a - off_b
        names_a = self._groups[root_a].names
        names_b = self._groups[root_b].names
        reach = 2 * self.params.T + 1
        if len(names_b) <= len(names_a):
            smaller, target, delta = names_b, names_a, shift
        else:
            smaller, target, delta = names_a, names_b, -shift
        for q, name in smaller.items():
            moved = q + delta
            for c in ball_cells(moved, reach):
                if c in target:
                    return (name, target[c])
        return None

    def commit_placement(self, fa: int, fb: int, offset: GridCoord) -> None:
        """
        Place fragment fb (and its whole group) at offset inside fa's frame.

        Raises:
            DomainError: If fb was already committed or both are in one group
            ConstructionError: If revealed nodes of the two groups would come within 2T+1,
                the merged group no longer fits the host grid, or (backdoor games only)
                the placement flips the coordinate parity the algorithm was shown
        """
        frag_b = self.fragments[fb]
        if frag_b.committed:
            raise DomainError(f"fragment {fb} is already committed")
        if self.same_group(fa, fb):
            raise DomainError(f"fragments {fa} and {fb} are already in one group")
        clash = self.separation_violation(fa, fb, offset)
        if clash is not None:
            raise ConstructionError(f"commit of {fb} into {fa} at {offset} brings nodes {clash} within 2T+1")
        if self.parity_conflict(fa, fb, offset):
            raise ConstructionError(f"commit of {fb} into {fa} at {offset} flips the parity the algorithm was shown")
        root_a, off_a = self.root_of(fa)
        shift = offset + off_a
        frag_a = self.fragments[root_a]
        hull = frag_a.reservation.hull(frag_b.reservation.translate(shift))
        if max(hull.width, hull.height) > self.params.grid_side:
            raise ConstructionError(f"merged group {hull} does not fit a {self.params.grid_side} grid")

        frag_b.commit(fa, offset)
        frag_a.reservation = hull
        ga, gb = self._groups[root_a], self._groups.pop(fb)
        for q, comp in gb.visible.items():
            ga.visible[q + shift] = comp
        for q, name in gb.names.items():
            ga.names[q + shift] = name
            self._node_at[name] = (root_a, q + shift)
        for q, c in gb.labels.items():
            ga.labels[q + shift] = c
        for cid in gb.comps:
            self._comp_origin[cid] = self._comp_origin[cid] + shift
            self._comp_group[cid] = root_a
            ga.comps.add(cid)
        self.events.append({"ev": "commit", "a": fa, "b": fb, "off": offset.to_list()})
        logger.info(f"committed fragment {fb} into {fa} at {offset}")

    # checking

    def scan_improper(self) -> List[Tuple[int, int]]:
        """All improper edges between labeled nodes, as name pairs."""
        return list(self.improper)

    def rescan_improper(self) -> List[Tuple[int, int]]:
        """Full recomputation of scan_improper from the stored labels."""
        edges = []
        for group in self._groups.values():
            for q, c in group.labels.items():
                for d in (GridCoord(1, 0), GridCoord(0, 1)):
                    if group.labels.get(q + d) == c:
                        edges.append(tuple(sorted((group.names[q], group.names[q + d]))))
        return sorted(edges)

    def node(self, name: int) -> Tuple[int, GridCoord]:
        """Root fragment and root-frame coordinates of a revealed node."""
        return self._node_at[name]

    def improper_certificate(self, edge: Tuple[int, int]) -> Certificate:
        (root, qu), (_, qv) = self._node_at[edge[0]], self._node_at[edge[1]]
        c = self._groups[root].labels[qu]
        return Certificate(CertificateKind.IMPROPER_EDGE, fragment=root, nodes=(qu, qv), colors=(c, c))

    def visible_count(self) -> int:
        return sum(len(g.visible) for g in self._groups.values())


class AlgorithmInterface(Protocol):
    """An online-LOCAL coloring algorithm."""

    name: str
    randomized: bool

    def label(self, view: View, pending: int, randomness: Optional[RandomBits]) -> int:
        ...


class Referee:
    """Drives the reveal/label turns of one match on behalf of a strategy."""

    def __init__(self, state: GameState, algorithm: AlgorithmInterface, seed: int = 0):
        self.state = state
        self.algorithm = algorithm
        self.seed = seed

    @property
    def T(self) -> int:
        return self.state.params.T

    def new_fragment(self, extent: Iterable[GridCoord]) -> int:
        """
        Open a fresh hidden fragment.

        Args:
            extent (Iterable[GridCoord]): Cells the fragment may ever reveal, in local coordinates

        Returns:
            int: The fragment id
        """
        return self.state.new_fragment(extent)

    def reveal(self, fid: int, node: GridCoord) -> int:
        """
        Reveal a node and have the algorithm label it.

        Returns:
            int: The color chosen by the algorithm

        Raises:
            ImproperEdgeFound: As soon as the label creates an improper edge
        """
        view = self.state.reveal(fid, node)
        randomness = RandomBits(self.seed, view.pending) if self.algorithm.randomized else None
        color = self.algorithm.label(view, view.pending, randomness)
        created = self.state.submit_label(view.pending, color)
        if created:
            raise ImproperEdgeFound(self.state.improper_certificate(created[0]))
        return int(color)

    def reveal_all(self, fid: int, nodes: Iterable[GridCoord]) -> None:
        """Reveal, in order, every node not yet revealed."""
        for p in nodes:
            if not self.state.is_revealed(fid, p):
                self.reveal(fid, p)

    def commit(self, fa: int, fb: int, offset: GridCoord) -> None:
        """
        Place fragment fb at offset in the frame of fa.

        Raises:
            ConstructionError: If the placement breaks separation or, with public
                coordinates, flips the parity shown to the algorithm
        """
        self.state.commit_placement(fa, fb, offset)

    def reserve(self, fid: int, points: Iterable[GridCoord]) -> None:
        """Mark cells of a fragment as spoken for by a later reveal."""
        self.state.reserve(fid, points)

    def parity_conflict(self, fa: int, fb: int, offset: GridCoord) -> bool:
        return self.state.parity_conflict(fa, fb, offset)

    def remaining(self) -> int:
        """Nodes that can still be revealed before the budget runs out."""
        return self.state.params.n_budget - self.state.spent

    def note(self, event: Dict[str, Any]) -> None:
        """Append a strategy-side event (artifact summaries) to the transcript."""
        self.state.events.append(event)

    def labels(self, fid: int) -> Dict[GridCoord, int]:
        """
        Labels revealed so far in the fragment (and any fragment placed with it).

        Args:
            fid (int): Fragment id

        Returns:
            Dict[GridCoord, int]: Label per cell, in the coordinates of fid
        """
        return self.state.labels_in(fid)

    def label_of(self, fid: int, p: GridCoord) -> Optional[int]:
        return self.state.label_of(fid, p)


Strategy = Callable[[Referee], Certificate]


def run_match(algorithm: AlgorithmInterface, strategy: Strategy, params: GameParams, seed: int = 0,
              header: Optional[Dict[str, Any]] = None) -> Tuple[Certificate, Transcript]:
    """
    Play one match to the end.

    Args:
        algorithm (AlgorithmInterface): The coloring algorithm
        strategy (Strategy): Adversary; returns a certificate or raises ImproperEdgeFound
        params (GameParams): Referee parameters
        seed (int): Seed of the algorithm's bit stream
        header (Optional[Dict[str, Any]]): Extra header fields (config echo, regime)

    Returns:
        Tuple[Certificate, Transcript]: The outcome and the full transcript
    """
    state = GameState(params, seed)
    referee = Referee(state, algorithm, seed)
    head = {"ev": "header", "params": params.to_dict(), "seed": seed, "algorithm": algorithm.name}
    head.update(header or {})
    try:
        cert = strategy(referee)
    except ImproperEdgeFound as found:
        cert = found.certificate
    except BudgetExhausted as exhausted:
        logger.warning(f"match ended: {exhausted}")
        cert = Certificate(CertificateKind.BUDGET_EXHAUSTED, detail=str(exhausted))
    except BoostStalled as stalled:
        cert = Certificate.survived(detail=str(stalled))
    except (ProtocolError, DomainError) as err:
        state.events.append({"ev": "error", "detail": str(err)})
        logger.error(f"match aborted by protocol violation: {err}")
        raise
    state.events.append(cert.to_dict())
    head["spent"] = state.spent
    logger.info(f"match finished: {cert.kind.value} after {state.spent} nodes")
    return cert, Transcript(head, tuple(state.events))
