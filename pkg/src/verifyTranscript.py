"""
Independent re-check of match transcripts.

The verifier rebuilds fragment placements, visible cells and labels from the
event log alone and re-validates turn order, commit separation, budget
accounting and the final certificate. It shares nothing with the referee or the
strategies except the potential arithmetic.
"""
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Set, Tuple

from .potential import is_proper_sequence, sequence_potential

logger = logging.getLogger(__name__)

Cell = Tuple[int, int]

REQUIRED = {
    "fragment": ("id", "box"),
    "reserve": ("frag", "box"),
    "reveal": ("n", "frag", "xy", "new"),
    "label": ("n", "frag", "c"),
    "commit": ("a", "b", "off"),
}


def _l1(a: Cell, b: Cell) -> int:
    return abs(a[0] - b[0]) + abs(a[1] - b[1])


def _add(a: Cell, b: Cell) -> Cell:
    return (a[0] + b[0], a[1] + b[1])


class _Group:
    def __init__(self, box: List[int]):
        self.box = list(box)
        self.visible: Set[Cell] = set()
        self.names: Dict[Cell, int] = {}
        self.labels: Dict[Cell, int] = {}


class TranscriptVerifier:
    """Class to validate a transcript against the rules of the game."""

    def __init__(self, header: Dict[str, Any], events: List[Dict[str, Any]]):
        """
        Args:
            header (Dict[str, Any]): First JSON line of the transcript
            events (List[Dict[str, Any]]): The remaining lines, in order
        """
        self.header = header
        self.events = events
        params = header.get("params", {})
        self.T = params.get("T")
        self.n_budget = params.get("n_budget")
        self.backdoor = params.get("backdoor", False)
        self.parent: Dict[int, Optional[int]] = {}
        self.offset: Dict[int, Cell] = {}
        self.groups: Dict[int, _Group] = {}
        self.reveals: Dict[int, Tuple[int, Cell]] = {}
        self.spent = 0

    @classmethod
    def from_file(cls, path: Path) -> "TranscriptVerifier":
        """
        Raises:
            FileNotFoundError: If the transcript does not exist
            json.JSONDecodeError: If a line is not valid JSON
        """
        with open(path, "r", encoding="utf-8") as f:
            rows = [json.loads(line) for line in f if line.strip()]
        if not rows:
            raise ValueError(f"transcript {path} is empty")
        return cls(rows[0], rows[1:])

    def _root(self, fid: int) -> Tuple[int, Cell]:
        off = (0, 0)
        while self.parent.get(fid) is not None:
            off = _add(off, self.offset[fid])
            fid = self.parent[fid]
        return fid, off

    def _in_box(self, box: List[int], c: Cell) -> bool:
        return box[0] <= c[0] <= box[2] and box[1] <= c[1] <= box[3]

    def _ball(self, center: Cell, radius: int) -> List[Cell]:
        return [
            (center[0] + dx, center[1] + dy)
            for dx in range(-radius, radius + 1)
            for dy in range(-(radius - abs(dx)), radius - abs(dx) + 1)
        ]

    def _improper_at(self, group: _Group, q: Cell) -> Optional[Cell]:
        c = group.labels[q]
        for d in ((1, 0), (-1, 0), (0, 1), (0, -1)):
            n = _add(q, d)
            if group.labels.get(n) == c:
                return n
        return None

    def validate_header(self) -> List[str]:
        errors = []
        if self.header.get("ev") != "header":
            errors.append("line 1 is not a header")
        if not isinstance(self.T, int) or self.T < 0:
            errors.append(f"header has no valid T: {self.T!r}")
        if not isinstance(self.n_budget, int) or self.n_budget <= 0:
            errors.append(f"header has no valid budget: {self.n_budget!r}")
        return errors

    def validate_events(self) -> Tuple[bool, List[str]]:
        """
        Replay the event log and collect every rule violation.

        Returns:
            Tuple[bool, List[str]]: (is_valid, list_of_errors); errors name the event index
        """
        errors = self.validate_header()
        if errors:
            return False, errors
        pending: Optional[int] = None
        improper_seen: Optional[int] = None
        certificate: Optional[Tuple[int, Dict[str, Any]]] = None

        for i, ev in enumerate(self.events):
            kind = ev.get("ev")
            if certificate is not None:
                errors.append(f"event {i}: event after the certificate")
                break
            if improper_seen is not None and kind in ("reveal", "commit"):
                errors.append(f"event {i}: match continued after the improper edge of event {improper_seen}")
            missing = [key for key in REQUIRED.get(kind, ()) if key not in ev]
            if missing:
                errors.append(f"event {i}: {kind} event lacks {', '.join(missing)}")
                continue

            if kind == "fragment":
                fid = ev["id"]
                if fid in self.parent:
                    errors.append(f"event {i}: fragment {fid} created twice")
                self.parent[fid] = None
                self.groups[fid] = _Group(ev["box"])
            elif kind == "reserve":
                root = ev["frag"]
                if root not in self.groups:
                    errors.append(f"event {i}: reservation for unknown group {root}")
                else:
                    self.groups[root].box = list(ev["box"])
            elif kind == "reveal":
                errors.extend(self._check_reveal(i, ev, pending))
                pending = ev["n"]
            elif kind == "label":
                if pending is None or ev["n"] != pending:
                    errors.append(f"event {i}: label for node {ev['n']} but pending node is {pending}")
                    continue
                pending = None
                if ev["c"] not in (1, 2, 3):
                    errors.append(f"event {i}: color {ev['c']} is not 1, 2 or 3")
                    continue
                if ev["n"] not in self.reveals:
                    errors.append(f"event {i}: label for node {ev['n']} that was never revealed")
                    continue
                frag, xy = self.reveals[ev["n"]]
                if ev.get("frag") != frag or tuple(ev.get("xy", xy)) != xy:
                    errors.append(f"event {i}: label position differs from the reveal of node {ev['n']}")
                root, off = self._root(frag)
                group = self.groups[root]
                q = _add(xy, off)
                group.labels[q] = ev["c"]
                if self._improper_at(group, q) is not None and improper_seen is None:
                    improper_seen = i
            elif kind == "commit":
                errors.extend(self._check_commit(i, ev))
            elif kind == "cert":
                certificate = (i, ev)
            elif kind == "error":
                errors.append(f"event {i}: match aborted: {ev.get('detail')}")
            elif kind != "artifact":
                errors.append(f"event {i}: unknown event type {kind!r}")

        if pending is not None:
            errors.append(f"node {pending} was revealed but never labeled")
        if self.spent > self.n_budget:
            errors.append(f"{self.spent} visible cells exceed the budget {self.n_budget}")
        if "spent" in self.header and self.header["spent"] != self.spent:
            errors.append(f"header reports {self.header['spent']} cells spent, events add up to {self.spent}")
        if certificate is None:
            errors.append("transcript has no certificate")
        else:
            errors.extend(self._check_certificate(*certificate, improper_seen))
        return len(errors) == 0, errors

    def _check_reveal(self, i: int, ev: Dict[str, Any], pending: Optional[int]) -> List[str]:
        errors = []
        if pending is not None:
            errors.append(f"event {i}: reveal while node {pending} is still unlabeled")
        if ev["n"] != len(self.reveals):
            errors.append(f"event {i}: node name {ev['n']} out of sequence")
        frag, xy = ev["frag"], tuple(ev["xy"])
        if frag not in self.parent:
            errors.append(f"event {i}: reveal in unknown fragment {frag}")
            return errors
        self.reveals[ev["n"]] = (frag, xy)
        root, off = self._root(frag)
        group = self.groups[root]
        q = _add(xy, off)
        if q in group.names:
            errors.append(f"event {i}: node {xy} of fragment {frag} revealed twice")
        if not self._in_box(group.box, q):
            errors.append(f"event {i}: node {xy} outside the reservation of fragment {frag}")
        group.names[q] = ev["n"]
        new = [c for c in self._ball(q, self.T) if self._in_box(group.box, c) and c not in group.visible]
        group.visible.update(new)
        self.spent += len(new)
        if ev.get("new") != len(new):
            errors.append(f"event {i}: reveal charged {ev.get('new')} cells, ball adds {len(new)}")
        return errors

    def _check_commit(self, i: int, ev: Dict[str, Any]) -> List[str]:
        errors = []
        a, b, off = ev["a"], ev["b"], tuple(ev["off"])
        if self.parent.get(b, "missing") is not None:
            errors.append(f"event {i}: fragment {b} is unknown or already committed")
            return errors
        root_a, off_a = self._root(a)
        if root_a == b:
            errors.append(f"event {i}: fragments {a} and {b} already share a group")
            return errors
        shift = _add(off, off_a)
        ga, gb = self.groups[root_a], self.groups.pop(b)
        reach = 2 * self.T + 1
        for q in gb.names:
            moved = _add(q, shift)
            for c in self._ball(moved, reach):
                if c in ga.names:
                    errors.append(f"event {i}: commit brings {moved} within {_l1(moved, c)} of revealed {c}")
                    break
            else:
                continue
            break
        if self.backdoor and (shift[0] + shift[1]) % 2 == 1:
            errors.append(f"event {i}: commit at odd parity {shift} in a game with public coordinates")
        for q in gb.visible:
            ga.visible.add(_add(q, shift))
        for q, name in gb.names.items():
            ga.names[_add(q, shift)] = name
        for q, c in gb.labels.items():
            ga.labels[_add(q, shift)] = c
        x0, y0, x1, y1 = gb.box
        ga.box = [min(ga.box[0], x0 + shift[0]), min(ga.box[1], y0 + shift[1]),
                  max(ga.box[2], x1 + shift[0]), max(ga.box[3], y1 + shift[1])]
        self.parent[b] = a
        self.offset[b] = off
        return errors

    def _check_certificate(self, i: int, ev: Dict[str, Any], improper_seen: Optional[int]) -> List[str]:
        kind = ev.get("kind")
        walk = [tuple(xy) for xy in ev.get("walk", [])]
        colors = ev.get("colors", [])
        if kind in ("survived", "budget_exhausted"):
            if improper_seen is not None:
                return [f"event {i}: outcome {kind} although event {improper_seen} created an improper edge"]
            return []
        root = ev.get("frag")
        if root not in self.groups:
            return [f"event {i}: certificate refers to group {root}, which is not a group root"]
        group = self.groups[root]
        errors = []
        for node, c in zip(walk, colors):
            if group.labels.get(node) != c:
                errors.append(f"event {i}: certificate node {node} has color {group.labels.get(node)}, not {c}")
        if len(walk) != len(colors):
            errors.append(f"event {i}: {len(walk)} nodes but {len(colors)} colors")
        if kind == "improper_edge":
            if len(walk) != 2 or _l1(walk[0], walk[1]) != 1:
                errors.append(f"event {i}: improper edge endpoints {walk} are not adjacent")
            elif len(set(colors)) != 1:
                errors.append(f"event {i}: improper edge endpoints have different colors {colors}")
        elif kind == "potential_violation":
            if len(walk) < 2 or walk[0] != walk[-1]:
                errors.append(f"event {i}: certificate walk is not closed")
            if any(_l1(p, q) != 1 for p, q in zip(walk, walk[1:])):
                errors.append(f"event {i}: certificate walk leaves the grid edges")
            if not is_proper_sequence(colors):
                errors.append(f"event {i}: certificate walk is not properly colored")
            p = sequence_potential(colors)
            if p == 0 or p != ev.get("p"):
                errors.append(f"event {i}: walk potential is {p}, certificate claims {ev.get('p')}")
        else:
            errors.append(f"event {i}: unknown certificate kind {kind!r}")
        return errors


def verify_transcript(path: Path) -> Tuple[bool, List[str]]:
    """Verify a transcript file; unreadable files count as invalid."""
    try:
        verifier = TranscriptVerifier.from_file(path)
    except (OSError, ValueError) as e:
        logger.error(f"cannot read transcript {path}: {e}")
        return False, [f"cannot read transcript: {e}"]
    is_valid, errors = verifier.validate_events()
    for error in errors:
        logger.warning(error)
    return is_valid, errors


def compare_labels(recorded: List[Dict[str, Any]], replayed: List[Dict[str, Any]]) -> List[str]:
    """Name the first label event where a replay diverges from the recorded events."""
    rec = [(i, ev) for i, ev in enumerate(recorded) if ev.get("ev") == "label"]
    rep = [ev for ev in replayed if ev.get("ev") == "label"]
    for (i, ev), other in zip(rec, rep):
        if (ev["n"], ev["c"]) != (other["n"], other["c"]):
            return [f"event {i}: replay labels node {other['n']} with {other['c']}, transcript says {ev['c']}"]
    if len(rec) != len(rep):
        return [f"replay produced {len(rep)} labels, transcript has {len(rec)}"]
    return []
