import itertools
import random
from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from src.errors import DomainError
from src.gridCore import ORIGIN, GridCoord, Path, diagonal_path, thread_walk
from src.potential import (
    Color,
    ColoredWalk,
    check_closed_walk,
    edge_potential,
    fit_ledger_constant,
    is_proper_sequence,
    ivt_witness,
    max_potential_bound,
    max_potential_oracle,
    mvt_witness,
    parity_indicator,
    parity_predict,
    potential_profile,
    sequence_potential,
    walk_potential,
    window_scan,
)


def row(n):
    return Path(tuple(GridCoord(x, 0) for x in range(n)))


def square_cycle():
    nodes = (ORIGIN, GridCoord(1, 0), GridCoord(1, 1), GridCoord(0, 1), ORIGIN)
    return Path(nodes, closed=True)


def proper_colorings(n):
    for colors in itertools.product((1, 2, 3), repeat=n):
        if is_proper_sequence(colors):
            yield colors


@pytest.mark.parametrize("cu, cv, p", [(2, 1, 1), (1, 3, 0), (1, 2, -1), (3, 3, 0), (2, 2, 0)])
def test_edge_potential(cu, cv, p):
    assert edge_potential(cu, cv) == p


def test_color_parse():
    assert Color.parse(3) == Color.THREE
    with pytest.raises(DomainError):
        Color.parse(4)


@pytest.mark.parametrize("colors, p", [((1, 2, 3, 2, 1), 0), ((2,), 0), ((2, 1, 2, 1), 1)])
def test_walk_potential(colors, p):
    assert walk_potential(ColoredWalk(row(len(colors)), colors)) == p


def test_colored_walk_needs_one_color_per_node():
    with pytest.raises(DomainError):
        ColoredWalk(row(3), (1, 2))


def test_from_labels_missing_color():
    with pytest.raises(DomainError):
        ColoredWalk.from_labels(row(3), {GridCoord(0, 0): 1, GridCoord(1, 0): 2})


class TestClosedWalk:
    @pytest.mark.parametrize("colors", [(1, 2, 1, 3, 1), (1, 2, 1, 2, 1)])
    def test_proper_four_cycles_hold(self, colors):
        verdict = check_closed_walk(ColoredWalk(square_cycle(), colors))
        assert verdict.holds and verdict.potential == 0 and verdict.kind == "holds"

    def test_improper_cycle_holds_vacuously(self):
        verdict = check_closed_walk(ColoredWalk(square_cycle(), (1, 1, 2, 3, 1)))
        assert verdict.holds and verdict.improper
        assert verdict.kind == "holds_vacuously"

    def test_open_walk_rejected(self):
        with pytest.raises(DomainError):
            check_closed_walk(ColoredWalk(row(3), (1, 2, 1)))

    @pytest.mark.slow
    def test_all_short_closed_walks_in_small_grid(self):
        """Test the law on every closed walk of length <= 8 in a 4x4 grid under every proper coloring."""
        cells = [GridCoord(x, y) for x in range(4) for y in range(4)]
        walks = []

        def extend(walk):
            if len(walk) > 1 and walk[-1] == walk[0]:
                walks.append(tuple(walk))
            if len(walk) == 9:
                return
            for n in walk[-1].neighbors():
                if 0 <= n.x < 4 and 0 <= n.y < 4:
                    extend(walk + [n])

        extend([ORIGIN])
        # walks with the same net use of every edge have the same potential
        net_uses = {}
        for nodes in walks:
            net = Counter()
            for a, b in zip(nodes, nodes[1:]):
                net[(a, b)] += 1
                net[(b, a)] -= 1
            net_uses.setdefault(frozenset((e, n) for e, n in net.items() if n), nodes)
        colorings = [dict(zip(cells, cs)) for cs in _grid_colorings(4)]
        assert len(colorings) == 7812
        for nodes in net_uses.values():
            closed = Path(nodes, closed=True)
            for coloring in colorings:
                verdict = check_closed_walk(ColoredWalk.from_labels(closed, coloring))
                assert verdict.potential == 0


def _grid_colorings(side, limit=None):
    """Proper 3-colorings of a side x side grid, in row-major backtracking order."""
    cells = [(x, y) for y in range(side) for x in range(side)]
    found = []

    def fill(i, colors):
        if limit is not None and len(found) >= limit:
            return
        if i == len(cells):
            found.append([colors[c] for c in sorted(colors, key=lambda c: (c[0], c[1]))])
            return
        x, y = cells[i]
        for c in (1, 2, 3):
            if colors.get((x - 1, y)) == c or colors.get((x, y - 1)) == c:
                continue
            colors[(x, y)] = c
            fill(i + 1, colors)
            del colors[(x, y)]

    fill(0, {})
    return found


class TestParity:
    @pytest.mark.parametrize("cu, cv, length, bit", [(1, 2, 3, 1), (3, 3, 2, 0), (1, 1, 2, 0)])
    def test_examples(self, cu, cv, length, bit):
        assert parity_predict(cu, cv, length) == bit

    def test_witnesses(self):
        assert sequence_potential([1, 3, 1, 2]) == -1
        assert sequence_potential([1, 2, 1]) == 0

    def test_negative_length(self):
        with pytest.raises(DomainError):
            parity_predict(1, 2, -1)

    @pytest.mark.slow
    def test_exhaustive_paths(self):
        """Test the parity law on all proper colorings of paths with up to 10 nodes."""
        for n in range(1, 11):
            for colors in proper_colorings(n):
                p = sequence_potential(colors)
                assert p % 2 == parity_predict(colors[0], colors[-1], n - 1)

    def test_indicator(self):
        assert [parity_indicator(c) for c in (1, 2, 3)] == [0, 0, 1]


class TestUpperBound:
    def test_bound_examples(self):
        assert max_potential_bound(0, 1) == 1
        assert max_potential_bound(3, 1) == 2
        assert max_potential_bound(12, 1) == 5

    def test_oracle_small_lengths(self):
        oracle = max_potential_oracle(12)
        assert oracle[0] == 0
        assert oracle[3] == 1
        assert oracle[4] == 2
        assert oracle[12] <= 5

    def test_oracle_matches_brute_force(self):
        oracle = max_potential_oracle(8)
        for n in range(1, 10):
            best = max(abs(sequence_potential(cs)) for cs in proper_colorings(n))
            assert oracle[n - 1] == best

    def test_ledger_constant(self):
        c = fit_ledger_constant(30)
        assert c == 1
        oracle = max_potential_oracle(30)
        assert all(m <= max_potential_bound(length, c) for length, m in enumerate(oracle))
        assert any(m > max_potential_bound(length, c - 1) for length, m in enumerate(oracle))

    def test_negative_arguments(self):
        with pytest.raises(DomainError):
            max_potential_bound(-1, 1)


class TestIVT:
    @pytest.mark.parametrize("f, k, x", [([0], 1, 0), ([3, 1, -2], 2, 1), ([5, 3, 1, -1], 2, 2)])
    def test_examples(self, f, k, x):
        assert ivt_witness(f, k) == x

    def test_step_too_large(self):
        with pytest.raises(DomainError):
            ivt_witness([5, 0], 2)

    def test_boundary_conditions(self):
        with pytest.raises(DomainError):
            ivt_witness([-1, 0], 2)

    @pytest.mark.slow
    def test_random_sequences(self):
        rng = random.Random(7)
        for _ in range(10000):
            k = rng.randint(1, 4)
            f = [rng.randint(0, 20)]
            while f[-1] > 0 or len(f) < 2:
                f.append(f[-1] + rng.randint(-k, k // 2))
            x = ivt_witness(f, k)
            assert abs(f[x]) <= k
            assert all(abs(v) > k for v in f[:x])


class TestMVT:
    def test_zero_sequence(self):
        assert mvt_witness([0] * 10, 2, 1) == 0

    def test_example(self):
        f = [0, 1, 2, 1, 0, 0, 0, 0, 0, 0]
        assert mvt_witness(f, 2, 1) == 0

    def test_step_bound_violated(self):
        with pytest.raises(DomainError):
            mvt_witness([0, 2, 4, 2, 0, 0, 0, 0, 0, 0], 2, 1)

    def test_window_too_long(self):
        with pytest.raises(DomainError):
            mvt_witness([0] * 10, 3, 1)

    def test_nonzero_boundary(self):
        with pytest.raises(DomainError):
            mvt_witness([1, 0, 0, 0, 0, 0, 0, 0, 0, 0], 2, 1)

    @pytest.mark.slow
    def test_random_sequences_match_scan(self):
        rng = random.Random(11)
        for _ in range(10000):
            k = rng.randint(1, 3)
            b = rng.randint(5, 60)
            steps = [rng.randint(-k, k) for _ in range(b)]
            total = sum(steps)
            while total != 0:
                i = rng.randrange(b)
                if total > 0 and steps[i] > -k:
                    steps[i] -= 1
                    total -= 1
                elif total < 0 and steps[i] < k:
                    steps[i] += 1
                    total += 1
            f = list(itertools.accumulate([0] + steps))
            ell = rng.randint(1, int((b - 1) ** 0.5))
            x = mvt_witness(f, ell, k)
            assert abs(f[x + ell] - f[x]) <= 2 * k
            assert x == window_scan(f, ell, 2 * k)


class TestProfile:
    def test_all_threes(self):
        diag = diagonal_path(ORIGIN, GridCoord(4, 2))
        walk, _ = thread_walk(diag)
        prof = potential_profile(diag, {p: 3 for p in walk.nodes})
        assert prof.f == (0, 0, 0, 0, 0)
        assert prof.span == 4

    def test_alternating_flat(self):
        diag = diagonal_path(ORIGIN, GridCoord(4, 0))
        colors = {GridCoord(x, 0): (2 if x % 2 == 0 else 1) for x in range(5)}
        assert potential_profile(diag, colors).f == (0, 1, 0, 1, 0)

    def test_three_nodes(self):
        diag = diagonal_path(ORIGIN, GridCoord(2, 0))
        colors = {GridCoord(0, 0): 1, GridCoord(1, 0): 2, GridCoord(2, 0): 3}
        assert potential_profile(diag, colors).f == (0, -1, -1)

    def test_missing_color(self):
        diag = diagonal_path(ORIGIN, GridCoord(2, 0))
        with pytest.raises(DomainError):
            potential_profile(diag, {ORIGIN: 1})

    @settings(max_examples=100)
    @given(st.integers(1, 12), st.integers(0, 12), st.integers(0, 2 ** 30))
    def test_steps_bounded_by_two(self, dx, dy, seed):
        dy = min(dy, dx)
        diag = diagonal_path(ORIGIN, GridCoord(dx, dy))
        walk, _ = thread_walk(diag)
        rng = random.Random(seed)
        colors = [rng.choice((1, 2, 3))]
        for _ in walk.nodes[1:]:
            colors.append(rng.choice([c for c in (1, 2, 3) if c != colors[-1]]))
        prof = potential_profile(diag, dict(zip(walk.nodes, colors)))
        assert all(abs(b - a) <= 2 for a, b in zip(prof.f, prof.f[1:]))
