import pytest
from fractions import Fraction
from hypothesis import given, settings, strategies as st

from src.errors import DomainError
from src.gridCore import (
    IDENTITY,
    ORIGIN,
    SYMMETRIES,
    TRANSPOSE,
    Box,
    Fragment,
    GridCoord,
    LPath,
    Orientation,
    Parallelogram,
    Path,
    ball,
    canonicalize,
    diagonal_path,
    enclosed_cells,
    enclosing_parallelogram,
    inner_band,
    lattice_points,
    line_rounding,
    parallelogram_contains,
    parse_slope,
    slope_recursion_widths,
    slope_width,
    straight_path,
    thread_walk,
)


@pytest.fixture
def square_fragment():
    """A 5x5 fragment with unknown absolute position."""
    return Fragment.create(0, [GridCoord(x, y) for x in range(5) for y in range(5)], T=1)


def test_ball_radius_zero(square_fragment):
    """Test that a radius-zero ball is the center alone."""
    assert ball(square_fragment, GridCoord(2, 2), 0) == {GridCoord(2, 2)}


def test_ball_radius_one(square_fragment):
    """Test that an interior radius-one ball is the L1 diamond of 5 cells."""
    cells = ball(square_fragment, GridCoord(2, 2), 1)
    assert cells == {GridCoord(2, 2), *GridCoord(2, 2).neighbors()}


def test_ball_clipped_at_grid_corner():
    """Test that a ball at host corner (1,1) keeps only the 3 cells inside the grid."""
    frag = Fragment.create(0, [GridCoord(x, y) for x in range(2) for y in range(2)], T=1,
                           absolute_origin=GridCoord(1, 1))
    cells = ball(frag, GridCoord(0, 0), 1, grid_side=16)
    assert cells == {GridCoord(0, 0), GridCoord(1, 0), GridCoord(0, 1)}


def test_ball_clipped_to_reservation(square_fragment):
    """Test that cells beyond the reservation margin are not materialized."""
    cells = ball(square_fragment, GridCoord(-1, 2), 2)
    assert all(c.x >= -1 for c in cells)


def test_ball_center_outside_fragment(square_fragment):
    """Test that a center outside the reservation is rejected."""
    with pytest.raises(DomainError):
        ball(square_fragment, GridCoord(10, 10), 1)


@pytest.mark.parametrize("v, expected", [
    (GridCoord(4, 2), [(0, 0), (1, 0), (2, 1), (3, 1), (4, 2)]),
    (GridCoord(3, 0), [(0, 0), (1, 0), (2, 0), (3, 0)]),
    (GridCoord(2, 2), [(0, 0), (1, 1), (2, 2)]),
])
def test_diagonal_path_examples(v, expected):
    """Test diagonal staircases against hand-evaluated floors."""
    path = diagonal_path(ORIGIN, v)
    assert [p.to_list() for p in path.nodes] == [list(xy) for xy in expected]


@pytest.mark.parametrize("v", [GridCoord(2, 3), GridCoord(0, 0), GridCoord(-1, 0)])
def test_diagonal_path_rejects(v):
    """Test that steep or westward diagonals are rejected."""
    with pytest.raises(DomainError):
        diagonal_path(ORIGIN, v)


@given(st.integers(1, 40), st.integers(-40, 40))
def test_diagonal_path_properties(dx, dy):
    """Test endpoints, node count and step bound of every admissible diagonal."""
    if abs(dy) > dx:
        dy = dy % (dx + 1)
    path = diagonal_path(ORIGIN, GridCoord(dx, dy))
    assert path.start == ORIGIN and path.end == GridCoord(dx, dy)
    assert len(path.nodes) == dx + 1
    assert all(a.l1(b) <= 2 for a, b in zip(path.nodes, path.nodes[1:]))


def test_thread_walk_inserts_east_neighbour():
    """Test that diagonal steps are routed east first and indices point at the input nodes."""
    diag = diagonal_path(ORIGIN, GridCoord(2, 2))
    walk, index = thread_walk(diag)
    assert walk.nodes == (ORIGIN, GridCoord(1, 0), GridCoord(1, 1), GridCoord(2, 1), GridCoord(2, 2))
    assert [walk.nodes[i] for i in index] == list(diag.nodes)


@pytest.mark.parametrize("i, d, minus, plus", [
    (3, Fraction(3, 2), (3, 1), (3, 2)),
    (2, Fraction(1), (2, 1), (2, 2)),
])
def test_line_rounding_half_slope(i, d, minus, plus):
    """Test rounding of the slope-1/2 line at fractional and integer ordinates."""
    got_d, d_minus, d_plus = line_rounding(ORIGIN, Fraction(1, 2), i)
    assert got_d == d
    assert d_minus == GridCoord(*minus) and d_plus == GridCoord(*plus)


def test_line_rounding_horizontal():
    """Test that the horizontal line rounds to the row and the row above."""
    for i in range(6):
        d, d_minus, d_plus = line_rounding(ORIGIN, Fraction(0), i)
        assert d == 0 and d_minus == GridCoord(i, 0) and d_plus == GridCoord(i, 1)


def test_line_rounding_rejects_steep_slope():
    with pytest.raises(DomainError):
        line_rounding(ORIGIN, Fraction(3, 2), 1)


class TestParallelogram:
    def test_anchor_inside(self):
        par = Parallelogram.from_anchor(2, Fraction(1, 3), GridCoord(5, 7), 10)
        assert parallelogram_contains(par, par.anchor)

    def test_above_top_side(self):
        par = Parallelogram.from_anchor(2, Fraction(1, 3), GridCoord(5, 7), 10)
        assert not parallelogram_contains(par, par.anchor + GridCoord(0, par.level + 2))

    def test_unit_slope_band(self):
        """Test the band [2, 4] at x=2 of a level-1 unit-slope parallelogram."""
        par = Parallelogram.from_anchor(1, Fraction(1), ORIGIN, 4)
        assert parallelogram_contains(par, GridCoord(2, 2))
        assert parallelogram_contains(par, GridCoord(2, 4))
        assert not parallelogram_contains(par, GridCoord(2, 5))
        assert not parallelogram_contains(par, GridCoord(5, 5))

    def test_lattice_points_match_contains(self):
        par = Parallelogram.from_anchor(3, Fraction(2, 5), GridCoord(1, 1), 12)
        points = lattice_points(par)
        assert points[0] == par.anchor
        assert all(par.contains(p) for p in points)
        box = Box.around(points).expand(1)
        outside = [GridCoord(x, y) for x in range(box.x0, box.x1 + 1) for y in range(box.y0, box.y1 + 1)
                   if GridCoord(x, y) not in set(points)]
        assert not any(par.contains(p) for p in outside)

    def test_next_level_contains_both_placements(self):
        T = 1
        par = Parallelogram.from_anchor(0, Fraction(1, 2), ORIGIN, 0)
        bigger = par.next_level(T)
        for shift in par.placements(T):
            copy = par.translate(shift)
            assert all(bigger.contains(p) for p in lattice_points(copy))
        assert bigger.width == slope_width(1, T)
        assert bigger.height == 2

    def test_two_copy_chain_is_next_level(self):
        par = Parallelogram.from_anchor(0, Fraction(1, 3), ORIGIN, 0).next_level(1)
        offsets, enclosure = par.chain(1, 2)
        assert offsets == [GridCoord(0, 0), par.placements(1)[0]]
        assert enclosure == par.next_level(1)

    @pytest.mark.parametrize("slope", [Fraction(0), Fraction(2, 7), Fraction(1, 2), Fraction(1)])
    @pytest.mark.parametrize("copies", [3, 4])
    def test_chain_fits_one_level_up(self, slope, copies):
        T = 1
        par = Parallelogram.from_anchor(0, slope, ORIGIN, 0).next_level(T).next_level(T)
        offsets, enclosure = par.chain(T, copies)
        assert len(offsets) == copies
        assert enclosure.height == par.height + 1
        assert enclosure.width == par.width + (copies - 1) * (par.width + 2 * T + 2)
        for shift in offsets:
            assert all(enclosure.contains(p) for p in lattice_points(par.translate(shift)))
        for left, right in zip(offsets, offsets[1:]):
            assert right.x - left.x - par.width == 2 * T + 2

    def test_chain_needs_two_copies(self):
        with pytest.raises(DomainError):
            Parallelogram.from_anchor(0, Fraction(1, 2), ORIGIN, 0).chain(1, 1)

    def test_enclosing_parallelogram(self):
        pts = [GridCoord(0, 0), GridCoord(4, 2), GridCoord(2, 2)]
        par = enclosing_parallelogram(pts, Fraction(1, 2))
        assert all(par.contains(p) for p in pts)


@pytest.mark.parametrize("level, T, width", [(0, 1, 0), (1, 1, 4), (3, 1, 28), (2, 2, 18)])
def test_slope_width_closed_form(level, T, width):
    assert slope_width(level, T) == width
    assert slope_recursion_widths(level, T)[-1] == width


@given(st.integers(0, 12), st.integers(0, 5))
def test_slope_width_matches_recursion(level, T):
    assert slope_recursion_widths(level, T) == [slope_width(j, T) for j in range(level + 1)]


@given(st.integers(0, 6), st.integers(0, 3), st.integers(2, 5))
def test_repeated_slope_width_matches_recursion(level, T, copies):
    assert slope_recursion_widths(level, T, copies)[-1] == slope_width(level, T, copies)


class TestSymmetry:
    def test_group_has_eight_elements(self):
        assert len(set(SYMMETRIES)) == 8

    def test_inverse(self):
        p = GridCoord(3, -7)
        for sym in SYMMETRIES:
            assert sym.inverse().apply(sym.apply(p)) == p
            assert sym.invert(sym.apply(p)) == p

    def test_compose(self):
        p = GridCoord(2, 5)
        for a in SYMMETRIES:
            for b in SYMMETRIES:
                assert a.compose(b).apply(p) == a.apply(b.apply(p))

    def test_transpose_orientation(self):
        assert TRANSPOSE.orientation(Orientation.EAST) == Orientation.NORTH
        assert IDENTITY.orientation(Orientation.WEST) == Orientation.WEST

    @given(st.integers(-50, 50), st.integers(-50, 50))
    def test_canonicalize(self, x, y):
        v = GridCoord(x, y)
        if v == ORIGIN:
            with pytest.raises(DomainError):
                canonicalize(v)
            return
        sym, c = canonicalize(v)
        assert sym.apply(c) == v
        assert c.x > 0 and 0 <= c.y <= c.x


def test_parse_slope():
    assert parse_slope("1/2") == Fraction(1, 2)
    with pytest.raises(DomainError):
        parse_slope("1/0")
    with pytest.raises(DomainError):
        parse_slope("0.5")


def test_path_rejects_jumps():
    with pytest.raises(DomainError):
        Path((ORIGIN, GridCoord(2, 0)))


def test_lpath_walk():
    row = straight_path(ORIGIN, GridCoord(3, 0))
    col = straight_path(GridCoord(3, 0), GridCoord(3, -2))
    lpath = LPath(row, col)
    assert lpath.corner == GridCoord(3, 0)
    assert len(lpath.walk) == 5


def test_enclosed_cells_of_square():
    ring = [GridCoord(0, 0), GridCoord(1, 0), GridCoord(2, 0), GridCoord(2, 1), GridCoord(2, 2),
            GridCoord(1, 2), GridCoord(0, 2), GridCoord(0, 1), GridCoord(0, 0)]
    walk = Path(tuple(ring), closed=True)
    assert enclosed_cells(walk) == {GridCoord(1, 1)}
    assert enclosed_cells(walk, limit=4) is None


def square_ring(side):
    top = side - 1
    ring = [GridCoord(x, 0) for x in range(top)] + [GridCoord(top, y) for y in range(top)]
    ring += [GridCoord(x, top) for x in range(top, 0, -1)] + [GridCoord(0, y) for y in range(top, 0, -1)]
    return ring + [GridCoord(0, 0)]


@pytest.mark.parametrize("reverse", [False, True], ids=["counterclockwise", "clockwise"])
def test_inner_band_of_small_square(reverse):
    ring = square_ring(3)
    walk = Path(tuple(ring[::-1] if reverse else ring), closed=True)
    assert inner_band(walk, 10) == [GridCoord(1, 1)]


@pytest.mark.parametrize("reverse", [False, True], ids=["counterclockwise", "clockwise"])
def test_inner_band_grows_from_the_walk(reverse):
    ring = square_ring(6)
    walk = Path(tuple(ring[::-1] if reverse else ring), closed=True)
    first = set(inner_band(walk, 12))
    assert first == {GridCoord(x, y) for x in range(1, 5) for y in range(1, 5) if {x, y} & {1, 4}}
    assert set(inner_band(walk, 100)) == enclosed_cells(walk)
    assert len(inner_band(walk, 5)) == 5


def test_inner_band_needs_closed_walk():
    with pytest.raises(DomainError):
        inner_band(straight_path(ORIGIN, GridCoord(3, 0)), 4)


@settings(max_examples=50)
@given(st.integers(-20, 20), st.integers(-20, 20))
def test_fragment_commit_once(x, y):
    frag = Fragment.create(3, [ORIGIN], T=1)
    frag.commit(0, GridCoord(x, y))
    assert frag.committed
    with pytest.raises(DomainError):
        frag.commit(0, GridCoord(x, y))
