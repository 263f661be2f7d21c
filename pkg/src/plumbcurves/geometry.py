"""Exact lattice realizations of curve words.

A word lifts to a rectilinear path in the plane: beta-letters are unit
horizontal segments centered at (Z, Z+1/2), alpha-letters unit vertical
segments centered at (Z+1/2, Z), corners at (Z+1/2, Z+1/2).  The path never
meets the punctures Z^2.  Coordinates are stored internally as integers
scaled by 2, so midpoints and corners are lattice points and all areas come
out as exact rationals with denominator dividing 4.

The path is parametrized by half-steps: parameter 2i is the midpoint of
letter i, parameter 2i+1 the corner after it; parameters extend to all of Z
by the period translation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Optional, Sequence

from .errors import (
    DistinguishedCurveError,
    MergePreconditionError,
    NotSymmetricError,
    PlumbcurvesError,
    PureAlphaError,
    SpincError,
    SymmetryUndefinedError,
)
from .loopcalc import invariant
from .plumbing import RootedTree
from .words import (
    ALPHA,
    ALPHA_INV,
    BETA,
    BETA_INV,
    CyclicWord,
    MultiCurve,
    all_c_subscripts,
    canonicalize,
    curve_class,
    inverse_letters,
    is_alpha,
    is_beta,
    letter_sign,
    multicurve,
    symmetry_axis,
)

_DIR = {ALPHA: (0, 1), BETA: (1, 0), ALPHA_INV: (0, -1), BETA_INV: (-1, 0)}

Point = tuple[Fraction, Fraction]


@dataclass(frozen=True)
class LatticePath:
    """Lift of a cyclic word to the plane, over one period.

    ``vertices_scaled`` holds the 2L+1 points (doubled coordinates) from the
    midpoint of letter 0 to its translate by the period; ``period`` is the
    vector (signed beta count, signed alpha count).
    """

    word: CyclicWord
    vertices_scaled: tuple[tuple[int, int], ...]
    period: tuple[int, int]

    @property
    def start(self) -> Point:
        x, y = self.vertices_scaled[0]
        return (Fraction(x, 2), Fraction(y, 2))

    @property
    def steps(self) -> tuple[str, ...]:
        names = {ALPHA: "Up", BETA: "Right", ALPHA_INV: "Down", BETA_INV: "Left"}
        return tuple(names[l] for l in self.word.letters)

    def position_scaled(self, t: int) -> tuple[int, int]:
        n = len(self.vertices_scaled) - 1  # = 2L
        q, r = divmod(t, n)
        x, y = self.vertices_scaled[r]
        return (x + 2 * q * self.period[0], y + 2 * q * self.period[1])

    def position(self, t: int) -> Point:
        x, y = self.position_scaled(t)
        return (Fraction(x, 2), Fraction(y, 2))


def realize_lift(word: CyclicWord) -> LatticePath:
    """Lift the word starting at (0, 1/2) for a leading beta-letter and at
    (1/2, 0) for a leading alpha-letter."""
    ls = word.letters
    dirs = [_DIR[l] for l in ls]
    cur = (0, 1) if is_beta(ls[0]) else (1, 0)
    vertices = [cur]
    for i, d in enumerate(dirs):
        cur = (cur[0] + d[0], cur[1] + d[1])  # corner after letter i
        vertices.append(cur)
        d2 = dirs[(i + 1) % len(dirs)]
        cur = (cur[0] + d2[0], cur[1] + d2[1])  # midpoint of letter i+1
        vertices.append(cur)
    b = sum(letter_sign(l) for l in ls if is_beta(l))
    a = sum(letter_sign(l) for l in ls if is_alpha(l))
    assert vertices[-1] == (vertices[0][0] + 2 * b, vertices[0][1] + 2 * a)
    return LatticePath(word, tuple(vertices), (b, a))


def _shoelace_scaled(points: Sequence[tuple[int, int]]) -> int:
    """Twice the doubled-coordinate shoelace sum: 8 x (signed area)."""
    total = 0
    n = len(points)
    for i in range(n):
        x1, y1 = points[i]
        x2, y2 = points[(i + 1) % n]
        total += x1 * y2 - x2 * y1
    return total


def polygon_area(points: Sequence[Point]) -> Fraction:
    """Signed area of a closed polygon, regions weighted by winding number."""
    total = Fraction(0)
    n = len(points)
    for i in range(n):
        x1, y1 = points[i]
        x2, y2 = points[(i + 1) % n]
        total += x1 * y2 - x2 * y1
    return total / 2


# ---------------------------------------------------------------------------
# Fixed points of the elliptic involution
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SymPoints:
    """The two antipodal fixed points, reduced to the fundamental torus."""

    x0: Point
    x1: Point


@dataclass(frozen=True)
class _SymmetryData:
    path: LatticePath
    t0: int  # parameter of a lift of x0
    t1: int  # parameter of the lift of x1 met half a lap after t0


def _torus_point(scaled: tuple[int, int]) -> Point:
    return (Fraction(scaled[0] % 2, 2), Fraction(scaled[1] % 2, 2))


def _verify_rotation_symmetry(path: LatticePath, t_fix: int) -> bool:
    cx, cy = path.position_scaled(t_fix)
    n = 2 * len(path.word)
    for t in range(n):
        px, py = path.position_scaled(t)
        qx, qy = path.position_scaled(2 * t_fix - t)
        if (qx, qy) != (2 * cx - px, 2 * cy - py):
            return False
    return True


def _symmetry_data(word: CyclicWord) -> _SymmetryData:
    s = symmetry_axis(word)
    if s is None:
        raise NotSymmetricError("word is not fixed by the elliptic involution")
    cls = curve_class(word)
    alpha_odd = cls.alpha_count % 2 == 1
    beta_odd = cls.beta_count % 2 == 1
    if not (alpha_odd or beta_odd):
        raise SymmetryUndefinedError(
            "both letter parities even: fixed-point labelling undefined"
        )
    path = realize_lift(word)
    n = len(word)
    ta, tb = s % (2 * n), (s + n) % (2 * n)
    pa, pb = path.position_scaled(ta), path.position_scaled(tb)

    def is_x0(p: tuple[int, int]) -> bool:
        if alpha_odd:
            return p[1] % 2 == 1  # half-integer y-coordinate
        return p[0] % 2 == 0  # integer x-coordinate

    if is_x0(pa) == is_x0(pb):
        raise PlumbcurvesError("fixed points do not classify under the convention")
    if alpha_odd and beta_odd:
        # the two rules must agree on which point is x0
        if (pa[1] % 2 == 1) != (pa[0] % 2 == 0):
            raise PlumbcurvesError("fixed-point labelling rules disagree")
    t0, t1 = (ta, tb) if is_x0(pa) else (tb, ta)
    if t1 < t0:
        t1 += 2 * n
    for t in (t0, t1):
        if not _verify_rotation_symmetry(path, t):
            raise PlumbcurvesError("rotation about fixed point does not fix the lift")
    return _SymmetryData(path, t0, t1)


def fixed_points(word: CyclicWord) -> SymPoints:
    """Locate and label the two involution fixed points on the curve.

    The rotation-by-pi postcondition is verified on the lift.  Labelling
    follows the parity convention: odd alpha-count puts x0 at half-integer
    y-coordinate, odd beta-count puts x0 at integer x-coordinate.
    """
    data = _symmetry_data(word)
    return SymPoints(
        _torus_point(data.path.position_scaled(data.t0)),
        _torus_point(data.path.position_scaled(data.t1)),
    )


def _half_polygon_scaled(data: _SymmetryData, forward: bool) -> list[tuple[int, int]]:
    n = len(data.path.word)
    if forward:
        ts = range(data.t0, data.t0 + n + 1)
    else:
        ts = range(data.t0, data.t0 - n - 1, -1)
    return [data.path.position_scaled(t) for t in ts]


def delta_sym(word: CyclicWord) -> Fraction:
    """Twice the signed area between the half-lap from x0 to x1 and its chord.

    Both half-laps out of x0 are computed and must agree; the closing chord
    runs straight back from the x1 lift, counterclockwise area positive.
    """
    data = _symmetry_data(word)
    values = []
    for forward in (True, False):
        pts = _half_polygon_scaled(data, forward)
        values.append(Fraction(_shoelace_scaled(pts), 4))
    assert values[0] == values[1], "the two half-lap areas disagree"
    return values[0]


def distinguished_component(mc: MultiCurve) -> CyclicWord:
    """The unique homologically nontrivial component fixed by the involution."""
    found = []
    for w in mc:
        cls = curve_class(w)
        if (cls.beta_signed, cls.alpha_signed) == (0, 0):
            continue
        if symmetry_axis(w) is not None:
            found.append(w)
    if not found:
        raise DistinguishedCurveError("no symmetric homologically nontrivial component")
    if len(found) > 1:
        raise DistinguishedCurveError("distinguished curve not unique")
    return found[0]


def delta_sym_tree(tree: RootedTree) -> Fraction:
    return delta_sym(distinguished_component(invariant(tree)))


# ---------------------------------------------------------------------------
# Pairing generators and filling classes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Generator:
    """An intersection with the horizontal pairing curve.

    Generators sit at midpoints of maximal horizontal segments whose two
    flanking vertical steps point the same way; ``segment`` is the index of
    that horizontal segment along the word (one per alpha-letter), ``param``
    the half-step parameter of the midpoint on the lift.
    """

    component: int
    segment: int
    height: Fraction
    x: Fraction
    param: int


def word_generators(word: CyclicWord, component: int = 0) -> list[Generator]:
    ls = word.letters
    alphas = [i for i, l in enumerate(ls) if is_alpha(l)]
    if not alphas:
        return []  # pure beta power: no vertical steps to pair
    if len(alphas) == len(ls):
        raise PureAlphaError("pure alpha-power component")
    path = realize_lift(word)
    n = len(ls)
    out = []
    for j, p in enumerate(alphas):
        q = alphas[(j + 1) % len(alphas)]
        if q <= p:
            q += n
        if ls[p] != ls[q % n]:
            continue  # opposite flanking signs: no intersection here
        t = p + q
        sx, sy = path.position_scaled(t)
        out.append(
            Generator(component, j, Fraction(sy, 2), Fraction(sx, 2), t)
        )
    return out


def pairing_generators(mc: MultiCurve | CyclicWord) -> list[Generator]:
    """All pairing generators; the total count is the rank of the horizontal
    filling's homology."""
    words = (mc,) if isinstance(mc, CyclicWord) else tuple(mc)
    out: list[Generator] = []
    for ci, w in enumerate(words):
        out.extend(word_generators(w, ci))
    return out


@dataclass(frozen=True)
class SpincClass:
    label: str
    component: int
    generators: tuple[Generator, ...]

    @property
    def rank(self) -> int:
        return len(self.generators)


def spinc_classes(mc: MultiCurve | CyclicWord) -> list[SpincClass]:
    """Group generators of each component by lift height modulo the vertical
    period of that component."""
    words = (mc,) if isinstance(mc, CyclicWord) else tuple(mc)
    out: list[SpincClass] = []
    for ci, w in enumerate(words):
        cls = curve_class(w)
        a = cls.alpha_signed
        gens = word_generators(w, ci)
        if a == 0 and (cls.beta_signed != 0):
            raise SpincError(
                "vertical period zero: the horizontal filling is not a rational "
                "homology sphere"
            )
        groups: dict[int, list[Generator]] = {}
        for g in gens:
            hs = int(g.height * 2)
            key = hs % (2 * abs(a)) if a != 0 else hs
            groups.setdefault(key, []).append(g)
        for key in sorted(groups):
            label = f"{ci}:{key}/2"
            out.append(SpincClass(label, ci, tuple(groups[key])))
    return out


def spinc_ranks(mc: MultiCurve | CyclicWord) -> list[tuple[str, int]]:
    return [(c.label, c.rank) for c in spinc_classes(mc)]


# ---------------------------------------------------------------------------
# Geometric merge: the vertical sum
# ---------------------------------------------------------------------------


def vertical_sum_merge(w1: CyclicWord, w2: CyclicWord) -> MultiCurve:
    """Merge two words by adding lifted heights.

    The all-c input becomes a rightward-moving step function f; each unit
    horizontal segment of the other curve's lift is raised by f at its
    x-coordinate minus 1/2, verticals are restretched to reconnect, and one
    component is read off per horizontal shift of the second lift.
    """
    rows = all_c_subscripts(w1)
    other = w2
    if rows is None:
        rows = all_c_subscripts(w2)
        other = w1
    if rows is None:
        raise MergePreconditionError(
            "merge requires one all-c input (Floer-simplicity proxy failed)"
        )
    n1 = len(rows)
    m1 = sum(rows)
    cls = curve_class(other)
    if cls.beta_count == 0:
        # vertical line summed with a step function: unchanged, one copy per row
        return MultiCurve(tuple([other] * n1))
    if cls.beta_signed < 0:
        other = canonicalize(inverse_letters(other.letters))
        cls = curve_class(other)
    n2, m2 = cls.beta_signed, cls.alpha_signed

    prefix = [0]
    for k in rows:
        prefix.append(prefix[-1] + k)

    def plateau_scaled(j: int) -> int:
        # doubled height of f on (j - 1/2, j + 1/2); f(0-plateau) = 1/2
        q, r = divmod(j, n1)
        return 1 + 2 * (prefix[r] + q * m1)

    path = realize_lift(other)
    hsteps = []  # (scaled mid x, scaled mid y, sign) per beta-letter
    for i, l in enumerate(other.letters):
        if is_beta(l):
            sx, sy = path.vertices_scaled[2 * i]
            hsteps.append((sx, sy, letter_sign(l)))

    reps = lcm(n1, n2) // n2 if n2 else 1
    components = []
    for shift in range(gcd(n1, n2)):
        raised = []
        for rep in range(reps):
            for sx, sy, sign in hsteps:
                x = sx + 2 * (shift + rep * n2)
                y = sy + 2 * rep * m2
                raised.append((x, y + plateau_scaled(x // 2) - 1, sign))
        x0, y0, _ = hsteps[0]
        x_close = x0 + 2 * (shift + reps * n2)
        y_close = y0 + 2 * reps * m2 + plateau_scaled(x_close // 2) - 1
        letters: list[int] = []
        for t, (x, y, sign) in enumerate(raised):
            letters.append(BETA if sign > 0 else BETA_INV)
            y_next = raised[t + 1][1] if t + 1 < len(raised) else y_close
            dy = (y_next - y) // 2
            letters.extend([ALPHA if dy > 0 else ALPHA_INV] * abs(dy))
        components.append(canonicalize(letters))
    return multicurve(components)
