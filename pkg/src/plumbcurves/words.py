"""Cyclic words over {alpha, alpha^-1, beta, beta^-1}.

A cyclic word encodes an immersed curve in the punctured torus: alpha-letters
are unit vertical steps, beta-letters unit horizontal steps.  Words are
considered up to rotation and up to inversion (reverse the order and invert
every letter), since curve orientation carries no information here.

Letters are stored as the integers ALPHA=0 < BETA=1 < ALPHA_INV=2 < BETA_INV=3
so that plain lexicographic comparison of letter tuples realizes the canonical
order directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional, Sequence

from .errors import EmptyWordError, PlumbcurvesError

ALPHA, BETA, ALPHA_INV, BETA_INV = 0, 1, 2, 3

_LETTER_CHARS = "abAB"
_CHAR_TO_LETTER = {c: i for i, c in enumerate(_LETTER_CHARS)}


def letter_inverse(letter: int) -> int:
    return letter ^ 2


def is_alpha(letter: int) -> bool:
    return letter & 1 == 0


def is_beta(letter: int) -> bool:
    return letter & 1 == 1


def letter_sign(letter: int) -> int:
    return 1 if letter < 2 else -1


def inverse_letters(letters: Sequence[int]) -> list[int]:
    """The same path traversed backwards: reverse order, invert each letter."""
    return [letter_inverse(l) for l in reversed(letters)]


def _free_reduce_cyclic(letters: Sequence[int]) -> list[int]:
    stack: list[int] = []
    for l in letters:
        if stack and stack[-1] == letter_inverse(l):
            stack.pop()
        else:
            stack.append(l)
    # cancellation across the seam of the cycle
    lo, hi = 0, len(stack)
    while hi - lo >= 2 and stack[lo] == letter_inverse(stack[hi - 1]):
        lo += 1
        hi -= 1
    return stack[lo:hi]


def _least_rotation(seq: Sequence[int]) -> list[int]:
    """Booth's O(n) least-rotation algorithm."""
    s = list(seq) + list(seq)
    n = len(seq)
    f = [-1] * len(s)
    k = 0
    for j in range(1, len(s)):
        sj = s[j]
        i = f[j - k - 1]
        while i != -1 and sj != s[k + i + 1]:
            if sj < s[k + i + 1]:
                k = j - i - 1
            i = f[i]
        if sj != s[k + i + 1]:
            if sj < s[k]:
                k = j
            f[j - k] = -1
        else:
            f[j - k] = i + 1
    k %= n
    return list(seq[k:]) + list(seq[:k])


@dataclass(frozen=True, order=True)
class CyclicWord:
    """A freely reduced cyclic word in canonical form.

    Instances are produced by :func:`canonicalize`; the stored letter tuple is
    the lexicographically least rotation among rotations of the word and of
    its inverse.
    """

    letters: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return "(" + "".join(_LETTER_CHARS[l] for l in self.letters) + ")"

    def rotated(self, r: int) -> tuple[int, ...]:
        ls = self.letters
        r %= len(ls)
        return ls[r:] + ls[:r]


def canonicalize(letters: Iterable[int] | str | CyclicWord) -> CyclicWord:
    """Freely reduce cyclically, then pick the canonical representative.

    Raises :class:`EmptyWordError` if the word reduces to nothing.
    """
    if isinstance(letters, CyclicWord):
        letters = letters.letters
    if isinstance(letters, str):
        letters = parse_word(letters).letters
    reduced = _free_reduce_cyclic(list(letters))
    if not reduced:
        raise EmptyWordError("word freely reduces to the empty word")
    best = min(_least_rotation(reduced), _least_rotation(inverse_letters(reduced)))
    return CyclicWord(tuple(best))


def parse_word(text: str) -> CyclicWord:
    """Parse the rendering a=alpha, b=beta, A=alpha^-1, B=beta^-1."""
    text = text.strip()
    if text.startswith("(") and text.endswith(")"):
        text = text[1:-1]
    try:
        letters = [_CHAR_TO_LETTER[c] for c in text]
    except KeyError as exc:
        raise PlumbcurvesError(f"unknown word letter {exc.args[0]!r}") from exc
    return canonicalize(letters)


def render_word(word: CyclicWord) -> str:
    return str(word)


@dataclass(frozen=True, order=True)
class MultiCurve:
    """A finite collection of curve components, stored canonically sorted."""

    components: tuple[CyclicWord, ...]

    def __len__(self) -> int:
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def __str__(self) -> str:
        return " ".join(str(w) for w in self.components)


def multicurve(components: Iterable[CyclicWord]) -> MultiCurve:
    return MultiCurve(tuple(sorted(components)))


# ---------------------------------------------------------------------------
# Loop calculus
# ---------------------------------------------------------------------------

# Loop letter kinds and the subwords they stand for:
#   a[k] = beta alpha^k beta^-1     (k != 0)
#   b[k] = alpha^k                  (k != 0)
#   c[k] = beta alpha^k
#   cc[k] = alpha^-k beta^-1        ("cc" is c-bar)
_KIND_RANK = {"c": 0, "a": 1, "b": 2, "cc": 3}


@dataclass(frozen=True, order=True)
class LoopLetter:
    kind: str
    k: int

    def __str__(self) -> str:
        return f"{self.kind}[{self.k}]"


def _loop_letter_inverse(letter: LoopLetter) -> LoopLetter:
    # barring reverses and inverts the subword: it swaps c and c-bar keeping
    # the subscript, and negates the subscript of a and b letters
    if letter.kind == "c":
        return LoopLetter("cc", letter.k)
    if letter.kind == "cc":
        return LoopLetter("c", letter.k)
    return LoopLetter(letter.kind, -letter.k)


def _starts_with_beta(letter: LoopLetter) -> bool:
    return letter.kind in ("a", "c")


def _ends_with_beta_inv(letter: LoopLetter) -> bool:
    return letter.kind in ("a", "cc")


@dataclass(frozen=True, order=True)
class LoopWord:
    """A cyclic word of loop-calculus letters, canonically rotated."""

    letters: tuple[LoopLetter, ...]

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return " ".join(str(l) for l in self.letters)


def _loop_canonical(letters: Sequence[LoopLetter]) -> LoopWord:
    keyed = [(_KIND_RANK[l.kind], l.k) for l in letters]
    inv = [_loop_letter_inverse(l) for l in reversed(letters)]
    keyed_inv = [(_KIND_RANK[l.kind], l.k) for l in inv]
    n = len(letters)
    best = None
    best_key = None
    for seq, keys in ((list(letters), keyed), (inv, keyed_inv)):
        for r in range(n):
            key = keys[r:] + keys[:r]
            if best_key is None or key < best_key:
                best_key = key
                best = seq[r:] + seq[:r]
    return LoopWord(tuple(best))


def loop_word(letters: Iterable[LoopLetter | tuple[str, int]]) -> LoopWord:
    """Build a validated, canonically rotated loop word."""
    ls = [l if isinstance(l, LoopLetter) else LoopLetter(*l) for l in letters]
    if not ls:
        raise EmptyWordError("empty loop word")
    for l in ls:
        if l.kind not in _KIND_RANK:
            raise PlumbcurvesError(f"unknown loop letter kind {l.kind!r}")
        if l.kind in ("a", "b") and l.k == 0:
            raise PlumbcurvesError(f"loop letter {l} needs a nonzero subscript")
    n = len(ls)
    for i, l in enumerate(ls):
        nxt = ls[(i + 1) % n]
        # A piece not ending in beta^-1 must be followed by one starting with
        # beta, and vice versa; otherwise the decoded word is not reduced.
        if _ends_with_beta_inv(l) == _starts_with_beta(nxt):
            if n == 1 and l.kind == "b":
                break  # a lone b[k] is the pure alpha power
            raise PlumbcurvesError(f"loop letters {l} {nxt} cannot be adjacent")
    return _loop_canonical(ls)


def parse_loop_word(text: str) -> LoopWord:
    """Parse renderings like ``"c[1] a[1] cc[2] b[1] c[1]"``."""
    letters = []
    for token in text.split():
        kind, _, rest = token.partition("[")
        if not rest.endswith("]"):
            raise PlumbcurvesError(f"malformed loop letter {token!r}")
        letters.append(LoopLetter(kind, int(rest[:-1])))
    return loop_word(letters)


def loop_encode(word: CyclicWord) -> LoopWord:
    """Cut a cyclic word along its beta-letters into loop-calculus pieces.

    Each beta goes with the subword after it, each beta^-1 with the subword
    before it.  A word with no beta-letters must be a pure alpha power and
    encodes as a single b-letter.
    """
    ls = word.letters
    if all(is_alpha(l) for l in ls):
        return loop_word([LoopLetter("b", sum(letter_sign(l) for l in ls))])
    n = len(ls)
    # boundary before index i is a cut iff ls[i] is beta or ls[i-1] is beta^-1
    cuts = [i for i in range(n) if ls[i] == BETA or ls[i - 1] == BETA_INV]
    pieces: list[LoopLetter] = []
    m = len(cuts)
    for ci in range(m):
        start = cuts[ci]
        stop = cuts[(ci + 1) % m]
        seg = ls[start:stop] if ci + 1 < m else ls[start:] + ls[:stop]
        k = sum(letter_sign(l) for l in seg if is_alpha(l))
        leading = seg[0] == BETA
        trailing = seg[-1] == BETA_INV
        if leading and trailing:
            pieces.append(LoopLetter("a", k))
        elif leading:
            pieces.append(LoopLetter("c", k))
        elif trailing:
            pieces.append(LoopLetter("cc", -k))
        else:
            pieces.append(LoopLetter("b", k))
    return loop_word(pieces)


def loop_decode(lw: LoopWord) -> CyclicWord:
    letters: list[int] = []
    for l in lw.letters:
        k = l.k
        if l.kind == "a":
            letters.append(BETA)
            letters.extend([ALPHA if k > 0 else ALPHA_INV] * abs(k))
            letters.append(BETA_INV)
        elif l.kind == "b":
            letters.extend([ALPHA if k > 0 else ALPHA_INV] * abs(k))
        elif l.kind == "c":
            letters.append(BETA)
            letters.extend([ALPHA if k > 0 else ALPHA_INV] * abs(k))
        else:  # cc[k] = alpha^-k beta^-1
            letters.extend([ALPHA_INV if k > 0 else ALPHA] * abs(k))
            letters.append(BETA_INV)
    return canonicalize(letters)


def all_c_subscripts(word: CyclicWord) -> Optional[list[int]]:
    """Subscripts of the word as an all-c loop word, inverting if needed.

    Returns None when the word contains a- or b-pieces in loop calculus (in
    either orientation); this is the operational Floer-simplicity proxy used
    by the merge precondition.
    """
    enc = loop_encode(word)
    kinds = {l.kind for l in enc.letters}
    if kinds == {"c"}:
        return [l.k for l in enc.letters]
    if kinds == {"cc"}:
        return [l.k for l in reversed(enc.letters)]
    return None


# ---------------------------------------------------------------------------
# Homology classes and parity types
# ---------------------------------------------------------------------------


class HstType(Enum):
    """Which of the two basis fillings are Z2-homology spheres."""

    ALPHA = "alpha"
    BETA = "beta"
    ALPHA_BETA = "alphabeta"
    NONE = "none"


def _type_from_parities(alpha_count: int, beta_count: int) -> HstType:
    if beta_count % 2 and alpha_count % 2 == 0:
        return HstType.ALPHA
    if alpha_count % 2 and beta_count % 2 == 0:
        return HstType.BETA
    if alpha_count % 2 and beta_count % 2:
        return HstType.ALPHA_BETA
    return HstType.NONE


@dataclass(frozen=True)
class CurveClass:
    """Signed and unsigned letter counts, and the parity type they determine.

    ``beta_signed``/``alpha_signed`` are the coordinates of the homology class
    of the curve(s); ``hst_type`` records which basis filling has odd rank.
    """

    beta_signed: int
    alpha_signed: int
    beta_count: int
    alpha_count: int
    hst_type: HstType


def _class_of_letters(letters: Sequence[int]) -> CurveClass:
    b = sum(letter_sign(l) for l in letters if is_beta(l))
    a = sum(letter_sign(l) for l in letters if is_alpha(l))
    bc = sum(1 for l in letters if is_beta(l))
    ac = sum(1 for l in letters if is_alpha(l))
    return CurveClass(b, a, bc, ac, _type_from_parities(ac, bc))


def curve_class(mc: MultiCurve | CyclicWord) -> CurveClass:
    """Aggregated counts over all components."""
    if isinstance(mc, CyclicWord):
        return _class_of_letters(mc.letters)
    letters: list[int] = []
    for w in mc:
        letters.extend(w.letters)
    return _class_of_letters(letters)


def component_classes(mc: MultiCurve) -> list[CurveClass]:
    return [_class_of_letters(w.letters) for w in mc]


# ---------------------------------------------------------------------------
# Elliptic involution symmetry
# ---------------------------------------------------------------------------


def symmetry_offset(word: CyclicWord) -> Optional[int]:
    """Smallest r with word == rotate_r(reverse(word)), or None.

    A curve is setwise fixed by the elliptic involution with fixed points on
    the curve exactly when its word is a rotation of its reversal: the
    pi-rotation reverses the traversal direction, and reading the rotated
    curve backwards undoes the letter inversion.  The certified offset r
    locates the two fixed parameters (see geometry.fixed_points).
    """
    ls = list(word.letters)
    n = len(ls)
    rev = ls[::-1]
    doubled = rev + rev
    for r in range(n):
        if doubled[r : r + n] == ls:
            return r
    return None


def symmetry_axis(word: CyclicWord) -> Optional[int]:
    """Index map offset s with word[i] == word[s - i] for all i (mod n)."""
    r = symmetry_offset(word)
    if r is None:
        return None
    return (len(word) - 1 - r) % len(word)


# ---------------------------------------------------------------------------
# Type D export
# ---------------------------------------------------------------------------

IDEMPOTENT_0 = "iota0"  # beta letters
IDEMPOTENT_1 = "iota1"  # alpha letters

# (letter_i, letter_{i+1}) -> (algebra label, arrow runs i -> i+1)
_ARROW_TABLE = {
    (BETA_INV, ALPHA_INV): ("rho1", True),
    (BETA_INV, BETA_INV): ("rho12", True),
    (BETA_INV, ALPHA): ("rho123", True),
    (ALPHA, BETA_INV): ("rho2", True),
    (ALPHA, ALPHA): ("rho23", True),
    (BETA, ALPHA): ("rho3", True),
    (ALPHA, BETA): ("rho1", False),
    (BETA, BETA): ("rho12", False),
    (ALPHA_INV, BETA): ("rho123", False),
    (BETA, ALPHA_INV): ("rho2", False),
    (ALPHA_INV, ALPHA_INV): ("rho23", False),
    (ALPHA_INV, BETA_INV): ("rho3", False),
}


@dataclass(frozen=True)
class TypeDArrow:
    source: int
    target: int
    label: str
    forward: bool  # True when the arrow runs with the word order


@dataclass(frozen=True)
class TypeDStructure:
    generators: tuple[str, ...]
    arrows: tuple[TypeDArrow, ...]


def to_typeD(word: CyclicWord) -> TypeDStructure:
    """One generator per letter, one arrow per consecutive letter pair."""
    ls = word.letters
    n = len(ls)
    generators = tuple(IDEMPOTENT_0 if is_beta(l) else IDEMPOTENT_1 for l in ls)
    arrows = []
    for i in range(n):
        j = (i + 1) % n
        label, fwd = _ARROW_TABLE[(ls[i], ls[j])]
        src, dst = (i, j) if fwd else (j, i)
        arrows.append(TypeDArrow(src, dst, label, fwd))
    return TypeDStructure(generators, tuple(arrows))
