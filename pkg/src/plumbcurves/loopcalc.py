"""The word-level twist, extend and merge operations.

These mirror the elementary moves on rooted plumbing trees: a twist
reparametrizes by Dehn twists along the vertical curve, extend rotates the
curve a quarter turn, and merge combines two curve collections through a
toroidal grid of loop-calculus letters.  Chaining them along a build plan
computes the curve invariant of a rooted tree from copies of (beta).
"""

from __future__ import annotations

from math import gcd

from .errors import MergePreconditionError
from .plumbing import Base, Extend, Merge, Plan, RootedTree, Twist, decompose
from .words import (
    ALPHA,
    ALPHA_INV,
    BETA,
    BETA_INV,
    CyclicWord,
    LoopLetter,
    LoopWord,
    MultiCurve,
    all_c_subscripts,
    canonicalize,
    inverse_letters,
    is_beta,
    letter_sign,
    loop_decode,
    loop_encode,
    loop_word,
    multicurve,
)

_EXTEND_MAP = {BETA: ALPHA, ALPHA: BETA_INV, BETA_INV: ALPHA_INV, ALPHA_INV: BETA}


def _twist_letters(word: CyclicWord, m: int) -> CyclicWord:
    """beta -> beta alpha^-m, beta^-1 -> alpha^m beta^-1, alpha fixed."""
    tail = [ALPHA_INV if m > 0 else ALPHA] * abs(m)
    head = [ALPHA if m > 0 else ALPHA_INV] * abs(m)
    out: list[int] = []
    for l in word.letters:
        if l == BETA:
            out.append(BETA)
            out.extend(tail)
        elif l == BETA_INV:
            out.extend(head)
            out.append(BETA_INV)
        else:
            out.append(l)
    return canonicalize(out)


def _twist_loop(word: CyclicWord, m: int) -> CyclicWord:
    """Same twist on the loop form: c[k] -> c[k-m], cc[k] -> cc[k-m]."""
    enc = loop_encode(word)
    shifted = [
        LoopLetter(l.kind, l.k - m) if l.kind in ("c", "cc") else l
        for l in enc.letters
    ]
    return loop_decode(loop_word(shifted))


def twist_word(word: CyclicWord, m: int) -> CyclicWord:
    by_letters = _twist_letters(word, m)
    by_loop = _twist_loop(word, m)
    assert by_letters == by_loop, "letterwise and loop-letterwise twists disagree"
    return by_letters


def twist_op(mc: MultiCurve, m: int) -> MultiCurve:
    return multicurve(twist_word(w, m) for w in mc)


def extend_word(word: CyclicWord) -> CyclicWord:
    return canonicalize([_EXTEND_MAP[l] for l in word.letters])


def extend_op(mc: MultiCurve) -> MultiCurve:
    return multicurve(extend_word(w) for w in mc)


def _oriented_loop_letters(word: CyclicWord) -> list[LoopLetter]:
    """Loop letters of the word, inverted if needed so the signed c-count is
    nonnegative."""
    enc = loop_encode(word)
    n_signed = sum(
        1 if l.kind == "c" else -1 if l.kind == "cc" else 0 for l in enc.letters
    )
    if n_signed >= 0:
        return list(enc.letters)
    return list(loop_encode(canonicalize(inverse_letters(word.letters))).letters)


def merge_words(w1: CyclicWord, w2: CyclicWord) -> list[CyclicWord]:
    """Merge two single cyclic words through the toroidal grid.

    One input (after possibly swapping and inverting) must consist of only
    c-letters in loop calculus; its letters index the grid rows, the other
    word's letters the columns.  Grid arrows: a- and b-letters pass along
    their row, a c-letter steps down one row picking up the row subscript,
    and a c-bar letter steps up picking up the subscript of the row it leaves.
    The directed loops of the grid are the output components.
    """
    rows = all_c_subscripts(w1)
    cols_word = w2
    if rows is None:
        rows = all_c_subscripts(w2)
        cols_word = w1
    if rows is None:
        raise MergePreconditionError(
            "merge requires one all-c input (Floer-simplicity proxy failed)"
        )
    cols = _oriented_loop_letters(cols_word)
    n1 = len(rows)
    ncols = len(cols)
    out: list[CyclicWord] = []
    seen = [[False] * ncols for _ in range(n1)]
    for start_line in range(n1):
        if seen[start_line][0]:
            continue
        line, col = start_line, 0
        letters: list[LoopLetter] = []
        while True:
            if seen[line][col]:
                break
            seen[line][col] = True
            letter = cols[col]
            if letter.kind == "a" or letter.kind == "b":
                letters.append(letter)
            elif letter.kind == "c":
                letters.append(LoopLetter("c", letter.k + rows[line]))
                line = (line + 1) % n1
            else:  # c-bar leaves upward out of the row above the line
                line = (line - 1) % n1
                letters.append(LoopLetter("cc", letter.k + rows[line]))
            col = (col + 1) % ncols
        if letters:
            out.append(loop_decode(loop_word(letters)))
    n2 = sum(1 if l.kind == "c" else -1 if l.kind == "cc" else 0 for l in cols)
    assert len(out) == gcd(n1, n2), "component count differs from gcd"
    return out


def merge_op(mc1: MultiCurve | CyclicWord, mc2: MultiCurve | CyclicWord) -> MultiCurve:
    """Merge two multicurves componentwise (the operation distributes over
    disjoint unions)."""
    c1 = (mc1,) if isinstance(mc1, CyclicWord) else mc1.components
    c2 = (mc2,) if isinstance(mc2, CyclicWord) else mc2.components
    out: list[CyclicWord] = []
    for a in c1:
        for b in c2:
            out.extend(merge_words(a, b))
    return multicurve(out)


_BASE_CURVE = MultiCurve((canonicalize([BETA]),))


def evaluate_plan_words(plan: Plan, _path: str = "") -> MultiCurve:
    """Evaluate a build plan with Base -> (beta) and the word operations."""
    if isinstance(plan, Base):
        return _BASE_CURVE
    if isinstance(plan, Twist):
        return twist_op(evaluate_plan_words(plan.child, _path + "T"), plan.m)
    if isinstance(plan, Extend):
        return extend_op(evaluate_plan_words(plan.child, _path + "E"))
    if isinstance(plan, Merge):
        left = evaluate_plan_words(plan.left, _path + "L")
        right = evaluate_plan_words(plan.right, _path + "R")
        try:
            return merge_op(left, right)
        except MergePreconditionError as exc:
            if "at plan node" in exc.message:
                raise
            raise MergePreconditionError(
                f"{exc.message} (at plan node {_path or 'root'})"
            ) from exc
    raise TypeError(f"not a plan node: {plan!r}")


def invariant(tree: RootedTree) -> MultiCurve:
    """The curve invariant of a rooted plumbing tree."""
    return evaluate_plan_words(decompose(tree))


def signed_counts(mc: MultiCurve | CyclicWord) -> tuple[int, int]:
    """(signed alpha count, signed beta count) over all components."""
    words = (mc,) if isinstance(mc, CyclicWord) else tuple(mc)
    m = n = 0
    for w in words:
        for l in w.letters:
            if is_beta(l):
                n += letter_sign(l)
            else:
                m += letter_sign(l)
    return m, n
