"""Rooted plumbing trees and their exact linear algebra.

A rooted tree is a weighted tree with a distinguished root vertex.  Trees are
built from the one-vertex weight-0 tree by three elementary moves: twist adds
to the root weight, extend attaches a fresh 0-weighted root, merge identifies
the roots of two trees and adds their weights.  ``decompose`` inverts this
construction into a build plan.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from .errors import InvalidTreeError


class _Infinity:
    """Marker for an infinite filling slope (a value, not an error)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "inf"


INFINITY = _Infinity()

Slope = Union[Fraction, _Infinity]


@dataclass(frozen=True)
class RootedTree:
    """Weighted tree with a distinguished root.

    ``vertices`` keeps insertion order; ``edges`` holds sorted id pairs.
    Instances are validated on construction: connected, acyclic, unique ids,
    existing root and edge endpoints.
    """

    vertices: tuple[tuple[str, int], ...]
    edges: tuple[tuple[str, str], ...]
    root: str

    def __post_init__(self):
        ids = [v for v, _ in self.vertices]
        seen = set()
        for v in ids:
            if v in seen:
                raise InvalidTreeError("duplicate-id", f"duplicate vertex id {v!r}")
            seen.add(v)
        if self.root not in seen:
            raise InvalidTreeError("unknown-root", f"root {self.root!r} is not a vertex")
        adj: dict[str, list[str]] = {v: [] for v in ids}
        edge_set = set()
        for u, v in self.edges:
            if u not in seen or v not in seen:
                missing = u if u not in seen else v
                raise InvalidTreeError(
                    "unknown-endpoint", f"edge endpoint {missing!r} is not a vertex"
                )
            if u == v or (u, v) in edge_set:
                raise InvalidTreeError("cycle", f"edge ({u!r}, {v!r}) creates a cycle")
            edge_set.add((u, v))
            adj[u].append(v)
            adj[v].append(u)
        if len(self.edges) != len(ids) - 1:
            raise InvalidTreeError("cycle", "edge count exceeds vertex count - 1")
        stack, reached = [self.root], {self.root}
        while stack:
            for w in adj[stack.pop()]:
                if w not in reached:
                    reached.add(w)
                    stack.append(w)
        if len(reached) != len(ids):
            raise InvalidTreeError("disconnected", "tree is not connected")

    # -- accessors ---------------------------------------------------------

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(v for v, _ in self.vertices)

    def weight(self, v: str) -> int:
        for u, w in self.vertices:
            if u == v:
                return w
        raise KeyError(v)

    def weight_map(self) -> dict[str, int]:
        return dict(self.vertices)

    def adjacency(self) -> dict[str, list[str]]:
        adj: dict[str, list[str]] = {v: [] for v, _ in self.vertices}
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        for nbrs in adj.values():
            nbrs.sort()
        return adj

    def neighbors(self, v: str) -> list[str]:
        return self.adjacency()[v]

    def valence(self, v: str) -> int:
        return sum(1 for u, w in self.edges if v in (u, w))

    def __len__(self) -> int:
        return len(self.vertices)


def make_tree(
    vertices: Iterable[tuple[str, int]],
    edges: Iterable[Sequence[str]],
    root: str,
) -> RootedTree:
    vs = tuple((str(v), int(w)) for v, w in vertices)
    es = tuple(sorted(tuple(sorted((str(u), str(v)))) for u, v in edges))
    return RootedTree(vs, es, str(root))


def parse_tree(text: str) -> RootedTree:
    """Parse the JSON tree document format.

    The document is an object with exactly the keys "vertices" (array of
    {"id": str, "weight": int}), "edges" (array of 2-element id arrays) and
    "root" (str).
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidTreeError("malformed", f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict) or set(doc) != {"vertices", "edges", "root"}:
        raise InvalidTreeError(
            "malformed", 'document must have exactly the keys "vertices", "edges", "root"'
        )
    vertices = []
    if not isinstance(doc["vertices"], list):
        raise InvalidTreeError("malformed", '"vertices" must be an array')
    for entry in doc["vertices"]:
        if (
            not isinstance(entry, dict)
            or set(entry) != {"id", "weight"}
            or not isinstance(entry["id"], str)
            or not isinstance(entry["weight"], int)
            or isinstance(entry["weight"], bool)
        ):
            raise InvalidTreeError(
                "malformed", 'each vertex must be {"id": string, "weight": integer}'
            )
        vertices.append((entry["id"], entry["weight"]))
    if not isinstance(doc["edges"], list):
        raise InvalidTreeError("malformed", '"edges" must be an array')
    edges = []
    for pair in doc["edges"]:
        if not (
            isinstance(pair, list)
            and len(pair) == 2
            and all(isinstance(x, str) for x in pair)
        ):
            raise InvalidTreeError("malformed", "each edge must be a 2-element id array")
        edges.append(tuple(pair))
    if not isinstance(doc["root"], str):
        raise InvalidTreeError("malformed", '"root" must be a string')
    if not vertices:
        raise InvalidTreeError("malformed", "tree needs at least one vertex")
    return make_tree(vertices, edges, doc["root"])


def tree_to_json(tree: RootedTree) -> dict:
    return {
        "vertices": [{"id": v, "weight": w} for v, w in tree.vertices],
        "edges": [list(e) for e in tree.edges],
        "root": tree.root,
    }


def tree_digest(tree: RootedTree) -> str:
    doc = {
        "vertices": sorted(tree.vertices),
        "edges": sorted(tree.edges),
        "root": tree.root,
    }
    blob = json.dumps(doc, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def canonical_code(tree: RootedTree, root: Optional[str] = None) -> str:
    """Relabelling-invariant code of the rooted tree (weighted AHU encoding)."""
    adj = tree.adjacency()
    weights = tree.weight_map()

    def code(v: str, parent: Optional[str]) -> str:
        subs = sorted(code(u, v) for u in adj[v] if u != parent)
        return "(" + str(weights[v]) + ";" + ",".join(subs) + ")"

    return code(root if root is not None else tree.root, None)


def trees_equal_up_to_relabel(a: RootedTree, b: RootedTree) -> bool:
    return canonical_code(a) == canonical_code(b)


# ---------------------------------------------------------------------------
# Elementary moves
# ---------------------------------------------------------------------------


def twist_tree(tree: RootedTree, m: int) -> RootedTree:
    """Add m to the root weight."""
    vs = tuple((v, w + m if v == tree.root else w) for v, w in tree.vertices)
    return RootedTree(vs, tree.edges, tree.root)


def _fresh_id(taken: set[str]) -> str:
    i = 0
    while f"x{i}" in taken:
        i += 1
    return f"x{i}"


def extend_tree(tree: RootedTree) -> RootedTree:
    """Attach a fresh 0-weighted vertex to the root and make it the new root."""
    new = _fresh_id(set(tree.ids))
    vs = tree.vertices + ((new, 0),)
    es = tuple(sorted(tree.edges + (tuple(sorted((new, tree.root))),)))
    return RootedTree(vs, es, new)


def merge_trees(left: RootedTree, right: RootedTree) -> RootedTree:
    """Identify the two roots, adding their weights.

    Vertex-id collisions are resolved by renaming on the right input; this is
    bookkeeping, never a user error.
    """
    taken = set(left.ids)
    rename: dict[str, str] = {right.root: left.root}
    for v in right.ids:
        if v == right.root:
            continue
        new = v
        while new in taken:
            new = new + "'"
        rename[v] = new
        taken.add(new)
    vs = list(left.vertices)
    root_weight = left.weight(left.root) + right.weight(right.root)
    vs = [(v, root_weight if v == left.root else w) for v, w in vs]
    vs.extend((rename[v], w) for v, w in right.vertices if v != right.root)
    es = list(left.edges) + [
        tuple(sorted((rename[u], rename[v]))) for u, v in right.edges
    ]
    return RootedTree(tuple(vs), tuple(sorted(es)), left.root)


# ---------------------------------------------------------------------------
# Reduction
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ReduceResult:
    tree: RootedTree
    is_reduced: bool
    blocked: tuple[str, ...]  # offending vertices the rules cannot remove


def reduce_tree(tree: RootedTree) -> ReduceResult:
    """Apply blow-downs of (+-1)-weighted leaves and collapses of 0-weighted
    valence-2 vertices (never the root) until no rule applies.

    A leftover non-root valence-1 or valence-2 vertex with weight 0 or +-1
    witnesses that the result is not reduced; it is reported, not rewritten.
    """
    weights = tree.weight_map()
    adj = {v: set(ns) for v, ns in tree.adjacency().items()}
    order = list(tree.ids)
    root = tree.root

    changed = True
    while changed:
        changed = False
        for v in sorted(adj):
            if v == root:
                continue
            nbrs = adj[v]
            if len(nbrs) == 1 and weights[v] in (1, -1):
                (u,) = nbrs
                weights[u] -= weights[v]
                adj[u].discard(v)
                del adj[v], weights[v]
                changed = True
                break
            if len(nbrs) == 2 and weights[v] == 0:
                u, w = sorted(nbrs)
                keep, drop = (u, w)
                if w == root:
                    keep, drop = w, u
                weights[keep] += weights[drop]
                adj[u].discard(v)
                adj[w].discard(v)
                del adj[v], weights[v]
                for x in adj[drop]:
                    adj[x].discard(drop)
                    adj[x].add(keep)
                    adj[keep].add(x)
                del adj[drop], weights[drop]
                changed = True
                break

    remaining = [v for v in order if v in weights]
    edges = sorted(
        tuple(sorted((u, v))) for u in adj for v in adj[u] if u < v
    )
    out = make_tree([(v, weights[v]) for v in remaining], edges, root)
    blocked = tuple(
        v
        for v in sorted(out.ids)
        if v != root and out.valence(v) in (1, 2) and out.weight(v) in (-1, 0, 1)
    )
    return ReduceResult(out, not blocked, blocked)


# ---------------------------------------------------------------------------
# Build plans
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Base:
    pass


@dataclass(frozen=True)
class Twist:
    m: int
    child: "Plan"


@dataclass(frozen=True)
class Extend:
    child: "Plan"


@dataclass(frozen=True)
class Merge:
    left: "Plan"
    right: "Plan"


Plan = Union[Base, Twist, Extend, Merge]


def _branch(tree: RootedTree, child: str) -> RootedTree:
    """The component of tree - root containing ``child``, rooted at child."""
    adj = tree.adjacency()
    keep = {child}
    stack = [child]
    while stack:
        for u in adj[stack.pop()]:
            if u != tree.root and u not in keep:
                keep.add(u)
                stack.append(u)
    weights = tree.weight_map()
    vs = [(v, weights[v]) for v in tree.ids if v in keep]
    es = [e for e in tree.edges if e[0] in keep and e[1] in keep]
    return make_tree(vs, es, child)


def _with_branches(tree: RootedTree, children: Sequence[str]) -> RootedTree:
    """Root (weight 0) together with the branches at the given children."""
    adj = tree.adjacency()
    keep = {tree.root}
    stack = list(children)
    keep.update(children)
    while stack:
        for u in adj[stack.pop()]:
            if u != tree.root and u not in keep:
                keep.add(u)
                stack.append(u)
    weights = tree.weight_map()
    vs = [(v, 0 if v == tree.root else weights[v]) for v in tree.ids if v in keep]
    chosen = set(children)
    es = [
        e
        for e in tree.edges
        if e[0] in keep
        and e[1] in keep
        and (tree.root not in e or e[0] in chosen or e[1] in chosen)
    ]
    return make_tree(vs, es, tree.root)


def _branch_key(branch: RootedTree) -> tuple:
    weights = sorted(w for _, w in branch.vertices)
    return (len(branch), tuple(weights), canonical_code(branch))


def decompose(tree: RootedTree) -> Plan:
    """Express the tree as twists, extends and merges of the base tree.

    Nonzero root weight peels off a twist; a 0-weighted leaf root peels off an
    extend; a 0-weighted root of valence >= 2 splits as a merge of the first
    child branch against the rest, children ordered by a canonical key.
    Evaluating the plan reproduces the tree up to relabelling.
    """
    m = tree.weight(tree.root)
    if m != 0:
        return Twist(m, decompose(twist_tree(tree, -m)))
    val = tree.valence(tree.root)
    if val == 0:
        return Base()
    if val == 1:
        (child,) = tree.neighbors(tree.root)
        return Extend(decompose(_branch(tree, child)))
    children = sorted(
        tree.neighbors(tree.root), key=lambda c: _branch_key(_branch(tree, c))
    )
    first, rest = children[0], children[1:]
    return Merge(
        decompose(_with_branches(tree, [first])),
        decompose(_with_branches(tree, rest)),
    )


_BASE_TREE = make_tree([("v", 0)], [], "v")


def evaluate_plan(plan: Plan) -> RootedTree:
    """Evaluate a build plan back into a rooted tree."""
    if isinstance(plan, Base):
        return _BASE_TREE
    if isinstance(plan, Twist):
        return twist_tree(evaluate_plan(plan.child), plan.m)
    if isinstance(plan, Extend):
        return extend_tree(evaluate_plan(plan.child))
    if isinstance(plan, Merge):
        return merge_trees(evaluate_plan(plan.left), evaluate_plan(plan.right))
    raise TypeError(f"not a plan node: {plan!r}")


def plan_to_str(plan: Plan) -> str:
    if isinstance(plan, Base):
        return "Base"
    if isinstance(plan, Twist):
        return f"Twist({plan.m})({plan_to_str(plan.child)})"
    if isinstance(plan, Extend):
        return f"Extend({plan_to_str(plan.child)})"
    return f"Merge({plan_to_str(plan.left)}, {plan_to_str(plan.right)})"


# ---------------------------------------------------------------------------
# Intersection form, determinant, signature
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IntForm:
    """Symmetric intersection matrix, rows/columns in sorted vertex-id order."""

    order: tuple[str, ...]
    matrix: tuple[tuple[int, ...], ...]


def intersection_form(tree: RootedTree) -> IntForm:
    order = tuple(sorted(tree.ids))
    index = {v: i for i, v in enumerate(order)}
    n = len(order)
    m = [[0] * n for _ in range(n)]
    for v, w in tree.vertices:
        m[index[v]][index[v]] = w
    for u, v in tree.edges:
        m[index[u]][index[v]] = 1
        m[index[v]][index[u]] = 1
    return IntForm(order, tuple(tuple(row) for row in m))


def determinant(matrix: Sequence[Sequence[int]]) -> int:
    """Exact integer determinant by fraction-free Bareiss elimination."""
    n = len(matrix)
    if n == 0:
        return 1
    a = [list(row) for row in matrix]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def signature_profile(matrix: Sequence[Sequence[int]]) -> tuple[int, int, int]:
    """(positives, negatives, nullity) of a symmetric matrix.

    Symmetric congruence diagonalization over exact rationals.  When every
    remaining diagonal entry vanishes but some off-diagonal a_ij does not, the
    congruence "add row and column j to i" turns the 2x2 hyperbolic block into
    a usable pivot, which is the block-pivoting fallback.
    """
    n = len(matrix)
    a = [[Fraction(x) for x in row] for row in matrix]
    pos = neg = null = 0
    for k in range(n):
        pivot = next((i for i in range(k, n) if a[i][i] != 0), None)
        if pivot is None:
            off = next(
                (
                    (i, j)
                    for i in range(k, n)
                    for j in range(i + 1, n)
                    if a[i][j] != 0
                ),
                None,
            )
            if off is None:
                null += n - k
                break
            i, j = off
            for t in range(n):
                a[i][t] += a[j][t]
            for t in range(n):
                a[t][i] += a[t][j]
            pivot = i
        if pivot != k:
            a[k], a[pivot] = a[pivot], a[k]
            for row in a:
                row[k], row[pivot] = row[pivot], row[k]
        d = a[k][k]
        if d > 0:
            pos += 1
        else:
            neg += 1
        for i in range(k + 1, n):
            if a[i][k] == 0:
                continue
            f = a[i][k] / d
            for j in range(k, n):
                a[i][j] -= f * a[k][j]
        for j in range(k + 1, n):
            a[k][j] = Fraction(0)
        for i in range(k + 1, n):
            a[i][k] = Fraction(0)
    return pos, neg, null


def det_and_signature(form: IntForm | Sequence[Sequence[int]]) -> tuple[int, int]:
    matrix = form.matrix if isinstance(form, IntForm) else form
    pos, neg, _ = signature_profile(matrix)
    return determinant(matrix), pos - neg


# ---------------------------------------------------------------------------
# The stripped filling slope r_*
# ---------------------------------------------------------------------------


def _slope_inverse(x: Slope) -> Slope:
    if x is INFINITY:
        return Fraction(0)
    if x == 0:
        return INFINITY
    return 1 / x


def _slope_sub(a: int, x: Slope) -> Slope:
    if x is INFINITY:
        return INFINITY
    return Fraction(a) - x


def r_star(tree: RootedTree) -> Slope:
    """Filling slope in the stripped parametrization, as a continued fraction.

    Leaf roots are stripped one by one (an isolated vertex does not count as
    a leaf), collecting weights a_n, ..., a_1; with a_0 the weight of the
    final root, the slope is a_0 - 1/(a_1 - 1/(... - 1/a_n)).  With nothing
    stripped the slope is a_0 itself.  A vanishing denominator yields the
    INFINITY marker.
    """
    weights = tree.weight_map()
    adj = {v: set(ns) for v, ns in tree.adjacency().items()}
    root = tree.root
    stripped: list[int] = []  # a_n first
    while len(adj[root]) == 1:
        stripped.append(weights[root])
        (nxt,) = adj[root]
        adj[nxt].discard(root)
        del adj[root], weights[root]
        root = nxt
    a0 = weights[root]
    if not stripped:
        return Fraction(a0)
    tail: Slope = Fraction(stripped[0])
    for a in stripped[1:]:
        tail = _slope_sub(a, _slope_inverse(tail))
    return _slope_sub(a0, _slope_inverse(tail))


def slope_is_integral_or_infinite(r: Slope) -> bool:
    return r is INFINITY or r.denominator == 1
