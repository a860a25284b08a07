"""Data model for weighted key instances and the two comparison-tree families.

An :class:`Instance` is an ordered list of keys with nonnegative integer
weights.  Two tree families search such instances:

* generalized binary split trees (:class:`GbstNode`): every node carries an
  equality-test key and, when it has children, a split key.  A search halts
  on an equality match and otherwise branches on ``query < split``.
* two-way comparison search trees (:class:`Leaf` / :class:`Cmp`): internal
  nodes perform a single equality or less-than comparison; queries resolve
  at leaves.

Costs count one unit per node visited (GBST) or per comparison (2WCST),
weighted by key weight.  All weights and costs are exact integers.  Every
value here is immutable after construction and all operations are pure, so
everything can be shared freely across threads.
"""
from __future__ import annotations

import dataclasses
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Optional, Sequence, Union

__all__ = [
    "ParseError",
    "Instance",
    "Interval",
    "GbstNode",
    "GbstTree",
    "Leaf",
    "Cmp",
    "TwcstTree",
    "EQ",
    "LT",
    "SolveResult",
    "Verdict",
    "parse_instance",
    "format_instance",
    "gbst_cost",
    "gbst_weight",
    "gbst_keys",
    "gbst_nodes",
    "twcst_cost",
    "twcst_weight",
    "twcst_leaf_keys",
    "twcst_leaf_depths",
    "gbst_validate",
    "twcst_validate",
    "check_order_property",
    "replace_subtree",
    "range_mask",
    "mask_of",
    "keys_of",
    "LeastWeightOrder",
]


class ParseError(ValueError):
    """Raised for malformed instance or tree files; names the line."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


_LABEL_RE = re.compile(r"[A-Za-z0-9_]+\Z")
_DIGIT_RUN = re.compile(r"(\d+)")


def natural_key(label: str) -> tuple:
    """Sort key comparing digit runs numerically, so K2 < K10."""
    parts = []
    for chunk in _DIGIT_RUN.split(label):
        if not chunk:
            continue
        if chunk.isdigit():
            parts.append((0, int(chunk), ""))
        else:
            parts.append((1, 0, chunk))
    return tuple(parts)


# ---------------------------------------------------------------------------
# Bitmask helpers.  Key k (1-based) corresponds to bit k-1.
# ---------------------------------------------------------------------------

def range_mask(i: int, j: int) -> int:
    """Mask of keys i..j inclusive; zero when the interval is empty."""
    if i > j:
        return 0
    return (1 << j) - (1 << (i - 1))


def mask_of(keys: Iterable[int]) -> int:
    m = 0
    for k in keys:
        m |= 1 << (k - 1)
    return m


def keys_of(mask: int) -> tuple[int, ...]:
    keys = []
    while mask:
        low = mask & -mask
        keys.append(low.bit_length())
        mask ^= low
    return tuple(keys)


# ---------------------------------------------------------------------------
# Instance and subproblem coordinates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Instance:
    """Ordered keys with nonnegative integer weights.

    Key identity is the 1-based index; labels are cosmetic but must be
    distinct and strictly ascending under natural ordering.
    """

    labels: tuple[str, ...]
    weights: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))
        if len(self.labels) == 0:
            raise ValueError("instance must contain at least one key")
        if len(self.labels) != len(self.weights):
            raise ValueError("labels and weights must have equal length")
        for w in self.weights:
            if w < 0:
                raise ValueError(f"negative weight {w}")
        prev = None
        for lab in self.labels:
            if not _LABEL_RE.match(lab):
                raise ValueError(f"bad label {lab!r}")
            key = natural_key(lab)
            if prev is not None and key <= prev:
                raise ValueError(f"labels not strictly ascending at {lab!r}")
            prev = key

    @property
    def n(self) -> int:
        return len(self.labels)

    @cached_property
    def _prefix(self) -> tuple[int, ...]:
        acc = [0]
        for w in self.weights:
            acc.append(acc[-1] + w)
        return tuple(acc)

    @cached_property
    def _index(self) -> dict[str, int]:
        return {lab: k for k, lab in enumerate(self.labels, 1)}

    def weight(self, key: int) -> int:
        return self.weights[key - 1]

    def label(self, key: int) -> str:
        return self.labels[key - 1]

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"unknown key label {label!r}") from None

    def range_weight(self, i: int, j: int) -> int:
        """Total weight of keys i..j."""
        if i > j:
            return 0
        return self._prefix[j] - self._prefix[i - 1]

    def mask_weight(self, mask: int) -> int:
        total = 0
        while mask:
            low = mask & -mask
            total += self.weights[low.bit_length() - 1]
            mask ^= low
        return total

    def total_weight(self) -> int:
        return self._prefix[-1]

    def full_interval(self) -> "Interval":
        return Interval(1, self.n)

    def scaled(self, c: int) -> "Instance":
        return Instance(self.labels, tuple(w * c for w in self.weights))


@dataclass(frozen=True)
class Interval:
    """Contiguous key range [i, j], 1-based inclusive; empty when i > j."""

    i: int
    j: int

    @property
    def size(self) -> int:
        return max(0, self.j - self.i + 1)

    @property
    def empty(self) -> bool:
        return self.i > self.j

    def keys(self) -> range:
        return range(self.i, self.j + 1)

    def mask(self) -> int:
        return range_mask(self.i, self.j)

    def __contains__(self, key: int) -> bool:
        return self.i <= key <= self.j

    def validate_for(self, n: int) -> None:
        if not (1 <= self.i <= n + 1 and 0 <= self.j <= n and self.i <= self.j + 1):
            raise ValueError(f"interval [{self.i},{self.j}] invalid for n={n}")


def parse_instance(text: str) -> Instance:
    """Parse the instance file format.

    One ``<label> <integer-weight>`` pair per line, ``#`` starts a comment,
    blank lines are ignored.  Keys must be listed in ascending label order.
    """
    labels: list[str] = []
    weights: list[int] = []
    prev_key = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"expected '<label> <weight>', got {line!r}", lineno)
        label, weight_text = parts
        if not _LABEL_RE.match(label):
            raise ParseError(f"bad label {label!r}", lineno)
        try:
            weight = int(weight_text)
        except ValueError:
            raise ParseError(f"non-integer weight {weight_text!r}", lineno) from None
        if weight < 0:
            raise ParseError(f"negative weight {weight}", lineno)
        key = natural_key(label)
        if prev_key is not None:
            if key == prev_key or label in labels:
                raise ParseError(f"duplicate label {label!r}", lineno)
            if key < prev_key:
                raise ParseError(f"label {label!r} out of order", lineno)
        prev_key = key
        labels.append(label)
        weights.append(weight)
    if not labels:
        raise ParseError("no key lines in instance file")
    return Instance(tuple(labels), tuple(weights))


def format_instance(inst: Instance) -> str:
    """Inverse of parse_instance; used to export instances for replay."""
    return "".join(f"{lab} {w}\n" for lab, w in zip(inst.labels, inst.weights))


# ---------------------------------------------------------------------------
# Generalized binary split trees
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GbstNode:
    """One GBST node: equality key, optional split key, optional children.

    ``split`` may be None at leaves.  A node with children routes a query v
    left when ``v < split``, right otherwise (after the equality test).
    """

    eq: int
    split: Optional[int] = None
    left: Optional["GbstNode"] = None
    right: Optional["GbstNode"] = None


# The empty tree is a first-class value, spelled None.
GbstTree = Optional[GbstNode]


def gbst_nodes(tree: GbstTree) -> Iterator[GbstNode]:
    """Canonical preorder traversal (node, left, right)."""
    if tree is None:
        return
    stack = [tree]
    while stack:
        node = stack.pop()
        yield node
        if node.right is not None:
            stack.append(node.right)
        if node.left is not None:
            stack.append(node.left)


def gbst_keys(tree: GbstTree) -> tuple[int, ...]:
    return tuple(sorted(node.eq for node in gbst_nodes(tree)))


def _gbst_cost_weight(tree: GbstTree, inst: Instance) -> tuple[int, int]:
    if tree is None:
        return 0, 0
    if not 1 <= tree.eq <= inst.n:
        raise ValueError(f"equality key {tree.eq} out of range 1..{inst.n}")
    cl, wl = _gbst_cost_weight(tree.left, inst)
    cr, wr = _gbst_cost_weight(tree.right, inst)
    w = wl + wr + inst.weight(tree.eq)
    return w + cl + cr, w


def gbst_cost(tree: GbstTree, inst: Instance) -> int:
    """Sum over nodes of weight(eq) * (depth + 1); the empty tree costs 0.

    Equivalently cost(T) = weight(T) + cost(left) + cost(right).
    """
    return _gbst_cost_weight(tree, inst)[0]


def gbst_weight(tree: GbstTree, inst: Instance) -> int:
    return _gbst_cost_weight(tree, inst)[1]


# ---------------------------------------------------------------------------
# Two-way comparison search trees
# ---------------------------------------------------------------------------

EQ = "eq"
LT = "lt"


@dataclass(frozen=True)
class Leaf:
    key: int


@dataclass(frozen=True)
class Cmp:
    """Internal comparison node; for LT the yes branch handles query < key."""

    op: str
    key: int
    yes: "TwcstTree"
    no: "TwcstTree"

    def __post_init__(self):
        if self.op not in (EQ, LT):
            raise ValueError(f"bad comparison op {self.op!r}")


TwcstTree = Union[Leaf, Cmp]


def twcst_leaf_depths(tree: TwcstTree) -> dict[int, int]:
    """Map leaf key -> number of comparisons on its root-to-leaf path."""
    depths: dict[int, int] = {}
    stack = [(tree, 0)]
    while stack:
        node, depth = stack.pop()
        if isinstance(node, Leaf):
            depths[node.key] = depth
        else:
            stack.append((node.yes, depth + 1))
            stack.append((node.no, depth + 1))
    return depths


def twcst_leaf_keys(tree: TwcstTree) -> tuple[int, ...]:
    keys = []
    stack = [tree]
    while stack:
        node = stack.pop()
        if isinstance(node, Leaf):
            keys.append(node.key)
        else:
            stack.append((node.yes))
            stack.append((node.no))
    return tuple(sorted(keys))


def _twcst_cost_weight(tree: TwcstTree, inst: Instance) -> tuple[int, int]:
    if isinstance(tree, Leaf):
        if not 1 <= tree.key <= inst.n:
            raise ValueError(f"leaf key {tree.key} out of range 1..{inst.n}")
        return 0, inst.weight(tree.key)
    cy, wy = _twcst_cost_weight(tree.yes, inst)
    cn, wn = _twcst_cost_weight(tree.no, inst)
    w = wy + wn
    return w + cy + cn, w


def twcst_cost(tree: TwcstTree, inst: Instance) -> int:
    """Sum over leaves of weight * comparisons-on-path; a lone Leaf costs 0."""
    return _twcst_cost_weight(tree, inst)[0]


def twcst_weight(tree: TwcstTree, inst: Instance) -> int:
    return _twcst_cost_weight(tree, inst)[1]


# ---------------------------------------------------------------------------
# Validity checking
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Verdict:
    """Outcome of a validity check; invalid trees get violations, not errors."""

    ok: bool
    violations: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.ok

    @staticmethod
    def failures(violations: Sequence[str]) -> "Verdict":
        return Verdict(not violations, tuple(violations))


def _expected_keys(interval: Interval, holes: Iterable[int], n: int) -> set[int]:
    interval.validate_for(n)
    holes = set(holes)
    if not holes <= set(interval.keys()):
        raise ValueError("hole set must be contained in the interval")
    return set(interval.keys()) - holes


def gbst_validate(
    tree: GbstTree, interval: Interval, holes: Iterable[int], inst: Instance
) -> Verdict:
    """Check that *tree* solves subproblem (interval, holes).

    Valid iff the equality keys are exactly interval minus holes and the
    simulated search for every such key (halt on equality, else branch on
    the split key) ends at that key's node.  Split-key routing is checked
    behaviorally; any separating value is acceptable.
    """
    expected = _expected_keys(interval, holes, inst.n)
    violations: list[str] = []

    nodes = list(gbst_nodes(tree))
    eqs = [node.eq for node in nodes]
    seen: set[int] = set()
    for eq in eqs:
        if eq in seen:
            violations.append(f"duplicate equality key {eq}")
        seen.add(eq)
    for eq in sorted(seen - expected):
        violations.append(f"unexpected equality key {eq}")
    for missing in sorted(expected - seen):
        violations.append(f"missing equality key {missing}")
    if violations:
        return Verdict.failures(violations)

    for v in sorted(expected):
        node = tree
        while node is not None:
            if node.eq == v:
                break
            if node.split is None:
                violations.append(f"search for {v} stuck at node {node.eq} (no split key)")
                node = None
                break
            node = node.left if v < node.split else node.right
        else:
            violations.append(f"search for {v} fell off the tree")
    return Verdict.failures(violations)


def twcst_validate(
    tree: TwcstTree, interval: Interval, holes: Iterable[int], inst: Instance
) -> Verdict:
    """Check that *tree* resolves every non-hole key of the interval at its leaf."""
    expected = _expected_keys(interval, holes, inst.n)
    violations: list[str] = []

    leaf_list = []
    stack = [tree]
    while stack:
        node = stack.pop()
        if isinstance(node, Leaf):
            leaf_list.append(node.key)
        else:
            stack.append(node.yes)
            stack.append(node.no)
    seen: set[int] = set()
    for k in leaf_list:
        if k in seen:
            violations.append(f"duplicate leaf key {k}")
        seen.add(k)
    for k in sorted(seen - expected):
        violations.append(f"unexpected leaf key {k}")
    for k in sorted(expected - seen):
        violations.append(f"missing leaf key {k}")
    if violations:
        return Verdict.failures(violations)

    for v in sorted(expected):
        node = tree
        while isinstance(node, Cmp):
            if node.op == EQ:
                node = node.yes if v == node.key else node.no
            else:
                node = node.yes if v < node.key else node.no
        if node.key != v:
            violations.append(f"search for {v} ends at leaf {node.key}")
    return Verdict.failures(violations)


def check_order_property(tree: GbstTree) -> Verdict:
    """Keys in left and right subtrees of any node must be ordered across it.

    For every node M, every equality key in M's left subtree must be less
    than every equality key in M's right subtree.  (M's own key is free.)
    """
    violations: list[str] = []

    def span(node: GbstTree) -> tuple[int, int] | None:
        if node is None:
            return None
        lo = hi = node.eq
        ls = span(node.left)
        rs = span(node.right)
        if ls and rs and ls[1] >= rs[0]:
            violations.append(
                f"keys around node {node.eq}: left max {ls[1]} >= right min {rs[0]}"
            )
        for s in (ls, rs):
            if s:
                lo = min(lo, s[0])
                hi = max(hi, s[1])
        return lo, hi

    span(tree)
    return Verdict.failures(violations)


# ---------------------------------------------------------------------------
# Structural surgery
# ---------------------------------------------------------------------------

def replace_subtree(tree, path: Sequence[str], replacement):
    """Return a new tree with the subtree at *path* replaced.

    *path* is a sequence of 'L'/'R' directions from the root; for 2WCST
    trees 'L' means the yes branch.  The original tree is unchanged.
    Raises IndexError when the path does not address an existing position.
    """
    path = list(path)
    for step in path:
        if step not in ("L", "R"):
            raise ValueError(f"bad path step {step!r}")

    def rec(node, k: int):
        if k == len(path):
            return replacement
        if node is None or isinstance(node, Leaf):
            raise IndexError(f"path runs past the tree at step {k}")
        step = path[k]
        if isinstance(node, GbstNode):
            if step == "L":
                return dataclasses.replace(node, left=rec(node.left, k + 1))
            return dataclasses.replace(node, right=rec(node.right, k + 1))
        if step == "L":
            return dataclasses.replace(node, yes=rec(node.yes, k + 1))
        return dataclasses.replace(node, no=rec(node.no, k + 1))

    return rec(tree, 0)


# ---------------------------------------------------------------------------
# Solver output and least-weight key selection
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SolveResult:
    """Solver output: cost, tree, the key set actually placed, its weight."""

    cost: int
    tree: object
    used_mask: int
    weight: int

    @property
    def used_keys(self) -> tuple[int, ...]:
        return keys_of(self.used_mask)

    def holes_in(self, interval: Interval) -> tuple[int, ...]:
        return keys_of(interval.mask() & ~self.used_mask)


class LeastWeightOrder:
    """Least-(weight, index) key selection over mask-encoded key sets.

    Keys are re-indexed by ascending (weight, index) rank so that picking a
    least-weight key from any subset is a lowest-set-bit operation on the
    rank-permuted mask.
    """

    def __init__(self, inst: Instance):
        order = sorted(range(1, inst.n + 1), key=lambda k: (inst.weight(k), k))
        self.key_at_rank = tuple(order)
        bits = [0] * (inst.n + 1)
        for rank, key in enumerate(order):
            bits[key] = 1 << rank
        self._bit = tuple(bits)
        self._interval_cache: dict[tuple[int, int], int] = {}

    def bit(self, key: int) -> int:
        return self._bit[key]

    def perm_mask(self, keys: Iterable[int]) -> int:
        m = 0
        for k in keys:
            m |= self._bit[k]
        return m

    def interval_perm(self, i: int, j: int) -> int:
        try:
            return self._interval_cache[(i, j)]
        except KeyError:
            m = self.perm_mask(range(i, j + 1))
            self._interval_cache[(i, j)] = m
            return m

    def least(self, perm_mask: int) -> int:
        """Key with the lowest (weight, index) among a nonempty permuted mask."""
        low = perm_mask & -perm_mask
        return self.key_at_rank[low.bit_length() - 1]
