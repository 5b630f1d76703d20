"""Greedy highest-influence decision trees and their exact L2 error."""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DomainError
from .restrictions import fix_coordinate
from .spectral import FourierExpansion, influences, variance


@dataclass(frozen=True)
class Leaf:
    value: float


@dataclass(frozen=True)
class Node:
    query: int
    on_plus: "DecisionTree"
    on_minus: "DecisionTree"


DecisionTree = Union[Leaf, Node]


def depth(tree: DecisionTree) -> int:
    if isinstance(tree, Leaf):
        return 0
    return 1 + max(depth(tree.on_plus), depth(tree.on_minus))


def evaluate_tree(tree: DecisionTree, x: int) -> float:
    while isinstance(tree, Node):
        tree = tree.on_minus if (x >> tree.query) & 1 else tree.on_plus
    return tree.value


def check_paths(tree: DecisionTree, seen: frozenset = frozenset()) -> bool:
    """True when no coordinate is queried twice along a root-to-leaf path."""
    if isinstance(tree, Leaf):
        return True
    if tree.query in seen:
        return False
    seen = seen | {tree.query}
    return check_paths(tree.on_plus, seen) and check_paths(tree.on_minus, seen)


def max_influence(f: FourierExpansion) -> tuple[int, float]:
    """Most influential coordinate and its influence; ties go to the lowest index."""
    if f.n == 0:
        raise DomainError("function has no coordinates")
    inf = influences(f)
    i = int(np.argmax(inf))
    return i, float(inf[i])


def greedy_influence_tree(
    f: FourierExpansion,
    var_threshold: float,
    depth_budget: int,
    bounded: bool | None = None,
) -> DecisionTree:
    """Query the most influential coordinate, restrict, recurse.

    A branch stops with a leaf holding the restricted mean once its variance
    is at most ``var_threshold``, nothing has positive influence, or the
    budget is spent.  Leaf values are clamped to [0, 1] only for bounded f.
    """
    if var_threshold < 0 or depth_budget < 0:
        raise DomainError("threshold and budget must be nonnegative")
    clamp = f.bounded if bounded is None else bounded

    def leaf(g: FourierExpansion) -> Leaf:
        v = g.mean
        return Leaf(min(max(v, 0.0), 1.0) if clamp else v)

    def build(g: FourierExpansion, budget: int) -> DecisionTree:
        if budget == 0 or variance(g) <= var_threshold:
            return leaf(g)
        i, inf = max_influence(g)
        if inf <= 0:
            return leaf(g)
        return Node(i, build(fix_coordinate(g, i, 1), budget - 1),
                    build(fix_coordinate(g, i, -1), budget - 1))

    return build(f, depth_budget)


def tree_error(f: FourierExpansion, tree: DecisionTree) -> float:
    """E_x[(f(x) - T(x))^2] via restrictions along each path.

    A leaf reached with probability w under restriction rho contributes
    w * (Var[f_rho] + (E[f_rho] - value)^2).
    """
    def walk(g: FourierExpansion, t: DecisionTree, weight: float) -> float:
        if isinstance(t, Leaf):
            return weight * (variance(g) + (g.mean - t.value) ** 2)
        if not 0 <= t.query < f.n:
            raise DomainError(f"tree queries coordinate {t.query} outside n={f.n}")
        half = weight / 2
        return (walk(fix_coordinate(g, t.query, 1), t.on_plus, half)
                + walk(fix_coordinate(g, t.query, -1), t.on_minus, half))

    return walk(f, tree, 1.0)


def serialize(tree: DecisionTree) -> str:
    if isinstance(tree, Leaf):
        return f"leaf({tree.value!r})"
    return f"(q={tree.query} + {serialize(tree.on_plus)} - {serialize(tree.on_minus)})"


_TOKEN = re.compile(r"\s*(\(q=(\d+)|leaf\(([^)]*)\)|\+|-(?!\d)|\))")


def parse_tree(text: str) -> DecisionTree:
    pos = 0

    def expect(tok: str):
        nonlocal pos
        m = _TOKEN.match(text, pos)
        if not m or m.group(1) != tok:
            raise ValueError(f"expected {tok!r} at offset {pos}")
        pos = m.end()

    def node() -> DecisionTree:
        nonlocal pos
        m = _TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"cannot parse tree at offset {pos}")
        pos = m.end()
        if m.group(3) is not None:
            return Leaf(float(m.group(3)))
        if m.group(2) is None:
            raise ValueError(f"unexpected token at offset {m.start()}")
        q = int(m.group(2))
        expect("+")
        plus = node()
        expect("-")
        minus = node()
        expect(")")
        return Node(q, plus, minus)

    tree = node()
    if text[pos:].strip():
        raise ValueError("trailing text after tree")
    return tree
