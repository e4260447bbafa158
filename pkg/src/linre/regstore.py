"""Per-thread register stores.

Three representations with one interface:

* ``array``: a mutable list copied on every fork (O(R) fork, O(1) set)
* ``list``: an immutable linked list of updates (O(1) fork, O(1) set,
  materialization walks the lineage)
* ``tree``: a persistent complete binary tree (O(1) fork, O(log R) set)

The VM backends inline the raw helpers below; the handle classes exist for
callers that want the uniform object interface.
"""

from __future__ import annotations

import enum
from typing import Optional

UNDEF = -1


class StoreKind(enum.Enum):
    ARRAY = "array"
    LIST = "list"
    TREE = "tree"


# ---- immutable update list: None or (index, value, parent)


def list_materialize(cell, size: int) -> list[int]:
    out = [UNDEF] * size
    seen = [False] * size
    while cell is not None:
        idx, val, cell = cell
        if not seen[idx]:
            seen[idx] = True
            out[idx] = val
    return out


# ---- persistent tree: leaves are ints, inner nodes are 2-tuples


def tree_depth(size: int) -> int:
    d = 1
    while (1 << d) < size:
        d += 1
    return d


def tree_empty(depth: int):
    node = UNDEF
    for _ in range(depth):
        node = (node, node)
    return node


def tree_set(tree, depth: int, idx: int, val: int):
    path = []
    node = tree
    for d in range(depth - 1, -1, -1):
        bit = (idx >> d) & 1
        path.append((node, bit))
        node = node[bit]
    new = val
    for node, bit in reversed(path):
        new = (node[0], new) if bit else (new, node[1])
    return new


def tree_get(tree, depth: int, idx: int) -> int:
    node = tree
    for d in range(depth - 1, -1, -1):
        node = node[(idx >> d) & 1]
    return node


def tree_materialize(tree, depth: int, size: int) -> list[int]:
    out: list[int] = []
    stack = [(tree, depth)]
    while stack and len(out) < size:
        node, d = stack.pop()
        if d == 0:
            out.append(node)
        else:
            stack.append((node[1], d - 1))
            stack.append((node[0], d - 1))
    return out[:size]


# ---- object handles


class RegisterStore:
    kind: StoreKind

    def set(self, index: int, value: int) -> "RegisterStore":
        raise NotImplementedError

    def fork(self) -> "RegisterStore":
        raise NotImplementedError

    def materialize(self) -> list[int]:
        raise NotImplementedError


class ArrayStore(RegisterStore):
    kind = StoreKind.ARRAY

    def __init__(self, size: int, data: Optional[list[int]] = None):
        self.size = size
        self.data = [UNDEF] * size if data is None else data
        self.copies = 0

    def set(self, index, value):
        self.data[index] = value
        return self

    def fork(self):
        self.copies += self.size
        return ArrayStore(self.size, self.data[:])

    def materialize(self):
        return list(self.data)


class ListStore(RegisterStore):
    kind = StoreKind.LIST

    def __init__(self, size: int, cell=None):
        self.size = size
        self.cell = cell

    def set(self, index, value):
        if not 0 <= index < self.size:
            raise IndexError(index)
        self.cell = (index, value, self.cell)
        return self

    def fork(self):
        return ListStore(self.size, self.cell)

    def materialize(self):
        return list_materialize(self.cell, self.size)


class TreeStore(RegisterStore):
    kind = StoreKind.TREE

    def __init__(self, size: int, tree=None):
        self.size = size
        self.depth = tree_depth(size)
        self.tree = tree_empty(self.depth) if tree is None else tree

    def set(self, index, value):
        if not 0 <= index < self.size:
            raise IndexError(index)
        self.tree = tree_set(self.tree, self.depth, index, value)
        return self

    def get(self, index: int) -> int:
        return tree_get(self.tree, self.depth, index)

    def fork(self):
        return TreeStore(self.size, self.tree)

    def materialize(self):
        return tree_materialize(self.tree, self.depth, self.size)


def make_store(kind: StoreKind | str, size: int) -> RegisterStore:
    kind = StoreKind(kind)
    if kind is StoreKind.ARRAY:
        return ArrayStore(size)
    if kind is StoreKind.LIST:
        return ListStore(size)
    return TreeStore(size)
