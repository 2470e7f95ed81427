"""Rooted link-cut forest over nodes 1..n.

Each node keeps a pointer to the node it decodes from. The forest is
never re-rooted, so no reversal bits are needed: splay trees are keyed
by depth and the aux tree of ``v`` after an access holds exactly its root
path. The splay kernels are compiled with numba and work on one int64
table with rows LEFT, RIGHT, UP (splay parent or path parent), SIZE and
PARENT (the represented forest).

Every link and cut is pushed onto an undo stack while ``recording`` is on,
so a caller can roll the forest back to an earlier mark.
"""
from __future__ import annotations

import numpy as np
from numba import njit

LEFT, RIGHT, UP, SIZE, PARENT = range(5)


class ForestError(ValueError):
    pass


class WouldCycle(ForestError):
    pass


class NotRoot(ForestError):
    pass


class AlreadyRoot(ForestError):
    pass


class OutOfRange(ForestError):
    pass


@njit(cache=True)
def _rotate(T, x):
    L = T[0]
    R = T[1]
    U = T[2]
    S = T[3]
    p = U[x]
    g = U[p]
    if L[p] == x:
        b = R[x]
        L[p] = b
        R[x] = p
    else:
        b = L[x]
        R[p] = b
        L[x] = p
    if b != 0:
        U[b] = p
    if g != 0:
        if L[g] == p:
            L[g] = x
        elif R[g] == p:
            R[g] = x
    U[x] = g
    U[p] = x
    S[p] = S[L[p]] + S[R[p]] + 1
    S[x] = S[L[x]] + S[R[x]] + 1


@njit(cache=True)
def _splay(T, x):
    L = T[0]
    R = T[1]
    U = T[2]
    while True:
        p = U[x]
        if p == 0 or (L[p] != x and R[p] != x):
            return
        g = U[p]
        if g != 0 and (L[g] == p or R[g] == p):
            if (L[g] == p) == (L[p] == x):
                _rotate(T, p)
            else:
                _rotate(T, x)
        _rotate(T, x)


@njit(cache=True)
def _access(T, x):
    L = T[0]
    R = T[1]
    U = T[2]
    S = T[3]
    last = 0
    y = x
    while y != 0:
        _splay(T, y)
        R[y] = last
        S[y] = S[L[y]] + S[last] + 1
        last = y
        y = U[y]
    _splay(T, x)


@njit(cache=True)
def _find_root(T, v):
    _access(T, v)
    L = T[0]
    r = v
    while L[r] != 0:
        r = L[r]
    _splay(T, r)
    return r


@njit(cache=True)
def _depth(T, v):
    _access(T, v)
    return T[3][T[0][v]]


@njit(cache=True)
def _kth(T, v, k):
    depth = _depth(T, v)
    L = T[0]
    R = T[1]
    S = T[3]
    idx = depth - k
    node = v
    while True:
        ls = S[L[node]]
        if idx < ls:
            node = L[node]
        elif idx == ls:
            break
        else:
            idx -= ls + 1
            node = R[node]
    _splay(T, node)
    return node


@njit(cache=True)
def _cut(T, J, top, child):
    _access(T, child)
    L = T[0]
    a = L[child]
    T[2][a] = 0
    L[child] = 0
    T[3][child] = T[3][T[1][child]] + 1
    J[top, 0] = child
    J[top, 1] = T[4][child]
    T[4][child] = 0
    return top + 1


@njit(cache=True)
def _link(T, J, top, child, parent):
    """Returns the new stack top, or -1 when the edge would close a cycle."""
    if child == parent or _find_root(T, parent) == child:
        return -1
    _access(T, child)
    T[2][child] = parent
    T[4][child] = parent
    J[top, 0] = child
    J[top, 1] = 0
    return top + 1


@njit(cache=True)
def _rollback(T, J, top, mark):
    while top > mark:
        top -= 1
        child = J[top, 0]
        old = J[top, 1]
        if old == 0:
            _cut(T, J, top, child)  # overwrites slot `top`, which is being popped
        else:
            _access(T, child)
            T[2][child] = old
            T[4][child] = old
    return top


@njit(cache=True)
def _relink(T, J, top, start, end, offset, q0, do_cuts, pinned):
    """Re-point positions start..end-1 to position+offset.

    Cuts every edge that changes (when ``do_cuts``), then links from ``q0``
    on. Positions that already carry the right edge or are pinned are
    skipped. Stops at the first edge that would close a cycle and returns
    ``(top, q)``; ``q`` is -1 when every link went through.
    """
    P = T[4]
    if do_cuts:
        for q in range(start, end):
            p = P[q]
            if p != 0 and p != q + offset:
                top = _cut(T, J, top, q)
    for q in range(q0, end):
        if P[q] != 0 or pinned[q]:
            continue
        nt = _link(T, J, top, q, q + offset)
        if nt < 0:
            return top, q
        top = nt
    return top, -1


class LinkCutForest:
    def __init__(self, n: int):
        self.n = n
        self.table = np.zeros((5, n + 1), dtype=np.int64)
        self.table[SIZE, 1:] = 1
        self._journal = np.zeros((max(16, 2 * n + 8), 2), dtype=np.int64)
        self._top = 0
        self.recording = False

    @classmethod
    def from_parents(cls, parent):
        forest = cls(len(parent) - 1)
        for child, p in enumerate(parent):
            if child and p:
                forest.link(child, p)
        return forest

    def _reserve(self, extra):
        need = self._top + extra + 1
        if need > len(self._journal):
            grown = np.zeros((max(need, 2 * len(self._journal)), 2), dtype=np.int64)
            grown[: self._top] = self._journal[: self._top]
            self._journal = grown

    def _settle(self):
        if not self.recording:
            self._top = 0

    # -- undo stack -------------------------------------------------------------

    def mark(self) -> int:
        return self._top

    def rollback(self, mark: int) -> None:
        self._top = _rollback(self.table, self._journal, self._top, mark)

    def commit(self) -> None:
        self._top = 0

    # -- queries ----------------------------------------------------------------

    def parent(self, v: int) -> int:
        return int(self.table[PARENT, v])

    def parents(self):
        return self.table[PARENT].tolist()

    def is_root(self, v: int) -> bool:
        return self.table[PARENT, v] == 0

    def find_root(self, v: int) -> int:
        return int(_find_root(self.table, v))

    def path_to_root_length(self, v: int) -> int:
        """Number of edges between ``v`` and its root."""
        return int(_depth(self.table, v))

    def kth_on_path(self, v: int, k: int) -> int:
        """k-th node walking up from ``v``: 0 gives ``v``, depth gives the root."""
        depth = self.path_to_root_length(v)
        if not 0 <= k <= depth:
            raise OutOfRange(f"k={k} outside [0, {depth}]")
        return int(_kth(self.table, v, k))

    def on_root_path(self, v: int, u: int) -> bool:
        if self.find_root(v) != self.find_root(u):
            return False
        du = self.path_to_root_length(u)
        dv = self.path_to_root_length(v)
        return du <= dv and self.kth_on_path(v, dv - du) == u

    # -- updates ----------------------------------------------------------------

    def link(self, child: int, parent: int) -> None:
        if self.table[PARENT, child]:
            raise NotRoot(f"node {child} already has parent {self.table[PARENT, child]}")
        self._reserve(1)
        top = _link(self.table, self._journal, self._top, child, parent)
        if top < 0:
            raise WouldCycle(f"linking {child} under {parent} closes a cycle")
        self._top = top
        self._settle()

    def cut(self, child: int) -> None:
        if not self.table[PARENT, child]:
            raise AlreadyRoot(f"node {child} is a root")
        self._reserve(1)
        self._top = _cut(self.table, self._journal, self._top, child)
        self._settle()

    def relink(self, start, end, offset, q0, do_cuts, pinned):
        """Batch re-pointing of a block; see ``_relink``. Returns the stalled
        position or -1."""
        self._reserve(2 * (end - start) + 2)
        self._top, q = _relink(self.table, self._journal, self._top, start, end, offset, q0, do_cuts, pinned)
        self._settle()
        return int(q)
