"""Finite loops as multiplication tables, and the brute-force oracles built on them.

Elements are indices ``0..n-1`` with the identity at 0.  A permutation is a
tuple ``p`` with ``p[x]`` the image of ``x``; composition is left to right,
so ``compose(p, q)`` applies ``p`` first.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Callable, Hashable, Iterable, NamedTuple, Sequence, Union

import numpy as np

Perm = tuple[int, ...]

DEFAULT_CLOSURE_CAP = 2_000_000
DEFAULT_TABLE_BOUND = 128
DEFAULT_ISO_BOUND = 64


class LoopValidationError(ValueError):
    pass


class CapExceeded(RuntimeError):
    """A closure or search outgrew its configured size limit."""


class NotPowerAssociative(ValueError):
    pass


class NotAssociative(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class FiniteLoop:
    table: np.ndarray
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        self.table.setflags(write=False)

    @property
    def size(self) -> int:
        return self.table.shape[0]

    @property
    def identity_index(self) -> int:
        return 0

    def __len__(self) -> int:
        return self.size

    def mult(self, x: int, y: int) -> int:
        return int(self.table[x, y])

    def label(self, x: int) -> str:
        return self.labels[x] if self.labels else str(x)

    @cached_property
    def left_division(self) -> np.ndarray:
        """``ld[x, z]`` is the ``y`` with ``x y = z``."""
        return np.argsort(self.table, axis=1)

    @cached_property
    def right_division(self) -> np.ndarray:
        """``rd[z, x]`` is the ``y`` with ``y x = z``."""
        return np.argsort(self.table, axis=0)

    def __eq__(self, other):
        return isinstance(other, FiniteLoop) and np.array_equal(self.table, other.table)

    __hash__ = None  # type: ignore[assignment]


def validate_loop(table, labels: Sequence[str] | None = None) -> FiniteLoop:
    """Check the Latin property and a two-sided identity; relabel the identity to 0."""
    t = np.asarray(table, dtype=np.int64)
    if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
        raise LoopValidationError(f"table must be a non-empty square array, got shape {t.shape}")
    n = t.shape[0]
    if t.min() < 0 or t.max() >= n:
        raise LoopValidationError(f"entries must lie in 0..{n - 1}")
    full = np.arange(n)
    for r in range(n):
        if not np.array_equal(np.sort(t[r]), full):
            raise LoopValidationError(f"row {r} is not a permutation")
    for c in range(n):
        if not np.array_equal(np.sort(t[:, c]), full):
            raise LoopValidationError(f"column {c} is not a permutation")
    ids = [e for e in range(n) if np.array_equal(t[e], full) and np.array_equal(t[:, e], full)]
    if not ids:
        raise LoopValidationError("no two-sided identity element")
    e = ids[0]
    if e != 0:
        swap = full.copy()
        swap[0], swap[e] = e, 0
        t = swap[t[np.ix_(swap, swap)]]
        if labels is not None:
            labels = [labels[i] for i in swap]
    return FiniteLoop(t, tuple(labels) if labels is not None else None)


def loop_from_operation(
    elements: Sequence[Hashable],
    op: Callable,
    key: Callable = lambda x: x,
    labels: Sequence[str] | None = None,
) -> FiniteLoop:
    """Cayley table of ``op`` on ``elements`` (identity moved to index 0)."""
    index = {key(x): i for i, x in enumerate(elements)}
    n = len(elements)
    t = np.empty((n, n), dtype=np.int64)
    for i, x in enumerate(elements):
        for j, y in enumerate(elements):
            t[i, j] = index[key(op(x, y))]
    return validate_loop(t, labels)


def read_table(path: str | Path) -> FiniteLoop:
    text = Path(path).read_text().split()
    if not text:
        raise LoopValidationError("empty table file")
    n = int(text[0])
    vals = [int(v) for v in text[1:]]
    if len(vals) != n * n:
        raise LoopValidationError(f"expected {n * n} entries, found {len(vals)}")
    t = np.array(vals, dtype=np.int64).reshape(n, n)
    if not (t[0] == np.arange(n)).all() or not (t[:, 0] == np.arange(n)).all():
        raise LoopValidationError("element 0 must be the identity")
    return validate_loop(t)


def format_table(Q: FiniteLoop) -> str:
    width = len(str(Q.size - 1))
    lines = [str(Q.size)]
    for row in Q.table:
        lines.append(" ".join(str(int(v)).rjust(width) for v in row))
    return "\n".join(lines) + "\n"


def write_table(Q: FiniteLoop, path: str | Path) -> None:
    Path(path).write_text(format_table(Q))


# ---------------------------------------------------------------------------
# permutations


def compose(p: Perm, q: Perm) -> Perm:
    return tuple(q[i] for i in p)


def invert(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def identity_perm(n: int) -> Perm:
    return tuple(range(n))


@dataclass(frozen=True)
class PermGroup:
    generators: tuple[Perm, ...]
    elements: tuple[Perm, ...] = field(repr=False)

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def degree(self) -> int:
        return len(self.elements[0])

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, p) -> bool:
        return tuple(p) in self._set

    @cached_property
    def _set(self) -> frozenset:
        return frozenset(self.elements)

    def stabilizer(self, point: int) -> tuple[Perm, ...]:
        return tuple(p for p in self.elements if p[point] == point)


def close(generators: Iterable[Sequence[int]], cap: int = DEFAULT_CLOSURE_CAP, degree: int | None = None) -> PermGroup:
    gens = sorted({tuple(int(x) for x in g) for g in generators})
    if degree is None:
        if not gens:
            raise ValueError("need a degree for an empty generating set")
        degree = len(gens[0])
    if any(len(g) != degree for g in gens):
        raise ValueError("generators act on different domains")
    e = identity_perm(degree)
    gens = [g for g in gens if g != e]
    seen = {e}
    queue = deque([e])
    while queue:
        p = queue.popleft()
        for g in gens:
            q = tuple(g[i] for i in p)
            if q not in seen:
                seen.add(q)
                if len(seen) > cap:
                    raise CapExceeded(f"closure exceeded cap of {cap} elements")
                queue.append(q)
    return PermGroup(tuple(gens), tuple(sorted(seen)))


def perm_group_table(G: PermGroup) -> FiniteLoop:
    """Cayley table of a permutation group, elements in sorted order."""
    return loop_from_operation(G.elements, compose)


# ---------------------------------------------------------------------------
# translations and inner mappings


def translations(Q: FiniteLoop, x: int) -> tuple[Perm, Perm]:
    """``(L_x, R_x)`` with ``y L_x = x y`` and ``y R_x = y x``."""
    return tuple(int(v) for v in Q.table[x]), tuple(int(v) for v in Q.table[:, x])


class InnerGenerator(NamedTuple):
    kind: str  # "T", "L" or "R"
    args: tuple[int, ...]
    perm: Perm


class _InnerArrays(NamedTuple):
    T: np.ndarray  # T[x, z] = z T_x
    L: np.ndarray  # L[x, y, z] = z L_{x,y}
    R: np.ndarray  # R[x, y, z] = z R_{x,y}


def inner_arrays(Q: FiniteLoop) -> _InnerArrays:
    t, ld, rd = Q.table, Q.left_division, Q.right_division
    n = Q.size
    xs = np.arange(n)
    # T_x = R_x L_x^{-1}: z -> x \ (z x)
    T = ld[xs[:, None], t[:, xs].T]
    # L_{x,y} = L_x L_y L_{yx}^{-1}: z -> (yx) \ (y (x z))
    yxz = t[xs[None, :, None], t[xs[:, None, None], xs[None, None, :]]]
    L = ld[t.T[:, :, None], yxz]
    # R_{x,y} = R_x R_y R_{xy}^{-1}: z -> ((z x) y) / (x y)
    zxy = t[t[xs[None, None, :], xs[:, None, None]], xs[None, :, None]]
    R = rd[zxy, t[:, :, None]]
    return _InnerArrays(T, L, R)


def inner_generators(Q: FiniteLoop) -> list[InnerGenerator]:
    arr = inner_arrays(Q)
    n = Q.size
    out = [InnerGenerator("T", (x,), tuple(int(v) for v in arr.T[x])) for x in range(n)]
    for kind, a in (("L", arr.L), ("R", arr.R)):
        for x in range(n):
            for y in range(n):
                out.append(InnerGenerator(kind, (x, y), tuple(int(v) for v in a[x, y])))
    return out


def _unique_rows(*arrays: np.ndarray) -> np.ndarray:
    n = arrays[0].shape[-1]
    return np.unique(np.concatenate([a.reshape(-1, n) for a in arrays]), axis=0)


def mult_group(Q: FiniteLoop, cap: int = DEFAULT_CLOSURE_CAP) -> PermGroup:
    gens = np.concatenate([Q.table, Q.table.T])
    return close(np.unique(gens, axis=0).tolist(), cap, Q.size)


def inn_group(Q: FiniteLoop, cap: int = DEFAULT_CLOSURE_CAP) -> PermGroup:
    arr = inner_arrays(Q)
    return close(_unique_rows(arr.T, arr.L, arr.R).tolist(), cap, Q.size)


def left_inn_group(Q: FiniteLoop, cap: int = DEFAULT_CLOSURE_CAP) -> PermGroup:
    return close(_unique_rows(inner_arrays(Q).L).tolist(), cap, Q.size)


def right_inn_group(Q: FiniteLoop, cap: int = DEFAULT_CLOSURE_CAP) -> PermGroup:
    return close(_unique_rows(inner_arrays(Q).R).tolist(), cap, Q.size)


def lr_inn_group(Q: FiniteLoop, cap: int = DEFAULT_CLOSURE_CAP) -> PermGroup:
    """``<L_{x,y}, R_{x,y}>``."""
    arr = inner_arrays(Q)
    return close(_unique_rows(arr.L, arr.R).tolist(), cap, Q.size)


# ---------------------------------------------------------------------------
# structural predicates


def is_automorphism(Q: FiniteLoop, p: Sequence[int]) -> bool:
    p = np.asarray(p)
    if p[0] != 0 or not np.array_equal(np.sort(p), np.arange(Q.size)):
        return False
    return bool(np.array_equal(p[Q.table], Q.table[np.ix_(p, p)]))


def is_isomorphism(Q1: FiniteLoop, Q2: FiniteLoop, p: Sequence[int]) -> bool:
    if Q1.size != Q2.size:
        return False
    p = np.asarray(p)
    if not np.array_equal(np.sort(p), np.arange(Q1.size)):
        return False
    return bool(np.array_equal(p[Q1.table], Q2.table[np.ix_(p, p)]))


def _all_automorphisms(Q: FiniteLoop, perms: np.ndarray, chunk: int = 256) -> bool:
    t = Q.table
    for s in range(0, len(perms), chunk):
        P = perms[s : s + chunk]
        lhs = P[:, t]
        rhs = t[P[:, :, None], P[:, None, :]]
        if not np.array_equal(lhs, rhs):
            return False
    return True


def is_automorphic_loop(Q: FiniteLoop) -> bool:
    arr = inner_arrays(Q)
    if not _all_automorphisms(Q, np.unique(arr.T, axis=0)):
        return False
    return _all_automorphisms(Q, _unique_rows(arr.L, arr.R))


def associator_mask(Q: FiniteLoop) -> np.ndarray:
    """``mask[x, y, z]`` is true iff ``(xy)z == x(yz)``."""
    t = Q.table
    n = Q.size
    xs = np.arange(n)
    lhs = t[t[:, :, None], xs[None, None, :]]
    rhs = t[xs[:, None, None], t[None, :, :]]
    return lhs == rhs


def is_associative(Q: FiniteLoop) -> bool:
    return bool(associator_mask(Q).all())


def is_commutative(Q: FiniteLoop) -> bool:
    return bool(np.array_equal(Q.table, Q.table.T))


def middle_nucleus(Q: FiniteLoop) -> tuple[int, ...]:
    mask = associator_mask(Q)
    nuc = tuple(int(y) for y in np.flatnonzero(mask.all(axis=(0, 2))))
    s = set(nuc)
    if any(Q.mult(a, b) not in s for a in nuc for b in nuc):
        raise AssertionError("middle nucleus is not closed")
    return nuc


def subloop(Q: FiniteLoop, gens: Iterable[int]) -> tuple[int, ...]:
    """Closure of ``gens`` (plus the identity) under multiplication."""
    found = {0}
    frontier = list(found)
    for g in gens:
        if g not in found:
            found.add(int(g))
            frontier.append(int(g))
    known = []
    while frontier:
        x = frontier.pop()
        known.append(x)
        for y in list(known):
            for z in (Q.mult(x, y), Q.mult(y, x)):
                if z not in found:
                    found.add(z)
                    frontier.append(z)
    return tuple(sorted(found))


def inverses_and_powers(Q: FiniteLoop) -> tuple[Perm, tuple[int, ...]]:
    """Return the inversion map ``J`` and the squaring map ``x -> x x``.

    Fails on loops whose one-generated subloops are not associative, or where
    left and right inverses differ.
    """
    ld, rd = Q.left_division, Q.right_division
    J = []
    for x in range(Q.size):
        right, left = int(ld[x, 0]), int(rd[0, x])
        if right != left:
            raise NotPowerAssociative(f"element {x} has left inverse {left} != right inverse {right}")
        J.append(right)
        cyc = subloop(Q, [x])
        for a in cyc:
            for b in cyc:
                ab = Q.mult(a, b)
                for c in cyc:
                    if Q.mult(ab, c) != Q.mult(a, Q.mult(b, c)):
                        raise NotPowerAssociative(f"subloop generated by {x} is not associative")
    squares = tuple(int(Q.table[x, x]) for x in range(Q.size))
    return tuple(J), squares


def square_root_counts(Q: FiniteLoop) -> tuple[int, ...]:
    counts = np.bincount(np.diagonal(Q.table), minlength=Q.size)
    return tuple(int(c) for c in counts)


# ---------------------------------------------------------------------------
# brute-force isomorphism search


def _right_power_order(Q: FiniteLoop, x: int) -> int:
    k, y = 1, x
    while y != 0:
        y = Q.mult(y, x)
        k += 1
        if k > Q.size + 1:
            return 0
    return k


def element_fingerprints(Q: FiniteLoop) -> tuple[tuple, ...]:
    """Per-element isomorphism invariants, used only to prune candidate images."""
    roots = square_root_counts(Q)
    nuc = set(middle_nucleus(Q))
    comm = (Q.table == Q.table.T).sum(axis=1)
    return tuple(
        (_right_power_order(Q, x), roots[x], x in nuc, int(comm[x]), len(subloop(Q, [x])))
        for x in range(Q.size)
    )


def generating_set(Q: FiniteLoop) -> list[int]:
    """Greedy: repeatedly add the element whose closure grows the most."""
    gens: list[int] = []
    current = subloop(Q, [])
    while len(current) < Q.size:
        best, best_sub = -1, current
        for x in range(Q.size):
            if x in current:
                continue
            sub = subloop(Q, gens + [x])
            if len(sub) > len(best_sub):
                best, best_sub = x, sub
        gens.append(best)
        current = best_sub
    return gens


def _search(Q1: FiniteLoop, Q2: FiniteLoop, first_only: bool) -> list[Perm]:
    n = Q1.size
    if Q2.size != n:
        return []
    f1, f2 = element_fingerprints(Q1), element_fingerprints(Q2)
    if sorted(f1) != sorted(f2):
        return []
    gens = generating_set(Q1)
    t1, t2 = Q1.table.tolist(), Q2.table.tolist()
    results: list[Perm] = []

    def extend(f: list[int], used: list[bool], known: list[int], x: int, img: int) -> list[int] | None:
        """Assign x -> img and propagate through products; return newly fixed elements."""
        fixed = []
        if f[x] != -1:
            return fixed if f[x] == img else None
        if used[img] or f1[x] != f2[img]:
            return None
        f[x], used[img] = img, True
        fixed.append(x)
        frontier = [x]
        ok = True
        while frontier and ok:
            a = frontier.pop()
            known.append(a)
            fa = f[a]
            for b in list(known):
                fb = f[b]
                for c, fc in ((t1[a][b], t2[fa][fb]), (t1[b][a], t2[fb][fa])):
                    if f[c] == -1:
                        if used[fc] or f1[c] != f2[fc]:
                            ok = False
                            break
                        f[c], used[fc] = fc, True
                        fixed.append(c)
                        frontier.append(c)
                    elif f[c] != fc:
                        ok = False
                        break
                if not ok:
                    break
        if not ok:
            for c in fixed:
                used[f[c]] = False
                f[c] = -1
            # `known` is restored by the caller's length bookkeeping
            return None
        return fixed

    f = [-1] * n
    used = [False] * n
    known: list[int] = []
    base = extend(f, used, known, 0, 0)
    assert base is not None

    def rec(k: int) -> bool:
        if k == len(gens):
            results.append(tuple(f))
            return first_only
        g = gens[k]
        for img in range(n):
            mark = len(known)
            fixed = extend(f, used, known, g, img)
            if fixed is None:
                del known[mark:]
                continue
            stop = rec(k + 1)
            for c in fixed:
                used[f[c]] = False
                f[c] = -1
            del known[mark:]
            if stop:
                return True
        return False

    rec(0)
    return sorted(results)


def _check_bound(Q: FiniteLoop, bound: int) -> None:
    if Q.size > bound:
        raise CapExceeded(f"loop of order {Q.size} exceeds brute-force bound {bound}")


def brute_isomorphisms(Q1: FiniteLoop, Q2: FiniteLoop, bound: int = DEFAULT_ISO_BOUND) -> list[Perm]:
    _check_bound(Q1, bound)
    _check_bound(Q2, bound)
    return _search(Q1, Q2, first_only=False)


def brute_automorphisms(Q: FiniteLoop, bound: int = DEFAULT_TABLE_BOUND) -> list[Perm]:
    _check_bound(Q, bound)
    return _search(Q, Q, first_only=False)


def find_isomorphism(Q1: FiniteLoop, Q2: FiniteLoop, bound: int = DEFAULT_ISO_BOUND) -> Perm | None:
    _check_bound(Q1, bound)
    _check_bound(Q2, bound)
    found = _search(Q1, Q2, first_only=True)
    return found[0] if found else None


GroupLike = Union[PermGroup, FiniteLoop]


def _as_group_table(A: GroupLike) -> FiniteLoop:
    Q = perm_group_table(A) if isinstance(A, PermGroup) else A
    if not is_associative(Q):
        raise NotAssociative("group_isomorphic needs associative inputs")
    return Q


def group_isomorphic(A: GroupLike, B: GroupLike, bound: int = DEFAULT_TABLE_BOUND) -> bool:
    QA, QB = _as_group_table(A), _as_group_table(B)
    return find_isomorphism(QA, QB, bound) is not None


def direct_product(Q1: FiniteLoop, Q2: FiniteLoop) -> FiniteLoop:
    n2 = Q2.size
    t1, t2 = Q1.table, Q2.table
    t = (t1[:, None, :, None] * n2 + t2[None, :, None, :]).reshape(Q1.size * n2, Q1.size * n2)
    return validate_loop(t)


def cyclic_group(n: int) -> FiniteLoop:
    xs = np.arange(n)
    return validate_loop((xs[:, None] + xs[None, :]) % n)


def unit_group(n: int) -> FiniteLoop:
    """Multiplicative group of units modulo ``n``."""
    units = [k % n for k in range(1, n + 1) if math.gcd(k, n) == 1] if n > 1 else [0]
    units = sorted(set(units))
    return loop_from_operation(units, lambda a, b: (a * b) % n if n > 1 else 0)
