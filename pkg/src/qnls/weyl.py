"""Symmetric-group combinatorics: permutations, alcoves, label tuples.

Permutations are tuples in one-line notation, 1-indexed: ``w[j-1]`` is the
image w(j). Points of R^N with pairwise distinct coordinates lie in open
alcoves labeled by permutations; the label ``w`` of a point is its rank map,
``w(j)`` = descending rank of coordinate j, so the alcove of the label ``w``
is {x : x_{w^{-1}(1)} > x_{w^{-1}(2)} > ... > x_{w^{-1}(N)}}.

>>> sigma_set((3, 1, 2))
((1, 2), (1, 3))
>>> reduced_word((3, 2, 1))
(1, 2, 1)
>>> alcove_of((2, 5, 1))
(2, 1, 3)
"""

from __future__ import annotations

from itertools import combinations, permutations as _itertools_permutations

from .errors import NoNextLabelError, OnWallError

__all__ = [
    "identity_perm",
    "all_permutations",
    "compose",
    "inverse",
    "simple",
    "transposition",
    "act_point",
    "act_tuple",
    "sigma_set",
    "length",
    "reduced_word",
    "left_descent",
    "alcove_of",
    "descending_slots",
    "alcove_from_order",
    "embed",
    "longest_element",
    "tuples",
    "is_increasing",
    "consecutive_runs",
    "next_label",
    "decompositions",
]

Perm = tuple


def identity_perm(n: int) -> Perm:
    return tuple(range(1, n + 1))


def all_permutations(n: int):
    """All of S_n in lexicographic one-line order (deterministic)."""
    return [tuple(p) for p in _itertools_permutations(range(1, n + 1))]


def compose(u: Perm, v: Perm) -> Perm:
    """(u o v)(j) = u(v(j))."""
    if len(u) != len(v):
        raise ValueError("composition of permutations of different degree")
    return tuple(u[v[j] - 1] for j in range(len(v)))


def inverse(w: Perm) -> Perm:
    inv = [0] * len(w)
    for j, image in enumerate(w, start=1):
        inv[image - 1] = j
    return tuple(inv)


def simple(j: int, n: int) -> Perm:
    """Adjacent transposition swapping j and j+1."""
    if not 1 <= j <= n - 1:
        raise ValueError(f"simple reflection index {j} out of range for degree {n}")
    return transposition(j, j + 1, n)


def transposition(j: int, k: int, n: int) -> Perm:
    if j == k or not (1 <= j <= n and 1 <= k <= n):
        raise ValueError(f"bad transposition ({j} {k}) for degree {n}")
    img = list(range(1, n + 1))
    img[j - 1], img[k - 1] = k, j
    return tuple(img)


def act_point(w: Perm, x) -> tuple:
    """(w x)_{w(j)} = x_j, i.e. coordinate j is sent to slot w(j)."""
    out = [None] * len(w)
    for j in range(len(w)):
        out[w[j] - 1] = x[j]
    return tuple(out)


act_tuple = act_point


def sigma_set(w: Perm) -> tuple:
    """Inversion pairs: (j, k) with j < k and w(j) > w(k), sorted."""
    return tuple(
        (j, k)
        for j, k in combinations(range(1, len(w) + 1), 2)
        if w[j - 1] > w[k - 1]
    )


def length(w: Perm) -> int:
    return sum(
        1
        for j, k in combinations(range(len(w)), 2)
        if w[j] > w[k]
    )


def reduced_word(w: Perm) -> tuple:
    """A reduced word (i_1, ..., i_l) with w = s_{i_1} o ... o s_{i_l}.

    Produced by bubble sort on the one-line notation, hence deterministic.
    """
    word = []
    cur = list(w)
    n = len(cur)
    changed = True
    while changed:
        changed = False
        for j in range(n - 1):
            if cur[j] > cur[j + 1]:
                cur[j], cur[j + 1] = cur[j + 1], cur[j]
                word.append(j + 1)
                changed = True
                break
    return tuple(reversed(word))


def left_descent(w: Perm) -> int | None:
    """Smallest j with length(s_j o w) < length(w), or None at identity."""
    inv = inverse(w)
    for j in range(1, len(w)):
        if inv[j - 1] > inv[j]:
            return j
    return None


def alcove_of(x) -> Perm:
    """Label of the open alcove containing x; OnWallError on tied coordinates."""
    n = len(x)
    order = sorted(range(n), key=lambda m: x[m], reverse=True)
    for r in range(n - 1):
        if x[order[r]] == x[order[r + 1]]:
            raise OnWallError(
                f"coordinates {order[r] + 1} and {order[r + 1] + 1} coincide"
            )
    w = [0] * n
    for rank, slot in enumerate(order, start=1):
        w[slot] = rank
    return tuple(w)


def descending_slots(w: Perm) -> tuple:
    """Slots ordered by decreasing coordinate value on the alcove of w."""
    return inverse(w)


def alcove_from_order(order) -> Perm:
    """Alcove label whose descending slot order is the given sequence."""
    w = [0] * len(order)
    for rank, slot in enumerate(order, start=1):
        w[slot - 1] = rank
    return tuple(w)


def embed(w: Perm, sign: int) -> Perm:
    """Embed S_N into S_{N+1} fixing the last slot (sign -1) or first (sign +1)."""
    if sign == -1:
        return tuple(w) + (len(w) + 1,)
    if sign == +1:
        return (1,) + tuple(v + 1 for v in w)
    raise ValueError("sign must be +1 or -1")


def longest_element(n: int) -> Perm:
    return tuple(range(n, 0, -1))


def tuples(n: int, labels, increasing: bool = False):
    """Length-n tuples of distinct labels, increasing ones only if requested.

    Deterministic order: labels are sorted, then tuples are emitted in
    lexicographic order.
    """
    base = sorted(labels)
    if len(set(base)) != len(base):
        raise ValueError("label set contains repeats")
    if n < 0:
        raise ValueError("tuple length must be nonnegative")
    if increasing:
        return [tuple(c) for c in combinations(base, n)]
    return [tuple(p) for p in _itertools_permutations(base, n)]


def is_increasing(t) -> bool:
    return all(t[m] < t[m + 1] for m in range(len(t) - 1))


def consecutive_runs(i) -> tuple:
    """Split an increasing tuple into maximal consecutive runs.

    Returns (l, sigma, tau): the number of runs, the tuple of run initial
    labels, and the tuple of run terminal labels.

    >>> consecutive_runs((2, 4, 5, 6, 9, 10))
    (3, (2, 4, 9), (2, 6, 10))
    """
    if not is_increasing(i):
        raise ValueError("consecutive_runs expects a strictly increasing tuple")
    if not i:
        return (0, (), ())
    sigma = [i[0]]
    tau = []
    for prev, cur in zip(i, i[1:]):
        if cur != prev + 1:
            tau.append(prev)
            sigma.append(cur)
    tau.append(i[-1])
    return (len(sigma), tuple(sigma), tuple(tau))


def next_label(j: int, i) -> int:
    """Smallest entry of i exceeding j; NoNextLabelError if none exists."""
    bigger = [m for m in i if m > j]
    if not bigger:
        raise NoNextLabelError(f"no entry of {i} exceeds {j}")
    return min(bigger)


def decompositions(k, p: int):
    """Splittings of the increasing tuple k into disjoint increasing (i, j).

    The union of i and j is k, j has length p, and i keeps the last entry
    of k. Returned in deterministic (lexicographic in j) order.

    >>> decompositions((1, 2, 3), 1)
    [((2, 3), (1,)), ((1, 3), (2,))]
    """
    if not is_increasing(k):
        raise ValueError("decompositions expects a strictly increasing tuple")
    if not k:
        raise ValueError("decompositions expects a nonempty tuple")
    if not 0 <= p <= len(k) - 1:
        raise ValueError("part size must leave the last entry on the i side")
    head = k[:-1]
    out = []
    for chosen in combinations(head, p):
        rest = tuple(m for m in k if m not in chosen)
        out.append((rest, chosen))
    return out
