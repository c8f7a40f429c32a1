"""Free-groupoid words on the disc cell structure and the braid action on them.

Edges: ``("o", 0)`` the outer circle, ``("c", j)`` the inner circle around the
puncture at position j, ``("s", j)`` the spoke from the outer base vertex to
inner vertex j. A word is a tuple of letters ``(kind, j, e)`` with e = +1/-1.

Braid words are sequences of nonzero integers: ``i`` is the half twist
exchanging positions i and i+1 counterclockwise, ``-i`` its inverse.
"""
from __future__ import annotations

from typing import Iterable, Sequence

Letter = tuple[str, int, int]
Word = tuple[Letter, ...]


class BraidError(ValueError):
    pass


def free_reduce(word: Iterable[Letter]) -> Word:
    out: list[Letter] = []
    for a in word:
        if out and out[-1][:2] == a[:2] and out[-1][2] == -a[2]:
            out.pop()
        else:
            out.append(a)
    return tuple(out)


def inverse(word: Sequence[Letter]) -> Word:
    return tuple((k, j, -e) for k, j, e in reversed(word))


def edge(kind: str, j: int = 0) -> Word:
    return ((kind, j, 1),)


def x_word(j: int) -> Word:
    """The loop around puncture j based at the outer vertex."""
    return (("s", j, 1), ("c", j, 1), ("s", j, -1))


def relator(p: int) -> Word:
    """Boundary word of the face: o x_1^-1 ... x_p^-1."""
    w: list[Letter] = [("o", 0, 1)]
    for j in range(1, p + 1):
        w.extend(inverse(x_word(j)))
    return tuple(w)


def edges(p: int) -> list[tuple[str, int]]:
    return [("o", 0)] + [("c", j) for j in range(1, p + 1)] + [("s", j) for j in range(1, p + 1)]


def _generator(g: int, p: int) -> dict[tuple[str, int], Word]:
    i = abs(g)
    if not 1 <= i < p:
        raise BraidError(f"generator {g} out of range for {p} punctures")
    sub = {("c", i): edge("c", i + 1), ("c", i + 1): edge("c", i)}
    if g > 0:
        sub[("s", i)] = edge("s", i + 1)
        sub[("s", i + 1)] = x_word(i + 1) + edge("s", i)
    else:
        sub[("s", i + 1)] = edge("s", i)
        sub[("s", i)] = inverse(x_word(i)) + edge("s", i + 1)
    return sub


def substitute(word: Sequence[Letter], sub: dict[tuple[str, int], Word]) -> Word:
    out: list[Letter] = []
    for k, j, e in word:
        img = sub.get((k, j), edge(k, j))
        out.extend(img if e > 0 else inverse(img))
    return free_reduce(out)


def permutation(braid: Sequence[int], p: int) -> list[int]:
    """perm[pos-1] = original position of the puncture now at pos."""
    perm = list(range(1, p + 1))
    for g in braid:
        i = abs(g)
        if not 1 <= i < p:
            raise BraidError(f"generator {g} out of range for {p} punctures")
        perm[i - 1], perm[i] = perm[i], perm[i - 1]
    return perm


def is_pure(braid: Sequence[int], p: int) -> bool:
    return permutation(braid, p) == list(range(1, p + 1))


def braid_action(braid: Sequence[int], p: int) -> dict[tuple[str, int], Word]:
    """Image of every edge under the homeomorphism of a pure braid word
    (first letter applied first)."""
    if not is_pure(braid, p):
        raise BraidError(f"braid word {list(braid)} is not pure: permutation {permutation(braid, p)}")
    img = {e: edge(*e) for e in edges(p)}
    for g in braid:
        sub = _generator(g, p)
        img = {e: substitute(w, sub) for e, w in img.items()}
    if substitute(relator(p), img) != relator(p):
        raise BraidError("braid action does not fix the face relator")
    return img


def full_twist(a: int, p: int) -> list[int]:
    """The puncture at position p travels once counterclockwise around positions a..p-1."""
    if not 1 <= a < p:
        raise BraidError(f"cannot twist position {p} around positions {a}..{p - 1}")
    down = list(range(p - 1, a - 1, -1))
    return down + down[::-1]


def braid_inverse(braid: Sequence[int]) -> list[int]:
    return [-g for g in reversed(braid)]


def delta_squared(a: int, b: int) -> list[int]:
    """Full twist of all punctures at positions a..b (a Garside square)."""
    out: list[int] = []
    for top in range(a + 1, b + 1):
        down = list(range(top - 1, a - 1, -1))
        out += down + down[::-1]
    return out
