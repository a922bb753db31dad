"""Words over the alphabet ``+ - *`` and the homomorphism order on them.

A word is a plain ``str`` over the characters ``+``, ``-`` and ``*``.  The
empty string is the empty word.  A word ``W`` stands for the path ``P(W)``
on vertices ``0..len(W)`` in which letter ``i`` (1-indexed) governs the pair
of vertices ``(i-1, i)``: ``+`` is the forward arc, ``-`` the backward arc and
``*`` both.
"""
from __future__ import annotations

from itertools import combinations, product
from typing import Iterator, Optional

PLUS = "+"
MINUS = "-"
STAR = "*"
ALPHABET = (PLUS, MINUS, STAR)

_DUAL = str.maketrans("+-", "-+")
_UP = frozenset("+*")
_DOWN = frozenset("-*")


class WordError(ValueError):
    """Raised for malformed words or violated word preconditions."""


def check_word(w: str) -> str:
    if not isinstance(w, str):
        raise WordError(f"word must be a string, got {type(w).__name__}")
    for pos, c in enumerate(w):
        if c not in "+-*":
            raise WordError(f"invalid letter {c!r} at position {pos} in {w!r}")
    return w


def symbol_leq(a: str, b: str) -> bool:
    """Order on single letters: ``*`` lies below ``+`` and ``-``."""
    return a == b or a == STAR


def concat(x: str, y: str) -> str:
    return x + y


def power(x: str, n: int) -> str:
    if n < 0:
        raise WordError("power exponent must be non-negative")
    return x * n


def dual(w: str) -> str:
    """Reverse ``w`` and swap ``+`` with ``-``."""
    return w[::-1].translate(_DUAL)


def is_self_dual(w: str) -> bool:
    return dual(w) == w


def strip_stars(x: str) -> str:
    return x.replace(STAR, "")


def height(w: str) -> int:
    return w.count(PLUS) - w.count(MINUS)


def is_subword(x: str, y: str) -> bool:
    """True if ``x`` is obtained from ``y`` by deleting letters."""
    it = iter(y)
    return all(c in it for c in x)


def all_words(length: int) -> Iterator[str]:
    for letters in product("*+-", repeat=length):
        yield "".join(letters)


def words_up_to(length: int) -> Iterator[str]:
    for k in range(length + 1):
        yield from all_words(k)


def _masks(u: str) -> tuple[int, int]:
    # up: bits j with an arc j -> j+1 in P(u); down: bits j with an arc j -> j-1
    up = 0
    down = 0
    for j, c in enumerate(u):
        if c in _UP:
            up |= 1 << j
        if c in _DOWN:
            down |= 1 << (j + 1)
    return up, down


def _reach_rows(u: str, v: str) -> list[int]:
    """Bitset rows of the vertices of P(u) reachable after each prefix of v."""
    up, down = _masks(u)
    # a MINUS step from j needs the reversed arc: (j+1, j) or (j-1, j)
    rev_up = 0
    rev_down = 0
    for j, c in enumerate(u):
        if c in _DOWN:
            rev_up |= 1 << j
        if c in _UP:
            rev_down |= 1 << (j + 1)
    star_up = up & rev_up
    star_down = down & rev_down
    cur = 1
    rows = [cur]
    for c in v:
        if c == PLUS:
            cur = cur | ((cur & up) << 1) | ((cur & down) >> 1)
        elif c == MINUS:
            cur = cur | ((cur & rev_up) << 1) | ((cur & rev_down) >> 1)
        else:
            cur = cur | ((cur & star_up) << 1) | ((cur & star_down) >> 1)
        rows.append(cur)
    return rows


def word_leq(u: str, v: str) -> bool:
    """Decide ``u <= v``: an endpoint-preserving homomorphism maps P(v) onto P(u).

    Runs one left-to-right scan of ``v`` while tracking, as a bitset, every
    vertex of ``P(u)`` that the image of the current vertex of ``P(v)`` can
    occupy.  Onto-ness is automatic because the image of a path containing
    both endpoints of ``P(u)`` is all of ``P(u)``.
    """
    if len(u) > len(v):
        return False
    return bool(_reach_rows(u, v)[-1] >> len(u) & 1)


def word_geq(u: str, v: str) -> bool:
    return word_leq(v, u)


def word_leq_witness(u: str, v: str) -> Optional[tuple[int, ...]]:
    """Return a monotone endpoint-preserving map from P(v) onto P(u), or None.

    The image of vertex ``t`` of ``P(v)`` is entry ``t`` of the returned
    tuple.  Only steps that stay or advance by one are allowed, so the
    result is monotone.
    """
    k, m = len(u), len(v)
    if k > m:
        return None
    # layers[t] = set of j reachable at position t using monotone steps only
    layers = [1]
    for t, c in enumerate(v):
        cur = layers[-1]
        adv = 0
        for j in range(k):
            if cur >> j & 1 and symbol_leq(u[j], c):
                adv |= 1 << (j + 1)
        layers.append(cur | adv)
    if not layers[-1] >> k & 1:
        return None
    out = [0] * (m + 1)
    j = k
    out[m] = k
    for t in range(m, 0, -1):
        prev = layers[t - 1]
        c = v[t - 1]
        if not prev >> j & 1:
            assert j > 0 and prev >> (j - 1) & 1 and symbol_leq(u[j - 1], c)
            j -= 1
        out[t - 1] = j
    return tuple(out)


def shuffles(x: str, y: str) -> set[str]:
    """All shuffles of ``x`` and ``y`` starting with ``x[0]`` and ending with ``y[-1]``."""
    if not x or not y:
        raise WordError("shuffles requires two non-empty words")
    total = len(x) + len(y)
    out = set()
    for xpos in combinations(range(total), len(x)):
        letters = [""] * total
        xs = set(xpos)
        xi = yi = 0
        for i in range(total):
            if i in xs:
                letters[i] = x[xi]
                xi += 1
            else:
                letters[i] = y[yi]
                yi += 1
        z = "".join(letters)
        if z[0] == x[0] and z[-1] == y[-1]:
            out.add(z)
    return out


def star_blocks(x: str) -> tuple[str, list[int]]:
    """Split ``x`` into its star-free skeleton and the lengths of its star runs.

    For skeleton ``c1..cr`` the list has ``r + 1`` entries: stars before
    ``c1``, between consecutive letters, and after ``cr``.
    """
    blocks = [0]
    skel = []
    for c in x:
        if c == STAR:
            blocks[-1] += 1
        else:
            skel.append(c)
            blocks.append(0)
    return "".join(skel), blocks


def rotations(w: str) -> list[str]:
    return [w[i:] + w[:i] for i in range(len(w))] if w else [w]
