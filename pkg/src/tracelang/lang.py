"""Finite-word language algebra under an explicit length bound.

A language here is a plain finite set of words (tuples of letters) paired
with a bound N. The carrier contract is bounded completeness: the word set
holds exactly the words of the intended, possibly infinite, language whose
length is at most N. Every operator below preserves this contract, which is
what makes subset and equality checks at the bound trustworthy for the
algebraic laws and the program calculi layered on top.

Letters only need equality, hashing and a total order (the order is used
for canonical output). Combining two languages with different bounds is a
hard error rather than an implicit re-bound: silently truncating one side
would invalidate the completeness claim of the result.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Iterable, Iterator

Word = tuple  # a word is a tuple of letters

__all__ = [
    "Word",
    "BoundedLang",
    "BoundMismatchError",
    "empty",
    "skip",
    "top",
    "big_union",
    "interleave_words",
    "words_up_to",
]


class BoundMismatchError(ValueError):
    """Two languages with different bounds were combined."""


def _shared_bound(p: "BoundedLang", q: "BoundedLang") -> int:
    if p.bound != q.bound:
        raise BoundMismatchError(f"bound mismatch: {p.bound} != {q.bound}")
    return p.bound


def interleave_words(p: Iterable, q: Iterable) -> frozenset:
    """All interleavings of two words.

    Defined by the usual recursion: interleaving with the empty word is the
    singleton of the other word, otherwise either head may go first.
    """
    p, q = tuple(p), tuple(q)

    def go(a: Word, b: Word) -> set:
        if not a:
            return {b}
        if not b:
            return {a}
        out = {(a[0],) + r for r in go(a[1:], b)}
        out |= {(b[0],) + r for r in go(a, b[1:])}
        return out

    return frozenset(go(p, q))


def words_up_to(alphabet: Iterable, bound: int) -> Iterator[Word]:
    """Every word over the alphabet with length <= bound."""
    letters = tuple(dict.fromkeys(alphabet))
    for n in range(bound + 1):
        yield from itertools.product(letters, repeat=n)


@dataclass(frozen=True)
class BoundedLang:
    """A finite word set, complete up to ``bound``.

    Instances are immutable; all operations are pure and return fresh
    languages with the same bound.
    """

    words: frozenset
    bound: int

    def __init__(self, words: Iterable, bound: int):
        if bound < 0:
            raise ValueError(f"bound must be >= 0, got {bound}")
        ws = frozenset(tuple(w) for w in words)
        for w in ws:
            if len(w) > bound:
                raise ValueError(f"word of length {len(w)} exceeds bound {bound}")
        object.__setattr__(self, "words", ws)
        object.__setattr__(self, "bound", bound)

    # -- basic queries ----------------------------------------------------

    def __contains__(self, word) -> bool:
        return tuple(word) in self.words

    def __len__(self) -> int:
        return len(self.words)

    def __iter__(self) -> Iterator[Word]:
        return iter(self.sorted_words)

    @cached_property
    def sorted_words(self) -> tuple:
        """Words in lexicographic order; the canonical emission order."""
        return tuple(sorted(self.words))

    def __repr__(self) -> str:
        if len(self.words) <= 6:
            inner = ", ".join(repr(list(w)) for w in self.sorted_words)
            return f"BoundedLang({{{inner}}}, bound={self.bound})"
        return f"BoundedLang(<{len(self.words)} words>, bound={self.bound})"

    # -- lattice operations ------------------------------------------------

    def union(self, other: "BoundedLang") -> "BoundedLang":
        b = _shared_bound(self, other)
        return BoundedLang(self.words | other.words, b)

    def inter(self, other: "BoundedLang") -> "BoundedLang":
        b = _shared_bound(self, other)
        return BoundedLang(self.words & other.words, b)

    __or__ = union
    __and__ = inter

    def leq(self, other: "BoundedLang") -> bool:
        """Subset at the shared bound."""
        _shared_bound(self, other)
        return self.words <= other.words

    def eq(self, other: "BoundedLang") -> bool:
        """Word-set equality at the shared bound."""
        _shared_bound(self, other)
        return self.words == other.words

    # -- sequential and concurrent composition ------------------------------

    def concat(self, other: "BoundedLang") -> "BoundedLang":
        """Concatenation; overlong products fall outside the bound and are
        dropped, which keeps the result complete up to the bound."""
        b = _shared_bound(self, other)
        out = set()
        for p in self.words:
            room = b - len(p)
            for q in other.words:
                if len(q) <= room:
                    out.add(p + q)
        return BoundedLang(out, b)

    def shuffle(self, other: "BoundedLang") -> "BoundedLang":
        """Interleaving of the two languages."""
        b = _shared_bound(self, other)
        out = set()
        for p in self.words:
            room = b - len(p)
            for q in other.words:
                if len(q) <= room:
                    out |= interleave_words(p, q)
        return BoundedLang(out, b)

    def power(self, n: int) -> "BoundedLang":
        """n-fold concatenation; power(0) is the skip language."""
        if n < 0:
            raise ValueError("power requires n >= 0")
        acc = skip(self.bound)
        for _ in range(n):
            acc = self.concat(acc)
        return acc

    def star(self) -> "BoundedLang":
        """Zero-or-more concatenations of this language.

        The embedded empty word is dropped before iterating so every round
        strictly lengthens new words; termination then follows from the
        bound. Closure is reached in at most bound+1 rounds.
        """
        base = [w for w in self.words if w]
        acc: set = {()}
        frontier: set = {()}
        while frontier:
            fresh = set()
            for p in base:
                room = self.bound - len(p)
                for q in frontier:
                    if len(q) <= room:
                        w = p + q
                        if w not in acc:
                            fresh.add(w)
            acc |= fresh
            frontier = fresh
        return BoundedLang(acc, self.bound)

    # -- bound management ---------------------------------------------------

    def truncate(self, new_bound: int) -> "BoundedLang":
        """Restrict to words of length <= new_bound (new_bound <= bound).

        Raising the bound is refused: the missing longer words cannot be
        reconstructed, so the completeness contract would break.
        """
        if new_bound > self.bound:
            raise ValueError(
                f"cannot raise bound {self.bound} to {new_bound} by truncation"
            )
        return BoundedLang((w for w in self.words if len(w) <= new_bound), new_bound)


# -- constructors -----------------------------------------------------------


def empty(bound: int) -> BoundedLang:
    """The empty language (bottom)."""
    return BoundedLang((), bound)


def skip(bound: int) -> BoundedLang:
    """The language holding only the empty word; unit of concat and shuffle."""
    return BoundedLang(((),), bound)


def top(alphabet: Iterable, bound: int) -> BoundedLang:
    """All words over the alphabet up to the bound."""
    letters = tuple(dict.fromkeys(alphabet))
    if not letters:
        raise ValueError("top requires a non-empty alphabet")
    return BoundedLang(words_up_to(letters, bound), bound)


def big_union(langs: Iterable[BoundedLang], bound: int | None = None) -> BoundedLang:
    """Union of a family; ``bound`` is required when the family is empty."""
    langs = list(langs)
    if not langs:
        if bound is None:
            raise ValueError("big_union of an empty family needs an explicit bound")
        return empty(bound)
    b = langs[0].bound
    words: set = set()
    for lang in langs:
        if lang.bound != b:
            raise BoundMismatchError(f"bound mismatch: {lang.bound} != {b}")
        words |= lang.words
    if bound is not None and bound != b:
        raise BoundMismatchError(f"bound mismatch: {b} != {bound}")
    return BoundedLang(words, b)
