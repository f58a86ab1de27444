"""The concurrent imperative AST and its compilation to languages.

A program compiles to a command: a bounded language over atoms. Atom
references become singleton one-letter languages, sequencing becomes
concatenation, choice becomes union, iteration becomes star, parallel
composition becomes shuffle, and recursion becomes a least fixpoint
computed by the fixpoint machinery. Denotation then turns a command into a
description (a language over state pairs) by replacing each atom with its
relation, one step per letter, with no consistency filtering: a command
word of length k denotes exactly the length-k traces it can perform, so
commands and descriptions share one word bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from . import fixpoint as fx
from .lang import BoundedLang, big_union, skip
from .trace import Atom

__all__ = [
    "Prog",
    "AtomRef",
    "Skip",
    "Seq",
    "Choice",
    "Star",
    "Par",
    "Rec",
    "Var",
    "ElaborationError",
    "CompiledCommand",
    "compile_prog",
    "denote",
    "traces_of_atom_seq",
    "atoms_of",
    "free_rec_vars",
    "subst",
    "canonical",
    "seq_of",
    "choice_of",
    "if_then_else",
    "while_loop",
    "prog_str",
]


class ElaborationError(ValueError):
    """Open program: a recursion variable is used unbound."""


class Prog:
    """Base class for program AST nodes. Nodes are immutable."""

    __slots__ = ()


@dataclass(frozen=True)
class AtomRef(Prog):
    atom: Atom


@dataclass(frozen=True)
class Skip(Prog):
    pass


@dataclass(frozen=True)
class Seq(Prog):
    left: Prog
    right: Prog


@dataclass(frozen=True)
class Choice(Prog):
    """Nondeterministic choice over a set of branches.

    Zero branches is the empty program (bottom); the surface syntax never
    produces it but the algebra tests use it.
    """

    branches: tuple


@dataclass(frozen=True)
class Star(Prog):
    body: Prog


@dataclass(frozen=True)
class Par(Prog):
    left: Prog
    right: Prog


@dataclass(frozen=True)
class Rec(Prog):
    name: str
    body: Prog


@dataclass(frozen=True)
class Var(Prog):
    name: str


def choice_of(branches: Iterable[Prog]) -> Prog:
    """Choice with duplicate branches removed; one branch collapses."""
    uniq = tuple(dict.fromkeys(branches))
    if len(uniq) == 1:
        return uniq[0]
    return Choice(uniq)


def seq_of(parts: Sequence[Prog]) -> Prog:
    if not parts:
        return Skip()
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = Seq(p, out)
    return out


def if_then_else(cond_atom: Atom, neg_atom: Atom, then_p: Prog, else_p: Prog) -> Prog:
    """Conditional as guarded choice."""
    return choice_of((Seq(AtomRef(cond_atom), then_p), Seq(AtomRef(neg_atom), else_p)))


def while_loop(cond_atom: Atom, neg_atom: Atom, body: Prog) -> Prog:
    """Loop as star of guarded body, then the exit guard."""
    return Seq(Star(Seq(AtomRef(cond_atom), body)), AtomRef(neg_atom))


# -- structural helpers ---------------------------------------------------------


def free_rec_vars(p: Prog) -> frozenset:
    if isinstance(p, Var):
        return frozenset((p.name,))
    if isinstance(p, (AtomRef, Skip)):
        return frozenset()
    if isinstance(p, (Seq, Par)):
        return free_rec_vars(p.left) | free_rec_vars(p.right)
    if isinstance(p, Choice):
        out: frozenset = frozenset()
        for b in p.branches:
            out |= free_rec_vars(b)
        return out
    if isinstance(p, Star):
        return free_rec_vars(p.body)
    if isinstance(p, Rec):
        return free_rec_vars(p.body) - {p.name}
    raise TypeError(f"not a program node: {p!r}")


def subst(p: Prog, name: str, replacement: Prog) -> Prog:
    """Capture-respecting substitution of a recursion variable."""
    if isinstance(p, Var):
        return replacement if p.name == name else p
    if isinstance(p, (AtomRef, Skip)):
        return p
    if isinstance(p, Seq):
        return Seq(subst(p.left, name, replacement), subst(p.right, name, replacement))
    if isinstance(p, Par):
        return Par(subst(p.left, name, replacement), subst(p.right, name, replacement))
    if isinstance(p, Choice):
        return Choice(tuple(subst(b, name, replacement) for b in p.branches))
    if isinstance(p, Star):
        return Star(subst(p.body, name, replacement))
    if isinstance(p, Rec):
        if p.name == name:
            return p  # shadowed
        return Rec(p.name, subst(p.body, name, replacement))
    raise TypeError(f"not a program node: {p!r}")


def atoms_of(p: Prog) -> tuple:
    """All atoms referenced, sorted by intern id."""
    found: set = set()

    def walk(q: Prog) -> None:
        if isinstance(q, AtomRef):
            found.add(q.atom)
        elif isinstance(q, (Seq, Par)):
            walk(q.left)
            walk(q.right)
        elif isinstance(q, Choice):
            for b in q.branches:
                walk(b)
        elif isinstance(q, (Star,)):
            walk(q.body)
        elif isinstance(q, Rec):
            walk(q.body)

    walk(p)
    return tuple(sorted(found))


def canonical(p: Prog) -> Prog:
    """Collapse Skip units in Seq and Par; used to deduplicate residuals
    during bounded small-step exploration. Only merges programs already
    equal under the unit laws of the algebra."""
    if isinstance(p, Seq):
        left, right = canonical(p.left), canonical(p.right)
        if isinstance(left, Skip):
            return right
        if isinstance(right, Skip):
            return left
        return Seq(left, right)
    if isinstance(p, Par):
        left, right = canonical(p.left), canonical(p.right)
        if isinstance(left, Skip):
            return right
        if isinstance(right, Skip):
            return left
        return Par(left, right)
    if isinstance(p, Choice):
        return Choice(tuple(dict.fromkeys(canonical(b) for b in p.branches)))
    if isinstance(p, Star):
        return Star(canonical(p.body))
    if isinstance(p, Rec):
        return Rec(p.name, canonical(p.body))
    return p


def prog_str(p: Prog) -> str:
    """Surface-syntax-like rendering, fully parenthesized where it matters."""
    if isinstance(p, AtomRef):
        return p.atom.label
    if isinstance(p, Skip):
        return "skip"
    if isinstance(p, Seq):
        return f"({prog_str(p.left)} ; {prog_str(p.right)})"
    if isinstance(p, Choice):
        if not p.branches:
            return "abort"
        return "(" + " + ".join(prog_str(b) for b in p.branches) + ")"
    if isinstance(p, Star):
        return f"({prog_str(p.body)})*"
    if isinstance(p, Par):
        return f"({prog_str(p.left)} || {prog_str(p.right)})"
    if isinstance(p, Rec):
        return f"(rec {p.name} . {prog_str(p.body)})"
    if isinstance(p, Var):
        return p.name
    raise TypeError(f"not a program node: {p!r}")


# -- compilation ----------------------------------------------------------------


class CompiledCommand(NamedTuple):
    """A command plus a completeness flag. exact means every fixpoint
    stabilized within the unroll budget, so the word set is complete up to
    the bound; otherwise it is a sound under-approximation."""

    command: BoundedLang
    exact: bool


def _to_fn(p: Prog, bound: int) -> fx.FnTerm:
    if isinstance(p, AtomRef):
        return fx.ConstFn(BoundedLang(((p.atom,),), bound))
    if isinstance(p, Skip):
        return fx.ConstFn(skip(bound))
    if isinstance(p, Seq):
        return fx.ConcatFn(_to_fn(p.left, bound), _to_fn(p.right, bound))
    if isinstance(p, Choice):
        return fx.UnionFn(tuple(_to_fn(b, bound) for b in p.branches))
    if isinstance(p, Star):
        return fx.StarFn(_to_fn(p.body, bound))
    if isinstance(p, Par):
        return fx.ShuffleFn(_to_fn(p.left, bound), _to_fn(p.right, bound))
    if isinstance(p, Rec):
        return fx.LfpFn(p.name, _to_fn(p.body, bound))
    if isinstance(p, Var):
        return fx.ArgFn(p.name)
    raise TypeError(f"not a program node: {p!r}")


def compile_prog(p: Prog, word_bound: int, unroll_bound: int = 64) -> CompiledCommand:
    """Compile a closed program to its command language."""
    unbound = free_rec_vars(p)
    if unbound:
        raise ElaborationError(f"unbound recursion variables: {sorted(unbound)}")
    term = _to_fn(p, word_bound)
    value, exact = fx.evaluate(term, {}, word_bound, max_rounds=unroll_bound)
    return CompiledCommand(value, exact)


# -- denotation -----------------------------------------------------------------


def traces_of_atom_seq(atom_word: Sequence[Atom], bound: int) -> BoundedLang:
    """The description of one atom sequence: the concatenation of the
    atoms' one-step descriptions. No consistency filtering happens here;
    locally inconsistent traces are kept on purpose."""
    acc = skip(bound)
    for atom in reversed(tuple(atom_word)):
        acc = atom.desc(bound).concat(acc)
    return acc


def denote(command: BoundedLang) -> BoundedLang:
    """The description of a command: union over its atom sequences."""
    return big_union(
        [traces_of_atom_seq(w, command.bound) for w in command.words],
        command.bound,
    )
