"""Finite state spaces, traces over state pairs, and interned relation atoms.

The concrete alphabet used by descriptions is the set of state pairs
(before, after). A word over that alphabet is a trace; a trace is
internally consistent when each step starts in the state the previous step
ended in. Atoms are finite binary relations on states, interned per state
space so that command languages (words over atoms) have decidable letter
equality: within one space, two atoms share an id exactly when they share a
relation.
"""

from __future__ import annotations

import itertools
import random
import threading
from typing import Iterable, Mapping, Sequence

from .exprs import Expr, ExprError, as_expr
from .lang import BoundedLang

__all__ = [
    "StateSpace",
    "State",
    "Atom",
    "is_consistent",
    "ic_traces_ending_in",
    "inconsistent_traces",
    "is_inconsistent_closed",
    "mk_atom",
    "mk_atom_assign",
    "mk_atom_assume",
    "mk_atom_multi_assign",
]

_intern_lock = threading.Lock()
_next_atom_uid = itertools.count()


class StateSpace:
    """Declared variables, each over a small finite set of integers."""

    __slots__ = ("vars", "domains", "_states", "_atom_table")

    def __init__(self, variables: Mapping[str, Iterable[int]]):
        names = tuple(variables)
        if len(set(names)) != len(names):
            raise ValueError("duplicate variable names")
        domains = {}
        for name in names:
            dom = tuple(sorted(set(int(v) for v in variables[name])))
            if not dom:
                raise ValueError(f"variable {name!r} has an empty domain")
            domains[name] = dom
        self.vars = names
        self.domains = domains
        self._states: tuple | None = None
        self._atom_table: dict = {}

    def state_count(self) -> int:
        n = 1
        for name in self.vars:
            n *= len(self.domains[name])
        return n

    def states(self) -> tuple:
        """All states, enumerated once, in lexicographic value order."""
        if self._states is None:
            combos = itertools.product(*(self.domains[v] for v in self.vars))
            self._states = tuple(State(self, values) for values in combos)
        return self._states

    def state(self, assignment: Mapping[str, int] | None = None, **kw: int) -> "State":
        env = dict(assignment or {})
        env.update(kw)
        extra = set(env) - set(self.vars)
        if extra:
            raise ValueError(f"unknown variables: {sorted(extra)}")
        missing = set(self.vars) - set(env)
        if missing:
            raise ValueError(f"assignment not total, missing: {sorted(missing)}")
        values = []
        for name in self.vars:
            v = int(env[name])
            if v not in self.domains[name]:
                raise ValueError(f"{name}={v} outside domain {self.domains[name]}")
            values.append(v)
        return State(self, tuple(values))

    def pair_alphabet(self) -> tuple:
        """The description alphabet: every (before, after) state pair."""
        sts = self.states()
        return tuple((a, b) for a in sts for b in sts)

    def intern_atom(self, rel: Iterable, label: str | None = None) -> "Atom":
        """Intern a relation; the first label given for a relation sticks.

        The table is append-only and insertion is lock-guarded, so ids are
        stable under concurrent interning.
        """
        pairs = frozenset((a, b) for (a, b) in rel)
        for a, b in pairs:
            if a.space is not self or b.space is not self:
                raise ValueError("atom relation mentions a state of another space")
        with _intern_lock:
            atom = self._atom_table.get(pairs)
            if atom is None:
                atom = Atom(next(_next_atom_uid), self, pairs, label or _rel_label(pairs))
                self._atom_table[pairs] = atom
        return atom

    def __repr__(self) -> str:
        doms = ", ".join(
            f"{v}:{self.domains[v][0]}..{self.domains[v][-1]}" for v in self.vars
        )
        return f"StateSpace({doms})"


class State:
    """A total assignment of the space's variables. Ordered by value tuple."""

    __slots__ = ("space", "values", "_hash")

    def __init__(self, space: StateSpace, values: tuple):
        self.space = space
        self.values = values
        self._hash = hash(values)

    def __getitem__(self, name: str) -> int:
        return self.values[self.space.vars.index(name)]

    def as_dict(self) -> dict:
        return dict(zip(self.space.vars, self.values))

    def updated(self, name: str, value: int) -> "State | None":
        """Set one variable; None when the value falls outside its domain."""
        if value not in self.space.domains[name]:
            return None
        i = self.space.vars.index(name)
        vals = self.values[:i] + (value,) + self.values[i + 1 :]
        return State(self.space, vals)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, State)
            and self.space is other.space
            and self.values == other.values
        )

    def __lt__(self, other: "State") -> bool:
        return self.values < other.values

    def __le__(self, other: "State") -> bool:
        return self.values <= other.values

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        inner = ",".join(f"{v}={x}" for v, x in zip(self.space.vars, self.values))
        return f"[{inner}]"


def _rel_label(pairs: frozenset) -> str:
    return f"rel#{len(pairs)}"


class Atom:
    """A finite relation on states with an interned, stable identity.

    As a description, every trace of an atom has length one. Atoms compare
    and hash by id; the intern table makes id equality coincide with
    relation equality inside one space. Construct via the mk_atom_*
    helpers or StateSpace.intern_atom, never directly.
    """

    __slots__ = ("uid", "space", "rel", "label")

    def __init__(self, uid: int, space: StateSpace, rel: frozenset, label: str):
        self.uid = uid
        self.space = space
        self.rel = rel
        self.label = label

    def apply(self, sigma: State) -> frozenset:
        """Relational image of a single state."""
        return frozenset(b for (a, b) in self.rel if a == sigma)

    def apply_set(self, states: Iterable[State]) -> frozenset:
        sts = set(states)
        return frozenset(b for (a, b) in self.rel if a in sts)

    def desc(self, bound: int) -> BoundedLang:
        """This atom as a description: its pairs as one-step traces."""
        return BoundedLang((((a, b),) for (a, b) in self.rel), bound)

    def __eq__(self, other) -> bool:
        return isinstance(other, Atom) and self.uid == other.uid

    def __lt__(self, other: "Atom") -> bool:
        return self.uid < other.uid

    def __hash__(self) -> int:
        return self.uid

    def __repr__(self) -> str:
        return f"<{self.label}>"


# -- traces -------------------------------------------------------------------


def is_consistent(trace: Sequence) -> bool:
    """Internal consistency: adjacent steps agree on the shared state.

    The empty trace and every single step are consistent.
    """
    for (first, second) in itertools.pairwise(trace):
        if first[1] != second[0]:
            return False
    return True


def ic_traces_ending_in(sigma: State, len_bound: int) -> BoundedLang:
    """Every internally consistent trace of length 1..len_bound ending in sigma.

    The empty trace is excluded; the stutter step (sigma, sigma) guarantees
    the result is never empty.
    """
    space = sigma.space
    words = []
    for k in range(1, len_bound + 1):
        for chain in itertools.product(space.states(), repeat=k):
            seq = chain + (sigma,)
            words.append(tuple(zip(seq, seq[1:])))
    return BoundedLang(words, len_bound)


def inconsistent_traces(space: StateSpace, len_bound: int) -> BoundedLang:
    """All traces up to len_bound that are not internally consistent.

    Brute-force enumeration over the pair alphabet; useful only on small
    spaces, which is exactly where the oracle checks run.
    """
    from .lang import words_up_to

    alphabet = space.pair_alphabet()
    return BoundedLang(
        (w for w in words_up_to(alphabet, len_bound) if not is_consistent(w)),
        len_bound,
    )


def is_inconsistent_closed(
    space: StateSpace,
    lang: BoundedLang,
    prefix_len: int = 2,
    rng: random.Random | None = None,
    samples: int = 200,
) -> bool:
    """Check that appending words of ``lang`` never repairs an inconsistent
    prefix. This is a theorem; the function exists as a regression hook.

    Prefixes are drawn from the inconsistent traces up to ``prefix_len``
    (all of them if few, otherwise a random sample).
    """
    prefixes = list(inconsistent_traces(space, prefix_len).words)
    if rng is not None and len(prefixes) > samples:
        prefixes = rng.sample(prefixes, samples)
    for t in prefixes:
        for u in lang.words:
            if is_consistent(t + u):
                return False
    return True


# -- atom constructors ---------------------------------------------------------


def mk_atom(space: StateSpace, rel: Iterable, label: str | None = None) -> Atom:
    """Intern an explicit relation."""
    return space.intern_atom(rel, label)


def mk_atom_assign(space: StateSpace, var: str, expr) -> Atom:
    """The relation of ``var := expr``.

    When the evaluated result falls outside the variable's domain (or the
    expression divides by zero) the source state simply has no successor:
    the atom is partial there, exactly like a failed guard. This silently
    prunes behaviours, so pick domains generously.
    """
    e = as_expr(expr)
    if var not in space.vars:
        raise ExprError(f"unknown variable: {var}")
    bad = e.names - set(space.vars)
    if bad:
        raise ExprError(f"unknown variables in expression: {sorted(bad)}")
    pairs = []
    for sigma in space.states():
        try:
            value = e.eval(sigma.as_dict())
        except ZeroDivisionError:
            continue
        after = sigma.updated(var, int(value))
        if after is not None:
            pairs.append((sigma, after))
    return space.intern_atom(pairs, f"{var} := {e.text}")


def mk_atom_assume(space: StateSpace, cond) -> Atom:
    """The guard relation: stutter exactly on states satisfying the condition."""
    c = as_expr(cond)
    bad = c.names - set(space.vars)
    if bad:
        raise ExprError(f"unknown variables in condition: {sorted(bad)}")
    pairs = []
    for sigma in space.states():
        try:
            ok = bool(c.eval(sigma.as_dict()))
        except ZeroDivisionError:
            continue
        if ok:
            pairs.append((sigma, sigma))
    return space.intern_atom(pairs, f"assume {c.text}")


def mk_atom_multi_assign(space: StateSpace, assigns: Sequence[tuple[str, object]]) -> Atom:
    """One atom performing a list of assignments in order, indivisibly.

    Out-of-domain intermediate or final results make the whole source state
    successor-free, as in mk_atom_assign.
    """
    steps = []
    for var, expr in assigns:
        e = as_expr(expr)
        if var not in space.vars:
            raise ExprError(f"unknown variable: {var}")
        bad = e.names - set(space.vars)
        if bad:
            raise ExprError(f"unknown variables in expression: {sorted(bad)}")
        steps.append((var, e))
    pairs = []
    for sigma in space.states():
        cur: State | None = sigma
        for var, e in steps:
            try:
                value = e.eval(cur.as_dict())
            except ZeroDivisionError:
                cur = None
                break
            cur = cur.updated(var, int(value))
            if cur is None:
                break
        if cur is not None:
            pairs.append((sigma, cur))
    label = "atomic { " + " ; ".join(f"{v} := {e.text}" for v, e in steps) + " }"
    return space.intern_atom(pairs, label)
