"""Operational judgements: abstract deciders and structural interpreters.

The abstract judgements are inclusion checks between bounded languages:

  hoare   {P} Q {R}        =  P ; Q  <=  R
  milner  P -Q-> R         =  Q in Actions  and  P >= Q ; R
  plotkin <P, s> -> <P',s'> =  exists Q in Actions: P >= Q ; P'  and  s ; Q >= s'
  kahn    <P, s> ~> s'      =  s ; P >= s'

Actions is {skip} plus a configured finite set of atomic operations. The
state-level judgements reduce the trace-prefix definitions to endpoint
checks (the reduction itself is a tested equivalence): a description can
step or evaluate according to whether one of its traces is internally
consistent and has the right endpoints. Structural interpreters for the
program AST sit on top: a one-step enumerator in Milner style, a bounded
breadth-first closure in Plotkin style, and a big-step evaluator in Kahn
style whose parallel case goes through the shuffle denotation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

from .lang import BoundedLang, skip
from .prog import (
    AtomRef,
    Choice,
    CompiledCommand,
    ElaborationError,
    Par,
    Prog,
    Rec,
    Seq,
    Skip,
    Star,
    Var,
    canonical,
    compile_prog,
    denote,
    subst,
)
from .trace import Atom, State, StateSpace, is_consistent

__all__ = [
    "OpSemConfig",
    "hoare_abstract",
    "milner_abstract",
    "plotkin_abstract",
    "kahn_abstract",
    "plotkin_desc",
    "kahn_desc",
    "sem",
    "sem_cmd",
    "run_atom_word",
    "run_command",
    "milner_steps",
    "plotkin_steps",
    "plotkin_star",
    "kahn_eval",
    "kahn_eval_sequential",
    "Exploration",
    "action_str",
]

# An action is either None (the skip action) or an Atom.
Action = "Atom | None"


def action_str(action) -> str:
    return "skip" if action is None else action.label


@dataclass(frozen=True)
class OpSemConfig:
    """A finite set of atomic operations; actions are these plus skip."""

    space: StateSpace
    atomic_operations: tuple

    def __init__(self, space: StateSpace, atomic_operations: Iterable[Atom]):
        object.__setattr__(self, "space", space)
        object.__setattr__(
            self, "atomic_operations", tuple(sorted(set(atomic_operations)))
        )

    @classmethod
    def for_prog(cls, space: StateSpace, p: Prog) -> "OpSemConfig":
        from .prog import atoms_of

        return cls(space, atoms_of(p))

    def actions(self, bound: int) -> tuple:
        """(action, description) pairs at the given bound, skip first."""
        return _action_descs(self, bound)

    def is_action_lang(self, q: BoundedLang) -> bool:
        return any(q.eq(d) for (_, d) in self.actions(q.bound))

    def action_result(self, action, sigma: State) -> frozenset:
        """State-transformation of one action: skip stutters, an atom maps
        through its relation."""
        if action is None:
            return frozenset((sigma,))
        return action.apply(sigma)


@lru_cache(maxsize=256)
def _action_descs(cfg: OpSemConfig, bound: int) -> tuple:
    out = [(None, skip(bound))]
    out.extend((a, a.desc(bound)) for a in cfg.atomic_operations)
    return tuple(out)


# -- abstract judgements ---------------------------------------------------------


def hoare_abstract(p: BoundedLang, q: BoundedLang, r: BoundedLang) -> bool:
    return p.concat(q).leq(r)


def milner_abstract(p: BoundedLang, q: BoundedLang, r: BoundedLang, cfg: OpSemConfig) -> bool:
    return cfg.is_action_lang(q) and q.concat(r).leq(p)


def plotkin_abstract(
    p: BoundedLang,
    s: BoundedLang,
    p2: BoundedLang,
    s2: BoundedLang,
    cfg: OpSemConfig,
) -> bool:
    """The program pair and the state pair may carry different bounds; the
    witnessing action is built at each side's own bound."""
    for (_, q_p), (_, q_s) in zip(cfg.actions(p.bound), cfg.actions(s.bound)):
        if q_p.concat(p2).leq(p) and s2.leq(s.concat(q_s)):
            return True
    return False


def kahn_abstract(p: BoundedLang, s: BoundedLang, s2: BoundedLang) -> bool:
    return s2.leq(s.concat(p))


# -- state-level judgements for descriptions -------------------------------------


def plotkin_desc(
    p: BoundedLang,
    sigma: State,
    p2: BoundedLang,
    sigma2: State,
    cfg: OpSemConfig,
) -> bool:
    """One hidden-action step: some action takes sigma to sigma2 and peels
    itself off the front of p leaving p2."""
    for action, q in cfg.actions(p.bound):
        if sigma2 in cfg.action_result(action, sigma) and q.concat(p2).leq(p):
            return True
    return False


def kahn_desc(p: BoundedLang, sigma: State, sigma2: State) -> bool:
    """Big-step: p has an internally consistent trace from sigma to sigma2,
    or contains the empty trace and sigma equals sigma2."""
    for word in p.words:
        if not word:
            if sigma == sigma2:
                return True
        elif word[0][0] == sigma and word[-1][1] == sigma2 and is_consistent(word):
            return True
    return False


def sem(p: BoundedLang, sigma: State) -> frozenset:
    """All states the description can reach from sigma."""
    out = set()
    for word in p.words:
        if not word:
            out.add(sigma)
        elif word[0][0] == sigma and is_consistent(word):
            out.add(word[-1][1])
    return frozenset(out)


def sem_cmd(command: BoundedLang, sigma: State) -> frozenset:
    """Command semantics through the trace-set denotation. Exact but
    materializes every trace; use run_command on larger state spaces."""
    return sem(denote(command), sigma)


def run_atom_word(word, sigma: State) -> frozenset:
    """Endpoints of one atom sequence from sigma: the fold of the atoms'
    relational images. Agrees with the consistent traces of the word's
    trace set by construction; the agreement is regression-tested against
    sem_cmd on small spaces."""
    cur = {sigma}
    for atom in word:
        nxt: set = set()
        for s in cur:
            nxt |= atom.apply(s)
        if not nxt:
            return frozenset()
        cur = nxt
    return frozenset(cur)


def run_command(command: BoundedLang, sigma: State) -> frozenset:
    """Command semantics word by word, without building descriptions."""
    out: set = set()
    for word in command.words:
        out |= run_atom_word(word, sigma)
    return frozenset(out)


# -- structural interpreters ------------------------------------------------------


def milner_steps(p: Prog) -> frozenset:
    """All one-step (action, residual) pairs of the structural rules.

    Sound but deliberately not complete against the semantic judgement,
    which admits arbitrary decompositions.
    """
    if isinstance(p, Var):
        raise ElaborationError(f"open program: unbound {p.name}")
    steps: set = set()
    if isinstance(p, AtomRef):
        steps.add((p.atom, Skip()))
    elif isinstance(p, Skip):
        pass
    elif isinstance(p, Seq):
        for action, rest in milner_steps(p.left):
            steps.add((action, Seq(rest, p.right)))
        if isinstance(p.left, Skip):
            steps.add((None, p.right))
    elif isinstance(p, Choice):
        for branch in p.branches:
            steps.add((None, branch))
    elif isinstance(p, Star):
        steps.add((None, Skip()))
        steps.add((None, Seq(p.body, p)))
    elif isinstance(p, Par):
        for action, rest in milner_steps(p.left):
            steps.add((action, Par(rest, p.right)))
        for action, rest in milner_steps(p.right):
            steps.add((action, Par(p.left, rest)))
        if isinstance(p.left, Skip):
            steps.add((None, p.right))
        if isinstance(p.right, Skip):
            steps.add((None, p.left))
    elif isinstance(p, Rec):
        steps.add((None, subst(p.body, p.name, p)))
    else:
        raise TypeError(f"not a program node: {p!r}")
    return frozenset(steps)


def plotkin_steps(p: Prog, sigma: State) -> frozenset:
    """One small step with the action hidden: every (residual, state)
    reachable by a structural action whose relation admits sigma."""
    out: set = set()
    for action, rest in milner_steps(p):
        if action is None:
            out.add((rest, sigma))
        else:
            for sigma2 in action.apply(sigma):
                out.add((rest, sigma2))
    return frozenset(out)


@dataclass(frozen=True)
class Exploration:
    """Bounded closure of the small-step relation.

    Configurations carry canonicalized residual programs. truncated means
    the final frontier still had unseen successors when the depth ran out.
    """

    initial: tuple
    reached: frozenset
    transitions: tuple
    truncated: bool

    def final_states(self) -> frozenset:
        return frozenset(s for (q, s) in self.reached if isinstance(q, Skip))

    def contains(self, p: Prog, sigma: State) -> bool:
        return (canonical(p), sigma) in self.reached


def plotkin_star(p: Prog, sigma: State, depth: int) -> Exploration:
    """Breadth-first closure up to ``depth`` steps, deduplicating on the
    canonical residual form."""
    start = (canonical(p), sigma)
    seen = {start}
    frontier = [start]
    transitions: list = []
    for _ in range(depth):
        if not frontier:
            break
        nxt = []
        for (q, s) in frontier:
            for action, rest in milner_steps(q):
                for s2 in _action_states(action, s):
                    tgt = (canonical(rest), s2)
                    transitions.append((q, s, action, tgt[0], tgt[1]))
                    if tgt not in seen:
                        seen.add(tgt)
                        nxt.append(tgt)
        frontier = nxt
    truncated = False
    for (q, s) in frontier:
        for action, rest in milner_steps(q):
            for s2 in _action_states(action, s):
                if (canonical(rest), s2) not in seen:
                    truncated = True
                    break
            if truncated:
                break
        if truncated:
            break
    return Exploration(start, frozenset(seen), tuple(transitions), truncated)


def _action_states(action, sigma: State) -> frozenset:
    if action is None:
        return frozenset((sigma,))
    return action.apply(sigma)


def kahn_eval(
    p: Prog,
    sigma: State,
    unroll_bound: int = 16,
    word_bound: int = 12,
) -> frozenset:
    """Big-step outcome states.

    Structural for skip, atoms, sequencing, choice, iteration and
    recursion; parallel composition goes through the shuffle denotation of
    the two sides, which is strictly more complete than running them in
    either order. Iteration is a state-reachability closure, so any
    unroll_bound at least the state count gives the exact star semantics;
    recursion is unrolled unroll_bound times. word_bound only matters under
    Par, where the sides are compiled; make it at least the longest atom
    sequence a side can perform.
    """
    if isinstance(p, Skip):
        return frozenset((sigma,))
    if isinstance(p, AtomRef):
        return p.atom.apply(sigma)
    if isinstance(p, Seq):
        out: set = set()
        for mid in kahn_eval(p.left, sigma, unroll_bound, word_bound):
            out |= kahn_eval(p.right, mid, unroll_bound, word_bound)
        return frozenset(out)
    if isinstance(p, Choice):
        out = set()
        for branch in p.branches:
            out |= kahn_eval(branch, sigma, unroll_bound, word_bound)
        return frozenset(out)
    if isinstance(p, Star):
        reached = {sigma}
        frontier = {sigma}
        for _ in range(unroll_bound):
            fresh: set = set()
            for s in frontier:
                fresh |= kahn_eval(p.body, s, unroll_bound, word_bound) - reached
            if not fresh:
                break
            reached |= fresh
            frontier = fresh
        return frozenset(reached)
    if isinstance(p, Par):
        left = compile_prog(p.left, word_bound, unroll_bound).command
        right = compile_prog(p.right, word_bound, unroll_bound).command
        return run_command(left.shuffle(right), sigma)
    if isinstance(p, Rec):
        unrolled: Prog = Choice(())
        for _ in range(unroll_bound):
            unrolled = subst(p.body, p.name, unrolled)
        return kahn_eval(unrolled, sigma, unroll_bound, word_bound)
    if isinstance(p, Var):
        raise ElaborationError(f"open program: unbound {p.name}")
    raise TypeError(f"not a program node: {p!r}")


def kahn_eval_sequential(p: Prog, sigma: State, unroll_bound: int = 16) -> frozenset:
    """Big-step variant whose parallel case runs the sides one after the
    other, in both orders, with no interleaving. Only sound with respect to
    kahn_eval (a subset of its outcomes); kept as an executable form of the
    sequentializing big-step concurrency rules."""
    if isinstance(p, Par):
        out: set = set()
        for first, second in ((p.left, p.right), (p.right, p.left)):
            for mid in kahn_eval_sequential(first, sigma, unroll_bound):
                out |= kahn_eval_sequential(second, mid, unroll_bound)
        return frozenset(out)
    if isinstance(p, Seq):
        out = set()
        for mid in kahn_eval_sequential(p.left, sigma, unroll_bound):
            out |= kahn_eval_sequential(p.right, mid, unroll_bound)
        return frozenset(out)
    if isinstance(p, Choice):
        out = set()
        for branch in p.branches:
            out |= kahn_eval_sequential(branch, sigma, unroll_bound)
        return frozenset(out)
    if isinstance(p, Star):
        reached = {sigma}
        frontier = {sigma}
        for _ in range(unroll_bound):
            fresh: set = set()
            for s in frontier:
                fresh |= kahn_eval_sequential(p.body, s, unroll_bound) - reached
            if not fresh:
                break
            reached |= fresh
            frontier = fresh
        return frozenset(reached)
    if isinstance(p, Rec):
        unrolled: Prog = Choice(())
        for _ in range(unroll_bound):
            unrolled = subst(p.body, p.name, unrolled)
        return kahn_eval_sequential(unrolled, sigma, unroll_bound)
    return kahn_eval(p, sigma, unroll_bound)
