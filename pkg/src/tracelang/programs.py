"""Canned programs and triples used by the validation suites and demos."""

from __future__ import annotations

from dataclasses import dataclass

from .prog import (
    AtomRef,
    Choice,
    Par,
    Prog,
    Rec,
    Seq,
    Star,
    Var,
    choice_of,
    seq_of,
    while_loop,
)
from .trace import StateSpace, mk_atom_assign, mk_atom_assume
from .views import (
    ViewStructure,
    mk_separation_views,
    own_assign_axioms,
    own_assume_axioms,
)

__all__ = [
    "TripleCase",
    "counter_space",
    "two_counter_space",
    "scratch_space",
    "atomic_parallel_increment",
    "non_atomic_parallel_increment",
    "guarded_loop",
    "countdown_rec",
    "triple_corpus",
]


def counter_space(hi: int = 7) -> StateSpace:
    return StateSpace({"x": range(hi + 1)})


def two_counter_space(hi: int = 3) -> StateSpace:
    return StateSpace({"x": range(hi + 1), "y": range(hi + 1)})


def scratch_space(hi: int = 3) -> StateSpace:
    """x plus two per-thread scratch registers for load/store splitting."""
    return StateSpace({"t1": range(hi + 1), "t2": range(hi + 1), "x": range(hi + 1)})


def atomic_parallel_increment(space: StateSpace, var: str = "x") -> Prog:
    inc = mk_atom_assign(space, var, f"{var} + 1")
    return Par(AtomRef(inc), AtomRef(inc))


def non_atomic_parallel_increment(space: StateSpace) -> Prog:
    """Two load-then-store increments of x through distinct registers; the
    classic lost-update race."""
    thread1 = seq_of(
        [
            AtomRef(mk_atom_assign(space, "t1", "x")),
            AtomRef(mk_atom_assign(space, "x", "t1 + 1")),
        ]
    )
    thread2 = seq_of(
        [
            AtomRef(mk_atom_assign(space, "t2", "x")),
            AtomRef(mk_atom_assign(space, "x", "t2 + 1")),
        ]
    )
    return Par(thread1, thread2)


def guarded_loop(space: StateSpace, limit: int, var: str = "x") -> Prog:
    """while var < limit do var := var + 1 end"""
    cond = mk_atom_assume(space, f"{var} < {limit}")
    neg = mk_atom_assume(space, f"not ({var} < {limit})")
    body = AtomRef(mk_atom_assign(space, var, f"{var} + 1"))
    return while_loop(cond, neg, body)


def countdown_rec(space: StateSpace, var: str = "x") -> Prog:
    """rec f . (assume var > 0 ; var := var - 1 ; f) + (assume var == 0)"""
    pos = mk_atom_assume(space, f"{var} > 0")
    zero = mk_atom_assume(space, f"{var} == 0")
    dec = mk_atom_assign(space, var, f"{var} - 1")
    return Rec(
        "f",
        choice_of(
            (
                seq_of([AtomRef(pos), AtomRef(dec), Var("f")]),
                AtomRef(zero),
            )
        ),
    )


@dataclass(frozen=True)
class TripleCase:
    """A named triple over the separation instantiation with its expected
    checker behaviour: sound cases must be confirmed by the oracle whenever
    the checker says holds; unsound cases must never be reported holds."""

    name: str
    space: StateSpace
    views: ViewStructure
    pre: frozenset
    program: Prog
    post: frozenset
    sound: bool
    word_bound: int = 8
    unroll_bound: int = 12
    depth: int = 24


def _sep_view(*clauses) -> frozenset:
    """A view from (name, value) clauses: the singleton partial store."""
    return frozenset((tuple(sorted(clauses)),))


def triple_corpus() -> list[TripleCase]:
    """The end-to-end fixture corpus."""
    cases: list[TripleCase] = []

    # disjoint parallel increments of two owned counters
    sp = two_counter_space(3)
    vs = mk_separation_views(
        sp,
        own_assign_axioms(sp, "x", "x + 1") + own_assign_axioms(sp, "y", "y + 1"),
    )
    incx = mk_atom_assign(sp, "x", "x + 1")
    incy = mk_atom_assign(sp, "y", "y + 1")
    par = Par(AtomRef(incx), AtomRef(incy))
    cases.append(
        TripleCase(
            "disjoint parallel increments",
            sp,
            vs,
            vs.compose(_sep_view(("x", 0)), _sep_view(("y", 0))),
            par,
            vs.compose(_sep_view(("x", 1)), _sep_view(("y", 1))),
            sound=True,
        )
    )
    cases.append(
        TripleCase(
            "disjoint parallel increments, wrong post",
            sp,
            vs,
            vs.compose(_sep_view(("x", 0)), _sep_view(("y", 0))),
            par,
            vs.compose(_sep_view(("x", 0)), _sep_view(("y", 1))),
            sound=False,
        )
    )

    # atomic parallel increment of one counter, both readings
    sp1 = counter_space(7)
    vs1 = mk_separation_views(sp1, own_assign_axioms(sp1, "x", "x + 1"))
    both = atomic_parallel_increment(sp1)
    cases.append(
        TripleCase(
            "atomic parallel increment to 2",
            sp1,
            vs1,
            _sep_view(("x", 0)),
            both,
            _sep_view(("x", 2)),
            sound=True,
        )
    )
    cases.append(
        TripleCase(
            "atomic parallel increment claimed to stop at 1",
            sp1,
            vs1,
            _sep_view(("x", 0)),
            both,
            _sep_view(("x", 1)),
            sound=False,
        )
    )

    # the racy non-atomic increment with the lost-update-unsound claim
    sps = scratch_space(3)
    racy_axioms = (
        own_assign_axioms(sps, "t1", "x")
        + own_assign_axioms(sps, "x", "t1 + 1")
        + own_assign_axioms(sps, "t2", "x")
        + own_assign_axioms(sps, "x", "t2 + 1")
    )
    vss = mk_separation_views(sps, racy_axioms)
    racy = non_atomic_parallel_increment(sps)
    pre_racy = vss.compose(
        vss.compose(_sep_view(("x", 0)), _sep_view(("t1", 0))), _sep_view(("t2", 0))
    )
    post_claims_2 = frozenset(
        (("t1", a), ("t2", b), ("x", 2)) for a in (0, 1) for b in (0, 1)
    )
    post_truth = frozenset(
        (("t1", a), ("t2", b), ("x", c)) for a in (0, 1) for b in (0, 1) for c in (1, 2)
    )
    cases.append(
        TripleCase(
            "racy increment claimed to reach exactly 2",
            sps,
            vss,
            pre_racy,
            racy,
            post_claims_2,
            sound=False,
        )
    )
    cases.append(
        TripleCase(
            "racy increment reaches 1 or 2",
            sps,
            vss,
            pre_racy,
            racy,
            post_truth,
            sound=True,
        )
    )

    # a guarded loop counting to its limit
    sp2 = counter_space(4)
    loop_axioms = (
        own_assign_axioms(sp2, "x", "x + 1")
        + own_assume_axioms(sp2, "x < 3")
        + own_assume_axioms(sp2, "not (x < 3)")
    )
    vs2 = mk_separation_views(sp2, loop_axioms)
    loop = guarded_loop(sp2, 3)
    pre_any = frozenset((("x", v),) for v in (0, 1, 2, 3))
    cases.append(
        TripleCase(
            "guarded loop terminates at the limit",
            sp2,
            vs2,
            frozenset(pre_any),
            loop,
            _sep_view(("x", 3)),
            sound=True,
            word_bound=9,
        )
    )
    cases.append(
        TripleCase(
            "guarded loop claimed to stop below the limit",
            sp2,
            vs2,
            _sep_view(("x", 0)),
            loop,
            _sep_view(("x", 2)),
            sound=False,
            word_bound=9,
        )
    )

    # recursive countdown to zero
    sp3 = counter_space(3)
    cd_axioms = (
        own_assign_axioms(sp3, "x", "x - 1")
        + own_assume_axioms(sp3, "x > 0")
        + own_assume_axioms(sp3, "x == 0")
    )
    vs3 = mk_separation_views(sp3, cd_axioms)
    countdown = countdown_rec(sp3)
    cases.append(
        TripleCase(
            "recursive countdown reaches zero",
            sp3,
            vs3,
            frozenset((("x", v),) for v in (0, 1, 2, 3)),
            countdown,
            _sep_view(("x", 0)),
            sound=True,
            word_bound=8,
        )
    )
    cases.append(
        TripleCase(
            "recursive countdown claimed to keep x positive",
            sp3,
            vs3,
            _sep_view(("x", 2)),
            countdown,
            frozenset((("x", v),) for v in (1, 2, 3)),
            sound=False,
            word_bound=8,
        )
    )

    # sequential composition with an intermediate view
    sp4 = counter_space(5)
    seq_axioms = own_assign_axioms(sp4, "x", "x + 1") + own_assign_axioms(
        sp4, "x", "x * 2"
    )
    vs4 = mk_separation_views(sp4, seq_axioms)
    inc_then_double = Seq(
        AtomRef(mk_atom_assign(sp4, "x", "x + 1")),
        AtomRef(mk_atom_assign(sp4, "x", "x * 2")),
    )
    cases.append(
        TripleCase(
            "increment then double",
            sp4,
            vs4,
            _sep_view(("x", 1)),
            inc_then_double,
            _sep_view(("x", 4)),
            sound=True,
        )
    )

    # nondeterministic choice between two writes
    sp5 = counter_space(3)
    ch_axioms = own_assign_axioms(sp5, "x", "1") + own_assign_axioms(sp5, "x", "2")
    vs5 = mk_separation_views(sp5, ch_axioms)
    either = choice_of(
        (AtomRef(mk_atom_assign(sp5, "x", "1")), AtomRef(mk_atom_assign(sp5, "x", "2")))
    )
    cases.append(
        TripleCase(
            "choice lands in the union",
            sp5,
            vs5,
            _sep_view(("x", 0)),
            either,
            frozenset(((("x", 1),), (("x", 2),))),
            sound=True,
        )
    )

    # iteration of an idempotent write keeps its invariant
    sp6 = counter_space(2)
    it_axioms = own_assign_axioms(sp6, "x", "1")
    vs6 = mk_separation_views(sp6, it_axioms)
    cases.append(
        TripleCase(
            "iterated write keeps the invariant",
            sp6,
            vs6,
            _sep_view(("x", 1)),
            Star(AtomRef(mk_atom_assign(sp6, "x", "1"))),
            _sep_view(("x", 1)),
            sound=True,
        )
    )

    return cases
