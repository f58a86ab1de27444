"""Randomized law suites: the executable battery behind the test suite and
the laws subcommand.

Each suite returns a list of LawResult entries, one per law or rule, with
an instance count and the first counterexample found. Conditional rules
are validated on constructed premise-satisfying instances, never by
filtering random noise, so the instance counts are real.
"""

from __future__ import annotations

import itertools
import random
from typing import Callable, Iterable, Sequence

from . import fixpoint as fx
from .lang import BoundedLang, big_union, empty, interleave_words, skip, top
from .opsem import (
    OpSemConfig,
    hoare_abstract,
    kahn_abstract,
    kahn_desc,
    kahn_eval,
    kahn_eval_sequential,
    milner_abstract,
    milner_steps,
    plotkin_abstract,
    plotkin_desc,
    plotkin_star,
    run_command,
    sem,
    sem_cmd,
)
from .prog import (
    AtomRef,
    Choice,
    Par,
    Prog,
    Rec,
    Seq,
    Skip,
    Star,
    Var,
    atoms_of,
    canonical,
    compile_prog,
    denote,
    traces_of_atom_seq,
)
from .report import LawResult, Verdict
from .trace import (
    Atom,
    State,
    StateSpace,
    ic_traces_ending_in,
    inconsistent_traces,
    is_consistent,
    is_inconsistent_closed,
    mk_atom,
    mk_atom_assign,
    mk_atom_assume,
)

__all__ = [
    "suite_algebra",
    "suite_abstract_rules",
    "suite_lemmas",
    "suite_views_interface",
    "suite_deductive_rules",
    "suite_consistency_corpus",
    "suite_operational_fixtures",
    "suite_fixpoint",
    "run_all",
    "DEFAULT_SEED",
]

DEFAULT_SEED = 271828


# -- samplers -------------------------------------------------------------------


def rand_word(rng: random.Random, alphabet: Sequence, max_len: int) -> tuple:
    n = rng.randint(0, max_len)
    return tuple(rng.choice(alphabet) for _ in range(n))


def rand_lang(
    rng: random.Random,
    alphabet: Sequence,
    bound: int,
    max_words: int = 8,
    allow_empty_word: bool = True,
) -> BoundedLang:
    words = set()
    for _ in range(rng.randint(0, max_words)):
        w = rand_word(rng, alphabet, bound)
        if w or allow_empty_word:
            words.add(w)
    return BoundedLang(words, bound)


def rand_state(rng: random.Random, space: StateSpace) -> State:
    return rng.choice(space.states())


def rand_desc(rng: random.Random, space: StateSpace, bound: int, max_words: int = 6) -> BoundedLang:
    return rand_lang(rng, space.pair_alphabet(), bound, max_words)


def rand_atom(rng: random.Random, space: StateSpace, max_pairs: int = 4) -> Atom:
    states = space.states()
    pairs = {
        (rng.choice(states), rng.choice(states)) for _ in range(rng.randint(1, max_pairs))
    }
    return mk_atom(space, pairs)


def _law(
    name: str,
    trials: int,
    rng: random.Random,
    instance: Callable[[random.Random], str | None],
) -> LawResult:
    """Run one law: instance() returns None on success or a description of
    the violation."""
    for i in range(trials):
        bad = instance(rng)
        if bad is not None:
            return LawResult(name, False, i + 1, bad)
    return LawResult(name, True, trials)


# -- the language algebra suite ----------------------------------------------------


def suite_algebra(
    rng: random.Random | None = None,
    trials: int = 500,
    alphabet: Sequence = ("a", "b", "c"),
    bound: int = 5,
) -> list[LawResult]:
    rng = rng or random.Random(DEFAULT_SEED)
    full = top(alphabet, bound)
    bot = empty(bound)
    one = skip(bound)

    def L(r: random.Random) -> BoundedLang:
        return rand_lang(r, alphabet, bound)

    out: list[LawResult] = []

    def law(name: str, check: Callable[[random.Random], str | None], n: int = trials) -> None:
        out.append(_law(name, n, rng, check))

    # Table: commutativity
    law("union commutative", lambda r: _eq(lambda p, q: p.union(q), lambda p, q: q.union(p), L(r), L(r)))
    law("inter commutative", lambda r: _eq(lambda p, q: p.inter(q), lambda p, q: q.inter(p), L(r), L(r)))
    law("shuffle commutative", lambda r: _eq(lambda p, q: p.shuffle(q), lambda p, q: q.shuffle(p), L(r), L(r)))

    # Table: associativity
    law("union associative", lambda r: _assoc(lambda p, q: p.union(q), L(r), L(r), L(r)))
    law("inter associative", lambda r: _assoc(lambda p, q: p.inter(q), L(r), L(r), L(r)))
    law("concat associative", lambda r: _assoc(lambda p, q: p.concat(q), L(r), L(r), L(r)))
    law("shuffle associative", lambda r: _assoc(lambda p, q: p.shuffle(q), L(r), L(r), L(r)))

    # Table: idempotence
    law("union idempotent", lambda r: _one(lambda p: p.union(p), L(r)))
    law("inter idempotent", lambda r: _one(lambda p: p.inter(p), L(r)))

    # Table: units
    law("union unit is bottom", lambda r: _unit(lambda p, q: p.union(q), bot, L(r)))
    law("inter unit is top", lambda r: _unit(lambda p, q: p.inter(q), full, L(r)))
    law("concat unit is skip", lambda r: _unit(lambda p, q: p.concat(q), one, L(r)))
    law("shuffle unit is skip", lambda r: _unit(lambda p, q: p.shuffle(q), one, L(r)))

    # Table: zeros
    law("union zero is top", lambda r: _zero(lambda p, q: p.union(q), full, L(r)))
    law("inter zero is bottom", lambda r: _zero(lambda p, q: p.inter(q), bot, L(r)))
    law("concat zero is bottom", lambda r: _zero(lambda p, q: p.concat(q), bot, L(r)))
    law("shuffle zero is bottom", lambda r: _zero(lambda p, q: p.shuffle(q), bot, L(r)))

    # Kleene star laws
    def kleene1(r: random.Random) -> str | None:
        p = L(r)
        if not one.union(p.concat(p.star())).leq(p.star()):
            return f"skip + P;P* escaped P* for P={p!r}"
        return None

    def kleene3(r: random.Random) -> str | None:
        p = L(r)
        if not one.union(p.star().concat(p)).leq(p.star()):
            return f"skip + P*;P escaped P* for P={p!r}"
        return None

    def kleene2(r: random.Random) -> str | None:
        # premise P + Q;R <= R built by closing a random seed under Q;_
        p, q = L(r), L(r)
        x = p.union(L(r))
        for _ in range(bound + 2):
            nxt = x.union(p).union(q.concat(x))
            if nxt.eq(x):
                break
            x = nxt
        if not q.star().concat(p).leq(x):
            return f"Q*;P escaped R for P={p!r} Q={q!r}"
        return None

    def kleene4(r: random.Random) -> str | None:
        p, q = L(r), L(r)
        x = p.union(L(r))
        for _ in range(bound + 2):
            nxt = x.union(p).union(x.concat(q))
            if nxt.eq(x):
                break
            x = nxt
        if not p.concat(q.star()).leq(x):
            return f"P;Q* escaped R for P={p!r} Q={q!r}"
        return None

    law("kleene: unfold left", kleene1)
    law("kleene: induction left", kleene2)
    law("kleene: unfold right", kleene3)
    law("kleene: induction right", kleene4)

    # distributivity over arbitrary unions
    def distributes(op: Callable, name: str, nonempty: bool = False) -> Callable:
        def check(r: random.Random) -> str | None:
            p = L(r)
            family = [L(r) for _ in range(r.randint(1 if nonempty else 0, 4))]
            joined = big_union(family, bound)
            lhs = op(p, joined)
            rhs = big_union([op(p, q) for q in family], bound)
            if not lhs.eq(rhs):
                return f"{name} left-distribution failed"
            lhs = op(joined, p)
            rhs = big_union([op(q, p) for q in family], bound)
            if not lhs.eq(rhs):
                return f"{name} right-distribution failed"
            return None

        return check

    law("inter distributes over union", distributes(lambda p, q: p.inter(q), "inter"))
    law("concat distributes over union", distributes(lambda p, q: p.concat(q), "concat"))
    law("shuffle distributes over union", distributes(lambda p, q: p.shuffle(q), "shuffle"))
    law(
        "union distributes over non-empty union",
        distributes(lambda p, q: p.union(q), "union", nonempty=True),
    )

    # exchange laws
    def exchange1(r: random.Random) -> str | None:
        p, q, s, t = L(r), L(r), L(r), L(r)
        lhs = p.shuffle(q).concat(s.shuffle(t))
        rhs = p.concat(s).shuffle(q.concat(t))
        return None if lhs.leq(rhs) else "(P||Q);(R||S) escaped (P;R)||(Q;S)"

    def exchange2(r: random.Random) -> str | None:
        p, q, s = L(r), L(r), L(r)
        return None if p.concat(q.shuffle(s)).leq(p.concat(q).shuffle(s)) else "P;(Q||R) escaped (P;Q)||R"

    def exchange3(r: random.Random) -> str | None:
        p, q, s = L(r), L(r), L(r)
        return None if p.shuffle(q).concat(s).leq(p.shuffle(q.concat(s))) else "(P||Q);R escaped P||(Q;R)"

    def exchange4(r: random.Random) -> str | None:
        p, q = L(r), L(r)
        return None if p.concat(q).leq(p.shuffle(q)) else "P;Q escaped P||Q"

    law("exchange: both sequential", exchange1)
    law("exchange: left sequential", exchange2)
    law("exchange: right sequential", exchange3)
    law("exchange: concat below shuffle", exchange4)

    # bound soundness: evaluating at a larger bound then truncating equals
    # evaluating at the smaller bound
    def bound_sound(r: random.Random) -> str | None:
        small = r.randint(1, bound - 1)

        def rand_tree(depth: int):
            if depth == 0 or r.random() < 0.3:
                words = rand_lang(r, alphabet, small).words
                return ("leaf", words)
            kind = r.choice(["union", "inter", "concat", "shuffle", "star"])
            if kind == "star":
                return ("star", rand_tree(depth - 1))
            return (kind, rand_tree(depth - 1), rand_tree(depth - 1))

        def evaluate(tree, b: int) -> BoundedLang:
            if tree[0] == "leaf":
                return BoundedLang([w for w in tree[1] if len(w) <= b], b)
            if tree[0] == "star":
                return evaluate(tree[1], b).star()
            lhs, rhs = evaluate(tree[1], b), evaluate(tree[2], b)
            return getattr(lhs, tree[0])(rhs)

        tree = rand_tree(3)
        wide = evaluate(tree, bound).truncate(small)
        narrow = evaluate(tree, small)
        if not wide.eq(narrow):
            return f"bound {bound} then truncate to {small} differs from bound {small}"
        return None

    law("bound soundness under truncation", bound_sound)

    def star_monotone(r: random.Random) -> str | None:
        q = L(r)
        p = BoundedLang(rng_subset(r, q.words), bound)
        return None if p.star().leq(q.star()) else "star not monotone"

    law("star monotone", star_monotone)

    return out


def rng_subset(rng: random.Random, items: Iterable) -> set:
    return {x for x in items if rng.random() < 0.6}


def _eq(f: Callable, g: Callable, *args) -> str | None:
    return None if f(*args).eq(g(*args)) else f"{f} != {g} on {args!r}"


def _assoc(op: Callable, p, q, s) -> str | None:
    return None if op(op(p, q), s).eq(op(p, op(q, s))) else f"not associative on {p!r}, {q!r}, {s!r}"


def _one(f: Callable, p) -> str | None:
    return None if f(p).eq(p) else f"not idempotent on {p!r}"


def _unit(op: Callable, unit, p) -> str | None:
    if not op(p, unit).eq(p) or not op(unit, p).eq(p):
        return f"unit law failed on {p!r}"
    return None


def _zero(op: Callable, zero, p) -> str | None:
    if not op(p, zero).eq(zero) or not op(zero, p).eq(zero):
        return f"zero law failed on {p!r}"
    return None


# -- abstract calculi -----------------------------------------------------------


def suite_abstract_rules(
    rng: random.Random | None = None,
    trials: int = 200,
    bound: int = 4,
) -> list[LawResult]:
    """Every rule of the four abstract calculi, validated on random
    premise-satisfying instances, plus the optional future-choice step."""
    rng = rng or random.Random(DEFAULT_SEED + 1)
    space = StateSpace({"x": range(2)})
    cfg = OpSemConfig(
        space,
        (
            mk_atom_assign(space, "x", "1"),
            mk_atom_assign(space, "x", "1 - x"),
            mk_atom_assume(space, "x == 0"),
        ),
    )
    one = skip(bound)

    def D(r: random.Random) -> BoundedLang:
        return rand_desc(r, space, bound)

    def action(r: random.Random) -> BoundedLang:
        return r.choice(cfg.actions(bound))[1]

    out: list[LawResult] = []

    def law(name: str, check: Callable[[random.Random], str | None]) -> None:
        out.append(_law(name, trials, rng, check))

    # Hoare logic
    def hskip(r):
        p = D(r)
        return _ok(hoare_abstract(p, one, p))

    law("Hskip", hskip)

    def hseq(r):
        p, q, q2 = D(r), D(r), D(r)
        mid = p.concat(q).union(D(r))
        post = mid.concat(q2).union(D(r))
        if not (hoare_abstract(p, q, mid) and hoare_abstract(mid, q2, post)):
            return "constructed premise failed"
        return _ok(hoare_abstract(p, q.concat(q2), post))

    law("Hseq", hseq)

    def hchoice(r):
        p = D(r)
        family = [D(r) for _ in range(r.randint(0, 3))]
        post = big_union([p.concat(q) for q in family], bound).union(D(r))
        if not all(hoare_abstract(p, q, post) for q in family):
            return "constructed premise failed"
        return _ok(hoare_abstract(p, big_union(family, bound), post))

    law("Hchoice", hchoice)

    def hiter(r):
        q = D(r)
        p = D(r)
        for _ in range(bound + 2):
            nxt = p.union(p.concat(q))
            if nxt.eq(p):
                break
            p = nxt
        if not hoare_abstract(p, q, p):
            return "constructed premise failed"
        return _ok(hoare_abstract(p, q.star(), p))

    law("Hiter", hiter)

    def hcons(r):
        p, q = D(r), D(r)
        post = p.concat(q).union(D(r))
        p_small = BoundedLang(rng_subset(r, p.words), bound)
        post_big = post.union(D(r))
        return _ok(hoare_abstract(p_small, q, post_big))

    law("Hcons", hcons)

    def hdisj(r):
        family = [D(r) for _ in range(r.randint(0, 3))]
        q = D(r)
        post = big_union([p.concat(q) for p in family], bound).union(D(r))
        if not all(hoare_abstract(p, q, post) for p in family):
            return "constructed premise failed"
        return _ok(hoare_abstract(big_union(family, bound), q, post))

    law("Hdisj", hdisj)

    def hconj(r):
        p, q, p2, q2 = D(r), D(r), D(r), D(r)
        post = p.concat(q).union(D(r))
        post2 = p2.concat(q2).union(D(r))
        return _ok(hoare_abstract(p.inter(p2), q.inter(q2), post.inter(post2)))

    law("Hconj", hconj)

    def hframe(r):
        p, q, f = D(r), D(r), D(r)
        post = p.concat(q).union(D(r))
        return _ok(hoare_abstract(f.shuffle(p), q, f.shuffle(post)))

    law("Hframe", hframe)

    def hconc(r):
        p, q, p2, q2 = D(r), D(r), D(r), D(r)
        post = p.concat(q).union(D(r))
        post2 = p2.concat(q2).union(D(r))
        return _ok(
            hoare_abstract(p.shuffle(p2), q.shuffle(q2), post.shuffle(post2))
        )

    law("Hconc", hconc)

    # Plotkin calculus
    def paction(r):
        q = action(r)
        s = D(r)
        s2 = BoundedLang(rng_subset(r, s.concat(q).words), bound)
        return _ok(plotkin_abstract(q, s, one, s2, cfg))

    law("Paction", paction)

    def pseq1(r):
        p, s = D(r), D(r)
        return _ok(plotkin_abstract(one.concat(p), s, p, s, cfg))

    law("Pseq1", pseq1)

    def _premise_step(r):
        """A premise-true plotkin step: P >= Q;R and s;Q >= s2."""
        q = action(r)
        rest = D(r)
        p = q.concat(rest).union(D(r))
        s = D(r)
        s2 = BoundedLang(rng_subset(r, s.concat(q).words), bound)
        assert plotkin_abstract(p, s, rest, s2, cfg)
        return p, s, rest, s2

    def pseq2(r):
        p, s, rest, s2 = _premise_step(r)
        tail = D(r)
        return _ok(plotkin_abstract(p.concat(tail), s, rest.concat(tail), s2, cfg))

    law("Pseq2", pseq2)

    def pchoice(r):
        family = [D(r) for _ in range(r.randint(1, 3))]
        p = r.choice(family)
        s = D(r)
        return _ok(plotkin_abstract(big_union(family, bound), s, p, s, cfg))

    law("Pchoice", pchoice)
    law("Piter1", lambda r: (lambda p, s: _ok(plotkin_abstract(p.star(), s, one, s, cfg)))(D(r), D(r)))
    law(
        "Piter2",
        lambda r: (lambda p, s: _ok(plotkin_abstract(p.star(), s, p.concat(p.star()), s, cfg)))(
            D(r), D(r)
        ),
    )
    law("Pconc1", lambda r: (lambda p, s: _ok(plotkin_abstract(one.shuffle(p), s, p, s, cfg)))(D(r), D(r)))
    law("Pconc2", lambda r: (lambda p, s: _ok(plotkin_abstract(p.shuffle(one), s, p, s, cfg)))(D(r), D(r)))

    def pconc3(r):
        p, s, rest, s2 = _premise_step(r)
        other = D(r)
        return _ok(plotkin_abstract(p.shuffle(other), s, rest.shuffle(other), s2, cfg))

    def pconc4(r):
        p, s, rest, s2 = _premise_step(r)
        other = D(r)
        return _ok(plotkin_abstract(other.shuffle(p), s, other.shuffle(rest), s2, cfg))

    law("Pconc3", pconc3)
    law("Pconc4", pconc4)

    # Milner calculus
    def maction(r):
        q = action(r)
        return _ok(milner_abstract(q, q, one, cfg))

    law("Maction", maction)
    law("Mseq1", lambda r: (lambda p: _ok(milner_abstract(one.concat(p), one, p, cfg)))(D(r)))

    def _premise_milner(r):
        q = action(r)
        rest = D(r)
        p = q.concat(rest).union(D(r))
        assert milner_abstract(p, q, rest, cfg)
        return p, q, rest

    def mseq2(r):
        p, q, rest = _premise_milner(r)
        tail = D(r)
        return _ok(milner_abstract(p.concat(tail), q, rest.concat(tail), cfg))

    law("Mseq2", mseq2)

    def mchoice(r):
        family = [D(r) for _ in range(r.randint(1, 3))]
        p = r.choice(family)
        return _ok(milner_abstract(big_union(family, bound), one, p, cfg))

    law("Mchoice", mchoice)
    law("Miter1", lambda r: _ok(milner_abstract(D(r).star(), one, one, cfg)))
    law("Miter2", lambda r: (lambda p: _ok(milner_abstract(p.star(), one, p.concat(p.star()), cfg)))(D(r)))
    law("Mconc1", lambda r: (lambda p: _ok(milner_abstract(one.shuffle(p), one, p, cfg)))(D(r)))
    law("Mconc2", lambda r: (lambda p: _ok(milner_abstract(p.shuffle(one), one, p, cfg)))(D(r)))

    def mconc3(r):
        p, q, rest = _premise_milner(r)
        other = D(r)
        return _ok(milner_abstract(p.shuffle(other), q, rest.shuffle(other), cfg))

    def mconc4(r):
        p, q, rest = _premise_milner(r)
        other = D(r)
        return _ok(milner_abstract(other.shuffle(p), q, other.shuffle(rest), cfg))

    law("Mconc3", mconc3)
    law("Mconc4", mconc4)

    # Kahn calculus
    law("Kskip", lambda r: (lambda s: _ok(kahn_abstract(one, s, s)))(D(r)))

    def kseq(r):
        p, p2, s = D(r), D(r), D(r)
        s2 = BoundedLang(rng_subset(r, s.concat(p).words), bound)
        s3 = BoundedLang(rng_subset(r, s2.concat(p2).words), bound)
        if not (kahn_abstract(p, s, s2) and kahn_abstract(p2, s2, s3)):
            return "constructed premise failed"
        return _ok(kahn_abstract(p.concat(p2), s, s3))

    law("Kseq", kseq)

    def kchoice(r):
        family = [D(r) for _ in range(r.randint(1, 3))]
        p = r.choice(family)
        s = D(r)
        s2 = BoundedLang(rng_subset(r, s.concat(p).words), bound)
        return _ok(kahn_abstract(big_union(family, bound), s, s2))

    law("Kchoice", kchoice)
    law("Kiter1", lambda r: (lambda p, s: _ok(kahn_abstract(p.star(), s, s)))(D(r), D(r)))

    def kiter2(r):
        p, s = D(r), D(r)
        s2 = BoundedLang(rng_subset(r, s.concat(p).words), bound)
        s3 = BoundedLang(rng_subset(r, s2.concat(p.star()).words), bound)
        return _ok(kahn_abstract(p.star(), s, s3))

    law("Kiter2", kiter2)

    def kconc1(r):
        p, p2, s = D(r), D(r), D(r)
        s2 = BoundedLang(rng_subset(r, s.concat(p).words), bound)
        s3 = BoundedLang(rng_subset(r, s2.concat(p2).words), bound)
        return _ok(kahn_abstract(p.shuffle(p2), s, s3))

    def kconc2(r):
        p, p2, s = D(r), D(r), D(r)
        s2 = BoundedLang(rng_subset(r, s.concat(p2).words), bound)
        s3 = BoundedLang(rng_subset(r, s2.concat(p).words), bound)
        return _ok(kahn_abstract(p.shuffle(p2), s, s3))

    law("Kconc1", kconc1)
    law("Kconc2", kconc2)

    # optional future-choice step
    def pdfuturechoice(r):
        p, p1, p2 = D(r), D(r), D(r)
        sigma = rand_state(r, space)
        return _ok(
            plotkin_desc(p.concat(p1.union(p2)), sigma, p.concat(p1), sigma, cfg)
        )

    law("PDfuturechoice", pdfuturechoice)

    return out


def _ok(result: bool) -> str | None:
    return None if result else "judgement refuted"


# -- lemma battery ---------------------------------------------------------------


def rand_prog(
    rng: random.Random,
    atoms: Sequence[Atom],
    depth: int = 3,
    allow_star: bool = True,
) -> Prog:
    """A small random program; stars are kept shallow and unnested so
    bounded compilation stays exact at modest word bounds."""
    if depth <= 0 or rng.random() < 0.25:
        return AtomRef(rng.choice(atoms)) if rng.random() < 0.85 else Skip()
    kind = rng.choice(["seq", "choice", "par"] + (["star"] if allow_star else []))
    if kind == "star":
        body = rand_prog(rng, atoms, 1, allow_star=False)
        return Star(body)
    left = rand_prog(rng, atoms, depth - 1, allow_star)
    right = rand_prog(rng, atoms, depth - 1, allow_star)
    if kind == "seq":
        return Seq(left, right)
    if kind == "par":
        return Par(left, right)
    return Choice((left, right))


def _plotkin_literal(
    p: BoundedLang,
    sigma: State,
    p2: BoundedLang,
    sigma2: State,
    cfg: OpSemConfig,
    prefix_len: int = 1,
) -> bool:
    """The trace-prefix reading of the hidden-action step: some consistent
    history ending in sigma extends, via the abstract judgement on
    singleton state languages, to one ending in sigma2."""
    k = prefix_len + 1
    targets = ic_traces_ending_in(sigma2, k).words
    for t in ic_traces_ending_in(sigma, prefix_len).words:
        s = BoundedLang((t,), k)
        for t2 in targets:
            s2 = BoundedLang((t2,), k)
            if plotkin_abstract(p, s, p2, s2, cfg):
                return True
    return False


def _kahn_literal(
    p: BoundedLang,
    sigma: State,
    sigma2: State,
    prefix_len: int,
    forall: bool,
) -> bool:
    """The trace-prefix reading of the big-step judgement, in its
    existential or universal-history form."""
    witnesses = []
    for t in ic_traces_ending_in(sigma, prefix_len).words:
        found = False
        for u in p.words:
            t2 = t + u
            if t2 and is_consistent(t2) and t2[-1][1] == sigma2:
                found = True
                break
        witnesses.append(found)
    return all(witnesses) if forall else any(witnesses)


def suite_lemmas(
    rng: random.Random | None = None,
    commands: int = 100,
    prefix_len: int = 3,
) -> list[LawResult]:
    """The relationships between the calculi, checked on small state
    spaces: trace-set order vs erasure, the atom form of the basic triple,
    the hidden-action characterizations in both directions, the endpoint
    reductions, command-to-description transfer, the small-step
    approximation of big-step results, and the denotation homomorphism."""
    from .views import (
        btriple,
        btriple_literal,
        mk_powerset_views,
        mk_separation_views,
        traces_establishing,
    )

    rng = rng or random.Random(DEFAULT_SEED + 2)
    out: list[LawResult] = []
    bound = 3

    space2 = StateSpace({"x": range(2)})
    space3 = StateSpace({"x": range(3)})
    space22 = StateSpace({"x": range(2), "y": range(2)})

    def law(name: str, check: Callable[[random.Random], str | None], n: int = commands) -> None:
        out.append(_law(name, n, rng, check))

    # trace-set order coincides with erasure order
    sep = mk_separation_views(space3)
    pow3 = mk_powerset_views(space3)

    def lemma_traces_vs_erasure(r: random.Random) -> str | None:
        vs = r.choice((sep, pow3))
        cells = vs.cells
        v = frozenset(c for c in cells if r.random() < 0.4)
        v2 = frozenset(c for c in cells if r.random() < 0.4)
        lhs = traces_establishing(vs, v, 2).leq(traces_establishing(vs, v2, 2))
        rhs = vs.erase(v) <= vs.erase(v2)
        return None if lhs == rhs else f"order mismatch on {vs.view_str(v)}, {vs.view_str(v2)}"

    law("trace sets ordered iff erasures ordered", lemma_traces_vs_erasure)

    # atom characterization of the basic triple
    def lemma_atom_btriple(r: random.Random) -> str | None:
        vs = r.choice((sep, pow3))
        a = rand_atom(r, space3)
        v = frozenset(c for c in vs.cells if r.random() < 0.4)
        v2 = frozenset(c for c in vs.cells if r.random() < 0.4)
        lhs = btriple(vs, v, a.desc(bound), v2)
        rhs = a.apply_set(vs.erase(v)) <= vs.erase(v2)
        return None if lhs == rhs else "atom triple vs image inclusion mismatch"

    law("basic triple on an atom is image inclusion", lemma_atom_btriple)

    # endpoint reduction of the basic triple vs its literal reading
    def lemma_btriple_literal(r: random.Random) -> str | None:
        vs = r.choice((sep, pow3))
        p = rand_desc(r, space3, 2, max_words=4)
        v = frozenset(c for c in vs.cells if r.random() < 0.4)
        v2 = frozenset(c for c in vs.cells if r.random() < 0.4)
        fast = btriple(vs, v, p, v2)
        slow = btriple_literal(vs, v, p, v2, prefix_len=2)
        return None if fast == slow else "endpoint form disagrees with literal form"

    law("basic triple endpoint reduction", lemma_btriple_literal, max(20, commands // 3))

    # hidden-action characterization, both directions, description level
    atoms2 = (
        mk_atom_assign(space2, "x", "1"),
        mk_atom_assign(space2, "x", "1 - x"),
        mk_atom_assume(space2, "x == 0"),
    )
    cfg2 = OpSemConfig(space2, atoms2)

    def lemma_plotkin_characterization(r: random.Random) -> str | None:
        p = rand_desc(r, space2, bound)
        # bias towards steppable shapes half the time
        if r.random() < 0.5:
            act = r.choice(cfg2.actions(bound))[1]
            p = act.concat(rand_desc(r, space2, bound)).union(rand_desc(r, space2, bound))
        p2 = rand_desc(r, space2, bound)
        sigma, sigma2 = rand_state(r, space2), rand_state(r, space2)
        impl = plotkin_desc(p, sigma, p2, sigma2, cfg2)
        lit = _plotkin_literal(p, sigma, p2, sigma2, cfg2, prefix_len=2)
        if impl != lit:
            return f"implementation {impl} vs literal {lit}"
        # the milner-then-kahn decomposition
        decomposed = any(
            milner_abstract(p, q, p2, cfg2) and sigma2 in cfg2.action_result(act, sigma)
            for act, q in cfg2.actions(bound)
        )
        return None if impl == decomposed else "milner/kahn decomposition mismatch"

    law("hidden action step characterizations", lemma_plotkin_characterization)

    # endpoint reduction of the big-step judgement, both history forms
    def lemma_kahn_endpoint(r: random.Random) -> str | None:
        p = rand_desc(r, space2, bound)
        sigma, sigma2 = rand_state(r, space2), rand_state(r, space2)
        fast = kahn_desc(p, sigma, sigma2)
        exists_form = _kahn_literal(p, sigma, sigma2, prefix_len, forall=False)
        forall_form = _kahn_literal(p, sigma, sigma2, prefix_len, forall=True)
        if fast != exists_form or fast != forall_form:
            return f"endpoint {fast}, exists {exists_form}, forall {forall_form}"
        return None

    law("big-step endpoint reduction, both history forms", lemma_kahn_endpoint)

    # command-to-description step transfer along explorations
    atoms22 = (
        mk_atom_assign(space22, "x", "1"),
        mk_atom_assign(space22, "y", "x"),
        mk_atom_assume(space22, "x == y"),
    )
    cfg22 = OpSemConfig(space22, atoms22)

    def lemma_command_transfer(r: random.Random) -> str | None:
        p = rand_prog(r, atoms22, depth=2)
        sigma = rand_state(r, space22)
        ex = plotkin_star(p, sigma, 3)
        for (q, s, act, q2, s2) in ex.transitions[:12]:
            dq = denote(compile_prog(q, bound + 3).command)
            dq2 = denote(compile_prog(q2, bound + 3).command)
            if not plotkin_desc(dq, s, dq2, s2, cfg22):
                return f"step of {q!r} not mirrored on descriptions"
        return None

    law("command steps transfer to descriptions", lemma_command_transfer, max(25, commands // 4))

    # small-step closure only approximates big-step outcomes
    def lemma_star_approximates(r: random.Random) -> str | None:
        p = rand_prog(r, atoms2, depth=2)
        sigma = rand_state(r, space2)
        ex = plotkin_star(p, sigma, 10)
        finals = ex.final_states()
        big = kahn_eval(p, sigma, unroll_bound=8, word_bound=10)
        if not finals <= big:
            return "a terminating small-step run escaped the big-step outcomes"
        compiled = compile_prog(p, 10, 8)
        if compiled.exact:
            via_denote = frozenset(
                s2 for s2 in space2.states() if kahn_desc(denote(compiled.command), sigma, s2)
            )
            if not finals <= via_denote:
                return "a terminating small-step run escaped the denoted description"
        return None

    law("small-step closure approximates big-step", lemma_star_approximates)

    # the six homomorphism clauses
    def lemma_homomorphism(r: random.Random) -> str | None:
        a = r.choice(atoms2)
        b = bound
        if not denote(BoundedLang(((a,),), b)).eq(a.desc(b)):
            return "atom clause"
        if not denote(skip(b)).eq(skip(b)):
            return "skip clause"
        c1 = rand_lang(r, atoms2, b, max_words=4)
        c2 = rand_lang(r, atoms2, b, max_words=4)
        if not denote(c1.concat(c2)).eq(denote(c1).concat(denote(c2))):
            return "concat clause"
        family = [rand_lang(r, atoms2, b, max_words=3) for _ in range(r.randint(0, 3))]
        if not denote(big_union(family, b)).eq(
            big_union([denote(c) for c in family], b)
        ):
            return "union clause"
        if not denote(c1.star()).eq(denote(c1).star()):
            return "star clause"
        if not denote(c1.shuffle(c2)).eq(denote(c1).shuffle(denote(c2))):
            return "shuffle clause"
        return None

    law("denotation homomorphism, six clauses", lemma_homomorphism, max(30, commands // 3))

    # structural one-step enumerator is sound for the semantic judgement
    def lemma_milner_soundness(r: random.Random) -> str | None:
        p = rand_prog(r, atoms2, depth=2)
        b = 8
        dp = denote(compile_prog(p, b).command)
        for (act, p2) in milner_steps(p):
            dq = skip(b) if act is None else act.desc(b)
            dp2 = denote(compile_prog(p2, b).command)
            if not dq.concat(dp2).leq(dp):
                return f"emitted step {act!r} of {p!r} unsound"
        return None

    law("one-step enumerator sound", lemma_milner_soundness, max(30, commands // 3))

    # big-step evaluator agrees with the compiled denotation
    def lemma_kahn_eval_vs_compile(r: random.Random) -> str | None:
        p = rand_prog(r, atoms2, depth=2)
        sigma = rand_state(r, space2)
        got = kahn_eval(p, sigma, unroll_bound=8, word_bound=10)
        compiled = compile_prog(p, 10, 8)
        want = sem_cmd(compiled.command, sigma)
        if compiled.exact and got != want:
            return f"evaluator {sorted(got)!r} vs denotation {sorted(want)!r} on {p!r}"
        return None

    law("big-step evaluator matches compiled semantics", lemma_kahn_eval_vs_compile)

    # sequentialized parallel execution is sound but incomplete
    def lemma_sequential_subset(r: random.Random) -> str | None:
        p = rand_prog(r, atoms2, depth=2)
        sigma = rand_state(r, space2)
        seq_out = kahn_eval_sequential(p, sigma, unroll_bound=8)
        full = kahn_eval(p, sigma, unroll_bound=8, word_bound=10)
        return None if seq_out <= full else "sequential outcomes escaped the interleaving"

    law("sequential parallel rules sound", lemma_sequential_subset, max(30, commands // 3))

    # inconsistency cannot be repaired by extension
    def lemma_inconsistent_closed(r: random.Random) -> str | None:
        p = rand_desc(r, space2, 2, max_words=4)
        return None if is_inconsistent_closed(space2, p, prefix_len=2, rng=r) else (
            "appending repaired an inconsistent prefix"
        )

    law("inconsistent prefixes stay inconsistent", lemma_inconsistent_closed, max(30, commands // 3))

    # relational word execution matches the trace-set semantics
    def lemma_run_vs_sem(r: random.Random) -> str | None:
        c = rand_lang(r, atoms2, bound, max_words=4)
        sigma = rand_state(r, space2)
        return None if run_command(c, sigma) == sem_cmd(c, sigma) else (
            "relational execution differs from trace-set semantics"
        )

    law("relational execution matches trace semantics", lemma_run_vs_sem, max(30, commands // 3))

    return out
