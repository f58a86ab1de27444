"""Monotone language functions as syntax, and bounded least fixpoints.

Functions on bounded languages are represented by a small term grammar
rather than opaque callables: constants, named arguments, union, concat,
shuffle, intersection, star, and nested least fixpoints. Every constructor
is monotone in each argument and the least fixpoint of a monotone function
is monotone in its remaining arguments, so monotonicity (and with it safe
iterability) is certified by construction. Least fixpoints are computed by
Kleene iteration from bottom; on bounded word sets the chain stabilizes in
finitely many rounds, with a configurable cap as a second line of defence.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .lang import BoundedLang, empty

__all__ = [
    "FnTerm",
    "ConstFn",
    "ArgFn",
    "UnionFn",
    "ConcatFn",
    "ShuffleFn",
    "InterFn",
    "StarFn",
    "LfpFn",
    "LfpResult",
    "evaluate",
    "free_args",
    "lfp_bounded",
    "star_recursion_fn",
    "map_constants",
    "is_monotone_on",
    "is_directed",
    "is_scott_continuous",
    "check_recursion_rules",
]


class FnTerm:
    """Base class for function terms."""

    __slots__ = ()


@dataclass(frozen=True)
class ConstFn(FnTerm):
    value: BoundedLang


@dataclass(frozen=True)
class ArgFn(FnTerm):
    name: str = "x"


@dataclass(frozen=True)
class UnionFn(FnTerm):
    parts: tuple  # zero parts is the constant bottom


@dataclass(frozen=True)
class ConcatFn(FnTerm):
    left: FnTerm
    right: FnTerm


@dataclass(frozen=True)
class ShuffleFn(FnTerm):
    left: FnTerm
    right: FnTerm


@dataclass(frozen=True)
class InterFn(FnTerm):
    left: FnTerm
    right: FnTerm


@dataclass(frozen=True)
class StarFn(FnTerm):
    body: FnTerm


@dataclass(frozen=True)
class LfpFn(FnTerm):
    """Least fixpoint binder: the body is a function of ``name``."""

    name: str
    body: FnTerm


def free_args(term: FnTerm) -> frozenset:
    if isinstance(term, ArgFn):
        return frozenset((term.name,))
    if isinstance(term, ConstFn):
        return frozenset()
    if isinstance(term, UnionFn):
        out: frozenset = frozenset()
        for p in term.parts:
            out |= free_args(p)
        return out
    if isinstance(term, (ConcatFn, ShuffleFn, InterFn)):
        return free_args(term.left) | free_args(term.right)
    if isinstance(term, StarFn):
        return free_args(term.body)
    if isinstance(term, LfpFn):
        return free_args(term.body) - {term.name}
    raise TypeError(f"not a function term: {term!r}")


def evaluate(
    term: FnTerm,
    env: Mapping[str, BoundedLang],
    bound: int,
    max_rounds: int = 64,
) -> tuple[BoundedLang, bool]:
    """Evaluate a term under an environment for its free arguments.

    Returns (value, exact) where exact is False when some nested fixpoint
    hit max_rounds before stabilizing; the value is then a sound
    under-approximation.
    """
    if isinstance(term, ConstFn):
        if term.value.bound != bound:
            raise ValueError(
                f"constant bound {term.value.bound} differs from evaluation bound {bound}"
            )
        return term.value, True
    if isinstance(term, ArgFn):
        try:
            return env[term.name], True
        except KeyError:
            raise ValueError(f"unbound argument: {term.name}") from None
    if isinstance(term, UnionFn):
        acc = empty(bound)
        exact = True
        for p in term.parts:
            v, ok = evaluate(p, env, bound, max_rounds)
            exact = exact and ok
            acc = acc.union(v)
        return acc, exact
    if isinstance(term, (ConcatFn, ShuffleFn, InterFn)):
        lv, lok = evaluate(term.left, env, bound, max_rounds)
        rv, rok = evaluate(term.right, env, bound, max_rounds)
        if isinstance(term, ConcatFn):
            return lv.concat(rv), lok and rok
        if isinstance(term, ShuffleFn):
            return lv.shuffle(rv), lok and rok
        return lv.inter(rv), lok and rok
    if isinstance(term, StarFn):
        v, ok = evaluate(term.body, env, bound, max_rounds)
        return v.star(), ok
    if isinstance(term, LfpFn):
        inner = dict(env)
        current = empty(bound)
        exact = True
        for _ in range(max_rounds):
            inner[term.name] = current
            nxt, ok = evaluate(term.body, inner, bound, max_rounds)
            exact = exact and ok
            if nxt == current:
                return current, exact
            current = nxt
        return current, False
    raise TypeError(f"not a function term: {term!r}")


@dataclass(frozen=True)
class LfpResult:
    """Kleene iteration outcome. converged implies f(value) == value at the
    bound; otherwise the value is the max_rounds-th iterate from bottom."""

    value: BoundedLang
    converged: bool
    rounds: int


def lfp_bounded(f: FnTerm, bound: int, max_rounds: int = 64) -> LfpResult:
    """Least fixpoint of a one-argument term via iteration from bottom."""
    names = free_args(f)
    if len(names) != 1:
        raise ValueError(f"lfp_bounded needs exactly one free argument, got {sorted(names)}")
    (arg,) = names
    current = empty(bound)
    exact = True
    for i in range(max_rounds):
        nxt, ok = evaluate(f, {arg: current}, bound, max_rounds)
        exact = exact and ok
        if nxt == current:
            return LfpResult(current, exact, i)
        current = nxt
    return LfpResult(current, False, max_rounds)


def star_recursion_fn(base: BoundedLang, arg: str = "x") -> FnTerm:
    """The function whose least fixpoint is base*: x maps to skip + base;x."""
    from .lang import skip

    return UnionFn((ConstFn(skip(base.bound)), ConcatFn(ConstFn(base), ArgFn(arg))))


def map_constants(term: FnTerm, g) -> FnTerm:
    """Rebuild a term with every constant transformed by g. Used to move a
    function on commands to the corresponding function on descriptions."""
    if isinstance(term, ConstFn):
        return ConstFn(g(term.value))
    if isinstance(term, ArgFn):
        return term
    if isinstance(term, UnionFn):
        return UnionFn(tuple(map_constants(p, g) for p in term.parts))
    if isinstance(term, ConcatFn):
        return ConcatFn(map_constants(term.left, g), map_constants(term.right, g))
    if isinstance(term, ShuffleFn):
        return ShuffleFn(map_constants(term.left, g), map_constants(term.right, g))
    if isinstance(term, InterFn):
        return InterFn(map_constants(term.left, g), map_constants(term.right, g))
    if isinstance(term, StarFn):
        return StarFn(map_constants(term.body, g))
    if isinstance(term, LfpFn):
        return LfpFn(term.name, map_constants(term.body, g))
    raise TypeError(f"not a function term: {term!r}")


def is_monotone_on(f: FnTerm, pairs: Iterable, bound: int, max_rounds: int = 64) -> bool:
    """Spot-check monotonicity on given (smaller, larger) language pairs.
    Grammar terms are monotone by construction; this is a regression hook."""
    names = free_args(f)
    if len(names) != 1:
        raise ValueError("monotonicity check needs a one-argument term")
    (arg,) = names
    for small, large in pairs:
        if not small.leq(large):
            raise ValueError("pair is not ordered")
        lo, _ = evaluate(f, {arg: small}, bound, max_rounds)
        hi, _ = evaluate(f, {arg: large}, bound, max_rounds)
        if not lo.leq(hi):
            return False
    return True


# -- Kleene fixpoint theorem side conditions -----------------------------------


def is_directed(family: Iterable[BoundedLang]) -> bool:
    """Non-empty, and every two members have an upper bound in the family."""
    langs = list(family)
    if not langs:
        return False
    for p in langs:
        for q in langs:
            if not any(p.leq(r) and q.leq(r) for r in langs):
                return False
    return True


def is_scott_continuous(
    f: FnTerm,
    families: Iterable[Iterable[BoundedLang]],
    bound: int,
    max_rounds: int = 64,
) -> bool:
    """Check f(union of X) == union of f over X on sampled directed families."""
    names = free_args(f)
    if len(names) != 1:
        raise ValueError("continuity check needs a one-argument term")
    (arg,) = names
    from .lang import big_union

    for family in families:
        langs = list(family)
        if not is_directed(langs):
            raise ValueError("family is not directed")
        joined = big_union(langs, bound)
        lhs, _ = evaluate(f, {arg: joined}, bound, max_rounds)
        rhs = big_union(
            [evaluate(f, {arg: p}, bound, max_rounds)[0] for p in langs], bound
        )
        if not lhs.eq(rhs):
            return False
    return True


# -- recursion rules ----------------------------------------------------------


def _apply(f: FnTerm, x: BoundedLang, bound: int, max_rounds: int) -> BoundedLang:
    (arg,) = free_args(f)
    value, _ = evaluate(f, {arg: x}, bound, max_rounds)
    return value


def check_recursion_rules(
    f_cmd: FnTerm,
    bound: int,
    views=None,
    pre_view=None,
    post_view=None,
    hoare_pre: BoundedLang | None = None,
    hoare_post: BoundedLang | None = None,
    cfg=None,
    rec_prog=None,
    sample_fns: Iterable[BoundedLang] = (),
    max_rounds: int = 64,
    search_cap: int = 4096,
):
    """Validate the deductive and operational recursion rules on one
    instance.

    f_cmd is a one-argument function on commands; the description-level
    function is derived by denoting its constants. The deductive rules are
    checked as implications with the premise sampled over ``sample_fns``
    plus bottom, skip and the fixpoint itself (a sampled premise that fails
    makes the instance vacuous and is reported as such); the operational
    rules ride on the fixpoint equation at the bound.
    """
    from .lang import skip as skip_lang
    from .opsem import (
        hoare_abstract,
        kahn_desc,
        milner_abstract,
        milner_steps,
        plotkin_desc,
    )
    from .prog import Rec, denote, subst
    from .report import Report

    report = Report("recursion rules")
    (arg,) = free_args(f_cmd)
    lfp_cmd = lfp_bounded(f_cmd, bound, max_rounds)
    f_desc = map_constants(f_cmd, denote)
    lfp_desc = lfp_bounded(f_desc, bound, max_rounds)
    report.add(
        "fixpoint stabilized at the bound",
        lfp_cmd.converged and lfp_desc.converged,
        f"rounds: {lfp_cmd.rounds} command-level, {lfp_desc.rounds} description-level",
    )
    cmd_samples = [empty(bound), skip_lang(bound), lfp_cmd.value, *sample_fns]
    desc_samples = [empty(bound), skip_lang(bound), lfp_desc.value] + [
        denote(c) for c in sample_fns
    ]

    def deductive(name: str, triple_holds, samples, f: FnTerm, fixed: BoundedLang) -> None:
        premise = all(
            (not triple_holds(q)) or triple_holds(_apply(f, q, bound, max_rounds))
            for q in samples
        )
        if not premise:
            report.add(name, True, "vacuous: sampled premise fails")
            return
        conclusion = triple_holds(fixed)
        report.add(name, conclusion, None if conclusion else "premise held, conclusion failed")

    if hoare_pre is not None and hoare_post is not None:
        deductive(
            "Hrec",
            lambda q: hoare_abstract(hoare_pre, q, hoare_post),
            desc_samples,
            f_desc,
            lfp_desc.value,
        )
    if views is not None and pre_view is not None and post_view is not None:
        from .views import btriple, ftriple, vtriple
        from .report import Verdict

        deductive(
            "Brec",
            lambda q: btriple(views, pre_view, q, post_view),
            desc_samples,
            f_desc,
            lfp_desc.value,
        )
        deductive(
            "Frec",
            lambda q: ftriple(views, pre_view, q, post_view),
            desc_samples,
            f_desc,
            lfp_desc.value,
        )
        deductive(
            "Vrec",
            lambda q: vtriple(views, pre_view, q, post_view, search_cap).verdict
            is Verdict.HOLDS,
            cmd_samples,
            f_cmd,
            lfp_cmd.value,
        )

    if cfg is not None:
        space = cfg.space
        unrolled = _apply(f_desc, lfp_desc.value, bound, max_rounds)
        residuals = [skip_lang(bound), lfp_desc.value, unrolled] + [
            d for (_, d) in cfg.actions(bound)
        ]
        ok, detail = True, None
        for sigma in space.states():
            for sigma2 in space.states():
                for p2 in residuals:
                    if plotkin_desc(unrolled, sigma, p2, sigma2, cfg) and not plotkin_desc(
                        lfp_desc.value, sigma, p2, sigma2, cfg
                    ):
                        ok, detail = False, f"step from {sigma!r} to {sigma2!r} lost"
                        break
        report.add("PCrec", ok, detail)
        ok = all(
            plotkin_desc(lfp_desc.value, sigma, unrolled, sigma, cfg)
            for sigma in space.states()
        )
        report.add("PCrec'", ok, None)
        ok, detail = True, None
        for (_, q) in cfg.actions(bound):
            for r in residuals:
                if milner_abstract(unrolled, q, r, cfg) and not milner_abstract(
                    lfp_desc.value, q, r, cfg
                ):
                    ok, detail = False, "action step lost"
        report.add("MCrec", ok, detail)
        ok = milner_abstract(lfp_desc.value, skip_lang(bound), unrolled, cfg)
        if rec_prog is not None and isinstance(rec_prog, Rec):
            unroll_ast = subst(rec_prog.body, rec_prog.name, rec_prog)
            ok = ok and (None, unroll_ast) in milner_steps(rec_prog)
        report.add("MCrec'", ok, None)
        ok, detail = True, None
        for sigma in space.states():
            for sigma2 in space.states():
                if kahn_desc(unrolled, sigma, sigma2) and not kahn_desc(
                    lfp_desc.value, sigma, sigma2
                ):
                    ok, detail = False, f"outcome {sigma!r} -> {sigma2!r} lost"
        report.add("KCrec", ok, detail)

    return report
