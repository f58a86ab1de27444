"""Views: state abstractions with composition, framing, and erasure.

A view structure bundles a finite carrier of views with the operators the
deductive calculi need: a complete lattice (entails / join / meet), a
commutative composition monoid with unit, a preorder used by consequence
rules, an erasure to concrete state sets, and a finite axiom set stating
how chosen atoms transform views. Both shipped instantiations represent a
view as a finite set of "cells":

  powerset    cells are states; composition is intersection, the unit is
              the full state set, erasure is the identity.
  separation  cells are partial variable stores; composition combines
              cells with disjoint domains (overlaps vanish), the unit is
              the empty store, erasure is the set of total states extending
              some cell.

In both, entailment, the preorder and the lattice order coincide with set
inclusion on cell sets, join is union and meet is intersection. The
checkers below decide the three triple judgements:

  basic    endpoint correctness: consistent extensions of traces that
           established the preview end up establishing the postview.
  framing  the basic triple under every frame composed alongside.
  full     per-atom-sequence chains of framed triples, quantified over all
           atom sequences of a command.

Frame quantification is reduced to the instantiation's singleton views
plus the unit; the reduction is equivalent to the full quantification
(erasure is a join-homomorphism, composition distributes over join, and
the basic triple is antitone in the preview and monotone in the postview)
and the equivalence is itself re-checked on tiny carriers by the law
suite.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from . import fixpoint as fx
from .exprs import as_expr
from .lang import BoundedLang, big_union
from .opsem import kahn_eval, plotkin_star, run_command
from .prog import Prog, compile_prog, denote
from .report import Report, Verdict
from .trace import (
    Atom,
    State,
    StateSpace,
    ic_traces_ending_in,
    inconsistent_traces,
    is_consistent,
    mk_atom_assign,
    mk_atom_assume,
)

__all__ = [
    "ViewStructure",
    "CarrierTooLarge",
    "mk_powerset_views",
    "mk_separation_views",
    "own_assign_axioms",
    "own_assume_axioms",
    "powerset_assume_axiom",
    "check_structure",
    "btriple",
    "btriple_literal",
    "ftriple",
    "ftriple_full",
    "astriple",
    "vtriple",
    "TripleVerdict",
    "traces_establishing",
    "ProofNode",
    "check_derivation",
    "consistency_oracle",
    "OracleReport",
]


class CarrierTooLarge(ValueError):
    """The view carrier exceeds the configured enumeration cap."""


class ViewStructure:
    """A concrete views instantiation over a finite state space.

    Views are frozensets of cells. The cell vocabulary, the cell-level
    composition and the cell-level erasure are supplied by the maker
    functions; everything else is generic.
    """

    def __init__(
        self,
        name: str,
        space: StateSpace,
        cells: tuple,
        combine_cells: Callable,
        erase_cell: Callable,
        unit: frozenset,
        cell_str: Callable,
        axioms: tuple = (),
        cells_cap: int = 256,
    ):
        if len(cells) > cells_cap:
            raise CarrierTooLarge(
                f"{len(cells)} cells exceeds the cap of {cells_cap}"
            )
        self.name = name
        self.space = space
        self.cells = tuple(cells)
        self._combine = combine_cells
        self._erase_cell_fn = erase_cell
        self.unit = frozenset(unit)
        self._cell_str = cell_str
        self.axioms = tuple(axioms)
        self._erase_cache: dict = {}
        self._step_cache: dict = {}
        # set by mk_separation_views: cells are partial stores, enabling the
        # complement-frame reduction of framed checks
        self.cells_are_stores = False

    # -- construction helpers ---------------------------------------------

    def with_axioms(self, axioms: Iterable) -> "ViewStructure":
        vs = ViewStructure(
            self.name,
            self.space,
            self.cells,
            self._combine,
            self._erase_cell_fn,
            self.unit,
            self._cell_str,
            tuple(axioms),
            cells_cap=len(self.cells),
        )
        vs._erase_cache = self._erase_cache
        vs._step_cache = self._step_cache
        vs.cells_are_stores = self.cells_are_stores
        return vs

    def add_axioms(self, axioms: Iterable) -> "ViewStructure":
        return self.with_axioms(self.axioms + tuple(axioms))

    # -- lattice ------------------------------------------------------------

    def entails(self, v: frozenset, w: frozenset) -> bool:
        return v <= w

    def join(self, views: Iterable[frozenset]) -> frozenset:
        out: frozenset = frozenset()
        for v in views:
            out |= v
        return out

    def meet(self, views: Iterable[frozenset]) -> frozenset:
        views = list(views)
        if not views:
            return self.top
        out = views[0]
        for v in views[1:]:
            out &= v
        return out

    @property
    def bottom(self) -> frozenset:
        return frozenset()

    @property
    def top(self) -> frozenset:
        return frozenset(self.cells)

    # -- monoid and preorder -------------------------------------------------

    def compose(self, v: frozenset, w: frozenset) -> frozenset:
        out = set()
        for c in v:
            for d in w:
                r = self._combine(c, d)
                if r is not None:
                    out.add(r)
        return frozenset(out)

    def preceq(self, v: frozenset, w: frozenset) -> bool:
        """The preorder used by consequence; here it coincides with
        entailment, but the interface keeps them separate."""
        return v <= w

    # -- erasure ----------------------------------------------------------------

    def erase(self, v: frozenset) -> frozenset:
        cached = self._erase_cache.get(v)
        if cached is None:
            out: set = set()
            for c in v:
                out |= self._erase_cell(c)
            cached = frozenset(out)
            self._erase_cache[v] = cached
        return cached

    def _erase_cell(self, c) -> frozenset:
        key = ("cell", c)
        cached = self._erase_cache.get(key)
        if cached is None:
            cached = frozenset(self._erase_cell_fn(c))
            self._erase_cache[key] = cached
        return cached

    # -- enumeration -----------------------------------------------------------

    def carrier_size(self) -> int:
        return 1 << len(self.cells)

    def all_views(self, cap: int | None = 65536) -> Iterable[frozenset]:
        """Every view, smallest first. The carrier is the full powerset of
        the cell vocabulary, so enumeration is refused over the cap."""
        if cap is not None and self.carrier_size() > cap:
            raise CarrierTooLarge(
                f"carrier has 2^{len(self.cells)} views, over the cap of {cap}"
            )
        for k in range(len(self.cells) + 1):
            for combo in itertools.combinations(self.cells, k):
                yield frozenset(combo)

    def frame_basis(self) -> tuple:
        """The frames that suffice for framed quantification: each
        singleton view plus the unit."""
        singles = [frozenset((c,)) for c in self.cells]
        if self.unit not in singles:
            singles.append(self.unit)
        return tuple(singles)

    # -- display ------------------------------------------------------------------

    def view_str(self, v: frozenset) -> str:
        if not v:
            return "false"
        parts = sorted(self._cell_str(c) for c in v)
        return "{" + " | ".join(parts) + "}"

    def __repr__(self) -> str:
        return f"ViewStructure({self.name}, {len(self.cells)} cells, {len(self.axioms)} axioms)"


# -- the two shipped instantiations ----------------------------------------------


def mk_powerset_views(space: StateSpace, axioms: Iterable = (), cells_cap: int = 256) -> ViewStructure:
    """Views are state sets; composition is intersection."""
    states = space.states()

    def combine(c, d):
        return c if c == d else None

    def erase_cell(c):
        return (c,)

    return ViewStructure(
        "powerset",
        space,
        states,
        combine,
        erase_cell,
        frozenset(states),
        lambda c: repr(c),
        tuple(axioms),
        cells_cap=cells_cap,
    )


def _store_str(store: tuple) -> str:
    if not store:
        return "emp"
    return ",".join(f"{n}={v}" for n, v in store)


def mk_separation_views(space: StateSpace, axioms: Iterable = (), cells_cap: int = 256) -> ViewStructure:
    """Views are sets of partial stores; composition is disjoint union of
    stores, the unit is the empty store."""
    cells = []
    names = space.vars
    for r in range(len(names) + 1):
        for subset in itertools.combinations(names, r):
            for values in itertools.product(*(space.domains[n] for n in subset)):
                cells.append(tuple(zip(subset, values)))

    def combine(c, d):
        merged = dict(c)
        for n, v in d:
            if n in merged:
                return None
            merged[n] = v
        return tuple(sorted(merged.items()))

    def erase_cell(c):
        want = dict(c)
        return tuple(
            s for s in space.states() if all(s[n] == v for n, v in want.items())
        )

    vs = ViewStructure(
        "separation",
        space,
        tuple(cells),
        combine,
        erase_cell,
        frozenset(((),)),
        _store_str,
        tuple(axioms),
        cells_cap=cells_cap,
    )
    vs.cells_are_stores = True
    return vs


# -- axiom generators --------------------------------------------------------------


def own_assign_axioms(space: StateSpace, var: str, expr) -> tuple:
    """Axioms for ``var := expr`` owning the written and read variables.

    One axiom per total assignment of the owned variables; when the result
    escapes the domain the postview is false (the atom cannot run there).
    Frames are disjoint by construction, so each axiom is sound.
    """
    e = as_expr(expr)
    atom = mk_atom_assign(space, var, e)
    owned = tuple(sorted(set(e.names) | {var}))
    axioms = []
    for values in itertools.product(*(space.domains[n] for n in owned)):
        store = tuple(zip(owned, values))
        env = dict(store)
        try:
            result = int(e.eval(env))
        except ZeroDivisionError:
            result = None
        if result is not None and result in space.domains[var]:
            env2 = dict(env)
            env2[var] = result
            post = frozenset((tuple(sorted(env2.items())),))
        else:
            post = frozenset()
        axioms.append((frozenset((store,)), atom, post))
    return tuple(axioms)


def own_assume_axioms(space: StateSpace, cond) -> tuple:
    """Axioms for a guard owning the variables it reads; the postview is
    false where the guard blocks."""
    c = as_expr(cond)
    atom = mk_atom_assume(space, c)
    owned = tuple(sorted(c.names))
    axioms = []
    for values in itertools.product(*(space.domains[n] for n in owned)):
        store = tuple(zip(owned, values))
        try:
            ok = bool(c.eval(dict(store)))
        except ZeroDivisionError:
            ok = False
        pre = frozenset((store,))
        axioms.append((pre, atom, pre if ok else frozenset()))
    return tuple(axioms)


def powerset_assume_axiom(space: StateSpace, cond) -> tuple:
    """The one sound framed axiom family the powerset instantiation offers:
    from the full state set, a guard establishes its satisfying states.
    Returns a single axiom."""
    c = as_expr(cond)
    atom = mk_atom_assume(space, c)
    sat = frozenset(s for (s, _) in atom.rel)
    return (frozenset(space.states()), atom, sat)


# -- the three triple judgements --------------------------------------------------


def btriple(vs: ViewStructure, v: frozenset, p: BoundedLang, v2: frozenset) -> bool:
    """Basic triple, decided by its endpoint reduction: if the description
    contains the empty trace, the preview's states must already satisfy the
    postview; and every trace that starts consistently in a preview state
    must end in a postview state."""
    ev, ev2 = vs.erase(v), vs.erase(v2)
    if () in p.words and not ev <= ev2:
        return False
    for word in p.words:
        if word and is_consistent(word):
            if word[0][0] in ev and word[-1][1] not in ev2:
                return False
    return True


def traces_establishing(vs: ViewStructure, v: frozenset, len_bound: int) -> BoundedLang:
    """All consistent traces up to the length bound that end in a state of
    the view; the trace-set reading of a view."""
    return big_union(
        [ic_traces_ending_in(s, len_bound) for s in sorted(vs.erase(v))],
        len_bound,
    )


def btriple_literal(
    vs: ViewStructure,
    v: frozenset,
    p: BoundedLang,
    v2: frozenset,
    prefix_len: int = 2,
) -> bool:
    """The basic triple computed from its literal reading: extending any
    trace of the preview's trace set (or any inconsistent trace) with a
    trace of p lands in the postview's trace set or the inconsistent set.
    Brute force over bounded prefixes; the oracle for btriple."""
    total = prefix_len + p.bound
    pre_words = set(traces_establishing(vs, v, prefix_len).words)
    pre_words |= set(inconsistent_traces(vs.space, prefix_len).words)
    lhs = BoundedLang(pre_words, total).concat(BoundedLang(p.words, total))
    rhs_words = set(traces_establishing(vs, v2, total).words)
    rhs_words |= set(inconsistent_traces(vs.space, total).words)
    return lhs.leq(BoundedLang(rhs_words, total))


def ftriple(
    vs: ViewStructure,
    v: frozenset,
    p: BoundedLang,
    v2: frozenset,
    frames: Sequence | None = None,
) -> bool:
    """Framing triple: the basic triple under every frame. Quantification
    is over the singleton-frame basis unless frames are given."""
    if frames is None:
        frames = vs.frame_basis()
    return all(btriple(vs, vs.compose(v, w), p, vs.compose(v2, w)) for w in frames)


def ftriple_full(vs: ViewStructure, v: frozenset, p: BoundedLang, v2: frozenset) -> bool:
    """Framing triple quantified over the whole carrier; the oracle for the
    singleton-frame reduction."""
    return ftriple(vs, v, p, v2, frames=tuple(vs.all_views()))


@dataclass(frozen=True)
class TripleVerdict:
    verdict: Verdict
    witness: str | None = None

    def __bool__(self) -> bool:
        return self.verdict is Verdict.HOLDS


def _framed_target(vs: ViewStructure, v2: frozenset, frame_cell) -> frozenset:
    """Cached erase of v2 composed with one singleton frame."""
    key = ("tgt", v2, frame_cell)
    cached = vs._erase_cache.get(key)
    if cached is None:
        cached = vs.erase(vs.compose(v2, frozenset((frame_cell,))))
        vs._erase_cache[key] = cached
    return cached


def _store_complement(sigma: State, cell: tuple) -> tuple:
    owned = {name for name, _ in cell}
    return tuple(
        (name, value)
        for name, value in zip(sigma.space.vars, sigma.values)
        if name not in owned
    )


def _atom_ftriple(vs: ViewStructure, v: frozenset, atom: Atom, v2: frozenset) -> bool:
    """Framed atom step: image inclusion under every frame of the basis
    (atom descriptions have no empty trace, so only the trace clause of the
    basic triple remains).

    For the store model this is decided by the equivalent complement-frame
    form: for every cell of the preview and every total state extending it,
    the atom's image must land inside the postview composed with the rest
    of that state. Results are memoized on the structure.
    """
    key = (v, atom.uid, v2)
    cached = vs._step_cache.get(key)
    if cached is not None:
        return cached
    if vs.cells_are_stores:
        out = True
        for cell in v:
            if not out:
                break
            for sigma in vs._erase_cell(cell):
                image = atom.apply(sigma)
                if not image:
                    continue
                if not image <= _framed_target(vs, v2, _store_complement(sigma, cell)):
                    out = False
                    break
    else:
        out = True
        for w in vs.frame_basis():
            framed = vs.compose(v, w)
            if not framed:
                continue
            if not atom.apply_set(vs.erase(framed)) <= vs.erase(vs.compose(v2, w)):
                out = False
                break
    vs._step_cache[key] = out
    return out


def _skip_ftriple(vs: ViewStructure, v: frozenset, v2: frozenset) -> bool:
    """Framed skip step: erasure inclusion under every frame."""
    key = (v, None, v2)
    cached = vs._step_cache.get(key)
    if cached is not None:
        return cached
    if vs.cells_are_stores:
        out = True
        for cell in v:
            if not out:
                break
            for sigma in vs._erase_cell(cell):
                if sigma not in _framed_target(vs, v2, _store_complement(sigma, cell)):
                    out = False
                    break
    else:
        out = True
        for w in vs.frame_basis():
            framed = vs.compose(v, w)
            if not framed:
                continue
            if not vs.erase(framed) <= vs.erase(vs.compose(v2, w)):
                out = False
                break
    vs._step_cache[key] = out
    return out


def _candidate_views(vs: ViewStructure, pre: frozenset, post: frozenset) -> tuple:
    seen = {pre, post, vs.unit}
    out = [pre, post, vs.unit]
    for (_, _, ax_post) in vs.axioms:
        for w in vs.frame_basis():
            cand = vs.compose(ax_post, w)
            if cand not in seen:
                seen.add(cand)
                out.append(cand)
    return tuple(out)


def astriple(
    vs: ViewStructure,
    pre: frozenset,
    word: Sequence[Atom],
    post: frozenset,
    search_cap: int = 4096,
    exhaustive_cap: int = 1024,
) -> Verdict:
    """Chained framed triples along one atom sequence, with existential
    intermediate views.

    The search first draws intermediate views from a candidate basis
    (axiom postviews composed with singleton frames, plus unit and the end
    views). If no chain is found there and the carrier is small, the search
    re-runs over the whole carrier, making a negative answer definite;
    otherwise the verdict is unknown. A capped search never claims holds
    wrongly and never claims fails without having exhausted the carrier.
    """
    word = tuple(word)

    def search(candidates: tuple) -> Verdict:
        budget = search_cap
        memo: dict = {}

        def go(i: int, v: frozenset) -> Verdict:
            nonlocal budget
            key = (i, v)
            if key in memo:
                return memo[key]
            budget -= 1
            if budget < 0:
                return Verdict.UNKNOWN  # not memoized: cap, not a refutation
            if i == len(word):
                out = Verdict.HOLDS if _skip_ftriple(vs, v, post) else Verdict.FAILS
                memo[key] = out
                return out
            atom = word[i]
            saw_unknown = False
            for mid in candidates:
                if _atom_ftriple(vs, v, atom, mid):
                    sub = go(i + 1, mid)
                    if sub is Verdict.HOLDS:
                        memo[key] = sub
                        return sub
                    if sub is Verdict.UNKNOWN:
                        saw_unknown = True
            out = Verdict.UNKNOWN if saw_unknown else Verdict.FAILS
            memo[key] = out
            return out

        return go(0, pre)

    first = search(_candidate_views(vs, pre, post))
    if first is Verdict.HOLDS:
        return first
    if vs.carrier_size() <= exhaustive_cap:
        return search(tuple(vs.all_views()))
    return Verdict.UNKNOWN


def vtriple(
    vs: ViewStructure,
    pre: frozenset,
    command: BoundedLang,
    post: frozenset,
    search_cap: int = 4096,
    exhaustive_cap: int = 1024,
) -> TripleVerdict:
    """Full triple: the chained judgement for every atom sequence of the
    command. fails carries the first refuted sequence as a witness."""
    saw_unknown = False
    for word in command.sorted_words:
        verdict = astriple(vs, pre, word, post, search_cap, exhaustive_cap)
        if verdict is Verdict.FAILS:
            label = "[" + ", ".join(a.label for a in word) + "]"
            return TripleVerdict(Verdict.FAILS, f"no view chain for {label}")
        if verdict is Verdict.UNKNOWN:
            saw_unknown = True
    if saw_unknown:
        return TripleVerdict(Verdict.UNKNOWN, "search cap hit on some sequence")
    return TripleVerdict(Verdict.HOLDS)


# -- structure checking --------------------------------------------------------------


def _bits(mask: int):
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def check_structure(
    vs: ViewStructure,
    frames: str = "singleton",
    exhaustive_subset_cap: int = 16,
    sample_subsets: int = 300,
    carrier_cap: int = 1024,
    rng: random.Random | None = None,
) -> Report:
    """Evaluate every interface property of a view structure.

    With a carrier of at most 2**exhaustive_subset_cap... more precisely,
    with at most ``exhaustive_subset_cap`` carrier elements, the quantified
    properties run over every subset of the carrier; larger carriers get a
    deterministic sample. Axiom soundness quantifies over the singleton
    frame basis or, with frames="full", over the whole carrier. Failures
    carry a concrete counterexample.
    """
    report = Report(f"{vs.name} views interface")
    if vs.carrier_size() > carrier_cap:
        raise CarrierTooLarge(
            f"carrier of {vs.carrier_size()} views exceeds check cap {carrier_cap}"
        )
    carrier = list(vs.all_views())
    n = len(carrier)
    index = {v: i for i, v in enumerate(carrier)}
    rng = rng or random.Random(20240901)

    exhaustive = n <= exhaustive_subset_cap
    if exhaustive:
        subset_masks = range(1 << n)
    else:
        picks = {0, (1 << n) - 1 if n < 1 << 20 else 0}
        while len(picks) < sample_subsets:
            picks.add(rng.getrandbits(n))
        subset_masks = sorted(picks)
    tag = "" if exhaustive else " (sampled subsets)"

    def members(mask: int) -> list:
        return [carrier[i] for i in _bits(mask)]

    # entailment / preorder bit rows: row[i] has bit j set when i relates to j
    ent_row = [0] * n
    pre_row = [0] * n
    for i, v in enumerate(carrier):
        for j, w in enumerate(carrier):
            if vs.entails(v, w):
                ent_row[i] |= 1 << j
            if vs.preceq(v, w):
                pre_row[i] |= 1 << j

    # composition table by carrier index
    comp = [[index[vs.compose(a, b)] for b in carrier] for a in carrier]

    # joins and meets of the chosen subsets, by carrier index
    join_idx: dict = {}
    meet_idx: dict = {}
    for mask in subset_masks:
        ms = members(mask)
        join_idx[mask] = index.get(vs.join(ms))
        meet_idx[mask] = index.get(vs.meet(ms))

    # complete lattice: join is the least upper bound, meet the greatest lower
    def check_lub() -> tuple[bool, str | None]:
        full = (1 << n) - 1
        for mask in subset_masks:
            ji = join_idx[mask]
            if ji is None:
                return False, f"join of {mask:#x} left the carrier"
            uppers = full
            for i in _bits(mask):
                uppers &= ent_row[i]
            if not (uppers >> ji) & 1:
                return False, f"join not an upper bound of subset {mask:#x}"
            if uppers & ~ent_row[ji]:
                other = next(_bits(uppers & ~ent_row[ji]))
                return False, (
                    f"join of subset {mask:#x} is not least; "
                    f"{vs.view_str(carrier[other])} is a smaller upper bound"
                )
        return True, None

    def check_glb() -> tuple[bool, str | None]:
        full = (1 << n) - 1
        lower_row = [0] * n  # bit j: carrier[j] entails carrier[i]
        for i in range(n):
            for j in range(n):
                if (ent_row[j] >> i) & 1:
                    lower_row[i] |= 1 << j
        for mask in subset_masks:
            mi = meet_idx[mask]
            if mi is None:
                return False, f"meet of {mask:#x} left the carrier"
            lowers = full
            for i in _bits(mask):
                lowers &= lower_row[i]
            if not (lowers >> mi) & 1:
                return False, f"meet not a lower bound of subset {mask:#x}"
            if lowers & ~lower_row[mi]:
                return False, f"meet of subset {mask:#x} is not greatest"
        return True, None

    ok, detail = check_lub()
    report.add("complete lattice: join is least upper bound" + tag, ok, detail)
    ok, detail = check_glb()
    report.add("complete lattice: meet is greatest lower bound" + tag, ok, detail)

    # commutative monoid
    ok, detail = True, None
    ui = index[vs.unit]
    for i in range(n):
        if comp[i][ui] != i or comp[ui][i] != i:
            ok, detail = False, f"unit law fails at {vs.view_str(carrier[i])}"
            break
    report.add("composition monoid: unit", ok, detail)

    ok, detail = True, None
    for i in range(n):
        for j in range(i + 1, n):
            if comp[i][j] != comp[j][i]:
                ok, detail = False, (
                    f"compose not commutative at {vs.view_str(carrier[i])}, "
                    f"{vs.view_str(carrier[j])}"
                )
                break
        if not ok:
            break
    report.add("composition monoid: commutative", ok, detail)

    ok, detail = True, None
    for i in range(n):
        for j in range(n):
            cij = comp[i][j]
            for k in range(n):
                if comp[cij][k] != comp[i][comp[j][k]]:
                    ok, detail = False, "compose not associative"
                    break
            if not ok:
                break
        if not ok:
            break
    report.add("composition monoid: associative", ok, detail)

    # compose distributes over join
    ok, detail = True, None
    for i in range(n):
        if not ok:
            break
        for mask in subset_masks:
            ji = join_idx[mask]
            rhs_mask = 0
            for j in _bits(mask):
                rhs_mask |= 1 << comp[i][j]
            rhs = join_idx.get(rhs_mask)
            if rhs is None:
                rhs = index.get(vs.join(members(rhs_mask)))
            if comp[i][ji] != rhs:
                ok, detail = False, (
                    f"distribution fails for {vs.view_str(carrier[i])} over subset {mask:#x}"
                )
                break
    report.add("compose distributes over join" + tag, ok, detail)

    # preorder
    ok = all((pre_row[i] >> i) & 1 for i in range(n))
    report.add("preorder: reflexive", ok, None if ok else "missing reflexivity")
    ok, detail = True, None
    for i in range(n):
        for j in _bits(pre_row[i]):
            if pre_row[j] & ~pre_row[i]:
                ok, detail = False, "preorder not transitive"
                break
        if not ok:
            break
    report.add("preorder: transitive", ok, detail)

    ok = all(not (ent_row[i] & ~pre_row[i]) for i in range(n))
    report.add("entailment included in preorder", ok, None)

    # join-closure of the preorder
    ok, detail = True, None
    for k in range(n):
        if not ok:
            break
        allowed = 0
        for i in range(n):
            if (pre_row[i] >> k) & 1:
                allowed |= 1 << i
        for mask in subset_masks:
            if mask & ~allowed:
                continue
            if not (pre_row[join_idx[mask]] >> k) & 1:
                ok, detail = False, (
                    f"join of subset {mask:#x} not below {vs.view_str(carrier[k])}"
                )
                break
    report.add("preorder closed under join" + tag, ok, detail)

    # locality of composition over the preorder
    ok, detail = True, None
    for i in range(n):
        if not ok:
            break
        for j in _bits(pre_row[i]):
            if i == j:
                continue
            for k in range(n):
                if not (pre_row[comp[i][k]] >> comp[j][k]) & 1:
                    ok, detail = False, (
                        f"locality fails framing {vs.view_str(carrier[i])} <= "
                        f"{vs.view_str(carrier[j])} with {vs.view_str(carrier[k])}"
                    )
                    break
            if not ok:
                break
    report.add("locality of composition", ok, detail)

    # erasure
    state_index = {s: i for i, s in enumerate(vs.space.states())}
    er_mask = []
    for v in carrier:
        m = 0
        for s in vs.erase(v):
            m |= 1 << state_index[s]
        er_mask.append(m)

    ok, detail = True, None
    for i in range(n):
        for j in _bits(pre_row[i]):
            if er_mask[i] & ~er_mask[j]:
                ok, detail = False, (
                    f"erasure not monotone: {vs.view_str(carrier[i])} vs "
                    f"{vs.view_str(carrier[j])}"
                )
                break
        if not ok:
            break
    report.add("erasure monotone", ok, detail)

    ok, detail = True, None
    for mask in subset_masks:
        want = 0
        for i in _bits(mask):
            want |= er_mask[i]
        if er_mask[join_idx[mask]] != want:
            ok, detail = False, f"erasure not a join-homomorphism on subset {mask:#x}"
            break
    report.add("erasure join-homomorphism" + tag, ok, detail)

    # axiom soundness
    frame_views = tuple(vs.all_views()) if frames == "full" else vs.frame_basis()
    ok, detail = True, None
    for (v, atom, v2) in vs.axioms:
        for w in frame_views:
            image = atom.apply_set(vs.erase(vs.compose(v, w)))
            target = vs.erase(vs.compose(v2, w))
            if not image <= target:
                bad = sorted(image - target)[0]
                ok, detail = False, (
                    f"axiom ({vs.view_str(v)}, {atom.label}, {vs.view_str(v2)}) "
                    f"unsound under frame {vs.view_str(w)}: reaches {bad!r}"
                )
                break
        if not ok:
            break
    mode = "all frames" if frames == "full" else "singleton frames"
    report.add(f"axiom soundness ({mode})", ok, detail)

    return report


# -- derivation checking ----------------------------------------------------------


@dataclass(frozen=True)
class ProofNode:
    """One node of an annotated derivation tree.

    rule names one of: Vatom, Vskip, Vseq, Vchoice, Viter, Vcons, Vdisj,
    Vframe, Vconc, Vrec, Vcheck. command is the command language the node
    claims the triple for. Vatom carries its atom, Vframe its frame view,
    Vrec the fixpoint function term; Vcheck is a leaf discharged by the
    chain-search checker directly.
    """

    rule: str
    pre: frozenset
    post: frozenset
    command: BoundedLang
    children: tuple = ()
    atom: Atom | None = None
    frame: frozenset | None = None
    fn: fx.FnTerm | None = None


def check_derivation(
    vs: ViewStructure,
    node: ProofNode,
    search_cap: int = 4096,
    unroll_bound: int = 64,
) -> Report:
    """Validate an annotated derivation tree rule by rule."""
    report = Report("derivation check")
    from .lang import skip as skip_lang

    def fail(n: ProofNode, msg: str) -> None:
        report.add(f"{n.rule} node", False, msg)

    def walk(n: ProofNode) -> None:
        b = n.command.bound
        if n.rule == "Vatom":
            if n.atom is None:
                return fail(n, "missing atom")
            if not n.command.eq(BoundedLang(((n.atom,),), b)):
                return fail(n, "command is not the atom's singleton language")
            if (n.pre, n.atom, n.post) not in set(vs.axioms):
                return fail(
                    n,
                    f"({vs.view_str(n.pre)}, {n.atom.label}, {vs.view_str(n.post)}) "
                    "is not an axiom",
                )
        elif n.rule == "Vskip":
            if not n.command.eq(skip_lang(b)):
                return fail(n, "command is not skip")
            if n.pre != n.post:
                return fail(n, "skip requires equal views")
        elif n.rule == "Vseq":
            if len(n.children) != 2:
                return fail(n, "needs two children")
            l, r = n.children
            if l.pre != n.pre or r.post != n.post or l.post != r.pre:
                return fail(n, "views do not chain")
            if not n.command.eq(l.command.concat(r.command)):
                return fail(n, "command is not the children's concatenation")
            walk(l)
            walk(r)
        elif n.rule == "Vchoice":
            for c in n.children:
                if c.pre != n.pre or c.post != n.post:
                    return fail(n, "child views differ")
            want = big_union([c.command for c in n.children], b)
            if not n.command.eq(want):
                return fail(n, "command is not the children's union")
            for c in n.children:
                walk(c)
        elif n.rule == "Viter":
            if len(n.children) != 1:
                return fail(n, "needs one child")
            (c,) = n.children
            if not (n.pre == n.post == c.pre == c.post):
                return fail(n, "iteration requires one invariant view")
            if not n.command.eq(c.command.star()):
                return fail(n, "command is not the child's star")
            walk(c)
        elif n.rule == "Vcons":
            if len(n.children) != 1:
                return fail(n, "needs one child")
            (c,) = n.children
            if not (vs.preceq(n.pre, c.pre) and vs.preceq(c.post, n.post)):
                return fail(n, "consequence views not ordered by the preorder")
            if not n.command.eq(c.command):
                return fail(n, "consequence must not change the command")
            walk(c)
        elif n.rule == "Vdisj":
            if not n.children:
                return fail(n, "needs children")
            for c in n.children:
                if c.post != n.post:
                    return fail(n, "child postviews differ")
                if not c.command.eq(n.command):
                    return fail(n, "child commands differ")
            if n.pre != vs.join(c.pre for c in n.children):
                return fail(n, "preview is not the join of the children's previews")
            for c in n.children:
                walk(c)
        elif n.rule == "Vframe":
            if len(n.children) != 1 or n.frame is None:
                return fail(n, "needs one child and a frame")
            (c,) = n.children
            if n.pre != vs.compose(c.pre, n.frame) or n.post != vs.compose(c.post, n.frame):
                return fail(n, "views are not the child's views composed with the frame")
            if not n.command.eq(c.command):
                return fail(n, "framing must not change the command")
            walk(c)
        elif n.rule == "Vconc":
            if len(n.children) != 2:
                return fail(n, "needs two children")
            l, r = n.children
            if n.pre != vs.compose(l.pre, r.pre) or n.post != vs.compose(l.post, r.post):
                return fail(n, "views are not the compositions of the children's views")
            if not n.command.eq(l.command.shuffle(r.command)):
                return fail(n, "command is not the children's interleaving")
            walk(l)
            walk(r)
        elif n.rule == "Vrec":
            if n.fn is None:
                return fail(n, "missing fixpoint function")
            result = fx.lfp_bounded(n.fn, b, unroll_bound)
            if not result.converged:
                return fail(n, "fixpoint did not stabilize within the unroll bound")
            if not n.command.eq(result.value):
                return fail(n, "command is not the function's least fixpoint")
            tv = vtriple(vs, n.pre, n.command, n.post, search_cap)
            if tv.verdict is not Verdict.HOLDS:
                return fail(n, f"unrolled body not validated: {tv.verdict.value}")
        elif n.rule == "Vcheck":
            tv = vtriple(vs, n.pre, n.command, n.post, search_cap)
            if tv.verdict is not Verdict.HOLDS:
                return fail(n, f"triple not validated: {tv.verdict.value} ({tv.witness})")
        else:
            return fail(n, f"unknown rule {n.rule!r}")
        report.add(f"{n.rule} node", True)

    walk(node)
    return report


# -- deductive-operational consistency oracle ---------------------------------------


@dataclass
class OracleReport:
    """Cross-check of a triple against the three operational readings."""

    ok: bool
    violations: tuple
    truncated: bool
    readings: dict

    def lines(self) -> list[str]:
        out = []
        status = "consistent" if self.ok else "VIOLATED"
        out.append(f"oracle: {status}" + (" (truncated)" if self.truncated else ""))
        for reading, states in sorted(self.readings.items()):
            out.append(f"  {reading}: {len(states)} outcome states")
        for reading, s, s2 in self.violations:
            out.append(f"  violation [{reading}]: {s!r} -> {s2!r} escapes the postview")
        return out


def consistency_oracle(
    vs: ViewStructure,
    pre: frozenset,
    program: Prog,
    post: frozenset,
    word_bound: int = 10,
    unroll_bound: int = 16,
    depth: int = 24,
) -> OracleReport:
    """Enumerate, from every preview state, the outcomes of the program
    under the big-step evaluator, the denotational reading and the
    small-step closure, and report any outcome escaping the postview.
    Every triple a deductive checker accepts must pass this."""
    target = vs.erase(post)
    violations = []
    truncated = False
    compiled = compile_prog(program, word_bound, unroll_bound)
    truncated = truncated or not compiled.exact
    readings: dict = {"kahn": set(), "denotation": set(), "plotkin-star": set()}
    for sigma in sorted(vs.erase(pre)):
        by_reading = {
            "kahn": kahn_eval(program, sigma, unroll_bound, word_bound),
            "denotation": run_command(compiled.command, sigma),
        }
        exploration = plotkin_star(program, sigma, depth)
        truncated = truncated or exploration.truncated
        by_reading["plotkin-star"] = exploration.final_states()
        for reading, outcomes in by_reading.items():
            readings[reading] |= outcomes
            for s2 in outcomes:
                if s2 not in target:
                    violations.append((reading, sigma, s2))
    return OracleReport(
        ok=not violations,
        violations=tuple(violations),
        truncated=truncated,
        readings={k: frozenset(v) for k, v in readings.items()},
    )
