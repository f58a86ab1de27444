"""tracelang: a bounded trace-language model of concurrent imperative
programs, with deductive checkers and operational interpreters that are
cross-validated by brute-force oracles."""

from .lang import BoundedLang, BoundMismatchError, big_union, empty, interleave_words, skip, top
from .trace import (
    Atom,
    State,
    StateSpace,
    ic_traces_ending_in,
    is_consistent,
    mk_atom,
    mk_atom_assign,
    mk_atom_assume,
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
    compile_prog,
    denote,
)
from .opsem import OpSemConfig, kahn_eval, milner_steps, plotkin_star, sem, sem_cmd
from .views import (
    ViewStructure,
    btriple,
    check_structure,
    consistency_oracle,
    ftriple,
    mk_powerset_views,
    mk_separation_views,
    vtriple,
)
from .fixpoint import lfp_bounded, star_recursion_fn
from .report import Verdict

__version__ = "0.1.0"
