"""Answer-set enumeration for ground-able programs.

The pipeline: :func:`ground` instantiates rules over the constant universe,
:func:`translate_choices` rewrites bounded choices into disjunction-free
rules, and :func:`answer_sets` enumerates stable models with a bitmask
kernel (numba-compiled or pure numpy, selected by the ``ASPEN_KERNEL``
environment flag).  :mod:`aspen.solver.stability` holds the independent
set-based definition used for re-checking, and
:func:`check_uniform_equivalence` compares two programs over all (or
sampled) fact sets.
"""

from .equivalence import (
    Counterexample,
    EquivalenceVerdict,
    FactSignature,
    check_uniform_equivalence,
    recheck_counterexample,
)
from .ground import (
    DEFAULT_INSTANTIATION_LIMIT,
    GroundingBlowup,
    GroundProgram,
    ground,
)
from .kernels import ENV_FLAG, HAS_NUMBA, KernelUnavailable, default_backend
from .models import (
    DEFAULT_ATOM_BOUND,
    AnswerSet,
    SolveResult,
    SolverError,
    UniverseTooLarge,
    answer_sets,
    solve,
)
from .stability import (
    gl_reduct,
    is_model,
    is_stable_model,
    stable_models_by_definition,
)
from .translate import ChoiceTooWide, TranslatedProgram, translate_choices

__all__ = [
    "DEFAULT_ATOM_BOUND",
    "DEFAULT_INSTANTIATION_LIMIT",
    "ENV_FLAG",
    "HAS_NUMBA",
    "AnswerSet",
    "ChoiceTooWide",
    "Counterexample",
    "EquivalenceVerdict",
    "FactSignature",
    "GroundProgram",
    "GroundingBlowup",
    "KernelUnavailable",
    "SolveResult",
    "SolverError",
    "UniverseTooLarge",
    "answer_sets",
    "check_uniform_equivalence",
    "default_backend",
    "gl_reduct",
    "ground",
    "is_model",
    "is_stable_model",
    "recheck_counterexample",
    "solve",
    "stable_models_by_definition",
    "translate_choices",
]
