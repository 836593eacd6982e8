"""stagelet: pure staged code generation with let- and letrec-insertion.

Generators are built from code combinators; bindings requested deep inside a
generator float upward as virtual bindings until an enclosing locus turns them
into real let/letrec binders. Everything is effect-free: code values are
deterministic functions of their tree location.
"""

from .base import (
    Add,
    App,
    BaseAst,
    BoolLit,
    Div,
    Eq,
    Fresh,
    If,
    IntLit,
    Lam,
    Let,
    LetRec,
    Mul,
    Name,
    Source,
    StagingError,
    StepLimitExceeded,
    Sub,
    Succ,
    TypeMismatch,
    UnboundVariable,
    Value,
    VBool,
    VFun,
    VInt,
    Var,
    alpha_eq,
    eval_ast,
    free_vars,
    pretty,
    render_value,
    to_sexp,
)
from .codec import (
    ROOT,
    BuildContext,
    CodeValue,
    cadd,
    capp,
    cbool,
    cdiv,
    ceq,
    cif,
    cint,
    clam,
    clet,
    cmul,
    csub,
    csucc,
    genlet,
    genletrec,
    run,
    show,
    with_locus,
    with_locus_rec,
)
from .examples import ExampleEntry, ExampleKind, apply_ints, lookup, registry
from .insertion import (
    DEFAULT_CANON_LIMIT,
    BindingClass,
    Canonical,
    CanonLimitExceeded,
    Locus,
    Pending,
    PendingBinding,
    PerLocus,
    ResidualBindings,
    VirtualBindings,
    addb,
    bind_letrec,
    bind_lets,
    canon,
    merge,
    ordered,
    subst,
)
from .semantics import EMPTY_ENV, Env, RunSemantics, ShowSemantics

__all__ = [
    "Add", "App", "BaseAst", "BoolLit", "Div", "Eq", "Fresh", "If", "IntLit",
    "Lam", "Let", "LetRec", "Mul", "Name", "Source", "Succ", "Var",
    "Value", "VBool", "VFun", "VInt",
    "StagingError", "StepLimitExceeded", "TypeMismatch", "UnboundVariable",
    "ResidualBindings", "CanonLimitExceeded", "PendingBinding",
    "alpha_eq", "eval_ast", "free_vars", "pretty", "render_value", "to_sexp",
    "ROOT", "BuildContext", "CodeValue",
    "cint", "cbool", "csucc", "cadd", "csub", "cmul", "cdiv", "ceq",
    "cif", "capp", "clam", "clet",
    "genlet", "with_locus", "genletrec", "with_locus_rec",
    "run", "show",
    "Locus", "BindingClass", "Canonical", "Pending", "PerLocus",
    "VirtualBindings", "DEFAULT_CANON_LIMIT",
    "addb", "merge", "ordered", "subst", "bind_lets", "bind_letrec", "canon",
    "Env", "EMPTY_ENV", "RunSemantics", "ShowSemantics",
    "ExampleEntry", "ExampleKind", "apply_ints", "lookup", "registry",
]
