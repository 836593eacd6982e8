"""Code combinators threading tree locations as the fresh-name supply.

A CodeValue maps a location to a (denotation, virtual bindings) pair. The
location is the path of child indices from the root, so every combinator
occurrence owns a distinct name; binders are higher-order (host functions
receive the bound variable as an opaque CodeValue). `run` evaluates a complete
generator, `show` renders the code it builds.
"""

from __future__ import annotations

from dataclasses import dataclass

from .base import (
    BaseAst,
    DEFAULT_STEP_LIMIT,
    Fresh,
    StepLimitExceeded,
    Value,
)
from .insertion import (
    Canonical,
    DEFAULT_CANON_LIMIT,
    EMPTY_BINDINGS,
    EMPTY_PER_LOCUS,
    Locus,
    Pending,
    ResidualBindings,
    VirtualBindings,
    addb,
    bind_letrec,
    bind_lets,
    canon,
    merge,
    ordered,
    singleton,
)
from .semantics import EMPTY_ENV, RunSemantics, ShowSemantics

ROOT = ()


@dataclass(frozen=True)
class BuildContext:
    """Everything a build needs besides the location: which semantics to
    build denotations in, and the canonicalization budget."""

    sem: object
    canon_limit: int = DEFAULT_CANON_LIMIT


class CodeValue:
    """Deterministic map from a location to (denotation, virtual bindings).

    `ty` is an informational note about the generated expression's type; it
    carries no behavior.
    """

    __slots__ = ("_build", "ty")

    def __init__(self, build, ty=None):
        self._build = build
        self.ty = ty

    def __call__(self, ctx: BuildContext, loc):
        return self._build(ctx, loc)

    def __add__(self, other):
        return cadd(self, _lift(other))

    def __radd__(self, other):
        return cadd(_lift(other), self)

    def __sub__(self, other):
        return csub(self, _lift(other))

    def __rsub__(self, other):
        return csub(_lift(other), self)

    def __mul__(self, other):
        return cmul(self, _lift(other))

    def __rmul__(self, other):
        return cmul(_lift(other), self)

    def __truediv__(self, other):
        return cdiv(self, _lift(other))

    def __matmul__(self, other):
        return capp(self, _lift(other))

    def __repr__(self):
        return f"CodeValue(ty={self.ty!r})"


def _lift(x):
    if isinstance(x, CodeValue):
        return x
    if isinstance(x, bool):
        return cbool(x)
    if isinstance(x, int):
        return cint(x)
    raise TypeError(f"cannot lift {x!r} into a code value")


def cint(i: int) -> CodeValue:
    return CodeValue(lambda ctx, loc: (ctx.sem.mk_int(i), EMPTY_BINDINGS), ty="int")


def cbool(b: bool) -> CodeValue:
    return CodeValue(lambda ctx, loc: (ctx.sem.mk_bool(b), EMPTY_BINDINGS), ty="bool")


def _unary(pick, a, ty=None):
    def build(ctx, loc):
        d, v = a(ctx, loc + (1,))
        return pick(ctx.sem)(d), v

    return CodeValue(build, ty=ty)


def _binary(pick, a, b, ty=None):
    def build(ctx, loc):
        d1, v1 = a(ctx, loc + (1,))
        d2, v2 = b(ctx, loc + (2,))
        return pick(ctx.sem)(d1, d2), merge(v1, v2)

    return CodeValue(build, ty=ty)


def csucc(a: CodeValue) -> CodeValue:
    return _unary(lambda s: s.mk_succ, a, ty="int")


def cadd(a, b) -> CodeValue:
    return _binary(lambda s: s.mk_add, a, b, ty="int")


def csub(a, b) -> CodeValue:
    return _binary(lambda s: s.mk_sub, a, b, ty="int")


def cmul(a, b) -> CodeValue:
    return _binary(lambda s: s.mk_mul, a, b, ty="int")


def cdiv(a, b) -> CodeValue:
    return _binary(lambda s: s.mk_div, a, b, ty="int")


def ceq(a, b) -> CodeValue:
    return _binary(lambda s: s.mk_eq, a, b, ty="bool")


def capp(f: CodeValue, a: CodeValue) -> CodeValue:
    return _binary(lambda s: s.mk_app, f, a)


def cif(c: CodeValue, t: CodeValue, e: CodeValue) -> CodeValue:
    def build(ctx, loc):
        dc, vc = c(ctx, loc + (1,))
        dt, vt = t(ctx, loc + (2,))
        de, ve = e(ctx, loc + (3,))
        return ctx.sem.mk_if(dc, dt, de), merge(merge(vc, vt), ve)

    return CodeValue(build)


def _var_code(name) -> CodeValue:
    # the bound variable: ignores where it is used, always names its binder
    return CodeValue(lambda ctx, loc: (ctx.sem.mk_var(name), EMPTY_BINDINGS))


def clam(f, hint=None) -> CodeValue:
    """Code of a function; `f` receives the bound variable as a CodeValue and
    must treat it as opaque."""

    def build(ctx, loc):
        name = Fresh(loc, hint)
        d, v = f(_var_code(name))(ctx, loc + (1,))
        return ctx.sem.mk_lam(name, d), v

    return CodeValue(build)


def clet(rhs: CodeValue, body, hint=None) -> CodeValue:
    """Code of a let whose location is fixed right here."""

    def build(ctx, loc):
        name = Fresh(loc, hint)
        d1, v1 = rhs(ctx, loc + (1,))
        d2, v2 = body(_var_code(name))(ctx, loc + (2,))
        return ctx.sem.mk_let(name, d1, d2), merge(v1, v2)

    return CodeValue(build)


def genlet(locus: Locus, key: int, code: CodeValue, hint=None) -> CodeValue:
    """Request a let-binding of `code` at `locus`, shared by memo key; the
    result is the code of the bound variable."""

    def build(ctx, loc):
        name = Fresh(loc, hint)
        d, v = code(ctx, loc + (2,))
        return ctx.sem.mk_var(name), v.updated(
            locus.location, lambda s: addb(key, name, Canonical(d), s)
        )

    return CodeValue(build)


def with_locus(f) -> CodeValue:
    """Open a let locus: bindings requested for it by genlet inside `f`
    become nested let-expressions here; others keep floating."""

    def build(ctx, loc):
        d, v = f(Locus(loc))(ctx, loc + (1,))
        den = bind_lets(ordered(v.at(loc)), d, ctx.sem)
        return den, v.without(loc)

    return CodeValue(build)


def genletrec(locus: Locus, key: int, code: CodeValue, hint=None) -> CodeValue:
    """Request a letrec clause at `locus`. `code` is not evaluated here: the
    binding stores it anchored to this site, to be forced during
    canonicalization (so recursive generators terminate)."""

    def build(ctx, loc):
        name = Fresh(loc, hint)
        anchored = Pending(lambda: code(ctx, loc + (2,)))
        store = addb(key, name, anchored, EMPTY_PER_LOCUS)
        return ctx.sem.mk_var(name), singleton(locus.location, store)

    return CodeValue(build)


def with_locus_rec(f) -> CodeValue:
    """Open a letrec locus: canonicalize the bindings requested for it, then
    bind them all in a single letrec."""

    def build(ctx, loc):
        d, v = f(Locus(loc))(ctx, loc + (1,))
        v = canon(v, loc, ctx.canon_limit)
        store = v.at(loc)
        classes = [store.classes[k] for k in store.insertion_seq]
        return bind_letrec(classes, d, ctx.sem), v.without(loc)

    return CodeValue(build)


def _complete(bindings: VirtualBindings):
    if not bindings.is_empty():
        raise ResidualBindings(bindings.loci())


def show(code: CodeValue, canon_limit=DEFAULT_CANON_LIMIT) -> BaseAst:
    """Build the syntax tree a complete generator produces."""
    ctx = BuildContext(ShowSemantics(), canon_limit)
    d, v = code(ctx, ROOT)
    _complete(v)
    return d(EMPTY_ENV)


def run(
    code: CodeValue,
    step_limit=DEFAULT_STEP_LIMIT,
    canon_limit=DEFAULT_CANON_LIMIT,
) -> Value:
    """Evaluate a complete generator to the value its code means."""
    ctx = BuildContext(RunSemantics(step_limit), canon_limit)
    d, v = code(ctx, ROOT)
    _complete(v)
    try:
        return d(EMPTY_ENV)
    except RecursionError:
        raise StepLimitExceeded("evaluation recursed past the host stack") from None
