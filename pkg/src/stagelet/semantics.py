"""Environment-passing denotation builders for the object language.

A denotation is a pure function from an Env to a semantic value. Two builder
families share one shape: RunSemantics produces denotations that evaluate to
run-time values, ShowSemantics produces denotations that build syntax trees.
Binary operators evaluate the left operand first; final results must not
depend on that order.
"""

from __future__ import annotations

from dataclasses import dataclass

from .base import (
    LetRec,
    Lam,
    Let,
    Add,
    Sub,
    Mul,
    Div,
    Eq,
    Succ,
    If,
    App,
    IntLit,
    BoolLit,
    Var,
    VBool,
    VFun,
    VInt,
    StepLimitExceeded,
    TypeMismatch,
    UnboundVariable,
    _Budget,
    _as_int,
    _trunc_div,
)

MISSING = object()


@dataclass(frozen=True)
class _Redirect:
    """Alias entry: lookups of the alias resolve to the target name."""

    target: object


class Env:
    """Immutable finite map from names to semantic values.

    Extension and redirection return new maps; the original is unchanged.
    """

    __slots__ = ("_entries",)

    def __init__(self, entries=None):
        self._entries = dict(entries) if entries else {}

    def extend(self, name, value) -> "Env":
        new = dict(self._entries)
        new[name] = value
        return Env(new)

    def redirect(self, alias, representative) -> "Env":
        return self.extend(alias, _Redirect(representative))

    def without(self, name) -> "Env":
        new = dict(self._entries)
        new.pop(name, None)
        return Env(new)

    def lookup(self, name):
        """Resolve a name through redirects; returns (final name, value).

        The value is MISSING when the (resolved) name is unbound. Delayed
        letrec bindings are forced here, invisibly to callers.
        """
        while True:
            v = self._entries.get(name, MISSING)
            if isinstance(v, _Redirect):
                name = v.target
                continue
            if isinstance(v, _RecCell):
                return name, v.force()
            return name, v

    def __contains__(self, name):
        return name in self._entries

    def __eq__(self, other):
        return isinstance(other, Env) and self._entries == other._entries

    def __repr__(self):
        return f"Env({self._entries!r})"


EMPTY_ENV = Env()


class _RecCell:
    """Delayed mutually-recursive binding for the run semantics."""

    __slots__ = ("name", "rhs", "env", "budget", "busy", "done", "value")

    def __init__(self, name, rhs, budget):
        self.name = name
        self.rhs = rhs
        self.env = None
        self.budget = budget
        self.busy = False
        self.done = False
        self.value = None

    def force(self):
        if self.done:
            return self.value
        if self.busy:
            raise StepLimitExceeded(
                f"recursive binding {self.name.render()} demands its own value"
            )
        self.budget.tick()
        self.busy = True
        try:
            self.value = self.rhs(self.env)
        finally:
            self.busy = False
        self.done = True
        return self.value


class RunSemantics:
    """Denotation builders that evaluate: Env maps names to Values."""

    def __init__(self, step_limit=None):
        self._budget = _Budget(step_limit)

    def mk_var(self, name):
        def den(env):
            resolved, v = env.lookup(name)
            if v is MISSING:
                raise UnboundVariable(f"unbound variable {resolved.render()}")
            return v

        return den

    def mk_int(self, i):
        v = VInt(i)
        return lambda env: v

    def mk_bool(self, b):
        v = VBool(b)
        return lambda env: v

    def mk_succ(self, d):
        return lambda env: VInt(_as_int(d(env)) + 1)

    def mk_add(self, d1, d2):
        return lambda env: VInt(_as_int(d1(env)) + _as_int(d2(env)))

    def mk_sub(self, d1, d2):
        return lambda env: VInt(_as_int(d1(env)) - _as_int(d2(env)))

    def mk_mul(self, d1, d2):
        return lambda env: VInt(_as_int(d1(env)) * _as_int(d2(env)))

    def mk_div(self, d1, d2):
        return lambda env: VInt(_trunc_div(_as_int(d1(env)), _as_int(d2(env))))

    def mk_eq(self, d1, d2):
        return lambda env: VBool(_as_int(d1(env)) == _as_int(d2(env)))

    def mk_if(self, dc, dt, de):
        def den(env):
            c = dc(env)
            if not isinstance(c, VBool):
                raise TypeMismatch(f"if condition must be a boolean, got {c!r}")
            return dt(env) if c.value else de(env)

        return den

    def mk_lam(self, name, body):
        budget = self._budget

        def den(env):
            def call(arg):
                budget.tick()
                return body(env.extend(name, arg))

            return VFun(call)

        return den

    def mk_app(self, d1, d2):
        def den(env):
            f = d1(env)
            a = d2(env)
            if not isinstance(f, VFun):
                raise TypeMismatch(f"cannot apply non-function {f!r}")
            return f.fn(a)

        return den

    def mk_let(self, name, d1, d2):
        return lambda env: d2(env.extend(name, d1(env)))

    def mk_letrec(self, clauses, body):
        budget = self._budget
        clauses = tuple(clauses)

        def den(env):
            cells = [_RecCell(n, rhs, budget) for n, rhs in clauses]
            env2 = env
            for cell in cells:
                env2 = env2.extend(cell.name, cell)
            for cell in cells:
                cell.env = env2
            return body(env2)

        return den


class ShowSemantics:
    """Denotation builders that build trees: Env maps names to BaseAsts.

    Every builder is total: unbound names come out as literal Var nodes, which
    is what makes scope extrusion visible in the output.
    """

    def mk_var(self, name):
        def den(env):
            resolved, v = env.lookup(name)
            return v if v is not MISSING else Var(resolved)

        return den

    def mk_int(self, i):
        node = IntLit(i)
        return lambda env: node

    def mk_bool(self, b):
        node = BoolLit(b)
        return lambda env: node

    def mk_succ(self, d):
        return lambda env: Succ(d(env))

    def mk_add(self, d1, d2):
        return lambda env: Add(d1(env), d2(env))

    def mk_sub(self, d1, d2):
        return lambda env: Sub(d1(env), d2(env))

    def mk_mul(self, d1, d2):
        return lambda env: Mul(d1(env), d2(env))

    def mk_div(self, d1, d2):
        return lambda env: Div(d1(env), d2(env))

    def mk_eq(self, d1, d2):
        return lambda env: Eq(d1(env), d2(env))

    def mk_if(self, dc, dt, de):
        return lambda env: If(dc(env), dt(env), de(env))

    def mk_lam(self, name, body):
        return lambda env: Lam(name, body(env.extend(name, Var(name))))

    def mk_app(self, d1, d2):
        return lambda env: App(d1(env), d2(env))

    def mk_let(self, name, d1, d2):
        return lambda env: Let(name, d1(env), d2(env.extend(name, Var(name))))

    def mk_letrec(self, clauses, body):
        clauses = tuple(clauses)

        def den(env):
            env2 = env
            for n, _ in clauses:
                env2 = env2.extend(n, Var(n))
            return LetRec(
                tuple((n, rhs(env2)) for n, rhs in clauses), body(env2)
            )

        return den
