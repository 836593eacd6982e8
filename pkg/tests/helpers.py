"""Shared test utilities: oracles, random program builders, tree walkers."""

from types import SimpleNamespace

from stagelet import (
    Add,
    App,
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
    Source,
    Sub,
    Succ,
    Var,
    cadd,
    capp,
    ceq,
    cif,
    cint,
    clam,
    clet,
    cmul,
    csub,
    csucc,
    genlet,
    with_locus,
)
from stagelet.codec import CodeValue
from stagelet.insertion import EMPTY_BINDINGS, merge


# ---------------------------------------------------------------------------
# Independent oracles


def ackermann(m, n):
    if m == 0:
        return n + 1
    if n == 0:
        return ackermann(m - 1, 1)
    return ackermann(m - 1, ackermann(m, n - 1))


def gib(n, x, y):
    """Fibonacci-style recurrence seeded with x, y."""
    if n == 0:
        return x
    if n == 1:
        return y
    return gib(n - 1, x, y) + gib(n - 2, x, y)


# ---------------------------------------------------------------------------
# Tree walkers


def subtrees(tree):
    yield tree
    match tree:
        case Succ(a):
            yield from subtrees(a)
        case Add(a, b) | Sub(a, b) | Mul(a, b) | Div(a, b) | Eq(a, b) | App(a, b):
            yield from subtrees(a)
            yield from subtrees(b)
        case If(c, t, e):
            yield from subtrees(c)
            yield from subtrees(t)
            yield from subtrees(e)
        case Lam(_, b):
            yield from subtrees(b)
        case Let(_, r, b):
            yield from subtrees(r)
            yield from subtrees(b)
        case LetRec(clauses, b):
            for _, r in clauses:
                yield from subtrees(r)
            yield from subtrees(b)


def binders(tree):
    """All names bound anywhere in the tree, as a list (repeats included)."""
    found = []
    for t in subtrees(tree):
        match t:
            case Lam(n, _):
                found.append(n)
            case Let(n, _, _):
                found.append(n)
            case LetRec(clauses, _):
                found.extend(n for n, _ in clauses)
    return found


def count_lets(tree):
    return sum(isinstance(t, Let) for t in subtrees(tree))


def scan_occurrences(tree, bound=()):
    """Every Var occurrence paired with the binders on its path to the root."""
    match tree:
        case Var(n):
            return [(n, bound)]
        case IntLit() | BoolLit():
            return []
        case Succ(a):
            return scan_occurrences(a, bound)
        case Add(a, b) | Sub(a, b) | Mul(a, b) | Div(a, b) | Eq(a, b) | App(a, b):
            return scan_occurrences(a, bound) + scan_occurrences(b, bound)
        case If(c, t, e):
            return (
                scan_occurrences(c, bound)
                + scan_occurrences(t, bound)
                + scan_occurrences(e, bound)
            )
        case Lam(n, b):
            return scan_occurrences(b, bound + (n,))
        case Let(n, r, b):
            return scan_occurrences(r, bound) + scan_occurrences(b, bound + (n,))
        case LetRec(clauses, b):
            inner = bound + tuple(n for n, _ in clauses)
            occ = []
            for _, r in clauses:
                occ += scan_occurrences(r, inner)
            return occ + scan_occurrences(b, inner)
    raise AssertionError(tree)


def bruteforce_free(tree):
    return {n for n, bound in scan_occurrences(tree) if n not in bound}


# ---------------------------------------------------------------------------
# Random object-language terms (possibly open, possibly ill-typed)


def random_term(rng, depth, scope=(), counter=None):
    counter = counter if counter is not None else [0]
    if depth <= 0 or rng.random() < 0.3:
        roll = rng.random()
        if scope and roll < 0.5:
            return Var(rng.choice(scope))
        if roll < 0.75:
            return IntLit(rng.randrange(10))
        return BoolLit(rng.random() < 0.5)

    def sub(extra=()):
        return random_term(rng, depth - 1, scope + extra, counter)

    def fresh_name():
        counter[0] += 1
        return Source(f"n{counter[0]}")

    match rng.randrange(8):
        case 0:
            return Add(sub(), sub())
        case 1:
            return Mul(sub(), sub())
        case 2:
            return Succ(sub())
        case 3:
            return If(sub(), sub(), sub())
        case 4:
            n = fresh_name()
            return Lam(n, sub((n,)))
        case 5:
            return App(sub(), sub())
        case 6:
            n = fresh_name()
            return Let(n, sub(), sub((n,)))
        case 7:
            names = [fresh_name() for _ in range(rng.randrange(1, 3))]
            bound = tuple(names)
            clauses = tuple((n, sub(bound)) for n in names)
            return LetRec(clauses, sub(bound))


def rename_bound(term, counter=None):
    """A copy with every bound name replaced by a globally fresh one."""
    counter = counter if counter is not None else [0]

    def fresh():
        counter[0] += 1
        return Source(f"r{counter[0]}")

    def go(t, ren):
        match t:
            case Var(n):
                return Var(ren.get(n, n))
            case IntLit() | BoolLit():
                return t
            case Succ(a):
                return Succ(go(a, ren))
            case Add(a, b):
                return Add(go(a, ren), go(b, ren))
            case Sub(a, b):
                return Sub(go(a, ren), go(b, ren))
            case Mul(a, b):
                return Mul(go(a, ren), go(b, ren))
            case Div(a, b):
                return Div(go(a, ren), go(b, ren))
            case Eq(a, b):
                return Eq(go(a, ren), go(b, ren))
            case App(a, b):
                return App(go(a, ren), go(b, ren))
            case If(c, th, e):
                return If(go(c, ren), go(th, ren), go(e, ren))
            case Lam(n, b):
                n2 = fresh()
                return Lam(n2, go(b, {**ren, n: n2}))
            case Let(n, r, b):
                n2 = fresh()
                return Let(n2, go(r, ren), go(b, {**ren, n: n2}))
            case LetRec(clauses, b):
                ren2 = dict(ren)
                pairs = []
                for n, _ in clauses:
                    n2 = fresh()
                    ren2[n] = n2
                    pairs.append(n2)
                return LetRec(
                    tuple(
                        (n2, go(r, ren2)) for n2, (_, r) in zip(pairs, clauses)
                    ),
                    go(b, ren2),
                )
        raise AssertionError(t)

    return go(term, {})


# ---------------------------------------------------------------------------
# Random integer-typed generator plans, realized against pluggable builders.
# All randomness happens at plan time so two realizations of one plan build
# the same structure even when binder callbacks fire in different orders.


def random_plan(rng, depth, nvars=0, in_locus=False, allow_locus=False):
    if depth <= 0:
        if nvars and rng.random() < 0.5:
            return ("var", rng.randrange(nvars))
        return ("int", rng.randrange(10))
    kinds = ["int", "var", "add", "sub", "mul", "succ", "eqif", "app", "let"]
    if in_locus:
        kinds += ["genlet", "genlet"]
    if allow_locus:
        kinds.append("locus")
    kind = rng.choice(kinds)
    if kind == "var" and not nvars:
        kind = "int"
    d = depth - 1

    def sub(extra=0, inside=in_locus):
        return random_plan(rng, d, nvars + extra, inside, allow_locus)

    match kind:
        case "int":
            return ("int", rng.randrange(10))
        case "var":
            return ("var", rng.randrange(nvars))
        case "add" | "sub" | "mul":
            return (kind, sub(), sub())
        case "succ":
            return ("succ", sub())
        case "eqif":
            return ("eqif", sub(), sub(), sub(), sub())
        case "app":
            return ("app", sub(extra=1), sub())
        case "let":
            return ("let", sub(), sub(extra=1))
        case "genlet":
            return ("genlet", rng.randrange(4), sub())
        case "locus":
            return ("locus", random_plan(rng, d, nvars, True, allow_locus))


def build_code(plan, b, env=(), locus=None):
    """Realize a plan as a CodeValue using builder namespace `b`."""

    def rec(p, env=env, locus=locus):
        return build_code(p, b, env, locus)

    match plan:
        case ("int", k):
            return cint(k)
        case ("var", i):
            return env[i]
        case ("add", p, q):
            return b.add(rec(p), rec(q))
        case ("sub", p, q):
            return b.sub(rec(p), rec(q))
        case ("mul", p, q):
            return b.mul(rec(p), rec(q))
        case ("succ", p):
            return csucc(rec(p))
        case ("eqif", p, q, t, e):
            return b.if_(b.eq(rec(p), rec(q)), rec(t), rec(e))
        case ("app", body, arg):
            return b.app(
                clam(lambda v: build_code(body, b, env + (v,), locus)), rec(arg)
            )
        case ("let", rhs, body):
            return b.let_(rec(rhs), lambda v: build_code(body, b, env + (v,), locus))
        case ("genlet", key, rhs):
            return genlet(locus, key, rec(rhs))
        case ("locus", body):
            return with_locus(lambda l: build_code(body, b, env, l))
    raise AssertionError(plan)


def build_den(plan, sem, env=()):
    """Realize a genlet-free plan directly with the mk builders of `sem`."""

    def rec(p, env=env):
        return build_den(p, sem, env)

    match plan:
        case ("int", k):
            return sem.mk_int(k)
        case ("var", i):
            return sem.mk_var(env[i])
        case ("add", p, q):
            return sem.mk_add(rec(p), rec(q))
        case ("sub", p, q):
            return sem.mk_sub(rec(p), rec(q))
        case ("mul", p, q):
            return sem.mk_mul(rec(p), rec(q))
        case ("succ", p):
            return sem.mk_succ(rec(p))
        case ("eqif", p, q, t, e):
            return sem.mk_if(sem.mk_eq(rec(p), rec(q)), rec(t), rec(e))
        case ("app", body, arg):
            n = Source(f"p{len(env)}")
            return sem.mk_app(
                sem.mk_lam(n, build_den(body, sem, env + (n,))), rec(arg)
            )
        case ("let", rhs, body):
            n = Source(f"p{len(env)}")
            return sem.mk_let(n, rec(rhs), build_den(body, sem, env + (n,)))
    raise AssertionError(plan)


# ---------------------------------------------------------------------------
# Builder namespaces: the shipped combinators, and mirrored ones that build
# the same nodes but evaluate children right before left.


def _var_code(name):
    return CodeValue(lambda ctx, loc: (ctx.sem.mk_var(name), EMPTY_BINDINGS))


def _mirror_binary(pick):
    def op(a, b):
        def build(ctx, loc):
            d2, v2 = b(ctx, loc + (2,))
            d1, v1 = a(ctx, loc + (1,))
            return pick(ctx.sem)(d1, d2), merge(v1, v2)

        return CodeValue(build)

    return op


def _mirror_if(c, t, e):
    def build(ctx, loc):
        de, ve = e(ctx, loc + (3,))
        dt, vt = t(ctx, loc + (2,))
        dc, vc = c(ctx, loc + (1,))
        return ctx.sem.mk_if(dc, dt, de), merge(merge(vc, vt), ve)

    return CodeValue(build)


def _mirror_clet(rhs, body, hint=None):
    def build(ctx, loc):
        name = Fresh(loc, hint)
        d2, v2 = body(_var_code(name))(ctx, loc + (2,))
        d1, v1 = rhs(ctx, loc + (1,))
        return ctx.sem.mk_let(name, d1, d2), merge(v1, v2)

    return CodeValue(build)


LEFT_FIRST = SimpleNamespace(
    add=cadd, sub=csub, mul=cmul, eq=ceq, if_=cif, app=capp, let_=clet
)

RIGHT_FIRST = SimpleNamespace(
    add=_mirror_binary(lambda s: s.mk_add),
    sub=_mirror_binary(lambda s: s.mk_sub),
    mul=_mirror_binary(lambda s: s.mk_mul),
    eq=_mirror_binary(lambda s: s.mk_eq),
    app=_mirror_binary(lambda s: s.mk_app),
    if_=_mirror_if,
    let_=_mirror_clet,
)


# ---------------------------------------------------------------------------
# Minimal s-expression reader for CLI round-trip checks


def parse_sexp(text):
    tokens = text.replace("(", " ( ").replace(")", " ) ").split()
    pos = 0

    def parse():
        nonlocal pos
        tok = tokens[pos]
        pos += 1
        if tok == "(":
            items = []
            while tokens[pos] != ")":
                items.append(parse())
            pos += 1
            return items
        return tok

    result = parse()
    assert pos == len(tokens)
    return result


def serialize_sexp(node):
    if isinstance(node, list):
        return "(" + " ".join(serialize_sexp(x) for x in node) + ")"
    return node
