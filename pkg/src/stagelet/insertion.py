"""Virtual-binding stores and the machinery that turns them into real binders.

A binding requested deep inside a generator floats upward attached to code
values until the locus it names converts it to a let (or letrec) around the
code built there. Stores are immutable: every operation returns a new store.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .base import StagingError

DEFAULT_CANON_LIMIT = 10_000


class ResidualBindings(StagingError):
    """A generator finished with bindings still floating (locus never opened)."""

    def __init__(self, loci):
        self.loci = tuple(loci)
        rendered = ", ".join(render_location(l) for l in self.loci)
        super().__init__(f"unplaced bindings for loci: {rendered}")


class CanonLimitExceeded(StagingError):
    def __init__(self, locus, keys):
        self.locus = locus
        self.keys = tuple(keys)
        super().__init__(
            f"canonicalization at locus {render_location(locus)} did not settle; "
            f"keys still pending: {list(self.keys)}"
        )


class PendingBinding(StagingError):
    """A letrec-requested binding reached a plain let locus."""


def render_location(loc) -> str:
    return "[" + ",".join(str(i) for i in loc) + "]"


@dataclass(frozen=True)
class Locus:
    """Marks where requested bindings materialize; opaque to generators."""

    location: tuple


@dataclass(frozen=True)
class Canonical:
    """A right-hand side that is already a denotation."""

    denotation: object


class Pending:
    """A right-hand side that is still a code value, anchored to a fixed
    location; forcing it twice yields structurally identical results."""

    __slots__ = ("_thunk",)

    def __init__(self, thunk):
        self._thunk = thunk

    def force(self):
        return self._thunk()

    def __repr__(self):
        return "Pending(...)"


@dataclass(frozen=True)
class BindingClass:
    """One equivalence class of requested bindings: the representative name
    to bind, its right-hand side, and the other names to rewrite into it."""

    name: object
    rhs: object  # Canonical | Pending
    aliases: frozenset = frozenset()


@dataclass(frozen=True)
class PerLocus:
    """Bindings destined for one locus: a preorder over memo keys (kept
    reflexively and transitively closed), the classes by key, and the keys
    in first-insertion order (the deterministic tie-break)."""

    order: frozenset = frozenset()
    classes: dict = field(default_factory=dict)
    insertion_seq: tuple = ()

    def is_empty(self):
        return not self.classes


EMPTY_PER_LOCUS = PerLocus()


def _add_class(store: PerLocus, key, cls: BindingClass) -> PerLocus:
    existing = store.classes.get(key)
    if existing is not None:
        aliases = (existing.aliases | cls.aliases | {cls.name}) - {existing.name}
        if isinstance(existing.rhs, Canonical):
            rhs = existing.rhs
        elif isinstance(cls.rhs, Canonical):
            rhs = cls.rhs
        else:
            rhs = existing.rhs
        classes = dict(store.classes)
        classes[key] = BindingClass(existing.name, rhs, frozenset(aliases))
        return PerLocus(store.order, classes, store.insertion_seq)
    # new key: it becomes the latest element of the preorder
    pairs = {(key, key)} | {(k, key) for k in store.insertion_seq}
    classes = dict(store.classes)
    classes[key] = cls
    return PerLocus(store.order | pairs, classes, store.insertion_seq + (key,))


def addb(key, name, rhs, store: PerLocus) -> PerLocus:
    """Add one requested binding of `name` to `rhs` under memo key `key`.

    An existing class for the key absorbs the name as an alias and keeps its
    own right-hand side; a new key enters greater than everything present.
    """
    return _add_class(store, key, BindingClass(name, rhs))


@dataclass(frozen=True)
class VirtualBindings:
    """Finite map from locus locations to per-locus stores; empty stores are
    never kept."""

    stores: dict = field(default_factory=dict)

    def at(self, loc) -> PerLocus:
        return self.stores.get(loc, EMPTY_PER_LOCUS)

    def loci(self):
        return tuple(self.stores)

    def is_empty(self):
        return not self.stores

    def set(self, loc, store: PerLocus) -> "VirtualBindings":
        new = dict(self.stores)
        if store.is_empty():
            new.pop(loc, None)
        else:
            new[loc] = store
        return VirtualBindings(new)

    def updated(self, loc, fn) -> "VirtualBindings":
        return self.set(loc, fn(self.at(loc)))

    def without(self, loc) -> "VirtualBindings":
        if loc not in self.stores:
            return self
        new = dict(self.stores)
        del new[loc]
        return VirtualBindings(new)


EMPTY_BINDINGS = VirtualBindings()


def singleton(loc, store: PerLocus) -> VirtualBindings:
    return EMPTY_BINDINGS.set(loc, store)


def merge(v1: VirtualBindings, v2: VirtualBindings) -> VirtualBindings:
    """Fold the classes of v2 into v1, locus by locus, each locus traversed
    in v2's binding order, so v2's newcomers end up after everything in v1."""
    if v2.is_empty():
        return v1
    if v1.is_empty():
        return v2
    result = v1
    for loc in v2.loci():
        incoming = v2.at(loc)
        store = result.at(loc)
        for key in _ordered_keys(incoming):
            store = _add_class(store, key, incoming.classes[key])
        result = result.set(loc, store)
    return result


def _ordered_keys(store: PerLocus):
    keys = list(store.insertion_seq)
    strict = {
        (a, b) for (a, b) in store.order if a != b and (b, a) not in store.order
    }
    placed = []
    placed_set = set()
    while len(placed) < len(keys):
        k = next(
            k
            for k in keys
            if k not in placed_set
            and all(a in placed_set for (a, b) in strict if b == k)
        )
        placed.append(k)
        placed_set.add(k)
    return placed


def ordered(store: PerLocus):
    """The classes as a sequence consistent with the preorder: strictly
    smaller keys come first, ties resolved by first-insertion order."""
    return [store.classes[k] for k in _ordered_keys(store)]


def subst(representative, aliases, denotation):
    """A denotation equal to `denotation` except every alias resolves to the
    representative's binding."""
    aliases = tuple(sorted(aliases, key=lambda n: n.render()))
    if not aliases:
        return denotation

    def den(env):
        for a in aliases:
            env = env.redirect(a, representative)
        return denotation(env)

    return den


def _redirect_all(pairs, denotation):
    if not pairs:
        return denotation

    def den(env):
        for alias, rep in pairs:
            env = env.redirect(alias, rep)
        return denotation(env)

    return den


def _require_canonical(cls: BindingClass):
    if isinstance(cls.rhs, Pending):
        raise PendingBinding(
            f"binding {cls.name.render()} is still a code value; "
            "letrec-requested bindings need a letrec locus"
        )
    return cls.rhs.denotation


def bind_lets(classes, body, sem):
    """Nest the classes around `body` as let-expressions, outermost first."""
    den = body
    for cls in reversed(list(classes)):
        rhs = _require_canonical(cls)
        den = sem.mk_let(cls.name, rhs, subst(cls.name, cls.aliases, den))
    return den


def bind_letrec(classes, body, sem):
    """One letrec over all classes; aliases from any class may appear in any
    clause (folding during canonicalization creates them), so every clause and
    the body run under the full alias-to-representative rewrite."""
    classes = list(classes)
    if not classes:
        return body
    pairs = tuple(
        (alias, cls.name)
        for cls in classes
        for alias in sorted(cls.aliases, key=lambda n: n.render())
    )
    clauses = [
        (cls.name, _redirect_all(pairs, _require_canonical(cls))) for cls in classes
    ]
    return sem.mk_letrec(clauses, _redirect_all(pairs, body))


def canon(bindings: VirtualBindings, loc, round_limit=DEFAULT_CANON_LIMIT):
    """Force pending right-hand sides at `loc` until all classes there are
    canonical, merging whatever bindings each forcing produces.

    Forcing a pending class may request the same key again; the merge folds
    that re-occurrence into the now-canonical class, which is what lets the
    process terminate. Picks the earliest pending key in insertion order;
    aborts after `round_limit` forcings.
    """
    current = bindings
    rounds = 0
    while True:
        store = current.at(loc)
        pending_keys = [
            k for k in store.insertion_seq if isinstance(store.classes[k].rhs, Pending)
        ]
        if not pending_keys:
            return current
        if rounds >= round_limit:
            raise CanonLimitExceeded(loc, pending_keys)
        key = pending_keys[0]
        cls = store.classes[key]
        den, produced = cls.rhs.force()
        classes = dict(store.classes)
        classes[key] = BindingClass(cls.name, Canonical(den), cls.aliases)
        current = merge(
            current.set(loc, PerLocus(store.order, classes, store.insertion_seq)),
            produced,
        )
        rounds += 1
