"""Process syntax for the extended pi-calculus.

Terms carry numbers, channel names, variables, and arithmetic over numbers
(names are opaque: applying an operator to one is a runtime fault).
Channels are either plain names or composite ``base.suffix`` names, where
the suffix is a numeric index, one of the labels ``all``/``tup``/``len``,
or a variable that must be resolved before the channel is usable.

Processes: inaction, parallel composition, replication, name restriction,
action prefixes (send, receive, broadcast), a one-shot importance marker
(``Bullet``), and a two-branch comparison ``[M op N] P, Q``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

LABELS = ("all", "tup", "len")
COMPARATORS = ("<", ">", "<=", ">=", "=", "!=")


class TermError(Exception):
    """Raised when a term cannot be evaluated to a number or name."""


# ---------------------------------------------------------------- terms

@dataclass(frozen=True)
class NumT:
    value: int


@dataclass(frozen=True)
class NameT:
    name: str


@dataclass(frozen=True)
class VarT:
    name: str


@dataclass(frozen=True)
class OpT:
    op: str  # add | sub | mul | div
    left: "Term"
    right: "Term"


Term = Union[NumT, NameT, VarT, OpT]


def _arith(op: str, a: int, b: int) -> int:
    # division truncates toward zero, matching the source language
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if b == 0:
            raise TermError("division by zero")
        q = abs(a) // abs(b)
        return -q if (a < 0) != (b < 0) else q
    raise ValueError(f"unknown operator {op!r}")


def eval_term(t: Term) -> NumT | NameT:
    """Fold arithmetic over numbers; names are opaque fixed points."""
    match t:
        case NumT() | NameT():
            return t
        case VarT(name):
            raise TermError(f"unbound variable {name!r}")
        case OpT(op, left, right):
            lv, rv = eval_term(left), eval_term(right)
            if isinstance(lv, NameT) or isinstance(rv, NameT):
                raise TermError("arithmetic on a channel name")
            return NumT(_arith(op, lv.value, rv.value))
    raise TypeError(f"not a term: {t!r}")


def compare(op: str, lv: NumT | NameT, rv: NumT | NameT) -> bool:
    """Decide ``lv op rv`` on evaluated terms.

    Equality and inequality are defined for any mix of numbers and names;
    order comparisons require two numbers.
    """
    if op in ("=", "=="):
        return lv == rv
    if op == "!=":
        return lv != rv
    if isinstance(lv, NameT) or isinstance(rv, NameT):
        raise TermError("order comparison on a channel name")
    if op == "<":
        return lv.value < rv.value
    if op == ">":
        return lv.value > rv.value
    if op == "<=":
        return lv.value <= rv.value
    if op == ">=":
        return lv.value >= rv.value
    raise ValueError(f"unknown comparator {op!r}")


# ------------------------------------------------------------- channels

@dataclass(frozen=True)
class Chan:
    """A channel: a base name or variable, with at most one suffix level."""

    base: Term  # NameT or VarT
    suffix: Union[int, str, VarT, NameT, None] = None


# -------------------------------------------------------------- actions

@dataclass(frozen=True)
class Send:
    chan: Chan
    args: tuple[Term, ...]


@dataclass(frozen=True)
class Recv:
    chan: Chan
    params: tuple[Union[str, None], ...]  # None is a wildcard pattern


@dataclass(frozen=True)
class Bcast:
    chan: Chan
    args: tuple[Term, ...]


Action = Union[Send, Recv, Bcast]


# ------------------------------------------------------------ processes

@dataclass(frozen=True)
class Nil:
    pass


@dataclass(frozen=True)
class Par:
    left: "Process"
    right: "Process"


@dataclass(frozen=True)
class Repl:
    body: "Process"


@dataclass(frozen=True)
class New:
    name: str
    body: "Process"


@dataclass(frozen=True)
class Act:
    action: Action
    cont: "Process"


@dataclass(frozen=True)
class Bullet:
    body: "Process"


@dataclass(frozen=True)
class Match:
    left: Term
    op: str
    right: Term
    then: "Process"
    orelse: "Process"


Process = Union[Nil, Par, Repl, New, Act, Bullet, Match]


def _memo_on_instance(attr):
    """Memoize a unary function of an immutable node on the node itself.

    Cheaper than an lru cache: no deep structural hashing on lookup.
    """
    def deco(fn):
        def wrapper(x):
            try:
                return object.__getattribute__(x, attr)
            except AttributeError:
                value = fn(x)
                object.__setattr__(x, attr, value)
                return value
        wrapper.__name__ = fn.__name__
        wrapper.__doc__ = fn.__doc__
        return wrapper
    return deco


def _cached_hash(self):
    # engine sets and caches hash syntax trees heavily; the generated
    # dataclass hash walks the whole tree every call, so memoize per node
    try:
        return object.__getattribute__(self, "_hash_memo")
    except AttributeError:
        fields = tuple(getattr(self, name) for name in self.__dataclass_fields__)
        value = hash((self.__class__.__name__, fields))
        object.__setattr__(self, "_hash_memo", value)
        return value


for _cls in (NumT, NameT, VarT, OpT, Chan, Send, Recv, Bcast,
             Nil, Par, Repl, New, Act, Bullet, Match):
    _cls.__hash__ = _cached_hash


def par(*procs: Process) -> Process:
    """Right-nested parallel composition, dropping nothing."""
    items = [p for p in procs if not isinstance(p, Nil)]
    if not items:
        return Nil()
    out = items[-1]
    for p in reversed(items[:-1]):
        out = Par(p, out)
    return out


def seq_news(names: list[str] | tuple[str, ...], body: Process) -> Process:
    for name in reversed(names):
        body = New(name, body)
    return body


# ----------------------------------------------------- name/var queries

def term_names(t: Term) -> frozenset[str]:
    match t:
        case NameT(name):
            return frozenset((name,))
        case OpT(_, left, right):
            return term_names(left) | term_names(right)
        case _:
            return frozenset()


def term_vars(t: Term) -> frozenset[str]:
    match t:
        case VarT(name):
            return frozenset((name,))
        case OpT(_, left, right):
            return term_vars(left) | term_vars(right)
        case _:
            return frozenset()


def chan_names(c: Chan) -> frozenset[str]:
    out = term_names(c.base)
    if isinstance(c.suffix, NameT):
        out |= frozenset((c.suffix.name,))
    return out


def chan_vars(c: Chan) -> frozenset[str]:
    out = term_vars(c.base)
    if isinstance(c.suffix, VarT):
        out |= frozenset((c.suffix.name,))
    return out


def _action_names(a: Action) -> frozenset[str]:
    out = chan_names(a.chan)
    if isinstance(a, (Send, Bcast)):
        for t in a.args:
            out |= term_names(t)
    return out


@_memo_on_instance("_memo_free_names")
def free_names(p: Process) -> frozenset[str]:
    """Names not bound by any enclosing restriction."""
    match p:
        case Nil():
            return frozenset()
        case Par(left, right):
            return free_names(left) | free_names(right)
        case Repl(body) | Bullet(body):
            return free_names(body)
        case New(name, body):
            return free_names(body) - {name}
        case Act(action, cont):
            return _action_names(action) | free_names(cont)
        case Match(left, _, right, then, orelse):
            return (term_names(left) | term_names(right)
                    | free_names(then) | free_names(orelse))
    raise TypeError(f"not a process: {p!r}")


@_memo_on_instance("_memo_all_names")
def all_names(p: Process) -> frozenset[str]:
    """Every name occurring anywhere, including binders."""
    match p:
        case Nil():
            return frozenset()
        case Par(left, right):
            return all_names(left) | all_names(right)
        case Repl(body) | Bullet(body):
            return all_names(body)
        case New(name, body):
            return all_names(body) | {name}
        case Act(action, cont):
            return _action_names(action) | all_names(cont)
        case Match(left, _, right, then, orelse):
            return (term_names(left) | term_names(right)
                    | all_names(then) | all_names(orelse))
    raise TypeError(f"not a process: {p!r}")


@_memo_on_instance("_memo_fpv")
def free_process_vars(p: Process) -> frozenset[str]:
    match p:
        case Nil():
            return frozenset()
        case Par(left, right):
            return free_process_vars(left) | free_process_vars(right)
        case Repl(body) | Bullet(body):
            return free_process_vars(body)
        case New(_, body):
            return free_process_vars(body)
        case Act(action, cont):
            out = chan_vars(action.chan)
            if isinstance(action, (Send, Bcast)):
                for t in action.args:
                    out |= term_vars(t)
                return out | free_process_vars(cont)
            bound = {x for x in action.params if x is not None}
            return out | (free_process_vars(cont) - bound)
        case Match(left, _, right, then, orelse):
            return (term_vars(left) | term_vars(right)
                    | free_process_vars(then) | free_process_vars(orelse))
    raise TypeError(f"not a process: {p!r}")


# ---------------------------------------------------------- rewriting

def _fresh_variant(base: str, avoid: set[str]) -> str:
    if base not in avoid:
        return base
    root = base.rstrip("0123456789_") or base
    i = 2
    while True:
        candidate = f"{root}_{i}"
        if candidate not in avoid:
            return candidate
        i += 1


def rewrite(p: Process, var_map: dict[str, Term] | None = None,
            name_map: dict[str, str] | None = None) -> Process:
    """Substitute terms for free variables and rename free names, capture-avoidingly.

    ``var_map`` maps receive-pattern variables to terms (usually evaluated
    numbers or names).  ``name_map`` renames free names.  Restriction
    binders that would capture a name introduced by either map are renamed
    to a fresh variant first.
    """
    var_map = var_map or {}
    name_map = name_map or {}
    if not var_map and not name_map:
        return p

    incoming = set(name_map.values())
    for t in var_map.values():
        incoming |= term_names(t)
    incoming_vars: set[str] = set()
    for t in var_map.values():
        incoming_vars |= term_vars(t)

    def sub_term(t: Term, vm: dict[str, Term], nm: dict[str, str]) -> Term:
        match t:
            case NumT():
                return t
            case NameT(name):
                return NameT(nm[name]) if name in nm else t
            case VarT(name):
                return vm.get(name, t)
            case OpT(op, left, right):
                return OpT(op, sub_term(left, vm, nm), sub_term(right, vm, nm))
        raise TypeError(f"not a term: {t!r}")

    def sub_suffix(sfx, vm, nm):
        if isinstance(sfx, VarT):
            if sfx.name in vm:
                value = vm[sfx.name]
                if isinstance(value, NumT):
                    return value.value
                return value  # a name here can never address a cell; kept inert
            return sfx
        if isinstance(sfx, NameT):
            return NameT(nm[sfx.name]) if sfx.name in nm else sfx
        return sfx

    def sub_chan(c: Chan, vm, nm) -> Chan:
        return Chan(sub_term(c.base, vm, nm), sub_suffix(c.suffix, vm, nm))

    def go(p: Process, vm: dict[str, Term], nm: dict[str, str]) -> Process:
        if not vm and not nm:
            return p
        match p:
            case Nil():
                return p
            case Par(left, right):
                return Par(go(left, vm, nm), go(right, vm, nm))
            case Repl(body):
                return Repl(go(body, vm, nm))
            case Bullet(body):
                return Bullet(go(body, vm, nm))
            case New(name, body):
                if name in incoming:
                    fresh = _fresh_variant(name, incoming | all_names(body) | set(nm) | set(vm))
                    body = go(body, {}, {name: fresh})
                    name = fresh
                inner_nm = {k: v for k, v in nm.items() if k != name}
                return New(name, go(body, vm, inner_nm))
            case Act(action, cont):
                chan = sub_chan(action.chan, vm, nm)
                if isinstance(action, (Send, Bcast)):
                    args = tuple(sub_term(t, vm, nm) for t in action.args)
                    kind = Send if isinstance(action, Send) else Bcast
                    return Act(kind(chan, args), go(cont, vm, nm))
                params = list(action.params)
                inner_vm = {k: v for k, v in vm.items()
                            if k not in action.params}
                for i, x in enumerate(params):
                    if x is not None and x in incoming_vars:
                        fresh = _fresh_variant(x, incoming_vars | free_process_vars(cont) | set(inner_vm))
                        cont = go(cont, {x: VarT(fresh)}, {})
                        params[i] = fresh
                return Act(Recv(chan, tuple(params)), go(cont, inner_vm, nm))
            case Match(left, op, right, then, orelse):
                return Match(sub_term(left, vm, nm), op, sub_term(right, vm, nm),
                             go(then, vm, nm), go(orelse, vm, nm))
        raise TypeError(f"not a process: {p!r}")

    return go(p, dict(var_map), dict(name_map))


def alpha_equal_process(p: Process, q: Process) -> bool:
    """Equality up to renaming of restriction-bound names and pattern variables."""

    def terms_eq(a: Term, b: Term, na, nb, va, vb) -> bool:
        match a, b:
            case NumT(x), NumT(y):
                return x == y
            case NameT(x), NameT(y):
                ia, ib = na.get(x), nb.get(y)
                return (x == y) if ia is None and ib is None else ia == ib
            case VarT(x), VarT(y):
                ia, ib = va.get(x), vb.get(y)
                return (x == y) if ia is None and ib is None else ia == ib
            case OpT(o1, l1, r1), OpT(o2, l2, r2):
                return o1 == o2 and terms_eq(l1, l2, na, nb, va, vb) and terms_eq(r1, r2, na, nb, va, vb)
            case _:
                return False

    def suffix_eq(a, b, na, nb, va, vb) -> bool:
        if isinstance(a, (VarT, NameT)) or isinstance(b, (VarT, NameT)):
            return (type(a) is type(b)
                    and terms_eq(a, b, na, nb, va, vb))
        return a == b

    def chans_eq(a: Chan, b: Chan, na, nb, va, vb) -> bool:
        return (terms_eq(a.base, b.base, na, nb, va, vb)
                and suffix_eq(a.suffix, b.suffix, na, nb, va, vb))

    def go(p, q, na, nb, va, vb, depth) -> bool:
        match p, q:
            case Nil(), Nil():
                return True
            case Par(l1, r1), Par(l2, r2):
                return go(l1, l2, na, nb, va, vb, depth) and go(r1, r2, na, nb, va, vb, depth)
            case Repl(b1), Repl(b2):
                return go(b1, b2, na, nb, va, vb, depth)
            case Bullet(b1), Bullet(b2):
                return go(b1, b2, na, nb, va, vb, depth)
            case New(n1, b1), New(n2, b2):
                return go(b1, b2, {**na, n1: depth}, {**nb, n2: depth}, va, vb, depth + 1)
            case Act(a1, c1), Act(a2, c2):
                if type(a1) is not type(a2):
                    return False
                if not chans_eq(a1.chan, a2.chan, na, nb, va, vb):
                    return False
                if isinstance(a1, (Send, Bcast)):
                    if len(a1.args) != len(a2.args):
                        return False
                    if not all(terms_eq(x, y, na, nb, va, vb) for x, y in zip(a1.args, a2.args)):
                        return False
                    return go(c1, c2, na, nb, va, vb, depth)
                if len(a1.params) != len(a2.params):
                    return False
                va2, vb2, d = dict(va), dict(vb), depth
                for x, y in zip(a1.params, a2.params):
                    if (x is None) != (y is None):
                        return False
                    if x is not None:
                        va2[x] = d
                        vb2[y] = d
                        d += 1
                return go(c1, c2, na, nb, va2, vb2, d)
            case Match(l1, o1, r1, t1, e1), Match(l2, o2, r2, t2, e2):
                return (o1 == o2
                        and terms_eq(l1, l2, na, nb, va, vb)
                        and terms_eq(r1, r2, na, nb, va, vb)
                        and go(t1, t2, na, nb, va, vb, depth)
                        and go(e1, e2, na, nb, va, vb, depth))
            case _:
                return False

    return go(p, q, {}, {}, {}, {}, 0)
