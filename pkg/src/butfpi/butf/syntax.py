"""Abstract syntax for BUTF and the basic operations on terms.

Expressions are immutable trees.  The constructors mirror the grammar:
numbers, variables, arrays, indexing, lambda abstraction, application,
tuples, conditionals, and the builtin constants (``map``, ``iota``,
``size`` and the four uncurried arithmetic operators).

Values are the subset of expressions headed by a constant, a lambda, or an
array/tuple all of whose elements are values.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

ARITH_OPS = ("add", "sub", "mul", "div")
ARRAY_OPS = ("map", "iota", "size")
BUILTIN_OPS = ARRAY_OPS + ARITH_OPS


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Builtin:
    """A builtin constant: one of ``map iota size add sub mul div``."""

    op: str

    def __post_init__(self) -> None:
        if self.op not in BUILTIN_OPS:
            raise ValueError(f"unknown builtin {self.op!r}")


@dataclass(frozen=True)
class Array:
    items: tuple["Expr", ...]


@dataclass(frozen=True)
class Tup:
    items: tuple["Expr", ...]


@dataclass(frozen=True)
class Index:
    target: "Expr"
    index: "Expr"


@dataclass(frozen=True)
class Lam:
    param: str
    body: "Expr"


@dataclass(frozen=True)
class App:
    fun: "Expr"
    arg: "Expr"


@dataclass(frozen=True)
class If:
    cond: "Expr"
    then: "Expr"
    orelse: "Expr"


Expr = Union[Num, Var, Builtin, Array, Tup, Index, Lam, App, If]


def is_value(e: Expr) -> bool:
    """True iff ``e`` is in the value grammar.

    Constants and lambdas are values outright; arrays and tuples are values
    exactly when every element is.
    """
    match e:
        case Num() | Builtin() | Lam():
            return True
        case Array(items) | Tup(items):
            return all(is_value(x) for x in items)
        case _:
            return False


def free_vars(e: Expr) -> frozenset[str]:
    match e:
        case Num() | Builtin():
            return frozenset()
        case Var(name):
            return frozenset((name,))
        case Array(items) | Tup(items):
            out: frozenset[str] = frozenset()
            for x in items:
                out |= free_vars(x)
            return out
        case Index(target, index):
            return free_vars(target) | free_vars(index)
        case Lam(param, body):
            return free_vars(body) - {param}
        case App(fun, arg):
            return free_vars(fun) | free_vars(arg)
        case If(cond, then, orelse):
            return free_vars(cond) | free_vars(then) | free_vars(orelse)
    raise TypeError(f"not an expression: {e!r}")


def fresh_name(base: str, avoid: frozenset[str] | set[str]) -> str:
    """A variant of ``base`` not in ``avoid``, staying in the identifier class."""
    if base not in avoid:
        return base
    root = base.rstrip("0123456789_") or base
    i = 1
    while True:
        candidate = f"{root}_{i}"
        if candidate not in avoid:
            return candidate
        i += 1


def substitute(e: Expr, x: str, v: Expr) -> Expr:
    """Capture-avoiding substitution ``e{x := v}``.

    Binders that would capture a free variable of ``v`` are renamed to a
    fresh identifier first.  The evaluator only ever substitutes values, but
    the function is defined for arbitrary ``v``.
    """
    fv_v = free_vars(v)

    def go(e: Expr) -> Expr:
        match e:
            case Num() | Builtin():
                return e
            case Var(name):
                return v if name == x else e
            case Array(items):
                return Array(tuple(go(it) for it in items))
            case Tup(items):
                return Tup(tuple(go(it) for it in items))
            case Index(target, index):
                return Index(go(target), go(index))
            case App(fun, arg):
                return App(go(fun), go(arg))
            case If(cond, then, orelse):
                return If(go(cond), go(then), go(orelse))
            case Lam(param, body):
                if param == x or x not in free_vars(body):
                    return e
                if param in fv_v:
                    renamed = fresh_name(param, fv_v | free_vars(body) | {x})
                    body = substitute(body, param, Var(renamed))
                    param = renamed
                return Lam(param, go(body))
        raise TypeError(f"not an expression: {e!r}")

    return go(e)


def alpha_equal(a: Expr, b: Expr) -> bool:
    """Structural equality up to renaming of bound variables."""

    def go(a: Expr, b: Expr, env_a: dict[str, int], env_b: dict[str, int], depth: int) -> bool:
        match a, b:
            case Num(x), Num(y):
                return x == y
            case Builtin(x), Builtin(y):
                return x == y
            case Var(x), Var(y):
                ia, ib = env_a.get(x), env_b.get(y)
                return (x == y) if ia is None and ib is None else ia == ib
            case (Array(xs), Array(ys)) | (Tup(xs), Tup(ys)):
                return len(xs) == len(ys) and all(
                    go(p, q, env_a, env_b, depth) for p, q in zip(xs, ys)
                )
            case Index(t1, i1), Index(t2, i2):
                return go(t1, t2, env_a, env_b, depth) and go(i1, i2, env_a, env_b, depth)
            case App(f1, a1), App(f2, a2):
                return go(f1, f2, env_a, env_b, depth) and go(a1, a2, env_a, env_b, depth)
            case If(c1, t1, e1), If(c2, t2, e2):
                return (
                    go(c1, c2, env_a, env_b, depth)
                    and go(t1, t2, env_a, env_b, depth)
                    and go(e1, e2, env_a, env_b, depth)
                )
            case Lam(p1, b1), Lam(p2, b2):
                return go(b1, b2, {**env_a, p1: depth}, {**env_b, p2: depth}, depth + 1)
            case _:
                return False

    return go(a, b, {}, {}, 0)
