"""Object-language terms: values, patterns, expressions, and substitution.

The language is a small concurrent Core Erlang subset.  Values are
arbitrary-precision integers, atoms, process identifiers, (possibly
improper) cons lists and named functions.  Evaluation is entirely
substitution based: there are no environments, so a function value is
expected to be closed apart from its own parameters and identifier.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Union

# ---------------------------------------------------------------------------
# Values
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Int:
    n: int


@dataclass(frozen=True)
class Atom:
    name: str

    def __post_init__(self) -> None:
        if not self.name:
            raise ValueError("atom name must be non-empty")


@dataclass(frozen=True)
class Pid:
    id: int

    def __post_init__(self) -> None:
        if self.id < 0:
            raise ValueError("pid must be a natural number")


@dataclass(frozen=True)
class Nil:
    pass


@dataclass(frozen=True)
class FunId:
    name: str
    arity: int

    def __post_init__(self) -> None:
        if self.arity < 0:
            raise ValueError("arity must be >= 0")


@dataclass(frozen=True)
class Cons:
    head: "Value"
    tail: "Value"


@dataclass(frozen=True)
class Fun:
    """A named function value.

    ``id`` doubles as the self-reference binder: applying the function
    substitutes the function value for ``id`` in the body, which is how
    recursion works without environments.
    """

    id: FunId
    params: tuple[str, ...]
    body: "Expr"

    def __post_init__(self) -> None:
        if len(self.params) != self.id.arity:
            raise ValueError(
                f"function {self.id.name}/{self.id.arity} has {len(self.params)} parameters"
            )
        if len(set(self.params)) != len(self.params):
            raise ValueError("function parameters must be distinct")


Value = Union[Int, Atom, Pid, Nil, Cons, Fun]

NIL = Nil()

# Atoms with built-in meaning.
A_TRUE = Atom("true")
A_FALSE = Atom("false")
A_OK = Atom("ok")
A_NORMAL = Atom("normal")
A_KILL = Atom("kill")
A_KILLED = Atom("killed")
A_EXIT = Atom("EXIT")
A_TRAP_EXIT = Atom("trap_exit")
A_PLUS = Atom("+")
A_SELF = Atom("self")


def cons_list(*items: Value, tail: Value = NIL) -> Value:
    """Build a (proper, unless ``tail`` says otherwise) list value."""
    out = tail
    for item in reversed(items):
        out = Cons(item, out)
    return out


# ---------------------------------------------------------------------------
# Patterns
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PInt:
    n: int


@dataclass(frozen=True)
class PAtom:
    name: str


@dataclass(frozen=True)
class PPid:
    id: int


@dataclass(frozen=True)
class PNil:
    pass


@dataclass(frozen=True)
class PVar:
    name: str


@dataclass(frozen=True)
class PCons:
    head: "Pattern"
    tail: "Pattern"

    def __post_init__(self) -> None:
        seen: set[str] = set()
        for name in pattern_vars(self):
            if name in seen:
                raise ValueError(f"non-linear pattern: variable {name} repeats")
            seen.add(name)


Pattern = Union[PInt, PAtom, PPid, PNil, PVar, PCons]

P_NIL = PNil()


def pattern_vars(p: Pattern) -> tuple[str, ...]:
    """Variables of a pattern, in left-to-right order."""
    match p:
        case PVar(name):
            return (name,)
        case PCons(head, tail):
            return pattern_vars(head) + pattern_vars(tail)
        case _:
            return ()


# ---------------------------------------------------------------------------
# Expressions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Lit:
    value: Value


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class FunRef:
    id: FunId


@dataclass(frozen=True)
class Apply:
    fn: "Expr"
    args: tuple["Expr", ...]


@dataclass(frozen=True)
class Call:
    fn: "Expr"
    args: tuple["Expr", ...]


@dataclass(frozen=True)
class Case:
    """Two-branch pattern match; the else branch binds nothing."""

    scrutinee: "Expr"
    pattern: Pattern
    then_branch: "Expr"
    else_branch: "Expr"


@dataclass(frozen=True)
class Let:
    var: str
    bound: "Expr"
    body: "Expr"


@dataclass(frozen=True)
class ConsE:
    head: "Expr"
    tail: "Expr"


@dataclass(frozen=True)
class Letrec:
    id: FunId
    params: tuple[str, ...]
    fun_body: "Expr"
    body: "Expr"

    def __post_init__(self) -> None:
        if len(self.params) != self.id.arity:
            raise ValueError(
                f"letrec {self.id.name}/{self.id.arity} binds {len(self.params)} parameters"
            )
        if len(set(self.params)) != len(self.params):
            raise ValueError("letrec parameters must be distinct")


@dataclass(frozen=True)
class Receive:
    clauses: tuple[tuple[Pattern, "Expr"], ...]

    def __post_init__(self) -> None:
        if not self.clauses:
            raise ValueError("receive needs at least one clause")


Expr = Union[Lit, Var, FunRef, Apply, Call, Case, Let, ConsE, Letrec, Receive]

# Bindings map variable names and function identifiers to values.
Bindings = dict[Union[str, FunId], Value]


# ---------------------------------------------------------------------------
# Substitution
# ---------------------------------------------------------------------------


def _without(b: Bindings, keys: Iterable[Union[str, FunId]]) -> Bindings:
    dropped = set(keys)
    if not dropped & b.keys():
        return b
    return {k: v for k, v in b.items() if k not in dropped}


def subst(e: Expr, b: Bindings) -> Expr:
    """Simultaneously replace variables and function identifiers by values.

    Binders (let variables, function parameters and identifiers, pattern
    variables) shadow outer bindings in their scope.  Substitution is
    capture avoiding because the replacement terms are values: a value
    is closed except for function bodies, whose free names are exactly
    the function's own parameters and identifier, and those are shadowed
    on entry.
    """
    if not b:
        return e
    match e:
        case Lit(v):
            v2 = subst_value(v, b)
            return e if v2 is v else Lit(v2)
        case Var(name):
            hit = b.get(name)
            return Lit(hit) if hit is not None else e
        case FunRef(fid):
            hit = b.get(fid)
            return Lit(hit) if hit is not None else e
        case Apply(fn, args):
            return Apply(subst(fn, b), tuple(subst(a, b) for a in args))
        case Call(fn, args):
            return Call(subst(fn, b), tuple(subst(a, b) for a in args))
        case Case(scrut, pat, then_e, else_e):
            inner = _without(b, pattern_vars(pat))
            return Case(subst(scrut, b), pat, subst(then_e, inner), subst(else_e, b))
        case Let(var, bound, body):
            return Let(var, subst(bound, b), subst(body, _without(b, [var])))
        case ConsE(head, tail):
            return ConsE(subst(head, b), subst(tail, b))
        case Letrec(fid, params, fun_body, body):
            inner_fun = _without(b, [fid, *params])
            inner_body = _without(b, [fid])
            return Letrec(fid, params, subst(fun_body, inner_fun), subst(body, inner_body))
        case Receive(clauses):
            return Receive(
                tuple(
                    (pat, subst(body, _without(b, pattern_vars(pat))))
                    for pat, body in clauses
                )
            )
    raise TypeError(f"not an expression: {e!r}")


def subst_value(v: Value, b: Bindings) -> Value:
    """Descend into composite values; only function bodies can mention names."""
    match v:
        case Cons(head, tail):
            h2, t2 = subst_value(head, b), subst_value(tail, b)
            return v if h2 is head and t2 is tail else Cons(h2, t2)
        case Fun(fid, params, body):
            inner = _without(b, [fid, *params])
            body2 = subst(body, inner)
            return v if body2 is body else Fun(fid, params, body2)
        case _:
            return v


# ---------------------------------------------------------------------------
# Pattern matching
# ---------------------------------------------------------------------------


def is_match(p: Pattern, v: Value) -> bool:
    """True iff ``v`` is built with the same constructors as ``p``, up to variables."""
    match p, v:
        case PVar(_), _:
            return True
        case PInt(n), Int(m):
            return n == m
        case PAtom(a), Atom(b_):
            return a == b_
        case PPid(i), Pid(j):
            return i == j
        case PNil(), Nil():
            return True
        case PCons(ph, pt), Cons(vh, vt):
            return is_match(ph, vh) and is_match(pt, vt)
        case _:
            return False


def match_bind(p: Pattern, v: Value) -> Bindings:
    """Bindings produced by a successful match; raises if the match fails."""
    out: Bindings = {}
    _match_into(p, v, out)
    return out


def _match_into(p: Pattern, v: Value, out: Bindings) -> None:
    match p, v:
        case PVar(name), _:
            out[name] = v
        case PInt(n), Int(m) if n == m:
            pass
        case PAtom(a), Atom(b_) if a == b_:
            pass
        case PPid(i), Pid(j) if i == j:
            pass
        case PNil(), Nil():
            pass
        case PCons(ph, pt), Cons(vh, vt):
            _match_into(ph, vh, out)
            _match_into(pt, vt, out)
        case _:
            raise ValueError(f"pattern does not match value: {p!r} vs {v!r}")


def pattern_to_value(p: Pattern, b: Bindings) -> Value:
    """Instantiate a pattern's variables from bindings (test oracle helper)."""
    match p:
        case PVar(name):
            return b[name]  # type: ignore[index]
        case PInt(n):
            return Int(n)
        case PAtom(a):
            return Atom(a)
        case PPid(i):
            return Pid(i)
        case PNil():
            return NIL
        case PCons(ph, pt):
            return Cons(pattern_to_value(ph, b), pattern_to_value(pt, b))
    raise TypeError(f"not a pattern: {p!r}")


# ---------------------------------------------------------------------------
# Conversion helpers shared across the semantics layers
# ---------------------------------------------------------------------------


def list_to_meta(v: Value) -> Optional[tuple[Value, ...]]:
    """Flatten a proper object-level list into a sequence; None otherwise."""
    items: list[Value] = []
    while True:
        match v:
            case Nil():
                return tuple(items)
            case Cons(head, tail):
                items.append(head)
                v = tail
            case _:
                return None


def bool_to_atom(b: bool) -> Atom:
    return A_TRUE if b else A_FALSE


def atom_to_bool(v: Value) -> Optional[bool]:
    match v:
        case Atom("true"):
            return True
        case Atom("false"):
            return False
        case _:
            return None


def pop_first(x: object, seq: tuple) -> tuple:
    """Remove the first occurrence of ``x`` (all occurrences stay otherwise)."""
    for i, item in enumerate(seq):
        if item == x:
            return seq[:i] + seq[i + 1 :]
    return seq


def remove_all(x: object, seq: tuple) -> tuple:
    return tuple(item for item in seq if item != x)
