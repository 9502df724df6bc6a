"""Concrete mini-syntax: parser, scope checker, and pretty-printer.

The surface syntax follows the usual Core Erlang look:

    letrec 'mm'/2 = fun(F, E) ->
        case E of [H|T] then [apply F(H) | apply 'mm'/2(F, T)] else [] end
      in apply 'mm'/2(fun(X) -> call '+'(X, 1), [0, 1, 2])

Integers, quoted atoms, ``#k`` pids, capitalised variables, ``[...]``
lists (with ``|`` tails), ``fun``/``let``/``letrec``/``apply``/``call``/
``case``/``receive``.  ``fun`` bodies extend as far as possible and take
no closing ``end`` (``case`` and ``receive`` do).  List syntax always
parses to cons *expressions*; printing is stable under re-parsing.

The parser rejects unbound variables and function identifiers, so every
function value produced by evaluating a parsed program is closed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .terms import (
    Apply,
    Atom,
    Call,
    Case,
    Cons,
    ConsE,
    Expr,
    Fun,
    FunId,
    FunRef,
    Int,
    Let,
    Letrec,
    Lit,
    NIL,
    Nil,
    PAtom,
    PCons,
    PInt,
    PNil,
    PPid,
    PVar,
    Pattern,
    Pid,
    Receive,
    Value,
    Var,
)


class ParseError(Exception):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col


class ScopeError(ParseError):
    pass


KEYWORDS = {
    "let",
    "in",
    "letrec",
    "apply",
    "call",
    "case",
    "of",
    "then",
    "else",
    "end",
    "fun",
    "receive",
}

_PUNCT = ("->", "(", ")", "[", "]", ",", "|", ";", "=", "/")


@dataclass(frozen=True)
class Token:
    kind: str  # int | atom | pid | var | keyword | punct | eof
    text: str
    line: int
    col: int


def _tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    i, line, col = 0, 1, 1
    n = len(source)

    def error(msg: str) -> ParseError:
        return ParseError(msg, line, col)

    while i < n:
        ch = source[i]
        if ch == "\n":
            i, line, col = i + 1, line + 1, 1
            continue
        if ch in " \t\r":
            i, col = i + 1, col + 1
            continue
        if ch == "%":
            while i < n and source[i] != "\n":
                i += 1
            continue
        start_line, start_col = line, col
        if ch.isdigit() or (ch == "-" and i + 1 < n and source[i + 1].isdigit()):
            j = i + 1
            while j < n and source[j].isdigit():
                j += 1
            tokens.append(Token("int", source[i:j], start_line, start_col))
            col += j - i
            i = j
            continue
        if ch == "'":
            j = i + 1
            buf = []
            while j < n and source[j] != "'":
                if source[j] == "\\" and j + 1 < n:
                    buf.append(source[j + 1])
                    j += 2
                else:
                    buf.append(source[j])
                    j += 1
            if j >= n:
                raise error("unterminated atom")
            tokens.append(Token("atom", "".join(buf), start_line, start_col))
            col += j + 1 - i
            i = j + 1
            continue
        if ch == "#":
            j = i + 1
            while j < n and source[j].isdigit():
                j += 1
            if j == i + 1:
                raise error("expected digits after '#'")
            tokens.append(Token("pid", source[i + 1 : j], start_line, start_col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i + 1
            while j < n and (source[j].isalnum() or source[j] in "_@"):
                j += 1
            word = source[i:j]
            if word in KEYWORDS:
                tokens.append(Token("keyword", word, start_line, start_col))
            elif word[0].isupper() or word[0] == "_":
                tokens.append(Token("var", word, start_line, start_col))
            else:
                raise error(f"unexpected word {word!r} (atoms are quoted: '{word}')")
            col += j - i
            i = j
            continue
        matched = None
        for punct in _PUNCT:
            if source.startswith(punct, i):
                matched = punct
                break
        if matched is None:
            raise error(f"unexpected character {ch!r}")
        tokens.append(Token("punct", matched, start_line, start_col))
        col += len(matched)
        i += len(matched)
    tokens.append(Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, source: str):
        self.tokens = _tokenize(source)
        self.pos = 0
        self.anon_count = 0

    # -- token helpers ------------------------------------------------

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def at_punct(self, text: str) -> bool:
        tok = self.peek()
        return tok.kind == "punct" and tok.text == text

    def at_keyword(self, text: str) -> bool:
        tok = self.peek()
        return tok.kind == "keyword" and tok.text == text

    def expect_punct(self, text: str) -> Token:
        tok = self.next()
        if tok.kind != "punct" or tok.text != text:
            raise ParseError(f"expected {text!r}, found {tok.text or 'end of input'!r}", tok.line, tok.col)
        return tok

    def expect_keyword(self, text: str) -> Token:
        tok = self.next()
        if tok.kind != "keyword" or tok.text != text:
            raise ParseError(f"expected {text!r}, found {tok.text or 'end of input'!r}", tok.line, tok.col)
        return tok

    # -- expressions ---------------------------------------------------

    def parse_expr(self) -> Expr:
        tok = self.peek()
        if tok.kind == "keyword":
            if tok.text == "let":
                return self._let()
            if tok.text == "letrec":
                return self._letrec()
            if tok.text == "apply":
                return self._apply_or_call(Apply)
            if tok.text == "call":
                return self._apply_or_call(Call)
            if tok.text == "case":
                return self._case()
            if tok.text == "receive":
                return self._receive()
            if tok.text == "fun":
                return Lit(self._fun())
            raise ParseError(f"unexpected keyword {tok.text!r}", tok.line, tok.col)
        if tok.kind == "int":
            self.next()
            return Lit(Int(int(tok.text)))
        if tok.kind == "pid":
            self.next()
            return Lit(Pid(int(tok.text)))
        if tok.kind == "var":
            self.next()
            return Var(tok.text)
        if tok.kind == "atom":
            self.next()
            if self.at_punct("/"):
                self.next()
                arity = self._int_token("function arity")
                return FunRef(FunId(tok.text, arity))
            return Lit(Atom(tok.text))
        if tok.kind == "punct" and tok.text == "[":
            return self._list()
        raise ParseError(f"unexpected token {tok.text or 'end of input'!r}", tok.line, tok.col)

    def _int_token(self, what: str) -> int:
        tok = self.next()
        if tok.kind != "int":
            raise ParseError(f"expected {what}", tok.line, tok.col)
        return int(tok.text)

    def _let(self) -> Expr:
        self.expect_keyword("let")
        var = self._var_token()
        self.expect_punct("=")
        bound = self.parse_expr()
        self.expect_keyword("in")
        body = self.parse_expr()
        return Let(var, bound, body)

    def _var_token(self) -> str:
        tok = self.next()
        if tok.kind != "var":
            raise ParseError("expected a variable", tok.line, tok.col)
        return tok.text

    def _fun_id(self) -> FunId:
        tok = self.next()
        if tok.kind != "atom":
            raise ParseError("expected a quoted function name", tok.line, tok.col)
        self.expect_punct("/")
        arity = self._int_token("function arity")
        return FunId(tok.text, arity)

    def _letrec(self) -> Expr:
        self.expect_keyword("letrec")
        fid = self._fun_id()
        self.expect_punct("=")
        tok = self.expect_keyword("fun")
        params = self._params()
        if len(params) != fid.arity:
            raise ParseError(
                f"letrec {fid.name}/{fid.arity} binds {len(params)} parameters", tok.line, tok.col
            )
        self.expect_punct("->")
        fun_body = self.parse_expr()
        self.expect_keyword("in")
        body = self.parse_expr()
        return Letrec(fid, params, fun_body, body)

    def _params(self) -> tuple[str, ...]:
        self.expect_punct("(")
        params: list[str] = []
        if not self.at_punct(")"):
            params.append(self._var_token())
            while self.at_punct(","):
                self.next()
                params.append(self._var_token())
        tok = self.expect_punct(")")
        if len(set(params)) != len(params):
            raise ParseError("duplicate parameter name", tok.line, tok.col)
        return tuple(params)

    def _fun(self) -> Fun:
        self.expect_keyword("fun")
        if self.peek().kind == "atom":
            fid = self._fun_id()
        else:
            fid = None
        start = self.peek()
        params = self._params()
        if fid is None:
            fid = FunId(f"@fun{self.anon_count}", len(params))
            self.anon_count += 1
        elif fid.arity != len(params):
            raise ParseError(
                f"fun {fid.name}/{fid.arity} binds {len(params)} parameters",
                start.line,
                start.col,
            )
        self.expect_punct("->")
        body = self.parse_expr()
        return Fun(fid, params, body)

    def _apply_or_call(self, ctor) -> Expr:
        self.next()  # apply | call
        fn = self.parse_expr()
        self.expect_punct("(")
        args: list[Expr] = []
        if not self.at_punct(")"):
            args.append(self.parse_expr())
            while self.at_punct(","):
                self.next()
                args.append(self.parse_expr())
        self.expect_punct(")")
        return ctor(fn, tuple(args))

    def _case(self) -> Expr:
        self.expect_keyword("case")
        scrutinee = self.parse_expr()
        self.expect_keyword("of")
        pattern = self.parse_pattern()
        self.expect_keyword("then")
        then_branch = self.parse_expr()
        self.expect_keyword("else")
        else_branch = self.parse_expr()
        self.expect_keyword("end")
        return Case(scrutinee, pattern, then_branch, else_branch)

    def _receive(self) -> Expr:
        self.expect_keyword("receive")
        clauses: list[tuple[Pattern, Expr]] = []
        while True:
            pattern = self.parse_pattern()
            self.expect_punct("->")
            body = self.parse_expr()
            clauses.append((pattern, body))
            if self.at_punct(";"):
                self.next()
                continue
            break
        self.expect_keyword("end")
        return Receive(tuple(clauses))

    def _list(self) -> Expr:
        self.expect_punct("[")
        if self.at_punct("]"):
            self.next()
            return Lit(NIL)
        items = [self.parse_expr()]
        while self.at_punct(","):
            self.next()
            items.append(self.parse_expr())
        tail: Expr = Lit(NIL)
        if self.at_punct("|"):
            self.next()
            tail = self.parse_expr()
        self.expect_punct("]")
        for item in reversed(items):
            tail = ConsE(item, tail)
        return tail

    # -- patterns ------------------------------------------------------

    def parse_pattern(self) -> Pattern:
        start = self.peek()
        try:
            pattern = self._pattern_inner()
        except ValueError as err:  # linearity is enforced at construction
            raise ParseError(str(err), start.line, start.col) from None
        seen: set[str] = set()
        for name in _pattern_var_list(pattern):
            if name in seen:
                raise ParseError(
                    f"non-linear pattern: variable {name} repeats", start.line, start.col
                )
            seen.add(name)
        return pattern

    def _pattern_inner(self) -> Pattern:
        tok = self.peek()
        if tok.kind == "int":
            self.next()
            return PInt(int(tok.text))
        if tok.kind == "atom":
            self.next()
            return PAtom(tok.text)
        if tok.kind == "pid":
            self.next()
            return PPid(int(tok.text))
        if tok.kind == "var":
            self.next()
            return PVar(tok.text)
        if tok.kind == "punct" and tok.text == "[":
            self.next()
            if self.at_punct("]"):
                self.next()
                return PNil()
            items = [self._pattern_inner()]
            while self.at_punct(","):
                self.next()
                items.append(self._pattern_inner())
            tail: Pattern = PNil()
            if self.at_punct("|"):
                self.next()
                tail = self._pattern_inner()
            self.expect_punct("]")
            for item in reversed(items):
                tail = PCons(item, tail)
            return tail
        raise ParseError(f"expected a pattern, found {tok.text!r}", tok.line, tok.col)


def _pattern_var_list(p: Pattern) -> list[str]:
    match p:
        case PVar(name):
            return [name]
        case PCons(head, tail):
            return _pattern_var_list(head) + _pattern_var_list(tail)
        case _:
            return []


# ---------------------------------------------------------------------------
# Scope checking
# ---------------------------------------------------------------------------


def check_scope(expr: Expr, bound: Optional[set] = None) -> None:
    """Raise ScopeError when a variable or function identifier is unbound."""
    scope: set = bound if bound is not None else set()
    _scope(expr, scope)


def _scope(expr: Expr, scope: set) -> None:
    match expr:
        case Lit(Fun(fid, params, body)):
            _scope(body, scope | {fid, *params})
        case Lit(_):
            pass
        case Var(name):
            if name not in scope:
                raise ScopeError(f"unbound variable {name}", 0, 0)
        case FunRef(fid):
            if fid not in scope:
                raise ScopeError(f"unbound function identifier {fid.name}/{fid.arity}", 0, 0)
        case Apply(fn, args) | Call(fn, args):
            _scope(fn, scope)
            for arg in args:
                _scope(arg, scope)
        case Case(scrutinee, pattern, then_branch, else_branch):
            _scope(scrutinee, scope)
            _scope(then_branch, scope | set(_pattern_var_list(pattern)))
            _scope(else_branch, scope)
        case Let(var, bound_e, body):
            _scope(bound_e, scope)
            _scope(body, scope | {var})
        case ConsE(head, tail):
            _scope(head, scope)
            _scope(tail, scope)
        case Letrec(fid, params, fun_body, body):
            _scope(fun_body, scope | {fid, *params})
            _scope(body, scope | {fid})
        case Receive(clauses):
            for pattern, body in clauses:
                _scope(body, scope | set(_pattern_var_list(pattern)))


def parse_expr(source: str, scope_check: bool = True) -> Expr:
    parser = _Parser(source)
    expr = parser.parse_expr()
    tok = parser.peek()
    if tok.kind != "eof":
        raise ParseError(f"trailing input starting at {tok.text!r}", tok.line, tok.col)
    if scope_check:
        check_scope(expr)
    return expr


def parse_value(source: str) -> Value:
    """Parse a value literal (integers, atoms, pids, lists of values, funs)."""
    expr = parse_expr(source, scope_check=True)
    return expr_to_value(expr)


def expr_to_value(expr: Expr) -> Value:
    match expr:
        case Lit(v):
            return v
        case ConsE(head, tail):
            return Cons(expr_to_value(head), expr_to_value(tail))
        case _:
            raise ValueError(f"not a value literal: {print_expr(expr)}")


# ---------------------------------------------------------------------------
# Pretty-printing
# ---------------------------------------------------------------------------


def _atom_text(name: str) -> str:
    escaped = name.replace("\\", "\\\\").replace("'", "\\'")
    return f"'{escaped}'"


def print_value(v: Value) -> str:
    match v:
        case Int(n):
            return str(n)
        case Atom(name):
            return _atom_text(name)
        case Pid(i):
            return f"#{i}"
        case Nil():
            return "[]"
        case Cons(_, _):
            return _print_value_cons(v)
        case Fun(fid, params, body):
            return f"fun {_atom_text(fid.name)}/{fid.arity}({', '.join(params)}) -> {print_expr(body)}"
    raise TypeError(f"not a value: {v!r}")


def _print_value_cons(v: Value) -> str:
    items = []
    while isinstance(v, Cons):
        items.append(print_value(v.head))
        v = v.tail
    if isinstance(v, Nil):
        return f"[{', '.join(items)}]"
    return f"[{', '.join(items)}|{print_value(v)}]"


def _print_expr_cons(e: Expr) -> str:
    # Flatten literal list values embedded in cons expressions so the
    # printed form is stable under parse-then-print.
    items = []
    while True:
        if isinstance(e, ConsE):
            items.append(print_expr(e.head))
            e = e.tail
        elif isinstance(e, Lit) and isinstance(e.value, Cons):
            items.append(print_value(e.value.head))
            e = Lit(e.value.tail)
        else:
            break
    if isinstance(e, Lit) and isinstance(e.value, Nil):
        return f"[{', '.join(items)}]"
    return f"[{', '.join(items)}|{print_expr(e)}]"


def print_pattern(p: Pattern) -> str:
    match p:
        case PInt(n):
            return str(n)
        case PAtom(name):
            return _atom_text(name)
        case PPid(i):
            return f"#{i}"
        case PNil():
            return "[]"
        case PVar(name):
            return name
        case PCons(_, _):
            items = []
            while isinstance(p, PCons):
                items.append(print_pattern(p.head))
                p = p.tail
            if isinstance(p, PNil):
                return f"[{', '.join(items)}]"
            return f"[{', '.join(items)}|{print_pattern(p)}]"
    raise TypeError(f"not a pattern: {p!r}")


def print_expr(e: Expr) -> str:
    match e:
        case Lit(v):
            return print_value(v)
        case Var(name):
            return name
        case FunRef(fid):
            return f"{_atom_text(fid.name)}/{fid.arity}"
        case Apply(fn, args):
            return f"apply {print_expr(fn)}({', '.join(print_expr(a) for a in args)})"
        case Call(fn, args):
            return f"call {print_expr(fn)}({', '.join(print_expr(a) for a in args)})"
        case Case(scrutinee, pattern, then_branch, else_branch):
            return (
                f"case {print_expr(scrutinee)} of {print_pattern(pattern)}"
                f" then {print_expr(then_branch)} else {print_expr(else_branch)} end"
            )
        case Let(var, bound, body):
            return f"let {var} = {print_expr(bound)} in {print_expr(body)}"
        case ConsE(_, _):
            return _print_expr_cons(e)
        case Letrec(fid, params, fun_body, body):
            return (
                f"letrec {_atom_text(fid.name)}/{fid.arity} = fun({', '.join(params)})"
                f" -> {print_expr(fun_body)} in {print_expr(body)}"
            )
        case Receive(clauses):
            rendered = "; ".join(
                f"{print_pattern(p)} -> {print_expr(b)}" for p, b in clauses
            )
            return f"receive {rendered} end"
    raise TypeError(f"not an expression: {e!r}")
