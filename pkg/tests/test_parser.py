import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cerlsim.generators import random_seq_expr
from cerlsim.parser import (
    ParseError,
    ScopeError,
    check_scope,
    expr_to_value,
    parse_expr,
    parse_value,
    print_expr,
    print_pattern,
    print_value,
)
from cerlsim.terms import (
    Apply,
    Atom,
    Call,
    Cons,
    ConsE,
    Fun,
    FunId,
    FunRef,
    Int,
    Let,
    Letrec,
    Lit,
    NIL,
    PCons,
    PVar,
    Pid,
    Receive,
    Var,
    cons_list,
)

from .strategies import closed_exprs

MM_SOURCE = """
letrec 'mm'/2 =
  fun(F, E) ->
    case E of [H|T]
      then [ apply F(H) | apply 'mm'/2(F, T) ]
      else []
    end
  in apply 'mm'/2(fun(X) -> call '+'(X, 1), [0, 1, 2])
"""


class TestParsing:
    def test_mm_source_round_trips(self):
        ast = parse_expr(MM_SOURCE)
        printed = print_expr(ast)
        assert parse_expr(printed) == ast
        assert print_expr(parse_expr(printed)) == printed

    def test_improper_list(self):
        assert parse_expr("[1|2]") == ConsE(Lit(Int(1)), Lit(Int(2)))

    def test_list_sugar_with_tail(self):
        assert parse_expr("[1, 2|X]", scope_check=False) == ConsE(
            Lit(Int(1)), ConsE(Lit(Int(2)), Var("X"))
        )

    def test_pid_literal(self):
        assert parse_expr("#3") == Lit(Pid(3))

    def test_atom_escapes(self):
        atom = Atom("it's \\ here")
        assert parse_value(print_value(atom)) == atom

    def test_funref(self):
        assert parse_expr("'f'/2", scope_check=False) == FunRef(FunId("f", 2))

    def test_receive_multiclause(self):
        src = "receive 'a' -> 1; X -> X end"
        ast = parse_expr(src)
        assert isinstance(ast, Receive)
        assert len(ast.clauses) == 2

    def test_case_binds_pattern_vars(self):
        ast = parse_expr("case [1] of [H|T] then H else 0 end")
        assert print_expr(ast) == "case [1] of [H|T] then H else 0 end"

    def test_anonymous_fun_gets_generated_id(self):
        ast = parse_expr("fun(X) -> X")
        assert ast == Lit(Fun(FunId("@fun0", 1), ("X",), Var("X")))

    def test_named_fun(self):
        ast = parse_expr("fun 'id'/1(X) -> X")
        assert ast == Lit(Fun(FunId("id", 1), ("X",), Var("X")))

    def test_comments_ignored(self):
        assert parse_expr("% hello\n 1 % trailing\n") == Lit(Int(1))

    def test_negative_integers(self):
        assert parse_expr("-5") == Lit(Int(-5))


class TestErrors:
    def test_unbound_variable_in_case_branch(self):
        with pytest.raises(ScopeError):
            parse_expr("case [] of [H|T] then X else [] end")

    def test_unbound_funref(self):
        with pytest.raises(ScopeError):
            parse_expr("apply 'nope'/0()")

    def test_nonlinear_pattern(self):
        with pytest.raises(ParseError):
            parse_expr("case [] of [X|X] then 1 else 2 end")

    def test_unquoted_atom_rejected(self):
        with pytest.raises(ParseError):
            parse_expr("hello")

    def test_trailing_input_rejected(self):
        with pytest.raises(ParseError):
            parse_expr("1 2")

    def test_positioned_error(self):
        with pytest.raises(ParseError) as info:
            parse_expr("let X = 1 in\n  case X of")
        assert info.value.line == 2

    def test_arity_mismatch_in_letrec(self):
        with pytest.raises(ParseError):
            parse_expr("letrec 'f'/2 = fun(X) -> X in 1")

    def test_fun_body_may_use_enclosing_binder(self):
        # Substitution reaches under fun literals, so a body referencing an
        # enclosing binder is closed by the time the value stands alone.
        ast = parse_expr("let Y = 1 in fun 'g'/0() -> Y")
        from cerlsim.sequential import Finished, seq_eval

        out = seq_eval((), ast, 10)
        assert out == Finished(Fun(FunId("g", 0), (), Lit(Int(1))))

    def test_unbound_variable_inside_fun_body(self):
        with pytest.raises(ScopeError):
            parse_expr("fun 'g'/0() -> Y")


class TestValues:
    def test_value_list_parses(self):
        v = parse_value("['EXIT', #1, 'killed']")
        assert v == cons_list(Atom("EXIT"), Pid(1), Atom("killed"))

    def test_non_value_rejected(self):
        with pytest.raises(ValueError):
            parse_value("let X = 1 in X")

    def test_fun_value_round_trip(self):
        v = parse_value("fun 'f'/1(X) -> call '+'(X, 1)")
        assert parse_value(print_value(v)) == v

    def test_improper_value_prints_with_bar(self):
        assert print_value(Cons(Int(1), Int(2))) == "[1|2]"
        assert print_value(cons_list(Int(1), Int(2), tail=Int(3))) == "[1, 2|3]"


class TestRoundTrips:
    @given(closed_exprs(depth=3))
    @settings(max_examples=150, deadline=None)
    def test_print_parse_print_stable(self, expr):
        printed = print_expr(expr)
        reparsed = parse_expr(printed, scope_check=False)
        assert print_expr(reparsed) == printed

    def test_parse_image_round_trip(self):
        rng = random.Random(17)
        for _ in range(150):
            printed = print_expr(random_seq_expr(rng, 3))
            ast = parse_expr(printed, scope_check=False)
            assert parse_expr(print_expr(ast), scope_check=False) == ast

    def test_mixed_literal_list_prints_flat(self):
        expr = ConsE(Lit(Int(1)), Lit(cons_list(Int(2), Int(3))))
        printed = print_expr(expr)
        assert printed == "[1, 2, 3]"
        assert print_expr(parse_expr(printed)) == printed


class TestFuzzing:
    @given(st.text(alphabet="abcXY019'#[]|,;()->=+ \n%\\/_", max_size=60))
    @settings(max_examples=300, deadline=None)
    def test_arbitrary_input_never_crashes(self, text):
        # Anything that is not a program must fail with a positioned
        # ParseError (or parse cleanly), never an internal exception.
        try:
            parse_expr(text)
        except ParseError:
            pass
