from itertools import product

import pytest

from chsh_games import boolfn
from chsh_games.boolfn import TruthTable
from chsh_games.errors import ArityError, ExpressionSyntaxError, UnknownVariableError

XYZ = boolfn.QUESTION_VARS[:3]


def test_bit_order_variable_one_is_msb():
    assert boolfn.assignment_index((1, 0, 0)) == 4
    assert boolfn.index_bits(4, 3) == (1, 0, 0)
    assert boolfn.variable(2, 0).bits == 0b1100


def test_evaluate_and():
    tt = boolfn.parse_expr("x*y")
    assert tt == TruthTable(2, 0b1000)
    assert boolfn.evaluate(tt, (1, 1)) == 1
    assert boolfn.evaluate(tt, (0, 1)) == 0


def test_evaluate_constant_zero():
    assert boolfn.evaluate(boolfn.constant(3, 0), (1, 0, 1)) == 0


def test_evaluate_rejects_wrong_length():
    with pytest.raises(ArityError):
        boolfn.evaluate(boolfn.parity(3), (1, 0))


def test_bits_out_of_range():
    with pytest.raises(ArityError):
        TruthTable(2, 1 << 4)
    with pytest.raises(ArityError):
        TruthTable(5, 0)


def test_essential_variables():
    and2 = boolfn.parse_expr("x*y")
    assert boolfn.is_essential(and2, 0)
    only_x = boolfn.parse_expr("x", arity=2)
    assert not boolfn.is_essential(only_x, 1)
    assert boolfn.all_essential(boolfn.parity(3))


@pytest.mark.parametrize("n,expected", [(1, 2), (2, 10), (3, 218)])
def test_essential_counts(n, expected):
    funcs = boolfn.enumerate_essential(n)
    assert len(funcs) == expected
    assert [f.bits for f in funcs] == sorted(f.bits for f in funcs)


@pytest.mark.parametrize("n", [2, 3])
def test_essential_count_matches_inclusion_exclusion(n):
    # functions ignoring a given set of k variables: 2^(2^(n-k))
    missing = 0
    for k in range(1, n + 1):
        sign = 1 if k % 2 else -1
        ways = 1
        for j in range(k):
            ways = ways * (n - j) // (j + 1)
        missing += sign * ways * 2 ** (2 ** (n - k))
    assert len(boolfn.enumerate_essential(n)) == 2 ** (2**n) - missing


def test_negation_preserves_essentiality():
    for bits in range(256):
        tt = TruthTable(3, bits)
        assert boolfn.all_essential(boolfn.negate(tt)) == boolfn.all_essential(tt)
        for var in range(3):
            flipped = boolfn.negate_variable(tt, var)
            assert boolfn.all_essential(flipped) == boolfn.all_essential(tt)
            assert boolfn.negate_variable(flipped, var) == tt


def test_negate_is_nand():
    xyz = boolfn.parse_expr("x*y*z")
    assert boolfn.negate(xyz).bits == 0xFF ^ (1 << 7)
    assert boolfn.negate(boolfn.negate(xyz)) == xyz


def test_negate_variable_substitutes():
    xyz = boolfn.parse_expr("x*y*z")
    assert boolfn.negate_variable(xyz, 0) == boolfn.parse_expr("!x*y*z")


def test_parse_first_type_function():
    tt = boolfn.parse_expr("x*y*z + !x*!y*!z")
    assert tt == TruthTable(3, (1 << 0) | (1 << 7))


def test_parse_answer_parity():
    assert boolfn.parse_expr("a^b^c") == boolfn.parity(3)


def test_precedence_and_binds_tighter_than_xor_and_or():
    assert boolfn.parse_expr("x^y*z") == boolfn.parse_expr("x^(y*z)")
    assert boolfn.parse_expr("x + y^z") == boolfn.parse_expr("x + (y^z)")
    assert boolfn.parse_expr("!x*y") == boolfn.parse_expr("(!x)*y")


def test_parse_constants():
    assert boolfn.parse_expr("1", variables=XYZ) == boolfn.constant(3, 1)
    assert boolfn.parse_expr("x*0 + 0", variables=XYZ) == boolfn.constant(3, 0)


def test_round_trip_every_function_of_three_variables():
    for bits in range(256):
        tt = TruthTable(3, bits)
        assert boolfn.parse_expr(boolfn.format_expr(tt), variables=XYZ) == tt


def test_syntax_error_reports_position():
    with pytest.raises(ExpressionSyntaxError) as exc:
        boolfn.parse_expr("x * * y", arity=2)
    assert exc.value.position == 4


def test_unbalanced_parenthesis():
    with pytest.raises(ExpressionSyntaxError):
        boolfn.parse_expr("(x*y", arity=2)


def test_juxtaposition_is_rejected():
    with pytest.raises(ExpressionSyntaxError):
        boolfn.parse_expr("x y", arity=2)


def test_unknown_variable():
    with pytest.raises(UnknownVariableError):
        boolfn.parse_expr("x*q", variables=("x", "y"))


def test_bad_character():
    with pytest.raises(ExpressionSyntaxError):
        boolfn.parse_expr("x & y", arity=2)


def test_format_uses_minterms():
    assert boolfn.format_expr(boolfn.parse_expr("x*y")) == "x*y"
    assert boolfn.format_expr(boolfn.parity(2), ("a", "b")) == "!a*b + a*!b"


def test_evaluate_matches_expression_semantics():
    tt = boolfn.parse_expr("x*y + (x^y)*z")
    for x, y, z in product((0, 1), repeat=3):
        majority = 1 if x + y + z >= 2 else 0
        assert boolfn.evaluate(tt, (x, y, z)) == majority
