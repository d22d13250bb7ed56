import random

import pytest

from butfpi.epi.parse import ProcessParseError, parse_process
from butfpi.epi.pretty import pretty_process
from butfpi.epi.syntax import (
    Act,
    Bcast,
    Chan,
    Match,
    NameT,
    New,
    Nil,
    NumT,
    Recv,
    Send,
    VarT,
)
from generators import random_process


def test_spec_examples():
    assert parse_process("new a. a<1>") == New(
        "a", Act(Send(Chan(NameT("a")), (NumT(1),)), Nil()))
    p = parse_process("c:<v>")
    assert isinstance(p.action, Bcast)
    p = parse_process("h.len<3>")
    assert p.action == Send(Chan(NameT("h"), "len"), (NumT(3),))


def test_scope_resolution():
    # receive patterns bind variables; free identifiers are names
    p = parse_process("a(x). x<a>")
    assert p.action == Recv(Chan(NameT("a")), ("x",))
    assert p.cont.action.chan.base == VarT("x")
    assert p.cont.action.args == (NameT("a"),)


def test_new_scopes_over_one_seq():
    p = parse_process("new a. a<1> | b<2>")
    # restriction covers only the sequential process before the bar
    assert p.left == New("a", Act(Send(Chan(NameT("a")), (NumT(1),)), Nil()))


def test_suffixes():
    assert parse_process("h.0<0, 5>").action.chan.suffix == 0
    assert parse_process("h.-1<>").action.chan.suffix == -1
    assert parse_process("h.all(r)").action.chan.suffix == "all"
    p = parse_process("o(i). h.i(a, b)")
    assert p.cont.action.chan.suffix == VarT("i")


def test_match_forms():
    p = parse_process("[3 >= 0] t<>, e<>")
    assert isinstance(p, Match) and p.op == ">="
    p = parse_process("[x == 1] t<>")
    assert p.op == "=" and p.orelse == Nil()


def test_wildcards():
    p = parse_process("c(_, x)")
    assert p.action.params == (None, "x")


def test_errors_have_positions():
    with pytest.raises(ProcessParseError) as exc:
        parse_process("new . P")
    assert exc.value.line == 1
    with pytest.raises(ProcessParseError):
        parse_process("a<1> | ")
    with pytest.raises(ProcessParseError):
        parse_process("[a b] P, Q")


def test_round_trip_seeded_fuzz():
    rng = random.Random(42)
    for _ in range(500):
        p = random_process(rng, depth=4)
        text = pretty_process(p)
        assert parse_process(text) == p, text


def test_round_trip_translations():
    from butfpi.butf.parse import parse
    from butfpi.translate import translate
    for src in ("(\\x. x) 5", "map ((\\x. x + 1), iota 3)", "[1, (2, 3)]",
                "size [1, 2]", "(map ((\\x. x), [1]))[0]"):
        p = translate(parse(src))
        assert parse_process(pretty_process(p)) == p
