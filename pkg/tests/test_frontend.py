import random
from fractions import Fraction

import pytest

from parachern.bundles import cover_order
from parachern.frontend import (
    BundleDecl,
    CommandDecl,
    ElaborationError,
    ParabolicDecl,
    ParseError,
    VarietyDecl,
    elaborate,
    format_program,
    parse_program,
)
from parachern.scenegen import random_scene_text

WORKED = (
    "variety X dim 2; divisor D1; "
    "parabolic E = O{D1:1/3} (+) O{D1:2/3}; compute chern E;"
)


# --- parsing -----------------------------------------------------------------


def test_parse_single_line_program():
    ast = parse_program(WORKED)
    assert len(ast.statements) == 4
    assert isinstance(ast.statements[0], VarietyDecl)
    assert ast.statements[0].dim == 2
    parab = ast.statements[2]
    assert isinstance(parab, ParabolicDecl)
    assert len(parab.summands) == 2
    assert parab.summands[0].weights[0].value == Fraction(1, 3)
    cmd = ast.statements[3]
    assert isinstance(cmd, CommandDecl)
    assert (cmd.action, cmd.kind, cmd.names) == ("compute", "chern", ("E",))


def test_parse_positions_and_comments():
    text = "# a comment\nvariety X dim 1;\ndivisor p;\n"
    ast = parse_program(text)
    assert ast.statements[0].pos == (2, 1)
    assert ast.statements[1].pos == (3, 1)


def test_parse_bundle_poly():
    ast = parse_program("variety X dim 2; divisor D1; bundle V rank 2 chern 1 + 2*D1 - D1^2;")
    bundle = ast.statements[2]
    assert isinstance(bundle, BundleDecl)
    coeffs = [t.coeff for t in bundle.chern]
    assert coeffs == [Fraction(1), Fraction(2), Fraction(-1)]


def test_parse_missing_semicolon():
    with pytest.raises(ParseError) as err:
        parse_program("variety X dim 2; divisor D1, D2; relation D1*D2 = 0")
    diag = err.value.diagnostics[0]
    assert "';'" in diag.message
    assert diag.line == 1 and diag.column >= 1


def test_parse_unexpected_character():
    with pytest.raises(ParseError) as err:
        parse_program("variety X dim $2;")
    assert err.value.diagnostics[0].column == 15


def test_parse_zero_denominator():
    with pytest.raises(ParseError) as err:
        parse_program("variety X dim 1; divisor p; parabolic E = O{p:1/0};")
    assert "denominator" in err.value.diagnostics[0].message


def test_parse_unknown_statement():
    with pytest.raises(ParseError) as err:
        parse_program("varietty X dim 2;")
    diag = err.value.diagnostics[0]
    assert "statement keyword" in diag.message
    assert (diag.line, diag.column) == (1, 1)


def test_parse_verify_forms():
    ast = parse_program(
        "variety X dim 1; divisor p; parabolic E = O{}; parabolic F = O{}; "
        "verify grothendieck E; verify corollary1 F; verify prop1 E F;"
    )
    kinds = [
        (s.kind, s.names) for s in ast.statements if isinstance(s, CommandDecl)
    ]
    assert kinds == [
        ("grothendieck", ("E",)),
        ("corollary1", ("F",)),
        ("prop1", ("E", "F")),
    ]


# --- printing ----------------------------------------------------------------


def test_print_round_trip_worked():
    ast = parse_program(WORKED)
    assert parse_program(format_program(ast)) == ast


def test_print_round_trip_random():
    for seed in range(25):
        text = random_scene_text(random.Random(seed))
        ast = parse_program(text)
        assert parse_program(format_program(ast)) == ast


def test_print_round_trip_signs_and_rationals():
    text = "variety X dim 2;\ndivisor D1;\nrelation D1^2 = 0;\nbundle V rank 2 chern 1 - 1/2*D1 + 0;\n"
    ast = parse_program(text)
    assert parse_program(format_program(ast)) == ast


# --- elaboration -------------------------------------------------------------


def test_elaborate_worked_scene():
    scene = elaborate(parse_program(WORKED))
    assert scene.description.dim == 2
    E = scene.parabolics["E"]
    assert E.rank == 2
    assert cover_order(E) == 3
    assert len(scene.commands) == 1


def test_elaborate_weight_out_of_range():
    with pytest.raises(ElaborationError) as err:
        elaborate(parse_program("variety X dim 2; divisor D1; parabolic E = O{D1:3/2};"))
    diag = err.value.diagnostics[0]
    assert diag.message == "weight must lie in [0,1)"
    # position of the weight value 3/2
    assert (diag.line, diag.column) == (1, 49)


def test_elaborate_unknown_divisor_weight():
    with pytest.raises(ElaborationError) as err:
        elaborate(parse_program("variety X dim 2; divisor D1; parabolic E = O{Q:1/2};"))
    assert "unknown divisor 'Q'" in err.value.diagnostics[0].message


def test_elaborate_chern_part_above_rank():
    with pytest.raises(ElaborationError) as err:
        elaborate(
            parse_program(
                "variety X dim 2; divisor D1; bundle V rank 1 chern 1 + D1 + D1^2;"
            )
        )
    assert "rank" in err.value.diagnostics[0].message


def test_elaborate_chern_degree_zero_part():
    with pytest.raises(ElaborationError):
        elaborate(
            parse_program("variety X dim 2; divisor D1; bundle V rank 1 chern 2 + D1;")
        )


def test_elaborate_duplicate_and_missing_names():
    with pytest.raises(ElaborationError):
        elaborate(
            parse_program(
                "variety X dim 1; divisor p; bundle V rank 1 chern 1; "
                "bundle V rank 1 chern 1;"
            )
        )
    with pytest.raises(ElaborationError) as err:
        elaborate(parse_program("variety X dim 1; divisor p; compute chern E;"))
    assert "unknown parabolic" in err.value.diagnostics[0].message


def test_elaborate_requires_one_variety():
    with pytest.raises(ElaborationError) as err:
        elaborate(parse_program("divisor D1;"))
    assert err.value.diagnostics[0].message == "missing variety declaration"
    with pytest.raises(ElaborationError):
        elaborate(parse_program("variety X dim 1; variety Y dim 2; divisor p;"))


def test_elaborate_inhomogeneous_relation():
    with pytest.raises(ElaborationError) as err:
        elaborate(
            parse_program("variety X dim 2; divisor D1, D2; relation D1*D2 = D1;")
        )
    assert "homogeneous" in err.value.diagnostics[0].message


def test_elaborate_integral_degree():
    with pytest.raises(ElaborationError):
        elaborate(parse_program("variety X dim 2; divisor D1; integral D1 = 1;"))


def test_elaborate_declaration_before_use():
    with pytest.raises(ElaborationError):
        elaborate(
            parse_program("variety X dim 2; relation D1^2 = 0; divisor D1;")
        )


def test_elaborate_weight_denominator_cap():
    program = "variety X dim 1; divisor p; parabolic E = O{p:1/7};"
    with pytest.raises(ElaborationError) as err:
        elaborate(parse_program(program), max_denominator=5)
    assert "denominator" in err.value.diagnostics[0].message
    elaborate(parse_program(program), max_denominator=7)


def test_diagnostics_are_positioned():
    bad_programs = [
        "variety X dim 2; divisor D1; parabolic E = O{D1:9/2};",
        "variety X; divisor D1;",
        "bundle V rank 1;",
        "variety X dim 2; compute chern;",
    ]
    for text in bad_programs:
        try:
            elaborate(parse_program(text))
            raised = False
        except (ParseError, ElaborationError) as exc:
            raised = True
            for diag in exc.diagnostics:
                assert diag.line >= 1 and diag.column >= 1
        assert raised
