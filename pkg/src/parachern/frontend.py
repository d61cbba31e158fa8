"""Scene language: lexer, parser, pretty printer and elaborator.

A scene file (UTF-8, extension .pch, `#` line comments) declares one
variety, its divisors, extra classes, relations, integrals, bundle classes
and parabolic bundles, followed by compute / verify commands.  Parsing
produces a positioned AST; elaboration produces the variety model and the
object tables.  Every failure carries a Diagnostic with line and column.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .bundles import OrdinaryBundleClass, ParabolicBundle, trivial_line
from .chow import ChowDescription, Variety, build_variety
from .rings import RuleError

COMPUTE_KINDS = ("chern", "ch", "ctpoly", "degree")
VERIFY_KINDS = ("grothendieck", "prop1", "corollary1")
STATEMENT_KEYWORDS = (
    "variety",
    "divisor",
    "class",
    "relation",
    "integral",
    "bundle",
    "parabolic",
    "compute",
    "verify",
)

Pos = tuple[int, int]


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    message: str
    line: int
    column: int

    def __str__(self):
        return f"{self.line}:{self.column}: {self.severity}: {self.message}"


class SceneError(Exception):
    """Carries one or more positioned diagnostics."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(str(d) for d in self.diagnostics))


class ParseError(SceneError):
    pass


class ElaborationError(SceneError):
    pass


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class MonoFactor:
    name: str
    exponent: int
    pos: Pos = field(compare=False)


MonoAST = tuple[MonoFactor, ...]


@dataclass(frozen=True)
class PolyTerm:
    coeff: Fraction
    factors: MonoAST
    pos: Pos = field(compare=False)


PolyAST = tuple[PolyTerm, ...]


@dataclass(frozen=True)
class WeightEntry:
    divisor: str
    value: Fraction
    pos: Pos = field(compare=False)


@dataclass(frozen=True)
class SummandAST:
    bundle: str
    weights: tuple[WeightEntry, ...]
    pos: Pos = field(compare=False)


@dataclass(frozen=True)
class VarietyDecl:
    name: str
    dim: int
    pos: Pos = field(compare=False)


@dataclass(frozen=True)
class DivisorDecl:
    names: tuple[str, ...]
    pos: Pos = field(compare=False)


@dataclass(frozen=True)
class ClassDecl:
    name: str
    degree: int
    pos: Pos = field(compare=False)


@dataclass(frozen=True)
class RelationDecl:
    lhs: MonoAST
    rhs: PolyAST
    pos: Pos = field(compare=False)


@dataclass(frozen=True)
class IntegralDecl:
    mono: MonoAST
    value: Fraction
    pos: Pos = field(compare=False)


@dataclass(frozen=True)
class BundleDecl:
    name: str
    rank: int
    chern: PolyAST
    pos: Pos = field(compare=False)


@dataclass(frozen=True)
class ParabolicDecl:
    name: str
    summands: tuple[SummandAST, ...]
    pos: Pos = field(compare=False)


@dataclass(frozen=True)
class CommandDecl:
    action: str
    kind: str
    names: tuple[str, ...]
    pos: Pos = field(compare=False)


Statement = (
    VarietyDecl
    | DivisorDecl
    | ClassDecl
    | RelationDecl
    | IntegralDecl
    | BundleDecl
    | ParabolicDecl
    | CommandDecl
)


@dataclass(frozen=True)
class SceneAST:
    statements: tuple[Statement, ...]


# ---------------------------------------------------------------------------
# Lexer


@dataclass(frozen=True)
class Token:
    kind: str  # "name" | "int" | "punct" | "eof"
    text: str
    line: int
    column: int

    @property
    def pos(self) -> Pos:
        return (self.line, self.column)


_PUNCT = set(";,^*+-=/{}:()")


def _lex(text: str) -> list[Token]:
    tokens: list[Token] = []
    line, col, i, n = 1, 1, 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(Token("name", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(Token("int", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if text.startswith("(+)", i):
            tokens.append(Token("punct", "(+)", line, col))
            i += 3
            col += 3
            continue
        if ch in _PUNCT:
            tokens.append(Token("punct", ch, line, col))
            i += 1
            col += 1
            continue
        raise ParseError(
            [Diagnostic("error", f"unexpected character {ch!r}", line, col)]
        )
    tokens.append(Token("eof", "", line, col))
    return tokens


# ---------------------------------------------------------------------------
# Parser


class _Parser:
    def __init__(self, tokens: list[Token]):
        self._tokens = tokens
        self._i = 0

    def _peek(self, ahead: int = 0) -> Token:
        return self._tokens[min(self._i + ahead, len(self._tokens) - 1)]

    def _advance(self) -> Token:
        tok = self._tokens[self._i]
        if tok.kind != "eof":
            self._i += 1
        return tok

    def _fail(self, message: str, tok: Token):
        raise ParseError([Diagnostic("error", message, tok.line, tok.column)])

    def _expect_punct(self, symbol: str, context: str) -> Token:
        tok = self._peek()
        if tok.kind != "punct" or tok.text != symbol:
            self._fail(f"expected '{symbol}' {context}", tok)
        return self._advance()

    def _expect_name(self, context: str) -> Token:
        tok = self._peek()
        if tok.kind != "name":
            self._fail(f"expected a name {context}", tok)
        return self._advance()

    def _expect_keyword(self, word: str) -> Token:
        tok = self._peek()
        if tok.kind != "name" or tok.text != word:
            self._fail(f"expected '{word}'", tok)
        return self._advance()

    def _expect_int(self, context: str) -> int:
        tok = self._peek()
        if tok.kind != "int":
            self._fail(f"expected an integer {context}", tok)
        self._advance()
        return int(tok.text)

    def _at_punct(self, symbol: str) -> bool:
        tok = self._peek()
        return tok.kind == "punct" and tok.text == symbol

    def parse(self) -> SceneAST:
        statements = []
        while self._peek().kind != "eof":
            statements.append(self._statement())
        return SceneAST(tuple(statements))

    def _statement(self) -> Statement:
        tok = self._peek()
        if tok.kind != "name" or tok.text not in STATEMENT_KEYWORDS:
            self._fail(
                "expected a statement keyword "
                "(variety, divisor, class, relation, integral, bundle, "
                "parabolic, compute, verify)",
                tok,
            )
        handler = getattr(self, f"_parse_{tok.text}")
        return handler(self._advance())

    def _parse_variety(self, kw: Token) -> VarietyDecl:
        name = self._expect_name("after 'variety'")
        self._expect_keyword("dim")
        dim = self._expect_int("after 'dim'")
        self._expect_punct(";", "after the variety declaration")
        return VarietyDecl(name.text, dim, kw.pos)

    def _parse_divisor(self, kw: Token) -> DivisorDecl:
        names = [self._expect_name("after 'divisor'").text]
        while self._at_punct(","):
            self._advance()
            names.append(self._expect_name("after ','").text)
        self._expect_punct(";", "after the divisor declaration")
        return DivisorDecl(tuple(names), kw.pos)

    def _parse_class(self, kw: Token) -> ClassDecl:
        name = self._expect_name("after 'class'")
        self._expect_keyword("deg")
        degree = self._expect_int("after 'deg'")
        self._expect_punct(";", "after the class declaration")
        return ClassDecl(name.text, degree, kw.pos)

    def _parse_relation(self, kw: Token) -> RelationDecl:
        lhs = self._mono()
        self._expect_punct("=", "in the relation")
        rhs = self._poly()
        self._expect_punct(";", "after the relation")
        return RelationDecl(lhs, rhs, kw.pos)

    def _parse_integral(self, kw: Token) -> IntegralDecl:
        mono = self._mono()
        self._expect_punct("=", "in the integral declaration")
        value, _ = self._rat()
        self._expect_punct(";", "after the integral declaration")
        return IntegralDecl(mono, value, kw.pos)

    def _parse_bundle(self, kw: Token) -> BundleDecl:
        name = self._expect_name("after 'bundle'")
        self._expect_keyword("rank")
        rank = self._expect_int("after 'rank'")
        self._expect_keyword("chern")
        chern = self._poly()
        self._expect_punct(";", "after the bundle declaration")
        return BundleDecl(name.text, rank, chern, kw.pos)

    def _parse_parabolic(self, kw: Token) -> ParabolicDecl:
        name = self._expect_name("after 'parabolic'")
        self._expect_punct("=", "in the parabolic declaration")
        summands = [self._summand()]
        while self._at_punct("(+)"):
            self._advance()
            summands.append(self._summand())
        self._expect_punct(";", "after the parabolic declaration")
        return ParabolicDecl(name.text, tuple(summands), kw.pos)

    def _parse_compute(self, kw: Token) -> CommandDecl:
        kind = self._expect_name("after 'compute'")
        if kind.text not in COMPUTE_KINDS:
            self._fail(
                f"unknown compute kind {kind.text!r} "
                f"(expected one of {', '.join(COMPUTE_KINDS)})",
                kind,
            )
        target = self._expect_name(f"after 'compute {kind.text}'")
        self._expect_punct(";", "after the command")
        return CommandDecl("compute", kind.text, (target.text,), kw.pos)

    def _parse_verify(self, kw: Token) -> CommandDecl:
        kind = self._expect_name("after 'verify'")
        if kind.text not in VERIFY_KINDS:
            self._fail(
                f"unknown verify kind {kind.text!r} "
                f"(expected one of {', '.join(VERIFY_KINDS)})",
                kind,
            )
        names = []
        if kind.text == "prop1":
            names.append(self._expect_name("after 'verify prop1'").text)
            names.append(self._expect_name("after 'verify prop1'").text)
        if self._peek().kind == "name":
            names.append(self._advance().text)
        self._expect_punct(";", "after the command")
        return CommandDecl("verify", kind.text, tuple(names), kw.pos)

    def _mono(self) -> MonoAST:
        factors = [self._mono_factor()]
        while self._at_punct("*"):
            self._advance()
            factors.append(self._mono_factor())
        return tuple(factors)

    def _mono_factor(self) -> MonoFactor:
        name = self._expect_name("in a monomial")
        exponent = 1
        if self._at_punct("^"):
            self._advance()
            exponent = self._expect_int("after '^'")
        return MonoFactor(name.text, exponent, name.pos)

    def _rat(self) -> tuple[Fraction, Pos]:
        tok = self._peek()
        numerator = self._expect_int("in a rational")
        if self._at_punct("/"):
            self._advance()
            denom_tok = self._peek()
            denominator = self._expect_int("after '/'")
            if denominator == 0:
                self._fail("denominator must be nonzero", denom_tok)
            return Fraction(numerator, denominator), tok.pos
        return Fraction(numerator), tok.pos

    def _poly(self) -> PolyAST:
        terms = []
        sign = 1
        if self._at_punct("+") or self._at_punct("-"):
            sign = -1 if self._advance().text == "-" else 1
        while True:
            tok = self._peek()
            if tok.kind == "int":
                value, pos = self._rat()
                factors: MonoAST = ()
                if self._at_punct("*"):
                    self._advance()
                    factors = self._mono()
            elif tok.kind == "name":
                value, pos = Fraction(1), tok.pos
                factors = self._mono()
            else:
                self._fail("expected a term", tok)
            terms.append(PolyTerm(sign * value, factors, pos))
            if self._at_punct("+") or self._at_punct("-"):
                sign = -1 if self._advance().text == "-" else 1
                continue
            return tuple(terms)

    def _summand(self) -> SummandAST:
        name = self._expect_name("at the start of a summand")
        self._expect_punct("{", "after the summand bundle name")
        weights = []
        if not self._at_punct("}"):
            while True:
                divisor = self._expect_name("in a weight entry")
                self._expect_punct(":", "after the divisor name")
                value, value_pos = self._rat()
                weights.append(WeightEntry(divisor.text, value, value_pos))
                if self._at_punct(","):
                    self._advance()
                    continue
                break
        self._expect_punct("}", "after the weight map")
        return SummandAST(name.text, tuple(weights), name.pos)


def parse_program(text: str) -> SceneAST:
    """Parse a scene program; raises :class:`ParseError` with a positioned
    diagnostic on any lexical or syntax failure."""
    return _Parser(_lex(text)).parse()


# ---------------------------------------------------------------------------
# Pretty printer


def _format_mono(mono: MonoAST) -> str:
    return "*".join(
        f.name if f.exponent == 1 else f"{f.name}^{f.exponent}" for f in mono
    )


def _format_poly(poly: PolyAST) -> str:
    parts = []
    for term in poly:
        magnitude = -term.coeff if term.coeff < 0 else term.coeff
        mono_str = _format_mono(term.factors)
        if not mono_str:
            body = str(magnitude)
        elif magnitude == 1:
            body = mono_str
        else:
            body = f"{magnitude}*{mono_str}"
        if not parts:
            parts.append(body if term.coeff >= 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if term.coeff >= 0 else f"- {body}")
    return " ".join(parts)


def _format_summand(s: SummandAST) -> str:
    inner = ", ".join(f"{w.divisor}:{w.value}" for w in s.weights)
    return f"{s.bundle}{{{inner}}}"


def format_program(ast: SceneAST) -> str:
    """Canonical text of a scene AST; parsing it back yields an equal AST."""
    lines = []
    for stmt in ast.statements:
        if isinstance(stmt, VarietyDecl):
            lines.append(f"variety {stmt.name} dim {stmt.dim};")
        elif isinstance(stmt, DivisorDecl):
            lines.append(f"divisor {', '.join(stmt.names)};")
        elif isinstance(stmt, ClassDecl):
            lines.append(f"class {stmt.name} deg {stmt.degree};")
        elif isinstance(stmt, RelationDecl):
            lines.append(
                f"relation {_format_mono(stmt.lhs)} = {_format_poly(stmt.rhs)};"
            )
        elif isinstance(stmt, IntegralDecl):
            lines.append(f"integral {_format_mono(stmt.mono)} = {stmt.value};")
        elif isinstance(stmt, BundleDecl):
            lines.append(
                f"bundle {stmt.name} rank {stmt.rank} chern {_format_poly(stmt.chern)};"
            )
        elif isinstance(stmt, ParabolicDecl):
            summands = " (+) ".join(_format_summand(s) for s in stmt.summands)
            lines.append(f"parabolic {stmt.name} = {summands};")
        elif isinstance(stmt, CommandDecl):
            tail = " ".join(stmt.names)
            lines.append(f"{stmt.action} {stmt.kind} {tail};".replace("  ", " "))
        else:
            raise TypeError(f"unknown statement {stmt!r}")
    return "\n".join(lines) + ("\n" if lines else "")


# ---------------------------------------------------------------------------
# Elaborator


@dataclass
class Command:
    action: str
    kind: str
    names: tuple[str, ...]
    pos: Pos


@dataclass
class Scene:
    description: ChowDescription
    variety: Variety
    bundles: dict[str, OrdinaryBundleClass]
    parabolics: dict[str, ParabolicBundle]
    commands: list[Command]


def _fail(message: str, pos: Pos):
    raise ElaborationError([Diagnostic("error", message, pos[0], pos[1])])


def elaborate(ast: SceneAST, max_denominator: int = 10**6) -> Scene:
    """Build the variety and the object tables from a parsed scene.

    Enforces: exactly one variety, unique names, declaration before use,
    weights in [0,1) with bounded denominators, homogeneous relations,
    top-degree integrals, and bundle classes with unit degree-0 part and
    no parts above min(rank, dim).
    """
    variety_decl: VarietyDecl | None = None
    # name -> (statement index, kind); kinds: divisor, class, bundle, parabolic
    names: dict[str, tuple[int, str]] = {}
    divisors: list[str] = []
    extras: list[tuple[str, int]] = []
    relation_decls: list[RelationDecl] = []
    integral_decls: list[IntegralDecl] = []
    bundle_decls: list[BundleDecl] = []
    parabolic_decls: list[ParabolicDecl] = []
    command_decls: list[CommandDecl] = []

    def declare(name: str, index: int, kind: str, pos: Pos):
        if name in names or (variety_decl is not None and name == variety_decl.name):
            _fail(f"duplicate name {name!r}", pos)
        names[name] = (index, kind)

    def check_generator(factor: MonoFactor, index: int):
        entry = names.get(factor.name)
        if entry is None or entry[1] not in ("divisor", "class") or entry[0] >= index:
            _fail(f"unknown generator {factor.name!r}", factor.pos)

    for index, stmt in enumerate(ast.statements):
        if isinstance(stmt, VarietyDecl):
            if variety_decl is not None:
                _fail("duplicate variety declaration", stmt.pos)
            if stmt.dim < 1:
                _fail("variety dimension must be at least 1", stmt.pos)
            if stmt.name in names:
                _fail(f"duplicate name {stmt.name!r}", stmt.pos)
            variety_decl = stmt
        elif isinstance(stmt, DivisorDecl):
            for name in stmt.names:
                declare(name, index, "divisor", stmt.pos)
                divisors.append(name)
        elif isinstance(stmt, ClassDecl):
            if stmt.degree < 1:
                _fail("class degree must be at least 1", stmt.pos)
            declare(stmt.name, index, "class", stmt.pos)
            extras.append((stmt.name, stmt.degree))
        elif isinstance(stmt, RelationDecl):
            for factor in stmt.lhs:
                check_generator(factor, index)
            for term in stmt.rhs:
                for factor in term.factors:
                    check_generator(factor, index)
            relation_decls.append(stmt)
        elif isinstance(stmt, IntegralDecl):
            for factor in stmt.mono:
                check_generator(factor, index)
            integral_decls.append(stmt)
        elif isinstance(stmt, BundleDecl):
            if stmt.rank < 1:
                _fail("bundle rank must be at least 1", stmt.pos)
            for term in stmt.chern:
                for factor in term.factors:
                    check_generator(factor, index)
            declare(stmt.name, index, "bundle", stmt.pos)
            bundle_decls.append(stmt)
        elif isinstance(stmt, ParabolicDecl):
            for summand in stmt.summands:
                entry = names.get(summand.bundle)
                if summand.bundle != "O" and (
                    entry is None or entry[1] != "bundle" or entry[0] >= index
                ):
                    _fail(f"unknown bundle {summand.bundle!r}", summand.pos)
                for weight in summand.weights:
                    wentry = names.get(weight.divisor)
                    if wentry is None or wentry[1] != "divisor" or wentry[0] >= index:
                        _fail(f"unknown divisor {weight.divisor!r}", weight.pos)
                    if not (0 <= weight.value < 1):
                        _fail("weight must lie in [0,1)", weight.pos)
                    if weight.value.denominator > max_denominator:
                        _fail(
                            f"weight denominator exceeds the cap {max_denominator}",
                            weight.pos,
                        )
            declare(stmt.name, index, "parabolic", stmt.pos)
            parabolic_decls.append(stmt)
        elif isinstance(stmt, CommandDecl):
            if stmt.action == "compute" or stmt.kind in ("grothendieck", "corollary1"):
                expected = 1
            else:
                expected = 2
            if len(stmt.names) != expected:
                _fail(
                    f"{stmt.action} {stmt.kind} expects exactly "
                    f"{expected} name{'s' if expected > 1 else ''}",
                    stmt.pos,
                )
            for name in stmt.names:
                entry = names.get(name)
                if entry is None or entry[1] != "parabolic" or entry[0] >= index:
                    _fail(f"unknown parabolic bundle {name!r}", stmt.pos)
            command_decls.append(stmt)
        else:
            raise TypeError(f"unknown statement {stmt!r}")

    if variety_decl is None:
        _fail("missing variety declaration", (1, 1))

    degree_of = {name: 1 for name in divisors}
    degree_of.update(dict(extras))

    def mono_mapping(mono: MonoAST) -> dict[str, int]:
        acc: dict[str, int] = {}
        for factor in mono:
            acc[factor.name] = acc.get(factor.name, 0) + factor.exponent
        return acc

    def mono_degree(mono: MonoAST) -> int:
        return sum(degree_of[f.name] * f.exponent for f in mono)

    relations = []
    for decl in relation_decls:
        lhs_degree = mono_degree(decl.lhs)
        for term in decl.rhs:
            if term.coeff and mono_degree(term.factors) != lhs_degree:
                _fail("relation is not degree-homogeneous", term.pos)
            if term.coeff and term.coeff.denominator > max_denominator:
                _fail(
                    f"coefficient denominator exceeds the cap {max_denominator}",
                    term.pos,
                )
        relations.append(
            (
                mono_mapping(decl.lhs),
                [(term.coeff, mono_mapping(term.factors)) for term in decl.rhs],
            )
        )

    integrals = []
    for decl in integral_decls:
        if mono_degree(decl.mono) != variety_decl.dim:
            _fail(
                f"integral monomial must have degree {variety_decl.dim}",
                decl.pos,
            )
        integrals.append((mono_mapping(decl.mono), decl.value))

    try:
        description = ChowDescription(
            variety_decl.name,
            variety_decl.dim,
            tuple(divisors),
            tuple(extras),
            tuple(relations),
            tuple(integrals),
        )
        variety = build_variety(description)
    except RuleError as exc:
        _fail(str(exc), relation_decls[exc.rule_index].pos)
    except ValueError as exc:
        _fail(str(exc), variety_decl.pos)

    ring = variety.ring

    bundles: dict[str, OrdinaryBundleClass] = {}
    for decl in bundle_decls:
        element = ring.zero()
        for term in decl.chern:
            if term.coeff.denominator > max_denominator:
                _fail(
                    f"coefficient denominator exceeds the cap {max_denominator}",
                    term.pos,
                )
            piece = ring.scalar(term.coeff)
            for factor in term.factors:
                piece = piece * ring.generator(factor.name) ** factor.exponent
            element = element + piece
        try:
            bundles[decl.name] = OrdinaryBundleClass(decl.rank, element)
        except ValueError as exc:
            _fail(str(exc), decl.pos)

    parabolics: dict[str, ParabolicBundle] = {}
    for decl in parabolic_decls:
        summands = []
        for summand in decl.summands:
            base = (
                trivial_line(ring)
                if summand.bundle == "O"
                else bundles[summand.bundle]
            )
            weights = {w.divisor: w.value for w in summand.weights}
            summands.append((base, weights))
        try:
            parabolics[decl.name] = ParabolicBundle(
                variety, tuple(summands), max_denominator
            )
        except ValueError as exc:
            _fail(str(exc), decl.pos)

    commands = [
        Command(decl.action, decl.kind, decl.names, decl.pos) for decl in command_decls
    ]
    return Scene(description, variety, bundles, parabolics, commands)
