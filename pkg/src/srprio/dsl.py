"""Textual modeling language: parser and canonical serializer.

The format is line-oriented, one statement per line, ``#`` starts a comment,
blank lines are ignored, LF and CRLF both work. Statements:

    severity_scale negligible, marginal, critical      # weakest first
    vision  <id> "<title>" [discipline <discipline>]
    cif     <id> "<title>"
    asset   <id> "<title>" kind <kind> properties <p1>[, <p2> ...]
    impact  <source> -> <target> : <severity>

A link source is either ``asset.property`` (a requirement, linking to a CIF)
or a CIF id (linking to a vision). Statements may appear in any order;
references are resolved after the whole file has been read, so the order
never changes the resulting model. At most one severity_scale statement is
allowed; without one the default scale applies.

Diagnostics carry 1-based line/column positions (counted in Unicode code
points) pointing at the offending token, and one of the stable codes
E_PARSE, E_DUP, E_REF, E_LAYER, E_SEV.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import (
    Asset,
    AssetKind,
    BusinessVision,
    CriticalImpactFactor,
    DanglingEndpointError,
    DuplicateIdError,
    DuplicateLinkError,
    LayerViolationError,
    Model,
    ModelError,
    SeverityScale,
    UnknownLabelError,
    ValueDiscipline,
    add_element,
    make_link,
    DEFAULT_SCALE,
)

E_PARSE = "E_PARSE"
E_DUP = "E_DUP"
E_REF = "E_REF"
E_LAYER = "E_LAYER"
E_SEV = "E_SEV"

_DISCIPLINES = {d.value: d for d in ValueDiscipline if d is not ValueDiscipline.UNSPECIFIED}
_KINDS = {k.value: k for k in AssetKind}

_STRING_ESCAPES = {'"': '"', "\\": "\\", "n": "\n", "t": "\t", "r": "\r"}
_STRING_UNESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\t": "\\t", "\r": "\\r"}


@dataclass(frozen=True)
class SourcePosition:
    line: int
    column: int


@dataclass(frozen=True)
class ParseDiagnostic:
    position: SourcePosition
    code: str
    message: str
    severity: str = "error"


@dataclass(frozen=True)
class ParseResult:
    """Outcome of parse_model: the model is present iff there are no errors."""

    model: Model | None
    diagnostics: tuple[ParseDiagnostic, ...]

    @property
    def ok(self) -> bool:
        return self.model is not None


@dataclass(frozen=True)
class _Token:
    kind: str  # IDENT STRING COMMA ARROW COLON DOT MINUS
    text: str  # decoded value for STRING, lexeme otherwise
    line: int
    column: int

    @property
    def position(self) -> SourcePosition:
        return SourcePosition(self.line, self.column)


class _SyntaxError(Exception):
    def __init__(self, position: SourcePosition, message: str):
        super().__init__(message)
        self.position = position


class _BuildError(Exception):
    """Statement-level semantic error with its own diagnostic code."""

    def __init__(self, position: SourcePosition, code: str, message: str):
        super().__init__(message)
        self.position = position
        self.code = code


def _tokenize_line(text: str, line_no: int) -> list[_Token]:
    tokens: list[_Token] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch in " \t":
            i += 1
            continue
        if ch == "#":
            break
        col = i + 1
        if ch.isascii() and ch.isalpha():
            j = i + 1
            while j < n and (text[j].isascii() and (text[j].isalnum() or text[j] == "_")):
                j += 1
            tokens.append(_Token("IDENT", text[i:j], line_no, col))
            i = j
        elif ch == '"':
            value = []
            j = i + 1
            while True:
                if j >= n:
                    raise _SyntaxError(SourcePosition(line_no, col), "unterminated string")
                c = text[j]
                if c == '"':
                    break
                if c == "\\":
                    if j + 1 >= n or text[j + 1] not in _STRING_ESCAPES:
                        raise _SyntaxError(
                            SourcePosition(line_no, j + 1),
                            "invalid escape sequence in string",
                        )
                    value.append(_STRING_ESCAPES[text[j + 1]])
                    j += 2
                else:
                    value.append(c)
                    j += 1
            tokens.append(_Token("STRING", "".join(value), line_no, col))
            i = j + 1
        elif ch == ",":
            tokens.append(_Token("COMMA", ",", line_no, col))
            i += 1
        elif ch == ":":
            tokens.append(_Token("COLON", ":", line_no, col))
            i += 1
        elif ch == ".":
            tokens.append(_Token("DOT", ".", line_no, col))
            i += 1
        elif ch == "-":
            if text.startswith("->", i):
                tokens.append(_Token("ARROW", "->", line_no, col))
                i += 2
            else:
                tokens.append(_Token("MINUS", "-", line_no, col))
                i += 1
        else:
            raise _SyntaxError(SourcePosition(line_no, col), f"unexpected character {ch!r}")
    return tokens


class _Cursor:
    def __init__(self, tokens: list[_Token], line_no: int):
        self.tokens = tokens
        self.line_no = line_no
        self.index = 0

    def at_end(self) -> bool:
        return self.index >= len(self.tokens)

    def peek(self) -> _Token | None:
        return None if self.at_end() else self.tokens[self.index]

    def take(self, kind: str, what: str) -> _Token:
        tok = self.peek()
        if tok is None:
            last = self.tokens[-1]
            after = SourcePosition(last.line, last.column + len(last.text))
            raise _SyntaxError(after, f"expected {what} at end of line")
        if tok.kind != kind:
            raise _SyntaxError(tok.position, f"expected {what}, found {tok.text!r}")
        self.index += 1
        return tok

    def finish(self) -> None:
        tok = self.peek()
        if tok is not None:
            raise _SyntaxError(tok.position, f"unexpected {tok.text!r} after statement")


# Intermediate statement records; model construction happens in a second
# pass so that forward references work.

@dataclass
class _ScaleStmt:
    keyword: _Token
    labels: list[_Token]


@dataclass
class _ElementStmt:
    id_token: _Token
    element: object  # BusinessVision | CriticalImpactFactor | Asset


@dataclass
class _LinkStmt:
    source: str
    source_token: _Token
    target_token: _Token
    severity_token: _Token


def _parse_discipline(cursor: _Cursor) -> ValueDiscipline:
    # Discipline names are hyphenated, so they arrive as IDENT (MINUS IDENT)*.
    first = cursor.take("IDENT", "a value discipline")
    words = [first.text]
    while cursor.peek() is not None and cursor.peek().kind == "MINUS":
        cursor.take("MINUS", "'-'")
        words.append(cursor.take("IDENT", "a value discipline").text)
    name = "-".join(words)
    if name not in _DISCIPLINES:
        raise _SyntaxError(
            first.position,
            f"unknown value discipline {name!r}: expected one of {', '.join(sorted(_DISCIPLINES))}",
        )
    return _DISCIPLINES[name]


def _parse_statement(cursor: _Cursor):
    keyword = cursor.take("IDENT", "a statement keyword")
    if keyword.text == "severity_scale":
        labels = [cursor.take("IDENT", "a severity label")]
        while not cursor.at_end():
            cursor.take("COMMA", "','")
            labels.append(cursor.take("IDENT", "a severity label"))
        return _ScaleStmt(keyword, labels)
    if keyword.text == "vision":
        ident = cursor.take("IDENT", "a vision id")
        title = cursor.take("STRING", "a quoted title")
        discipline = ValueDiscipline.UNSPECIFIED
        if not cursor.at_end():
            kw = cursor.take("IDENT", "'discipline'")
            if kw.text != "discipline":
                raise _SyntaxError(kw.position, f"expected 'discipline', found {kw.text!r}")
            discipline = _parse_discipline(cursor)
        cursor.finish()
        return _ElementStmt(ident, BusinessVision(ident.text, title.text, discipline))
    if keyword.text == "cif":
        ident = cursor.take("IDENT", "a CIF id")
        title = cursor.take("STRING", "a quoted title")
        cursor.finish()
        return _ElementStmt(ident, CriticalImpactFactor(ident.text, title.text))
    if keyword.text == "asset":
        ident = cursor.take("IDENT", "an asset id")
        title = cursor.take("STRING", "a quoted title")
        kw = cursor.take("IDENT", "'kind'")
        if kw.text != "kind":
            raise _SyntaxError(kw.position, f"expected 'kind', found {kw.text!r}")
        kind_tok = cursor.take("IDENT", "an asset kind")
        if kind_tok.text not in _KINDS:
            raise _SyntaxError(
                kind_tok.position,
                f"unknown asset kind {kind_tok.text!r}: expected one of {', '.join(sorted(_KINDS))}",
            )
        kw = cursor.take("IDENT", "'properties'")
        if kw.text != "properties":
            raise _SyntaxError(kw.position, f"expected 'properties', found {kw.text!r}")
        props = [cursor.take("IDENT", "a property name")]
        while not cursor.at_end():
            cursor.take("COMMA", "','")
            props.append(cursor.take("IDENT", "a property name"))
        seen: set[str] = set()
        for tok in props:
            if tok.text in seen:
                raise _BuildError(tok.position, E_DUP, f"duplicate property {tok.text!r}")
            seen.add(tok.text)
        return _ElementStmt(
            ident,
            Asset(ident.text, title.text, AssetKind(kind_tok.text), tuple(t.text for t in props)),
        )
    if keyword.text == "impact":
        first = cursor.take("IDENT", "a link source")
        source, source_tok = first.text, first
        if cursor.peek() is not None and cursor.peek().kind == "DOT":
            cursor.take("DOT", "'.'")
            prop = cursor.take("IDENT", "a property name")
            source = f"{first.text}.{prop.text}"
        cursor.take("ARROW", "'->'")
        target = cursor.take("IDENT", "a link target")
        cursor.take("COLON", "':'")
        severity = cursor.take("IDENT", "a severity label")
        cursor.finish()
        return _LinkStmt(source, source_tok, target, severity)
    raise _SyntaxError(
        keyword.position,
        f"unknown statement {keyword.text!r}: expected severity_scale, vision, cif, asset, or impact",
    )


def parse_model(text: str) -> ParseResult:
    """Parse source text into a model plus diagnostics.

    Returns a ParseResult whose model is present exactly when no
    error-severity diagnostics were produced.
    """
    diagnostics: list[ParseDiagnostic] = []
    statements = []
    for line_index, raw_line in enumerate(text.split("\n"), start=1):
        line = raw_line[:-1] if raw_line.endswith("\r") else raw_line
        try:
            tokens = _tokenize_line(line, line_index)
            if not tokens:
                continue
            cursor = _Cursor(tokens, line_index)
            statements.append(_parse_statement(cursor))
        except _SyntaxError as err:
            diagnostics.append(ParseDiagnostic(err.position, E_PARSE, str(err)))
        except _BuildError as err:
            diagnostics.append(ParseDiagnostic(err.position, err.code, str(err)))

    # Second pass: scale, then elements, then links, whatever the file order.
    scale = DEFAULT_SCALE
    scale_seen = False
    for stmt in statements:
        if not isinstance(stmt, _ScaleStmt):
            continue
        if scale_seen:
            diagnostics.append(
                ParseDiagnostic(
                    stmt.keyword.position, E_PARSE, "duplicate severity_scale statement"
                )
            )
            continue
        scale_seen = True
        if len(stmt.labels) < 2:
            diagnostics.append(
                ParseDiagnostic(
                    stmt.keyword.position, E_PARSE, "a severity scale needs at least 2 labels"
                )
            )
            continue
        seen: set[str] = set()
        duplicate = None
        for tok in stmt.labels:
            if tok.text.casefold() in seen:
                duplicate = tok
                break
            seen.add(tok.text.casefold())
        if duplicate is not None:
            diagnostics.append(
                ParseDiagnostic(
                    duplicate.position, E_PARSE, f"duplicate severity label {duplicate.text!r}"
                )
            )
            continue
        scale = SeverityScale(tuple(tok.text for tok in stmt.labels))

    model = Model(scale=scale)
    for stmt in statements:
        if not isinstance(stmt, _ElementStmt):
            continue
        try:
            model = add_element(model, stmt.element)
        except DuplicateIdError as err:
            diagnostics.append(ParseDiagnostic(stmt.id_token.position, E_DUP, str(err)))

    for stmt in statements:
        if not isinstance(stmt, _LinkStmt):
            continue
        try:
            model = add_element(model, make_link(model, stmt.source, stmt.target_token.text,
                                                 stmt.severity_token.text))
        except ModelError as err:
            token = {
                "source": stmt.source_token,
                "target": stmt.target_token,
                "severity": stmt.severity_token,
            }.get(err.part or "source", stmt.source_token)
            code = {
                DanglingEndpointError: E_REF,
                LayerViolationError: E_LAYER,
                UnknownLabelError: E_SEV,
                DuplicateLinkError: E_DUP,
            }.get(type(err), E_PARSE)
            diagnostics.append(ParseDiagnostic(token.position, code, str(err)))

    diagnostics.sort(key=lambda d: (d.position.line, d.position.column, d.code))
    has_errors = any(d.severity == "error" for d in diagnostics)
    return ParseResult(None if has_errors else model, tuple(diagnostics))


def _quote(title: str) -> str:
    return '"' + "".join(_STRING_UNESCAPES.get(ch, ch) for ch in title) + '"'


def serialize_model(model: Model) -> str:
    """Canonical text for ``model``: scale first (when not the default), then
    visions, CIFs, assets, links, each group sorted by id. Reparsing the
    output reproduces an equal model."""
    lines: list[str] = []
    if not model.scale.is_default:
        lines.append("severity_scale " + ", ".join(model.scale.labels))
    for vision in model.visions.values():
        line = f"vision {vision.id} {_quote(vision.title)}"
        if vision.discipline is not ValueDiscipline.UNSPECIFIED:
            line += f" discipline {vision.discipline.value}"
        lines.append(line)
    for cif in model.cifs.values():
        lines.append(f"cif {cif.id} {_quote(cif.title)}")
    for asset in model.assets.values():
        props = ", ".join(asset.property_names)
        lines.append(
            f"asset {asset.id} {_quote(asset.title)} kind {asset.kind.value} properties {props}"
        )
    for link in model.links:
        lines.append(f"impact {link.source} -> {link.target} : {link.severity}")
    return "\n".join(lines) + "\n" if lines else ""
