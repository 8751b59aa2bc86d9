"""Textual network-spec language: tokenizer, parser, canonical serializer.

A spec is one `network { ... }` block, one or more `animate ...` directives,
then optional `render` and `style` blocks (each at most once).  `#` starts a
line comment unless it begins a 6- or 8-digit hex color token.  All errors
carry the 1-based line and column of the offending token.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal

from .errors import (
    SpecSyntaxError,
    TypeMismatch,
    UnknownLayerKind,
    UnknownParam,
)
from .model import (
    Color,
    Conv2DLayer,
    Directive,
    Dropout,
    FeedForwardLayer,
    ForwardPass,
    ImageLayer,
    LayerSpec,
    MaxPool2DLayer,
    NetworkSpec,
    RenderSettings,
    StyleSpec,
)

# Token types.
IDENT = "ident"
INT = "int"
REAL = "real"
STRING = "string"
COLOR = "color"
LBRACE = "{"
RBRACE = "}"
COLON = ":"
COMMA = ","
EOF = "eof"

_HEX = set("0123456789abcdefABCDEF")
_WORD = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_")


@dataclass(frozen=True)
class Token:
    type: str
    value: object
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    i = 0
    line = 1
    col = 1
    n = len(text)

    def advance(count: int):
        nonlocal i, line, col
        for _ in range(count):
            if text[i] == "\n":
                line += 1
                col = 1
            else:
                col += 1
            i += 1

    while i < n:
        ch = text[i]
        if ch in " \t\r\n":
            advance(1)
            continue

        if ch == "#":
            # Color token only for exactly 6 or 8 hex digits ending at a
            # word boundary; anything else is a comment to end of line.
            run = 0
            while i + 1 + run < n and text[i + 1 + run] in _HEX:
                run += 1
            length = 8 if run >= 8 else 6 if run >= 6 else 0
            boundary = (
                length > 0
                and run == length
                and (i + 1 + length >= n or text[i + 1 + length] not in _WORD)
            )
            if boundary:
                body = text[i + 1 : i + 1 + length]
                tok_line, tok_col = line, col
                advance(1 + length)
                tokens.append(Token(COLOR, Color.from_hex(body), tok_line, tok_col))
            else:
                while i < n and text[i] != "\n":
                    advance(1)
            continue

        if ch in "{}:,":
            tokens.append(Token(ch, ch, line, col))
            advance(1)
            continue

        if ch == '"':
            tok_line, tok_col = line, col
            advance(1)
            start = i
            while i < n and text[i] not in '"\n':
                advance(1)
            if i >= n or text[i] == "\n":
                raise SpecSyntaxError(
                    "unterminated string", tok_line, tok_col, expected='closing "'
                )
            value = text[start:i]
            advance(1)
            tokens.append(Token(STRING, value, tok_line, tok_col))
            continue

        if ch.isdigit() or ch == "-":
            tok_line, tok_col = line, col
            start = i
            if ch == "-":
                advance(1)
            if i >= n or not text[i].isdigit():
                raise SpecSyntaxError(
                    "malformed number", tok_line, tok_col, expected="a digit"
                )
            while i < n and text[i].isdigit():
                advance(1)
            is_real = False
            if i + 1 < n and text[i] == "." and text[i + 1].isdigit():
                is_real = True
                advance(1)
                while i < n and text[i].isdigit():
                    advance(1)
            literal = text[start:i]
            if is_real:
                tokens.append(Token(REAL, float(literal), tok_line, tok_col))
            else:
                tokens.append(Token(INT, int(literal), tok_line, tok_col))
            continue

        if ch.isalpha() or ch == "_":
            tok_line, tok_col = line, col
            start = i
            while i < n and text[i] in _WORD:
                advance(1)
            tokens.append(Token(IDENT, text[start:i], tok_line, tok_col))
            continue

        raise SpecSyntaxError(
            f"unexpected character {ch!r}", line, col, expected="a token"
        )

    tokens.append(Token(EOF, None, line, col))
    return tokens


# ---------------------------------------------------------------------------
# Parser.
# ---------------------------------------------------------------------------

# Per-block parameter schemas: name -> (type tag, human description).
# Tag "real" also accepts integer literals; nothing else coerces.
_LAYER_SCHEMAS: dict[str, tuple[dict[str, tuple[str, str]], tuple[str, ...]]] = {
    "image": ({"source": ("str", "a file path string")}, ("source",)),
    "ff": ({"units": ("int", "a positive integer")}, ("units",)),
    "conv2d": (
        {
            "feature_maps": ("int", "a positive integer"),
            "map_size": ("int", "a positive integer"),
            "filter_size": ("int", "a positive integer"),
        },
        ("feature_maps", "map_size", "filter_size"),
    ),
    "maxpool2d": ({"kernel": ("int", "an integer of at least 2")}, ("kernel",)),
}

_LAYER_BUILDERS = {
    "image": ImageLayer,
    "ff": FeedForwardLayer,
    "conv2d": Conv2DLayer,
    "maxpool2d": MaxPool2DLayer,
}

_DIRECTIVE_SCHEMAS = {
    "forward_pass": {},
    "dropout": {
        "rate": ("real", "a real number in [0, 1)"),
        "seed": ("int", "an unsigned 64-bit integer"),
    },
}

_RENDER_SCHEMA = {
    "fps": ("int", "an integer in [1, 120]"),
    "width_px": ("int", "an integer in [16, 4096]"),
    "height_px": ("int", "an integer in [16, 4096]"),
    "pair_duration_s": ("real", "a positive real number"),
    "formats": ("str", 'a comma-separated subset of "svg,gif"'),
}

_STYLE_SCHEMA = {
    "background": ("color", "a hex color"),
    "neuron_fill": ("color", "a hex color"),
    "neuron_stroke": ("color", "a hex color"),
    "edge_color": ("color", "a hex color"),
    "pulse_color": ("color", "a hex color"),
    "dropped_opacity": ("real", "a real number in [0, 1]"),
}

_TAG_BY_TOKEN = {INT: "int", REAL: "real", STRING: "str", COLOR: "color"}


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.type != EOF:
            self.pos += 1
        return tok

    def expect(self, type_: str, what: str) -> Token:
        tok = self.peek()
        if tok.type != type_:
            raise SpecSyntaxError(
                f"expected {what}, got {self._describe(tok)}",
                tok.line,
                tok.col,
                expected=what,
            )
        return self.next()

    def expect_word(self, word: str) -> Token:
        tok = self.peek()
        if tok.type != IDENT or tok.value != word:
            raise SpecSyntaxError(
                f"expected '{word}', got {self._describe(tok)}",
                tok.line,
                tok.col,
                expected=f"'{word}'",
            )
        return self.next()

    def at_word(self, word: str) -> bool:
        tok = self.peek()
        return tok.type == IDENT and tok.value == word

    @staticmethod
    def _describe(tok: Token) -> str:
        if tok.type == EOF:
            return "end of input"
        if tok.type == IDENT:
            return f"'{tok.value}'"
        if tok.type == STRING:
            return f'string "{tok.value}"'
        return f"'{tok.value}'"

    # -- params ------------------------------------------------------------

    def parse_params(self) -> list[tuple[str, str, object, Token]]:
        """Parse `name: value` pairs up to the closing brace.

        Returns (name, type tag, python value, name token) per pair.
        Comma separators, optional trailing comma.
        """
        out: list[tuple[str, str, object, Token]] = []
        if self.peek().type == RBRACE:
            return out
        while True:
            name_tok = self.expect(IDENT, "a parameter name")
            self.expect(COLON, "':'")
            val_tok = self.peek()
            if val_tok.type not in _TAG_BY_TOKEN:
                raise SpecSyntaxError(
                    f"expected a value, got {self._describe(val_tok)}",
                    val_tok.line,
                    val_tok.col,
                    expected="a value",
                )
            self.next()
            out.append(
                (name_tok.value, _TAG_BY_TOKEN[val_tok.type], val_tok.value, name_tok)
            )
            if self.peek().type == COMMA:
                self.next()
                if self.peek().type == RBRACE:
                    break
                continue
            break
        return out

    def parse_block_params(
        self, owner: str, schema: dict, open_tok: Token
    ) -> dict[str, tuple[object, Token]]:
        """Check param names and coarse types against a schema."""
        values: dict[str, tuple[object, Token]] = {}
        for name, tag, value, tok in self.parse_params():
            if name not in schema:
                raise UnknownParam(owner, name, tok.line, tok.col)
            want_tag, desc = schema[name]
            ok = tag == want_tag or (want_tag == "real" and tag == "int")
            if not ok:
                raise TypeMismatch(name, desc, tok.line, tok.col)
            if name in values:
                raise SpecSyntaxError(
                    f"duplicate parameter '{name}'", tok.line, tok.col
                )
            if want_tag == "real":
                value = float(value)
            values[name] = (value, tok)
        return values

    @staticmethod
    def build(cls, values: dict[str, tuple[object, Token]], fallback: Token):
        """Construct a frozen dataclass, pinning range errors to a position."""
        kwargs = {k: v for k, (v, _) in values.items()}
        try:
            return cls(**kwargs)
        except TypeMismatch as exc:
            tok = values.get(exc.param, (None, fallback))[1]
            raise TypeMismatch(exc.param, exc.expected, tok.line, tok.col) from None

    # -- blocks ------------------------------------------------------------

    def parse_layer(self) -> LayerSpec:
        self.expect_word("layer")
        kind_tok = self.expect(IDENT, "a layer kind")
        kind = kind_tok.value
        if kind not in _LAYER_SCHEMAS:
            raise UnknownLayerKind(kind, kind_tok.line, kind_tok.col)
        schema, required = _LAYER_SCHEMAS[kind]
        open_tok = self.expect(LBRACE, "'{'")
        values = self.parse_block_params(kind, schema, open_tok)
        self.expect(RBRACE, "'}'")
        for name in required:
            if name not in values:
                _, desc = schema[name]
                raise TypeMismatch(
                    name, f"{desc} (missing)", kind_tok.line, kind_tok.col
                )
        return self.build(_LAYER_BUILDERS[kind], values, kind_tok)

    def parse_directive(self) -> Directive:
        self.expect_word("animate")
        name_tok = self.expect(IDENT, "a directive name")
        name = name_tok.value
        if name not in _DIRECTIVE_SCHEMAS:
            raise SpecSyntaxError(
                f"unknown directive '{name}'",
                name_tok.line,
                name_tok.col,
                expected="'forward_pass' or 'dropout'",
            )
        open_tok = self.expect(LBRACE, "'{'")
        values = self.parse_block_params(name, _DIRECTIVE_SCHEMAS[name], open_tok)
        self.expect(RBRACE, "'}'")
        if name == "forward_pass":
            return ForwardPass()
        return self.build(Dropout, values, name_tok)

    def parse_render(self) -> RenderSettings:
        kw = self.expect_word("render")
        open_tok = self.expect(LBRACE, "'{'")
        values = self.parse_block_params("render", _RENDER_SCHEMA, open_tok)
        self.expect(RBRACE, "'}'")
        if "formats" in values:
            raw, tok = values["formats"]
            parts = [p.strip() for p in raw.split(",")]
            if not parts or any(p not in ("svg", "gif") for p in parts):
                raise TypeMismatch(
                    "formats",
                    'a comma-separated subset of "svg,gif"',
                    tok.line,
                    tok.col,
                )
            values["formats"] = (frozenset(parts), tok)
        return self.build(RenderSettings, values, kw)

    def parse_style(self) -> StyleSpec:
        kw = self.expect_word("style")
        open_tok = self.expect(LBRACE, "'{'")
        values = self.parse_block_params("style", _STYLE_SCHEMA, open_tok)
        self.expect(RBRACE, "'}'")
        return self.build(StyleSpec, values, kw)

    def parse_spec(self) -> NetworkSpec:
        self.expect_word("network")
        self.expect(LBRACE, "'{'")
        layers: list[LayerSpec] = []
        while self.at_word("layer"):
            layers.append(self.parse_layer())
        self.expect(RBRACE, "'}' or 'layer'")

        directives: list[Directive] = []
        while self.at_word("animate"):
            directives.append(self.parse_directive())

        render = None
        style = None
        while True:
            if self.at_word("render"):
                tok = self.peek()
                if render is not None:
                    raise SpecSyntaxError("duplicate render block", tok.line, tok.col)
                render = self.parse_render()
            elif self.at_word("style"):
                tok = self.peek()
                if style is not None:
                    raise SpecSyntaxError("duplicate style block", tok.line, tok.col)
                style = self.parse_style()
            else:
                break

        tail = self.peek()
        if tail.type != EOF:
            raise SpecSyntaxError(
                f"unexpected trailing content: {self._describe(tail)}",
                tail.line,
                tail.col,
                expected="end of input",
            )
        return NetworkSpec(
            layers=tuple(layers),
            directives=tuple(directives),
            style=style if style is not None else StyleSpec(),
            render=render if render is not None else RenderSettings(),
        )


def parse_network_spec(text: str) -> NetworkSpec:
    """Parse spec source text; raises the ParseError family on bad input."""
    return _Parser(tokenize(text)).parse_spec()


# ---------------------------------------------------------------------------
# Canonical serializer.
# ---------------------------------------------------------------------------

def format_real(x: float) -> str:
    """Shortest decimal literal that round-trips, without exponents."""
    s = repr(float(x))
    if "e" not in s and "E" not in s:
        return s
    out = format(Decimal(s), "f")
    if "." not in out:
        out += ".0"
    return out


def _params_text(pairs: list[tuple[str, str]]) -> str:
    return ", ".join(f"{k}: {v}" for k, v in pairs)


def _layer_text(layer: LayerSpec) -> str:
    if isinstance(layer, ImageLayer):
        pairs = [("source", f'"{layer.source}"')]
    elif isinstance(layer, FeedForwardLayer):
        pairs = [("units", str(layer.units))]
    elif isinstance(layer, Conv2DLayer):
        pairs = [
            ("feature_maps", str(layer.feature_maps)),
            ("map_size", str(layer.map_size)),
            ("filter_size", str(layer.filter_size)),
        ]
    elif isinstance(layer, MaxPool2DLayer):
        pairs = [("kernel", str(layer.kernel))]
    else:
        raise TypeError(f"unknown layer type {type(layer).__name__}")
    return f"  layer {layer.kind} {{ {_params_text(pairs)} }}"


def serialize_spec(spec: NetworkSpec) -> str:
    """Emit the canonical full text of a spec.

    Canonical form writes every block and every parameter explicitly, so
    serialize(parse(serialize(s))) == serialize(s).
    """
    lines = ["network {"]
    lines.extend(_layer_text(layer) for layer in spec.layers)
    lines.append("}")
    for d in spec.directives:
        if isinstance(d, ForwardPass):
            lines.append("animate forward_pass { }")
        else:
            pairs = [("rate", format_real(d.rate)), ("seed", str(d.seed))]
            lines.append(f"animate dropout {{ {_params_text(pairs)} }}")
    r = spec.render
    fmt_text = ",".join(f for f in ("svg", "gif") if f in r.formats)
    render_pairs = [
        ("fps", str(r.fps)),
        ("width_px", str(r.width_px)),
        ("height_px", str(r.height_px)),
        ("pair_duration_s", format_real(r.pair_duration_s)),
        ("formats", f'"{fmt_text}"'),
    ]
    lines.append(f"render {{ {_params_text(render_pairs)} }}")
    s = spec.style
    style_pairs = [
        ("background", s.background.hex8()),
        ("neuron_fill", s.neuron_fill.hex8()),
        ("neuron_stroke", s.neuron_stroke.hex8()),
        ("edge_color", s.edge_color.hex8()),
        ("pulse_color", s.pulse_color.hex8()),
        ("dropped_opacity", format_real(s.dropped_opacity)),
    ]
    lines.append(f"style {{ {_params_text(style_pairs)} }}")
    return "\n".join(lines) + "\n"
