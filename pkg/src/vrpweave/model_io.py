"""Reading and writing the model document format (`.vrp`).

Grammar (strings are double-quoted, `#` starts a line comment):

    model      := "process" STRING "{" item* "}"
    item       := activity | task | product | role | tool | varpoint
                | variant | dependency | edge          # edges in activities only
    activity   := "activity" ID STRING "{" item* "}"
    task       := "task" ID STRING "{" taskbody* "}"
    taskbody   := edge | varpoint
    edge       := ("input"|"output") STRING | "role" STRING | "tool" STRING
                | "invokes" ID
    product    := "product" STRING ["deliverable"]
    role       := "role" STRING          # declaration outside task bodies
    tool       := "tool" STRING
    varpoint   := "varpoint" NAME "kind" KIND ("optional"|"mandatory")
    variant    := "variant" KINDWORD STRING "{" variantbody* "}"
    variantbody:= edge | "deliverable"   # "deliverable" for product variants only
    dependency := "dependency" "variant2variant" STRING "->" STRING
                  "realize" ("input"|"output"|"invokes")

Inside a task body `role`/`tool` are performer/tool references; everywhere else
they declare resources. Products, roles, and tools are identified by their
name. Variant and dependency declarations may appear in any body and are
hoisted to the model level; canonical output emits them after the element tree.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ModelError, VrpSyntaxError
from .model import (
    VP_KINDS,
    Dependency,
    EdgeRef,
    ProcessElement,
    ProcessModel,
    Variant,
    VarPoint,
    validate_model,
)

_VARIANT_KINDWORDS = {
    "task": "task",
    "activity": "activity",
    "product": "work_product",
    "role": "role",
    "tool": "tool",
}
_KINDWORD_BY_KIND = {v: k for k, v in _VARIANT_KINDWORDS.items()}


# --- lexer -------------------------------------------------------------------

@dataclass(frozen=True)
class Token:
    kind: str  # IDENT, STRING, LBRACE, RBRACE, ARROW, EOF
    value: str
    line: int
    column: int


_IDENT_RE = re.compile(r"[A-Za-z0-9_]+(?:\.[A-Za-z0-9_]+)*")

_ESCAPES = {"n": "\n", "t": "\t", '"': '"', "\\": "\\"}


def tokenize(text: str, filename: str | None = None) -> list[Token]:
    tokens: list[Token] = []
    line, col = 1, 1
    i = 0
    n = len(text)
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
        if ch == "{":
            tokens.append(Token("LBRACE", "{", line, col))
            i += 1
            col += 1
            continue
        if ch == "}":
            tokens.append(Token("RBRACE", "}", line, col))
            i += 1
            col += 1
            continue
        if text.startswith("->", i):
            tokens.append(Token("ARROW", "->", line, col))
            i += 2
            col += 2
            continue
        if ch == '"':
            start_line, start_col = line, col
            i += 1
            col += 1
            parts: list[str] = []
            while True:
                if i >= n or text[i] == "\n":
                    raise VrpSyntaxError("unterminated string", start_line, start_col, filename)
                c = text[i]
                if c == '"':
                    i += 1
                    col += 1
                    break
                if c == "\\":
                    if i + 1 >= n or text[i + 1] not in _ESCAPES:
                        raise VrpSyntaxError("bad escape sequence", line, col, filename)
                    parts.append(_ESCAPES[text[i + 1]])
                    i += 2
                    col += 2
                    continue
                parts.append(c)
                i += 1
                col += 1
            tokens.append(Token("STRING", "".join(parts), start_line, start_col))
            continue
        m = _IDENT_RE.match(text, i)
        if m:
            tokens.append(Token("IDENT", m.group(0), line, col))
            col += len(m.group(0))
            i = m.end()
            continue
        raise VrpSyntaxError(f"unexpected character {ch!r}", line, col, filename)
    tokens.append(Token("EOF", "", line, col))
    return tokens


# --- parser ------------------------------------------------------------------

class _Parser:
    def __init__(self, text: str, filename: str | None = None):
        self.tokens = tokenize(text, filename)
        self.pos = 0
        self.filename = filename
        self.variants: list[Variant] = []
        self.dependencies: list[Dependency] = []

    @property
    def cur(self) -> Token:
        return self.tokens[self.pos]

    def error(self, message: str, token: Token | None = None) -> VrpSyntaxError:
        token = token or self.cur
        return VrpSyntaxError(message, token.line, token.column, self.filename)

    def advance(self) -> Token:
        token = self.cur
        self.pos += 1
        return token

    def expect(self, kind: str, what: str) -> Token:
        if self.cur.kind != kind:
            raise self.error(f"expected {what}, got {self.cur.value!r}")
        return self.advance()

    def expect_keyword(self, word: str) -> Token:
        if self.cur.kind != "IDENT" or self.cur.value != word:
            raise self.error(f"expected '{word}', got {self.cur.value!r}")
        return self.advance()

    def at_keyword(self, *words: str) -> bool:
        return self.cur.kind == "IDENT" and self.cur.value in words

    def parse_model(self) -> ProcessModel:
        self.expect_keyword("process")
        name = self.expect("STRING", "process name").value
        self.expect("LBRACE", "'{'")
        body = self.parse_body(context="root")
        self.expect("RBRACE", "'}'")
        self.expect("EOF", "end of document")
        return ProcessModel(name=name, body=tuple(body),
                            variants=tuple(self.variants),
                            dependencies=tuple(self.dependencies))

    def parse_body(self, context: str, owner: str | None = None) -> list:
        """context: 'root', 'activity', or 'task'."""

        body: list = []
        while self.cur.kind == "IDENT":
            word = self.cur.value
            if word == "activity" and context != "task":
                body.append(self.parse_work_unit("activity"))
            elif word == "task" and context != "task":
                body.append(self.parse_work_unit("task"))
            elif word == "product" and context != "task":
                body.append(self.parse_product())
            elif word == "varpoint":
                body.append(self.parse_varpoint(owner))
            elif word == "variant" and context != "task":
                self.parse_variant()
            elif word == "dependency" and context != "task":
                self.parse_dependency()
            elif word in ("input", "output") and context != "root":
                self.advance()
                target = self.expect("STRING", "work-product name").value
                body.append(EdgeRef(word, target))
            elif word == "invokes" and context != "root":
                self.advance()
                target = self.expect("IDENT", "work-unit id").value
                body.append(EdgeRef("invokes", target))
            elif word in ("role", "tool"):
                self.advance()
                name = self.expect("STRING", f"{word} name").value
                if context == "task":
                    body.append(EdgeRef(word, name))
                else:
                    body.append(ProcessElement(id=name, name=name, kind=word))
            else:
                raise self.error(f"unexpected '{word}' here")
        return body

    def parse_work_unit(self, kind: str) -> ProcessElement:
        self.advance()
        ident = self.expect("IDENT", f"{kind} id").value
        name = self.expect("STRING", f"{kind} name").value
        self.expect("LBRACE", "'{'")
        body = self.parse_body(context="task" if kind == "task" else "activity", owner=ident)
        self.expect("RBRACE", "'}'")
        return ProcessElement(id=ident, name=name, kind=kind, body=tuple(body))

    def parse_product(self) -> ProcessElement:
        self.advance()
        name = self.expect("STRING", "product name").value
        deliverable = False
        if self.at_keyword("deliverable"):
            self.advance()
            deliverable = True
        return ProcessElement(id=name, name=name, kind="work_product", deliverable=deliverable)

    def parse_varpoint(self, owner: str | None) -> VarPoint:
        self.advance()
        name_tok = self.expect("IDENT", "varpoint name")
        self.expect_keyword("kind")
        kind_tok = self.expect("IDENT", "varpoint kind")
        if kind_tok.value not in VP_KINDS:
            raise self.error(f"unknown varpoint kind '{kind_tok.value}'", kind_tok)
        if not self.at_keyword("optional", "mandatory"):
            raise self.error("expected 'optional' or 'mandatory'")
        policy = self.advance().value
        return VarPoint(name=name_tok.value, kind=kind_tok.value, owner=owner,
                        slot="body", is_implicit=False, policy=policy)

    def parse_variant(self) -> None:
        self.advance()
        kindword_tok = self.expect("IDENT", "variant kind")
        kind = _VARIANT_KINDWORDS.get(kindword_tok.value)
        if kind is None:
            raise self.error(f"unknown variant kind '{kindword_tok.value}'", kindword_tok)
        name = self.expect("STRING", "variant name").value
        self.expect("LBRACE", "'{'")
        body: list = []
        deliverable = False
        while self.cur.kind == "IDENT":
            word = self.cur.value
            if word in ("input", "output") and kind in ("task", "activity"):
                self.advance()
                body.append(EdgeRef(word, self.expect("STRING", "work-product name").value))
            elif word in ("role", "tool") and kind == "task":
                self.advance()
                body.append(EdgeRef(word, self.expect("STRING", f"{word} name").value))
            elif word == "invokes" and kind in ("task", "activity"):
                self.advance()
                body.append(EdgeRef("invokes", self.expect("IDENT", "work-unit id").value))
            elif word == "deliverable" and kind == "work_product":
                self.advance()
                deliverable = True
            else:
                raise self.error(f"unexpected '{word}' in variant body")
        self.expect("RBRACE", "'}'")
        payload_id = name if kind in ("work_product", "role", "tool") else ""
        payload = ProcessElement(id=payload_id, name=name, kind=kind,
                                 body=tuple(body), deliverable=deliverable)
        self.variants.append(Variant(name=name, payload=payload))

    def parse_dependency(self) -> None:
        self.advance()
        self.expect_keyword("variant2variant")
        source = self.expect("STRING", "variant name").value
        self.expect("ARROW", "'->'")
        target = self.expect("STRING", "variant name").value
        self.expect_keyword("realize")
        edge_tok = self.expect("IDENT", "edge kind")
        if edge_tok.value not in ("input", "output", "invokes"):
            raise self.error(f"unknown realize edge '{edge_tok.value}'", edge_tok)
        self.dependencies.append(Dependency(source=source, target=target,
                                            realize_edge=edge_tok.value))


def load_model(text: str, filename: str | None = None) -> ProcessModel:
    """Parse and validate a model document."""

    model = _Parser(text, filename).parse_model()
    validate_model(model)
    _validate_variant_payloads(model)
    return model


def _validate_variant_payloads(model: ProcessModel) -> None:
    from .model import EDGE_TARGET_KINDS, WORK_UNIT_KINDS, element_index, resolve_reference

    index = element_index(model)
    for variant in model.variants:
        for entry in variant.payload.body:
            if not isinstance(entry, EdgeRef):
                continue
            if entry.kind == "invokes":
                target = index.get(entry.target)
                if target is None or target.kind not in WORK_UNIT_KINDS:
                    raise ModelError(
                        f"variant '{variant.name}' invokes undeclared work unit '{entry.target}'")
                continue
            resolved = resolve_reference(model, entry.target)
            if resolved is None or resolved.kind != EDGE_TARGET_KINDS[entry.kind]:
                raise ModelError(
                    f"variant '{variant.name}' references undeclared "
                    f"{EDGE_TARGET_KINDS[entry.kind]} '{entry.target}'")


# --- serializer ----------------------------------------------------------------

def _quote(value: str) -> str:
    escaped = value.replace("\\", "\\\\").replace('"', '\\"')
    escaped = escaped.replace("\n", "\\n").replace("\t", "\\t")
    return f'"{escaped}"'


def serialize_model(model: ProcessModel) -> str:
    """Canonical text: 2-space indent, input declaration order, deterministic."""

    lines: list[str] = [f"process {_quote(model.name)} {{"]
    for entry in model.body:
        _render_entry(entry, 1, lines)
    for variant in model.variants:
        _render_variant(variant, 1, lines)
    for dep in model.dependencies:
        lines.append(
            f"  dependency variant2variant {_quote(dep.source)} -> {_quote(dep.target)} "
            f"realize {dep.realize_edge}")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _render_entry(entry, depth: int, lines: list[str]) -> None:
    pad = "  " * depth
    if isinstance(entry, ProcessElement):
        if entry.kind in ("activity", "task", "process"):
            lines.append(f"{pad}{entry.kind} {entry.id} {_quote(entry.name)} {{")
            for sub in entry.body:
                _render_entry(sub, depth + 1, lines)
            lines.append(f"{pad}}}")
        elif entry.kind == "work_product":
            suffix = " deliverable" if entry.deliverable else ""
            lines.append(f"{pad}product {_quote(entry.name)}{suffix}")
        else:
            lines.append(f"{pad}{entry.kind} {_quote(entry.name)}")
    elif isinstance(entry, EdgeRef):
        if entry.kind == "invokes":
            lines.append(f"{pad}invokes {entry.target}")
        else:
            lines.append(f"{pad}{entry.kind} {_quote(entry.target)}")
    elif isinstance(entry, VarPoint):
        lines.append(f"{pad}varpoint {entry.name} kind {entry.kind} {entry.policy}")
    else:
        raise ModelError(f"cannot serialize body entry {entry!r}")


def _render_variant(variant: Variant, depth: int, lines: list[str]) -> None:
    pad = "  " * depth
    kindword = _KINDWORD_BY_KIND[variant.payload.kind]
    lines.append(f"{pad}variant {kindword} {_quote(variant.name)} {{")
    if variant.payload.deliverable:
        lines.append(f"{pad}  deliverable")
    for entry in variant.payload.body:
        _render_entry(entry, depth + 1, lines)
    lines.append(f"{pad}}}")
