"""Aspect definition files (`.pasp`): AST, parser, and canonical printer.

Grammar (keywords are case-insensitive, `#` starts a line comment):

    file     := aspect*
    aspect   := "aspect" NAME "{" member* "}"
    member   := variantDecl | varpointDecl | pointcutDecl | adviceDecl
    variantDecl  := "variant" KINDWORD STRING "{" variantbody* "}"
    varpointDecl := "varpoint" NAME "kind" KIND ("optional"|"mandatory")
    pointcutDecl := "pointcut" NAME "(" paramList ")" ":" binding*
    paramList    := (TYPE NAME ("," TYPE NAME)*)?
    binding  := PARAM "=" "(" expr ")" [";"]
    expr     := expr "||" expr | expr "&&" expr | "!" expr
              | DESIGNATOR "(" PATTERN ")" | NAME "." PARAM | "(" expr ")"
    PATTERN  := STRING | "*"
    adviceDecl := "advice" pcExpr "(" paramList ")" "{" action* "}"
    action   := PARAM "." "occupe" "(" STRING ")" [";"]

Precedence is `!` over `&&` over `||`, binary operators left-associative.
TYPE is one of VPTask, VPActivity, VPWorkP, VPRole, VPTool; DESIGNATOR one of
call, execution, use, create, access, init, deliver, within. A binding
consisting solely of `within` designators is rejected: `within` restricts, it
does not select.
"""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass

from .errors import AspectError, UnboundParamWarning, VrpSyntaxError
from .model import VP_KINDS, EdgeRef, ProcessElement, Variant, VarPoint

PARAM_TYPES = ("VPTask", "VPActivity", "VPWorkP", "VPRole", "VPTool")
_PARAM_TYPE_LOOKUP = {t.lower(): t for t in PARAM_TYPES}

PARAM_TYPE_KINDS = {
    "VPTask": frozenset({"call", "execution"}),
    "VPActivity": frozenset({"call", "execution"}),
    "VPWorkP": frozenset({"use", "create", "init", "deliver"}),
    "VPRole": frozenset({"access"}),
    "VPTool": frozenset({"access"}),
}

# Subject-kind discrimination on top of the VP-kind sets; explicit VPs have no
# subject yet and pass any type whose kind set admits them.
PARAM_TYPE_SUBJECTS = {
    "VPTask": frozenset({"task"}),
    "VPActivity": frozenset({"activity", "process"}),
    "VPWorkP": frozenset({"work_product"}),
    "VPRole": frozenset({"role"}),
    "VPTool": frozenset({"tool"}),
}

DESIGNATOR_KINDS = VP_KINDS + ("within",)

_VARIANT_KINDWORDS = {
    "task": "task",
    "activity": "activity",
    "product": "work_product",
    "role": "role",
    "tool": "tool",
}
_KINDWORD_BY_KIND = {v: k for k, v in _VARIANT_KINDWORDS.items()}

_RESERVED = frozenset(
    {"aspect", "variant", "varpoint", "pointcut", "advice", "kind", "optional",
     "mandatory", "occupe", "deliverable", "input", "output", "invokes",
     "task", "activity", "product", "role", "tool"}
    | {d for d in DESIGNATOR_KINDS}
    | set(_PARAM_TYPE_LOOKUP))


# --- AST -------------------------------------------------------------------

@dataclass(frozen=True)
class Designator:
    kind: str
    pattern: str


@dataclass(frozen=True)
class And:
    left: object
    right: object


@dataclass(frozen=True)
class Or:
    left: object
    right: object


@dataclass(frozen=True)
class Not:
    operand: object


@dataclass(frozen=True)
class PointcutRef:
    pointcut: str
    param: str


@dataclass(frozen=True)
class PointcutName:
    """Leaf of an advice trigger expression."""

    name: str


@dataclass(frozen=True)
class PointcutParam:
    type: str
    name: str


@dataclass(frozen=True)
class Pointcut:
    name: str
    params: tuple[PointcutParam, ...]
    bindings: tuple[tuple[str, object], ...]

    def binding_for(self, param: str):
        for name, expr in self.bindings:
            if name == param:
                return expr
        return None

    def param_type(self, param: str) -> str | None:
        for p in self.params:
            if p.name == param:
                return p.type
        return None


@dataclass(frozen=True)
class AdviceAction:
    param: str
    variant: str


@dataclass(frozen=True)
class Advice:
    trigger: object
    params: tuple[PointcutParam, ...]
    actions: tuple[AdviceAction, ...]


@dataclass(frozen=True)
class ProcessAspect:
    name: str
    pointcuts: tuple[Pointcut, ...] = ()
    advices: tuple[Advice, ...] = ()
    owned_variants: tuple[Variant, ...] = ()
    owned_varpoints: tuple[VarPoint, ...] = ()
    active: bool = False

    def pointcut(self, name: str) -> Pointcut | None:
        for pc in self.pointcuts:
            if pc.name == name:
                return pc
        return None


# --- lexer -------------------------------------------------------------------

@dataclass(frozen=True)
class _Token:
    kind: str
    value: str
    line: int
    column: int


_PUNCT = {
    "&&": "AND", "||": "OR", "(": "LPAREN", ")": "RPAREN", "{": "LBRACE",
    "}": "RBRACE", ",": "COMMA", ":": "COLON", ";": "SEMI", ".": "DOT",
    "=": "EQ", "!": "NOT", "*": "STAR",
}
_WORD_RE = re.compile(r"[A-Za-z0-9_]+")
_ESCAPES = {"n": "\n", "t": "\t", '"': '"', "\\": "\\"}


def _tokenize(text: str, filename: str | None) -> list[_Token]:
    tokens: list[_Token] = []
    line, col, i, n = 1, 1, 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line, col = line + 1, 1
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
            tokens.append(_Token("STRING", "".join(parts), start_line, start_col))
            continue
        two = text[i:i + 2]
        if two in _PUNCT:
            tokens.append(_Token(_PUNCT[two], two, line, col))
            i += 2
            col += 2
            continue
        if ch in _PUNCT:
            tokens.append(_Token(_PUNCT[ch], ch, line, col))
            i += 1
            col += 1
            continue
        m = _WORD_RE.match(text, i)
        if m:
            tokens.append(_Token("IDENT", m.group(0), line, col))
            col += len(m.group(0))
            i = m.end()
            continue
        raise VrpSyntaxError(f"unexpected character {ch!r}", line, col, filename)
    tokens.append(_Token("EOF", "", line, col))
    return tokens


# --- parser ------------------------------------------------------------------

class _AspectParser:
    def __init__(self, text: str, filename: str | None = None):
        self.tokens = _tokenize(text, filename)
        self.pos = 0
        self.filename = filename

    @property
    def cur(self) -> _Token:
        return self.tokens[self.pos]

    def peek(self, offset: int = 1) -> _Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def error(self, message: str, token: _Token | None = None) -> VrpSyntaxError:
        token = token or self.cur
        return VrpSyntaxError(message, token.line, token.column, self.filename)

    def advance(self) -> _Token:
        token = self.cur
        self.pos += 1
        return token

    def expect(self, kind: str, what: str) -> _Token:
        if self.cur.kind != kind:
            raise self.error(f"expected {what}, got {self.cur.value!r}")
        return self.advance()

    def at_keyword(self, *words: str) -> bool:
        return self.cur.kind == "IDENT" and self.cur.value.lower() in words

    def expect_keyword(self, word: str) -> _Token:
        if not self.at_keyword(word):
            raise self.error(f"expected '{word}', got {self.cur.value!r}")
        return self.advance()

    def expect_name(self, what: str) -> str:
        token = self.expect("IDENT", what)
        if token.value.lower() in _RESERVED:
            raise self.error(f"'{token.value}' is a reserved word", token)
        return token.value

    def parse_file(self) -> tuple[ProcessAspect, ...]:
        aspects: list[ProcessAspect] = []
        names: set[str] = set()
        while self.cur.kind != "EOF":
            aspect = self.parse_aspect()
            if aspect.name in names:
                raise AspectError(f"duplicate aspect '{aspect.name}'")
            names.add(aspect.name)
            aspects.append(aspect)
        return tuple(aspects)

    def parse_aspect(self) -> ProcessAspect:
        self.expect_keyword("aspect")
        name = self.expect_name("aspect name")
        self.expect("LBRACE", "'{'")
        pointcuts: list[Pointcut] = []
        advices: list[Advice] = []
        variants: list[Variant] = []
        varpoints: list[VarPoint] = []
        while not self.cur.kind == "RBRACE":
            if self.at_keyword("pointcut"):
                pointcuts.append(self.parse_pointcut(pointcuts))
            elif self.at_keyword("advice"):
                advices.append(self.parse_advice(pointcuts))
            elif self.at_keyword("variant"):
                variants.append(self.parse_variant(name))
            elif self.at_keyword("varpoint"):
                varpoints.append(self.parse_varpoint())
            else:
                raise self.error(f"unexpected {self.cur.value!r} in aspect body")
        self.expect("RBRACE", "'}'")
        _check_unique(variants, varpoints, name)
        return ProcessAspect(name=name, pointcuts=tuple(pointcuts), advices=tuple(advices),
                             owned_variants=tuple(variants), owned_varpoints=tuple(varpoints))

    def parse_params(self) -> tuple[PointcutParam, ...]:
        self.expect("LPAREN", "'('")
        params: list[PointcutParam] = []
        if self.cur.kind != "RPAREN":
            while True:
                type_tok = self.expect("IDENT", "parameter type")
                ptype = _PARAM_TYPE_LOOKUP.get(type_tok.value.lower())
                if ptype is None:
                    raise self.error(f"unknown parameter type '{type_tok.value}'", type_tok)
                pname = self.expect_name("parameter name")
                if any(p.name == pname for p in params):
                    raise self.error(f"duplicate parameter '{pname}'")
                params.append(PointcutParam(type=ptype, name=pname))
                if self.cur.kind != "COMMA":
                    break
                self.advance()
        self.expect("RPAREN", "')'")
        return tuple(params)

    def parse_pointcut(self, declared: list[Pointcut]) -> Pointcut:
        self.expect_keyword("pointcut")
        name_tok = self.cur
        name = self.expect_name("pointcut name")
        if any(pc.name == name for pc in declared):
            raise self.error(f"duplicate pointcut '{name}'", name_tok)
        params = self.parse_params()
        self.expect("COLON", "':'")
        bindings: list[tuple[str, object]] = []
        while self.cur.kind == "IDENT" and self.peek().kind == "EQ":
            param_tok = self.advance()
            if all(p.name != param_tok.value for p in params):
                raise self.error(f"binding for undeclared parameter '{param_tok.value}'",
                                 param_tok)
            if any(b[0] == param_tok.value for b in bindings):
                raise self.error(f"parameter '{param_tok.value}' bound twice", param_tok)
            self.expect("EQ", "'='")
            self.expect("LPAREN", "'('")
            expr = self.parse_expr()
            self.expect("RPAREN", "')'")
            if self.cur.kind == "SEMI":
                self.advance()
            if _within_only(expr):
                raise self.error(
                    f"binding for '{param_tok.value}' uses only within(); "
                    f"conjoin a selecting designator", param_tok)
            bindings.append((param_tok.value, expr))
        pointcut = Pointcut(name=name, params=params, bindings=tuple(bindings))
        for param in params:
            if pointcut.binding_for(param.name) is None:
                warnings.warn(
                    f"pointcut '{name}': parameter '{param.name}' has no binding",
                    UnboundParamWarning, stacklevel=4)
        return pointcut

    def parse_expr(self):
        expr = self.parse_and()
        while self.cur.kind == "OR":
            self.advance()
            expr = Or(expr, self.parse_and())
        return expr

    def parse_and(self):
        expr = self.parse_unary()
        while self.cur.kind == "AND":
            self.advance()
            expr = And(expr, self.parse_unary())
        return expr

    def parse_unary(self):
        if self.cur.kind == "NOT":
            self.advance()
            return Not(self.parse_unary())
        return self.parse_primary()

    def parse_primary(self):
        if self.cur.kind == "LPAREN":
            self.advance()
            expr = self.parse_expr()
            self.expect("RPAREN", "')'")
            return expr
        token = self.expect("IDENT", "designator or pointcut reference")
        word = token.value.lower()
        if word in DESIGNATOR_KINDS:
            self.expect("LPAREN", "'('")
            if self.cur.kind == "STAR":
                self.advance()
                pattern = "*"
            elif self.cur.kind == "STRING":
                pattern = self.advance().value
            else:
                raise self.error("expected a pattern (string or *)")
            self.expect("RPAREN", "')'")
            return Designator(kind=word, pattern=pattern)
        if self.cur.kind == "DOT":
            self.advance()
            param = self.expect("IDENT", "parameter name").value
            return PointcutRef(pointcut=token.value, param=param)
        raise self.error(f"unknown designator '{token.value}'", token)

    def parse_advice(self, declared: list[Pointcut]) -> Advice:
        self.expect_keyword("advice")
        trigger = self.parse_trigger()
        params = self.parse_params()
        self.expect("LBRACE", "'{'")
        actions: list[AdviceAction] = []
        while self.cur.kind != "RBRACE":
            param_tok = self.expect("IDENT", "parameter name")
            if all(p.name != param_tok.value for p in params):
                raise self.error(f"action on undeclared parameter '{param_tok.value}'",
                                 param_tok)
            self.expect("DOT", "'.'")
            self.expect_keyword("occupe")
            self.expect("LPAREN", "'('")
            variant = self.expect("STRING", "variant name").value
            self.expect("RPAREN", "')'")
            if self.cur.kind == "SEMI":
                self.advance()
            actions.append(AdviceAction(param=param_tok.value, variant=variant))
        self.expect("RBRACE", "'}'")
        advice = Advice(trigger=trigger, params=params, actions=tuple(actions))
        _check_advice(advice, declared, self)
        return advice

    def parse_trigger(self):
        expr = self.parse_trigger_and()
        while self.cur.kind == "OR":
            self.advance()
            expr = Or(expr, self.parse_trigger_and())
        return expr

    def parse_trigger_and(self):
        expr = self.parse_trigger_unary()
        while self.cur.kind == "AND":
            self.advance()
            expr = And(expr, self.parse_trigger_unary())
        return expr

    def parse_trigger_unary(self):
        if self.cur.kind == "NOT":
            self.advance()
            return Not(self.parse_trigger_unary())
        if self.cur.kind == "LPAREN":
            # Only a grouped trigger: a name followed by '(' is the param list.
            self.advance()
            expr = self.parse_trigger()
            self.expect("RPAREN", "')'")
            return expr
        name = self.expect_name("pointcut name")
        return PointcutName(name)

    def parse_variant(self, aspect_name: str) -> Variant:
        self.expect_keyword("variant")
        kindword_tok = self.expect("IDENT", "variant kind")
        kind = _VARIANT_KINDWORDS.get(kindword_tok.value.lower())
        if kind is None:
            raise self.error(f"unknown variant kind '{kindword_tok.value}'", kindword_tok)
        name = self.expect("STRING", "variant name").value
        self.expect("LBRACE", "'{'")
        body: list = []
        deliverable = False
        while self.cur.kind == "IDENT":
            word = self.cur.value.lower()
            if word in ("input", "output") and kind in ("task", "activity"):
                self.advance()
                body.append(EdgeRef(word, self.expect("STRING", "work-product name").value))
            elif word in ("role", "tool") and kind == "task":
                self.advance()
                body.append(EdgeRef(word, self.expect("STRING", f"{word} name").value))
            elif word == "invokes" and kind in ("task", "activity"):
                self.advance()
                body.append(EdgeRef("invokes", self.parse_dotted_id()))
            elif word == "deliverable" and kind == "work_product":
                self.advance()
                deliverable = True
            else:
                raise self.error(f"unexpected '{self.cur.value}' in variant body")
        self.expect("RBRACE", "'}'")
        payload_id = name if kind in ("work_product", "role", "tool") else ""
        payload = ProcessElement(id=payload_id, name=name, kind=kind,
                                 body=tuple(body), deliverable=deliverable)
        return Variant(name=name, payload=payload, owning_aspect=aspect_name)

    def parse_dotted_id(self) -> str:
        parts = [self.expect("IDENT", "work-unit id").value]
        while self.cur.kind == "DOT":
            self.advance()
            parts.append(self.expect("IDENT", "id segment").value)
        return ".".join(parts)

    def parse_varpoint(self) -> VarPoint:
        self.expect_keyword("varpoint")
        name = self.expect_name("varpoint name")
        self.expect_keyword("kind")
        kind_tok = self.expect("IDENT", "varpoint kind")
        if kind_tok.value.lower() not in VP_KINDS:
            raise self.error(f"unknown varpoint kind '{kind_tok.value}'", kind_tok)
        if not self.at_keyword("optional", "mandatory"):
            raise self.error("expected 'optional' or 'mandatory'")
        policy = self.advance().value.lower()
        return VarPoint(name=name, kind=kind_tok.value.lower(), owner=None,
                        slot="aspect", is_implicit=False, policy=policy)


def _within_only(expr) -> bool:
    """True when no selecting leaf (non-within designator or pointcut ref) appears."""

    if isinstance(expr, Designator):
        return expr.kind == "within"
    if isinstance(expr, PointcutRef):
        return False
    if isinstance(expr, Not):
        return _within_only(expr.operand)
    if isinstance(expr, (And, Or)):
        return _within_only(expr.left) and _within_only(expr.right)
    return True


def _trigger_names(expr) -> set[str]:
    if isinstance(expr, PointcutName):
        return {expr.name}
    if isinstance(expr, Not):
        return _trigger_names(expr.operand)
    if isinstance(expr, (And, Or)):
        return _trigger_names(expr.left) | _trigger_names(expr.right)
    return set()


def _check_advice(advice: Advice, declared: list[Pointcut], parser: _AspectParser) -> None:
    by_name = {pc.name: pc for pc in declared}
    referenced = _trigger_names(advice.trigger)
    for name in sorted(referenced):
        if name not in by_name:
            raise AspectError(f"advice references unknown pointcut '{name}'")
    for param in advice.params:
        types = {by_name[n].param_type(param.name)
                 for n in referenced if by_name[n].param_type(param.name) is not None}
        if not types:
            raise AspectError(
                f"advice parameter '{param.name}' is not declared by its pointcut(s)")
        if types != {param.type}:
            raise AspectError(
                f"advice parameter '{param.name}' declared {param.type}, "
                f"pointcut says {sorted(types)[0]}")


def _check_unique(variants: list[Variant], varpoints: list[VarPoint], aspect: str) -> None:
    seen: set[str] = set()
    for variant in variants:
        if variant.name in seen:
            raise AspectError(f"aspect '{aspect}': duplicate variant '{variant.name}'")
        seen.add(variant.name)
    vp_seen: set[str] = set()
    for vp in varpoints:
        if vp.name in vp_seen:
            raise AspectError(f"aspect '{aspect}': duplicate varpoint '{vp.name}'")
        vp_seen.add(vp.name)


def parse_aspect_file(text: str, filename: str | None = None) -> tuple[ProcessAspect, ...]:
    """Parse an aspect document; intra-aspect names are resolved here, variant
    names referenced by occupe actions only at link time (they may live in the
    model's repository)."""

    aspects = _AspectParser(text, filename).parse_file()
    for aspect in aspects:
        _check_binding_kinds(aspect)
    return aspects


def _check_binding_kinds(aspect: ProcessAspect) -> None:
    """Reject bindings that can never match their parameter's kind set."""

    for pc in aspect.pointcuts:
        for param_name, expr in pc.bindings:
            ptype = pc.param_type(param_name)
            possible = _possible_kinds(expr, aspect, frozenset())
            if not possible & PARAM_TYPE_KINDS[ptype]:
                raise AspectError(
                    f"pointcut '{pc.name}': binding for '{param_name}' "
                    f"({ptype}) can never match; designator kinds {sorted(possible)}")


_ALL_KINDS = frozenset(VP_KINDS)


def _possible_kinds(expr, aspect: ProcessAspect, visiting: frozenset) -> frozenset:
    if isinstance(expr, Designator):
        return _ALL_KINDS if expr.kind == "within" else frozenset({expr.kind})
    if isinstance(expr, Not):
        return _ALL_KINDS
    if isinstance(expr, And):
        return (_possible_kinds(expr.left, aspect, visiting)
                & _possible_kinds(expr.right, aspect, visiting))
    if isinstance(expr, Or):
        return (_possible_kinds(expr.left, aspect, visiting)
                | _possible_kinds(expr.right, aspect, visiting))
    if isinstance(expr, PointcutRef):
        if expr.pointcut in visiting:
            return _ALL_KINDS  # cycles reported at evaluation time
        target = aspect.pointcut(expr.pointcut)
        if target is None:
            raise AspectError(f"reference to unknown pointcut '{expr.pointcut}'")
        ptype = target.param_type(expr.param)
        if ptype is None:
            raise AspectError(
                f"pointcut '{expr.pointcut}' has no parameter '{expr.param}'")
        bound = target.binding_for(expr.param)
        kinds = PARAM_TYPE_KINDS[ptype]
        if bound is not None:
            kinds = kinds & _possible_kinds(bound, aspect, visiting | {expr.pointcut})
        return kinds
    raise AspectError(f"unknown expression node {expr!r}")


# --- printer -------------------------------------------------------------------

def _quote(value: str) -> str:
    escaped = value.replace("\\", "\\\\").replace('"', '\\"')
    escaped = escaped.replace("\n", "\\n").replace("\t", "\\t")
    return f'"{escaped}"'


def _pattern_text(pattern: str) -> str:
    return "*" if pattern == "*" else _quote(pattern)


_PRECEDENCE = {Or: 1, And: 2, Not: 3}


def format_expr(expr, parent_prec: int = 0, right_side: bool = False) -> str:
    if isinstance(expr, Designator):
        return f"{expr.kind}({_pattern_text(expr.pattern)})"
    if isinstance(expr, PointcutRef):
        return f"{expr.pointcut}.{expr.param}"
    if isinstance(expr, PointcutName):
        return expr.name
    if isinstance(expr, Not):
        return f"!{format_expr(expr.operand, _PRECEDENCE[Not])}"
    op = "&&" if isinstance(expr, And) else "||"
    prec = _PRECEDENCE[type(expr)]
    text = (f"{format_expr(expr.left, prec)} {op} "
            f"{format_expr(expr.right, prec, right_side=True)}")
    if prec < parent_prec or (prec == parent_prec and right_side):
        return f"({text})"
    return text


def _format_params(params: tuple[PointcutParam, ...]) -> str:
    return ", ".join(f"{p.type} {p.name}" for p in params)


def format_aspects(aspects) -> str:
    """Canonical text; members grouped as variants, varpoints, pointcuts, advices."""

    lines: list[str] = []
    for aspect in aspects:
        lines.append(f"aspect {aspect.name} {{")
        for variant in aspect.owned_variants:
            kindword = _KINDWORD_BY_KIND[variant.payload.kind]
            lines.append(f"  variant {kindword} {_quote(variant.name)} {{")
            if variant.payload.deliverable:
                lines.append("    deliverable")
            for entry in variant.payload.body:
                if entry.kind == "invokes":
                    lines.append(f"    invokes {entry.target}")
                else:
                    lines.append(f"    {entry.kind} {_quote(entry.target)}")
            lines.append("  }")
        for vp in aspect.owned_varpoints:
            lines.append(f"  varpoint {vp.name} kind {vp.kind} {vp.policy}")
        for pc in aspect.pointcuts:
            lines.append(f"  pointcut {pc.name}({_format_params(pc.params)}):")
            for param, expr in pc.bindings:
                lines.append(f"    {param} = ({format_expr(expr)});")
        for advice in aspect.advices:
            trigger = format_expr(advice.trigger)
            lines.append(f"  advice {trigger}({_format_params(advice.params)}) {{")
            for action in advice.actions:
                lines.append(f"    {action.param}.occupe({_quote(action.variant)});")
            lines.append("  }")
        lines.append("}")
    return "\n".join(lines) + ("\n" if lines else "")
