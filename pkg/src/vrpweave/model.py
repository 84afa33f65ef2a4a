"""Process-element tree, variation-point records, identifier patterns, and lookups.

A model is an ordered tree of process elements. Work units (process, activity,
task) own a `body`: an ordered mix of child elements, edge references
(input/output/role/tool/invokes), and explicit variation-point declarations.
Body order is the document order and is preserved through serialization.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ModelError

ELEMENT_KINDS = ("process", "activity", "task", "work_product", "role", "tool")
WORK_UNIT_KINDS = frozenset({"process", "activity", "task"})
CONTAINER_KINDS = frozenset({"process", "activity"})

VP_KINDS = ("call", "execution", "use", "create", "access", "init", "deliver")
EDGE_KINDS = ("input", "output", "role", "tool", "invokes")
REALIZE_EDGE_KINDS = ("input", "output", "invokes")

# Edge kind -> kind of element the target must resolve to.
EDGE_TARGET_KINDS = {
    "input": "work_product",
    "output": "work_product",
    "role": "role",
    "tool": "tool",
    "invokes": None,  # any work unit
}

# Payload element kind -> VP kinds it may occupy.
PAYLOAD_VP_KINDS = {
    "process": frozenset({"call", "execution"}),
    "activity": frozenset({"call", "execution"}),
    "task": frozenset({"call", "execution"}),
    "work_product": frozenset({"use", "create", "init", "deliver"}),
    "role": frozenset({"access"}),
    "tool": frozenset({"access"}),
}


@dataclass(frozen=True)
class EdgeRef:
    """One edge entry in a work unit's body: `input "X"`, `invokes 1.2.3`, ..."""

    kind: str
    target: str


@dataclass(frozen=True)
class VarPoint:
    """A typed slot at a join point.

    Explicit VPs are authored declarations sitting at a body position of their
    owner; implicit VPs are derived from the structure and carry the id of the
    element at their slot in `subject`. `owner` is None for top-level slots.
    """

    name: str
    kind: str
    owner: str | None
    slot: str
    is_implicit: bool = False
    policy: str = "optional"
    subject: str | None = None


@dataclass(frozen=True)
class ProcessElement:
    id: str
    name: str
    kind: str
    body: tuple = ()
    deliverable: bool = False

    def __post_init__(self):
        if self.kind not in ELEMENT_KINDS:
            raise ModelError(f"unknown element kind '{self.kind}'")

    @property
    def children(self) -> tuple[ProcessElement, ...]:
        return tuple(e for e in self.body if isinstance(e, ProcessElement))

    @property
    def varpoints(self) -> tuple[VarPoint, ...]:
        return tuple(e for e in self.body if isinstance(e, VarPoint))

    def _edges(self, kind: str) -> tuple[str, ...]:
        return tuple(e.target for e in self.body if isinstance(e, EdgeRef) and e.kind == kind)

    @property
    def inputs(self) -> tuple[str, ...]:
        return self._edges("input")

    @property
    def outputs(self) -> tuple[str, ...]:
        return self._edges("output")

    @property
    def performers(self) -> tuple[str, ...]:
        return self._edges("role")

    @property
    def tools(self) -> tuple[str, ...]:
        return self._edges("tool")

    @property
    def invokes(self) -> tuple[str, ...]:
        return self._edges("invokes")


@dataclass(frozen=True)
class Variant:
    """A concrete element held in reserve; `payload.name` equals the variant name.

    Work-unit payloads carry an empty id until materialization assigns one;
    product/role/tool payloads use their name as id.
    """

    name: str
    payload: ProcessElement
    owning_aspect: str | None = None


@dataclass(frozen=True)
class Dependency:
    source: str
    target: str
    realize_edge: str
    kind: str = "variant2variant"


@dataclass(frozen=True)
class ProcessModel:
    name: str
    body: tuple = ()
    variants: tuple[Variant, ...] = ()
    dependencies: tuple[Dependency, ...] = ()

    @property
    def roots(self) -> tuple[ProcessElement, ...]:
        return tuple(e for e in self.body if isinstance(e, ProcessElement))

    @property
    def explicit_varpoints(self) -> tuple[VarPoint, ...]:
        found: list[VarPoint] = []

        def walk(body: tuple) -> None:
            for entry in body:
                if isinstance(entry, VarPoint):
                    found.append(entry)
                elif isinstance(entry, ProcessElement):
                    walk(entry.body)

        walk(self.body)
        return tuple(found)


def iter_elements(model: ProcessModel):
    """Yield every element in document (pre-order) order."""

    def walk(element: ProcessElement):
        yield element
        for child in element.children:
            yield from walk(child)

    for root in model.roots:
        yield from walk(root)


def element_index(model: ProcessModel) -> dict[str, ProcessElement]:
    """id -> element map (duplicates rejected by validate_model)."""

    index: dict[str, ProcessElement] = {}
    for element in iter_elements(model):
        index.setdefault(element.id, element)
    return index


def parent_index(model: ProcessModel) -> dict[str, str | None]:
    """element id -> parent element id (None for roots)."""

    parents: dict[str, str | None] = {}

    def walk(element: ProcessElement, parent: str | None):
        parents.setdefault(element.id, parent)
        for child in element.children:
            walk(child, element.id)

    for root in model.roots:
        walk(root, None)
    return parents


def ancestor_chain(model: ProcessModel, element_id: str) -> list[ProcessElement]:
    """The element itself followed by its ancestors, innermost first."""

    index = element_index(model)
    parents = parent_index(model)
    chain: list[ProcessElement] = []
    cursor: str | None = element_id
    while cursor is not None and cursor in index:
        chain.append(index[cursor])
        cursor = parents.get(cursor)
    return chain


def variant_by_name(model: ProcessModel, extra: tuple[Variant, ...] = ()) -> dict[str, Variant]:
    table: dict[str, Variant] = {}
    for variant in (*extra, *model.variants):
        table.setdefault(variant.name, variant)
    return table


def resolve_reference(model: ProcessModel, ref: str,
                      extra_variants: tuple[Variant, ...] = ()) -> ProcessElement | None:
    """Resolve an edge target to a declared element, else a variant payload."""

    element = element_index(model).get(ref)
    if element is not None:
        return element
    variant = variant_by_name(model, extra_variants).get(ref)
    if variant is not None:
        return variant.payload
    return None


# --- identifier patterns ---------------------------------------------------

_ID_ONLY = re.compile(r"^[0-9.*]*$")


def pattern_matches_text(pattern: str, text: str) -> bool:
    """`*` matches any (possibly empty) run; a star-free pattern is exact equality."""

    if "*" not in pattern:
        return pattern == text
    regex = ".*".join(re.escape(part) for part in pattern.split("*"))
    return re.fullmatch(regex, text) is not None


def match_pattern(pattern: str, element: ProcessElement) -> bool:
    """Match against the dotted id; patterns with non-id characters also try the name."""

    if pattern_matches_text(pattern, element.id):
        return True
    if not _ID_ONLY.match(pattern):
        return pattern_matches_text(pattern, element.name)
    return False


def find_elements(model: ProcessModel, kind: str | None, pattern: str) -> list[ProcessElement]:
    """All elements of the given kind (None = any) matching the pattern, document order."""

    return [e for e in iter_elements(model)
            if (kind is None or e.kind == kind) and match_pattern(pattern, e)]


# --- validation ------------------------------------------------------------

_GENERATED_NAME_CHARS = re.compile(r"[@#]")


def validate_model(model: ProcessModel) -> None:
    """Enforce the structural invariants; raise ModelError on the first violation."""

    seen_ids: set[str] = set()
    for element in iter_elements(model):
        if element.id in seen_ids:
            raise ModelError(f"duplicate element id '{element.id}'")
        seen_ids.add(element.id)

    variant_names: set[str] = set()
    for variant in model.variants:
        if variant.name in variant_names:
            raise ModelError(f"duplicate variant '{variant.name}'")
        variant_names.add(variant.name)

    vp_names: set[str] = set()
    for vp in model.explicit_varpoints:
        if _GENERATED_NAME_CHARS.search(vp.name):
            raise ModelError(f"varpoint name '{vp.name}' uses reserved characters '@'/'#'")
        if vp.name in vp_names:
            raise ModelError(f"duplicate varpoint '{vp.name}'")
        vp_names.add(vp.name)

    index = element_index(model)
    for element in iter_elements(model):
        _validate_body(model, element, index)
    _validate_top_level(model)

    for dep in model.dependencies:
        _validate_dependency(model, dep)


def _validate_body(model: ProcessModel, element: ProcessElement,
                   index: dict[str, ProcessElement]) -> None:
    if element.kind in ("work_product", "role", "tool"):
        if element.body:
            raise ModelError(f"'{element.id}' ({element.kind}) cannot have a body")
        return
    if element.deliverable:
        raise ModelError(f"'{element.id}' ({element.kind}) cannot be deliverable")

    for entry in element.body:
        if isinstance(entry, ProcessElement):
            if element.kind not in CONTAINER_KINDS:
                raise ModelError(
                    f"task '{element.id}' cannot contain '{entry.id}': tasks are leaves")
            if entry.kind == "process":
                raise ModelError(f"'{entry.id}': processes cannot be nested")
        elif isinstance(entry, EdgeRef):
            _validate_edge(model, element, entry, index)
        elif isinstance(entry, VarPoint):
            _validate_explicit_vp(element, entry)


def _validate_edge(model: ProcessModel, host: ProcessElement, edge: EdgeRef,
                   index: dict[str, ProcessElement]) -> None:
    if edge.kind in ("role", "tool") and host.kind != "task":
        # Inside container bodies `role`/`tool` declare resources, so performer
        # wiring is only expressible on tasks.
        raise ModelError(
            f"'{host.id}' ({host.kind}) cannot reference a {edge.kind}; "
            f"only tasks carry performer/tool slots")
    if edge.kind == "invokes":
        target = index.get(edge.target)
        if target is None or target.kind not in WORK_UNIT_KINDS:
            raise ModelError(
                f"'{host.id}' invokes undeclared work unit '{edge.target}'")
        return
    resolved = resolve_reference(model, edge.target)
    if resolved is None:
        raise ModelError(
            f"'{host.id}' references undeclared {EDGE_TARGET_KINDS[edge.kind]} '{edge.target}'")
    if resolved.kind != EDGE_TARGET_KINDS[edge.kind]:
        raise ModelError(
            f"'{host.id}' {edge.kind} reference '{edge.target}' is a {resolved.kind}, "
            f"expected {EDGE_TARGET_KINDS[edge.kind]}")


def _validate_explicit_vp(host: ProcessElement, vp: VarPoint) -> None:
    if vp.kind == "execution" and host.kind == "task":
        raise ModelError(
            f"varpoint '{vp.name}': execution slots need a container owner, "
            f"'{host.id}' is a task")
    if vp.kind == "access" and host.kind != "task":
        raise ModelError(
            f"varpoint '{vp.name}': access slots need a task owner, "
            f"'{host.id}' is a {host.kind}")
    if vp.is_implicit:
        raise ModelError(f"varpoint '{vp.name}' cannot be declared implicit")


def _validate_top_level(model: ProcessModel) -> None:
    for entry in model.body:
        if isinstance(entry, EdgeRef):
            raise ModelError(f"top-level {entry.kind} edge '{entry.target}' has no owner")
        if isinstance(entry, VarPoint) and entry.kind != "execution":
            raise ModelError(
                f"varpoint '{entry.name}': kind {entry.kind} requires a work-unit owner")


def _validate_dependency(model: ProcessModel, dep: Dependency) -> None:
    variants = variant_by_name(model)
    for endpoint in (dep.source, dep.target):
        if endpoint not in variants:
            raise ModelError(f"dependency endpoint '{endpoint}' is not a declared variant")
    if dep.realize_edge not in REALIZE_EDGE_KINDS:
        raise ModelError(f"unknown realize edge '{dep.realize_edge}'")
    source_kind = variants[dep.source].payload.kind
    target_kind = variants[dep.target].payload.kind
    kinds = {source_kind, target_kind}
    if dep.realize_edge == "invokes":
        if not kinds <= WORK_UNIT_KINDS:
            raise ModelError(
                f"dependency '{dep.source}' -> '{dep.target}': realize invokes "
                f"needs two work-unit variants")
    else:
        work_units = [k for k in (source_kind, target_kind) if k in WORK_UNIT_KINDS]
        products = [k for k in (source_kind, target_kind) if k == "work_product"]
        if len(work_units) != 1 or len(products) != 1:
            raise ModelError(
                f"dependency '{dep.source}' -> '{dep.target}': realize {dep.realize_edge} "
                f"needs one work-unit and one work-product variant")
