"""Variation-point derivation, occupations, and variant dependencies.

Implicit variation points exist at every well-known join point of the process
structure: one `execution` slot per work unit, one `call` per invokes edge, one
`use`/`create` per input/output slot, one `access` per performer/tool slot, one
`init` at each work product's first use, and one `deliver` at a deliverable
product's first output slot. Their generated names carry `@`/`#`, which
authored names cannot contain, so the explicit/implicit partition is by
construction.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    AlreadyOccupiedError,
    ImplicitBindingError,
    KindMismatchError,
    UnoccupiedEndpointError,
)
from .model import (
    PAYLOAD_VP_KINDS,
    WORK_UNIT_KINDS,
    Dependency,
    EdgeRef,
    ProcessElement,
    ProcessModel,
    Variant,
    VarPoint,
)

ORIGIN_MANUAL = "manual"


def advice_origin(aspect_name: str) -> str:
    return f"advice({aspect_name})"


@dataclass(frozen=True)
class Anchor:
    """Physical position of a variation point inside a body.

    `mode` is "replace" for explicit declarations (the entry at `index` is the
    declaration itself) and "before" for implicit slots (a materialized payload
    is inserted before `index`).
    """

    scope: str | None
    index: int
    mode: str


def varpoint_anchors(model: ProcessModel) -> list[tuple[VarPoint, Anchor]]:
    """The full VP population (explicit and implicit) in document order, with anchors."""

    pairs: list[tuple[VarPoint, Anchor]] = []
    first_use_seen: set[str] = set()
    first_delivery_seen: set[str] = set()
    product_kinds = _product_kind_table(model)

    def walk_body(scope: str | None, body: tuple) -> None:
        counters = {"input": 0, "output": 0, "role": 0, "tool": 0, "invokes": 0}
        pending: list[tuple[VarPoint, Anchor]] = []
        for index, entry in enumerate(body):
            if isinstance(entry, ProcessElement):
                if entry.kind in WORK_UNIT_KINDS:
                    vp = VarPoint(name=f"execution@{entry.id}", kind="execution",
                                  owner=entry.id, slot="def", is_implicit=True,
                                  subject=entry.id)
                    pairs.append((vp, Anchor(scope, index, "before")))
                    walk_body(entry.id, entry.body)
            elif isinstance(entry, VarPoint):
                pairs.append((entry, Anchor(scope, index, "replace")))
            elif isinstance(entry, EdgeRef) and scope is not None:
                j = counters[entry.kind]
                counters[entry.kind] += 1
                anchor = Anchor(scope, index, "before")
                if entry.kind == "invokes":
                    vp = VarPoint(name=f"call@{scope}#invokes{j}", kind="call",
                                  owner=scope, slot=f"invokes{j}", is_implicit=True,
                                  subject=entry.target)
                    pairs.append((vp, anchor))
                elif entry.kind == "input":
                    vp = VarPoint(name=f"use@{scope}#in{j}", kind="use", owner=scope,
                                  slot=f"in{j}", is_implicit=True, subject=entry.target)
                    pairs.append((vp, anchor))
                    if entry.target not in first_use_seen:
                        first_use_seen.add(entry.target)
                        init_vp = VarPoint(name=f"init@{entry.target}", kind="init",
                                           owner=entry.target, slot=f"use@{scope}#in{j}",
                                           is_implicit=True, subject=entry.target)
                        pending.append((init_vp, anchor))
                elif entry.kind == "output":
                    vp = VarPoint(name=f"create@{scope}#out{j}", kind="create",
                                  owner=scope, slot=f"out{j}", is_implicit=True,
                                  subject=entry.target)
                    pairs.append((vp, anchor))
                    if (product_kinds.get(entry.target) == "deliverable"
                            and entry.target not in first_delivery_seen):
                        first_delivery_seen.add(entry.target)
                        deliver_vp = VarPoint(name=f"deliver@{scope}#out{j}", kind="deliver",
                                              owner=scope, slot=f"out{j}", is_implicit=True,
                                              subject=entry.target)
                        pending.append((deliver_vp, anchor))
                else:  # role / tool performer slots
                    vp = VarPoint(name=f"access@{scope}#{entry.kind}{j}", kind="access",
                                  owner=scope, slot=f"{entry.kind}{j}", is_implicit=True,
                                  subject=entry.target)
                    pairs.append((vp, anchor))
        pairs.extend(pending)

    walk_body(None, model.body)
    return pairs


def _product_kind_table(model: ProcessModel) -> dict[str, str]:
    """product id -> 'deliverable' | 'plain', covering declarations and variant payloads."""

    table: dict[str, str] = {}
    from .model import iter_elements

    for element in iter_elements(model):
        if element.kind == "work_product":
            table[element.id] = "deliverable" if element.deliverable else "plain"
    for variant in model.variants:
        if variant.payload.kind == "work_product":
            table.setdefault(variant.name,
                             "deliverable" if variant.payload.deliverable else "plain")
    return table


def varpoint_population(model: ProcessModel) -> tuple[VarPoint, ...]:
    """Explicit and implicit variation points in document order."""

    return tuple(vp for vp, _ in varpoint_anchors(model))


def derive_implicit_varpoints(model: ProcessModel) -> tuple[VarPoint, ...]:
    """Only the derived (implicit) variation points, document order."""

    return tuple(vp for vp in varpoint_population(model) if vp.is_implicit)


# --- occupations ----------------------------------------------------------------

@dataclass(frozen=True)
class Occupation:
    varpoint: str
    variant: str
    origin: str


def check_occupation(vp: VarPoint, variant: Variant, origin: str) -> None:
    """Implicit-binding and kind-compatibility rules; raises on violation."""

    if origin == ORIGIN_MANUAL and vp.is_implicit:
        raise ImplicitBindingError(
            f"varpoint '{vp.name}' is implicit and cannot be bound manually")
    allowed = PAYLOAD_VP_KINDS[variant.payload.kind]
    if vp.kind not in allowed:
        raise KindMismatchError(
            f"variant '{variant.name}' ({variant.payload.kind}) cannot occupy "
            f"{vp.kind} varpoint '{vp.name}'")


@dataclass(frozen=True)
class OccupationSet:
    """Immutable occupation collection; `occupy` returns an extended copy."""

    occupations: tuple[Occupation, ...] = ()

    def occupy(self, vp: VarPoint, variant: Variant, origin: str) -> OccupationSet:
        if any(o.varpoint == vp.name for o in self.occupations):
            raise AlreadyOccupiedError(f"varpoint '{vp.name}' is already occupied")
        check_occupation(vp, variant, origin)
        record = Occupation(varpoint=vp.name, variant=variant.name, origin=origin)
        return OccupationSet(self.occupations + (record,))

    def __iter__(self):
        return iter(self.occupations)

    def __len__(self) -> int:
        return len(self.occupations)


# --- dependencies ----------------------------------------------------------------

@dataclass(frozen=True)
class ConsistencyViolation:
    dependency: Dependency
    missing: str

    def __str__(self) -> str:
        return (f"variant '{self.dependency.source}' is placed but dependent "
                f"'{self.missing}' is not")


def check_dependencies(occupations, dependencies) -> tuple[ConsistencyViolation, ...]:
    """Report each dependency whose source variant is placed without its target."""

    placed = {o.variant for o in occupations}
    violations = []
    for dep in dependencies:
        if dep.source in placed and dep.target not in placed:
            violations.append(ConsistencyViolation(dependency=dep, missing=dep.target))
    return tuple(violations)


@dataclass(frozen=True)
class VariantEdge:
    """A realized dependency, still at variant level: `host` gains `kind` -> `target`."""

    host: str
    kind: str
    target: str


def realize_dependency(dep: Dependency, occupations,
                       variants: dict[str, Variant]) -> VariantEdge:
    """The concrete edge a consistent dependency adds to the tailored process.

    For invokes the declared direction is reversed (target invokes source); for
    input/output the work-unit endpoint carries the edge and the product is the
    referent.
    """

    placed = {o.variant for o in occupations}
    for endpoint in (dep.source, dep.target):
        if endpoint not in placed:
            raise UnoccupiedEndpointError(
                f"dependency endpoint '{endpoint}' is not occupied anywhere")
    if dep.realize_edge == "invokes":
        return VariantEdge(host=dep.target, kind="invokes", target=dep.source)
    source_kind = variants[dep.source].payload.kind
    if source_kind in WORK_UNIT_KINDS:
        return VariantEdge(host=dep.source, kind=dep.realize_edge, target=dep.target)
    return VariantEdge(host=dep.target, kind=dep.realize_edge, target=dep.source)
