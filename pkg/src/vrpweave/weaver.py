"""End-to-end tailoring: plan aspect advices, merge bindings, materialize.

The weave pipeline: derive the VP population, plan every activated aspect in
activation order, apply manual bindings, reject conflicts and unresolved
mandatory slots, check variant dependencies, then materialize: occupied VPs
become their variant's payload at the slot, unoccupied optional/implicit VPs
vanish, and consistent dependencies realize as process edges. The input model
is never touched; the result is a fresh model.
"""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass, replace

from .aspects import ProcessAspect
from .errors import (
    DependencyViolationError,
    EmptyMatchWarning,
    LinkError,
    ModelError,
    OccupationConflictError,
    UnknownVarPointError,
    UnresolvedMandatoryError,
)
from .metrics import EffortReport, effort_report
from .model import (
    CONTAINER_KINDS,
    WORK_UNIT_KINDS,
    EdgeRef,
    ProcessElement,
    ProcessModel,
    Variant,
    VarPoint,
    element_index,
    iter_elements,
    parent_index,
    validate_model,
)
from .pointcuts import evaluate_trigger
from .variability import (
    ORIGIN_MANUAL,
    Anchor,
    Occupation,
    advice_origin,
    check_dependencies,
    check_occupation,
    varpoint_anchors,
    varpoint_population,
)


@dataclass(frozen=True)
class WeaveRequest:
    model: ProcessModel
    aspects: tuple[ProcessAspect, ...] = ()
    activations: tuple[str, ...] = ()
    manual_bindings: tuple[tuple[str, str], ...] = ()


@dataclass(frozen=True)
class ChangeRecord:
    varpoint: str
    variant: str
    origin: str


@dataclass(frozen=True)
class RealizedEdge:
    source: str
    kind: str
    target: str


@dataclass(frozen=True)
class TailoredProcess:
    result: ProcessModel
    ledger: tuple[ChangeRecord, ...]
    realized_edges: tuple[RealizedEdge, ...]
    report: EffortReport


def variant_table(model: ProcessModel, aspects=()) -> dict[str, Variant]:
    """Model repository plus aspect-owned variants; collisions rejected by link()."""

    table: dict[str, Variant] = {v.name: v for v in model.variants}
    for aspect in aspects:
        for variant in aspect.owned_variants:
            table.setdefault(variant.name, variant)
    return table


def link(model: ProcessModel, aspects) -> None:
    """Cross-file checks: name collisions and occupe targets."""

    model_variants = {v.name for v in model.variants}
    owned_seen: dict[str, str] = {}
    for aspect in aspects:
        for variant in aspect.owned_variants:
            if variant.name in model_variants:
                raise LinkError(
                    f"aspect '{aspect.name}' variant '{variant.name}' collides "
                    f"with a model variant")
            if variant.name in owned_seen and owned_seen[variant.name] != aspect.name:
                raise LinkError(
                    f"variant '{variant.name}' owned by both "
                    f"'{owned_seen[variant.name]}' and '{aspect.name}'")
            owned_seen[variant.name] = aspect.name
    for aspect in aspects:
        known = model_variants | {v.name for v in aspect.owned_variants}
        for advice in aspect.advices:
            for action in advice.actions:
                if action.variant not in known:
                    raise LinkError(
                        f"aspect '{aspect.name}': unknown variant '{action.variant}'")


def plan_aspect(aspect: ProcessAspect, model: ProcessModel,
                vps=None) -> tuple[Occupation, ...]:
    """Occupations an aspect's advices produce, without touching the model.

    Order: advice order, action order, matched-VP document order. An action
    whose parameter matched nothing raises EmptyMatchWarning and is skipped.
    """

    population = tuple(vps) if vps is not None else varpoint_population(model)
    variants = variant_table(model, (aspect,))
    origin = advice_origin(aspect.name)
    occupations: list[Occupation] = []
    for advice in aspect.advices:
        binding = evaluate_trigger(advice.trigger, aspect, population, model,
                                   advice.params)
        for action in advice.actions:
            variant = variants.get(action.variant)
            if variant is None:
                raise LinkError(
                    f"aspect '{aspect.name}': unknown variant '{action.variant}'")
            matched = binding.get(action.param, ())
            if not matched:
                warnings.warn(
                    f"aspect '{aspect.name}': parameter '{action.param}' matched "
                    f"no variation points", EmptyMatchWarning, stacklevel=2)
                continue
            for vp in matched:
                check_occupation(vp, variant, origin)
                occupations.append(Occupation(varpoint=vp.name, variant=action.variant,
                                              origin=origin))
    return tuple(occupations)


def weave(request: WeaveRequest) -> TailoredProcess:
    model = request.model
    aspects = tuple(request.aspects)
    link(model, aspects)
    variants = variant_table(model, aspects)
    pairs = varpoint_anchors(model)
    population = tuple(vp for vp, _ in pairs)
    vp_by_name = {vp.name: vp for vp in population}

    occupations: list[Occupation] = []
    for aspect in _ordered_activations(aspects, request.activations):
        occupations.extend(plan_aspect(aspect, model, population))

    for vp_name, variant_name in request.manual_bindings:
        vp = vp_by_name.get(vp_name)
        if vp is None:
            raise UnknownVarPointError(f"unknown variation point '{vp_name}'")
        variant = variants.get(variant_name)
        if variant is None:
            raise LinkError(f"unknown variant '{variant_name}'")
        check_occupation(vp, variant, ORIGIN_MANUAL)
        occupations.append(Occupation(varpoint=vp_name, variant=variant_name,
                                      origin=ORIGIN_MANUAL))

    return _finish(model, aspects, pairs, occupations, variants)


def weave_manual_oracle(model: ProcessModel, occupations, aspects=()) -> TailoredProcess:
    """Materialize explicit occupations directly, skipping pointcut machinery."""

    aspects = tuple(aspects)
    link(model, aspects)
    variants = variant_table(model, aspects)
    pairs = varpoint_anchors(model)
    vp_by_name = {vp.name: vp for vp, _ in pairs}
    checked: list[Occupation] = []
    for occupation in occupations:
        vp = vp_by_name.get(occupation.varpoint)
        if vp is None:
            raise UnknownVarPointError(
                f"unknown variation point '{occupation.varpoint}'")
        variant = variants.get(occupation.variant)
        if variant is None:
            raise LinkError(f"unknown variant '{occupation.variant}'")
        check_occupation(vp, variant, occupation.origin)
        checked.append(occupation)
    return _finish(model, aspects, pairs, checked, variants)


def _ordered_activations(aspects, activations) -> list[ProcessAspect]:
    by_name = {a.name: a for a in aspects}
    ordered: list[ProcessAspect] = []
    for name in activations:
        aspect = by_name.get(name)
        if aspect is None:
            raise LinkError(f"activation of unknown aspect '{name}'")
        if aspect not in ordered:
            ordered.append(aspect)
    for aspect in aspects:
        if aspect.active and aspect not in ordered:
            ordered.append(aspect)
    return ordered


def _finish(model, aspects, pairs, occupations, variants) -> TailoredProcess:
    _check_conflicts(occupations)
    _check_mandatory(pairs, occupations)
    violations = check_dependencies(occupations, model.dependencies)
    if violations:
        raise DependencyViolationError(violations)
    result_variants = _result_variants(model, aspects, occupations, variants)
    result, realized = _materialize(model, pairs, occupations, variants, result_variants)
    ledger = tuple(ChangeRecord(o.varpoint, o.variant, o.origin) for o in occupations)
    report = effort_report(model, aspects)
    return TailoredProcess(result=result, ledger=ledger, realized_edges=realized,
                           report=report)


def _result_variants(model, aspects, occupations, variants):
    """Keep the model repository; add owned variants of aspects that placed
    something, so payload edges referencing sibling owned variants resolve."""

    contributing = {variants[o.variant].owning_aspect for o in occupations
                    if variants[o.variant].owning_aspect}
    merged = list(model.variants)
    for aspect in aspects:
        if aspect.name in contributing:
            merged.extend(aspect.owned_variants)
    return tuple(merged)


def _check_conflicts(occupations) -> None:
    origins: dict[str, list[str]] = {}
    for occupation in occupations:
        origins.setdefault(occupation.varpoint, []).append(occupation.origin)
    for vp_name, vp_origins in origins.items():
        if len(vp_origins) > 1:
            raise OccupationConflictError(vp_name, tuple(vp_origins))


def _check_mandatory(pairs, occupations) -> None:
    occupied = {o.varpoint for o in occupations}
    for vp, _ in pairs:
        if not vp.is_implicit and vp.policy == "mandatory" and vp.name not in occupied:
            raise UnresolvedMandatoryError(vp.name)


# --- materialization ---------------------------------------------------------

_EDGE_FOR_VP = {"use": "input", "init": "input", "create": "output", "deliver": "output"}


def _materialize(model, pairs, occupations, variants, result_variants=None):
    if result_variants is None:
        result_variants = model.variants
    index = element_index(model)
    parents = parent_index(model)
    anchor_by_name = {vp.name: (vp, anchor) for vp, anchor in pairs}
    used_ids = {element.id for element in iter_elements(model)}

    # (anchor, "child"|"edge", payload) in occupation order; decls dedup by name.
    placements: list[tuple[Anchor, str, object]] = []
    copies: dict[str, list[str]] = {}      # variant name -> materialized element ids
    declared: dict[str, str] = {}          # payload name -> kind, for dedup/conflicts

    def decl_scope(anchor: Anchor) -> str | None:
        host = anchor.scope
        if host is None:
            return None
        if index[host].kind in CONTAINER_KINDS:
            return host
        return parents.get(host)

    for occupation in occupations:
        vp, anchor = anchor_by_name[occupation.varpoint]
        payload = variants[occupation.variant].payload
        if payload.kind in WORK_UNIT_KINDS:
            if vp.kind == "execution":
                scope = anchor.scope
                new_id = _generate_id(scope, used_ids)
                placements.append((anchor, "child", (payload, new_id)))
            else:  # call: a new invokes edge plus the payload declared in scope
                scope = decl_scope(anchor)
                new_id = _generate_id(scope, used_ids)
                placements.append((anchor, "edge", EdgeRef("invokes", new_id)))
                placements.append((Anchor(scope, -1, "append"), "child", (payload, new_id)))
            copies.setdefault(occupation.variant, []).append(new_id)
        else:
            edge_kind = _EDGE_FOR_VP.get(vp.kind) or payload.kind
            placements.append((anchor, "edge", EdgeRef(edge_kind, payload.name)))
            existing = index.get(payload.name)
            if existing is not None and existing.kind != payload.kind:
                raise ModelError(
                    f"variant '{payload.name}' collides with declared "
                    f"{existing.kind} '{payload.name}'")
            if existing is None and payload.name not in declared:
                declared[payload.name] = payload.kind
                placements.append((Anchor(decl_scope(anchor), -1, "append"),
                                   "child", (payload, payload.name)))
                used_ids.add(payload.name)

    realized, extra_edges = _realize_edges(model, occupations, variants, copies)

    inserts: dict[tuple[str | None, int], list] = {}
    replaces: dict[tuple[str | None, int], list] = {}
    appends: dict[str | None, list] = {}
    for anchor, tag, data in placements:
        if tag == "child":
            payload, new_id = data
            body = payload.body + tuple(extra_edges.get(new_id, ()))
            entry: object = replace(payload, id=new_id, body=body)
        else:
            entry = data
        if anchor.mode == "append":
            appends.setdefault(anchor.scope, []).append(entry)
        elif anchor.mode == "replace":
            replaces.setdefault((anchor.scope, anchor.index), []).append(entry)
        else:
            inserts.setdefault((anchor.scope, anchor.index), []).append(entry)

    def rebuild(scope: str | None, body: tuple) -> tuple:
        out: list = []
        for idx, entry in enumerate(body):
            out.extend(inserts.get((scope, idx), ()))
            if isinstance(entry, VarPoint):
                out.extend(replaces.get((scope, idx), ()))
            elif isinstance(entry, ProcessElement) and entry.kind in WORK_UNIT_KINDS:
                out.append(replace(entry, body=rebuild(entry.id, entry.body)))
            else:
                out.append(entry)
        out.extend(appends.get(scope, ()))
        return tuple(out)

    result = ProcessModel(name=model.name, body=rebuild(None, model.body),
                          variants=result_variants, dependencies=model.dependencies)
    validate_model(result)
    return result, realized


def _realize_edges(model, occupations, variants, copies):
    """Edges for dependencies whose endpoints are both placed."""

    placed = {o.variant for o in occupations}
    realized: list[RealizedEdge] = []
    extra_edges: dict[str, list[EdgeRef]] = {}
    for dep in model.dependencies:
        if dep.source not in placed or dep.target not in placed:
            continue
        if dep.realize_edge == "invokes":
            hosts, targets = copies[dep.target], copies[dep.source]
            for host in hosts:
                for target in targets:
                    extra_edges.setdefault(host, []).append(EdgeRef("invokes", target))
                    realized.append(RealizedEdge(source=host, kind="invokes", target=target))
            continue
        if variants[dep.source].payload.kind in WORK_UNIT_KINDS:
            unit_variant, product_variant = dep.source, dep.target
        else:
            unit_variant, product_variant = dep.target, dep.source
        for host in copies[unit_variant]:
            extra_edges.setdefault(host, []).append(
                EdgeRef(dep.realize_edge, product_variant))
            realized.append(RealizedEdge(source=host, kind=dep.realize_edge,
                                         target=product_variant))
    return tuple(realized), extra_edges


def _generate_id(scope: str | None, used_ids: set[str]) -> str:
    prefix = f"{scope}." if scope else ""
    pattern = re.compile(re.escape(prefix) + r"(\d+)$")
    best = 0
    for existing in used_ids:
        m = pattern.fullmatch(existing)
        if m:
            best = max(best, int(m.group(1)))
    candidate = best + 1
    while f"{prefix}{candidate}" in used_ids:
        candidate += 1
    new_id = f"{prefix}{candidate}"
    used_ids.add(new_id)
    return new_id


# --- structural diff -----------------------------------------------------------

@dataclass(frozen=True)
class Change:
    op: str        # "+" or "-"
    category: str  # element | edge | varpoint
    detail: str

    def __str__(self) -> str:
        return f"{self.op} {self.category} {self.detail}"


_KINDWORD = {"work_product": "product"}


def diff_models(base: ProcessModel, tailored: ProcessModel) -> tuple[Change, ...]:
    """Added/removed elements, edges, and explicit VP slots, deterministic order."""

    base_elements = _element_signatures(base)
    new_elements = _element_signatures(tailored)
    base_edges = _edge_counts(base)
    new_edges = _edge_counts(tailored)
    base_vps = _vp_signatures(base)
    new_vps = _vp_signatures(tailored)

    changes: list[Change] = []
    for key, detail in base_elements.items():
        if new_elements.get(key) != detail:
            changes.append(Change("-", "element", detail))
    for key, (detail, count) in base_edges.items():
        delta = count - new_edges.get(key, ("", 0))[1]
        changes.extend(Change("-", "edge", detail) for _ in range(max(delta, 0)))
    for key, detail in base_vps.items():
        if new_vps.get(key) != detail:
            changes.append(Change("-", "varpoint", detail))
    for key, detail in new_elements.items():
        if base_elements.get(key) != detail:
            changes.append(Change("+", "element", detail))
    for key, (detail, count) in new_edges.items():
        delta = count - base_edges.get(key, ("", 0))[1]
        changes.extend(Change("+", "edge", detail) for _ in range(max(delta, 0)))
    for key, detail in new_vps.items():
        if base_vps.get(key) != detail:
            changes.append(Change("+", "varpoint", detail))
    return tuple(changes)


def _element_signatures(model: ProcessModel) -> dict[str, str]:
    signatures: dict[str, str] = {}
    for element in iter_elements(model):
        kindword = _KINDWORD.get(element.kind, element.kind)
        signatures[element.id] = f'{kindword} {element.id} "{element.name}"'
    return signatures


def _edge_counts(model: ProcessModel) -> dict[tuple[str, str, str], tuple[str, int]]:
    counts: dict[tuple[str, str, str], tuple[str, int]] = {}
    for element in iter_elements(model):
        for entry in element.body:
            if isinstance(entry, EdgeRef):
                key = (element.id, entry.kind, entry.target)
                detail = f'{element.id} {entry.kind} "{entry.target}"'
                counts[key] = (detail, counts.get(key, ("", 0))[1] + 1)
    return counts


def _vp_signatures(model: ProcessModel) -> dict[str, str]:
    signatures: dict[str, str] = {}
    for vp in model.explicit_varpoints:
        owner = vp.owner or "<root>"
        signatures[vp.name] = f"{vp.name} kind {vp.kind} @{owner} {vp.policy}"
    return signatures
