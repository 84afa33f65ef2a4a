"""Brute-force reference computations, kept independent of the library's
derivation and weaving code paths: they walk the element views (children,
inputs, outputs, ...) instead of body entries."""

from __future__ import annotations

from vrpweave.model import (
    WORK_UNIT_KINDS,
    ProcessElement,
    ProcessModel,
    VarPoint,
)


def _walk_units(model: ProcessModel):
    def rec(element: ProcessElement):
        if element.kind in WORK_UNIT_KINDS:
            yield element
        for child in element.children:
            yield from rec(child)

    for root in model.roots:
        yield from rec(root)


def slot_walk_counts(model: ProcessModel) -> dict[str, int]:
    """Exhaustive join-point enumeration per slot category."""

    counts = {"execution": 0, "call": 0, "use": 0, "create": 0, "access": 0}
    used_products: set[str] = set()
    output_products: set[str] = set()
    for unit in _walk_units(model):
        counts["execution"] += 1
        counts["call"] += len(unit.invokes)
        counts["use"] += len(unit.inputs)
        counts["create"] += len(unit.outputs)
        counts["access"] += len(unit.performers) + len(unit.tools)
        used_products.update(unit.inputs)
        output_products.update(unit.outputs)
    counts["init"] = len(used_products)
    counts["deliver"] = len(_deliverable_names(model) & output_products)
    return counts


def _deliverable_names(model: ProcessModel) -> set[str]:
    names = set()

    def rec(element: ProcessElement):
        if element.kind == "work_product" and element.deliverable:
            names.add(element.id)
        for child in element.children:
            rec(child)

    for root in model.roots:
        rec(root)
    for variant in model.variants:
        if variant.payload.kind == "work_product" and variant.payload.deliverable:
            names.add(variant.name)
    return names


def closed_form_total(model: ProcessModel) -> int:
    """Sum over work units of (1 + edge slots) + distinct used products
    + deliverable products."""

    total = 0
    used_products: set[str] = set()
    for unit in _walk_units(model):
        total += (1 + len(unit.invokes) + len(unit.inputs) + len(unit.outputs)
                  + len(unit.performers) + len(unit.tools))
        used_products.update(unit.inputs)
    return total + len(used_products) + len(_deliverable_names(model))


def strip_varpoints(model: ProcessModel) -> ProcessModel:
    """The identity projection: the model with every VP declaration removed."""

    def clean(body: tuple) -> tuple:
        out = []
        for entry in body:
            if isinstance(entry, VarPoint):
                continue
            if isinstance(entry, ProcessElement):
                entry = ProcessElement(id=entry.id, name=entry.name, kind=entry.kind,
                                       body=clean(entry.body),
                                       deliverable=entry.deliverable)
            out.append(entry)
        return tuple(out)

    return ProcessModel(name=model.name, body=clean(model.body),
                        variants=model.variants, dependencies=model.dependencies)
