"""Seeded random models, aspects, and expressions for the property suites."""

from __future__ import annotations

import random

from vrpweave.aspects import (
    Advice,
    AdviceAction,
    And,
    Designator,
    Not,
    Or,
    Pointcut,
    PointcutParam,
    ProcessAspect,
    PointcutName,
)
from vrpweave.model import (
    Dependency,
    EdgeRef,
    ProcessElement,
    ProcessModel,
    Variant,
    VarPoint,
    iter_elements,
    validate_model,
)

_TASK_VP_KINDS = ("call", "use", "create", "access", "init", "deliver")
_ACTIVITY_VP_KINDS = ("execution", "call", "use", "create", "init", "deliver")

_VARIANT_CATEGORY = {
    "VPTask": ("task",),
    "VPActivity": ("activity",),
    "VPWorkP": ("work_product",),
    "VPRole": ("role",),
    "VPTool": ("tool",),
}


def random_model(rng: random.Random, max_work_units: int = 10,
                 allow_mandatory: bool = False, with_varpoints: bool = True,
                 with_dependencies: bool = False) -> ProcessModel:
    """A small valid model; every deliverable product is output somewhere."""

    n_products = rng.randint(0, 4)
    n_roles = rng.randint(0, 3)
    n_tools = rng.randint(0, 2)
    products = [f"P{i}" for i in range(n_products)]
    roles = [f"R{i}" for i in range(n_roles)]
    tools = [f"T{i}" for i in range(n_tools)]

    variants = [
        Variant("VT_task", ProcessElement(id="", name="VT_task", kind="task")),
        Variant("VT_activity", ProcessElement(id="", name="VT_activity", kind="activity")),
        Variant("VP_doc", ProcessElement(id="VP_doc", name="VP_doc", kind="work_product")),
        Variant("VR_hand", ProcessElement(id="VR_hand", name="VR_hand", kind="role")),
        Variant("VO_kit", ProcessElement(id="VO_kit", name="VO_kit", kind="tool")),
    ]
    input_pool = products + (["VP_doc"] if rng.random() < 0.3 else [])

    # Unit skeletons first so invokes targets are known.
    n_units = rng.randint(1, max_work_units)
    units: list[dict] = []
    for i in range(n_units):
        parents = [u for u in units if u["kind"] == "activity"]
        parent = rng.choice(parents) if parents and rng.random() < 0.6 else None
        kind = "activity" if rng.random() < 0.45 else "task"
        if rng.random() < 0.85:
            prefix = f"{parent['id']}." if parent else ""
            seq = sum(1 for u in units if u["parent"] is parent) + 1
            unit_id = f"{prefix}{seq}"
        else:
            unit_id = f"x{i}"
        unit = {"id": unit_id, "kind": kind, "parent": parent, "units": [],
                "edges": [], "varpoints": []}
        if parent is not None:
            parent["units"].append(unit)
        units.append(unit)

    unit_ids = [u["id"] for u in units]
    output_used: set[str] = set()
    for unit in units:
        for _ in range(rng.randint(0, 2)):
            if input_pool:
                unit["edges"].append(EdgeRef("input", rng.choice(input_pool)))
        for _ in range(rng.randint(0, 2)):
            if products:
                target = rng.choice(products)
                unit["edges"].append(EdgeRef("output", target))
                output_used.add(target)
        if unit["kind"] == "task":
            for _ in range(rng.randint(0, 2)):
                if roles:
                    unit["edges"].append(EdgeRef("role", rng.choice(roles)))
            if tools and rng.random() < 0.4:
                unit["edges"].append(EdgeRef("tool", rng.choice(tools)))
        if rng.random() < 0.3:
            unit["edges"].append(EdgeRef("invokes", rng.choice(unit_ids)))

    vp_counter = 0
    if with_varpoints:
        for unit in units:
            for _ in range(rng.randint(0, 2)):
                kinds = _ACTIVITY_VP_KINDS if unit["kind"] == "activity" else _TASK_VP_KINDS
                policy = ("mandatory"
                          if allow_mandatory and rng.random() < 0.15 else "optional")
                unit["varpoints"].append(
                    VarPoint(name=f"vp{vp_counter}", kind=rng.choice(kinds),
                             owner=unit["id"], slot="body", policy=policy))
                vp_counter += 1

    deliverable = {p for p in output_used if rng.random() < 0.5}

    def build(unit: dict) -> ProcessElement:
        body: list = list(unit["edges"])
        body.extend(unit["varpoints"])
        body.extend(build(child) for child in unit["units"])
        rng.shuffle(body)
        return ProcessElement(id=unit["id"], name=f"Unit {unit['id']}",
                              kind=unit["kind"], body=tuple(body))

    top: list = [ProcessElement(id=p, name=p, kind="work_product",
                                deliverable=p in deliverable) for p in products]
    top.extend(ProcessElement(id=r, name=r, kind="role") for r in roles)
    top.extend(ProcessElement(id=t, name=t, kind="tool") for t in tools)
    if with_varpoints and rng.random() < 0.2:
        top.append(VarPoint(name=f"vp{vp_counter}", kind="execution", owner=None,
                            slot="body", policy="optional"))
    top.extend(build(u) for u in units if u["parent"] is None)

    dependencies: tuple[Dependency, ...] = ()
    if with_dependencies and rng.random() < 0.5:
        dependencies = (Dependency(source="VT_task", target="VP_doc",
                                   realize_edge=rng.choice(("input", "output"))),)

    model = ProcessModel(name=f"Rand{rng.randint(0, 10**6)}", body=tuple(top),
                         variants=tuple(variants), dependencies=dependencies)
    validate_model(model)
    return model


def _pattern_pool(rng: random.Random, model: ProcessModel) -> list[str]:
    pool = ["*"]
    ids = [e.id for e in iter_elements(model)]
    names = [e.name for e in iter_elements(model)]
    if ids:
        pool.append(rng.choice(ids))
        pool.append(rng.choice(ids)[: rng.randint(1, 3)] + "*")
    if names:
        pool.append(rng.choice(names))
    for vp in model.explicit_varpoints:
        pool.append(vp.name)
    return pool


def random_expr(rng: random.Random, model: ProcessModel, depth: int = 2,
                require_selector: bool = True):
    """Random designator expression; at least one non-within leaf when required."""

    pool = _pattern_pool(rng, model)
    kinds = ("call", "execution", "use", "create", "access", "init", "deliver", "within")

    def leaf(force_selector: bool):
        choices = kinds[:-1] if force_selector else kinds
        return Designator(kind=rng.choice(choices), pattern=rng.choice(pool))

    def build(level: int, force_selector: bool):
        if level <= 0 or rng.random() < 0.4:
            return leaf(force_selector)
        shape = rng.random()
        if shape < 0.4:
            return And(build(level - 1, force_selector), build(level - 1, False))
        if shape < 0.8:
            return Or(build(level - 1, force_selector), build(level - 1, force_selector))
        return Not(build(level - 1, False)) if not force_selector else \
            And(leaf(True), Not(build(level - 1, False)))

    return build(depth, require_selector)


def random_single_advice_aspect(rng: random.Random, model: ProcessModel,
                                name: str = "rand_aspect") -> ProcessAspect:
    """One pointcut, one advice, kind-compatible occupe actions."""

    variants_by_kind: dict[str, list[str]] = {}
    for variant in model.variants:
        variants_by_kind.setdefault(variant.payload.kind, []).append(variant.name)

    n_params = rng.randint(1, 3)
    params = []
    bindings = []
    for i in range(n_params):
        ptype = rng.choice(tuple(_VARIANT_CATEGORY))
        params.append(PointcutParam(type=ptype, name=f"p{i}"))
        bindings.append((f"p{i}", random_expr(rng, model)))
    pointcut = Pointcut(name="pc", params=tuple(params), bindings=tuple(bindings))

    actions = []
    for param in params:
        if rng.random() < 0.85:
            category = _VARIANT_CATEGORY[param.type][0]
            candidates = variants_by_kind.get(category, [])
            if candidates:
                actions.append(AdviceAction(param=param.name,
                                            variant=rng.choice(candidates)))
    advice = Advice(trigger=PointcutName("pc"), params=tuple(params),
                    actions=tuple(actions))
    return ProcessAspect(name=name, pointcuts=(pointcut,), advices=(advice,))
