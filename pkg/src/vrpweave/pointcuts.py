"""Designator matching and pointcut evaluation over a variation-point population."""

from __future__ import annotations

from .aspects import (
    PARAM_TYPE_KINDS,
    PARAM_TYPE_SUBJECTS,
    And,
    Designator,
    Not,
    Or,
    Pointcut,
    PointcutName,
    PointcutRef,
    ProcessAspect,
)
from .errors import AspectError, PointcutCycleError
from .model import (
    ProcessModel,
    VarPoint,
    ancestor_chain,
    element_index,
    match_pattern,
    pattern_matches_text,
    resolve_reference,
)


def match_designator(designator: Designator, vp: VarPoint, model: ProcessModel) -> bool:
    """Kind equality plus pattern match on the slot's subject.

    Implicit VPs match against the element at their slot; explicit VPs (empty
    holes) match against their authored name, falling back to the owner element.
    `within` ignores the VP kind and matches the owner or any of its ancestors.
    """

    if designator.kind == "within":
        if vp.owner is None:
            return False
        return any(match_pattern(designator.pattern, el)
                   for el in ancestor_chain(model, vp.owner))
    if vp.kind != designator.kind:
        return False
    if vp.is_implicit:
        subject = resolve_reference(model, vp.subject) if vp.subject else None
        return subject is not None and match_pattern(designator.pattern, subject)
    if pattern_matches_text(designator.pattern, vp.name):
        return True
    if vp.owner is not None:
        owner = element_index(model).get(vp.owner)
        if owner is not None and match_pattern(designator.pattern, owner):
            return True
    return False


class _Evaluator:
    """Set-wise evaluation with memoized pointcut bindings and cycle detection."""

    def __init__(self, population, model: ProcessModel,
                 pointcut_table: dict[str, Pointcut]):
        self.population: list[VarPoint] = list(population)
        self.model = model
        self.table = pointcut_table
        self.universe = frozenset(range(len(self.population)))
        self._memo: dict[str, dict[str, frozenset[int]]] = {}
        self._visiting: list[str] = []

    def pointcut_binding(self, name: str) -> dict[str, frozenset[int]]:
        if name in self._memo:
            return self._memo[name]
        if name in self._visiting:
            chain = " -> ".join((*self._visiting, name))
            raise PointcutCycleError(f"cyclic pointcut reference: {chain}")
        pointcut = self.table.get(name)
        if pointcut is None:
            raise AspectError(f"reference to unknown pointcut '{name}'")
        self._visiting.append(name)
        try:
            binding: dict[str, frozenset[int]] = {}
            for param in pointcut.params:
                expr = pointcut.binding_for(param.name)
                if expr is None:
                    binding[param.name] = frozenset()
                else:
                    binding[param.name] = self.filter_param(self.eval_expr(expr), param.type)
        finally:
            self._visiting.pop()
        self._memo[name] = binding
        return binding

    def eval_expr(self, expr) -> frozenset[int]:
        if isinstance(expr, Designator):
            return frozenset(i for i, vp in enumerate(self.population)
                             if match_designator(expr, vp, self.model))
        if isinstance(expr, And):
            return self.eval_expr(expr.left) & self.eval_expr(expr.right)
        if isinstance(expr, Or):
            return self.eval_expr(expr.left) | self.eval_expr(expr.right)
        if isinstance(expr, Not):
            return self.universe - self.eval_expr(expr.operand)
        if isinstance(expr, PointcutRef):
            binding = self.pointcut_binding(expr.pointcut)
            if expr.param not in binding:
                raise AspectError(
                    f"pointcut '{expr.pointcut}' has no parameter '{expr.param}'")
            return binding[expr.param]
        raise AspectError(f"unknown expression node {expr!r}")

    def filter_param(self, indices: frozenset[int], param_type: str) -> frozenset[int]:
        kinds = PARAM_TYPE_KINDS[param_type]
        subjects = PARAM_TYPE_SUBJECTS[param_type]
        keep: set[int] = set()
        for i in indices:
            vp = self.population[i]
            if vp.kind not in kinds:
                continue
            if vp.is_implicit:
                element = resolve_reference(self.model, vp.subject) if vp.subject else None
                if element is None or element.kind not in subjects:
                    continue
            keep.add(i)
        return frozenset(keep)

    def ordered(self, indices: frozenset[int]) -> tuple[VarPoint, ...]:
        return tuple(self.population[i] for i in sorted(indices))


def evaluate_pointcut(pointcut: Pointcut, vps, model: ProcessModel,
                      pointcuts: dict[str, Pointcut] | None = None
                      ) -> dict[str, tuple[VarPoint, ...]]:
    """Binding of every parameter to its matching VPs, in population order.

    `vps` is the full explicit+implicit population. `pointcuts` supplies the
    referents for `name.param` expressions; defaults to the pointcut itself.
    """

    table = dict(pointcuts) if pointcuts else {}
    table.setdefault(pointcut.name, pointcut)
    evaluator = _Evaluator(vps, model, table)
    binding = evaluator.pointcut_binding(pointcut.name)
    return {param: evaluator.ordered(indices) for param, indices in binding.items()}


def evaluate_trigger(trigger, aspect: ProcessAspect, vps, model: ProcessModel,
                     advice_params) -> dict[str, tuple[VarPoint, ...]]:
    """Binding for an advice trigger (a pointcut name or a logic combination).

    Parameters are combined by name across the referenced pointcuts: `&&`
    intersects, `||` unites, `!` complements against the population; the
    advice's declared param type filters the final sets.
    """

    evaluator = _Evaluator(vps, model, {pc.name: pc for pc in aspect.pointcuts})

    def walk(expr) -> dict[str, frozenset[int]]:
        if isinstance(expr, PointcutName):
            return dict(evaluator.pointcut_binding(expr.name))
        if isinstance(expr, And):
            left, right = walk(expr.left), walk(expr.right)
            names = set(left) | set(right)
            return {n: left.get(n, frozenset()) & right.get(n, frozenset()) for n in names}
        if isinstance(expr, Or):
            left, right = walk(expr.left), walk(expr.right)
            names = set(left) | set(right)
            return {n: left.get(n, frozenset()) | right.get(n, frozenset()) for n in names}
        if isinstance(expr, Not):
            inner = walk(expr.operand)
            return {n: evaluator.universe - s for n, s in inner.items()}
        raise AspectError(f"bad trigger expression {expr!r}")

    combined = walk(trigger)
    result: dict[str, tuple[VarPoint, ...]] = {}
    for param in advice_params:
        indices = combined.get(param.name, frozenset())
        result[param.name] = evaluator.ordered(evaluator.filter_param(indices, param.type))
    return result
