"""Tailoring-effort accounting.

One decision per authored variation point (choose a variant, or choose to
leave it empty); one decision per aspect that covers at least one of them
(activate or not). Aspects collapse their covered points into a single
decision, so a process line with k authored points grouped under a aspects
costs a + (uncovered points) decisions per tailored process instead of k.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction

from .errors import EmptyMatchWarning
from .model import ProcessModel


@dataclass(frozen=True)
class EffortReport:
    baseline_decisions: int
    aspect_decisions: int
    reduction_ratio: Fraction | None
    covering_aspects: tuple[str, ...]
    uncovered_varpoints: tuple[str, ...]

    def render_text(self) -> str:
        ratio = "n/a" if self.reduction_ratio is None else str(self.reduction_ratio)
        lines = [
            f"baseline decisions: {self.baseline_decisions}",
            f"aspect decisions:   {self.aspect_decisions} "
            f"({len(self.covering_aspects)} aspects, "
            f"{len(self.uncovered_varpoints)} manual)",
            f"reduction ratio:    {ratio}",
        ]
        return "\n".join(lines)

    def render_structured(self) -> str:
        ratio = "n/a" if self.reduction_ratio is None else str(self.reduction_ratio)
        return (f"effort\t{self.baseline_decisions}\t{self.aspect_decisions}\t{ratio}\t"
                f"{','.join(self.covering_aspects)}\t{','.join(self.uncovered_varpoints)}")


def effort_report(model: ProcessModel, aspects=()) -> EffortReport:
    """Count decisions: authored VPs as the baseline, covering aspects + leftovers after."""

    from .variability import varpoint_population
    from .weaver import plan_aspect

    population = varpoint_population(model)
    explicit_names = [vp.name for vp in population if not vp.is_implicit]
    baseline = len(explicit_names)

    covering: list[str] = []
    covered: set[str] = set()
    explicit_set = set(explicit_names)
    for aspect in aspects:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", EmptyMatchWarning)
            planned = plan_aspect(aspect, model, population)
        hits = {o.varpoint for o in planned if o.varpoint in explicit_set}
        if hits:
            covering.append(aspect.name)
            covered |= hits

    uncovered = tuple(name for name in explicit_names if name not in covered)
    aspect_decisions = len(covering) + len(uncovered)
    ratio = Fraction(aspect_decisions, baseline) if baseline else None
    return EffortReport(baseline_decisions=baseline, aspect_decisions=aspect_decisions,
                        reduction_ratio=ratio, covering_aspects=tuple(covering),
                        uncovered_varpoints=uncovered)
