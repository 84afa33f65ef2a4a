"""vrpweave: aspect-oriented tailoring of variant-rich software process models.

Process models carry variability as typed variation points; variants are
concrete elements held in reserve. On-point variations bind one variant to one
authored slot; crosscutting variations bundle pointcuts and advices into
process aspects that select slots across the whole model and occupy them in
one activation. Weaving resolves all occupations into a tailored process plus
a change ledger and an effort report.
"""

from .aspects import (
    Advice,
    AdviceAction,
    And,
    Designator,
    Not,
    Or,
    Pointcut,
    PointcutName,
    PointcutParam,
    PointcutRef,
    ProcessAspect,
    format_aspects,
    parse_aspect_file,
)
from .errors import VrpError, VrpSyntaxError
from .metrics import EffortReport, effort_report
from .model import (
    Dependency,
    EdgeRef,
    ProcessElement,
    ProcessModel,
    Variant,
    VarPoint,
    find_elements,
    match_pattern,
    validate_model,
)
from .model_io import load_model, serialize_model
from .pointcuts import evaluate_pointcut, match_designator
from .variability import (
    Occupation,
    OccupationSet,
    check_dependencies,
    derive_implicit_varpoints,
    realize_dependency,
    varpoint_population,
)
from .weaver import (
    Change,
    ChangeRecord,
    RealizedEdge,
    TailoredProcess,
    WeaveRequest,
    diff_models,
    plan_aspect,
    weave,
    weave_manual_oracle,
)

__version__ = "0.1.0"

__all__ = [
    "Advice", "AdviceAction", "And", "Change", "ChangeRecord", "Dependency",
    "Designator", "EdgeRef", "EffortReport", "Not", "Occupation",
    "OccupationSet", "Or", "Pointcut", "PointcutName", "PointcutParam",
    "PointcutRef", "ProcessAspect", "ProcessElement", "ProcessModel",
    "RealizedEdge", "TailoredProcess", "Variant", "VarPoint", "VrpError",
    "VrpSyntaxError", "WeaveRequest", "check_dependencies",
    "derive_implicit_varpoints", "diff_models", "effort_report",
    "evaluate_pointcut", "find_elements", "format_aspects", "load_model",
    "match_designator", "match_pattern", "parse_aspect_file", "plan_aspect",
    "realize_dependency", "serialize_model", "validate_model",
    "varpoint_population", "weave", "weave_manual_oracle",
]
