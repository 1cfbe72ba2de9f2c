"""Cost relations over input sizes."""

from .relations import (
    Env, FailureInfo, RelationBuilder, exclusive, instantiate, mutex_groups,
    setup_cost_relation, setup_sols_relation, spine_resource,
)
from .resources import (
    MAX, PTASKS, STEPS_PAR, STEPS_SEQ, STHREADS, SUM, AggExpr, ResourceDef,
    ResourceError, builtin_resources, resource_from_term, sum_plus,
)
from .types import (
    PAR_INF, SEQ, CostRelation, CostRelError, Equation, ExecModel,
    NonMonotoneTaskSize, NotParallelRecursive, SizeUnknownAtRecCall,
    SolutionsUnknown, UnsupportedMutualRecursion, relation_name,
)
from .solutions import setup_solutions
from .bounded import bounded_processor_bound, is_time_resource, spine_tasks

__all__ = [
    "MAX", "PAR_INF", "PTASKS", "SEQ", "STEPS_PAR", "STEPS_SEQ", "STHREADS",
    "SUM", "AggExpr", "CostRelError", "CostRelation", "Env", "Equation",
    "ExecModel", "FailureInfo", "NonMonotoneTaskSize", "NotParallelRecursive",
    "RelationBuilder", "ResourceDef", "ResourceError", "SizeUnknownAtRecCall",
    "SolutionsUnknown", "UnsupportedMutualRecursion", "bounded_processor_bound",
    "builtin_resources", "exclusive", "instantiate", "is_time_resource",
    "mutex_groups", "relation_name", "resource_from_term", "setup_cost_relation",
    "setup_solutions", "setup_sols_relation", "spine_resource", "spine_tasks",
    "sum_plus",
]
