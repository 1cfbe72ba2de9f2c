"""Reference executor and measurements."""

from .inputs import GenError, InputPoint, generate, input_points
from .interp import DEFAULT_FUEL, Failure, Run, Timeout, run
from .measure import Measurement, fold_resource, measure, resource_makespan, resource_weights
from .schedule import greedy_makespan, makespan, task_dag
from .tree import (
    BuiltinNode, ClauseNode, FailNode, ParNode, SeqNode, iter_nodes, tree_to_json,
)

__all__ = [
    "DEFAULT_FUEL", "BuiltinNode", "ClauseNode", "FailNode", "Failure", "GenError",
    "InputPoint", "Measurement", "ParNode", "Run", "SeqNode", "Timeout", "fold_resource",
    "generate", "greedy_makespan", "input_points", "iter_nodes", "makespan", "measure",
    "resource_makespan", "resource_weights",
    "run", "task_dag", "tree_to_json",
]
