"""Operation-based set replication with predicate lenses."""

from ._ocds import (
    BstSetStore,
    FsmParseError,
    HomError,
    LawViolation,
    OpKind,
    Operation,
    Predicate,
    PredicateLens,
    PredicateParseError,
    ScenarioError,
    SortedSetStore,
    check_fsm_document,
    check_lenses,
    check_well_behaved,
    door_light_example,
    get_view,
    make_operation,
    parse_predicate,
    put_view,
    render_run,
    run_scenario,
)

__all__ = [
    "BstSetStore",
    "FsmParseError",
    "HomError",
    "LawViolation",
    "OpKind",
    "Operation",
    "Predicate",
    "PredicateLens",
    "PredicateParseError",
    "ScenarioError",
    "SortedSetStore",
    "check_fsm_document",
    "check_lenses",
    "check_well_behaved",
    "door_light_example",
    "get_view",
    "make_operation",
    "parse_predicate",
    "put_view",
    "render_run",
    "run_scenario",
]
