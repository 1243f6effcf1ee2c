"""Causal analysis of discrete Bayesian networks for clinical decision
support: exact posterior queries, do-interventions, provable bounds over
intervention policies, threshold classifiers compiled to decision diagrams,
and sensitivity reporting."""

from .causal import (
    BoundResult,
    DoAssignment,
    InterventionChoice,
    InterventionSpace,
    apply_do,
    bound_interventions,
    interventional_query,
    parse_intervention_space,
)
from .classifier import (
    DEFAULT_RISK_TABLE,
    Classification,
    ClassifierConfig,
    ErrorRates,
    Odd,
    OddNode,
    RiskBand,
    RiskTable,
    classify,
    compile_odd,
    error_bound,
    error_rates,
    parse_classifier_config,
    parse_odd,
    parse_risk_table,
    risk_group,
    serialize_odd,
)
from .errors import (
    CapacityError,
    CptShapeError,
    CycleError,
    DocumentSyntaxError,
    DuplicateNameError,
    EngineError,
    EvidenceOverlapError,
    InconsistentEvidenceError,
    ModelValidationError,
    RowSumError,
    SearchCancelled,
    UnknownParentError,
    UnknownStateError,
    UnknownVariableError,
)
from .inference import (
    Assignment,
    Distribution,
    enumerate_joint,
    joint_marginal,
    joint_probability,
    query_posterior,
)
from .model import (
    Cpt,
    Evidence,
    Network,
    Variable,
    Violation,
    parse_network,
    serialize_network,
    topological_order,
    validate_network,
)
from .sensitivity import (
    SensitivityEntry,
    WhatIfRow,
    sensitivity_rank,
    suggest_features,
    what_if_table,
)

__version__ = "0.1.0"
