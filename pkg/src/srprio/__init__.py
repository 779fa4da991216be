"""srprio — prioritize security requirements by their business impact.

Security requirements (one protected property of one asset) link to
critical impact factors, which link to business visions; each link carries
an ordinal severity. Requirements are scored over their impact paths and
ranked, so the ones whose failure hurts the business most come first.
"""

from .dsl import (
    ParseDiagnostic,
    ParseResult,
    SourcePosition,
    parse_model,
    serialize_model,
)
from .model import (
    Asset,
    AssetKind,
    BusinessVision,
    CriticalImpactFactor,
    DanglingEndpointError,
    DuplicateIdError,
    DuplicateLinkError,
    ImpactLink,
    InvalidIdentifierError,
    LayerViolationError,
    LinkLayer,
    Model,
    ModelError,
    SecurityProperty,
    SecurityRequirement,
    SeverityScale,
    Strategy,
    UnknownLabelError,
    ValueDiscipline,
    add_element,
    compare_severity,
    make_link,
    requirements_of,
    severity_rank,
)
from .prioritize import (
    Explanation,
    ImpactPath,
    Override,
    OverrideError,
    RankDiff,
    Ranking,
    RankingEntry,
    RankMove,
    Score,
    StrategyMismatchError,
    UnknownLinkError,
    UnknownRequirementError,
    apply_overrides,
    diff_rankings,
    enumerate_paths,
    explain,
    path_severity,
    rank_cifs,
    rank_requirements,
    score_requirement,
)
from .report import export_dot, export_structured, format_exact, render_table
from .validation import ValidationDiagnostic, validate

__version__ = "0.1.0"

__all__ = [
    "Asset",
    "AssetKind",
    "BusinessVision",
    "CriticalImpactFactor",
    "DanglingEndpointError",
    "DuplicateIdError",
    "DuplicateLinkError",
    "Explanation",
    "ImpactLink",
    "ImpactPath",
    "InvalidIdentifierError",
    "LayerViolationError",
    "LinkLayer",
    "Model",
    "ModelError",
    "Override",
    "OverrideError",
    "ParseDiagnostic",
    "ParseResult",
    "RankDiff",
    "RankMove",
    "Ranking",
    "RankingEntry",
    "Score",
    "SecurityProperty",
    "SecurityRequirement",
    "SeverityScale",
    "SourcePosition",
    "Strategy",
    "StrategyMismatchError",
    "UnknownLabelError",
    "UnknownLinkError",
    "UnknownRequirementError",
    "ValidationDiagnostic",
    "ValueDiscipline",
    "add_element",
    "apply_overrides",
    "compare_severity",
    "diff_rankings",
    "enumerate_paths",
    "explain",
    "export_dot",
    "export_structured",
    "format_exact",
    "make_link",
    "parse_model",
    "path_severity",
    "rank_cifs",
    "rank_requirements",
    "render_table",
    "requirements_of",
    "score_requirement",
    "serialize_model",
    "severity_rank",
    "validate",
]
