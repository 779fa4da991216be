"""Scoring and ranking over the impact graph.

A requirement's impact travels along two-hop paths (requirement -> CIF ->
vision). A path is only as strong as its weakest hop, so its severity is the
minimum of the two hop ranks. Across paths the organization picks a
combination strategy: max (any critical chain makes the requirement
critical) or average (the exact arithmetic mean of path severities, kept as
a rational so ordering never suffers float artifacts).

Requirements or CIFs without any complete path score "no-path", which ranks
strictly below the weakest label: an unlinked requirement has shown no
business impact yet, which is not the same as a demonstrably negligible one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction
from functools import total_ordering

from .model import (
    ImpactLink,
    LinkLayer,
    Model,
    ModelError,
    SeverityScale,
    Strategy,
    add_element,
    make_link,
    requirements_of,
)


class UnknownRequirementError(ModelError):
    """The named requirement does not exist in the model."""


class UnknownLinkError(ModelError):
    """No link exists between the named source and target."""


class StrategyMismatchError(ModelError):
    """Two rankings computed with different strategies cannot be diffed."""


class OverrideError(ModelError):
    """An override failed; ``index`` is its position in the override list."""

    def __init__(self, index: int, message: str):
        super().__init__(f"override {index}: {message}")
        self.index = index


@dataclass(frozen=True)
class ImpactPath:
    """One requirement -> CIF -> vision chain with its two hop severities."""

    requirement: str
    cif: str
    vision: str
    hop1_severity: str
    hop2_severity: str


def path_severity(scale: SeverityScale, path: ImpactPath) -> int:
    """Weakest-link severity rank of a path: min of its two hop ranks."""
    return min(scale.rank(path.hop1_severity), scale.rank(path.hop2_severity))


@total_ordering
@dataclass(frozen=True)
class Score:
    """A subject's overall significance.

    ``value`` is None for no-path, otherwise the exact rational combination
    of path severity ranks. ``label`` is the nearest scale label, with
    half-way values rounding toward the higher severity.
    """

    value: Fraction | None
    label: str | None

    @property
    def kind(self) -> str:
        return "no-path" if self.value is None else "ranked"

    @classmethod
    def no_path(cls) -> "Score":
        return cls(None, None)

    @classmethod
    def ranked(cls, value: Fraction, scale: SeverityScale) -> "Score":
        label = scale.label_at(math.floor(value + Fraction(1, 2)))
        return cls(value, label)

    def _key(self) -> tuple[int, Fraction]:
        return (0, Fraction(0)) if self.value is None else (1, self.value)

    def __lt__(self, other: "Score") -> bool:
        return self._key() < other._key()


@dataclass(frozen=True)
class RankingEntry:
    subject: str
    score: Score
    # ImpactPath items for requirement rankings; the contributing
    # cif-to-vision ImpactLink items for CIF rankings.
    paths: tuple


@dataclass(frozen=True)
class Ranking:
    strategy: Strategy
    entries: tuple[RankingEntry, ...]

    def position_of(self, subject: str) -> int | None:
        for index, entry in enumerate(self.entries, start=1):
            if entry.subject == subject:
                return index
        return None


@dataclass(frozen=True)
class ExplainedPath:
    path: ImpactPath
    severity_rank: int
    severity_label: str


@dataclass(frozen=True)
class Explanation:
    requirement: str
    strategy: Strategy
    score: Score
    paths: tuple[ExplainedPath, ...]


class OverrideAction(str, Enum):
    SET_SEVERITY = "set-severity"
    ADD_LINK = "add-link"
    REMOVE_LINK = "remove-link"


@dataclass(frozen=True)
class Override:
    """One what-if edit to the link set, applied in sequence."""

    action: OverrideAction
    source: str
    target: str
    severity: str | None = None

    @classmethod
    def set_severity(cls, source: str, target: str, severity: str) -> "Override":
        return cls(OverrideAction.SET_SEVERITY, source, target, severity)

    @classmethod
    def add_link(cls, source: str, target: str, severity: str) -> "Override":
        return cls(OverrideAction.ADD_LINK, source, target, severity)

    @classmethod
    def remove_link(cls, source: str, target: str) -> "Override":
        return cls(OverrideAction.REMOVE_LINK, source, target)


@dataclass(frozen=True)
class RankMove:
    """One subject whose position or score changed between two rankings."""

    subject: str
    old_position: int | None
    new_position: int | None
    old_score: Score | None
    new_score: Score | None


@dataclass(frozen=True)
class RankDiff:
    moves: tuple[RankMove, ...]
    unchanged: int


def _links_from(model: Model, layer: LinkLayer) -> dict[str, list[ImpactLink]]:
    adjacency: dict[str, list[ImpactLink]] = {}
    for link in model.links:  # model.links is (source, target)-sorted
        if link.layer is layer:
            adjacency.setdefault(link.source, []).append(link)
    return adjacency


def enumerate_paths(model: Model, requirement_id: str) -> list[ImpactPath]:
    """All complete impact paths of a requirement, ordered by (cif, vision)."""
    if not model.has_requirement(requirement_id):
        raise UnknownRequirementError(f"unknown security requirement {requirement_id!r}")
    to_vision = _links_from(model, LinkLayer.CIF_TO_VISION)
    paths = []
    for hop1 in _links_from(model, LinkLayer.REQUIREMENT_TO_CIF).get(requirement_id, []):
        for hop2 in to_vision.get(hop1.target, []):
            paths.append(
                ImpactPath(requirement_id, hop1.target, hop2.target,
                           hop1.severity, hop2.severity)
            )
    return paths


def _combine(ranks: list[int], strategy: Strategy, scale: SeverityScale) -> Score:
    if not ranks:
        return Score.no_path()
    if strategy is Strategy.MAX:
        return Score.ranked(Fraction(max(ranks)), scale)
    return Score.ranked(Fraction(sum(ranks), len(ranks)), scale)


def score_requirement(model: Model, requirement_id: str, strategy: Strategy) -> Score:
    """Combine all of a requirement's path severities under ``strategy``."""
    ranks = [path_severity(model.scale, p) for p in enumerate_paths(model, requirement_id)]
    return _combine(ranks, strategy, model.scale)


def _sorted_entries(entries: list[RankingEntry]) -> tuple[RankingEntry, ...]:
    entries.sort(key=lambda e: e.subject)
    entries.sort(key=lambda e: e.score, reverse=True)  # stable: ties stay id-sorted
    return tuple(entries)


def rank_requirements(model: Model, strategy: Strategy) -> Ranking:
    """Rank every requirement of the model, strongest impact first."""
    entries = []
    for requirement in requirements_of(model):
        paths = enumerate_paths(model, requirement.id)
        ranks = [path_severity(model.scale, p) for p in paths]
        entries.append(RankingEntry(requirement.id, _combine(ranks, strategy, model.scale),
                                    tuple(paths)))
    return Ranking(strategy, _sorted_entries(entries))


def rank_cifs(model: Model, strategy: Strategy) -> Ranking:
    """Rank CIFs by their direct vision links (single-hop paths)."""
    to_vision = _links_from(model, LinkLayer.CIF_TO_VISION)
    entries = []
    for cif_id in model.cifs:
        vision_links = to_vision.get(cif_id, [])
        ranks = [model.scale.rank(link.severity) for link in vision_links]
        entries.append(RankingEntry(cif_id, _combine(ranks, strategy, model.scale),
                                    tuple(vision_links)))
    return Ranking(strategy, _sorted_entries(entries))


def explain(model: Model, requirement_id: str, strategy: Strategy) -> Explanation:
    """The score of one requirement together with every contributing path."""
    paths = enumerate_paths(model, requirement_id)
    detailed = []
    ranks = []
    for path in paths:
        rank = path_severity(model.scale, path)
        ranks.append(rank)
        detailed.append(ExplainedPath(path, rank, model.scale.label_at(rank)))
    return Explanation(requirement_id, strategy, _combine(ranks, strategy, model.scale),
                       tuple(detailed))


def apply_overrides(model: Model, overrides: list[Override]) -> Model:
    """Apply what-if edits in order, returning a new model.

    Each override is checked against the model as already modified by its
    predecessors; failures name the offending override's index.
    """
    current = model
    for index, override in enumerate(overrides):
        try:
            if override.action is not OverrideAction.REMOVE_LINK and override.severity is None:
                raise ModelError(f"{override.action.value} requires a severity")
            if override.action is OverrideAction.ADD_LINK:
                link = make_link(current, override.source, override.target, override.severity)
                current = add_element(current, link)
                continue
            existing = current.find_link(override.source, override.target)
            if existing is None:
                raise UnknownLinkError(
                    f"no link from {override.source!r} to {override.target!r}"
                )
            remaining = tuple(l for l in current.links if l is not existing)
            if override.action is OverrideAction.SET_SEVERITY:
                current.scale.rank(override.severity)  # raises UnknownLabelError
                remaining += (replace(existing, severity=override.severity),)
            current = Model(scale=current.scale, visions=current.visions, cifs=current.cifs,
                            assets=current.assets, links=remaining)
        except ModelError as err:
            if isinstance(err, OverrideError):
                raise
            raise OverrideError(index, str(err)) from err
    return current


def diff_rankings(before: Ranking, after: Ranking) -> RankDiff:
    """Per-subject movement between two rankings of the same strategy."""
    if before.strategy is not after.strategy:
        raise StrategyMismatchError(
            f"cannot diff a {before.strategy.value} ranking against "
            f"a {after.strategy.value} ranking"
        )
    old = {e.subject: (i, e.score) for i, e in enumerate(before.entries, start=1)}
    new = {e.subject: (i, e.score) for i, e in enumerate(after.entries, start=1)}
    moves = []
    for subject in old.keys() | new.keys():
        old_position, old_score = old.get(subject, (None, None))
        new_position, new_score = new.get(subject, (None, None))
        if old_position != new_position or old_score != new_score:
            moves.append(RankMove(subject, old_position, new_position, old_score, new_score))
    moves.sort(key=lambda m: (m.new_position is None,
                              m.new_position if m.new_position is not None else m.old_position,
                              m.subject))
    return RankDiff(tuple(moves), unchanged=len(old.keys() | new.keys()) - len(moves))
