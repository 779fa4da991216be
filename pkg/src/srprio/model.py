"""Core domain model: the layered impact graph and its ordinal severity algebra.

An organization's model has three layers. Security requirements (one per
asset/security-property pair) sit at the bottom, critical impact factors
(CIFs) in the middle, business visions at the top. Severity-labelled links
connect requirement to CIF and CIF to vision; no other edges exist, so the
graph is acyclic by construction.

Models are immutable values: every mutating operation returns a new model
and leaves its input untouched, which makes what-if comparisons safe.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Union

_IDENT_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")

BUILTIN_PROPERTIES = ("availability", "confidentiality", "integrity")

DEFAULT_SCALE_LABELS = ("negligible", "marginal", "critical")


class ModelError(ValueError):
    """Base class for all domain errors raised by this package.

    ``part`` identifies which piece of a statement the error refers to
    ("source", "target", "severity"), when that is meaningful; callers such
    as the DSL parser use it to attach precise positions.
    """

    part: str | None = None

    def __init__(self, message: str, *, part: str | None = None):
        super().__init__(message)
        self.part = part


class InvalidIdentifierError(ModelError):
    """An identifier is not of the form letter (letter|digit|underscore)*."""


class UnknownLabelError(ModelError):
    """A severity label does not belong to the scale in use."""


class DuplicateIdError(ModelError):
    """An element id is already taken by another vision, CIF, or asset."""


class DanglingEndpointError(ModelError):
    """A link endpoint does not resolve to any model element."""


class LayerViolationError(ModelError):
    """A link does not go requirement->CIF or CIF->vision."""


class DuplicateLinkError(ModelError):
    """A second link between the same source and target."""


def _check_ident(value: str, what: str) -> None:
    if not _IDENT_RE.match(value):
        raise InvalidIdentifierError(
            f"invalid {what} {value!r}: expected a letter followed by letters, digits, or underscores"
        )


@dataclass(frozen=True)
class SeverityScale:
    """An ordered list of severity labels, weakest first.

    Labels are case-insensitive and stored case-folded. The default scale is
    negligible < marginal < critical.
    """

    labels: tuple[str, ...] = DEFAULT_SCALE_LABELS

    def __post_init__(self):
        folded = tuple(label.casefold() for label in self.labels)
        for label in folded:
            _check_ident(label, "severity label")
        if len(folded) < 2:
            raise ModelError("a severity scale needs at least 2 labels")
        if len(set(folded)) != len(folded):
            raise ModelError(f"severity labels must be distinct: {list(self.labels)}")
        object.__setattr__(self, "labels", folded)

    @property
    def top_rank(self) -> int:
        return len(self.labels) - 1

    @property
    def is_default(self) -> bool:
        return self.labels == DEFAULT_SCALE_LABELS

    def rank(self, label: str) -> int:
        """Index of ``label`` in this scale (0 = weakest). Case-insensitive."""
        try:
            return self.labels.index(label.casefold())
        except ValueError:
            raise UnknownLabelError(
                f"unknown severity {label!r}: expected one of {', '.join(self.labels)}",
                part="severity",
            ) from None

    def label_at(self, rank: int) -> str:
        return self.labels[rank]


DEFAULT_SCALE = SeverityScale()


def severity_rank(scale: SeverityScale, label: str) -> int:
    """Numeric rank of a severity label within ``scale``, 0 = weakest."""
    return scale.rank(label)


def compare_severity(scale: SeverityScale, a: str, b: str) -> int:
    """Compare two labels of ``scale``: negative, zero, or positive."""
    return scale.rank(a) - scale.rank(b)


class ValueDiscipline(str, Enum):
    """Which generic business strategy a vision serves. Metadata only."""

    OPERATIONAL_EXCELLENCE = "operational-excellence"
    CUSTOMER_INTIMACY = "customer-intimacy"
    PRODUCT_LEADERSHIP = "product-leadership"
    UNSPECIFIED = "unspecified"


class AssetKind(str, Enum):
    INFORMATION = "information"
    TECHNICAL = "technical"
    PEOPLE = "people"


class Strategy(str, Enum):
    """How multiple impact paths combine into one overall score."""

    MAX = "max"
    AVERAGE = "average"


class LinkLayer(str, Enum):
    REQUIREMENT_TO_CIF = "requirement-to-cif"
    CIF_TO_VISION = "cif-to-vision"


@dataclass(frozen=True)
class BusinessVision:
    id: str
    title: str
    discipline: ValueDiscipline = ValueDiscipline.UNSPECIFIED

    def __post_init__(self):
        _check_ident(self.id, "vision id")
        object.__setattr__(self, "discipline", ValueDiscipline(self.discipline))


@dataclass(frozen=True)
class CriticalImpactFactor:
    """A kind of business damage a security incident can cause."""

    id: str
    title: str

    def __post_init__(self):
        _check_ident(self.id, "CIF id")


@dataclass(frozen=True)
class SecurityProperty:
    name: str

    def __post_init__(self):
        _check_ident(self.name, "security property")

    @property
    def builtin(self) -> bool:
        return self.name in BUILTIN_PROPERTIES


@dataclass(frozen=True)
class Asset:
    """A valuable asset and the security properties it must preserve.

    ``properties`` accepts plain names or SecurityProperty values and is
    normalized to a name-sorted tuple, so equality ignores declaration order.
    """

    id: str
    title: str
    kind: AssetKind
    properties: tuple[SecurityProperty, ...]

    def __post_init__(self):
        _check_ident(self.id, "asset id")
        object.__setattr__(self, "kind", AssetKind(self.kind))
        props = tuple(
            p if isinstance(p, SecurityProperty) else SecurityProperty(p)
            for p in self.properties
        )
        if not props:
            raise ModelError(f"asset {self.id!r} declares no security properties")
        seen: set[str] = set()
        for p in props:
            if p.name in seen:
                raise DuplicateIdError(f"duplicate property {p.name!r} on asset {self.id!r}")
            seen.add(p.name)
        object.__setattr__(self, "properties", tuple(sorted(props, key=lambda p: p.name)))

    @property
    def property_names(self) -> tuple[str, ...]:
        return tuple(p.name for p in self.properties)


@dataclass(frozen=True)
class SecurityRequirement:
    """The demand to preserve one property of one asset; the ranked unit."""

    asset_id: str
    property_name: str

    @property
    def id(self) -> str:
        return f"{self.asset_id}.{self.property_name}"


@dataclass(frozen=True)
class ImpactLink:
    """A severity-labelled edge in one of the two layers."""

    source: str
    target: str
    severity: str
    layer: LinkLayer

    def __post_init__(self):
        object.__setattr__(self, "layer", LinkLayer(self.layer))
        object.__setattr__(self, "severity", self.severity.casefold())
        if self.layer is LinkLayer.REQUIREMENT_TO_CIF:
            asset_id, dot, prop = self.source.partition(".")
            if not dot:
                raise LayerViolationError(
                    f"requirement-to-cif link source {self.source!r} is not of the form asset.property",
                    part="source",
                )
            _check_ident(asset_id, "asset id")
            _check_ident(prop, "security property")
        else:
            _check_ident(self.source, "link source")
        _check_ident(self.target, "link target")

    @property
    def pair(self) -> tuple[str, str]:
        return (self.source, self.target)


Element = Union[BusinessVision, CriticalImpactFactor, Asset, ImpactLink]


def _link_order(link: ImpactLink) -> tuple[str, str, str, str]:
    return (link.source, link.target, link.layer.value, link.severity)


@dataclass(frozen=True)
class Model:
    """One organization's complete impact graph.

    Element collections are keyed (and iterated) by id; links are kept in a
    canonical (source, target) order. Both normalizations happen at
    construction, so structurally equal models compare equal regardless of
    the order anything was declared in.
    """

    scale: SeverityScale = DEFAULT_SCALE
    visions: Mapping[str, BusinessVision] = field(default_factory=dict)
    cifs: Mapping[str, CriticalImpactFactor] = field(default_factory=dict)
    assets: Mapping[str, Asset] = field(default_factory=dict)
    links: tuple[ImpactLink, ...] = ()

    def __post_init__(self):
        for name in ("visions", "cifs", "assets"):
            coll = getattr(self, name)
            elems = coll.values() if isinstance(coll, Mapping) else coll
            object.__setattr__(self, name, {e.id: e for e in sorted(elems, key=lambda e: e.id)})
        object.__setattr__(self, "links", tuple(sorted(self.links, key=_link_order)))

    def element_kind(self, element_id: str) -> str | None:
        """"vision", "cif", or "asset", or None when the id is unknown."""
        if element_id in self.visions:
            return "vision"
        if element_id in self.cifs:
            return "cif"
        if element_id in self.assets:
            return "asset"
        return None

    def has_requirement(self, requirement_id: str) -> bool:
        asset_id, dot, prop = requirement_id.partition(".")
        if not dot:
            return False
        asset = self.assets.get(asset_id)
        return asset is not None and prop in asset.property_names

    def find_link(self, source: str, target: str) -> ImpactLink | None:
        for link in self.links:
            if link.pair == (source, target):
                return link
        return None


def requirements_of(model: Model) -> list[SecurityRequirement]:
    """All (asset, property) requirements of the model, sorted by id."""
    reqs = [
        SecurityRequirement(asset.id, prop.name)
        for asset in model.assets.values()
        for prop in asset.properties
    ]
    return sorted(reqs, key=lambda r: r.id)


def _validate_link(model: Model, link: ImpactLink) -> None:
    if link.layer is LinkLayer.REQUIREMENT_TO_CIF:
        if not model.has_requirement(link.source):
            if model.element_kind(link.source) is not None:
                raise LayerViolationError(
                    f"link source {link.source!r} is a {model.element_kind(link.source)}, "
                    "not a security requirement",
                    part="source",
                )
            raise DanglingEndpointError(
                f"unknown security requirement {link.source!r}", part="source"
            )
        target_kind = model.element_kind(link.target)
        if target_kind is None:
            raise DanglingEndpointError(f"unknown CIF {link.target!r}", part="target")
        if target_kind != "cif":
            raise LayerViolationError(
                f"a requirement may only impact a CIF, but {link.target!r} is a {target_kind}",
                part="target",
            )
    else:
        source_kind = model.element_kind(link.source)
        if source_kind != "cif":
            if source_kind is not None:
                raise LayerViolationError(
                    f"link source {link.source!r} is a {source_kind}, not a CIF",
                    part="source",
                )
            raise DanglingEndpointError(f"unknown CIF {link.source!r}", part="source")
        target_kind = model.element_kind(link.target)
        if target_kind is None:
            raise DanglingEndpointError(f"unknown vision {link.target!r}", part="target")
        if target_kind != "vision":
            raise LayerViolationError(
                f"a CIF may only impact a vision, but {link.target!r} is a {target_kind}",
                part="target",
            )
    model.scale.rank(link.severity)
    if model.find_link(link.source, link.target) is not None:
        raise DuplicateLinkError(
            f"duplicate link {link.source} -> {link.target}", part="source"
        )


def make_link(model: Model, source: str, target: str, severity: str) -> ImpactLink:
    """Build a link against ``model``, inferring its layer from the source.

    A dotted source names a requirement; a plain identifier must name a CIF.
    Raises the same errors as add_element would.
    """
    if "." in source:
        layer = LinkLayer.REQUIREMENT_TO_CIF
    else:
        source_kind = model.element_kind(source)
        if source_kind == "cif":
            layer = LinkLayer.CIF_TO_VISION
        elif source_kind is not None:
            raise LayerViolationError(
                f"link source {source!r} is a {source_kind}; only requirements and CIFs "
                "may be link sources",
                part="source",
            )
        else:
            raise DanglingEndpointError(f"unknown CIF {source!r}", part="source")
    link = ImpactLink(source, target, severity, layer)
    _validate_link(model, link)
    return link


def add_element(model: Model, element: Element) -> Model:
    """Return a new model extended with ``element``; ``model`` is unchanged.

    Raises DuplicateIdError, DanglingEndpointError, LayerViolationError,
    UnknownLabelError, or DuplicateLinkError before anything is built.
    """
    if isinstance(element, ImpactLink):
        _validate_link(model, element)
        return Model(
            scale=model.scale,
            visions=model.visions,
            cifs=model.cifs,
            assets=model.assets,
            links=model.links + (element,),
        )
    taken = model.element_kind(element.id)
    if taken is not None:
        raise DuplicateIdError(f"id {element.id!r} is already used by a {taken}")
    visions, cifs, assets = dict(model.visions), dict(model.cifs), dict(model.assets)
    if isinstance(element, BusinessVision):
        visions[element.id] = element
    elif isinstance(element, CriticalImpactFactor):
        cifs[element.id] = element
    elif isinstance(element, Asset):
        assets[element.id] = element
    else:
        raise TypeError(f"cannot add {type(element).__name__} to a model")
    return Model(scale=model.scale, visions=visions, cifs=cifs, assets=assets, links=model.links)
