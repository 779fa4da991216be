"""Conformance checks for whole models, parsed or built programmatically.

validate() never raises; it returns diagnostics. The codes are stable public
identifiers:

    E001 duplicate-id            E002 dangling-endpoint
    E003 layer-violation         E004 unknown-severity
    E005 duplicate-link
    W001 unlinked-requirement    W002 cif-without-vision-link
    W003 unreferenced-vision     W004 no-visions

Errors mark structure the prioritizer cannot interpret; warnings mark
modeling smells (inventory-only models stay usable, they just rank as
no-path).
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import LinkLayer, Model, UnknownLabelError, requirements_of


@dataclass(frozen=True)
class ValidationDiagnostic:
    code: str
    subject: str
    message: str
    severity: str  # "error" | "warning"


def _error(code: str, subject: str, message: str) -> ValidationDiagnostic:
    return ValidationDiagnostic(code, subject, message, "error")


def _warning(code: str, subject: str, message: str) -> ValidationDiagnostic:
    return ValidationDiagnostic(code, subject, message, "warning")


def validate(model: Model) -> list[ValidationDiagnostic]:
    """All conformance diagnostics for ``model``, sorted by
    (severity, code, subject). Empty means fully conformant, not even smells."""
    diagnostics: list[ValidationDiagnostic] = []

    seen_ids: dict[str, str] = {}
    for kind, collection in (("vision", model.visions), ("cif", model.cifs), ("asset", model.assets)):
        for element_id in collection:
            if element_id in seen_ids:
                diagnostics.append(
                    _error(
                        "E001",
                        element_id,
                        f"id {element_id!r} is used by both a {seen_ids[element_id]} and a {kind}",
                    )
                )
            else:
                seen_ids[element_id] = kind

    seen_pairs: set[tuple[str, str]] = set()
    for link in model.links:
        subject = f"{link.source}->{link.target}"
        if link.layer is LinkLayer.REQUIREMENT_TO_CIF:
            if not model.has_requirement(link.source):
                if model.element_kind(link.source) is not None:
                    diagnostics.append(
                        _error("E003", subject,
                               f"source {link.source!r} is a {model.element_kind(link.source)}, "
                               "not a security requirement")
                    )
                else:
                    diagnostics.append(
                        _error("E002", subject, f"source {link.source!r} does not exist")
                    )
            target_kind = model.element_kind(link.target)
            if target_kind is None:
                diagnostics.append(_error("E002", subject, f"target {link.target!r} does not exist"))
            elif target_kind != "cif":
                diagnostics.append(
                    _error("E003", subject,
                           f"a requirement may only impact a CIF, but {link.target!r} is a {target_kind}")
                )
        else:
            source_kind = model.element_kind(link.source)
            if source_kind is None and not model.has_requirement(link.source):
                diagnostics.append(_error("E002", subject, f"source {link.source!r} does not exist"))
            elif source_kind != "cif":
                shown = source_kind or "security requirement"
                diagnostics.append(
                    _error("E003", subject, f"source {link.source!r} is a {shown}, not a CIF")
                )
            target_kind = model.element_kind(link.target)
            if target_kind is None:
                diagnostics.append(_error("E002", subject, f"target {link.target!r} does not exist"))
            elif target_kind != "vision":
                diagnostics.append(
                    _error("E003", subject,
                           f"a CIF may only impact a vision, but {link.target!r} is a {target_kind}")
                )
        try:
            model.scale.rank(link.severity)
        except UnknownLabelError as err:
            diagnostics.append(_error("E004", subject, str(err)))
        if link.pair in seen_pairs:
            diagnostics.append(
                _error("E005", subject, f"more than one link from {link.source!r} to {link.target!r}")
            )
        seen_pairs.add(link.pair)

    linked_sources = {link.source for link in model.links}
    for requirement in requirements_of(model):
        if requirement.id not in linked_sources:
            diagnostics.append(
                _warning("W001", requirement.id,
                         f"requirement {requirement.id!r} has no impact link to any CIF")
            )
    cif_vision_sources = {
        link.source for link in model.links if link.layer is LinkLayer.CIF_TO_VISION
    }
    for cif_id in model.cifs:
        if cif_id not in cif_vision_sources:
            diagnostics.append(
                _warning("W002", cif_id, f"CIF {cif_id!r} has no impact link to any vision")
            )
    linked_targets = {link.target for link in model.links}
    for vision_id in model.visions:
        if vision_id not in linked_targets:
            diagnostics.append(
                _warning("W003", vision_id, f"vision {vision_id!r} is not impacted by any CIF")
            )
    if not model.visions:
        diagnostics.append(
            _warning("W004", "model", "the model declares no business visions")
        )

    diagnostics.sort(key=lambda d: (d.severity, d.code, d.subject))
    return diagnostics
