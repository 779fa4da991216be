"""Shared test helpers: a random model generator and naive scoring oracles.

The oracles re-derive scores straight from the raw link tuples — enumerate
every requirement -> CIF -> vision triple, take the min per path, then max
or mean — so the engine is checked against an independent implementation
rather than against itself.
"""

from __future__ import annotations

import random
from dataclasses import replace
from fractions import Fraction

from srprio import (
    Asset,
    AssetKind,
    BusinessVision,
    CriticalImpactFactor,
    ImpactLink,
    LinkLayer,
    Model,
    SeverityScale,
    Strategy,
    ValueDiscipline,
)

# Titles are free text; make sure quoting, escaping, and CSV rules get hit.
TITLES = (
    "",
    "Control system",
    'He said "down" twice',
    "Back\\slash C:\\share",
    "Comma, separated, title",
    "Line\nbreak inside",
    "Tab\there",
    "Grüße aus Zürich",
    "生産管理システム",
)

LABEL_POOL = ("ignore", "minor", "moderate", "major", "severe", "extreme", "dire")
PROPERTY_POOL = ("availability", "confidentiality", "integrity", "authenticity", "traceability")
DISCIPLINES = tuple(ValueDiscipline)
KINDS = tuple(AssetKind)


def random_scale(rng: random.Random) -> SeverityScale:
    if rng.random() < 0.4:
        return SeverityScale()
    return SeverityScale(tuple(rng.sample(LABEL_POOL, rng.randint(2, 5))))


def random_model(rng: random.Random) -> Model:
    scale = random_scale(rng)
    visions = [
        BusinessVision(f"vision_{i}", rng.choice(TITLES), rng.choice(DISCIPLINES))
        for i in range(rng.randint(0, 10))
    ]
    cifs = [
        CriticalImpactFactor(f"cif_{i}", rng.choice(TITLES))
        for i in range(rng.randint(0, 10))
    ]
    assets = [
        Asset(
            f"asset_{i}",
            rng.choice(TITLES),
            rng.choice(KINDS),
            tuple(rng.sample(PROPERTY_POOL, rng.randint(1, 3))),
        )
        for i in range(rng.randint(0, 10))
    ]
    density = rng.uniform(0.1, 0.6)
    links = []
    for asset in assets:
        for prop in asset.property_names:
            for cif in cifs:
                if rng.random() < density:
                    links.append(
                        ImpactLink(f"{asset.id}.{prop}", cif.id,
                                   rng.choice(scale.labels), LinkLayer.REQUIREMENT_TO_CIF)
                    )
    for cif in cifs:
        for vision in visions:
            if rng.random() < density:
                links.append(
                    ImpactLink(cif.id, vision.id,
                               rng.choice(scale.labels), LinkLayer.CIF_TO_VISION)
                )
    return Model(scale=scale, visions=visions, cifs=cifs, assets=assets, links=links)


def oracle_requirement_values(model: Model, strategy: Strategy) -> dict[str, Fraction | None]:
    """Naive triple enumeration: min over each path's two hops, then combine."""
    rank = {label: i for i, label in enumerate(model.scale.labels)}
    hop1 = [(l.source, l.target, rank[l.severity])
            for l in model.links if l.layer is LinkLayer.REQUIREMENT_TO_CIF]
    hop2 = [(l.source, l.target, rank[l.severity])
            for l in model.links if l.layer is LinkLayer.CIF_TO_VISION]
    values: dict[str, Fraction | None] = {}
    for asset in model.assets.values():
        for prop in asset.property_names:
            requirement = f"{asset.id}.{prop}"
            path_values = [
                min(severity1, severity2)
                for source, cif, severity1 in hop1
                for cif2, _vision, severity2 in hop2
                if source == requirement and cif2 == cif
            ]
            if not path_values:
                values[requirement] = None
            elif strategy is Strategy.MAX:
                values[requirement] = Fraction(max(path_values))
            else:
                values[requirement] = Fraction(sum(path_values), len(path_values))
    return values


def oracle_cif_values(model: Model, strategy: Strategy) -> dict[str, Fraction | None]:
    rank = {label: i for i, label in enumerate(model.scale.labels)}
    values: dict[str, Fraction | None] = {}
    for cif_id in model.cifs:
        ranks = [rank[l.severity] for l in model.links
                 if l.layer is LinkLayer.CIF_TO_VISION and l.source == cif_id]
        if not ranks:
            values[cif_id] = None
        elif strategy is Strategy.MAX:
            values[cif_id] = Fraction(max(ranks))
        else:
            values[cif_id] = Fraction(sum(ranks), len(ranks))
    return values


def relabeled(model: Model) -> Model:
    """The same model under an order-preserving renaming of every label."""
    new_labels = tuple(f"x{i}_{label}" for i, label in enumerate(model.scale.labels))
    mapping = dict(zip(model.scale.labels, new_labels))
    return Model(
        scale=SeverityScale(new_labels),
        visions=model.visions,
        cifs=model.cifs,
        assets=model.assets,
        links=[replace(l, severity=mapping[l.severity]) for l in model.links],
    )


def raise_one_link(model: Model, rng: random.Random) -> Model | None:
    """Bump one random link's severity one step up; None if all are at top."""
    candidates = [i for i, l in enumerate(model.links)
                  if model.scale.rank(l.severity) < model.scale.top_rank]
    if not candidates:
        return None
    index = rng.choice(candidates)
    links = list(model.links)
    bumped = model.scale.labels[model.scale.rank(links[index].severity) + 1]
    links[index] = replace(links[index], severity=bumped)
    return Model(scale=model.scale, visions=model.visions, cifs=model.cifs,
                 assets=model.assets, links=links)
