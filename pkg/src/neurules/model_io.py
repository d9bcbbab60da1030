"""JSON persistence for trained collectives.

The file stores everything inference needs: the feature pool's cuts, the
neuron expressions, the voting threshold, and an echo of the training
configuration (including the label column name, which ``eval`` reuses).
Training columns are not stored; a loaded model quantizes fresh inputs.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .collective import Collective
from .errors import ModelFormatError
from .neurons import Neuron, expr_from_json, expr_to_json
from .quantization import GE, LT, QuantizedFeature

FORMAT_VERSION = 1

_EMPTY = np.zeros(0, dtype=bool)
_EMPTY.setflags(write=False)


@dataclass(frozen=True)
class LoadedModel:
    collective: Collective
    config: dict
    report: dict | None


def model_to_dict(
    collective: Collective,
    report: dict | None = None,
    config: dict | None = None,
) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "label_names": list(collective.label_names),
        "variable_names": list(collective.variable_names),
        "chi0": str(collective.chi0),
        "pool": [
            {
                "source": list(f.source),
                "threshold": f.threshold,
                "polarity": f.polarity,
                "errors": f.errors,
                "constant": f.constant,
            }
            for f in collective.pool
        ],
        "neurons": [
            {
                "expression": expr_to_json(n.expression),
                "layer": n.layer,
                "errors": n.errors,
            }
            for n in collective.neurons
        ],
        "weights": list(collective.weights) if collective.weights is not None else None,
        "config": dict(config) if config is not None else {},
        "report": report,
    }


def dict_to_model(data: dict) -> LoadedModel:
    if not isinstance(data, dict):
        raise ModelFormatError("model file must hold a JSON object")
    version = data.get("format_version")
    if version != FORMAT_VERSION:
        raise ModelFormatError(f"unsupported model format version: {version!r}")
    try:
        pool = [
            QuantizedFeature(
                source=tuple(int(i) for i in f["source"]),
                threshold=float(f["threshold"]),
                polarity=str(f["polarity"]),
                errors=int(f["errors"]),
                column=_EMPTY,
                constant=bool(f.get("constant", False)),
            )
            for f in data["pool"]
        ]
        for f in pool:
            if f.polarity not in (GE, LT):
                raise ModelFormatError(f"unknown polarity: {f.polarity!r}")
        neurons = [
            Neuron(
                expression=expr_from_json(n["expression"]),
                layer=int(n["layer"]),
                errors=int(n["errors"]),
                column=_EMPTY,
            )
            for n in data["neurons"]
        ]
        weights = data.get("weights")
        collective = Collective(
            neurons=neurons,
            pool=pool,
            chi0=Fraction(data["chi0"]),
            label_names=tuple(data["label_names"]),
            variable_names=tuple(data["variable_names"]),
            weights=tuple(int(w) for w in weights) if weights is not None else None,
        )
    except ModelFormatError:
        raise
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise ModelFormatError(f"malformed model file: {exc}") from exc
    if len(collective.label_names) != 2:
        raise ModelFormatError("model must name exactly two classes")
    return LoadedModel(collective, dict(data.get("config") or {}), data.get("report"))


def save_model(
    path,
    collective: Collective,
    report: dict | None = None,
    config: dict | None = None,
) -> None:
    payload = model_to_dict(collective, report=report, config=config)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def load_model(path) -> LoadedModel:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ModelFormatError(f"model file is not valid JSON: {exc}") from exc
    return dict_to_model(data)
