import itertools
import json
import logging
from typing import Dict, List

from algebra import GroupSpec
from errors import DomainError, QocError
from instance import (QocInstance, make_custom, make_evaluation, make_extrapolation, make_interpolation,
                      make_interrogation, make_summation)

TYPES = ("summation", "interrogation", "interpolation", "evaluation", "extrapolation", "custom")


def read_document(path: str) -> Dict:
    """Read an instance description from a JSON file"""
    try:
        with open(path, encoding="utf-8") as handle:
            document = json.load(handle)
    except FileNotFoundError:
        raise DomainError(f"Instance file not found: {path}")
    except json.JSONDecodeError as e:
        raise DomainError(f"Instance file {path} is not valid JSON: {e}")
    if not isinstance(document, dict):
        raise DomainError(f"Instance file {path} must hold a JSON object")
    return document


def _require(document: Dict, *keys: str):
    missing = [k for k in keys if k not in document]
    if missing:
        raise DomainError(f"{document.get('type', 'instance')} needs field(s): {', '.join(missing)}")


def _group(document: Dict) -> GroupSpec:
    if "moduli" in document:
        moduli = document["moduli"]
        return GroupSpec(tuple(moduli) if isinstance(moduli, list) else (moduli,))
    if "N" in document:
        return GroupSpec.cyclic(int(document["N"]))
    raise DomainError(f"{document.get('type', 'instance')} needs 'moduli' or 'N'")


def _targets(document: Dict) -> List[int]:
    if "targets" in document:
        return [int(y) for y in document["targets"]]
    if "k" in document:
        return list(range(int(document["k"])))
    raise DomainError(f"{document['type']} needs 'targets' or 'k'")


def parse_instance(document: Dict) -> QocInstance:
    """Build an instance from a parsed JSON document"""
    kind = document.get("type")
    if kind not in TYPES:
        raise DomainError(f"Unknown instance type: {kind}")

    try:
        if kind == "summation":
            _require(document, "M")
            return make_summation(int(document["M"]), _group(document))
        if kind == "interrogation":
            _require(document, "M")
            return make_interrogation(int(document["M"]), _group(document), _targets(document))
        if kind == "interpolation":
            _require(document, "p", "d")
            return make_interpolation(int(document["p"]), int(document["d"]))
        if kind == "evaluation":
            _require(document, "p", "d")
            return make_evaluation(int(document["p"]), int(document["d"]), _targets(document))
        if kind == "extrapolation":
            _require(document, "p", "d")
            return make_extrapolation(int(document["p"]), int(document["d"]))

        _require(document, "domain", "kernel_basis", "quotient_basis")
        return make_custom(document["domain"], _group(document), document["kernel_basis"],
                           document["quotient_basis"], document.get("label", "custom"))
    except QocError:
        raise
    except (TypeError, ValueError) as e:
        logging.error(f"Instance parsing failed: {e}")
        raise DomainError(f"Malformed {kind} instance: {e}")


def load_instance(path: str) -> QocInstance:
    return parse_instance(read_document(path))


def expand_target_sets(document: Dict) -> List[Dict]:
    """One document per k-subset of the domain, for sweeping the classifying map"""
    kind = document.get("type")
    if kind == "interrogation":
        _require(document, "M")
        points = range(int(document["M"]))
    elif kind == "evaluation":
        _require(document, "p")
        points = range(int(document["p"]))
    else:
        raise DomainError(f"Target-set sweeps apply to interrogation and evaluation, not {kind}")

    k = len(_targets(document))
    expanded = []
    for subset in itertools.combinations(points, k):
        variant = {key: value for key, value in document.items() if key != "k"}
        variant["targets"] = list(subset)
        expanded.append(variant)
    logging.info(f"Expanded {kind} instance into {len(expanded)} target sets of size {k}")
    return expanded
