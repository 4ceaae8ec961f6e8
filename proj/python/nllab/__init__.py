"""Nonlocality bounds for discriminating product-state bases under LOCC."""

import json

from . import _nllab
from ._nllab import (
    ContractViolation,
    ConvergenceError,
    DomainError,
    Error,
    EstimationFailed,
    ParseError,
    ProductBasis,
    UndefinedQuantity,
    ValidationError,
    appendix_constant_min,
    basis_from_json,
    count_domino_tilings,
    domino_basis,
    domino_type_basis,
    gram_under,
    helstrom_error,
    nonlocality_ratio,
    perror_from_eta,
    rotated_domino_basis,
    standard_basis,
    stopping_objective,
)

__all__ = [
    "ContractViolation", "ConvergenceError", "DomainError", "Error", "EstimationFailed",
    "ParseError", "ProductBasis", "UndefinedQuantity", "ValidationError",
    "analyze_tiling", "appendix_constant_min", "baseline_protocol", "basis_from_json",
    "check_domino_rigidity", "check_dimbox_rigidity", "check_pair_of_tiles",
    "check_rotated_chain", "check_uv_lemma", "count_domino_tilings", "domino_basis",
    "domino_constants", "domino_type_basis", "domino_type_constants", "estimate_eta",
    "evaluate_error", "gram_under", "helstrom_error", "interpolate", "leaf_distribution_tv",
    "measure", "nonlocality_ratio", "one_round_protocol", "perror_from_eta",
    "rotated_constants", "rotated_domino_basis", "standard_basis", "stopping_objective",
    "validate_protocol",
]


def _decoded(fn):
    def wrapper(*args, **kwargs):
        return json.loads(fn(*args, **kwargs))

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


analyze_tiling = _decoded(_nllab.analyze_tiling)
domino_constants = _decoded(_nllab.domino_constants)
domino_type_constants = _decoded(_nllab.domino_type_constants)
rotated_constants = _decoded(_nllab.rotated_constants)
measure = _decoded(_nllab.measure)
estimate_eta = _decoded(_nllab.estimate_eta)
check_uv_lemma = _decoded(_nllab.check_uv_lemma)
check_pair_of_tiles = _decoded(_nllab.check_pair_of_tiles)
check_domino_rigidity = _decoded(_nllab.check_domino_rigidity)
check_dimbox_rigidity = _decoded(_nllab.check_dimbox_rigidity)
check_rotated_chain = _decoded(_nllab.check_rotated_chain)


# Protocols are passed around as JSON documents (dicts on this side).
def baseline_protocol(basis):
    return json.loads(_nllab.baseline_protocol(basis))


def one_round_protocol(dA, dB):
    return json.loads(_nllab.one_round_protocol(dA, dB))


def interpolate(protocol, basis, eps):
    return json.loads(_nllab.interpolate(json.dumps(protocol), basis, eps))


def validate_protocol(protocol):
    return json.loads(_nllab.validate_protocol(json.dumps(protocol)))


def evaluate_error(protocol, basis):
    """Error probability with each leaf guessing its leaf_label."""
    return _nllab.evaluate_error(json.dumps(protocol), basis)


def leaf_distribution_tv(original, refined, basis):
    """Per-state total variation between the leaf distributions of two trees."""
    return _nllab.leaf_distribution_tv(json.dumps(original), json.dumps(refined), basis)
