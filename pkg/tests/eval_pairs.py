"""Five hand-built generated/curated operator pairs for the eval harness,
with the per-class count table worked out by hand beside each pair.

The HAND_COUNTS table below is the independent record: per class and
category it lists (reference, generated, match) integers read straight
off the documents. The recount oracle in the tests turns those integers
into precision/recall/F1 without touching the harness code.
"""
import copy

from schemamine.schema_assembler import OperatorSchemas

DRAFT4 = "http://json-schema.org/draft-04/schema#"


def _doc(class_name, props, constraints=(), detected=None) -> OperatorSchemas:
    main = {"type": "object", "additionalProperties": False,
            "required": list(props), "relevantToOptimizer": list(props),
            "properties": props}
    prov = {}
    if detected is not None:
        prov = {"constraints": {"detected": detected,
                                "valid": len([c for c in constraints
                                              if "anyOf" in c])}}
    return OperatorSchemas(
        class_name=class_name, library="fixture",
        hyperparams={"$schema": DRAFT4, "allOf": [main, *constraints]},
        provenance=prov)


# --- Pair 1: identity ------------------------------------------------------
_alpha_constraint = {
    "description": "Degree only used when kernel=linear.",
    "anyOf": [
        {"type": "object", "properties": {"degree": {"enum": [3]}}},
        {"type": "object", "properties": {"kernel": {"enum": ["linear"]}}}]}

ALPHA_GEN = _doc("AlphaModel", {
    "kernel": {"description": "Kernel type.", "enum": ["linear", "rbf"],
               "default": "rbf"},
    "gamma": {"description": "Kernel coefficient.", "type": "number",
              "distribution": "loguniform", "minimum": 0.0,
              "exclusiveMinimum": True, "default": 1.0,
              "minimumForOptimizer": 0.001, "maximumForOptimizer": 10.0},
    "degree": {"type": "integer", "distribution": "uniform",
               "minimum": 1, "maximum": 10, "default": 3},
}, constraints=[_alpha_constraint], detected=1)
ALPHA_CUR = copy.deepcopy(ALPHA_GEN)

# arguments 3/3/3  types 3/3/3  defaults 3/3/3  ranges 2/2/2
# distributions 2/2/2  constraints 1/1/1  type_values 3/3/3  enum_values 2/2/2

# --- Pair 2: enum under-specification --------------------------------------
BETA_GEN = _doc("BetaModel", {
    "criterion": {"type": "string", "default": "friedman_mse"},
    "n_estimators": {"type": "integer", "default": 100},
}, detected=0)
BETA_CUR = _doc("BetaModel", {
    "criterion": {"enum": ["friedman_mse", "mse", "mae"],
                  "default": "friedman_mse"},
    "n_estimators": {"type": "integer", "default": 100},
})

# arguments 2/2/2  types 2/2/1  defaults 2/2/2  ranges 0/0/0
# distributions 0/0/0  constraints 0/0/0  type_values 2/2/1  enum_values 3/0/0

# --- Pair 3: range subset rule ----------------------------------------------
GAMMA_GEN = _doc("GammaModel", {
    "C": {"type": "number", "distribution": "loguniform", "minimum": 0.0,
          "exclusiveMinimum": True, "default": 1.0,
          "minimumForOptimizer": 0.03125, "maximumForOptimizer": 32768},
    "tol": {"type": "number", "default": 0.001,
            "minimumForOptimizer": -1.0, "maximumForOptimizer": 1.0},
}, detected=0)
GAMMA_CUR = _doc("GammaModel", {
    "C": {"type": "number", "distribution": "loguniform", "minimum": 0.0,
          "exclusiveMinimum": True, "default": 1.0},
    "tol": {"type": "number", "default": 0.001, "minimum": 0.0,
            "exclusiveMinimum": True, "maximumForOptimizer": 1.0},
})

# arguments 2/2/2  types 2/2/2  defaults 2/2/2  ranges 2/2/1 (C subset, tol not)
# distributions 1/1/1  constraints 0/0/0  type_values 2/2/2  enum_values 0/0/0

# --- Pair 4: default matching ------------------------------------------------
DELTA_GEN = _doc("DeltaModel", {
    "scale": {"type": "number", "default": 1.0},
    "penalty": {"enum": ["l1", "l2"], "default": "l2"},
    "mode": {"type": "string"},
}, detected=0)
DELTA_CUR = _doc("DeltaModel", {
    "scale": {"type": "number", "default": 1},
    "penalty": {"enum": ["l1", "l2"], "default": "l1"},
    "mode": {"type": "string", "default": "auto"},
})

# arguments 3/3/3  types 3/3/3  defaults 3/2/1 (scale int~float ok, penalty
# mismatch, mode missing)  ranges 0/0/0  distributions 0/0/0
# constraints 0/0/0  type_values 3/3/3  enum_values 2/2/2

# --- Pair 5: constraints and distributions ------------------------------------
_eps_gen_constraints = [
    {"description": "Only used when solver=sgd.",
     "anyOf": [
         {"type": "object", "properties": {"power_t": {"enum": [0.5]}}},
         {"type": "object", "properties": {"solver": {"enum": ["sgd"]}}}]},
    {"description": "TODO: Only when the moon is full."},
]
_eps_cur_constraints = [
    {"description": "power_t matters for sgd alone.",
     "anyOf": [
         {"type": "object", "properties": {"solver": {"enum": ["sgd"]}}},
         {"type": "object", "properties": {"power_t": {"enum": [0.5]}}}]},
    {"description": "alpha matters for sgd alone.",
     "anyOf": [
         {"type": "object", "properties": {"alpha": {"enum": [0.0001]}}},
         {"type": "object", "properties": {"solver": {"enum": ["sgd"]}}}]},
]

EPSILON_GEN = _doc("EpsilonModel", {
    "solver": {"enum": ["sgd", "adam"], "default": "adam"},
    "power_t": {"type": "number", "default": 0.5, "distribution": "uniform",
                "minimumForOptimizer": 0.1, "maximumForOptimizer": 0.9},
    "alpha": {"type": "number", "default": 0.0001,
              "distribution": "loguniform",
              "minimumForOptimizer": 1e-05, "maximumForOptimizer": 0.1},
}, constraints=_eps_gen_constraints, detected=2)
EPSILON_CUR = _doc("EpsilonModel", {
    "solver": {"enum": ["sgd", "adam"], "default": "adam"},
    "power_t": {"type": "number", "default": 0.5,
                "distribution": "loguniform",
                "minimumForOptimizer": 0.1, "maximumForOptimizer": 0.9},
    "alpha": {"type": "number", "default": 0.0001,
              "distribution": "loguniform",
              "minimumForOptimizer": 1e-05, "maximumForOptimizer": 0.1},
}, constraints=_eps_cur_constraints)

# arguments 3/3/3  types 3/3/3  defaults 3/3/3  ranges 2/2/2
# distributions 2/2/1 (solver has none; power_t differs)
# constraints 2/1/1 (todo not generated)  type_values 3/3/3  enum_values 2/2/2

PAIRS = [
    (ALPHA_GEN, ALPHA_CUR),
    (BETA_GEN, BETA_CUR),
    (GAMMA_GEN, GAMMA_CUR),
    (DELTA_GEN, DELTA_CUR),
    (EPSILON_GEN, EPSILON_CUR),
]

# (reference, generated, match) per class per category, read off the
# documents by hand; every number above restated in one table.
HAND_COUNTS = {
    "AlphaModel":   {"arguments": (3, 3, 3), "types": (3, 3, 3),
                     "defaults": (3, 3, 3), "ranges": (2, 2, 2),
                     "distributions": (2, 2, 2), "constraints": (1, 1, 1),
                     "type_values": (3, 3, 3), "enum_values": (2, 2, 2)},
    "BetaModel":    {"arguments": (2, 2, 2), "types": (2, 2, 1),
                     "defaults": (2, 2, 2), "ranges": (0, 0, 0),
                     "distributions": (0, 0, 0), "constraints": (0, 0, 0),
                     "type_values": (2, 2, 1), "enum_values": (3, 0, 0)},
    "GammaModel":   {"arguments": (2, 2, 2), "types": (2, 2, 2),
                     "defaults": (2, 2, 2), "ranges": (2, 2, 1),
                     "distributions": (1, 1, 1), "constraints": (0, 0, 0),
                     "type_values": (2, 2, 2), "enum_values": (0, 0, 0)},
    "DeltaModel":   {"arguments": (3, 3, 3), "types": (3, 3, 3),
                     "defaults": (3, 2, 1), "ranges": (0, 0, 0),
                     "distributions": (0, 0, 0), "constraints": (0, 0, 0),
                     "type_values": (3, 3, 3), "enum_values": (2, 2, 2)},
    "EpsilonModel": {"arguments": (3, 3, 3), "types": (3, 3, 3),
                     "defaults": (3, 3, 3), "ranges": (2, 2, 2),
                     "distributions": (2, 2, 1), "constraints": (2, 1, 1),
                     "type_values": (3, 3, 3), "enum_values": (2, 2, 2)},
}
