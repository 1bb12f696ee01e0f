"""Built-in scenario with the worked examples and their expected values."""

from __future__ import annotations

DEMO_SCENARIO = {
    "name": "worked examples",
    "seed": 0,
    "tolerances": {"tol": 1e-12},
    "spaces": {
        "mu": {"weights": [1, 1]},
        "two_mu": {"weights": [2, 2]},
        "P": {"weights": [0.2, 0.3, 0.5]},
        "null_point": {"weights": [0, 1]},
    },
    "maps": {
        "id_mu_to_2mu": {"source": "mu", "target": "two_mu", "mapping": [1, 2]},
        "id_2mu_to_mu": {"source": "two_mu", "target": "mu", "mapping": [1, 2]},
        "onto_null": {"source": "mu", "target": "null_point", "mapping": [1, 2]},
    },
    "algebras": {
        "C3": {"kind": "function", "n": 3},
        "M2": {"kind": "matrix", "n": 2},
        "diag2": {"kind": "generators", "n": 2, "matrices": [[[1, 0], [0, 2]]]},
    },
    "measures": {
        "phi_P": {"algebra": "C3", "kind": "space", "space": "P"},
        "trace2": {"algebra": "M2", "kind": "trace"},
        "pure": {"algebra": "diag2", "kind": "vector", "h": [1, 0]},
    },
    "ideals": {
        "off_B": {"algebra": "C3", "generators": [[0, 0, 1]]},
    },
    "tasks": [
        {"op": "map_norm", "map": "id_mu_to_2mu", "expect": 0.5},
        {"op": "map_norm", "map": "id_2mu_to_mu", "expect": 2},
        {"op": "map_norm_bruteforce", "map": "id_mu_to_2mu", "expect": 0.5},
        {"op": "map_norm", "map": "onto_null", "expect": "unbounded"},
        {"op": "inclusion_norm", "space": "P", "subset": [1, 2], "expect": 1},
        {"op": "normalization_norm_check", "map": "id_mu_to_2mu", "expect": 1},
        {"op": "norm_agreement", "map": "id_mu_to_2mu", "expect": 0.5},
        {"op": "norm_agreement", "map": "onto_null", "expect": "unbounded"},
        {"op": "gns", "measure": "phi_P", "expect": 3},
        {"op": "condition", "measure": "phi_P", "ideal": "off_B", "expect": 0.5},
        {"op": "conditional_expectation", "space": "P", "subset": [1, 2], "element": [1, 0, 0], "expect": 0.4},
        {"op": "bayes", "measure": "phi_P", "ideal": "off_B", "x": [1, 0, 0], "expect": 0.4},
        {"op": "conditional_duality", "measure": "phi_P", "ideal": "off_B", "expect": [0.2, 0.3]},
        {"op": "is_simple", "algebra": "M2", "expect": True},
        {"op": "ideal_closure", "algebra": "M2", "generators": [[1, 0, 0, 0]], "expect": 4},
        {"op": "condition", "measure": "trace2", "ideal_generators": [[0, 1, 0, 0]],
         "expect_error": "ImproperIdeal"},
        {"op": "rmk", "measure": "pure", "expect": [1, 0]},
        {"op": "round_trip", "space": "P", "expect": [0.2, 0.3, 0.5]},
    ],
}
