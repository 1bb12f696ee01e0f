"""Classical and quantum conditional measures on finite-dimensional spaces and algebras."""

from qcm.algebra import (AlgebraHom, Ideal, Quotient, StarAlgebra, direct_sum, function_algebra, ideal_closure,
                         is_simple, matrix_algebra, quotient, subalgebra_from_generators)
from qcm.classical import FiniteMeasureSpace, MeasurableMap, conditional_space, map_norm, map_norm_bruteforce
from qcm.duality import lift_map, rmk_measure, round_trip_classical, spectrum, to_quantum
from qcm.gns import bayes_analog, conditional_measure, gns
from qcm.linalg import UNBOUNDED
from qcm.measure import QuantumMeasure, density_measure, hom_norm, is_positive, vector_measure
from qcm.properties import run_property_suite
from qcm.scenario import run_scenario

__all__ = [
    "AlgebraHom", "FiniteMeasureSpace", "Ideal", "MeasurableMap", "QuantumMeasure", "Quotient", "StarAlgebra",
    "UNBOUNDED", "bayes_analog", "conditional_measure", "conditional_space", "density_measure", "direct_sum",
    "function_algebra", "gns", "hom_norm", "ideal_closure", "is_positive", "is_simple", "lift_map", "map_norm",
    "map_norm_bruteforce", "matrix_algebra", "quotient", "rmk_measure", "round_trip_classical", "run_property_suite",
    "run_scenario", "spectrum", "subalgebra_from_generators", "to_quantum", "vector_measure",
]
