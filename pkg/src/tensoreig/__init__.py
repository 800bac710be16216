"""Eigenvectors and eigenlines of homogeneous polynomial maps."""
from .tensor_core import (Form, HomogeneousMap, NotAGradient, PolynomialMap, SymmetricTensorView, evaluate,
                          gradient_diagnostics, gradient_map, jacobian, polarize_apply, potential)
from .upoly import UnivarPoly, parse_poly, real_roots, solve_binary_form, sturm_chain
from .eigen import (EigenLine, bezout_count, brouwer_degree, extremum_on_sphere, find_eigenlines, global_degree,
                    poincare_hopf_check, sphere_field_index, verify_eigenline)
from .cubic3 import CubicCanonicalForm, analyze, canonicalize, classify
from .odeflow import infinity_spectrum, ray_solution, unbounded_certificate
from .io import parse_input, serialize

__all__ = [
    "Form", "HomogeneousMap", "NotAGradient", "PolynomialMap", "SymmetricTensorView", "evaluate",
    "gradient_diagnostics", "gradient_map", "jacobian", "polarize_apply", "potential", "UnivarPoly",
    "parse_poly", "real_roots", "solve_binary_form", "sturm_chain", "EigenLine", "bezout_count",
    "brouwer_degree", "extremum_on_sphere", "find_eigenlines", "global_degree", "poincare_hopf_check",
    "sphere_field_index", "verify_eigenline", "CubicCanonicalForm", "analyze", "canonicalize", "classify",
    "infinity_spectrum", "ray_solution", "unbounded_certificate", "parse_input", "serialize",
]

__version__ = "0.1.0"
