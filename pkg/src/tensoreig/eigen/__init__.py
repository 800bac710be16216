"""Eigenlines, sphere fields and Brouwer degree."""
from .degree import (CriticalTarget, DegreeMismatch, DegreeReport, LeadingFormVanishes, brouwer_degree,
                     global_degree, real_rep)
from .lines import (EigenLine, EigenSearch, LineCheck, NonConvergence, NotAnEigenline, angular_distance,
                    bezout_count, canonical_unit, find_eigenlines, line_from_vector, normalize_eigenvalue,
                    search_eigenlines, verify_eigenline)
from .sphere import (DegenerateStationaryPoint, Extremum, PoincareHopfCheck, SphereIndex, extremum_on_sphere,
                     poincare_hopf_check, sphere_field, sphere_field_index)

__all__ = [
    "CriticalTarget", "DegreeMismatch", "DegreeReport", "LeadingFormVanishes", "brouwer_degree",
    "global_degree", "real_rep", "EigenLine", "EigenSearch", "LineCheck", "NonConvergence", "NotAnEigenline",
    "angular_distance", "bezout_count", "canonical_unit", "find_eigenlines", "line_from_vector",
    "normalize_eigenvalue", "search_eigenlines", "verify_eigenline", "DegenerateStationaryPoint", "Extremum",
    "PoincareHopfCheck", "SphereIndex", "extremum_on_sphere", "poincare_hopf_check", "sphere_field",
    "sphere_field_index",
]
