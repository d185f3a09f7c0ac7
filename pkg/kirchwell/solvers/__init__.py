"""
Critical points of the Kirchhoff energy: geometry certificates, constrained
minimization, mountain pass, Newton polish, deflation and the multiplicity
census.
"""
from kirchwell.solvers.base import GeometryReport, SolveResult
from kirchwell.solvers.census import Census, multiplicity_census
from kirchwell.solvers.geometry import (check_geometry, crest_radius,
                                        find_e0, path_energy_cap, sphere_min)
from kirchwell.solvers.minimize import ball_min, exterior_min
from kirchwell.solvers.mountain import mountain_pass
from kirchwell.solvers.newton import deflated_search, newton_refine

__all__ = [
    'Census', 'GeometryReport', 'SolveResult', 'ball_min', 'check_geometry',
    'crest_radius', 'deflated_search', 'exterior_min', 'find_e0',
    'mountain_pass', 'multiplicity_census', 'newton_refine',
    'path_energy_cap', 'sphere_min',
]
