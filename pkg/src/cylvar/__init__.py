"""Variational toolkit for the hydrogen atom confined in an infinite
cylinder under an axial magnetic field."""

from .quadrature import QuadratureSpec, integrate_cylinder, convergence_check
from .trialfn import TrialParams, SystemConfig
from .hamiltonian import (EnergyBreakdown, Observables, energy, observables,
                          binding_energy, reference_energy,
                          fit_large_rho0_tail)
from .optimizer import (OptimizeRequest, OptimizeResult, minimize, scan,
                        default_request, DEFAULT_STARTS)
from .specfun import kummer_m, KummerArgs, landau_cylinder_energy, \
    bessel_j0_first_zero
from .hydrogen2d import RadialGrid, ground_energy_2d, ratio_3d_2d
from .appendix_rep import map_labels, apply_h, verify_table, Poly2
from .records import ScanRecord

__version__ = "0.1.0"
