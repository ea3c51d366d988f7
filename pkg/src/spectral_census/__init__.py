"""Lower bounds for the number of negative eigenvalues of Hermitian integral operators.

The library evaluates the two-point invariant ``kappa`` of a kernel, the
ratio ``C_t(mu)`` of a symmetric atomic measure, and the resulting bound
``1/2 + C_t(mu)/16`` on the count of eigenvalues below ``t``.  A Nystrom
eigenvalue oracle, proof-matrix checks, an optimizer for ``mu`` and the
Neumann-minus-Dirichlet application on boxes are built on top.
"""

from .bounds import (BoundReport, c_t, choose_n, convolution_bound_point, convolution_bound_sup,
                     dn_gap_report, fs_constant, theorem_bound, trace_hs_bound)
from .dn_gap import build_dn_kernel, dn_atomic_report, dn_lower_bound, verify_kc_identity
from .domains import BoxDomain, boundary_layer_volume, chi_hat_box
from .errors import AdmissibilityError, CensusError, InvalidKernelError, NotApplicableError, UsageError
from .kernels import HFunction, KernelSpec, builtin_kernel, constant_kernel, difference_kernel, kappa
from .measures import (AtomicMeasure, SymmetricAtomicMeasure, chord_measure, make_symmetric, marginal,
                       shift_measure, symmetrize)
from .optimizer import greedy_atoms, grid_pool, reweight_fixed_support
from .oracle import count_below, inertia_ldl, nystrom_matrix, refine_and_count
from .proof_trace import assemble, check_configuration, hs_off_closed_form, mc_average_check
from .quadrature import Quadrature, make_quadrature

__version__ = "0.1.0"
