"""Generalized inverses of dual, hyper-dual and n-order dual matrices."""

from . import dualmat, hyperdual, linsolve, norder, realmat
from .dualmat import (DualCanonicalForm, DualMatrix, canonical_form, dggi,
                      dggi_exists, dmpgi, dmpgi_exists, dmpgi_select,
                      dual_add, dual_index_is_one, dual_mul, mpdgi)
from .errors import (FormulaInconsistent, GInvError, HypothesisFailed,
                     Inconsistent, IndexNotOne, InverseMissing,
                     NotGroupInvertible, NotMPInvertible, NotSquare,
                     OracleMismatch, OrderMismatch, OrderZero, ShapeMismatch,
                     ToleranceConflict, VerificationError, ZeroMatrix)
from .hyperdual import (ExistenceReport, HyperDualMatrix, OrderLawReport,
                        hd_add, hd_mul, hdggi, hdggi_commuting_case,
                        hdggi_exists, hdggi_via_axioms, hdmpgi, hdmpgi_exists,
                        hdmpgi_select, order_law_check)
from .kernels import BACKEND
from .linsolve import (HyperDualVector, consistent, hnorm, in_null, in_range,
                       norm_minimality_probe, normal_solution, solution_component_conditions,
                       solve)
from .norder import (AxiomReport, NOrderMatrix, join, n_add, n_group_inverse,
                     n_group_inverse_via_axioms, n_mul, split,
                     verify_group_axioms, verify_penrose_axioms)
from .realmat import (CoreDecomposition, Tolerance, core_decomposition,
                      full_rank_factorization, group_inverse, index_is_one,
                      pinv, rank)

__version__ = "0.1.0"
