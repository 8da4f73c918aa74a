"""Finite quandles, their enveloping groups, and group-subset constructions."""

from .errors import (AxiomViolation, BudgetExhausted, CertificateFailed,
                     ClosureLimitExceeded, DepthExceeded, DuplicateBaseElement,
                     GroupValidationError, IdentityBaseElement, NotASubquandle,
                     NotAbelian, OrderLimitExceeded, QuandlesError,
                     SearchLimitExceeded, SizeLimitExceeded,
                     UnionConditionViolated)
from .fingroup import FiniteGroup, HeisenbergModel, heisenberg_model, make_standard_group
from .quandle import (FiniteQuandle, PermGroup, QuandlePredicates, from_table,
                      homomorphisms, is_isomorphic, is_normal_subquandle,
                      subquandle)
from .quandle import direct_product as quandle_product
from .constructions import (conj, conj_inv, core, dihedral_quandle, takasaki,
                            trivial, u_quandle, union)
from .ga import GAElement, GAQuandle, augmentation_check, compare_with_ga, ga_quandle, iota
from .envelope import (AbelianInvariants, Assignment, GroupPresentation,
                       InjectivityCertificate, abelianization, eval_assignment,
                       injectivity_certificate, presentation_of,
                       r2n_presentation, reconstruct_check, search_certificate,
                       smith_normal_form, u_reduced_presentation,
                       verify_r2n, verify_u_reduction)

__version__ = "0.1.0"
