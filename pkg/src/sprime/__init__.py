"""S-prime submodules, m-systems and S-Noetherian modules over finite rings."""

from .errors import (CapExceeded, ImproperError, NotDisjointError, NotMSystemError,
                     SPrimeError, StructureError)
from .harness import Corpus, CorpusSpec, TheoremReport, run_theorem, run_verify, search_counterexamples
from .instance import parse_document, parse_instance
from .maps import (ModuleHom, canonical_projection, image_submodule, inclusion, kernel,
                   preimage_submodule, validate_hom)
from .predicates import (PER_PAIR, UNIFORM, is_multiplication_module, is_prime_ideal,
                         is_prime_submodule, is_right_s_noetherian_ring, is_s_finite,
                         is_s_multiplication_module, is_s_noetherian_module, is_s_prime_ideal,
                         is_s_prime_ideal_by_ideals, is_s_prime_submodule,
                         is_s_prime_submodule_by_ideals, is_s_prime_via_colon)
from .structures import (FiniteRightModule, FiniteRing, direct_sum, make_matrix_ring,
                         make_upper_triangular, make_zmod, product_module, product_ring,
                         quotient_module, quotient_ring, regular_module, validate_module,
                         validate_ring, zero_module)
from .substructures import (Ideal, MSystem, Submodule, colon_module, colon_ring,
                            enumerate_msystems, enumerate_submodules, enumerate_two_sided_ideals,
                            generate_submodule, is_msystem, make_msystem, principal_ideal,
                            submodule_ideal_product)
from .verdict import Verdict

__version__ = "0.1.0"
