"""Multi-set concentration of measure on finite spaces and reversible chains."""

from .errors import (CertificationFailure, MulticoncError, PreconditionError,
                     ValidationError)
from .space import (MetricMeasureSpace, ReversibleChain, SetFamily, chain_from_graph,
                    enlarge, make_family, validate_chain, validate_space)
from .spectral import Spectrum, dirichlet, rayleigh_sup_on_span, spectrum
from .polytope import in_delta_k, merge
from .profile import (bound_iterated, bound_iterated_markov, bound_main, bound_markov,
                      certify_step, coalescence, psi_big)
from .bounds import eig_upper_alt, eig_upper_cgy, eig_upper_main, search_families

__version__ = "0.1.0"
