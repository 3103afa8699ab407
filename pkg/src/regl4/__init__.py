"""Regularized L^4 norms of level-N Eisenstein series: closed forms and numerical oracles.

Submodules
----------
characters
    Dirichlet characters, decompositions, Gauss sums, level products.
special_functions
    log Gamma, K_nu of complex order, double-exponential quadrature, Bessel moments.
l_functions
    Hurwitz zeta, Dirichlet L-functions, completed functions, log-derivatives.
eisenstein
    Completed Eisenstein series: Fourier and lattice evaluators, scattering.
regularized_products
    Regularized triple products: closed form, unfolded sums, direct oracle.
i2_pipeline
    The I2 term along the deformed path: F_j, derivatives, Laurent assembly.
"""

from .errors import ConvergenceError, PreconditionError, Regl4Error, SingularInputError

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError",
    "PreconditionError",
    "Regl4Error",
    "SingularInputError",
    "__version__",
]
