"""Certified numerics for torus-symmetry bounds in positive curvature.

Submodules: ``exactnum`` (rigorous intervals and certified comparisons),
``bounds`` (f0, envelope, kappa, s_alpha), ``codes`` (Griesmer bound),
``lie`` (Weyl groups, Euler characteristics), ``obstruct`` (obstruction
queries), ``certify`` (claim registry) and ``cli``.
"""

__version__ = "0.1.0"
