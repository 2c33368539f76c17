"""Exact lattice, cone and chamber computations linking the blow-up of P^n at
n+3 general points with the variety of m-planes in a smooth intersection of two
quadrics in P^(n+2), n = 2m.

Modules: :mod:`lattice`, :mod:`weyl`, :mod:`planes`, :mod:`cones`, :mod:`mcd`,
:mod:`bridge`, plus the :mod:`verify` suites and the :mod:`cli` front end.
"""

__version__ = "0.1.0"
