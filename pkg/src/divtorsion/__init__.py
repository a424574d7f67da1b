"""Division polynomials, their closed-form coefficients, and torsion images of elliptic curves."""

__version__ = "0.1.0"
