"""L-polynomials of Artin-Schreier curves y^p + y = xR(x) in characteristic 2."""

__version__ = "0.1.0"
