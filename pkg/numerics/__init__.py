"""Numerical building blocks: Bessel functions and quadrature rules"""

from .bessel import BesselAccuracy as BesselAccuracy
from .bessel import bessel_j0 as bessel_j0
from .bessel import bessel_j1 as bessel_j1
from .quadrature import adaptive_vector as adaptive_vector
from .quadrature import graded_edges as graded_edges
from .quadrature import integrate_panels as integrate_panels
