"""Green-function solvers for the integro-differential strip problem"""
