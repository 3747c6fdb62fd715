"""Tapered Josephson junction: parameter map, gauge transform, residual checks"""
