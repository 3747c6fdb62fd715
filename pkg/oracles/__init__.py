"""Independent reference computations used to check the Green solver"""
