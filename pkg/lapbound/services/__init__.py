"""
lapbound - Services Layer

Complex construction, dense linear algebra, Laplacians, bounds, random
experiments, property suites and file I/O.
"""

# Services are imported from their modules directly
__all__ = []
