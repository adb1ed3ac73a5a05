"""Lattice loops, string trajectories and their gauge-theory counterparts.

``lattice`` and ``ops`` hold loops and the loop operations, ``trajectories``,
``coefficients`` and ``series`` the exact string side, ``gauge`` the Monte
Carlo side and ``cli`` the command-line front end.
"""

__version__ = "0.1.0"
