"""Solvers for the economics of UAV-aided mobile services.

Subpackages: :mod:`uavecon.placement` (strategyproof placement),
:mod:`uavecon.deployment` (energy-optimal interval coverage),
:mod:`uavecon.patrol` (patrol schemes and postman tours) and
:mod:`uavecon.harness` (seeded experiments).
"""
__version__ = "0.1.0"
