"""Perturbed Fatou coordinates, sectors and the renormalization return map"""

from .model import ModelCoordinate, cut_log
from .chart import ALPHA_STAR, ChartValidation, FatouChart, build_chart, phi, phi_inverse
from .sector import Sector, SectorKind, exp_inverse, exp_map, sector
from .renorm import RenormOrbit, multiplier_check, renorm_orbit, renorm_return, sector_siegel_check

__all__ = [
    "ModelCoordinate",
    "cut_log",
    "ALPHA_STAR",
    "ChartValidation",
    "FatouChart",
    "build_chart",
    "phi",
    "phi_inverse",
    "Sector",
    "SectorKind",
    "exp_inverse",
    "exp_map",
    "sector",
    "RenormOrbit",
    "multiplier_check",
    "renorm_orbit",
    "renorm_return",
    "sector_siegel_check",
]
