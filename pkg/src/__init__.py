"""
dynlab - numerical laboratory for Siegel disks, perturbed rotation numbers and Julia set area
"""

__version__ = "1.0.0"
