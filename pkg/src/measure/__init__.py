"""Grid measurement of areas, densities and dimensions"""

from .grid import AreaEstimate, GridField, GridSpec, Tag, area, dens, dens_detail, window_field
from .julia import density_profile, density_profile_detail, filled_julia_grid, k_delta_field
from .dimension import (
    boundary_area,
    boundary_cells,
    box_dimension,
    box_dimension_detail,
    refinement_consistency,
)
from .polygon import polygon_mask, rasterize_polygon, region_distance
from .raster import read_gf01, write_gf01, write_ppm

__all__ = [
    "AreaEstimate",
    "GridField",
    "GridSpec",
    "Tag",
    "area",
    "dens",
    "dens_detail",
    "window_field",
    "density_profile",
    "density_profile_detail",
    "filled_julia_grid",
    "k_delta_field",
    "boundary_area",
    "boundary_cells",
    "box_dimension",
    "box_dimension_detail",
    "refinement_consistency",
    "polygon_mask",
    "rasterize_polygon",
    "region_distance",
    "read_gf01",
    "write_gf01",
    "write_ppm",
]
