"""Physical constants shared across the package.

All distances are kilometers and all angles are radians unless a name
says otherwise; degrees appear only at CLI/config boundaries.
"""

EARTH_RADIUS_KM = 6371.0

SPEED_OF_LIGHT_M_S = 299_792_458.0
