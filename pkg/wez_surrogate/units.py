"""
Unit conversions between the engagement units used on every file and flag
(ft, kt, deg, NM) and the SI units the simulation integrates in.
"""
import math

FT = 0.3048
KT = 0.514444
NM = 1852.0
G0 = 9.80665


def nm_to_m(value):
    return value * NM


def m_to_nm(value):
    return value / NM


def normalize_heading(degrees):
    """
    Wraps an angle in degrees into (-180, 180].
    """
    wrapped = math.fmod(degrees, 360.0)
    if wrapped <= -180.0:
        wrapped += 360.0
    elif wrapped > 180.0:
        wrapped -= 360.0
    return wrapped
