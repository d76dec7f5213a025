"""
Off-boresight sweeps of a trained model and their rendering as an MFD-style
polar plot: shooter at the origin, nose up, range rings every few NM and
the predicted maximum-range curve across the sector.
"""
import math
import xml.etree.ElementTree as ET
from dataclasses import dataclass

import numpy as np
import pandas as pd

from .conf import get_conf
from .exceptions import ConfigError, ShapeMismatch
from .tables import write_table

SWEEP_COLUMNS = ['rgt_deg', 'max_range_nm']

SVG_HEADER = (
    '<?xml version="1.0" encoding="UTF-8" standalone="no"?>\n'
    '<!DOCTYPE svg PUBLIC "-//W3C//DTD SVG 1.1//EN" '
    '"http://www.w3.org/Graphics/SVG/1.1/DTD/svg11.dtd">\n'
)

SIZE = 600
MARGIN = 40


@dataclass(frozen=True)
class SweepResult:
    base: object
    angles: np.ndarray
    ranges: np.ndarray

    def __len__(self):
        return len(self.angles)

    def to_frame(self):
        return pd.DataFrame({'rgt_deg': self.angles, 'max_range_nm': self.ranges}, columns=SWEEP_COLUMNS)

    def to_csv(self, path):
        write_table(self.to_frame(), path)

    @property
    def max_jump(self):
        return float(np.abs(np.diff(self.ranges)).max()) if len(self) > 1 else 0.0


def sweep_angles(start, stop, step):
    if step <= 0 or stop < start:
        raise ConfigError("a sweep needs start <= stop and a positive step")
    count = int(round((stop - start) / step)) + 1
    return start + step * np.arange(count)


def sweep(model, base, step=None, start=None, stop=None):
    """
    Predicts the maximum range of `base` at every off-boresight angle of the
    sweep, holding every other launch condition fixed. Predictions are
    clipped at zero.
    """
    config = get_conf()['SWEEP']
    angles = sweep_angles(
        config['start'] if start is None else start,
        config['stop'] if stop is None else stop,
        config['step'] if step is None else step,
    )

    if model.codec is None:
        raise ShapeMismatch("model has no feature codec")

    values = base.to_dict()
    columns = list(model.codec.columns)
    if 'rgt_tgt' not in columns:
        raise ShapeMismatch("model does not take an off-boresight input")

    raw = np.array([[values[c] for c in columns]] * len(angles), dtype=float)
    raw[:, columns.index('rgt_tgt')] = angles
    ranges = np.maximum(model.predict_features(model.codec.encode_matrix(raw)), 0.0)

    return SweepResult(base=base, angles=angles, ranges=ranges)


def _fmt(value):
    return f'{value:.3f}'


def _polar(range_nm, angle_deg, scale):
    # Nose up, positive off-boresight to the right
    theta = math.radians(angle_deg)
    return SIZE / 2 + scale * range_nm * math.sin(theta), SIZE - MARGIN - scale * range_nm * math.cos(theta)


def render_svg(result, path, ring_spacing_nm=None):
    """
    Writes the sweep as an SVG 1.1 document.
    """
    if ring_spacing_nm is None:
        ring_spacing_nm = get_conf()['SWEEP']['ring_spacing_nm']
    if ring_spacing_nm <= 0:
        raise ConfigError("ring spacing must be positive")

    rings = max(1, math.ceil(float(result.ranges.max()) / ring_spacing_nm))
    outer = rings * ring_spacing_nm
    scale = (SIZE - 2 * MARGIN) / outer
    first, last = float(result.angles[0]), float(result.angles[-1])

    root = ET.Element(
        'svg', xmlns='http://www.w3.org/2000/svg', version='1.1',
        width=str(SIZE), height=str(SIZE), viewBox=f'0 0 {SIZE} {SIZE}',
    )
    ET.SubElement(root, 'rect', x='0', y='0', width=str(SIZE), height=str(SIZE), fill='black')

    grid = ET.SubElement(root, 'g', stroke='#2e7d32', fill='none')
    labels = ET.SubElement(root, 'g', fill='#66bb6a', style='font-family:monospace;font-size:12px')

    for ring in range(1, rings + 1):
        radius = ring * ring_spacing_nm
        x0, y0 = _polar(radius, first, scale)
        x1, y1 = _polar(radius, last, scale)
        large = 1 if last - first > 180 else 0
        ET.SubElement(grid, 'path', d=(
            f'M {_fmt(x0)} {_fmt(y0)} A {_fmt(radius * scale)} {_fmt(radius * scale)} 0 {large} 1 {_fmt(x1)} {_fmt(y1)}'
        ))
        x, y = _polar(radius, last, scale)
        text = ET.SubElement(labels, 'text', x=_fmt(x + 4), y=_fmt(y))
        text.text = f'{radius:g}'

    origin = _polar(0.0, 0.0, scale)
    for angle in (first, 0.0, last):
        x, y = _polar(outer, angle, scale)
        ET.SubElement(grid, 'line', x1=_fmt(origin[0]), y1=_fmt(origin[1]), x2=_fmt(x), y2=_fmt(y))

    points = ' '.join(
        '{},{}'.format(*map(_fmt, _polar(float(r), float(a), scale)))
        for a, r in zip(result.angles, result.ranges)
    )
    ET.SubElement(root, 'polyline', points=points, fill='none', stroke='#ffeb3b', style='stroke-width:2')
    ET.SubElement(root, 'circle', cx=_fmt(origin[0]), cy=_fmt(origin[1]), r='4', fill='white')

    title = ET.SubElement(labels, 'text', x=str(MARGIN // 2), y=str(MARGIN // 2))
    title.text = 'MAX RANGE (NM)'

    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        f.write(SVG_HEADER)
        f.write(ET.tostring(root, encoding='unicode'))
        f.write('\n')
