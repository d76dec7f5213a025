import os
import tempfile
import xml.etree.ElementTree as ET

import numpy as np
from django.test import SimpleTestCase, override_settings

from wez_surrogate.exceptions import ConfigError
from wez_surrogate.mlp import MlpModel
from wez_surrogate.preprocessing import FeatureCodec, fit_scaler
from wez_surrogate.simulation import Scenario
from wez_surrogate.sweep import SVG_HEADER, render_svg, sweep, sweep_angles

from .utils import HEAD_ON, synthetic_dataset

SVG = '{http://www.w3.org/2000/svg}'


def small_model(seed=0, output_bias=0.0):
    codec = FeatureCodec()
    features, targets = codec.encode_dataset(synthetic_dataset(50))
    model = MlpModel.initialize([9, 6, 1], seed, codec, fit_scaler(features, targets, codec.features))
    model.biases[-1] = model.biases[-1] + output_bias
    return model


class TestSweep(SimpleTestCase):
    def setUp(self):
        self.base = Scenario(**HEAD_ON)
        self.directory = tempfile.TemporaryDirectory()

    def tearDown(self):
        self.directory.cleanup()

    def test_angles(self):
        angles = sweep_angles(-60.0, 60.0, 0.5)
        self.assertEqual(len(angles), 241)
        self.assertEqual((angles[0], angles[120], angles[-1]), (-60.0, 0.0, 60.0))

        with self.assertRaises(ConfigError):
            sweep_angles(10.0, -10.0, 1.0)
        with self.assertRaises(ConfigError):
            sweep_angles(-10.0, 10.0, 0.0)

    def test_default_sweep(self):
        model = small_model()
        result = sweep(model, self.base)
        self.assertEqual(len(result), 241)

        for angle, value in zip(result.angles[::40], result.ranges[::40]):
            scenario = Scenario(**dict(HEAD_ON, rgt_tgt=float(angle)))
            self.assertAlmostEqual(value, max(0.0, model.predict(scenario)), places=9)

    @override_settings(WEZ_SURROGATE={'SWEEP': {'start': -10.0, 'stop': 10.0, 'step': 5.0, 'ring_spacing_nm': 5.0}})
    def test_configured_sweep(self):
        result = sweep(small_model(), self.base)
        self.assertEqual(list(result.angles), [-10.0, -5.0, 0.0, 5.0, 10.0])

    def test_step_override(self):
        result = sweep(small_model(), self.base, step=2.0)
        self.assertEqual(len(result), 61)

    def test_clipped_at_zero(self):
        result = sweep(small_model(output_bias=-1000.0), self.base, step=10.0)
        self.assertTrue((result.ranges == 0.0).all())
        self.assertEqual(result.max_jump, 0.0)

    def test_csv(self):
        path = os.path.join(self.directory.name, 'sweep.csv')
        sweep(small_model(), self.base).to_csv(path)
        with open(path) as f:
            lines = f.read().splitlines()
        self.assertEqual(lines[0], 'rgt_deg,max_range_nm')
        self.assertEqual(len(lines), 242)
        self.assertEqual(float(lines[1].split(',')[0]), -60.0)

    def test_svg(self):
        path = os.path.join(self.directory.name, 'sweep.svg')
        result = sweep(small_model(output_bias=0.5), self.base)
        render_svg(result, path)

        with open(path, encoding='utf-8') as f:
            text = f.read()
        self.assertTrue(text.startswith(SVG_HEADER))

        root = ET.parse(path).getroot()
        self.assertEqual(root.tag, SVG + 'svg')
        self.assertEqual(root.get('version'), '1.1')

        polyline = root.find(SVG + 'polyline')
        self.assertEqual(len(polyline.get('points').split()), 241)

        rings = root.findall(f'{SVG}g/{SVG}path')
        self.assertEqual(len(rings), max(1, int(np.ceil(result.ranges.max() / 5.0))))

    def test_svg_ring_spacing(self):
        path = os.path.join(self.directory.name, 'sweep.svg')
        with self.assertRaises(ConfigError):
            render_svg(sweep(small_model(), self.base), path, ring_spacing_nm=0.0)
