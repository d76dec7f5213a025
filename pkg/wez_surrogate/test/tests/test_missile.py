import json
import os
import tempfile

from django.test import SimpleTestCase

from wez_surrogate.exceptions import ConfigError
from wez_surrogate.missile import LoftCutoff, MissileConfig


class TestMissileConfig(SimpleTestCase):
    def setUp(self):
        self.missile = MissileConfig()

    def test_mass_decays_linearly_during_boost(self):
        m = self.missile
        self.assertEqual(m.mass(0.0), 152.0)
        self.assertAlmostEqual(m.mass(3.0), 152.0 - 22.5)
        self.assertAlmostEqual(m.mass(m.boost_duration), 152.0 - 45.0)

    def test_mass_constant_after_burnout(self):
        m = self.missile
        self.assertAlmostEqual(m.mass(m.burnout_time), 87.0)
        self.assertEqual(m.mass(100.0), m.mass(m.burnout_time))

    def test_mass_never_increases(self):
        masses = [self.missile.mass(t / 10.0) for t in range(400)]
        self.assertTrue(all(a >= b for a, b in zip(masses, masses[1:])))

    def test_thrust_phases(self):
        m = self.missile
        self.assertEqual(m.thrust(0.0), 11000.0)
        self.assertEqual(m.thrust(10.0), 2600.0)
        self.assertEqual(m.thrust(26.0), 0.0)

    def test_drag_coefficient_interpolates_and_holds_flat(self):
        m = self.missile
        self.assertAlmostEqual(m.drag_coefficient(1.0), 0.45)
        self.assertEqual(m.drag_coefficient(0.2), 0.35)
        self.assertEqual(m.drag_coefficient(6.0), 0.30)

    def test_rejects_propellant_heavier_than_missile(self):
        with self.assertRaises(ConfigError):
            MissileConfig(propellant_mass_boost=140.0)

    def test_rejects_narrow_gimbal(self):
        with self.assertRaises(ConfigError):
            MissileConfig(seeker_gimbal_limit=45.0)

    def test_from_dict_rejects_unknown_keys(self):
        with self.assertRaises(ConfigError):
            MissileConfig.from_dict({'warhead_mass': 20.0})

    def test_from_dict_builds_loft_cutoff(self):
        missile = MissileConfig.from_dict({'loft_cutoff': {'min_range': 30000.0}})
        self.assertEqual(missile.loft_cutoff, LoftCutoff(min_range=30000.0))

    def test_from_json(self):
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, 'missile.json')
            with open(path, 'w') as f:
                json.dump({'nav_gain': 3.0, 'drag_coefficient_table': {'0.8': 0.3, '2.0': 0.4}}, f)

            missile = MissileConfig.from_json(path)

        self.assertEqual(missile.nav_gain, 3.0)
        self.assertEqual(list(missile.drag_coefficient_table), [0.8, 2.0])

    def test_digest(self):
        self.assertEqual(MissileConfig().digest(), MissileConfig.from_dict(MissileConfig().to_dict()).digest())
        self.assertNotEqual(MissileConfig().digest(), MissileConfig(nav_gain=3.0).digest())
