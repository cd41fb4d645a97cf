import math
import textwrap

import numpy as np
import pytest

from qthermo import dynamics
from qthermo.config import load_experiment, load_scan
from qthermo.errors import ConfigError
from qthermo.thermo import Formulation

GAD_CFG = """\
[channel]
kind = gad
omega0 = 1.0
gamma0 = 1.0
te = 10.0

[initial_state]
x0 = 0.45
z0 = -0.80

[run]
t_max = 1.0
dt = 0.001
"""

SCAN_CFG = """\
[channel]
kind = pd_nonmarkov
omega0 = 1.0
kappa = 2.0

[scan]
s_min = 2.0
s_max = 8.0
s_step = 0.1
"""


def write(tmp_path, text, name="exp.cfg"):
    path = tmp_path / name
    path.write_text(textwrap.dedent(text))
    return str(path)


class TestLoadExperiment:
    def test_gad_round_trip(self, tmp_path):
        cfg = load_experiment(write(tmp_path, GAD_CFG))
        assert cfg.channel.kind == dynamics.GAD
        assert cfg.channel.Te == 10.0
        assert np.allclose(cfg.initial_state, [0.45, 0.0, -0.80])
        assert cfg.t_max == 1.0
        assert cfg.dt == 0.001
        assert cfg.formulations == tuple(Formulation)
        assert not cfg.emit_plot_script

    def test_spherical_initial_state(self, tmp_path):
        text = GAD_CFG.replace("x0 = 0.45\nz0 = -0.80",
                               "r0 = 0.8\ntheta0 = 1.5707963267948966")
        cfg = load_experiment(write(tmp_path, text))
        assert np.allclose(cfg.initial_state, [0.8, 0.0, 0.0], atol=1e-12)

    def test_infinite_te(self, tmp_path):
        cfg = load_experiment(write(tmp_path, GAD_CFG.replace("te = 10.0",
                                                              "te = inf")))
        assert math.isinf(cfg.channel.Te)

    def test_formulation_subset(self, tmp_path):
        text = GAD_CFG + "formulations = standard, ergotropy_based\n"
        cfg = load_experiment(write(tmp_path, text))
        assert cfg.formulations == (Formulation.STANDARD,
                                    Formulation.ERGOTROPY_BASED)

    def test_inline_comments_ignored(self, tmp_path):
        text = GAD_CFG.replace("te = 10.0", "te = 10.0  # hot reservoir")
        assert load_experiment(write(tmp_path, text)).channel.Te == 10.0

    def test_unknown_key_rejected(self, tmp_path):
        text = GAD_CFG.replace("gamma0 = 1.0", "gamma0 = 1.0\nbogus = 3")
        with pytest.raises(ConfigError, match="bogus"):
            load_experiment(write(tmp_path, text))

    def test_unknown_section_rejected(self, tmp_path):
        with pytest.raises(ConfigError, match="section"):
            load_experiment(write(tmp_path, GAD_CFG + "\n[extra]\nfoo = 1\n"))

    def test_missing_run_keys_rejected(self, tmp_path):
        text = GAD_CFG.replace("dt = 0.001\n", "")
        with pytest.raises(ConfigError, match="dt"):
            load_experiment(write(tmp_path, text))

    def test_mixed_state_conventions_rejected(self, tmp_path):
        text = GAD_CFG.replace("z0 = -0.80", "theta0 = 1.0")
        with pytest.raises(ConfigError):
            load_experiment(write(tmp_path, text))

    def test_superluminal_bloch_vector_rejected(self, tmp_path):
        text = GAD_CFG.replace("x0 = 0.45", "x0 = 0.95")
        with pytest.raises(ConfigError, match="norm"):
            load_experiment(write(tmp_path, text))

    def test_nonnumeric_value_rejected(self, tmp_path):
        with pytest.raises(ConfigError, match="not a number"):
            load_experiment(write(tmp_path,
                                  GAD_CFG.replace("te = 10.0", "te = warm")))

    def test_negative_dt_rejected(self, tmp_path):
        with pytest.raises(ConfigError):
            load_experiment(write(tmp_path,
                                  GAD_CFG.replace("dt = 0.001",
                                                  "dt = -0.001")))

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="cannot read"):
            load_experiment(str(tmp_path / "absent.cfg"))


class TestLoadScan:
    def test_round_trip(self, tmp_path):
        cfg = load_scan(write(tmp_path, SCAN_CFG))
        assert cfg.channel.kind == dynamics.PD_NONMARKOV
        assert cfg.channel.kappa == 2.0
        assert (cfg.s_min, cfg.s_max, cfg.s_step) == (2.0, 8.0, 0.1)
        assert cfg.tau_max == 50.0

    def test_requires_nonmarkov_channel(self, tmp_path):
        text = SCAN_CFG.replace(
            "kind = pd_nonmarkov\nomega0 = 1.0\nkappa = 2.0",
            "kind = pd_markov\nomega0 = 1.0")
        with pytest.raises(ConfigError, match="pd_nonmarkov"):
            load_scan(write(tmp_path, text))

    def test_bad_range_rejected(self, tmp_path):
        with pytest.raises(ConfigError):
            load_scan(write(tmp_path, SCAN_CFG.replace("s_max = 8.0",
                                                       "s_max = 1.0")))

    def test_missing_scan_key(self, tmp_path):
        with pytest.raises(ConfigError, match="s_step"):
            load_scan(write(tmp_path, SCAN_CFG.replace("s_step = 0.1\n", "")))
