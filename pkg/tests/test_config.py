import numpy as np
import pytest

from casimir_enz import BoundaryKind, Drude, QuadratureSettings, parse_config
from casimir_enz.config import ConfigParseError, ConfigValidationError

MINIMAL = "gap = 1e-6\nleft.substrate = pec\nright.substrate = pec\n"

FIG1A = """
# coated PEC against bare PEC
gap = 1e-6
left.substrate = pec
left.layer1.material = drude
left.layer1.thickness = 1e-6
right.substrate = pec
sweep.axis1.param = left.layer1.omega_p
sweep.axis1.logspace = 3e11, 3e17, 25
"""


def test_minimal_document():
    run = parse_config(MINIMAL)
    assert run.cavity.gap == 1e-6
    assert run.cavity.left.substrate is BoundaryKind.PEC and run.cavity.left.layers == ()
    assert run.cavity.right.substrate is BoundaryKind.PEC and run.cavity.right.layers == ()
    assert run.quadrature == QuadratureSettings()
    assert run.sweep is None and run.equilibria is None


def test_fig1a_document():
    run = parse_config(FIG1A)
    assert run.sweep.axis2 is None
    assert run.sweep.axis1.param == "left.layer1.omega_p"
    np.testing.assert_allclose(run.sweep.axis1.values, np.geomspace(3e11, 3e17, 25), rtol=1e-15)
    cfg = run.cavity_at({"left.layer1.omega_p": 5e14})
    assert cfg.left.layers[0].material == Drude(5e14)
    assert cfg.left.layers[0].thickness == 1e-6


def test_two_axis_grid_is_row_major():
    run = parse_config(MINIMAL + "sweep.axis1.param = gap\nsweep.axis1.values = 1e-6, 2e-6\n"
                       "sweep.axis2.param = right.layer1.omega_p\nsweep.axis2.linspace = 1e14, 3e14, 3\n"
                       "right.layer1.material = drude\nright.layer1.thickness = 1e-7\n")
    grid = run.sweep.grid()
    assert [g["gap"] for g in grid] == [1e-6] * 3 + [2e-6] * 3
    assert [g["right.layer1.omega_p"] for g in grid[:3]] == [1e14, 2e14, 3e14]


def test_quadrature_and_equilibria_sections():
    run = parse_config(MINIMAL + "quadrature.rel_tol = 1e-8\nquadrature.max_evals = 1000\n"
                       "equilibria.gap_min = 5e-8\nequilibria.gap_max = 5e-6\nequilibria.n_scan = 12\n")
    assert run.quadrature.rel_tol == 1e-8 and run.quadrature.max_evals == 1000
    assert (run.equilibria.gap_min, run.equilibria.gap_max, run.equilibria.n_scan) == (5e-8, 5e-6, 12)


def test_negative_thickness_names_invariant():
    text = MINIMAL + "left.layer1.material = drude\nleft.layer1.thickness = -1\nleft.layer1.omega_p = 1e14\n"
    with pytest.raises(ConfigValidationError, match="Layer.thickness"):
        parse_config(text)


@pytest.mark.parametrize("line, lineno", [
    ("bogus.key = 1", 4),
    ("left.layer1.omega_p = 80THz", 4),
    ("gap = 2e-6", 4),
    ("just words", 4),
    ("quadrature.rel_tol = nan", 4),
    ("left.substrate2 = pec", 4),
])
def test_parse_errors_carry_line(line, lineno):
    with pytest.raises(ConfigParseError, match=f"line {lineno}"):
        parse_config(MINIMAL + line + "\n")


@pytest.mark.parametrize("extra, match", [
    ("left.layer2.material = vacuum\nleft.layer2.thickness = 1e-7\n", "without gaps"),
    ("left.layer1.material = drude\nleft.layer1.thickness = 1e-7\n", "omega_p"),
    ("left.layer1.material = constant\nleft.layer1.thickness = 1e-7\nleft.layer1.eps = 0\n", "eps"),
    ("sweep.axis1.param = gap\nsweep.axis1.values = 1e-6, 1e-6\n", "monotone"),
    ("sweep.axis1.param = gap\n", "exactly one"),
    ("equilibria.gap_min = 5e-6\nequilibria.gap_max = 5e-8\n", "gap_min"),
    ("sweep.axis1.param = gap\nsweep.axis1.values = 1e-6\n"
     "equilibria.gap_min = 5e-8\nequilibria.gap_max = 5e-6\n", "not both"),
])
def test_validation_errors(extra, match):
    with pytest.raises(ConfigValidationError, match=match):
        parse_config(MINIMAL + extra)


def test_missing_gap():
    with pytest.raises(ConfigValidationError, match="gap"):
        parse_config("left.substrate = pec\nright.substrate = pec\n")


def test_swept_gap_may_be_omitted():
    run = parse_config("left.substrate = pec\nright.substrate = pmc\n"
                       "sweep.axis1.param = gap\nsweep.axis1.values = 1e-6, 2e-6\n")
    assert run.cavity_at({"gap": 2e-6}).gap == 2e-6


def test_snapshot_round_trips():
    run = parse_config(FIG1A)
    again = parse_config("\n".join(run.snapshot()))
    assert again.sweep == run.sweep
    assert again.cavity == run.cavity
    assert again.snapshot() == run.snapshot()


def test_committed_configs_parse():
    from pathlib import Path
    cfgs = sorted((Path(__file__).parents[1] / "configs").glob("*.cfg"))
    assert cfgs
    for path in cfgs:
        parse_config(path.read_text())
