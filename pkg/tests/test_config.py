import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from eraserlab.config import BenchConfig, ConfigError, Elements, ScanBlock, bundled_configs, load_config, parse_config, serialize_config
from eraserlab.engine import BenchGeometry
from eraserlab.optics import PairSourceSpec

MINIMAL = """
[geometry]
wavelength = 702.2 nm
slit_width = 200 um
slit_separation = 400 um
distance = 83 cm
"""


def test_minimal_file_defaults():
    cfg = parse_config(MINIMAL)
    assert cfg.source == PairSourceSpec(0.0, "o=x,e=y")
    assert cfg.elements.qwp1 is None and cfg.elements.qwp2 is None and cfg.elements.pol1 is None
    assert cfg.geometry == BenchGeometry(702.2e-9, 200e-6, 400e-6, 0.83)
    assert cfg.scan == ScanBlock()


def test_marked_configuration():
    cfg = parse_config(MINIMAL + "[elements]\nqwp1 = 45 deg\nqwp2 = -45 deg   # slit 2\npol1 = absent\n")
    assert cfg.elements.qwp1 == pytest.approx(math.pi / 4)
    assert cfg.elements.qwp2 == pytest.approx(-math.pi / 4)
    assert cfg.elements.pol1 is None


def test_angle_units():
    cfg = parse_config(MINIMAL + "[source]\nphi = 3.141592653589793 rad\n")
    assert cfg.source.phi == math.pi


def test_missing_unit_is_syntax_error():
    text = MINIMAL + "[elements]\nqwp1 = 45\n"
    with pytest.raises(ConfigError) as err:
        parse_config(text)
    assert err.value.line == text.splitlines().index("qwp1 = 45") + 1
    assert err.value.column == 8
    assert "line" in str(err.value)


@pytest.mark.parametrize(
    "extra,key",
    [
        ("[elements]\nqwp3 = 1 deg\n", "qwp3"),
        ("[scan]\npoints = many\n", "points"),
        ("[source]\nmapping = o=z\n", "mapping"),
        ("[scan]\nseed = 1\nseed = 2\n", "seed"),
    ],
)
def test_key_errors(extra, key):
    with pytest.raises(ConfigError) as err:
        parse_config(MINIMAL + extra)
    assert err.value.key == key
    assert err.value.line is not None


@pytest.mark.parametrize(
    "text",
    [
        "[geometry\n",
        "[bogus]\n",
        "wavelength = 1 nm\n",
        "[geometry]\njust words\n",
        MINIMAL + "[geometry]\n",
    ],
)
def test_syntax_errors(text):
    with pytest.raises(ConfigError) as err:
        parse_config(text)
    assert err.value.line is not None


def test_semantic_errors_name_keys():
    with pytest.raises(ConfigError, match="slit_separation"):
        parse_config("[geometry]\nslit_width = 300 um\nslit_separation = 200 um\n")
    with pytest.raises(ConfigError, match="geometry"):
        parse_config("[source]\nphi = 0 deg\n")
    with pytest.raises(ConfigError, match="peak_rate"):
        parse_config(MINIMAL + "[scan]\npeak_rate = 0\n")


def test_bundled_configs_parse():
    names = bundled_configs()
    assert sorted(names) == [f"fig{i}" for i in range(2, 10)]
    fig3 = load_config(names["fig3"])
    assert fig3.elements.qwp1 == pytest.approx(math.pi / 4) and fig3.elements.pol1 is None
    assert load_config(names["fig8"]).elements.detection_order == "s-first"
    assert load_config(names["fig5"]).elements.pol1 == pytest.approx(3 * math.pi / 4)


def test_round_trip_bundled():
    for path in bundled_configs().values():
        cfg = load_config(path)
        assert parse_config(serialize_config(cfg)) == cfg


angles = st.floats(-10, 10, allow_nan=False)
opt_angles = st.one_of(st.none(), angles)
lengths = st.floats(1e-9, 10, allow_nan=False)


@st.composite
def configs(draw):
    a = draw(st.floats(1e-7, 1e-3))
    geometry = BenchGeometry(draw(lengths), a, a + draw(st.floats(0, 1e-3)), draw(lengths))
    return BenchConfig(
        source=PairSourceSpec(draw(angles), draw(st.sampled_from(["o=x,e=y", "o=y,e=x"]))),
        geometry=geometry,
        elements=Elements(draw(opt_angles), draw(opt_angles), draw(opt_angles), draw(st.sampled_from(["p-first", "s-first"])), draw(lengths)),
        scan=ScanBlock(
            draw(st.floats(-1, 0)),
            draw(st.floats(0, 1)),
            draw(st.integers(1, 1000)),
            draw(st.floats(1e-6, 1e6)),
            draw(st.floats(1e-3, 10)),
            draw(st.integers(0, 2**64 - 1)),
            draw(angles),
        ),
    )


@given(configs())
def test_round_trip_property(cfg):
    text = serialize_config(cfg)
    assert parse_config(text) == cfg
    assert serialize_config(parse_config(text)) == text
