"""CLI harness: config handling, report format, determinism, the ladder
override guard, and rendering."""

import json
from fractions import Fraction
from pathlib import Path

import pytest

from horocover import __version__, cli


@pytest.fixture()
def cfg():
    return dict(cli.DEFAULT_CONFIG)


class TestConfig:
    def test_hash_is_stable_and_sensitive(self, cfg):
        h1 = cli.config_hash(cfg)
        assert h1 == cli.config_hash(dict(cfg))
        cfg["seed"] = 8
        assert cli.config_hash(cfg) != h1

    def test_load_config_overlays(self, cfg, tmp_path):
        p = tmp_path / "c.json"
        p.write_text(json.dumps({"seed": 99}))
        loaded = cli.load_config(str(p))
        assert loaded["seed"] == 99
        assert loaded["theta"] == cfg["theta"]

    def test_report_envelope(self, cfg, tmp_path):
        path = cli.write_report(tmp_path, "probe", cfg, {"x": 1})
        doc = json.loads(path.read_text())
        assert doc["command"] == "probe"
        assert doc["version"] == __version__
        assert doc["config_hash"] == cli.config_hash(cfg)
        assert doc["results"] == {"x": 1}


class TestMain:
    def test_ladder_override_rejected(self, cfg, tmp_path, capsys):
        cfg["ladder_override"] = {f"Theta_{i}": "100" for i in range(6)}
        p = tmp_path / "bad.json"
        p.write_text(json.dumps(cfg))
        rc = cli.main(["complex", "--config", str(p),
                       "--out", str(tmp_path / "r")])
        assert rc == 2
        assert "strictly increasing" in capsys.readouterr().err

    def test_render_writes_svg(self, cfg, tmp_path):
        rc = cli.cmd_render(cfg, tmp_path)
        assert rc == 0
        svg = (tmp_path / "ford.svg").read_text()
        assert svg.startswith("<svg") and "circle" in svg

    def test_complex_via_main_exit_zero(self, tmp_path):
        rc = cli.main(["complex", "--out", str(tmp_path)])
        assert rc == 0
        assert (tmp_path / "complex.json").exists()


class TestDeterminism:
    def test_complex_reports_byte_identical(self, cfg, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        cli.cmd_complex(dict(cfg), a)
        cli.cmd_complex(dict(cfg), b)
        assert (a / "complex.json").read_bytes() == \
            (b / "complex.json").read_bytes()

    def test_amenability_reports_byte_identical(self, cfg, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        cli.cmd_amenability(dict(cfg), a)
        cli.cmd_amenability(dict(cfg), b)
        assert (a / "amenability.json").read_bytes() == \
            (b / "amenability.json").read_bytes()


class TestPins:
    def test_defect_pins(self, cfg):
        for radius, pin in ((1, Fraction(1)), (3, Fraction(125, 208))):
            ladder = cli._ladder(dict(cfg, theta_S_radius=radius))
            assert cli._thin_nerve_defect(ladder, radius) == pin

    def test_ladder_from_config(self, cfg):
        ladder = cli._ladder(cfg)
        assert ladder.Theta(5) == 720
