#!/usr/bin/env python3

import json
import os
import sys

import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from geometry.automorphism import Ts
from geometry.potential import Base
from utils.settings import Settings
from verification.catalog import CHECKS, SUITES
from verification.config import InvalidConfig, SuiteConfig, parse_tol_overrides
from verification.inputs import parse_mobius, parse_potential


def test_defaults_follow_settings():
    settings = Settings(seed=7, samples=12, n_list=[3, 1], workers=2)
    config = SuiteConfig.from_settings(settings)
    assert config.seed == 7 and config.samples == 12 and config.workers == 2
    assert config.n_list == [1, 3]
    assert config.suites == list(SUITES)


def test_overrides_win_over_settings():
    config = SuiteConfig.from_settings(Settings(), samples=5, seed=None, suites=["mobius", "metric"])
    assert config.samples == 5
    assert config.seed == 20240601
    assert config.suites == ["metric", "mobius"]


@pytest.mark.parametrize("values, position", [
    ({"n_list": [0]}, "n_list"),
    ({"n_list": [9]}, "n_list"),
    ({"n_list": []}, "n_list"),
    ({"tol": {"metric.nope": 1e-3}}, "tol"),
    ({"tol": {"metric.inverse": -1.0}}, "tol"),
    ({"suites": ["bogus"]}, "suites"),
    ({"format": "xml"}, "format"),
    ({"samples": 0}, "samples"),
])
def test_invalid_config_reports_position(values, position):
    with pytest.raises(InvalidConfig) as info:
        SuiteConfig.build(**values)
    assert info.value.position == position


def test_tolerance_lookup_and_echo():
    config = SuiteConfig.build(tol={"metric.inverse": 1e-6}, format="structured", workers=3)
    assert config.tolerance("metric.inverse") == 1e-6
    assert config.tolerance("metric.hermitian") == CHECKS["metric.hermitian"].tolerance
    echo = config.echo()
    assert "format" not in echo and "workers" not in echo


def test_parse_tol_overrides():
    assert parse_tol_overrides(["metric.inverse=1e-8", " grading.jacobi =2e-12"]) == {
        "metric.inverse": 1e-8,
        "grading.jacobi": 2e-12,
    }
    with pytest.raises(InvalidConfig) as info:
        parse_tol_overrides(["metric.inverse=1e-8", "oops"])
    assert info.value.position == "tol[1]"
    with pytest.raises(InvalidConfig):
        parse_tol_overrides(["metric.inverse=small"])


def test_parse_potential_from_dict():
    parsed = parse_potential({
        "n": 2,
        "generators": [{"type": "Ts", "s": 0.5}, {"type": "T2k", "k": 1, "s": -0.2}],
        "f": [{"exponents": [0, 0], "re": 0.3, "im": 0.0}],
        "r": 2.0,
    })
    P = parsed.potential
    assert P.n == 2 and P.base == Base.PSI0
    assert P.precompose.generators[0] == Ts(0.5)
    assert P.to_dict()["r"] == pytest.approx(2.0)
    assert parsed.isotropy is None and parsed.mobius is None


def test_dimension_is_inferred():
    assert parse_potential({"f": [{"exponents": [1, 0, 0], "re": 0.1, "im": 0.0}]}).potential.n == 3
    assert parse_potential({"base": "phi0", "mobius": [1, 0, 0, 0, 1, 0, 0, 0, 1]}).potential.n == 2
    with pytest.raises(InvalidConfig) as info:
        parse_potential({})
    assert info.value.position == "n"


def test_parse_potential_from_file(tmp_path):
    path = tmp_path / "psi.json"
    path.write_text(json.dumps({"n": 2, "isotropy": [{"type": "Sigma"}]}), encoding="utf-8")
    parsed = parse_potential(path)
    assert parsed.isotropy is not None and len(parsed.isotropy) == 1


def test_syntax_errors_carry_line_and_column(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{\n  "n": 2,\n  "r": \n}', encoding="utf-8")
    with pytest.raises(InvalidConfig) as info:
        parse_potential(path)
    assert info.value.position.startswith("line 4 column")


def test_missing_file_is_invalid(tmp_path):
    with pytest.raises(InvalidConfig):
        parse_potential(tmp_path / "absent.json")


@pytest.mark.parametrize("document, position", [
    ({"n": 3, "generators": [{"type": "T2k", "k": 3, "s": 0.1}]}, "generators[0].k"),
    ({"n": 3, "generators": [{"type": "Perm1k", "k": 1}]}, "generators[0].k"),
    ({"n": 2, "generators": [{"type": "Nope"}]}, "generators[0]"),
    ({"n": 2, "generators": ["Ts"]}, "generators[0]"),
    ({"n": 2, "f": [{"exponents": [1], "re": 1.0, "im": 0.0}]}, "f[0].exponents"),
    ({"n": 2, "base": "rho"}, "base"),
    ({"n": 2, "r": -1.0}, "r"),
    ({"n": 2, "kappa": "big"}, "kappa"),
    ({"n": 2, "isotropy": [{"type": "T3k", "k": 5, "s": 0.1}]}, "isotropy[0].k"),
])
def test_input_errors_point_at_the_field(document, position):
    with pytest.raises(InvalidConfig) as info:
        parse_potential(document)
    assert info.value.position == position


def test_parse_mobius_accepts_entry_forms():
    G = parse_mobius([{"re": 1.0, "im": 0.0}, [0.0, 0.0], 0, 1])
    assert G.A.shape == (2, 2)
    with pytest.raises(InvalidConfig) as info:
        parse_mobius([1, 0, 0])
    assert info.value.position == "mobius"
    with pytest.raises(InvalidConfig) as info:
        parse_mobius([1, "x", 0, 1])
    assert info.value.position == "mobius[1]"
    with pytest.raises(InvalidConfig):
        parse_mobius([0, 0, 0, 0])


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
