from pathlib import Path

import pytest

import semiwave

CONFIGS = Path(__file__).resolve().parents[2] / "configs"


def test_simplify_collects_like_terms():
    assert semiwave.simplify("u*u_r + u_r*u") == "2*u*u_r"


def test_total_derivative_chain_rule():
    assert semiwave.total_derivative("u^2", "r") == "2*u*u_r"
    assert semiwave.total_derivative("u_t", "r") == semiwave.total_derivative("u_r", "t")


def test_euler_kills_divergence():
    assert semiwave.euler(semiwave.total_derivative("u^3*u_r", "r")) == "0"


def test_conjugate_involution():
    e = "i*u*ubar_r + 3*abs(u)^2"
    assert semiwave.conjugate(semiwave.conjugate(e)) == semiwave.simplify(e)


def test_parse_error():
    with pytest.raises(ValueError):
        semiwave.simplify("u +* 2")


def test_catalog_listing():
    assert len(semiwave.equations()) == 7
    assert dict(semiwave.tables())["T10"] == 5


def test_special_powers_nlw_m3():
    assert semiwave.special_power("NLW", "conformal", "3") == "7/3"
    assert semiwave.special_power("NLW", "energy-critical", "3") == "3"
    assert semiwave.special_power("NLW", "L2-critical", "3") == "2"


def test_verify_table10():
    rows = semiwave.verify("T10")
    assert [r["row"] for r in rows] == [f"T10.row{k}" for k in range(1, 6)]
    assert all(r["verdict"] != "refuted" for r in rows)


def test_verify_unknown_scope():
    with pytest.raises((ValueError, IndexError)):
        semiwave.verify("T99")


def test_simulate_defocusing_nls():
    text = (CONFIGS / "nls_defocusing.cfg").read_text().replace("N = 512", "N = 128")
    summary, csv = semiwave.simulate(text)
    assert summary["verdict"] == "completed"
    assert summary["drift"]["T11.row1"] < 1e-9
    assert csv.splitlines()[0].startswith("t,C_T11.row1")


def test_simulate_config_error():
    with pytest.raises(ValueError):
        semiwave.simulate("equation = NLS\n")
