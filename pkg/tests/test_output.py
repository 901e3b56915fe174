"""
出力フォーマッタのテスト
"""
import csv
import io
import json

import pytest

from src.application.services.algebra_service import run_suites
from src.application.services.cosmology_service import simulate
from src.application.services.particle_service import particle_summary
from src.application.services.relation_service import run_registry
from src.domain.entities.cosmology_state import SimulationConfig
from src.domain.errors import InvocationError
from src.infrastructure.constants.constants_file import parse_constants
from src.infrastructure.output.formatters import get_formatter
from src.infrastructure.output.records import RESULT_COLUMNS, finite_or_none


def _clock():
    return "2026-01-01T00:00:00+00:00"


@pytest.fixture(scope="module")
def report(table):
    return run_registry(table, clock=_clock)


@pytest.fixture(scope="module")
def run(table):
    tau = table["tau_pi"].magnitude
    return simulate(SimulationConfig(t_end=10 * tau, dt=tau), table)


@pytest.fixture(scope="module")
def ensemble_run(table):
    tau = table["tau_pi"].magnitude
    cfg = SimulationConfig(t_end=10 * tau, dt=tau, mode="stochastic", seed=5, ensemble_size=4)
    return simulate(cfg, table)


def test_unknown_format():
    with pytest.raises(InvocationError, match="unknown format yaml"):
        get_formatter("yaml")


def test_csv_report_columns(report):
    rows = list(csv.reader(io.StringIO(get_formatter("csv").format_report(report))))
    assert tuple(rows[0]) == RESULT_COLUMNS
    assert len(rows) == 22
    assert rows[1][0] == "E1"
    assert rows[1][-1] == "true"


def test_json_report_is_one_document(report):
    doc = json.loads(get_formatter("json").format_report(report))
    assert doc["timestamp"] == _clock()
    assert doc["summary"] == {"total": 21, "passed": 21, "failed": 0, "waived": 3}
    assert doc["results"][0]["id"] == "E1"
    assert doc["results"][0]["lhs_unit"] == "cm"


def test_text_report(report):
    text = get_formatter("text").format_report(report)
    assert "21/21 passed" in text
    assert "E35b" in text
    assert "FAIL" not in text


def test_csv_simulation(run):
    text = get_formatter("csv").format_simulation(run)
    lines = text.splitlines()
    assert lines[0] == "t,N,G,R,H,rho"
    assert len(lines) == 12
    assert not any(line.startswith("#") for line in lines)


def test_csv_ensemble_columns(ensemble_run):
    header = get_formatter("csv").format_simulation(ensemble_run).splitlines()[0]
    assert header == "t,N,G,R,H,rho,N_mean,N_std"


def test_json_simulation(run):
    doc = json.loads(get_formatter("json").format_simulation(run))
    assert len(doc["samples"]) == 11
    assert doc["trend"] is None
    assert doc["config"]["mode"] == "deterministic"
    assert len(doc["config"]["fingerprint"]) == 64
    assert len(doc["lambda"]) == 9


def test_algebra_outputs(table):
    suites = run_suites(table, ["clifford", "snyder"])
    doc = json.loads(get_formatter("json").format_algebra(suites))
    assert [s["name"] for s in doc["suites"]] == ["clifford", "snyder"]
    assert all(s["passed"] for s in doc["suites"])
    text = get_formatter("text").format_algebra(suites)
    assert text.startswith("[PASS] clifford")


def test_text_constants_can_be_read_back(table):
    again = parse_constants(get_formatter("text").format_constants(table))
    assert again.names() == table.names()


def test_csv_constants(table):
    rows = list(csv.DictReader(io.StringIO(get_formatter("csv").format_constants(table))))
    by_name = {row["name"]: row for row in rows}
    assert by_name["hbar"]["unit"] == "g cm^2 s^-1"
    assert by_name["l_w"]["provenance"] == "derived"
    assert by_name["l_w"]["derived_from"] == "hbar m_w c"


def test_particles_outputs(table):
    summary = particle_summary(table, radii=[0.5, 1.0])
    csv_lines = get_formatter("csv").format_particles(summary).splitlines()
    assert csv_lines[0] == "r,V_natural,V_cgs"
    assert len(csv_lines) == 3
    doc = json.loads(get_formatter("json").format_particles(summary))
    assert doc["quark"]["ratio_to_electron"] == 1000.0
    assert [r["id"] for r in doc["weak"]["results"]] == ["E21", "E35", "E35b"]
    assert "zpf energy" in get_formatter("text").format_particles(summary)
    assert doc["far_field"]["strength_ratio"] > 1e40
    assert "far field at 1000 Compton lengths" in get_formatter("text").format_particles(summary)


def test_full_report_json(report, run, table):
    suites = run_suites(table, ["snyder"])
    doc = json.loads(get_formatter("json").format_full(report, suites, run))
    assert set(doc) == {"check", "algebra", "simulate"}


def test_non_finite_values_become_null():
    assert finite_or_none(float("inf")) is None
    assert finite_or_none(float("nan")) is None
    assert finite_or_none(1.5) == 1.5
