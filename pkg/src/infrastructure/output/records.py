"""
エンティティを出力用の辞書に変換するヘルパー
"""
import math
from typing import Any, Dict, List, Optional

from src.domain.entities.clifford import SuiteResult
from src.domain.entities.constants_table import ConstantsTable
from src.domain.entities.cosmology_state import SimulationRun, TimeSeries
from src.domain.entities.particles import ParticleSummary
from src.domain.entities.quantity import Quantity
from src.domain.entities.relation import CheckResult, Report

RESULT_COLUMNS = ("id", "lhs", "rhs", "gap_decades", "tolerance", "dimension_ok", "passed")
SERIES_COLUMNS = ("t", "N", "G", "R", "H", "rho")
ENSEMBLE_COLUMNS = ("N_mean", "N_std")
CONSTANTS_COLUMNS = ("name", "value", "unit", "provenance", "note", "derived_from")
POTENTIAL_COLUMNS = ("r", "V_natural", "V_cgs")


def finite_or_none(value: Any) -> Any:
    """JSON に書けない inf/NaN を None にする"""
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def quantity_text(q: Optional[Quantity]) -> str:
    return "" if q is None else str(q)


def result_record(r: CheckResult) -> Dict[str, Any]:
    return {
        "id": r.relation_id,
        "lhs": r.lhs_value.magnitude if r.lhs_value else None,
        "rhs": r.rhs_value.magnitude if r.rhs_value else None,
        "gap_decades": r.gap_decades,
        "tolerance": r.tolerance_decades,
        "dimension_ok": r.dimension_ok,
        "passed": r.passed,
        "lhs_unit": str(r.lhs_value.dim) if r.lhs_value else None,
        "rhs_unit": str(r.rhs_value.dim) if r.rhs_value else None,
        "dimension_policy": r.dimension_policy.value,
        "notes": r.notes,
    }


def report_record(report: Report) -> Dict[str, Any]:
    s = report.summary
    return {
        "timestamp": report.timestamp,
        "fingerprint": report.fingerprint,
        "summary": {"total": s.total, "passed": s.passed, "failed": s.failed, "waived": s.waived},
        "results": [result_record(r) for r in report.results],
    }


def series_rows(ts: TimeSeries) -> List[Dict[str, float]]:
    rows = []
    for k, s in enumerate(ts.samples):
        row = {name: getattr(s, name) for name in SERIES_COLUMNS}
        if ts.is_ensemble:
            row["N_mean"] = ts.n_mean[k]
            row["N_std"] = ts.n_std[k]
        rows.append(row)
    return rows


def series_columns(ts: TimeSeries) -> tuple:
    return SERIES_COLUMNS + (ENSEMBLE_COLUMNS if ts.is_ensemble else ())


def trend_record(run: SimulationRun) -> Optional[Dict[str, float]]:
    if run.trend is None:
        return None
    t = run.trend
    return {
        "slope_G_t": t.slope_G_t,
        "slope_rho_t": t.slope_rho_t,
        "slope_Gdot_N": t.slope_Gdot_N,
        "term_ratio": t.term_ratio,
        "rdot_residual": t.rdot_residual,
        "r_ct_residual": t.r_ct_residual,
        "hubble_age": t.hubble_age,
        "max_lambda_over_H2": t.max_lambda_over_h2,
        "identity_residual": t.identity_residual,
    }


def config_record(ts: TimeSeries) -> Dict[str, Any]:
    record = dict(ts.config.as_dict()) if ts.config else {}
    record["fingerprint"] = ts.fingerprint
    record["constants_fingerprint"] = ts.constants_fingerprint
    return record


def simulation_record(run: SimulationRun) -> Dict[str, Any]:
    return {
        "config": config_record(run.series),
        "samples": series_rows(run.series),
        "lambda": [
            {"t": s.t, "lambda": s.lam, "lambda_over_H2": s.lam_over_h2} for s in run.lambdas
        ],
        "trend": trend_record(run),
    }


def suite_record(suite: SuiteResult) -> Dict[str, Any]:
    return {"name": suite.name, "passed": suite.passed, "rows": suite.as_rows()}


def constants_rows(table: ConstantsTable) -> List[Dict[str, Any]]:
    return [
        {
            "name": e.name,
            "value": e.quantity.magnitude,
            "unit": e.quantity.dim.unit_expr(),
            "provenance": e.provenance.value,
            "note": e.note,
            "derived_from": " ".join(e.derived_from),
        }
        for e in table
    ]


def particles_record(summary: ParticleSummary) -> Dict[str, Any]:
    weak = summary.weak
    record = {
        "potential": {
            "alpha": summary.potential.alpha,
            "beta": summary.potential.beta,
            "mass_scale_g": summary.potential.mass_scale,
            "crossover_radius": summary.crossover_radius,
        },
        "charges": [
            {"dims": cf.dims, "fraction": str(cf.fraction), "charge_esu": q.magnitude}
            for cf, q in summary.charges
        ],
        "quark": {
            "mass_g": summary.quark.mass.magnitude,
            "mass_gev": summary.quark.mass_gev,
            "ratio_to_electron": summary.quark.ratio_to_electron,
            "alpha_over_9": summary.quark.alpha_over_9,
        },
        "weak": {
            "fermi_coupling": weak.fermi_coupling.magnitude,
            "fermi_coupling_unit": str(weak.fermi_coupling.dim),
            "g2_lw2_from_neutrinos": weak.g2_lw2_from_neutrinos,
            "g2_lw2_asserted": weak.g2_lw2_asserted,
            "g2_lw2_table": weak.g2_lw2_table.magnitude,
            "table_product_gap": weak.table_product_gap,
            "results": [result_record(r) for r in weak.results],
        },
        "zpf_energy_erg": {
            "pion": summary.zpf_pion.magnitude,
            "planck": summary.zpf_planck.magnitude,
        },
        "far_field": {
            "radius_cm": summary.far_field.radius.magnitude,
            "compton_lengths": summary.far_field.compton_lengths,
            "gravitational_erg": summary.far_field.gravitational.magnitude,
            "electric_erg": summary.far_field.electric.magnitude,
            "strength_ratio": summary.far_field.strength_ratio,
        },
    }
    if summary.potential_rows is not None:
        record["potential_table"] = [dict(zip(POTENTIAL_COLUMNS, row)) for row in summary.potential_rows]
    return record
