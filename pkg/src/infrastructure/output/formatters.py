"""
テキスト・CSV・JSON の出力フォーマッタ
"""
import csv
import io
import json
from typing import Any, Dict, Iterable, List, Sequence

from src.domain.entities.clifford import SuiteResult
from src.domain.entities.constants_table import ConstantsTable
from src.domain.entities.cosmology_state import SimulationRun
from src.domain.entities.particles import ParticleSummary
from src.domain.entities.relation import Report
from src.domain.errors import InvocationError
from src.domain.interfaces.output_interface import OutputFormatterInterface
from src.infrastructure.constants.constants_file import serialize_constants
from src.infrastructure.output import records


def _num(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _short(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.4g}"
    return _num(value)


class TextFormatter(OutputFormatterInterface):
    """人が読むための桁揃えしたテキスト"""

    name = "text"

    @staticmethod
    def _table(header: Sequence[str], rows: Iterable[Sequence[str]]) -> List[str]:
        rows = [list(r) for r in rows]
        widths = [len(h) for h in header]
        for row in rows:
            widths = [max(w, len(cell)) for w, cell in zip(widths, row)]
        lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip()]
        lines += ["  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in rows]
        return lines

    def _report_lines(self, report: Report) -> List[str]:
        s = report.summary
        lines = [
            f"timestamp:   {report.timestamp}",
            f"constants:   {report.fingerprint}",
            f"summary:     {s.passed}/{s.total} passed, {s.failed} failed, {s.waived} waived",
            "",
        ]
        rows = []
        for r in report.results:
            rows.append([
                r.relation_id,
                records.quantity_text(r.lhs_value),
                records.quantity_text(r.rhs_value),
                "" if r.gap_decades is None else f"{r.gap_decades:.3f}",
                f"{r.tolerance_decades:g}",
                r.dimension_policy.value,
                "PASS" if r.passed else "FAIL",
                r.notes,
            ])
        lines += self._table(["id", "lhs", "rhs", "gap", "tol", "dim", "result", "notes"], rows)
        return lines

    def format_report(self, report: Report) -> str:
        return "\n".join(self._report_lines(report)) + "\n"

    def _simulation_lines(self, run: SimulationRun) -> List[str]:
        ts = run.series
        lines = []
        if ts.config:
            cfg = ts.config.as_dict()
            lines.append("config: " + ", ".join(f"{k}={_short(v)}" for k, v in cfg.items()))
        columns = records.series_columns(ts)
        rows = [[_short(row[c]) for c in columns] for row in records.series_rows(ts)]
        lines += self._table(list(columns), rows)
        trend = records.trend_record(run)
        if trend:
            lines.append("")
            lines += [f"{k}: {v:.6g}" for k, v in trend.items()]
        return lines

    def format_simulation(self, run: SimulationRun) -> str:
        return "\n".join(self._simulation_lines(run)) + "\n"

    def _algebra_lines(self, suites: List[SuiteResult]) -> List[str]:
        lines = []
        for suite in suites:
            lines.append(f"[{'PASS' if suite.passed else 'FAIL'}] {suite.name}")
            for row in suite.rows:
                lines.append("  " + ", ".join(f"{k}={_short(v)}" for k, v in row.items()))
        return lines

    def format_algebra(self, suites: List[SuiteResult]) -> str:
        return "\n".join(self._algebra_lines(suites)) + "\n"

    def format_constants(self, table: ConstantsTable) -> str:
        return serialize_constants(table)

    def format_particles(self, summary: ParticleSummary) -> str:
        rec = records.particles_record(summary)
        lines = [
            f"potential: alpha={rec['potential']['alpha']:g}, beta={rec['potential']['beta']:g}, "
            f"crossover_radius={rec['potential']['crossover_radius']:.6g}",
        ]
        for charge in rec["charges"]:
            lines.append(f"charge ({charge['dims']}D): {charge['fraction']} e = {charge['charge_esu']:.6e} esu")
        quark = rec["quark"]
        lines.append(f"quark mass: {quark['mass_g']:.6e} g ({quark['mass_gev']:.4f} GeV/c^2), "
                     f"alpha/9 = {quark['alpha_over_9']:.4e}")
        weak = rec["weak"]
        lines.append(f"g^2 l_w^2 from neutrinos: {weak['g2_lw2_from_neutrinos']:.4e} "
                     f"(asserted {weak['g2_lw2_asserted']:.1e})")
        for r in summary.weak.results:
            status = "PASS" if r.passed else "FAIL"
            gap = "" if r.gap_decades is None else f"{r.gap_decades:.3f}"
            lines.append(f"  {r.relation_id}: gap={gap} [{status}]")
        lines.append(f"zpf energy: pion {rec['zpf_energy_erg']['pion']:.4e} erg, "
                     f"planck {rec['zpf_energy_erg']['planck']:.4e} erg")
        far = rec["far_field"]
        lines.append(f"far field at {far['compton_lengths']:g} Compton lengths: "
                     f"gravity {far['gravitational_erg']:.4e} erg, electric {far['electric_erg']:.4e} erg, "
                     f"ratio {far['strength_ratio']:.4e}")
        if summary.potential_rows is not None:
            lines.append("")
            lines += self._table(list(records.POTENTIAL_COLUMNS),
                                 [[_short(v) for v in row] for row in summary.potential_rows])
        return "\n".join(lines) + "\n"

    def format_full(self, report: Report, suites: List[SuiteResult], run: SimulationRun) -> str:
        lines = ["== check =="] + self._report_lines(report)
        lines += ["", "== algebra =="] + self._algebra_lines(suites)
        lines += ["", "== simulate =="] + self._simulation_lines(run)
        return "\n".join(lines) + "\n"


class CsvFormatter(OutputFormatterInterface):
    """表計算・プロット用の CSV"""

    name = "csv"

    @staticmethod
    def _write(columns: Sequence[str], rows: Iterable[Dict[str, Any]]) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_num(row.get(c)) for c in columns])
        return buffer.getvalue()

    def format_report(self, report: Report) -> str:
        return self._write(records.RESULT_COLUMNS,
                           (records.result_record(r) for r in report.results))

    def format_simulation(self, run: SimulationRun) -> str:
        ts = run.series
        text = self._write(records.series_columns(ts), records.series_rows(ts))
        trend = records.trend_record(run)
        if trend:
            text += "".join(f"# {k}={_num(v)}\n" for k, v in trend.items())
        return text

    def format_algebra(self, suites: List[SuiteResult]) -> str:
        rows = [
            {
                "suite": suite.name,
                "passed": suite.passed,
                "details": ";".join(f"{k}={_num(v)}" for k, v in row.items()),
            }
            for suite in suites for row in suite.rows
        ]
        return self._write(("suite", "passed", "details"), rows)

    def format_constants(self, table: ConstantsTable) -> str:
        return self._write(records.CONSTANTS_COLUMNS, records.constants_rows(table))

    def format_particles(self, summary: ParticleSummary) -> str:
        if summary.potential_rows is not None:
            return self._write(records.POTENTIAL_COLUMNS,
                               (dict(zip(records.POTENTIAL_COLUMNS, row))
                                for row in summary.potential_rows))
        rec = records.particles_record(summary)
        rows = [{"key": "crossover_radius", "value": rec["potential"]["crossover_radius"]}]
        rows += [{"key": f"charge_{c['dims']}d_esu", "value": c["charge_esu"]} for c in rec["charges"]]
        rows += [{"key": f"quark_{k}", "value": v} for k, v in rec["quark"].items()]
        rows += [{"key": k, "value": v} for k, v in rec["weak"].items()
                 if k not in ("results", "fermi_coupling_unit")]
        rows += [{"key": f"zpf_{k}_erg", "value": v} for k, v in rec["zpf_energy_erg"].items()]
        rows += [{"key": f"far_field_{k}", "value": v} for k, v in rec["far_field"].items()]
        return self._write(("key", "value"), rows)

    def format_full(self, report: Report, suites: List[SuiteResult], run: SimulationRun) -> str:
        return "\n".join([
            "# section: check\n" + self.format_report(report),
            "# section: algebra\n" + self.format_algebra(suites),
            "# section: simulate\n" + self.format_simulation(run),
        ])


class JsonFormatter(OutputFormatterInterface):
    """1つの整形式 JSON 文書"""

    name = "json"

    @staticmethod
    def _dump(document: Any) -> str:
        return json.dumps(_sanitize(document), ensure_ascii=False, indent=2, allow_nan=False) + "\n"

    def format_report(self, report: Report) -> str:
        return self._dump(records.report_record(report))

    def format_simulation(self, run: SimulationRun) -> str:
        return self._dump(records.simulation_record(run))

    def format_algebra(self, suites: List[SuiteResult]) -> str:
        return self._dump({"suites": [records.suite_record(s) for s in suites]})

    def format_constants(self, table: ConstantsTable) -> str:
        return self._dump({"fingerprint": table.fingerprint,
                           "entries": records.constants_rows(table)})

    def format_particles(self, summary: ParticleSummary) -> str:
        return self._dump(records.particles_record(summary))

    def format_full(self, report: Report, suites: List[SuiteResult], run: SimulationRun) -> str:
        return self._dump({
            "check": records.report_record(report),
            "algebra": {"suites": [records.suite_record(s) for s in suites]},
            "simulate": records.simulation_record(run),
        })


def _sanitize(value: Any) -> Any:
    if isinstance(value, dict):
        return {k: _sanitize(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_sanitize(v) for v in value]
    return records.finite_or_none(value)


_FORMATTERS = {cls.name: cls for cls in (TextFormatter, CsvFormatter, JsonFormatter)}


def get_formatter(name: str) -> OutputFormatterInterface:
    """形式名（text, csv, json）からフォーマッタを作る"""
    try:
        return _FORMATTERS[name]()
    except KeyError:
        raise InvocationError(f"unknown format {name}") from None
