"""
定数ファイルの読み書きのテスト
"""
import pytest

from src.domain.entities.constants_table import REQUIRED_KEYS, Provenance
from src.domain.entities.quantity import LENGTH, MASS, TIME, Quantity, decade_gap
from src.domain.errors import ConstantsFileError
from src.infrastructure.constants.constants_file import (
    ConstantsFileRepository, parse_constants, serialize_constants,
)

BASE = """\
hbar = 1.054571817e-27 g cm^2 s^-1 ; provenance=measured
c = 2.99792458e10 cm s^-1 ; provenance=measured
G = 6.6743e-8 cm^3 g^-1 s^-2 ; provenance=measured
e = 4.80320471e-10 esu ; provenance=measured
m_pi = 2.488e-25 g ; provenance=measured
m_e = 9.1093837e-28 g ; provenance=measured
m_p = 1.67262192e-24 g ; provenance=measured
R_obs = 1e28 cm ; provenance=paper
T_obs = 4.3e17 s ; provenance=paper
H_obs = 2.3e-18 s^-1 ; provenance=paper
rho_obs = 9e-30 g cm^-3 ; provenance=paper
N = 1e80 1 ; provenance=paper
N_nu = 1e90 1 ; provenance=paper
"""


def test_default_file_has_every_required_key(table):
    for key in REQUIRED_KEYS:
        assert key in table
    assert len(table.fingerprint) == 64


def test_default_derived_values(table):
    assert table["l_pi"].magnitude == pytest.approx(1.4139e-13, rel=1e-3)
    assert table["l_pi"].dim == LENGTH
    assert table["tau_pi"].magnitude == pytest.approx(4.716e-24, rel=1e-3)
    assert table["tau_pi"].dim == TIME
    assert table["m_planck"].dim == MASS
    assert table["m_nu"].magnitude == pytest.approx(1e-8 * table["m_e"].magnitude)


def test_absent_derived_keys_are_computed_at_load(table):
    entry = table.entry("l_w")
    assert entry.provenance is Provenance.DERIVED
    assert entry.note.startswith("computed at load:")
    assert entry.derived_from == ("hbar", "m_w", "c")


def test_minimal_file_derives_the_rest():
    t = parse_constants(BASE)
    assert t["l_pi"].magnitude == pytest.approx(1.4139e-13, rel=1e-3)
    assert t["rho_planck"].dim == MASS / LENGTH.scale(3)


def test_fingerprint_is_sha256_of_bytes():
    a = parse_constants(BASE.encode("utf-8"))
    b = parse_constants(BASE)
    c = parse_constants(BASE + "# comment\n")
    assert a.fingerprint == b.fingerprint
    assert a.fingerprint != c.fingerprint


def test_missing_required_key():
    text = "\n".join(l for l in BASE.splitlines() if not l.startswith("hbar"))
    with pytest.raises(ConstantsFileError, match="missing required key hbar"):
        parse_constants(text)


def test_malformed_line_reports_line_number():
    with pytest.raises(ConstantsFileError, match="line 14: malformed entry"):
        parse_constants(BASE + "oops = ; provenance=paper\n")


def test_duplicate_key():
    with pytest.raises(ConstantsFileError, match="duplicate key c"):
        parse_constants(BASE + "c = 3e10 cm s^-1 ; provenance=measured\n")


def test_unknown_unit_token():
    with pytest.raises(ConstantsFileError, match="line 14"):
        parse_constants(BASE + "x = 1 furlong ; provenance=paper\n")


def test_zero_denominator_in_unit_exponent():
    with pytest.raises(ConstantsFileError, match="line 14: zero denominator"):
        parse_constants(BASE + "x = 1 cm^1/0 ; provenance=paper\n")


def test_derived_without_rule():
    with pytest.raises(ConstantsFileError, match="no derivation rule for x"):
        parse_constants(BASE + "x = 1 cm ; provenance=derived\n")


def test_inconsistent_derived_value():
    with pytest.raises(ConstantsFileError, match="inconsistent constants file"):
        parse_constants(BASE + "l_pi = 1.4e-10 cm ; provenance=derived\n")


def test_consistent_derived_value_is_recomputed():
    t = parse_constants(BASE + 'l_pi = 1.5e-13 cm ; provenance=derived ; note="rounded"\n')
    assert t["l_pi"].magnitude == pytest.approx(1.4139e-13, rel=1e-3)
    assert t.entry("l_pi").note == "rounded"


def test_derivable_key_with_quoted_provenance_is_kept():
    t = parse_constants(BASE + "l_pi = 1e-13 cm ; provenance=paper\n")
    assert t["l_pi"].magnitude == 1e-13
    assert t.entry("l_pi").provenance is Provenance.PAPER
    # 依存する tau_pi は記載値から計算される
    assert t["tau_pi"].magnitude == pytest.approx(1e-13 / 2.99792458e10)


def test_serialize_then_parse_preserves_values(table):
    again = parse_constants(serialize_constants(table))
    assert again.names() == table.names()
    for name in table.names():
        assert again[name] == table[name]


def test_repository_save_and_load(tmp_path, table):
    path = tmp_path / "constants.txt"
    repo = ConstantsFileRepository(str(path))
    repo.save(table.with_value("N", Quantity(1e78)))
    loaded = repo.load()
    assert loaded["N"].magnitude == 1e78
    assert decade_gap(loaded["l_pi"], table["l_pi"]) < 1e-12


def test_table_helpers(table):
    assert table.get("missing") is None
    with pytest.raises(KeyError):
        table["missing"]
    assert "N" not in table.without("N")
    assert table.with_value("extra", Quantity(1.0)).entry("extra").provenance is Provenance.PAPER


def test_with_value_leaves_derived_keys_as_stated(table):
    heavier = table.with_value("m_pi", Quantity(2 * table["m_pi"].magnitude, MASS))
    assert heavier["m_pi"].magnitude == 2 * table["m_pi"].magnitude
    assert heavier["l_pi"] == table["l_pi"]
    assert heavier.entry("l_pi").provenance is Provenance.DERIVED
