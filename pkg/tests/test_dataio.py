"""Embedded measurement tables, refits, validation reports and serialization."""

import json
import warnings

import jsonschema
import numpy as np
import pytest

from chansim.cirgen import generate_batch
from chansim.dataio import (
    REPORT_SCHEMA,
    DataQualityWarning,
    MeasurementRecord,
    distance_anomalies,
    embedded_measurements,
    export_measurements_csv,
    export_realizations,
    import_measurement_csv,
    import_realizations_csv,
    import_realizations_json,
    refit_lambda_c,
    refit_ple,
    run_validation,
    summarize_scenario,
)
from chansim.errors import ParameterError, ValidationError
from chansim.params import builtin


def test_row_counts():
    assert len(embedded_measurements(28)) == 36
    assert len(embedded_measurements(28, "LOS")) == 9
    assert len(embedded_measurements(28, "NLOS")) == 27
    assert len(embedded_measurements(140, "LOS")) == 8
    assert len(embedded_measurements(140, "NLOS")) == 12


def test_known_rows():
    r = next(x for x in embedded_measurements(28) if (x.tx_id, x.rx_id) == (1, 1))
    assert (r.distance_m, r.path_loss_db, r.num_tc, r.num_sp, r.rms_ds_ns) == (6.4, 69.3, 4, 11, 14.1)
    r = next(x for x in embedded_measurements(140) if (x.tx_id, x.rx_id) == (4, 28))
    assert (r.condition.value, r.distance_m, r.path_loss_db, r.num_tc, r.num_sp, r.rms_ds_ns) == ("LOS", 21.3, 95.6, 3, 9, 15.2)
    r = next(x for x in embedded_measurements(28) if (x.tx_id, x.rx_id) == (1, 8))
    assert r.rms_ds_ns == 46.0


def test_unknown_frequency():
    with pytest.raises(ParameterError):
        embedded_measurements(73)


def test_distance_anomalies_are_the_tx5_rows():
    assert sorted(r.rx_id for r in distance_anomalies()) == [28, 31, 32, 33]


@pytest.mark.parametrize(
    "freq, cond, expected",
    [(28, "LOS", 32 / 9), (28, "NLOS", 139 / 27), (140, "LOS", 7 / 8), (140, "NLOS", 21 / 12)],
)
def test_lambda_refit_brute_force(freq, cond, expected):
    rows = embedded_measurements(freq, cond)
    # oracle: mean of (N - 1) over the rows
    assert refit_lambda_c(rows) == pytest.approx(np.mean([r.num_tc - 1 for r in rows]), rel=1e-12)
    assert refit_lambda_c(rows) == pytest.approx(expected, rel=1e-12)


def test_ple_refit_28():
    los, nlos = refit_ple(embedded_measurements(28), 28)
    assert 1.0 <= los <= 1.4
    assert 2.4 <= nlos <= 3.0


def test_ple_refit_140_warns():
    with pytest.warns(DataQualityWarning):
        refit_ple(embedded_measurements(140), 140)


def test_record_validation():
    with pytest.raises(ValidationError) as info:
        MeasurementRecord(28, "LOS", 1, 1, 5.0, 70.0, 3, 2, 1.0)
    assert info.value.field == "num_sp"


def test_measurement_csv_round_trip():
    rows = embedded_measurements(28) + embedded_measurements(140)
    assert import_measurement_csv(export_measurements_csv(rows)) == rows


def test_measurement_csv_errors_carry_row_and_field():
    text = export_measurements_csv(embedded_measurements(140)).decode().splitlines()
    parts = text[3].split(",")
    parts[4] = "far"
    text[3] = ",".join(parts)
    with pytest.raises(ValidationError) as info:
        import_measurement_csv("\n".join(text))
    assert (info.value.row, info.value.field) == (3, "distance_m")
    assert "row 3" in str(info.value)


def test_measurement_csv_empty_and_missing_column():
    with pytest.raises(ValidationError):
        import_measurement_csv("")
    with pytest.raises(ValidationError) as info:
        import_measurement_csv("frequency_ghz,condition\n28,LOS\n")
    assert info.value.field == "tx_id"


def test_realization_json_round_trip():
    rs = generate_batch(builtin(28, "NLOS", "All28"), 8.0, 5, seed=3)
    back = import_realizations_json(export_realizations(rs, "json"))
    assert back == rs


def test_realization_csv_round_trip():
    rs = generate_batch(builtin(140, "LOS"), 8.0, 4, seed=3)
    rows = import_realizations_csv(export_realizations(rs, "csv"))
    assert sorted(rows) == [0, 1, 2, 3]
    for rid, r in enumerate(rs):
        assert [row["power_mw"] for row in rows[rid]] == list(r.powers_mw)
        assert [row["abs_delay_ns"] for row in rows[rid]] == list(r.delays_ns)


def test_realization_csv_bad_header():
    with pytest.raises(ValidationError):
        import_realizations_csv("a,b\n1,2\n")


def test_export_is_deterministic():
    a = export_realizations(generate_batch(builtin(28, "LOS"), 5.0, 10, seed=99), "csv")
    b = export_realizations(generate_batch(builtin(28, "LOS"), 5.0, 10, seed=99), "csv")
    assert a == b


def test_unknown_export_format():
    with pytest.raises(ParameterError):
        export_realizations([], "xml")


def test_summary_is_deterministic_and_consistent():
    a = summarize_scenario(builtin(140, "NLOS"), 200, seed=4, angular_count=50)
    b = summarize_scenario(builtin(140, "NLOS"), 200, seed=4, angular_count=50)
    assert a.median_omni_ds_ns == b.median_omni_ds_ns
    assert a.median_lobe_as_deg == b.median_lobe_as_deg
    assert a.omni_ds_ns.size == 200


def test_validation_report_schema():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DataQualityWarning)
        report = run_validation(100, seed=1, angular=False, directional=False)
    doc = json.loads(report.to_json())
    jsonschema.validate(doc, REPORT_SCHEMA)
    assert set(doc["scenarios"]) == {"28GHz_LOS", "28GHz_NLOS", "140GHz_LOS", "140GHz_NLOS"}
    assert doc["passed"] == report.passed
    assert report.failures() == [
        f"{k}: {c['name']}" for k, s in doc["scenarios"].items() for c in s["checks"] if not c["passed"]
    ]


def test_validation_rejects_tiny_runs():
    with pytest.raises(ParameterError):
        run_validation(10)
