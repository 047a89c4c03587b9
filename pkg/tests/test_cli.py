import io
import json
import math
from pathlib import Path

import pytest

from morsespec.cli import (
    _COLUMNS,
    main,
    read_table,
    read_zeta_zeros,
    write_table,
    zeta_coefficients,
)

DATA = Path(__file__).parent / "data"
ZETA_FILE = str(DATA / "zeta_zeros.txt")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows_of(out, fmt="csv"):
    return read_table(io.StringIO(out), fmt)


def test_eval_closed_form(capsys):
    code, out, err = run(capsys, "eval", "--kappa", "0", "--mu-re", "0.5", "--x", "3")
    assert code == 0
    w = [r for r in rows_of(out) if r["quantity"] == "W"][0]
    value = w["significand_re"] * 10.0 ** w["scale"]
    assert value == pytest.approx(math.exp(-1.5), rel=1e-12)
    assert "0.2231301601" in err


def test_eval_imaginary_order_is_real(capsys):
    code, out, _ = run(capsys, "eval", "--kappa", "0", "--mu-im", "5", "--x", "1")
    assert code == 0
    rows = {r["quantity"]: r for r in rows_of(out)}
    assert rows["W"]["is_real"] == "true"
    assert rows["W"]["significand_im"] == 0.0
    assert "K_bessel(x/2)" in rows


def test_eval_missing_x_is_usage_error(capsys):
    code, _, err = run(capsys, "eval", "--kappa", "0")
    assert code == 2
    assert "usage" in err


def test_eval_nonpositive_x(capsys):
    assert run(capsys, "eval", "--kappa", "0", "--x", "-1")[0] == 2


def test_zeros_k0_imaginary_only(capsys):
    code, out, err = run(capsys, "zeros", "--k", "0", "--u0", "0", "--T", "30")
    assert code == 0
    rows = rows_of(out)
    assert rows and all(r["axis"] == "imaginary" for r in rows)
    assert f"imaginary-axis zeros (t > 0): {len(rows)}" in err
    assert list(rows[0]) == _COLUMNS["zeros"]


def test_zeros_negative_k_has_real_rows(capsys):
    code, out, _ = run(capsys, "zeros", "--k", "-2", "--u0", "-2", "--T", "10")
    assert code == 0
    real = [r for r in rows_of(out) if r["axis"] == "real"]
    assert real
    assert all(-4 < r["energy"] < 0 for r in real)


def test_zeros_positive_k_no_real_rows(capsys):
    code, out, err = run(capsys, "zeros", "--k", "1", "--u0", "0", "--T", "10")
    assert code == 0
    assert not [r for r in rows_of(out) if r["axis"] == "real"]
    assert "double zero at mu = 0: no" in err


def test_count_rows_within_bound(capsys):
    code, out, _ = run(capsys, "count", "--k", "0", "--u0", "0", "--T", "30", "--checkpoints", "10")
    assert code == 0
    rows = rows_of(out)
    assert len(rows) == 10
    assert max(abs(r["diff"]) for r in rows) <= 2.0


def test_count_linear_coefficient_cancels(capsys):
    # the linear coefficient is proportional to 2 log 2 - 1 - u0
    code, _, err = run(capsys, "count", "--k", "0", "--u0", "0.386294", "--T", "30",
                       "--checkpoints", "3")
    assert code == 0
    line = [ln for ln in err.splitlines() if ln.startswith("main term")][0]
    c2 = float(line.split("+")[1].split("T")[0])
    assert abs(c2) < 1e-6


def test_count_rejects_zero_T(capsys):
    assert run(capsys, "count", "--k", "0", "--u0", "0", "--T", "0")[0] == 2


def test_weyl_rows(capsys):
    # V(0) = 1/4 for k = 0, so T = 0.25 closes the classically allowed region
    code, out, _ = run(capsys, "weyl", "--k", "0", "--u0", "0", "--T-list", "0.25", "10000")
    assert code == 0
    empty, large = rows_of(out)
    assert empty["phase_integral"] == 0.0 and empty["weyl_count"] == 0.0
    assert large["phase_integral"] == pytest.approx(499.14707971275134, rel=1e-10)
    assert abs(large["diff"]) < 3


def test_weyl_validation(capsys):
    code, out, _ = run(capsys, "weyl", "--k", "0", "--u0", "0", "--T-list", "0.1")
    assert code == 0 and rows_of(out)[0]["phase_integral"] == 0.0
    assert run(capsys, "weyl", "--k", "0", "--u0", "0", "--T-list", "-5")[0] == 2


def test_mfunc_alpha_zero_row(capsys):
    from morsespec.mfunction import m_of_energy

    code, out, _ = run(capsys, "mfunc", "--k", "0.5", "--u0", "0.2", "--e-re", "1", "1", "1",
                       "--e-im", "2", "2", "1")
    assert code == 0
    (row,) = rows_of(out)
    assert complex(row["m_re"], row["m_im"]) == m_of_energy(0.5, 0.2, 1 + 2j)
    assert row["alpha"] == 0.0


def test_mfunc_rotation_by_half_pi_inverts(capsys):
    _, out0, _ = run(capsys, "mfunc", "--k", "0", "--u0", "0", "--e-re", "-3", "3", "2",
                     "--e-im", "1", "1", "1")
    _, out1, _ = run(capsys, "mfunc", "--k", "0", "--u0", "0", "--e-re", "-3", "3", "2",
                     "--e-im", "1", "1", "1", "--alpha", str(math.pi / 2))
    for r0, r1 in zip(rows_of(out0), rows_of(out1)):
        m0, m1 = complex(r0["m_re"], r0["m_im"]), complex(r1["m_re"], r1["m_im"])
        assert m1 == pytest.approx(-1 / m0, rel=1e-12)


@pytest.mark.slow
def test_mfunc_verify_passes(capsys):
    code, _, err = run(capsys, "mfunc", "--k", "0", "--u0", "0", "--e-re", "0", "0", "1",
                       "--e-im", "1", "1", "1", "--verify")
    assert code == 0
    assert "herglotz  PASS" in err and "pole/zero PASS" in err and "riccati   PASS" in err


def test_mfunc_bad_grid(capsys):
    assert run(capsys, "mfunc", "--k", "0", "--u0", "0", "--e-re", "0", "1", "0",
               "--e-im", "1", "1", "1")[0] == 2
    assert run(capsys, "mfunc", "--k", "0", "--u0", "0", "--e-re", "0", "1")[0] == 2


@pytest.mark.slow
def test_debranges_run(capsys):
    code, out, err = run(capsys, "debranges", "--u", "0", "--t-max", "8", "--samples", "100")
    assert code == 0
    rows = rows_of(out)
    margins = [r["value"] for r in rows if r["kind"] == "hb_margin"]
    assert len(margins) == 100 and min(margins) > 0
    a = [r["z_re"] for r in rows if r["kind"] == "A_zero"]
    b = [r["z_re"] for r in rows if r["kind"] == "B_zero"]
    assert b[0] == 0.0 and all(bi < ai for ai, bi in zip(a, b))
    assert "interlacing     PASS" in err


def test_debranges_rejects_few_samples(capsys):
    assert run(capsys, "debranges", "--u", "0", "--samples", "10")[0] == 2


def test_compare_zeta_counts_and_coefficients(capsys):
    code, out, err = run(capsys, "compare-zeta", "--zeros-file", ZETA_FILE, "--T", "15",
                         "--checkpoints", "1")
    assert code == 0
    (row,) = rows_of(out)
    assert row["T"] == 15.0 and row["zeta_observed"] == 2
    c1, c2 = zeta_coefficients()
    assert f"c1 = {c1:.12g}" in err and f"c2 = {c2:.12g}" in err
    assert c1 == pytest.approx(1 / math.pi, rel=1e-15)
    assert c2 == pytest.approx(-(math.log(2 * math.pi) + 1) / math.pi, rel=1e-15)


def test_compare_zeta_empty_file(capsys, tmp_path):
    p = tmp_path / "empty.txt"
    p.write_text("# nothing here\n\n")
    assert run(capsys, "compare-zeta", "--zeros-file", str(p), "--T", "15")[0] == 2


def test_compare_zeta_malformed_file(capsys, tmp_path):
    p = tmp_path / "bad.txt"
    p.write_text("14.13\nfoo\n")
    assert run(capsys, "compare-zeta", "--zeros-file", str(p), "--T", "10")[0] == 2
    p.write_text("21.02\n14.13\n")
    assert run(capsys, "compare-zeta", "--zeros-file", str(p), "--T", "10")[0] == 2


def test_compare_zeta_short_file(capsys):
    assert run(capsys, "compare-zeta", "--zeros-file", ZETA_FILE, "--T", "60")[0] == 4


def test_read_zeta_zeros_skips_comments():
    zz = read_zeta_zeros(ZETA_FILE)
    assert len(zz.gammas) == 11
    assert zz.count_upto(14.0) == 0
    assert zz.count_upto(zz.gammas[0]) == 1
    assert zz.count_upto(50) == 10


@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_table_round_trip(fmt):
    rows = [{"T": 0.1 + 0.2, "observed": 3, "main_term": 1 / 3, "diff": -1e-300},
            {"T": 1e10, "observed": 0, "main_term": math.pi, "diff": 2.5}]
    buf = io.StringIO()
    write_table(rows, _COLUMNS["count"], fmt, buf)
    buf.seek(0)
    assert read_table(buf, fmt) == rows


def test_out_file_and_global_flag_positions(capsys, tmp_path):
    p = tmp_path / "w.json"
    code = main(["--format", "json", "weyl", "--k", "0", "--u0", "0", "--T-list", "100",
                 "--out", str(p)])
    assert code == 0
    data = json.loads(p.read_text())
    assert list(data[0]) == _COLUMNS["weyl"]
    assert capsys.readouterr().out == ""


def test_deterministic_with_seed(capsys):
    argv = ["mfunc", "--k", "1", "--u0", "0", "--e-re", "-2", "2", "3", "--e-im", "0.5", "1", "2",
            "--seed", "7"]
    first = run(capsys, *argv)[1]
    assert run(capsys, *argv)[1] == first


def test_precision_flag_validation(capsys):
    assert run(capsys, "--precision-digits", "8", "eval", "--kappa", "0", "--x", "1")[0] == 2
    code, out, _ = run(capsys, "eval", "--kappa", "0", "--mu-re", "0.5", "--x", "1",
                       "--precision-digits", "60")
    assert code == 0
