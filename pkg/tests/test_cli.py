import subprocess
import sys

import numpy as np
import pytest

from hyperpd import __version__
from hyperpd.certifier import PDVerdict
from hyperpd.cli import UsageError, parse_grid, run


def invoke(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def body(text):
    return [line for line in text.splitlines() if not line.startswith("#")]


class TestGrid:

    def test_inclusive_stop(self):
        assert parse_grid("0:1:0.25") == pytest.approx([0, 0.25, 0.5, 0.75, 1.0])
        assert len(parse_grid("0:10:0.1")) == 101

    def test_off_grid_stop_excluded(self):
        assert parse_grid("0:1:0.3") == pytest.approx([0, 0.3, 0.6, 0.9])

    def test_list_and_scalar(self):
        assert list(parse_grid("3,1,2")) == [3.0, 1.0, 2.0]
        assert list(parse_grid("2.5")) == [2.5]

    @pytest.mark.parametrize("bad", ["0:1", "a:b:c", "0:1:0", "1:0:0.1", "1,x"])
    def test_rejects(self, bad):
        with pytest.raises(UsageError):
            parse_grid(bad)


class TestExitCodes:

    def test_nonpd(self, capsys):
        code, out, _ = invoke(capsys, "certify", "--space", "h3", "--kernel", "gaussian:lambda=1",
                              "--tmax", "20")
        assert code == 2
        v = PDVerdict.from_line(body(out)[-1])
        assert v.status == "NonPD"

    def test_nonnegative(self, capsys):
        code, out, _ = invoke(capsys, "certify", "--space", "h2", "--kernel", "sech:a=2")
        assert code == 0
        assert PDVerdict.from_line(body(out)[-1]).certified_pd

    def test_inconclusive(self, capsys):
        code, _, _ = invoke(capsys, "certify", "--space", "h2", "--kernel", "sech:a=0.4",
                            "--tmax", "10")
        assert code == 3

    @pytest.mark.parametrize("argv", [["bogus"], ["certify", "--space", "h4", "--kernel", "sech:a=2"],
                                      ["transform", "--space", "h2"],
                                      ["transform", "--space", "h2", "--kernel", "nope:a=1"],
                                      ["density"], ["gram", "--space", "h2", "--kernel", "sech:a=2",
                                                    "--n", "0"]])
    def test_errors_exit_1(self, capsys, argv):
        code, out, err = invoke(capsys, *argv)
        assert code == 1
        assert out == ""
        assert "hyperpd" in err

    def test_version(self, capsys):
        code, out, _ = invoke(capsys, "--version")
        assert code == 0
        assert __version__ in out


class TestOutputs:

    def test_header(self, capsys):
        argv = ["transform", "--space", "h2", "--kernel", "sech:a=2", "--t", "0:1:0.5"]
        code, out, _ = invoke(capsys, *argv)
        lines = out.splitlines()
        assert code == 0
        assert lines[0] == f"# hyperpd {__version__}"
        assert lines[1] == "# argv: " + " ".join(argv)
        assert "kernel=sech:a=2" in lines[2] and "space=h2" in lines[2]
        assert lines[3].startswith("# quadrature:")

    def test_repeat_is_byte_identical(self, capsys, tmp_path):
        outs = []
        for k in range(2):
            path = tmp_path / f"sig{k}.csv"
            code = run(["signmap", "--space", "h2", "--lambda", "0.5,1", "--t", "0:4:0.5",
                        "--workers", str(k + 1), "--out", str(path)])
            assert code == 0
            outs.append(path.read_bytes())
        a, b = (o.decode().splitlines() for o in outs)
        # only the argv / resolved-args header lines mention the worker count
        assert [l for l in a if "workers" not in l] == [l for l in b if "workers" not in l]

    def test_repeat_same_args(self, capsys):
        argv = ["gram", "--space", "h3", "--kernel", "gaussian:lambda=0.5", "--n", "6",
                "--trials", "3", "--seed", "9"]
        _, a, _ = invoke(capsys, *argv)
        _, b, _ = invoke(capsys, *argv)
        assert a == b

    def test_transform_closed_form(self, capsys):
        _, out, _ = invoke(capsys, "transform", "--space", "h3", "--kernel", "gaussian:lambda=1",
                           "--t", "0:2:1", "--source", "closed_form")
        rows = body(out)
        assert rows[0] == "t,fhat,err"
        assert len(rows) == 4

    def test_certify_to_file_echoes_verdict(self, capsys, tmp_path):
        path = tmp_path / "v.txt"
        code, out, _ = invoke(capsys, "certify", "--space", "h2", "--kernel", "wishart:a=0.5",
                              "--out", str(path))
        assert code == 2
        assert out.strip() == path.read_text().splitlines()[-1]

    def test_gram_dump(self, capsys):
        _, out, _ = invoke(capsys, "gram", "--space", "h2", "--kernel", "sech:a=2", "--n", "3",
                           "--trials", "2", "--dump-matrix")
        rows = body(out)
        assert rows[0].startswith("space,kernel")
        assert rows[2] == "i,j,value"
        assert len(rows) == 3 + 9

    def test_circle(self, capsys):
        _, out, _ = invoke(capsys, "circle", "--lambda", "1", "--n", "8,16", "--check")
        rows = body(out)
        assert rows[0] == "lambda,N,min_eig,n_negative,min_eig_dense"
        n16 = rows[2].split(",")
        assert float(n16[2]) < 0 and int(n16[3]) >= 1
        assert float(n16[4]) == pytest.approx(float(n16[2]), abs=1e-12)

    def test_density_table(self, capsys):
        _, out, _ = invoke(capsys, "density", "--hm", "n=2,a=4", "--gauss", "lambda=1.66",
                           "--r", "0:4:0.01")
        rows = body(out)
        assert rows[0] == "r,hm,gauss"
        data = np.array([[float(x) for x in row.split(",")] for row in rows[1:]])
        assert data.shape == (401, 3)
        assert np.all(np.diff(data[:, 1]) < 0) and np.all(np.diff(data[:, 2]) < 0)

    def test_density_bad_params(self, capsys):
        code, _, _ = invoke(capsys, "density", "--hm", "n=2")
        assert code == 1
        code, _, _ = invoke(capsys, "density", "--hm", "n=2,a=0.5")
        assert code == 1

    def test_asymptotic(self, capsys):
        _, out, _ = invoke(capsys, "asymptotic", "--lambda", "50,100")
        rows = body(out)
        assert rows[0] == "lambda,T,deviation"
        d50, d100 = (float(r.split(",")[2]) for r in rows[1:])
        assert d100 < d50 <= 1e-2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "hyperpd", "circle", "--lambda", "0.5", "--n", "8"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert body(proc.stdout)[1].startswith("0.5,8,-")
