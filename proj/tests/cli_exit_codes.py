"""Exit-code contract of the blocktri command line tool."""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

BIN = sys.argv[1]
failures = []


def run(*args):
    proc = subprocess.run([BIN, *args], capture_output=True, text=True)
    return proc.returncode, proc.stdout


def expect(label, want, *args):
    code, out = run(*args)
    if code != want:
        failures.append(f"{label}: exit {code}, wanted {want}\n{out}")
    return out


def write(path, doc):
    path.write_text(json.dumps(doc))
    return str(path)


with tempfile.TemporaryDirectory() as tmp:
    d = Path(tmp)
    eye = write(d / "eye.json", {"field": "gf:3", "rows": [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]})
    fac = str(d / "fac.json")
    expect("factor", 0, "factor", "--input", eye, "--output", fac)
    expect("verify", 0, "verify", "--input", eye, "--factorization", fac)

    tampered = json.loads(Path(fac).read_text())
    tampered["layers"][0]["A"][0][0] = (tampered["layers"][0]["A"][0][0] + 1) % 3
    bad = write(d / "bad.json", tampered)
    expect("verify tampered", 1, "verify", "--input", eye, "--factorization", bad)

    gl = write(d / "gl.json", {"field": "rational", "rows": [["2", "1"], ["1", "3"]]})
    glfac = str(d / "glfac.json")
    expect("factor --gl", 0, "factor", "--input", gl, "--gl", "--output", glfac)
    expect("verify gl", 0, "verify", "--input", gl, "--factorization", glfac)
    expect("factor sl on det 5", 2, "factor", "--input", gl)

    first = Path(glfac).read_text()
    expect("factor --gl again", 0, "factor", "--input", gl, "--gl", "--output", glfac)
    if Path(glfac).read_text() != first:
        failures.append("factor output is not byte-identical across runs")

    floats = write(d / "f64.json", {"field": "f64", "rows": [[0.5, 0.25], [-1.5, 2.0]]})
    ffac = str(d / "ffac.json")
    expect("factor f64", 0, "factor", "--input", floats, "--gl", "--output", ffac)
    expect("verify f64", 0, "verify", "--input", floats, "--factorization", ffac)

    nc = write(d / "nc.json", {"field": "gf:2", "rows": [[1, 1], [0, 1]]})
    out = expect("commutator non-commutator", 1, "commutator", "--input", nc)
    if '"decomposable": false' not in out.replace('"decomposable":false', '"decomposable": false'):
        failures.append(f"commutator report missing decomposable=false\n{out}")
    sl = write(d / "sl.json", {"field": "gf:5", "rows": [[1, 2], [3, 2]]})
    expect("commutator", 0, "commutator", "--input", sl)

    m1 = write(d / "m1.json", {"field": "gf:5", "rows": [[2, 0], [0, 2]]})
    m4 = write(d / "m4.json", {"field": "gf:5", "rows": [[4, 0], [0, 1]]})
    expect("obstruct spectra", 0, "obstruct", "--m1", m1, "--m4", m4, "--mode", "spectra")
    i2 = write(d / "i2.json", {"field": "gf:5", "rows": [[1, 0], [0, 1]]})
    expect("obstruct inconclusive", 1, "obstruct", "--m1", i2, "--m4", i2, "--mode", "trace")
    expect("obstruct bad mode", 2, "obstruct", "--m1", m1, "--m4", m4, "--mode", "nope")

    wit = str(d / "wit.json")
    expect("witness", 0, "witness", "--m", "2", "--n", "2", "--kind", "diag-perm", "--field", "gf:5", "--output", wit)
    expect("permsweep", 0, "permsweep", "--input", wit, "--m", "2", "--n", "2")
    expect("permsweep identity", 1, "permsweep", "--input", i2, "--m", "1", "--n", "1")
    expect("witness too small", 2, "witness", "--m", "2", "--n", "2", "--kind", "diag-perm", "--field", "gf:3")

    expect("sl4gf2 lemma", 0, "sl4gf2", "--verify-lemma5")
    expect("sl4gf2 nonrep", 0, "sl4gf2", "--find-nonrepresentable", "--output", str(d / "w.json"))

    swap = write(d / "swap.json", {"field": "f64", "rows": [[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]]})
    expect("export-coupling", 0, "export-coupling", "--input", swap, "--output", str(d / "net.json"))
    expect("export-coupling nice", 0, "export-coupling", "--input", swap, "--nice")
    neg = write(d / "neg.json", {"field": "f64", "rows": [[1, 0], [0, -1]]})
    out = expect("export-coupling det < 0", 2, "export-coupling", "--input", neg)
    if "OrientationError" not in out:
        failures.append(f"missing OrientationError report\n{out}")

    out = expect("missing file", 2, "verify", "--input", str(d / "absent.json"), "--factorization", fac)
    try:
        report = json.loads(out)
        if report.get("code") != "ParseError" or report.get("blocktri_schema") != 1:
            failures.append(f"unexpected error report {report}")
    except json.JSONDecodeError:
        failures.append(f"error report is not JSON\n{out}")
    expect("missing option", 2, "factor")
    expect("unknown subcommand", 2, "frobnicate")
    expect("help", 0, "--help")

for f in failures:
    print("FAIL", f)
print(f"{len(failures)} failures")
sys.exit(1 if failures else 0)
