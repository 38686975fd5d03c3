import math

import pytest

import blocktri


def block_swap(field):
    return blocktri.matrix([[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]], field)


def test_sl_factorization_round_trip():
    m = block_swap("gf:3")
    fac = blocktri.factor(m)
    assert fac["kind"] == "sl6"
    assert len(fac["layers"]) == 6
    assert blocktri.verify(m, fac)


def test_gl_factorization_with_diagonal():
    m = blocktri.matrix([[2, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]], "gf:5")
    fac = blocktri.factor(m, gl=True, diag={"field": "gf:5", "diag": [2, 1]})
    assert fac["layers"][-1]["type"] == "upper_diag"
    assert blocktri.verify(m, fac)


def test_tampered_factorization_fails():
    m = blocktri.matrix([["1", "2"], ["3", "7"]])
    fac = blocktri.factor(m)
    fac["layers"][0]["A"][0][0] = "5/2"
    assert not blocktri.verify(m, fac)


def test_errors_carry_codes():
    with pytest.raises(blocktri.BlocktriError) as info:
        blocktri.factor(blocktri.matrix([[2, 0], [0, 1]]))
    assert info.value.args[0] == "NotUnimodular"
    with pytest.raises(blocktri.BlocktriError) as info:
        blocktri.commutator(blocktri.matrix([[1, 1], [0, 1]], "gf:2"))
    assert info.value.args[0] == "NoDecomposition"


def test_commutator():
    out = blocktri.commutator(blocktri.matrix([[1, 2], [3, 7]], "gf:5"))
    assert set(out) >= {"X", "Y", "route"}


def test_obstructions():
    m1 = blocktri.matrix([[2, 0], [0, 2]], "gf:5")
    m4 = blocktri.matrix([[4, 0], [0, 1]], "gf:5")
    assert blocktri.obstruction(m1, m4, "spectra")["obstructed"]
    w = blocktri.perm_witness(2, 2, "gf:5")
    assert blocktri.perm_sweep(w, 2, 2)["obstructed"]
    assert blocktri.rank_one_case_check(3, "gf:2")["obstructed"]
    assert blocktri.blockdiag_witness(2, 2, "rational")["rows"][2] == ["0", "0", "1", "1"]


def test_sl4gf2():
    report = blocktri.verify_lemma()
    assert report["pass"]
    found = blocktri.nonrepresentable()
    assert len(found) > 0
    assert all(doc["field"] == "gf:2" for doc in found)


def test_coupling_network():
    m = block_swap("f64")
    net = blocktri.coupling_network(m)
    assert len(net["layers"]) == 6
    assert net["reconstruction_error"] <= 1e-9
    masks = [layer["mask"] for layer in net["layers"]]
    assert all(a != b for a, b in zip(masks, masks[1:]))
    nice = blocktri.coupling_network(blocktri.matrix([[1, 1], [0, 1]]), nice=True)
    assert all(s == 0 for layer in nice["layers"] for s in layer["s"])
    with pytest.raises(blocktri.BlocktriError) as info:
        blocktri.coupling_network(blocktri.matrix([[1.0, 0.0], [0.0, -1.0]], "f64"))
    assert info.value.args[0] == "OrientationError"
    assert math.isfinite(net["reconstruction_error"])
