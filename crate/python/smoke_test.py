"""Smoke test for the qloop Python module.

Builds the extension with cargo (unless QLOOP_SO points at a built library),
imports it and exercises the main entry points.
"""

import os
import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def load():
    so = os.environ.get("QLOOP_SO")
    if so is None:
        subprocess.run(["cargo", "build", "--release", "-p", "qloop-py"], cwd=ROOT, check=True)
        so = ROOT / "target" / "release" / "libqloop_py.so"
    tmp = Path(tempfile.mkdtemp())
    shutil.copy(so, tmp / "qloop.so")
    sys.path.insert(0, str(tmp))
    import qloop

    return qloop


def main():
    qloop = load()
    print("qloop", qloop.__version__)

    q = qloop.LaurentPoly.q()
    qi = qloop.LaurentPoly.q(-1)
    assert str(qloop.q_int(2)) == str(q + qi)
    assert qloop.gauss_binomial(4, 2).terms() == {-4: 1, -2: 1, 0: 2, 2: 1, 4: 1}
    # q^2 = -1 when N = 2
    assert (q * q + qloop.LaurentPoly({0: 1})).reduce(2).is_zero()
    assert qloop.valuation(qloop.factorial(7), 3) == 2

    checks = qloop.qcomb_suite(3)
    assert checks and all(c.passed for c in checks)

    chain = qloop.Chain(2, 6)
    c = chain.higher_serre("E0,E1", 2, 5)
    assert c.status == "exact_zero" and c.nontrivial, c
    c = chain.id1("E0,E1", 1, 4)
    assert c.passed, c
    assert all(c.status == "exact_zero" for c in chain.cross_normalization(3))
    generic = qloop.Chain(2, 4, ring="laurent")
    assert generic.higher_serre("F1,F0", 1, 3).status == "exact_zero"

    nested = qloop.Chain(2, 8).serre_nested(1, "x")
    assert all(c.status == "exact_zero" for c in nested), nested

    report = qloop.run(suite=["serre-nested"], N=2, L=4, Q=[1])
    assert report.exit_code == 0
    assert report.summary["vacuous_zero"] == 4
    assert report.warnings

    try:
        qloop.explain("bogus")
    except KeyError:
        pass
    else:
        raise AssertionError("explain accepted an unknown id")
    try:
        qloop.run(suite=["bogus"])
    except ValueError:
        pass
    else:
        raise AssertionError("run accepted an unknown suite")

    print(qloop.explain("mulo"))
    print("smoke test passed")


if __name__ == "__main__":
    main()
