"""Smoke test for the coronawalk extension module.

Build and run from the repository root:

    cargo build --release -p coronawalk-python --features extension-module
    cp target/release/libcoronawalk_py.so python/coronawalk.so
    python3 python/smoke_test.py
"""

import math
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import coronawalk as cw  # noqa: E402


def check(name, condition):
    print(f"{'ok  ' if condition else 'FAIL'} {name}")
    return condition


def main():
    results = []

    results.append(check("cocktail party spectrum", cw.spectrum("CP:4") == [("12", 12.0, 1), ("6", 6.0, 4), ("4", 4.0, 3)]))

    x = cw.QuadExt(4, 2, 2)
    results.append(check("quadratic arithmetic", str(x) == "2+√2" and (x - x) == cw.QuadExt(0)))
    results.append(check("quadratic ordering", cw.QuadExt(4, -2, 2) < cw.QuadExt(2) < x))
    results.append(check("recognition", cw.QuadExt.recognize(2 + math.sqrt(2)) == x))
    results.append(check("square-free part", cw.square_free_part(16762772) == (26, 24797) and 26 * 26 * 24797 == 16762772))

    params = cw.CoronaParams(2048, 1, 22, 0)
    lam = params.lambda_r()
    results.append(check("large-base radicand", params.r_radicand() == 16762772 and lam["irrational"]))

    summary = cw.corona_spectrum("K:2", "K:1")
    values = [e["value"] for e in summary["closed_form"]]
    results.append(check("closed-form corona spectrum", values == ["2+√2", "2", "2-√2", "0"] and summary["max_deviation"] < 1e-8))

    pst = cw.check_pst("CP:4", "0", "1")
    results.append(check("PST certificate", pst["verdict"] == "PST" and abs(pst["tau0"] - math.pi / 2) < 1e-11))
    amp, fid = cw.fidelity("CP:4", "0", "1", pst["tau0"])
    expected = complex(*pst["phase"]).conjugate()
    results.append(check("amplitude matches phase", abs(fid - 1) < 1e-9 and abs(amp - expected) < 1e-9))

    refuted = cw.check_pst("corona(C:4,K:1)", "base:0", "base:2")
    results.append(check("corona refutation", refuted["verdict"] == "no-PST" and refuted["basis"] == "necessary-bounds"))

    pgst = cw.search_pgst("corona(CP:4,empty:1)", epsilon=0.01)
    results.append(check("PGST search", pgst["achieved"] and pgst["fidelity"] >= 0.99))

    closed = cw.corona_transition_element("CP:4", "empty:1", 0, 1, math.pi * pgst["time_multiple"])
    results.append(check("closed-form element", abs(abs(closed) ** 2 - pgst["fidelity"]) < 1e-9))

    numeric, _ = cw.fidelity("corona(C:5,C:5)", "base:0", "base:2", 3.7)
    results.append(check("kernel vs numeric", abs(cw.corona_transition_element("C:5", "C:5", 0, 2, 3.7) - numeric) < 1e-9))

    samples, best_tau, best = cw.fidelity_scan("K:2", "0", "1", 4.0, 400)
    results.append(check("fidelity scan", len(samples) == 400 and abs(best - 1) < 1e-9))

    results.append(check("periodic support", cw.is_periodic_vertex([cw.QuadExt(2), cw.QuadExt(0)])))
    results.append(check("antipodal identity", cw.antipodal_identity_check("HQ:3")))

    try:
        cw.check_pst("corona(C:4,Q:1)", "0", "1")
        results.append(check("parse error raised", False))
    except cw.CoronawalkError as e:
        results.append(check("parse error raised", "position 11" in str(e)))

    failed = results.count(False)
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
