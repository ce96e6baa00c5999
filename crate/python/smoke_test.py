#!/usr/bin/env python3
"""Smoke test for the splv_py extension module.

Builds nothing itself: it locates the compiled cdylib under target/,
copies it next to a temporary directory as an importable module, and
exercises the main types and operations against the shipped model corpus.

Usage:
    cargo build -p splv-py            # or --release
    python3 python/smoke_test.py
"""

import shutil
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def import_module():
    candidates = [
        ROOT / "target" / profile / name
        for profile in ("release", "debug")
        for name in ("libsplv_py.so", "libsplv_py.dylib", "splv_py.dll")
    ]
    built = next((c for c in candidates if c.exists()), None)
    if built is None:
        sys.exit("build the extension first: cargo build -p splv-py")
    staging = Path(tempfile.mkdtemp(prefix="splv_py."))
    target = staging / ("splv_py" + (".pyd" if built.suffix == ".dll" else ".so"))
    shutil.copyfile(built, target)
    sys.path.insert(0, str(staging))
    import splv_py

    return splv_py


def main():
    splv = import_module()
    models = ROOT / "models"
    checks = 0

    def ok(cond, label):
        nonlocal checks
        if not cond:
            sys.exit(f"FAIL: {label}")
        checks += 1
        print(f"ok: {label}")

    # machines, configurations, projection
    req = splv.load_machine(str(models / "doorlock" / "req_dl.fsmv"))
    des = splv.load_machine(str(models / "doorlock" / "des_dl.fsmv"))
    ok(req.name == "ReqDoorLock", "requirement model loads")
    ok(len(req.valid_configs()) == 6, "requirement admits six configurations")
    ok(len(des.valid_configs()) == 4, "design admits four calibration variants")

    variant = des.project({"Cp1": "Moff", "Cp2": "Speed"})
    ref = req.project(
        {"DL_Enable": "Enable", "Transmission_dl": "Manual", "DL_User_Pref": "Speed"}
    )
    holds, cex = splv.contains(variant, ref)
    ok(holds and cex is None, "manual/speed design variant is contained")
    words = variant.bounded_language(2)
    ok(["DoorsClosed"] in words and [] in words, "bounded language looks right")

    # per-feature conformance, fixed and defective designs
    mapping = splv.compute_conformance(des, req)
    ok(mapping.conforms(), "fixed design conforms")
    buggy = splv.load_machine(str(models / "doorlock" / "des_dl_bug.fsmv"))
    bad = splv.compute_conformance(buggy, req)
    ok(not bad.conforms(), "defective design does not conform")
    ok(
        bad.failing() == [{"Cp1": "Auto", "Cp2": "Poff"}],
        "exactly the documented calibration fails",
    )
    ok("<Cp1=Auto,Cp2=Poff> -> {  }" in bad.table(), "mapping table shows the empty image")

    # promela export
    pml = splv.emit_promela(buggy, req)
    ok("never {" in pml and "proctype Design()" in pml, "promela export has its parts")

    # whole-SPL checks
    verdict = splv.check_spl(str(models / "ecpl" / "ecpl-dl-du.spl"))
    ok(not verdict["conforms"], "unconstrained design side does not conform")
    ok("DoorUnlock.Cp4=Poff" in verdict["witness"], "witness names the incompatible composite")
    verdict = splv.check_spl(str(models / "ecpl" / "ecpl-dl-du-fixed.spl"), mode="enumerate")
    ok(verdict["conforms"], "constrained design side conforms (enumerate mode)")

    # formula export
    text = splv.export_qbf(str(models / "ecpl" / "ecpl-dl-du.spl"))
    ok(text.splitlines()[1].startswith("p cnf"), "qdimacs export is well-formed")
    ok("forall(" in splv.export_qbf(str(models / "ecpl" / "ecpl-dl-du.spl"), format="qcir"),
       "qcir export is well-formed")

    # composition + shuffle oracle
    composed = splv.compose(req.qualify("DL"), splv.load_machine(
        str(models / "ecpl" / "req_du.fsmv")).qualify("DU"),
        "DL.Transmission_dl = DU.Transmission_du")
    ok(len(composed.valid_configs()) > 0, "composition has valid configurations")

    shuffled = splv.shuffle_words(
        [list("abcf"), list("adfe"), list("dcf")],
        [list("abcf"), list("adef"), list("cdf")],
    )
    ok(list("abdcfe") in shuffled, "shuffle membership example")
    ok(list("aebcfd") not in shuffled, "shuffle non-membership example")

    # generation round trip
    with tempfile.TemporaryDirectory() as tmp:
        manifest = splv.generate_spl(tmp, 3, seed=11)
        verdict = splv.check_spl(manifest, mode="monolithic")
        ok(verdict["conforms"], "generated SPL conforms by construction")

    print(f"\nsmoke test passed: {checks} checks")


if __name__ == "__main__":
    main()
