#!/usr/bin/env python3
"""End-to-end checks for the gmps command-line tool.

Drives the built binary against generated spec files and asserts the
documented exit codes, file formats, and cross-mode agreements.
"""

import json
import math
import os
import subprocess
import sys
import tempfile
from pathlib import Path

import numpy as np

PASS = 0
FAIL = 0


def check(name, condition):
    global PASS, FAIL
    if condition:
        PASS += 1
        print(f"[ok] {name}")
    else:
        FAIL += 1
        print(f"[FAIL] {name}")


def run(cli, *args, **kwargs):
    return subprocess.run([cli, *args], capture_output=True, text=True, **kwargs)


def covmat_json(entries):
    n = len(entries) // 2
    flat = [entries[i][j] for i in range(2 * n) for j in range(2 * n)]
    return {"n_modes": n, "ordering": "interleaved", "entries": flat}


def teleport_site_map(s):
    """Pure 2 -> 1 site map: TMS(s) between port A and the output, vacuum on B."""
    c, sh = math.cosh(2 * s), math.sinh(2 * s)
    m = [[0.0] * 6 for _ in range(6)]
    for i in range(6):
        m[i][i] = 1.0
    # A = mode 0, B = mode 1, C = mode 2; TMS on (A, C)
    m[0][0] = m[1][1] = m[4][4] = m[5][5] = c
    m[0][4] = m[4][0] = sh
    m[1][5] = m[5][1] = -sh
    return m


def interleave(blocked):
    """Blocked (Q1..Qn, P1..Pn) -> interleaved (Q1, P1, ...)."""
    n = blocked.shape[0] // 2
    perm = np.empty(2 * n, dtype=int)
    perm[0::2] = np.arange(n)
    perm[1::2] = np.arange(n) + n
    return blocked[np.ix_(perm, perm)]


def random_orthogonal_symplectic(n, rng):
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    q = q @ np.diag(np.diag(r) / np.abs(np.diag(r)))
    return np.block([[q.real, -q.imag], [q.imag, q.real]])


def random_site_map(n_modes, rng):
    """Pure CM S S^T from an Euler-form random symplectic (interleaved)."""
    squeeze = np.concatenate([np.exp(rng.uniform(-0.6, 0.6, n_modes))] * 1)
    d = np.diag(np.concatenate([squeeze, 1.0 / squeeze]))
    s = random_orthogonal_symplectic(n_modes, rng) @ d @ random_orthogonal_symplectic(n_modes, rng)
    s = interleave(s)
    return (s @ s.T).tolist()


def uniform_spec(site_cm, n, boundary="periodic"):
    return {
        "M": 1,
        "boundary": boundary,
        "sites": {
            "uniform": {
                "n_in": 2,
                "n_out": 1,
                "cm": covmat_json(site_cm),
                "pure": True,
                "regularized": False,
            },
            "N": n,
        },
    }


def parse_csv(text):
    meta, rows = {}, []
    for line in text.splitlines():
        if line.startswith("#"):
            key, _, value = line[2:].partition("=")
            meta[key] = value
        elif line and not line.startswith("n,"):
            parts = line.split(",")
            rows.append((int(parts[0]), *map(float, parts[1:])))
    return meta, rows


def main():
    cli = sys.argv[1]
    tmp = Path(tempfile.mkdtemp(prefix="gmps_cli_"))

    rng = np.random.default_rng(20240811)
    spec_path = tmp / "spec.json"
    spec_path.write_text(json.dumps(uniform_spec(random_site_map(3, rng), 8)))

    # build: summary on stdout, CM file written, exit 0
    out_cm = tmp / "chain.json"
    r = run(cli, "build", "--spec", str(spec_path), "--out", str(out_cm))
    check("build exits 0", r.returncode == 0)
    summary = json.loads(r.stdout)
    check("build reports valid + pure", summary["valid"] and summary["pure"])
    check("build reports translation invariance", summary["translation_invariant"])
    cm = json.loads(out_cm.read_text())
    check("build output has exact CovMat fields",
          set(cm.keys()) == {"n_modes", "ordering", "entries"})
    check("build output dimensions", cm["n_modes"] == 8 and len(cm["entries"]) == 256)

    # round trip: parse and re-serialize the written file unchanged
    r2 = run(cli, "build", "--spec", str(spec_path), "--out", str(tmp / "chain2.json"))
    check("build is deterministic",
          r2.returncode == 0 and (tmp / "chain2.json").read_text() == out_cm.read_text())

    # open boundary
    r = run(cli, "build", "--spec", str(spec_path), "--boundary", "open",
            "--out", str(tmp / "open.json"))
    check("build open boundary exits 0", r.returncode == 0)

    # --N override of a uniform spec
    r = run(cli, "build", "--spec", str(spec_path), "--N", "6",
            "--out", str(tmp / "n6.json"))
    check("build honors --N", r.returncode == 0
          and json.loads((tmp / "n6.json").read_text())["n_modes"] == 6)
    r = run(cli, "build", "--spec", str(spec_path), "--M", "2",
            "--out", str(tmp / "m2.json"))
    check("wrong --M assertion exits 3", r.returncode == 3)

    # malformed JSON -> exit 2 with line/column diagnostics
    bad = tmp / "bad.json"
    bad.write_text('{\n  "M": 1,\n  "boundary": oops\n}\n')
    r = run(cli, "build", "--spec", str(bad), "--out", str(tmp / "x.json"))
    check("malformed JSON exits 2", r.returncode == 2)
    check("parse error names the line", "line 3" in r.stderr)

    # invalid state -> exit 3
    below_vacuum = [[0.5 if i == j else 0.0 for j in range(6)] for i in range(6)]
    invalid = tmp / "invalid.json"
    invalid.write_text(json.dumps(uniform_spec(below_vacuum, 4)))
    r = run(cli, "build", "--spec", str(invalid), "--out", str(tmp / "y.json"))
    check("invalid state exits 3", r.returncode == 3)

    # unknown key in the spec -> rejected
    loose = json.loads(spec_path.read_text())
    loose["surprise"] = 1
    loose_path = tmp / "loose.json"
    loose_path.write_text(json.dumps(loose))
    r = run(cli, "build", "--spec", str(loose_path), "--out", str(tmp / "z.json"))
    check("unknown spec key exits 3", r.returncode == 3)

    # correlations: CSV with metadata and n_max + 1 rows
    r = run(cli, "correlations", "--spec", str(spec_path), "--n-max", "16")
    check("correlations exits 0", r.returncode == 0)
    meta, rows = parse_csv(r.stdout)
    check("correlations metadata", "L" in meta and "xi" in meta and "z_star" in meta)
    check("correlations row count", len(rows) == 17)

    # finite mode agrees with the infinite chain at short distances
    r_fin = run(cli, "correlations", "--spec", str(spec_path), "--n-max", "16",
                "--finite", "64")
    check("correlations --finite exits 0", r_fin.returncode == 0)
    _, rows_fin = parse_csv(r_fin.stdout)
    worst = max(abs(a[1] - b[1]) + abs(a[2] - b[2]) + abs(a[3] - b[3])
                for a, b in zip(rows, rows_fin))
    check(f"finite vs infinite correlations agree ({worst:.2e})", worst <= 1e-6)

    # corrlength
    r = run(cli, "corrlength", "--spec", str(spec_path))
    check("corrlength exits 0", r.returncode == 0)
    cl = json.loads(r.stdout)
    check("corrlength fields", cl["xi"] > 0 and cl["L"] <= 3)

    # parent-ham
    r = run(cli, "parent-ham", "--spec", str(spec_path))
    check("parent-ham exits 0", r.returncode == 0)
    ph = json.loads(r.stdout)
    check("parent-ham round trip", ph["roundtrip_residual"] <= 1e-10)
    check("parent-ham converse yes", ph["converse"]["status"] == "yes")
    check("parent-ham JSON fields",
          set(ph["hamiltonian"].keys()) == {"p", "q", "r", "range", "couplings"})

    # converse mode on a Hamiltonian whose determinant is not a square
    witness = tmp / "witness.json"
    witness.write_text(json.dumps({"p": [1.25, -1.0], "q": [1.0], "r": [0.0]}))
    r = run(cli, "parent-ham", "--hamiltonian", str(witness))
    check("converse mode exits 0", r.returncode == 0)
    conv = json.loads(r.stdout)["converse"]
    check("converse mode says no with the witness root",
          conv["status"] == "no" and abs(conv["witness_root"][0] - 1.25) < 1e-6)

    # schmidt: the teleport map has a closed-form Schmidt squeezing
    tele_path = tmp / "teleport.json"
    tele_path.write_text(json.dumps(uniform_spec(teleport_site_map(0.6), 8)))
    r = run(cli, "schmidt", "--spec", str(tele_path))
    check("schmidt exits 0", r.returncode == 0)
    sf = json.loads(r.stdout)
    check("schmidt squeezing recovers the bond",
          len(sf["squeezings"]) == 1 and abs(sf["squeezings"][0] - 0.6) < 1e-8)
    check("schmidt reassembly", sf["reassembly_error"] <= 1e-8)

    # reduce-bonds
    reduced_path = tmp / "reduced.json"
    r = run(cli, "reduce-bonds", "--spec", str(spec_path), "--out", str(reduced_path))
    check("reduce-bonds exits 0", r.returncode == 0)
    report = json.loads(r.stdout)
    check("reduce-bonds preserves the state",
          report["max_gamma_hat_deviation"] <= 1e-7)
    reduced = json.loads(reduced_path.read_text())
    check("reduced spec declares bond squeezings", "bond_squeezings" in reduced)
    r = run(cli, "verify", "--spec", str(reduced_path))
    check("reduced spec passes verify", r.returncode == 0)

    # protocol-demo
    r = run(cli, "protocol-demo", "--N", "4")
    check("protocol-demo exits 0", r.returncode == 0)
    demo = json.loads(r.stdout)
    check("protocol-demo report shape",
          len(demo["s_bond"]) == len(demo["error"]) == 5 and "slope" in demo)
    check("protocol-demo errors decrease",
          all(a > b for a, b in zip(demo["error"], demo["error"][1:])))
    check("protocol-demo slope is negative", demo["slope"] < 0)

    # deterministic under GMPS_SEED
    env = dict(os.environ, GMPS_SEED="99")
    a = subprocess.run([cli, "protocol-demo"], capture_output=True, text=True, env=env)
    b = subprocess.run([cli, "protocol-demo"], capture_output=True, text=True, env=env)
    check("protocol-demo honors GMPS_SEED", a.stdout == b.stdout)

    # verify
    r = run(cli, "verify", "--spec", str(spec_path))
    check("verify exits 0 on a good spec", r.returncode == 0)
    report = json.loads(r.stdout)
    check("verify says ok", report["ok"])
    r = run(cli, "verify", "--spec", str(spec_path), "--boundary", "open")
    check("verify accepts open boundaries", r.returncode == 0)

    # flag and command errors -> exit 2
    r = run(cli, "build", "--spec", str(spec_path), "--nonsense")
    check("unknown flag exits 2", r.returncode == 2)
    r = run(cli, "frobnicate")
    check("unknown command exits 2", r.returncode == 2)

    print(f"{PASS}/{PASS + FAIL} CLI checks passed")
    return 1 if FAIL else 0


if __name__ == "__main__":
    sys.exit(main())
