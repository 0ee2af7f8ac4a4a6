"""Regenerate the bundled newform coefficient files with PARI/GP.

Writes q-series v1 files for every rational newform on Gamma0(L), L <= 12,
even weight k <= 12, except the (L, k) spaces already covered by the
built-in eta-product catalog. Requires cypari2 (e.g. `pip install passagemath-pari`).
"""
import os
import sys

import cypari2

BUILTIN = {(1, 12), (2, 8), (3, 6), (4, 6), (5, 4), (6, 4), (11, 2)}
PREC = 1001

pari = cypari2.Pari()
out = sys.argv[1] if len(sys.argv) > 1 else "crates/core/data/newforms"
os.makedirs(out, exist_ok=True)
for level in range(1, 13):
    for weight in range(2, 13, 2):
        if (level, weight) in BUILTIN:
            continue
        mf = pari(f"mfinit([{level},{weight}],0)")
        if pari.mfdim(mf) == 0:
            continue
        forms = pari.mfeigenbasis(mf)
        fields = pari.mffields(mf)
        label = 0
        for f, field in zip(forms, fields):
            if pari.poldegree(field) > 1:
                continue
            coeffs = pari.mfcoefs(f, PREC - 1)
            name = chr(ord("a") + label)
            label += 1
            path = os.path.join(out, f"{level}.{weight}.{name}.qs")
            with open(path, "w") as fh:
                fh.write("# qseries v1\n")
                fh.write("conductor: 1\n")
                fh.write(f"precision: {PREC}\n")
                fh.write(f"level: {level}\n")
                fh.write(f"weight: {weight}\n")
                fh.write(f"label: {name}\n")
                for n, c in enumerate(coeffs):
                    if c != 0:
                        fh.write(f"{n}: {c}\n")
