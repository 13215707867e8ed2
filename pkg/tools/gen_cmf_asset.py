#!/usr/bin/env python3
"""Regenerate the shipped 1 nm color-matching-function table.

The table is reconstructed from the package's Gaussian observer
approximations (authoritative 1 nm tables cannot be redistributed from
this build environment).  Run from the repository root:

    PYTHONPATH=src python3 tools/gen_cmf_asset.py
"""

import numpy as np

from fluoro.data import XBAR_LOBE_1, XBAR_LOBE_2, YBAR, ZBAR

OUT = "src/fluoro/data/cmf_2deg_1nm.csv"


def main():
    lam = np.arange(300.0, 801.0, 1.0)
    x = XBAR_LOBE_1(lam) + XBAR_LOBE_2(lam)
    y = YBAR(lam)
    z = ZBAR(lam)
    with open(OUT, "w", newline="\n", encoding="utf-8") as f:
        f.write("wavelength_nm,xbar,ybar,zbar\n")
        for row in zip(lam, x, y, z):
            f.write("%g,%.9g,%.9g,%.9g\n" % row)
    print(f"wrote {OUT} ({len(lam)} rows)")


if __name__ == "__main__":
    main()
