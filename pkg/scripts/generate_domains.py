#!/usr/bin/env python3
"""Regenerate the shipped example-domain corpus in domains/."""

import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from plapbounds import shapes
from plapbounds.cli import save_domain_file


def main(out_dir: str = "domains") -> None:
    os.makedirs(out_dir, exist_ok=True)

    def put(fname, name, p, domain, d=2):
        save_domain_file(os.path.join(out_dir, fname), name, p, domain, d)
        print("wrote", fname)

    put("square-dirichlet.domain", "unit square, all Dirichlet", 2.0, shapes.square())
    put("square-neumann-west.domain", "unit square, Neumann on x=0", 2.0,
        shapes.square_neumann_west())
    put("square-neumann-all.domain", "unit square, pure Neumann", 2.0,
        shapes.square(labels=["N"] * 4))
    put("rect2x1-neumann-west.domain", "2x1 rectangle, Neumann on the short side x=0",
        2.0, shapes.rectangle(2.0, 1.0, labels=["D", "D", "D", "N"]))
    put("disk256.domain", "unit disk (256-gon, analytic normals), all Dirichlet",
        2.0, shapes.regular_polygon_disk(256))
    put("disk256-half-neumann.domain",
        "unit disk (256-gon), Dirichlet east half, Neumann west half", 2.0,
        shapes.disk_half_neumann(256))
    put("annulus-keyhole.domain",
        "slit annulus 0.5..1, Neumann inner and slit, Dirichlet outer", 2.0,
        shapes.annulus_keyhole())
    put("quarter-annulus-nin-p15.domain",
        "quarter annulus 1..2, Neumann inner arc, p=1.5", 1.5,
        shapes.quarter_annulus(1.0, 2.0, 64, "inner"))
    put("quarter-annulus-nout-p3.domain",
        "quarter annulus 1..2, Neumann outer arc, p=3", 3.0,
        shapes.quarter_annulus(1.0, 2.0, 64, "outer"))
    put("lshape-dirichlet.domain", "L-shaped domain, all Dirichlet", 2.0,
        shapes.lshape())


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "domains")
