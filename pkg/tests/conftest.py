import pytest

import plapbounds as pb
from plapbounds import shapes


class DomainRepo:
    """Shared domains plus memoized grids and eigensolves (they dominate the
    suite's runtime)."""

    def __init__(self):
        self.domains = {
            "square": shapes.square(),
            "square_nw": shapes.square_neumann_west(),
            "square_nall": shapes.square(labels=["N"] * 4),
            "rect21": shapes.rectangle(2.0, 1.0, labels=["D", "D", "D", "N"]),
            "disk": shapes.regular_polygon_disk(256),
            "disk_half": shapes.disk_half_neumann(256),
            "keyhole": shapes.annulus_keyhole(),
            "quarter_nin": shapes.quarter_annulus(1.0, 2.0, 64, "inner"),
            "quarter_nout": shapes.quarter_annulus(1.0, 2.0, 64, "outer"),
            "lshape": shapes.lshape(),
        }
        self._grids = {}
        self._eigs = {}
        self._rayleigh = {}

    def grid(self, name, h):
        key = (name, h)
        if key not in self._grids:
            self._grids[key] = pb.build_grid(self.domains[name], h)
        return self._grids[key]

    def eig(self, name, h):
        key = (name, h)
        if key not in self._eigs:
            self._eigs[key] = pb.laplace_eigen_p2(self.grid(name, h))
        return self._eigs[key]

    def rayleigh(self, name, p, h):
        key = (name, p, h)
        if key not in self._rayleigh:
            self._rayleigh[key] = pb.rayleigh_minimize_p(self.grid(name, h), p)
        return self._rayleigh[key]


@pytest.fixture(scope="session")
def repo():
    return DomainRepo()


@pytest.fixture(scope="session")
def warm_kernels(repo):
    """Touch every jitted kernel on tiny inputs so compile time never lands
    inside a timed criterion."""
    dom = repo.domains["square"]
    g = repo.grid("square", 1.0 / 16)
    pb.hardy_weight(dom, (0.5, 0.5), 2.0, 16)
    pb.laplace_eigen_p2(g)
    pb.mixed_interval_eigenvalue(2.0, mesh_size=128)
    pb.eccentricity(shapes.regular_polygon_disk(16), 2.0, 2, 16)
    return True
