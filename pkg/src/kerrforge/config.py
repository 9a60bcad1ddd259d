"""Flat key = value run configuration.

The sign conventions of the construction are delicate, so kappa, B and m
have no defaults: every run states them explicitly.  Exactly one potential
source must be configured:

    potential = series         with coeff-file = <path>, radius = <r_o>
    potential = holomorphic    with coeff-file = <path> (lines n Re Im)
    potential = boundary-file  with boundary-file = <path> (solved on load)
    potential = grid-file      with grid-file = <path>

The sample source is one of `points = x,y,v,r; ...`, `lattice = lo:hi:n, ...`
(four ranges), or `samples = <count>` with `seed = <int>`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .disksolve import SolveGrid, fd_elliptic_solve
from .errors import ConfigError
from .potentials import (
    GridPotential,
    HolomorphicPotential,
    read_boundary_file,
    read_coefficient_file,
    series_from_coefficients,
)

_POTENTIAL_MODES = ("series", "holomorphic", "boundary-file", "grid-file")


def parse_config_text(text, base_dir="."):
    raw = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, val = line.split("=", 1)
        key = key.strip()
        if key in raw:
            raise ConfigError(f"line {lineno}: duplicate key '{key}'")
        raw[key] = val.strip()
    return RunConfig(raw=raw, base_dir=base_dir)


def load_config(path):
    import os

    with open(path) as fh:
        return parse_config_text(fh.read(), base_dir=os.path.dirname(os.path.abspath(path)))


@dataclass
class RunConfig:
    raw: dict
    base_dir: str = "."
    _potential: object = field(default=None, repr=False)

    # -- typed accessors ------------------------------------------------

    def _req(self, key):
        if key not in self.raw:
            raise ConfigError(f"missing required key '{key}'")
        return self.raw[key]

    def _float(self, key, default=None):
        if key not in self.raw:
            if default is None:
                raise ConfigError(f"missing required key '{key}'")
            return default
        try:
            return float(self.raw[key])
        except ValueError:
            raise ConfigError(f"key '{key}' is not a number: {self.raw[key]!r}") from None

    def _int(self, key, default=None):
        if key not in self.raw:
            if default is None:
                raise ConfigError(f"missing required key '{key}'")
            return default
        try:
            return int(self.raw[key])
        except ValueError:
            raise ConfigError(f"key '{key}' is not an integer: {self.raw[key]!r}") from None

    def _path(self, key):
        import os

        p = self._req(key)
        return p if os.path.isabs(p) else os.path.join(self.base_dir, p)

    @property
    def kappa(self):
        k = self._int("kappa")
        if k not in (1, -1):
            raise ConfigError("kappa must be +1 or -1")
        return k

    @property
    def B(self):
        b = self._float("B")
        if b == 0.0:
            raise ConfigError("B must be nonzero")
        return b

    @property
    def m(self):
        return self._float("m")

    def k_values(self):
        """Deformation constant(s): a number, or both signs for 'scan'."""
        raw = self.raw.get("k", "scan")
        if raw == "scan":
            return [2.0, -2.0]
        try:
            return [float(raw)]
        except ValueError:
            raise ConfigError(f"k must be a number or 'scan': {raw!r}") from None

    @property
    def tol(self):
        t = self._float("tol", 1e-6)
        if t <= 0:
            raise ConfigError("tolerances must be positive")
        return t

    @property
    def fd_step(self):
        h = self._float("fd-step", 1e-3)
        if h <= 0:
            raise ConfigError("fd-step must be positive")
        return h

    @property
    def seed(self):
        return self._int("seed", 0)

    @property
    def sample_count(self):
        return self._int("samples", 64)

    # -- potential ------------------------------------------------------

    def potential(self):
        if self._potential is not None:
            return self._potential
        mode = self._req("potential")
        if mode not in _POTENTIAL_MODES:
            raise ConfigError(f"unknown potential mode {mode!r}")
        present = [k for k in ("coeff-file", "boundary-file", "grid-file") if k in self.raw]
        expected = {"series": "coeff-file", "holomorphic": "coeff-file",
                    "boundary-file": "boundary-file", "grid-file": "grid-file"}[mode]
        if present != [expected]:
            raise ConfigError(
                f"potential mode {mode!r} requires exactly the key '{expected}' "
                f"(found {present or 'none'})"
            )
        kappa = self.kappa
        if mode == "series":
            table = read_coefficient_file(self._path("coeff-file"))
            pot = series_from_coefficients(kappa, self._float("radius"), table)
        elif mode == "holomorphic":
            table = read_coefficient_file(self._path("coeff-file"))
            n_max = max(table)
            coeffs = [complex(*table.get(n, (0.0, 0.0))) for n in range(n_max + 1)]
            pot = HolomorphicPotential(kappa, coeffs, radius=self._float("radius", 0.95))
        elif mode == "boundary-file":
            w, vals = read_boundary_file(self._path("boundary-file"))
            grid = fd_elliptic_solve(kappa, (w, vals),
                                     (self._int("n-r", 64), self._int("n-theta", 128)),
                                     radius=self._float("radius", 0.5))
            pot = GridPotential(grid)
        else:
            pot = GridPotential(SolveGrid.load(self._path("grid-file")))
        self._potential = pot
        return pot

    # -- sample source ------------------------------------------------------

    def explicit_points(self):
        """Points from 'points' or 'lattice' keys, or None for count+seed."""
        if "points" in self.raw and "lattice" in self.raw:
            raise ConfigError("give either 'points' or 'lattice', not both")
        if "points" in self.raw:
            pts = []
            for chunk in self.raw["points"].split(";"):
                chunk = chunk.strip()
                if not chunk:
                    continue
                vals = [float(t) for t in chunk.split(",")]
                if len(vals) != 4:
                    raise ConfigError("each point needs four coordinates")
                pts.append(vals)
            if not pts:
                raise ConfigError("'points' is empty")
            return np.asarray(pts)
        if "lattice" in self.raw:
            specs = [s.strip() for s in self.raw["lattice"].split(",")]
            if len(specs) != 4:
                raise ConfigError("'lattice' needs four lo:hi:n ranges")
            axes = []
            for s in specs:
                try:
                    lo, hi, n = s.split(":")
                    axes.append(np.linspace(float(lo), float(hi), max(1, int(n))))
                except ValueError:
                    raise ConfigError(f"bad lattice range {s!r}") from None
            grid = np.meshgrid(*axes, indexing="ij")
            return np.stack([g.ravel() for g in grid], axis=-1)
        return None
