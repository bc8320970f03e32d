"""Scenario files: ``key = value`` sections describing a family and a run.

Example::

    [scenario]
    name = rotating-square
    stages = continuity_audit, lsc_ext_audit, track, select, build_cover,
             verify_delta_selection

    [family]
    kind = rotation
    vertices = 0 0; 1 0; 1 1; 0 1
    domain = 0 1
    rate = 1.5707963267948966

    [selection]
    x_ref = 0.5 0.5
    eps = 0.1

    [measures]
    gamma = 0.1
    delta = 0.05

Family kinds and their keys:

* ``constant``: vertices
* ``affine``: vertices, ``A0, A1, ...`` (rows separated by ``;``),
  ``b0, b1, ...``
* ``rotation``: vertices, rate, center
* ``vertex_interpolation``: breakpoints, ``points.0, points.1, ...``

Every family accepts ``domain`` and an optional ``lipschitz`` override.
"""
import configparser
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .exceptions import InputError
from .parametric import (affine_family, constant_family, rotation_family,
                         vertex_interpolation)

STAGES = ("continuity_audit", "lsc_ext_audit", "track", "select",
          "build_cover", "verify_delta_selection")
FAMILY_KINDS = ("constant", "affine", "rotation", "vertex_interpolation")


class ConfigError(InputError):
    """Invalid scenario file; the message starts with ``path:line:``."""


@dataclass
class Scenario:
    name: str
    source: str
    stages: list[str]
    family_kind: str
    family: object = field(repr=False)
    family_params: dict = field(repr=False)
    domain: tuple[float, float]
    lipschitz: float | None
    x_ref: np.ndarray
    eps: float
    gamma: float
    delta: float
    N: int
    seed: int
    family_size: int
    ext_tol: float
    audit_points: int
    cover_points: int
    track_points: int
    track_vertex: np.ndarray | None
    continuity_tol: float
    lsc_tol_slope: float | None

    def resolved(self):
        """Ordered ``(section, key, value)`` triples with every default."""
        fmt = lambda v: " ".join(f"{x:.17g}" for x in np.atleast_1d(v))
        items = [
            ("scenario", "name", self.name),
            ("scenario", "stages", ", ".join(self.stages)),
            ("family", "kind", self.family_kind),
            ("family", "domain", fmt(self.domain)),
            ("family", "lipschitz",
             "none" if self.lipschitz is None else f"{self.lipschitz:.17g}"),
        ]
        for k, v in self.family_params.items():
            items.append(("family", k, v))
        items += [
            ("selection", "x_ref", fmt(self.x_ref)),
            ("selection", "eps", f"{self.eps:.17g}"),
            ("measures", "gamma", f"{self.gamma:.17g}"),
            ("measures", "delta", f"{self.delta:.17g}"),
            ("measures", "N", str(self.N)),
            ("measures", "truncation_bound", f"{2.0 ** (1 - self.N):.17g}"),
            ("measures", "seed", str(self.seed)),
            ("measures", "family_size", str(self.family_size)),
            ("measures", "ext_tol", f"{self.ext_tol:.17g}"),
            ("grids", "audit_points", str(self.audit_points)),
            ("grids", "cover_points", str(self.cover_points)),
            ("grids", "track_points", str(self.track_points)),
            ("grids", "track_vertex", "auto" if self.track_vertex is None
             else fmt(self.track_vertex)),
            ("tolerances", "continuity_tol", f"{self.continuity_tol:.17g}"),
            ("tolerances", "lsc_tol_slope", "none" if self.lsc_tol_slope is None
             else f"{self.lsc_tol_slope:.17g}"),
        ]
        return items


def bundled_scenarios():
    root = resources.files("contchoquet") / "scenarios"
    return sorted(p.name[:-4] for p in root.iterdir() if p.name.endswith(".ini"))


def locate(name_or_path):
    """Path of a scenario file, accepting bundled scenario names."""
    path = Path(name_or_path)
    if path.exists():
        return path
    bundled = resources.files("contchoquet") / "scenarios" / f"{name_or_path}.ini"
    if bundled.is_file():
        return Path(str(bundled))
    raise ConfigError(f"{name_or_path}:0: no such scenario file or bundled "
                      f"scenario (bundled: {', '.join(bundled_scenarios())})")


class _Reader:
    """configparser wrapper that reports the source line of each key."""

    def __init__(self, path):
        self.path = str(path)
        text = Path(path).read_text()
        self.lines = text.splitlines()
        self.parser = configparser.ConfigParser(inline_comment_prefixes=("#",))
        self.parser.optionxform = str
        try:
            self.parser.read_string(text, source=self.path)
        except configparser.Error as exc:
            line = getattr(exc, "lineno", 0)
            raise ConfigError(f"{self.path}:{line}: {exc.message}") from None

    def line_of(self, section, key=None):
        in_section = False
        for i, raw in enumerate(self.lines, 1):
            s = raw.strip()
            if s.startswith("["):
                in_section = s == f"[{section}]"
                if in_section and key is None:
                    return i
            elif in_section and key is not None and re.match(
                    rf"{re.escape(key)}\s*[=:]", s):
                return i
        return 0

    def fail(self, section, key, message):
        where = f"[{section}] {key}" if key else f"[{section}]"
        raise ConfigError(
            f"{self.path}:{self.line_of(section, key)}: {where}: {message}")

    def has(self, section, key):
        return self.parser.has_option(section, key)

    def raw(self, section, key, default=None):
        if self.has(section, key):
            return self.parser.get(section, key)
        if default is None:
            self.fail(section, key, "missing required key")
        return default

    def number(self, section, key, default=None, cast=float, check=None,
               requirement=""):
        value = self.raw(section, key, None if default is None else str(default))
        try:
            out = cast(value)
        except ValueError:
            self.fail(section, key, f"expected a number, got {value!r}")
        if check is not None and not check(out):
            self.fail(section, key, f"{requirement} (got {value})")
        return out

    def vector(self, section, key, default=None):
        value = self.raw(section, key, default)
        try:
            return np.array([float(x) for x in value.split()])
        except ValueError:
            self.fail(section, key, f"expected numbers, got {value!r}")

    def matrix(self, section, key, default=None):
        value = self.raw(section, key, default)
        try:
            rows = [[float(x) for x in r.split()] for r in value.split(";")
                    if r.strip()]
            return np.array(rows, dtype=float)
        except ValueError:
            self.fail(section, key, f"expected rows of numbers, got {value!r}")


def _indexed(reader, section, prefix):
    keys = []
    k = 0
    while reader.has(section, f"{prefix}{k}"):
        keys.append(f"{prefix}{k}")
        k += 1
    return keys


def _build_family(r):
    kind = r.raw("family", "kind")
    if kind not in FAMILY_KINDS:
        r.fail("family", "kind",
               f"unknown family kind {kind!r} (expected one of "
               f"{', '.join(FAMILY_KINDS)})")
    domain = r.vector("family", "domain", "0 1")
    if domain.size != 2 or not domain[0] <= domain[1]:
        r.fail("family", "domain", "expected two increasing numbers")
    domain = tuple(domain)
    params = {}
    try:
        if kind == "vertex_interpolation":
            bps = r.vector("family", "breakpoints")
            keys = _indexed(r, "family", "points.")
            if len(keys) != bps.size:
                r.fail("family", "breakpoints",
                       f"{bps.size} breakpoints but {len(keys)} points.k keys")
            sets = [r.matrix("family", k) for k in keys]
            if len({s.shape for s in sets}) != 1:
                r.fail("family", keys[0], "point sets differ in shape")
            F = vertex_interpolation(bps, sets)
            params["breakpoints"] = r.raw("family", "breakpoints")
            for k in keys:
                params[k] = r.raw("family", k)
            domain = F.domain
        else:
            V = r.matrix("family", "vertices")
            params["vertices"] = r.raw("family", "vertices")
            if kind == "constant":
                F = constant_family(V, domain)
            elif kind == "rotation":
                rate = r.number("family", "rate", np.pi / 2)
                center = r.vector("family", "center", "0 0")
                F = rotation_family(V, rate, domain, center)
                params["rate"] = f"{rate:.17g}"
                params["center"] = " ".join(f"{c:.17g}" for c in center)
            else:
                d = V.shape[1]
                A_keys = _indexed(r, "family", "A") or []
                b_keys = _indexed(r, "family", "b") or []
                A = [r.matrix("family", k) for k in A_keys] or [np.eye(d)]
                b = [r.vector("family", k) for k in b_keys] or [np.zeros(d)]
                for k, a in zip(A_keys, A):
                    if a.shape != (d, d):
                        r.fail("family", k, f"expected a {d}x{d} matrix")
                for k, v in zip(b_keys, b):
                    if v.shape != (d,):
                        r.fail("family", k, f"expected {d} numbers")
                F = affine_family(V, A, b, domain)
                params.update({k: r.raw("family", k) for k in A_keys + b_keys})
    except InputError as exc:
        if isinstance(exc, ConfigError):
            raise
        r.fail("family", None, str(exc))
    if r.has("family", "lipschitz"):
        lip = r.number("family", "lipschitz", check=lambda v: v >= 0,
                       requirement="must be >= 0")
        F = type(F)(F.evaluator, F.domain, F.dim, lip, F.kind, F.params)
    return kind, F, params


def load_scenario(name_or_path, seed=None):
    """Parse and validate a scenario file (or bundled scenario name)."""
    path = locate(name_or_path)
    r = _Reader(path)
    if not r.parser.has_section("family"):
        raise ConfigError(f"{path}:0: missing [family] section")
    name = r.raw("scenario", "name", path.stem) if r.parser.has_section(
        "scenario") else path.stem
    stages_raw = (r.raw("scenario", "stages", ", ".join(STAGES))
                  if r.parser.has_section("scenario") else ", ".join(STAGES))
    stages = [s.strip() for s in stages_raw.replace("\n", " ").split(",")
              if s.strip()]
    for s in stages:
        if s not in STAGES:
            r.fail("scenario", "stages", f"unknown stage {s!r}")
    if "verify_delta_selection" in stages and "build_cover" not in stages:
        r.fail("scenario", "stages", "verify_delta_selection needs build_cover")
    kind, F, params = _build_family(r)
    pos = dict(check=lambda v: v > 0, requirement="must be > 0")
    gamma = r.number("measures", "gamma", 0.1, **pos)
    delta = r.number("measures", "delta", 0.1, **pos)
    N = r.number("measures", "N", 40, cast=int, check=lambda v: v >= 1,
                 requirement="must be >= 1")
    if not 2.0 ** -N < delta / 4:
        r.fail("measures", "N", f"need 2**-N < delta/4 = {delta / 4:.3g}")
    family_size = r.number("measures", "family_size", max(64, N), cast=int,
                           check=lambda v: v >= N, requirement="must be >= N")
    scen_seed = r.number("measures", "seed", 0, cast=int)
    x_ref_default = " ".join(
        f"{c:.17g}" for c in F.evaluator(F.domain[0]).vertices.mean(axis=0))
    x_ref = r.vector("selection", "x_ref", x_ref_default)
    if x_ref.size != F.dim:
        r.fail("selection", "x_ref", f"expected {F.dim} coordinates")
    track_vertex = None
    if r.has("grids", "track_vertex"):
        track_vertex = r.vector("grids", "track_vertex")
        if track_vertex.size != F.dim:
            r.fail("grids", "track_vertex", f"expected {F.dim} coordinates")
    lsc_default = None if F.lipschitz is None else F.lipschitz + 0.1
    lsc = (r.number("tolerances", "lsc_tol_slope", check=lambda v: v >= 0,
                    requirement="must be >= 0")
           if r.has("tolerances", "lsc_tol_slope") else lsc_default)
    if "lsc_ext_audit" in stages and lsc is None:
        r.fail("tolerances", "lsc_tol_slope",
               "required when the family declares no Lipschitz bound")
    grid_n = dict(cast=int, check=lambda v: v >= 2, requirement="must be >= 2")
    return Scenario(
        name=name, source=str(path), stages=stages, family_kind=kind,
        family=F, family_params=params, domain=F.domain,
        lipschitz=F.lipschitz, x_ref=x_ref,
        eps=r.number("selection", "eps", 0.1, **pos),
        gamma=gamma, delta=delta, N=N,
        seed=scen_seed if seed is None else int(seed),
        family_size=family_size,
        ext_tol=r.number("measures", "ext_tol", 1e-9, check=lambda v: v >= 0,
                         requirement="must be >= 0"),
        audit_points=r.number("grids", "audit_points", 1001, **grid_n),
        cover_points=r.number("grids", "cover_points", 11, **grid_n),
        track_points=r.number("grids", "track_points", 100, cast=int,
                              check=lambda v: v >= 1,
                              requirement="must be >= 1"),
        track_vertex=track_vertex,
        continuity_tol=r.number("tolerances", "continuity_tol", 1e-9,
                                check=lambda v: v >= 0,
                                requirement="must be >= 0"),
        lsc_tol_slope=lsc,
    )
