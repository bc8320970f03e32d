"""Finitely supported probability measures and the weak* metric on them."""
import configparser
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .exceptions import InputError
from .geometry import Polytope, _as_point, contains, sphere_directions

WEIGHT_SUM_TOL = 1e-12
NEGLIGIBLE_WEIGHT = 1e-15
DEFAULT_TRUNCATION = 40


@dataclass(frozen=True, eq=False)
class DiscreteMeasure:
    """``sum_i weights[i] * delta(atoms[i])``.

    Weights must be nonnegative and sum to one within 1e-12.
    """

    atoms: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        atoms = np.array(self.atoms, dtype=float)
        if atoms.ndim == 1:
            atoms = atoms.reshape(1, -1)
        weights = np.array(self.weights, dtype=float).ravel()
        if atoms.ndim != 2 or atoms.shape[0] == 0:
            raise InputError("a measure needs at least one atom")
        if atoms.shape[0] != weights.size:
            raise InputError(f"{atoms.shape[0]} atoms but {weights.size} weights")
        if not (np.isfinite(atoms).all() and np.isfinite(weights).all()):
            raise InputError("atoms and weights must be finite")
        if (weights < 0).any():
            raise InputError("weights must be nonnegative")
        if abs(weights.sum() - 1.0) > WEIGHT_SUM_TOL:
            raise InputError(f"weights sum to {weights.sum()!r}, not 1")
        atoms.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "weights", weights)

    @property
    def dim(self):
        return self.atoms.shape[1]

    def __len__(self):
        return self.weights.size

    def __repr__(self):
        return (f"DiscreteMeasure(atoms={self.atoms.tolist()!r}, "
                f"weights={self.weights.tolist()!r})")


def dirac(x):
    return DiscreteMeasure(_as_point(x).reshape(1, -1), [1.0])


def mixture(measures, coefficients):
    """Convex combination ``sum_k coefficients[k] * measures[k]``.

    Atoms are concatenated, not merged; zero coefficients are skipped.
    """
    coefficients = np.asarray(coefficients, dtype=float)
    if (coefficients < 0).any() or not np.isclose(coefficients.sum(), 1.0,
                                                  rtol=0, atol=1e-12):
        raise InputError("mixture coefficients must be a probability vector")
    parts = [(c, m) for c, m in zip(coefficients, measures) if c > 0]
    atoms = np.vstack([m.atoms for _, m in parts])
    weights = np.concatenate([c * m.weights for c, m in parts])
    return DiscreteMeasure(atoms, weights / weights.sum())


def integrate(mu, g):
    """``sum_i lambda_i g(a_i)`` for a scalar function ``g`` of one point."""
    return float(sum(w * g(a) for a, w in zip(mu.atoms, mu.weights)))


def barycenter(mu):
    return mu.weights @ mu.atoms


def representation_gap(mu, x):
    """``sup_{|f| <= 1} |f(x) - int f dmu|``, i.e. ``|x - barycenter(mu)|``."""
    return float(np.linalg.norm(_as_point(x, mu.dim) - barycenter(mu)))


def sampled_representation_gap(mu, x, n_dirs=10_000, seed=0):
    """Same supremum estimated over sampled unit functionals.

    Evaluates ``|<f, x> - int <f, .> dmu|`` for each direction by direct
    summation over atoms, without forming the barycenter.
    """
    x = _as_point(x, mu.dim)
    F = sphere_directions(mu.dim, n_dirs, seed)
    integrals = (mu.atoms @ F.T).T @ mu.weights
    return float(np.abs(F @ x - integrals).max())


def gamma_represents(mu, x, gamma):
    """Strict test ``|x - barycenter(mu)| < gamma``; ties return False."""
    if not gamma > 0:
        raise InputError(f"gamma must be positive, got {gamma}")
    return representation_gap(mu, x) < gamma


@dataclass(frozen=True)
class TestFunctionFamily:
    """Fixed family ``zeta_j(x) = cos(<w_j, x> + b_j)``, ``j = 1..count``.

    ``w_j`` is standard normal in R^dim and ``b_j`` uniform on [0, 2 pi),
    both drawn from ``numpy.random.default_rng(seed)``.
    """

    __test__ = False  # keep pytest from collecting this class

    seed: int
    dim: int
    count: int = 64

    @cached_property
    def _params(self):
        rng = np.random.default_rng(self.seed)
        W = rng.standard_normal((self.count, self.dim))
        b = rng.uniform(0.0, 2.0 * np.pi, self.count)
        return W, b

    @property
    def frequencies(self):
        return self._params[0]

    @property
    def phases(self):
        return self._params[1]

    def __call__(self, x, N=None):
        """Values ``zeta_1..zeta_N`` at points ``x`` (shape (d,) or (n, d))."""
        W, b = self._params
        N = self.count if N is None else N
        return np.cos(np.asarray(x, dtype=float) @ W[:N].T + b[:N])

    def member(self, j):
        """The single function ``zeta_j`` (1-based)."""
        w, b = self.frequencies[j - 1], self.phases[j - 1]
        return lambda x: float(np.cos(np.dot(w, x) + b))


def function_means(mu, fam, N):
    """Vector ``(int zeta_j dmu)_{j=1..N}``."""
    return mu.weights @ fam(mu.atoms, N)


def weak_star_distance(mu1, mu2, fam, N=DEFAULT_TRUNCATION):
    """Truncated series ``sum_{j<=N} 2^-j |int zeta_j d(mu1 - mu2)|``.

    Omitted tail is at most ``2^(1-N)`` because ``|zeta_j| <= 1``.
    """
    if N < 1:
        raise InputError(f"N must be at least 1, got {N}")
    if N > fam.count:
        raise InputError(f"family has only {fam.count} members, N={N}")
    if mu1.dim != mu2.dim or mu1.dim != fam.dim:
        raise InputError("dimension mismatch between measures and family")
    diff = function_means(mu1, fam, N) - function_means(mu2, fam, N)
    return float(np.abs(diff) @ (0.5 ** np.arange(1, N + 1)))


def supported_on_extremes(mu, P, tol=0.0):
    """Every atom of non-negligible weight lies within ``tol`` of a vertex."""
    if tol < 0:
        raise InputError(f"tolerance must be nonnegative, got {tol}")
    atoms = mu.atoms[mu.weights > NEGLIGIBLE_WEIGHT]
    d = np.sqrt(((atoms[:, None, :] - P.vertices[None, :, :]) ** 2).sum(-1))
    return bool((d.min(axis=1) <= tol).all())


@dataclass(frozen=True, eq=False)
class RepresentingMeasureConstraint:
    """Membership data for the set ``L``: body, target point, gamma."""

    body: Polytope
    target: np.ndarray
    gamma: float
    ext_tolerance: float = 1e-9

    def __post_init__(self):
        target = _as_point(self.target, self.body.dim)
        if not self.gamma > 0:
            raise InputError(f"gamma must be positive, got {self.gamma}")
        if self.ext_tolerance < 0:
            raise InputError("ext_tolerance must be nonnegative")
        if not contains(self.body, target, 1e-9):
            raise InputError("target lies outside the body")
        target.setflags(write=False)
        object.__setattr__(self, "target", target)


def in_L(mu, c):
    """Both membership clauses: support on vertices and gamma-representation."""
    return (supported_on_extremes(mu, c.body, c.ext_tolerance)
            and gamma_represents(mu, c.target, c.gamma))


def to_record(mu):
    """Serialize to a ``key = value`` text record (17 significant digits)."""
    fmt = lambda values: " ".join(f"{v:.17g}" for v in values)
    lines = ["[measure]", f"dimension = {mu.dim}", f"atoms = {len(mu)}",
             f"weights = {fmt(mu.weights)}"]
    lines += [f"atom.{i} = {fmt(a)}" for i, a in enumerate(mu.atoms)]
    return "\n".join(lines) + "\n"


def from_record(text):
    parser = configparser.ConfigParser()
    parser.read_string(text)
    sec = parser["measure"]
    n, d = int(sec["atoms"]), int(sec["dimension"])
    weights = [float(v) for v in sec["weights"].split()]
    atoms = np.array([[float(v) for v in sec[f"atom.{i}"].split()]
                      for i in range(n)]).reshape(n, d)
    return DiscreteMeasure(atoms, weights)
