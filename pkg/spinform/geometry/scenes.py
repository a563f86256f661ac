"""Scenes: a coordinate box, a grid resolution and smooth providers of the Gauss data.

A provider evaluates, at an array of coordinates of shape (..., p):

- ``metric``: g_ij, shape (..., p, p)
- ``second_form``: h^a_ij = ⟨B(∂_i, ∂_j), n_a⟩, shape (..., q, p, p)
- ``normal_connection``: ⟨∇_{∂_k} n_a, n_b⟩, shape (..., p, q, q)

and optionally a reference embedding F with adapted unit normals in ambient coordinates. The
ambient is R^n (n = p + q), the unit sphere in R^{n+1} or the hyperboloid in R^{n,1}; for the
Lorentzian ambient the time coordinate comes last.

Orientation: the frame (∂F(e_1), ..., ∂F(e_p), n_1, ..., n_q[, F]) of every provider with an
embedding has determinant +1, where e_i is the Gram-Schmidt frame of the coordinate fields.
"""

from dataclasses import dataclass, field, replace
from typing import Any, Callable, ClassVar, Dict, Mapping, Optional, Sequence, Tuple, Type

import numpy as np
from numpy.polynomial import polynomial as P

from spinform.clifford.algebra import Signature
from spinform.core.base import PIPELINES, ToleranceGate
from spinform.core.constants import DEFAULT_RESOLUTION, MIN_RESOLUTION
from spinform.core.exceptions import SceneError

AMBIENTS: Dict[str, int] = {"euclidean": 0, "sphere": 1, "hyperbolic": -1}

Domain = Tuple[Tuple[float, float], ...]
ComplexFunction = Callable[[np.ndarray], np.ndarray]


def _diag(*entries: np.ndarray) -> np.ndarray:
    entries_b = np.broadcast_arrays(*[np.asarray(e, dtype=float) for e in entries])
    out = np.zeros(entries_b[0].shape + (len(entries), len(entries)))
    for i, e in enumerate(entries_b):
        out[..., i, i] = e
    return out


def _stack(*components: np.ndarray) -> np.ndarray:
    return np.stack(np.broadcast_arrays(*[np.asarray(c, dtype=float) for c in components]), -1)


# =============================================================================
# Provider base and registry
# =============================================================================


class SceneProvider:
    """Smooth evaluator of a scene's metric, second fundamental form and normal connection.

    Subclasses set ``p``, ``q``, ``ambient``, ``default_domain`` and ``oracle`` and take their
    parameters as keyword arguments.
    """

    name: ClassVar[str] = ""
    p: ClassVar[int] = 2
    q: ClassVar[int] = 1
    ambient: ClassVar[str] = "euclidean"
    default_domain: ClassVar[Domain] = ((-1.0, 1.0), (-1.0, 1.0))
    oracle: ClassVar[str] = ""

    def metric(self, coords: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def second_form(self, coords: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def normal_connection(self, coords: np.ndarray) -> np.ndarray:
        return np.zeros(coords.shape[:-1] + (self.p, self.q, self.q))

    def embedding(self, coords: np.ndarray) -> Optional[np.ndarray]:
        """Reference immersion F, shape (..., m), or None."""
        return None

    def normals(self, coords: np.ndarray) -> Optional[np.ndarray]:
        """Adapted unit normals n_a of the reference immersion, shape (..., q, m), or None."""
        return None

    def holomorphic_data(self) -> Optional[Tuple[ComplexFunction, ComplexFunction]]:
        """Weierstrass pair (h, g) as functions of z = u + iv, or None."""
        return None

    @property
    def has_embedding(self) -> bool:
        return type(self).embedding is not SceneProvider.embedding

    @property
    def parameters(self) -> Dict[str, Any]:
        return {k: v for k, v in vars(self).items() if not k.startswith("_")}


PROVIDERS: Dict[str, Type[SceneProvider]] = {}


def register_provider(cls: Type[SceneProvider]) -> Type[SceneProvider]:
    PROVIDERS[cls.name] = cls
    return cls


def make_provider(name: str, parameters: Optional[Mapping[str, Any]] = None) -> SceneProvider:
    """Instantiate a built-in provider.

    Raises
    ------
    SceneError
        For an unknown provider name or unexpected parameters.
    """
    if name not in PROVIDERS:
        raise SceneError(f"Unknown provider {name!r}; available: {sorted(PROVIDERS)}")
    try:
        return PROVIDERS[name](**dict(parameters or {}))
    except TypeError as exc:
        raise SceneError(f"Bad parameters for provider {name!r}: {exc}") from exc


# =============================================================================
# Euclidean surfaces in R^3
# =============================================================================


@register_provider
class FlatPlane(SceneProvider):
    name = "flat_plane"
    oracle = "identity chart F(u, v) = (u, v, 0)"

    def metric(self, coords: np.ndarray) -> np.ndarray:
        one = np.ones(coords.shape[:-1])
        return _diag(one, one)

    def second_form(self, coords: np.ndarray) -> np.ndarray:
        return np.zeros(coords.shape[:-1] + (1, 2, 2))

    def embedding(self, coords: np.ndarray) -> np.ndarray:
        u, v = coords[..., 0], coords[..., 1]
        return _stack(u, v, 0.0 * u)

    def normals(self, coords: np.ndarray) -> np.ndarray:
        zero = np.zeros(coords.shape[:-1])
        return _stack(zero, zero, zero + 1.0)[..., None, :]


@register_provider
class RoundSphere(SceneProvider):
    """Sphere of radius r in colatitude u and longitude v, outward normal."""

    name = "round_sphere"
    default_domain = ((0.7, 2.4), (-0.8, 0.8))
    oracle = "sphere of radius r"

    def __init__(self, r: float = 1.0) -> None:
        if r <= 0:
            raise SceneError(f"Sphere radius must be positive, got {r}")
        self.r = float(r)

    def metric(self, coords: np.ndarray) -> np.ndarray:
        u = coords[..., 0]
        return _diag(self.r**2 + 0.0 * u, (self.r * np.sin(u)) ** 2)

    def second_form(self, coords: np.ndarray) -> np.ndarray:
        return (-(1.0 / self.r) * self.metric(coords))[..., None, :, :]

    def embedding(self, coords: np.ndarray) -> np.ndarray:
        u, v = coords[..., 0], coords[..., 1]
        return self.r * _stack(np.sin(u) * np.cos(v), np.sin(u) * np.sin(v), np.cos(u))

    def normals(self, coords: np.ndarray) -> np.ndarray:
        return (self.embedding(coords) / self.r)[..., None, :]


@register_provider
class PerturbedSphere(RoundSphere):
    """Unit-sphere metric with B + 0.1 du⊗du ν: violates the Gauss equation."""

    name = "perturbed_sphere"
    oracle = "none (Gauss equation violated)"

    def __init__(self, r: float = 1.0, perturbation: float = 0.1) -> None:
        super().__init__(r)
        self.perturbation = float(perturbation)

    def second_form(self, coords: np.ndarray) -> np.ndarray:
        h = super().second_form(coords).copy()
        h[..., 0, 0, 0] += self.perturbation
        return h

    embedding = SceneProvider.embedding  # type: ignore[assignment]
    normals = SceneProvider.normals  # type: ignore[assignment]


@register_provider
class Cylinder(SceneProvider):
    name = "cylinder"
    oracle = "circular cylinder of radius r"

    def __init__(self, r: float = 1.0) -> None:
        if r <= 0:
            raise SceneError(f"Cylinder radius must be positive, got {r}")
        self.r = float(r)

    def metric(self, coords: np.ndarray) -> np.ndarray:
        one = np.ones(coords.shape[:-1])
        return _diag(self.r**2 * one, one)

    def second_form(self, coords: np.ndarray) -> np.ndarray:
        zero = np.zeros(coords.shape[:-1])
        return _diag(zero - self.r, zero)[..., None, :, :]

    def embedding(self, coords: np.ndarray) -> np.ndarray:
        u, v = coords[..., 0], coords[..., 1]
        return _stack(self.r * np.cos(u), self.r * np.sin(u), v)

    def normals(self, coords: np.ndarray) -> np.ndarray:
        u = coords[..., 0]
        return _stack(np.cos(u), np.sin(u), 0.0 * u)[..., None, :]


@register_provider
class GraphSurface(SceneProvider):
    """Graph of the polynomial f(u, v) = Σ c u^i v^j, upward normal.

    ``coefficients`` is a list of ``[i, j, c]`` triples.
    """

    name = "graph_surface"
    default_domain = ((-0.5, 0.5), (-0.5, 0.5))
    oracle = "polynomial graph (u, v, f(u, v))"

    def __init__(
        self,
        coefficients: Sequence[Sequence[float]] = ((2, 0, 0.3), (0, 2, -0.2), (1, 1, 0.1)),
    ) -> None:
        self.coefficients = [list(c) for c in coefficients]
        if any(len(c) != 3 for c in self.coefficients):
            raise SceneError("Polynomial coefficients must be [i, j, c] triples")
        degree = max([int(max(c[0], c[1])) for c in self.coefficients] + [0])
        C = np.zeros((degree + 1, degree + 1))
        for i, j, c in self.coefficients:
            if i < 0 or j < 0:
                raise SceneError("Polynomial exponents must be non-negative")
            C[int(i), int(j)] += float(c)
        self._C = C

    def _derivative(self, coords: np.ndarray, du: int, dv: int) -> np.ndarray:
        C = P.polyder(P.polyder(self._C, du, axis=0), dv, axis=1)
        return P.polyval2d(coords[..., 0], coords[..., 1], C)

    def _slopes(self, coords: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        fu = self._derivative(coords, 1, 0)
        fv = self._derivative(coords, 0, 1)
        return fu, fv, np.sqrt(1.0 + fu**2 + fv**2)

    def metric(self, coords: np.ndarray) -> np.ndarray:
        fu, fv, _ = self._slopes(coords)
        grad = _stack(fu, fv)
        return np.eye(2) + grad[..., :, None] * grad[..., None, :]

    def second_form(self, coords: np.ndarray) -> np.ndarray:
        _, _, w = self._slopes(coords)
        hess = np.empty(coords.shape[:-1] + (2, 2))
        hess[..., 0, 0] = self._derivative(coords, 2, 0)
        hess[..., 1, 1] = self._derivative(coords, 0, 2)
        hess[..., 0, 1] = hess[..., 1, 0] = self._derivative(coords, 1, 1)
        return (hess / w[..., None, None])[..., None, :, :]

    def embedding(self, coords: np.ndarray) -> np.ndarray:
        return _stack(coords[..., 0], coords[..., 1], self._derivative(coords, 0, 0))

    def normals(self, coords: np.ndarray) -> np.ndarray:
        fu, fv, w = self._slopes(coords)
        return (_stack(-fu, -fv, 0.0 * fu + 1.0) / w[..., None])[..., None, :]


class _WeierstrassSurface(SceneProvider):
    """Minimal surface in conformal coordinates z = u + iv with closed-form data."""

    default_domain = ((-0.8, 0.8), (-0.8, 0.8))

    def conformal_factor(self, coords: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def metric(self, coords: np.ndarray) -> np.ndarray:
        mu2 = self.conformal_factor(coords) ** 2
        return _diag(mu2, mu2)


@register_provider
class Enneper(_WeierstrassSurface):
    """Enneper surface, Weierstrass data h = 2, g = z."""

    name = "enneper"
    oracle = "Enneper surface (x - x^3/3 + xy^2, -y - x^2y + y^3/3, x^2 - y^2)"

    def conformal_factor(self, coords: np.ndarray) -> np.ndarray:
        return 1.0 + coords[..., 0] ** 2 + coords[..., 1] ** 2

    def second_form(self, coords: np.ndarray) -> np.ndarray:
        zero = np.zeros(coords.shape[:-1])
        return _diag(zero - 2.0, zero + 2.0)[..., None, :, :]

    def embedding(self, coords: np.ndarray) -> np.ndarray:
        x, y = coords[..., 0], coords[..., 1]
        return _stack(x - x**3 / 3 + x * y**2, -y - x**2 * y + y**3 / 3, x**2 - y**2)

    def normals(self, coords: np.ndarray) -> np.ndarray:
        x, y = coords[..., 0], coords[..., 1]
        r2 = x**2 + y**2
        return (_stack(2 * x, 2 * y, r2 - 1.0) / (1.0 + r2)[..., None])[..., None, :]

    def holomorphic_data(self) -> Tuple[ComplexFunction, ComplexFunction]:
        return (lambda z: 2.0 + 0.0 * z), (lambda z: z + 0.0)


@register_provider
class Catenoid(_WeierstrassSurface):
    """Catenoid, Weierstrass data h = -e^{-z}, g = -e^{z}."""

    name = "catenoid"
    default_domain = ((-0.8, 0.8), (-1.2, 1.2))
    oracle = "catenoid (cosh x cos y, cosh x sin y, x)"

    def conformal_factor(self, coords: np.ndarray) -> np.ndarray:
        return np.cosh(coords[..., 0]) + 0.0 * coords[..., 1]

    def second_form(self, coords: np.ndarray) -> np.ndarray:
        zero = np.zeros(coords.shape[:-1])
        return _diag(zero - 1.0, zero + 1.0)[..., None, :, :]

    def embedding(self, coords: np.ndarray) -> np.ndarray:
        x, y = coords[..., 0], coords[..., 1]
        return _stack(np.cosh(x) * np.cos(y), np.cosh(x) * np.sin(y), x)

    def normals(self, coords: np.ndarray) -> np.ndarray:
        x, y = coords[..., 0], coords[..., 1]
        return _stack(-np.cos(y) / np.cosh(x), -np.sin(y) / np.cosh(x), np.tanh(x))[..., None, :]

    def holomorphic_data(self) -> Tuple[ComplexFunction, ComplexFunction]:
        return (lambda z: -np.exp(-z)), (lambda z: -np.exp(z))


# =============================================================================
# Codimension two and p = 3
# =============================================================================


@register_provider
class FlatTorusR4(SceneProvider):
    """Product of circles of radii r1, r2 in R^4 (flat, flat normal bundle)."""

    name = "flat_torus_r4"
    q = 2
    oracle = "product of circles (r1 cos(u/r1), r1 sin(u/r1), r2 cos(v/r2), r2 sin(v/r2))"

    def __init__(self, r1: float = 1.0, r2: float = 1.0) -> None:
        if r1 <= 0 or r2 <= 0:
            raise SceneError("Torus radii must be positive")
        self.r1 = float(r1)
        self.r2 = float(r2)

    def metric(self, coords: np.ndarray) -> np.ndarray:
        one = np.ones(coords.shape[:-1])
        return _diag(one, one)

    def second_form(self, coords: np.ndarray) -> np.ndarray:
        h = np.zeros(coords.shape[:-1] + (2, 2, 2))
        h[..., 0, 0, 0] = 1.0 / self.r1
        h[..., 1, 1, 1] = -1.0 / self.r2
        return h

    def embedding(self, coords: np.ndarray) -> np.ndarray:
        a, b = coords[..., 0] / self.r1, coords[..., 1] / self.r2
        return _stack(
            self.r1 * np.cos(a), self.r1 * np.sin(a), self.r2 * np.cos(b), self.r2 * np.sin(b)
        )

    def normals(self, coords: np.ndarray) -> np.ndarray:
        a, b = coords[..., 0] / self.r1, coords[..., 1] / self.r2
        zero = 0.0 * a
        n1 = _stack(-np.cos(a), -np.sin(a), zero, zero)
        n2 = _stack(zero, zero, np.cos(b), np.sin(b))
        return np.stack([n1, n2], axis=-2)


@register_provider
class RoundHypersphere(SceneProvider):
    """Round 3-sphere of radius r in R^4 in hyperspherical coordinates, inward normal."""

    name = "round_hypersphere"
    p = 3
    default_domain = ((0.9, 2.2), (0.9, 2.2), (-0.6, 0.6))
    oracle = "3-sphere of radius r"

    def __init__(self, r: float = 1.0) -> None:
        if r <= 0:
            raise SceneError(f"Sphere radius must be positive, got {r}")
        self.r = float(r)

    def metric(self, coords: np.ndarray) -> np.ndarray:
        s1, s2 = np.sin(coords[..., 0]), np.sin(coords[..., 1])
        r2 = self.r**2
        return _diag(r2 + 0.0 * s1, r2 * s1**2, r2 * (s1 * s2) ** 2)

    def second_form(self, coords: np.ndarray) -> np.ndarray:
        return ((1.0 / self.r) * self.metric(coords))[..., None, :, :]

    def embedding(self, coords: np.ndarray) -> np.ndarray:
        u1, u2, u3 = coords[..., 0], coords[..., 1], coords[..., 2]
        return self.r * _stack(
            np.cos(u1),
            np.sin(u1) * np.cos(u2),
            np.sin(u1) * np.sin(u2) * np.cos(u3),
            np.sin(u1) * np.sin(u2) * np.sin(u3),
        )

    def normals(self, coords: np.ndarray) -> np.ndarray:
        return (-self.embedding(coords) / self.r)[..., None, :]


# =============================================================================
# Space forms
# =============================================================================


@register_provider
class GreatSphereS3(SceneProvider):
    """Totally geodesic 2-sphere in S^3 ⊂ R^4."""

    name = "great_sphere_s3"
    ambient = "sphere"
    default_domain = ((0.7, 2.4), (-0.8, 0.8))
    oracle = "great 2-sphere x4 = 0 in S^3"

    def metric(self, coords: np.ndarray) -> np.ndarray:
        u = coords[..., 0]
        return _diag(1.0 + 0.0 * u, np.sin(u) ** 2)

    def second_form(self, coords: np.ndarray) -> np.ndarray:
        return np.zeros(coords.shape[:-1] + (1, 2, 2))

    def embedding(self, coords: np.ndarray) -> np.ndarray:
        u, v = coords[..., 0], coords[..., 1]
        return _stack(np.sin(u) * np.cos(v), np.sin(u) * np.sin(v), np.cos(u), 0.0 * u)

    def normals(self, coords: np.ndarray) -> np.ndarray:
        zero = np.zeros(coords.shape[:-1])
        return _stack(zero, zero, zero, zero - 1.0)[..., None, :]


@register_provider
class CliffordTorusS3(SceneProvider):
    """Minimal Clifford torus in S^3, principal curvatures ±1."""

    name = "clifford_torus_s3"
    ambient = "sphere"
    oracle = "Clifford torus (cos √2u, sin √2u, cos √2v, sin √2v)/√2"

    def metric(self, coords: np.ndarray) -> np.ndarray:
        one = np.ones(coords.shape[:-1])
        return _diag(one, one)

    def second_form(self, coords: np.ndarray) -> np.ndarray:
        zero = np.zeros(coords.shape[:-1])
        return _diag(zero + 1.0, zero - 1.0)[..., None, :, :]

    def embedding(self, coords: np.ndarray) -> np.ndarray:
        a, b = np.sqrt(2.0) * coords[..., 0], np.sqrt(2.0) * coords[..., 1]
        return _stack(np.cos(a), np.sin(a), np.cos(b), np.sin(b)) / np.sqrt(2.0)

    def normals(self, coords: np.ndarray) -> np.ndarray:
        a, b = np.sqrt(2.0) * coords[..., 0], np.sqrt(2.0) * coords[..., 1]
        return (_stack(-np.cos(a), -np.sin(a), np.cos(b), np.sin(b)) / np.sqrt(2.0))[..., None, :]


@register_provider
class GeodesicH2InH3(SceneProvider):
    """Totally geodesic hyperbolic plane x3 = 0 in the hyperboloid model of H^3."""

    name = "geodesic_h2_in_h3"
    ambient = "hyperbolic"
    default_domain = ((-0.8, 0.8), (-0.8, 0.8))
    oracle = "hyperboloid sheet (sinh u, cosh u sinh v, 0, cosh u cosh v)"

    def metric(self, coords: np.ndarray) -> np.ndarray:
        u = coords[..., 0]
        return _diag(1.0 + 0.0 * u, np.cosh(u) ** 2)

    def second_form(self, coords: np.ndarray) -> np.ndarray:
        return np.zeros(coords.shape[:-1] + (1, 2, 2))

    def embedding(self, coords: np.ndarray) -> np.ndarray:
        u, v = coords[..., 0], coords[..., 1]
        return _stack(np.sinh(u), np.cosh(u) * np.sinh(v), 0.0 * u, np.cosh(u) * np.cosh(v))

    def normals(self, coords: np.ndarray) -> np.ndarray:
        zero = np.zeros(coords.shape[:-1])
        return _stack(zero, zero, zero + 1.0, zero)[..., None, :]


# =============================================================================
# Scene
# =============================================================================


@dataclass
class Scene:
    """A provider on a coordinate box sampled with ``resolution`` nodes per axis.

    Attributes
    ----------
    name : str
        Scene identifier.
    provider : SceneProvider
        Gauss data evaluator; fixes p, q and the ambient.
    domain : Domain
        (lo, hi) per coordinate axis.
    resolution : int
        Nodes per axis.
    description : str
        Free text for listings.
    pipeline : str
        Default pipeline for the CLI.
    tolerances : Dict[str, ToleranceGate]
        Per-residual gate overrides.
    expected : Dict[str, Any]
        Reference oracle description and expected outcome.
    """

    name: str
    provider: SceneProvider
    domain: Domain = ()
    resolution: int = DEFAULT_RESOLUTION
    description: str = ""
    pipeline: str = "reconstruct"
    tolerances: Dict[str, ToleranceGate] = field(default_factory=dict)
    expected: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.domain:
            self.domain = self.provider.default_domain
        self.domain = tuple((float(lo), float(hi)) for lo, hi in self.domain)
        if len(self.domain) != self.p:
            raise SceneError(
                f"Scene {self.name!r}: domain has {len(self.domain)} axes, p = {self.p}"
            )
        if any(hi <= lo for lo, hi in self.domain):
            raise SceneError(f"Scene {self.name!r}: empty domain {self.domain}")
        if self.resolution < MIN_RESOLUTION:
            raise SceneError(
                f"Scene {self.name!r}: resolution must be at least {MIN_RESOLUTION}, "
                f"got {self.resolution}"
            )
        if self.pipeline not in PIPELINES:
            raise SceneError(f"Scene {self.name!r}: unknown pipeline {self.pipeline!r}")

    @property
    def p(self) -> int:
        return self.provider.p

    @property
    def q(self) -> int:
        return self.provider.q

    @property
    def ambient(self) -> str:
        return self.provider.ambient

    @property
    def kappa(self) -> int:
        return AMBIENTS[self.ambient]

    @property
    def n(self) -> int:
        """Dimension of the ambient space form."""
        return self.p + self.q

    @property
    def signature(self) -> Signature:
        """Cl_n, Cl_{n+1} or Cl_{n,1} depending on the ambient."""
        if self.kappa == 0:
            return Signature.euclidean(self.n)
        if self.kappa == 1:
            return Signature.euclidean(self.n + 1)
        return Signature.lorentzian(self.n)

    @property
    def spacings(self) -> Tuple[float, ...]:
        return tuple((hi - lo) / (self.resolution - 1) for lo, hi in self.domain)

    @property
    def shape(self) -> Tuple[int, ...]:
        return (self.resolution,) * self.p

    def axes(self) -> Tuple[np.ndarray, ...]:
        return tuple(np.linspace(lo, hi, self.resolution) for lo, hi in self.domain)

    def grid(self) -> np.ndarray:
        """Node coordinates, shape (resolution,)*p + (p,)."""
        return np.stack(np.meshgrid(*self.axes(), indexing="ij"), axis=-1)

    def with_resolution(self, resolution: int) -> "Scene":
        return replace(self, resolution=int(resolution))

    def reference_positions(self) -> Optional[np.ndarray]:
        return self.provider.embedding(self.grid())

    def reference_normals(self) -> Optional[np.ndarray]:
        return self.provider.normals(self.grid())

    def summary(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "p": self.p,
            "q": self.q,
            "ambient": self.ambient,
            "oracle": self.expected.get("oracle", self.provider.oracle),
        }

    @classmethod
    def from_config(cls, config: Mapping[str, Any]) -> "Scene":
        """Build a scene from a merged configuration dictionary.

        Accepts both the catalog layout (``scene``/``geometry``/``provider`` blocks) and the flat
        scene-file layout ({name, p, q, ambient, domain, resolution, provider}).

        Raises
        ------
        SceneError
            If the provider is unknown or the declared p, q, ambient disagree with it.
        """
        scene_block = dict(config.get("scene", {}))
        geometry = dict(config.get("geometry", {}))
        for key in ("p", "q", "ambient", "domain", "resolution"):
            if key in config:
                geometry.setdefault(key, config[key])
        name = scene_block.get("name", config.get("name"))
        if not name:
            raise SceneError("Scene configuration has no name")

        provider_block = config.get("provider")
        if isinstance(provider_block, str):
            provider_block = {"name": provider_block}
        if not isinstance(provider_block, Mapping) or "name" not in provider_block:
            raise SceneError(f"Scene {name!r}: missing provider block")
        provider = make_provider(provider_block["name"], provider_block.get("parameters"))

        for key in ("p", "q", "ambient"):
            declared = geometry.get(key)
            if declared is not None and declared != getattr(provider, key):
                raise SceneError(
                    f"Scene {name!r}: declared {key}={declared!r} but provider "
                    f"{provider.name!r} has {key}={getattr(provider, key)!r}"
                )

        tolerances = {
            res: ToleranceGate.from_dict(gate)
            for res, gate in (config.get("tolerances") or {}).items()
        }
        domain = geometry.get("domain") or provider.default_domain
        try:
            return cls(
                name=str(name),
                provider=provider,
                domain=tuple(tuple(axis) for axis in domain),  # type: ignore[misc]
                resolution=int(geometry.get("resolution", DEFAULT_RESOLUTION)),
                description=str(scene_block.get("description", "")),
                pipeline=str(config.get("pipeline", "reconstruct")),
                tolerances=tolerances,
                expected=dict(config.get("expected") or {}),
            )
        except (TypeError, ValueError) as exc:
            raise SceneError(f"Malformed scene {name!r}: {exc}") from exc
