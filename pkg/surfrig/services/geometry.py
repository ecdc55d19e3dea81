"""Algebraic surfaces with exact rational points and normals.

Each preset carries its implicit polynomial, its declared freedom
number and a rational chart. Charts are built from the half-angle
circle map t -> ((1-t^2)/(1+t^2), 2t/(1+t^2)) and from projections of
quadrics through a rational base point, so every sampled point lies on
its surface exactly.
"""

import logging
import math
import random
import re
from collections.abc import Callable, Iterable, Mapping
from fractions import Fraction
from typing import Any

import sympy as sp

from surfrig.config import get_settings
from surfrig.exceptions import (
    NoSamplerError,
    PointOffSurfaceError,
    SingularPointError,
    SurfaceError,
    SurfaceParameterError,
    UnknownSurfaceError,
)
from surfrig.models.schemas import Point, Surface

logger = logging.getLogger(__name__)

X, Y, Z = sp.symbols("x y z")

# Relative residual accepted for floating points on a surface.
FLOAT_SURFACE_TOLERANCE = 1e-9

_MONOMIAL = re.compile(r"^[xyz0-9*^\s]+$")


def to_rational(value: Any) -> Fraction:
    """Parse an int, Fraction or ``"p/q"`` string exactly.

    Raises:
        SurfaceParameterError: If the value is not an exact rational.
    """
    if isinstance(value, bool) or isinstance(value, float):
        raise SurfaceParameterError(f"{value!r} is not an exact rational")
    try:
        return Fraction(value)
    except (TypeError, ValueError, ZeroDivisionError) as e:
        raise SurfaceParameterError(f"{value!r} is not a rational") from e


def format_rational(value: Fraction) -> str:
    return str(value)


def circle_point(t: Any) -> tuple[Any, Any]:
    """Rational point of the unit circle for parameter t."""
    d = 1 + t * t
    return (1 - t * t) / d, 2 * t / d


def _poly(expr: Any) -> sp.Poly:
    return sp.Poly(expr, X, Y, Z, domain="QQ")


def _q(value: Fraction) -> sp.Rational:
    return sp.Rational(value.numerator, value.denominator)


# --- Charts ---


def _plane_chart(u: Any, v: Any) -> Point:
    return u, v, u * 0


def _sphere_chart(r: Fraction) -> Callable[..., Point]:
    def chart(u: Any, v: Any) -> Point:
        d = u * u + v * v + 1
        return r * 2 * u / d, r * 2 * v / d, r * (u * u + v * v - 1) / d

    return chart


def _elliptic_cylinder_chart(a: Fraction, b: Fraction) -> Callable[..., Point]:
    def chart(t: Any, z: Any) -> Point:
        c, s = circle_point(t)
        return a * c, b * s, z

    return chart


def _cone_chart(t: Any, z: Any) -> Point:
    c, s = circle_point(t)
    return z * c, z * s, z


def _torus_chart(big: Fraction, small: Fraction) -> Callable[..., Point]:
    def chart(u: Any, t: Any) -> Point:
        cu, su = circle_point(u)
        ct, st = circle_point(t)
        rho = big + small * cu
        return rho * ct, rho * st, small * su

    return chart


def _quadric_chart(
    a: Fraction, b: Fraction, c: Fraction
) -> Callable[..., Point]:
    # Lines through (alpha, 0, 0) with direction (1, u, v) meet
    # a x^2 + b y^2 + c z^2 = 1 a second time; alpha = 1/sqrt(a).
    alpha = 1 / _rational_sqrt(a)

    def chart(u: Any, v: Any) -> Point:
        lam = -2 * a * alpha / (a + b * u * u + c * v * v)
        return alpha + lam, lam * u, lam * v

    return chart


def _hyperboloid_chart(c: Fraction) -> Callable[..., Point]:
    def chart(m: Any, t: Any) -> Point:
        rho = c * (m * m + 1) / (2 * m)
        ct, st = circle_point(t)
        return rho * ct, rho * st, c * (m * m - 1) / (2 * m)

    return chart


def _rational_sqrt(value: Fraction) -> Fraction:
    num = math.isqrt(value.numerator)
    den = math.isqrt(value.denominator)
    if num * num != value.numerator or den * den != value.denominator:
        raise SurfaceParameterError(f"{value} is not a square of a rational")
    return Fraction(num, den)


# --- Presets ---


def _positive(params: Mapping[str, Fraction], *names: str) -> None:
    for name in names:
        if params[name] <= 0:
            raise SurfaceParameterError(f"{name} must be positive")


def _build_plane(p: dict[str, Fraction]) -> Surface:
    return Surface(
        name="plane", poly=_poly(Z), declared_type=3, params=p,
        chart=_plane_chart, chart_arity=2,
    )


def _build_sphere(p: dict[str, Fraction]) -> Surface:
    _positive(p, "r")
    r = p["r"]
    return Surface(
        name="sphere",
        poly=_poly(X**2 + Y**2 + Z**2 - _q(r) ** 2),
        declared_type=3,
        params=p,
        chart=_sphere_chart(r),
        chart_arity=2,
    )


def _build_cylinder(p: dict[str, Fraction]) -> Surface:
    _positive(p, "r")
    r = p["r"]
    return Surface(
        name="cylinder",
        poly=_poly(X**2 + Y**2 - _q(r) ** 2),
        declared_type=2,
        params=p,
        chart=_elliptic_cylinder_chart(r, r),
        chart_arity=2,
    )


def _build_elliptical_cylinder(p: dict[str, Fraction]) -> Surface:
    _positive(p, "a", "b")
    a, b = p["a"], p["b"]
    if a == b:
        raise SurfaceParameterError("Elliptical cylinder needs a != b")
    return Surface(
        name="elliptical_cylinder",
        poly=_poly(X**2 / _q(a) ** 2 + Y**2 / _q(b) ** 2 - 1),
        declared_type=1,
        params=p,
        chart=_elliptic_cylinder_chart(a, b),
        chart_arity=2,
    )


def _build_cone(p: dict[str, Fraction]) -> Surface:
    return Surface(
        name="cone", poly=_poly(X**2 + Y**2 - Z**2), declared_type=1,
        params=p, chart=_cone_chart, chart_arity=2,
    )


def _build_torus(p: dict[str, Fraction]) -> Surface:
    _positive(p, "R", "r")
    big, small = p["R"], p["r"]
    if small >= big:
        raise SurfaceParameterError("Torus needs 0 < r < R")
    big_q, small_q = _q(big), _q(small)
    poly = _poly(
        (X**2 + Y**2 + Z**2 + big_q**2 - small_q**2) ** 2
        - 4 * big_q**2 * (X**2 + Y**2)
    )
    return Surface(
        name="torus", poly=poly, declared_type=1, params=p,
        chart=_torus_chart(big, small), chart_arity=2,
    )


def _quadric_type(a: Fraction, b: Fraction, c: Fraction) -> int:
    distinct = len({a, b, c})
    return {1: 3, 2: 1, 3: 0}[distinct]


def _build_ellipsoid(p: dict[str, Fraction]) -> Surface:
    _positive(p, "A", "B", "C")
    a, b, c = p["A"], p["B"], p["C"]
    return Surface(
        name="ellipsoid",
        poly=_poly(_q(a) * X**2 + _q(b) * Y**2 + _q(c) * Z**2 - 1),
        declared_type=_quadric_type(a, b, c),
        params=p,
        chart=_quadric_chart(a, b, c),
        chart_arity=2,
    )


def _build_spheroid(p: dict[str, Fraction]) -> Surface:
    _positive(p, "a", "b")
    a, b = p["a"], p["b"]
    if a == b:
        raise SurfaceParameterError("Spheroid needs a != b")
    coeffs = (1 / a**2, 1 / b**2, 1 / b**2)
    return Surface(
        name="spheroid",
        poly=_poly(
            X**2 / _q(a) ** 2 + (Y**2 + Z**2) / _q(b) ** 2 - 1
        ),
        declared_type=1,
        params=p,
        chart=_quadric_chart(*coeffs),
        chart_arity=2,
    )


def _build_hyperboloid(p: dict[str, Fraction]) -> Surface:
    _positive(p, "c")
    c = p["c"]
    return Surface(
        name="hyperboloid",
        poly=_poly(X**2 + Y**2 - Z**2 - _q(c) ** 2),
        declared_type=1,
        params=p,
        chart=_hyperboloid_chart(c),
        chart_arity=2,
    )


# name -> (builder, default parameters)
PRESETS: dict[str, tuple[Callable[[dict], Surface], dict[str, Fraction]]] = {
    "plane": (_build_plane, {}),
    "sphere": (_build_sphere, {"r": Fraction(1)}),
    "cylinder": (_build_cylinder, {"r": Fraction(1)}),
    "elliptical_cylinder": (
        _build_elliptical_cylinder, {"a": Fraction(2), "b": Fraction(1)}
    ),
    "cone": (_build_cone, {}),
    "torus": (_build_torus, {"R": Fraction(2), "r": Fraction(1)}),
    "ellipsoid": (
        _build_ellipsoid,
        {"A": Fraction(1), "B": Fraction(2), "C": Fraction(3)},
    ),
    "spheroid": (_build_spheroid, {"a": Fraction(2), "b": Fraction(1)}),
    "hyperboloid": (_build_hyperboloid, {"c": Fraction(1)}),
}


def preset(name: str, params: Mapping[str, Any] | None = None) -> Surface:
    """Build a preset surface.

    Args:
        name: One of PRESETS.
        params: Shape parameters overriding the defaults; values are
            ints, Fractions or ``"p/q"`` strings.

    Returns:
        The surface with its declared type.

    Raises:
        UnknownSurfaceError: If the name is not a preset.
        SurfaceParameterError: If a parameter is unknown or invalid.
    """
    if name not in PRESETS:
        raise UnknownSurfaceError(
            f"Unknown surface {name!r}; choose from {', '.join(PRESETS)}"
        )
    builder, defaults = PRESETS[name]
    merged = dict(defaults)
    for key, value in (params or {}).items():
        if key not in defaults:
            raise SurfaceParameterError(
                f"Surface {name} has no parameter {key!r}"
            )
        merged[key] = to_rational(value)
    return builder(merged)


def parse_surface(spec: str) -> Surface:
    """Build a preset from a ``"name:key=value,..."`` string.

    Raises:
        SurfaceError: If the string is malformed or names no preset.
    """
    name, _, rest = spec.strip().partition(":")
    params: dict[str, str] = {}
    for item in filter(None, (part.strip() for part in rest.split(","))):
        key, sep, value = item.partition("=")
        if not sep or not key.strip():
            raise SurfaceParameterError(f"Malformed parameter {item!r}")
        params[key.strip()] = value.strip()
    return preset(name.strip(), params)


def _monomial(key: str) -> Any:
    key = key.strip()
    if re.fullmatch(r"\d+\s*,\s*\d+\s*,\s*\d+", key):
        i, j, k = (int(part) for part in key.split(","))
        return X**i * Y**j * Z**k
    if not _MONOMIAL.match(key):
        raise SurfaceParameterError(f"Malformed monomial {key!r}")
    expr = sp.sympify(key.replace("^", "**"), locals={"x": X, "y": Y, "z": Z})
    if not expr.is_polynomial(X, Y, Z):
        raise SurfaceParameterError(f"{key!r} is not a monomial")
    return expr


def custom_surface(
    terms: Mapping[str, Any],
    declared_type: int | None = None,
    name: str = "custom",
) -> Surface:
    """Build a surface from a monomial -> coefficient map.

    Monomials are written ``"x^2*y"`` or as exponent triples
    ``"2,1,0"``; coefficients are ints or ``"p/q"`` strings. Custom
    surfaces have no sampler, so frameworks on them need explicit
    placements.

    Raises:
        SurfaceParameterError: If a term is malformed, the polynomial is
            zero, or the declared type is outside 0..3.
    """
    if declared_type is not None and declared_type not in range(4):
        raise SurfaceParameterError("Declared type must lie in 0..3")
    expr = sp.Integer(0)
    for key, coeff in terms.items():
        expr += _q(to_rational(coeff)) * _monomial(key)
    poly = _poly(expr)
    if poly.is_zero:
        raise SurfaceParameterError("Surface polynomial is zero")
    return Surface(name=name, poly=poly, declared_type=declared_type)


def surface_label(surface: Surface) -> str:
    """Render a surface back into its "name:key=value" string."""
    if not surface.params:
        return surface.name
    rendered = ",".join(
        f"{key}={format_rational(value)}"
        for key, value in surface.params.items()
    )
    return f"{surface.name}:{rendered}"


# --- Evaluation ---


def _evaluate_terms(terms: Iterable, point: Point) -> Any:
    x, y, z = point
    return sum(
        (coeff * x**i * y**j * z**k for (i, j, k), coeff in terms),
        Fraction(0),
    )


def _scale(terms: Iterable, point: Point) -> float:
    x, y, z = (abs(float(c)) for c in point)
    return sum(abs(float(coeff)) * x**i * y**j * z**k
               for (i, j, k), coeff in terms)


def _is_exact(point: Point) -> bool:
    return all(isinstance(c, (int, Fraction)) for c in point)


def evaluate(surface: Surface, point: Point) -> Any:
    """Evaluate m at a point (exactly for rational coordinates)."""
    return _evaluate_terms(surface.terms, point)


def on_surface(surface: Surface, point: Point) -> bool:
    """Whether m(p) = 0, exactly or to a relative float tolerance."""
    value = evaluate(surface, point)
    if _is_exact(point):
        return value == 0
    scale = max(1.0, _scale(surface.terms, point))
    return abs(float(value)) <= FLOAT_SURFACE_TOLERANCE * scale


def gradient(surface: Surface, point: Point) -> tuple[Any, Any, Any]:
    """Evaluate the gradient of m at a point without checks."""
    gx, gy, gz = (
        _evaluate_terms(terms, point) for terms in surface.gradient_terms
    )
    return gx, gy, gz


def normal(surface: Surface, point: Point) -> tuple[Any, Any, Any]:
    """Return the unnormalized normal, the gradient of m, at a point.

    Raises:
        PointOffSurfaceError: If m(p) != 0.
        SingularPointError: If the gradient vanishes.
    """
    if not on_surface(surface, point):
        raise PointOffSurfaceError(
            f"Point {point} is not on {surface.name}"
        )
    grad = gradient(surface, point)
    if all(g == 0 for g in grad):
        raise SingularPointError(
            f"Point {point} is a singular point of {surface.name}"
        )
    return grad


# --- Sampling ---


def random_rational(rng: random.Random, height: int) -> Fraction:
    """Draw p/q with |p| <= height and 1 <= q <= height."""
    return Fraction(rng.randint(-height, height), rng.randint(1, height))


def sample_point(
    surface: Surface,
    rng: random.Random,
    height: int | None = None,
    exclude: Iterable[Point] = (),
) -> Point:
    """Draw an exact rational nonsingular point from the surface chart.

    Parameters are random rationals of the given height; draws that
    hit a pole of the chart, a singular point or an excluded point are
    redrawn.

    Args:
        surface: A surface with a chart.
        rng: Random generator owned by the caller.
        height: Numerator/denominator bound; defaults to settings.
        exclude: Points already issued, e.g. to one framework.

    Returns:
        The point as a tuple of Fractions.

    Raises:
        NoSamplerError: If the surface has no chart.
        SurfaceError: If no acceptable point turns up.
    """
    if surface.chart is None:
        raise NoSamplerError(f"Surface {surface.name} has no sampler")
    settings = get_settings()
    height = settings.sample_height if height is None else height
    taken = set(exclude)
    for _ in range(settings.max_resamples):
        args = [
            random_rational(rng, height) for _ in range(surface.chart_arity)
        ]
        try:
            point = tuple(Fraction(c) for c in surface.chart(*args))
        except ZeroDivisionError:
            continue
        if point in taken:
            logger.debug("Resampling repeated point on %s", surface.name)
            continue
        if all(g == 0 for g in gradient(surface, point)):
            logger.debug("Resampling singular point on %s", surface.name)
            continue
        return point
    raise SurfaceError(
        f"No usable point on {surface.name} after "
        f"{settings.max_resamples} draws"
    )


def sample_placement(
    surface: Surface, n: int, rng: random.Random, height: int | None = None
) -> list[Point]:
    """Draw n pairwise distinct points."""
    placement: list[Point] = []
    for _ in range(n):
        placement.append(sample_point(surface, rng, height, placement))
    return placement
