"""Helpers shared by the command modules.

Results go to stdout (or ``--out``) as JSON; one-line summaries go to
stderr. Handlers return the process exit code.
"""

import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any

from pydantic import BaseModel

from surfrig.exceptions import FrameworkError, SurfaceParameterError
from surfrig.models.schemas import Point, Surface
from surfrig.services.geometry import custom_surface, parse_surface

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INPUT = 2


def emit(model: BaseModel, out: str | None = None) -> None:
    """Write a model as indented JSON to ``out`` or stdout."""
    text = model.model_dump_json(indent=2) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def summary(message: str) -> None:
    print(message, file=sys.stderr)


def read_json(path: str) -> Any:
    """Load a JSON file, reporting syntax errors as ValueError."""
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise ValueError(f"{path}: not valid JSON ({e.msg})") from e


def load_surface(spec: str) -> Surface:
    """Resolve ``--surface``: a preset string or a custom JSON file.

    The file holds ``{"terms": {"x^2": 1, ...}, "type": k}``.
    """
    if spec.endswith(".json"):
        data = read_json(spec)
        if not isinstance(data, dict) or "terms" not in data:
            raise SurfaceParameterError(
                f"{spec}: custom surface needs a 'terms' object"
            )
        return custom_surface(
            data["terms"],
            declared_type=data.get("type"),
            name=data.get("name", Path(spec).stem),
        )
    return parse_surface(spec)


def _coordinate(value: Any) -> Any:
    if isinstance(value, float):
        return value
    if isinstance(value, (int, str)) and not isinstance(value, bool):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as e:
            raise FrameworkError(f"Bad coordinate {value!r}") from e
    raise FrameworkError(f"Bad coordinate {value!r}")


def load_placement(path: str) -> list[Point]:
    """Read ``[[x, y, z], ...]`` with ints, ``"p/q"`` strings or floats.

    A placement holding any float is converted to floats throughout.
    """
    data = read_json(path)
    if not isinstance(data, list) or not all(
        isinstance(p, list) and len(p) == 3 for p in data
    ):
        raise FrameworkError(f"{path}: placement must be a list of triples")
    points = [tuple(_coordinate(c) for c in p) for p in data]
    if any(isinstance(c, float) for p in points for c in p):
        points = [tuple(float(c) for c in p) for p in points]
    return points
