"""
lapbound - File I/O Service

Complex file parsing and serialization, and write-then-rename output so
reports are never observed half-written.
"""

import json
import os
import tempfile
from pathlib import Path
from typing import Any, Union

from pydantic import BaseModel
from pydantic import ValidationError as SchemaValidationError

from lapbound.core.exceptions import ValidationError
from lapbound.core.logging import get_logger
from lapbound.models.complex import SimplicialComplex
from lapbound.schemas.complex import ComplexFile
from lapbound.services.complex_service import from_maximal_faces

logger = get_logger(__name__)

PathLike = Union[str, Path]


def parse_complex(text: str, source: str = "<string>") -> SimplicialComplex:
    """
    Build a complex from the JSON complex format.

    Raises:
        ValidationError: Malformed JSON, unknown fields or inconsistent faces
    """
    try:
        document = ComplexFile.model_validate_json(text)
    except SchemaValidationError as e:
        problems = "; ".join(err["msg"] for err in e.errors())
        raise ValidationError(
            f"cannot parse complex file {source}: {problems}", details={"source": source}
        ) from e
    return from_maximal_faces(document.vertices, document.maximal_faces)


def load_complex(path: PathLike) -> SimplicialComplex:
    """Read and parse a complex file."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ValidationError(f"cannot read complex file {path}: {e}", field="input") from e
    complex_ = parse_complex(text, source=str(path))
    logger.debug("complex loaded", path=str(path), f_vector=complex_.f_vector)
    return complex_


def complex_to_file(X: SimplicialComplex) -> ComplexFile:
    """The file form of X: its vertex list and maximal faces."""
    return ComplexFile(
        vertices=list(X.vertices),
        maximal_faces=[list(sigma) for sigma in X.maximal_faces()],
    )


def dump_complex(X: SimplicialComplex) -> str:
    return complex_to_file(X).model_dump_json()


def atomic_write_text(path: PathLike, text: str) -> Path:
    """Write ``text`` to a temporary file beside ``path`` and rename it into place."""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(prefix=f".{target.name}.", dir=target.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        os.replace(tmp_name, target)
    except BaseException:
        Path(tmp_name).unlink(missing_ok=True)
        raise
    logger.debug("file written", path=str(target), size=len(text))
    return target


def write_json(path: PathLike, payload: Any) -> Path:
    """Serialize a pydantic model or plain mapping as indented JSON, atomically."""
    if isinstance(payload, BaseModel):
        text = payload.model_dump_json(indent=2)
    else:
        text = json.dumps(payload, indent=2, sort_keys=True)
    return atomic_write_text(path, text + "\n")
