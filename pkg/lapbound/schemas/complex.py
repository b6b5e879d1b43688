"""
lapbound - Complex File Schemas

Pydantic model for the on-disk complex format: a single JSON object with
``vertices`` and ``maximal_faces``. Unknown fields are rejected.
"""

from typing import List

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class ComplexFile(BaseModel):
    """Complex input file: vertex labels plus generating (maximal) faces."""

    model_config = ConfigDict(extra="forbid", strict=True)

    vertices: List[int] = Field(..., description="Vertex labels, JSON integers >= 0")
    maximal_faces: List[List[int]] = Field(
        default_factory=list, description="Faces whose downward closure is the complex"
    )

    @field_validator("vertices")
    @classmethod
    def validate_vertices(cls, v: List[int]) -> List[int]:
        """Labels must be non-negative and distinct."""
        if any(label < 0 for label in v):
            raise ValueError("vertex labels must be >= 0")
        if len(set(v)) != len(v):
            raise ValueError("duplicate vertex labels")
        return v

    @field_validator("maximal_faces")
    @classmethod
    def validate_faces(cls, v: List[List[int]]) -> List[List[int]]:
        for face in v:
            if len(set(face)) != len(face):
                raise ValueError(f"face {face} repeats a vertex")
        return v

    @model_validator(mode="after")
    def validate_face_vertices(self):
        """Every face may only use declared vertices."""
        known = set(self.vertices)
        for face in self.maximal_faces:
            unknown = sorted(set(face) - known)
            if unknown:
                raise ValueError(f"face {face} references unknown vertices {unknown}")
        return self
