"""
Pydantic models for the catalog index.

Exact numbers travel as strings "p/q" so JSON never carries floats.
"""

from fractions import Fraction
from typing import List, Optional

from pydantic import BaseModel, Field, field_validator


def _check_rational(v):
    if isinstance(v, int):
        return str(v)
    if isinstance(v, str):
        try:
            Fraction(v.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not an exact rational: {v!r}") from exc
        return v.strip()
    raise ValueError(f"expected a rational string, got {type(v).__name__}")


# ============== Catalog Index ==============

class SpectrumSpec(BaseModel):
    """Expected Nikolayevsky spectrum as scale * (weights)."""

    scale: str = Field(..., description="Common rational factor, '0' for the zero derivation")
    weights: List[int] = Field(default_factory=list, description="Integer eigenvalue weights with multiplicity")

    @field_validator('scale', mode='before')
    @classmethod
    def parse_scale(cls, v):
        return _check_rational(v)

    def values(self, dim: int) -> List[Fraction]:
        """The eigenvalue multiset, ascending."""
        scale = Fraction(self.scale)
        if scale == 0:
            return [Fraction(0)] * dim
        return sorted(scale * w for w in self.weights)


class CatalogEntrySpec(BaseModel):
    """One algebra named in the literature, stored as a .lie file."""

    name: str = Field(..., min_length=1)
    file: str = Field(..., description="File name relative to the catalog directory")
    provenance: str = Field(..., description="Where the algebra is defined")
    description: str = ""
    nikolayevsky: Optional[SpectrumSpec] = None
    lcs: Optional[List[int]] = Field(default=None, description="LCS dimensions, ending with 0")
    ucs: Optional[List[int]] = Field(default=None, description="UCS dimensions, starting with the center")
    nice_basis: bool = Field(default=False, description="The defining basis is a nice basis")


class CatalogSlice(BaseModel):
    """A family of catalogued algebras sharing dimension and series.

    When complete, the members are all nice algebras with that signature,
    as listed in the cited source; this is data, not recomputed.
    """

    name: str
    members: List[str]
    complete: bool = False
    provenance: str = ""
    dim: int = Field(..., ge=1)
    lcs: List[int]
    ucs: List[int]


class CatalogIndex(BaseModel):
    entries: List[CatalogEntrySpec]
    slices: List[CatalogSlice] = Field(default_factory=list)

    @field_validator('entries')
    @classmethod
    def unique_names(cls, v):
        names = [entry.name for entry in v]
        duplicates = sorted({n for n in names if names.count(n) > 1})
        if duplicates:
            raise ValueError(f"duplicate catalog names: {', '.join(duplicates)}")
        return v
