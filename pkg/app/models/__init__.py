"""
Models Package
Exact number types and pydantic models for surfaces, polygons, fans and slices
"""
from app.models.numbers import QuadNum, RadicalSum
from app.models.surface import ConeKind, ConeModel, CurveEntry, FlagData, SurfaceModel
from app.models.decomposition import SegmentWalk, WalkPiece, ZariskiDecomposition
from app.models.polygon import AffinePiece, OkounkovPolygon, Polygon
from app.models.toric import ToricDivisor, ToricSurface
from app.models.slices import ClosedFormF, DivisorPath, SliceBody, SliceSample

__all__ = [
    'QuadNum',
    'RadicalSum',
    'ConeKind',
    'ConeModel',
    'CurveEntry',
    'FlagData',
    'SurfaceModel',
    'SegmentWalk',
    'WalkPiece',
    'ZariskiDecomposition',
    'AffinePiece',
    'OkounkovPolygon',
    'Polygon',
    'ToricDivisor',
    'ToricSurface',
    'ClosedFormF',
    'DivisorPath',
    'SliceBody',
    'SliceSample'
]
