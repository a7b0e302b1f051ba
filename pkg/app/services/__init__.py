"""
Services Package
Business logic layer
"""
from app.services.linear_algebra import LinearAlgebra
from app.services.export_service import ExportService
from app.services.surface_service import SurfaceService
from app.services.zariski_service import ZariskiService
from app.services.okounkov_service import OkounkovService
from app.services.toric_service import ToricService
from app.services.slice_service import SliceService
from app.services.verification_service import VerificationService

__all__ = [
    'LinearAlgebra',
    'ExportService',
    'SurfaceService',
    'ZariskiService',
    'OkounkovService',
    'ToricService',
    'SliceService',
    'VerificationService'
]
