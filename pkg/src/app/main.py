# Nilmetric Workbench - FastAPI Backend
# Run: uvicorn src.app.main:app --reload --port 8000

import sys
from pathlib import Path

# Add project root to path for imports
project_root = Path(__file__).parent.parent.parent
sys.path.insert(0, str(project_root))

from fastapi import FastAPI, HTTPException
from fastapi import Path as PathParam
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field
from typing import Optional, List, Dict, Any
from datetime import datetime
import logging

from src.config import Config
from src.core.derivations import nikolayevsky
from src.core.errors import UnknownAlgebraError, WorkbenchError
from src.services import free_nilpotent as fn
from src.services.catalog import get_catalog, series_dims
from src.services.family import family, verify_certificate
from src.services.notation import emit_from_algebra, format_scaled_diagonal
from src.services.proof_script import parse_script, run_script

# Configure logging
logging.basicConfig(level=Config.log_level())
logger = logging.getLogger(__name__)

# =============================================================================
# PYDANTIC MODELS - Request/Response schemas
# =============================================================================

# --- Request Models ---

class ReplayRequest(BaseModel):
    """Proof script to replay"""
    script: str = Field(..., min_length=1, description="Proof-script text, starting with 'target <name>'")


# --- Response Models ---

class HealthResponse(BaseModel):
    """Health check response"""
    status: str
    version: str = Config.APP_VERSION
    timestamp: str
    catalog_entries: int = 0


class CatalogSummary(BaseModel):
    name: str
    dim: int
    provenance: str
    description: str = ""
    has_metric: bool = False
    nice_basis: bool = False


class CatalogListResponse(BaseModel):
    """Response for the catalog listing"""
    total: int
    entries: List[CatalogSummary] = []


class CatalogEntryResponse(BaseModel):
    """One catalog entry with its canonical document"""
    name: str
    dim: int
    provenance: str
    description: str = ""
    document: str


class VerifyResponse(BaseModel):
    name: str
    status: str = Field(..., description="'PASS' or 'FAIL'")
    checks: Dict[str, Dict[str, Any]] = {}


class EigenvalueItem(BaseModel):
    value: str = Field(..., description="Exact rational 'p/q'")
    multiplicity: int


class NikolayevskyResponse(BaseModel):
    """Nikolayevsky derivation as scale * diag(weights)"""
    name: str
    nikolayevsky: str
    eigenvalues: List[EigenvalueItem] = []
    method: str


class SeriesResponse(BaseModel):
    name: str
    lcs: List[int]
    ucs: List[int]


class FreeResponse(BaseModel):
    """Free nilpotent algebra n_{m,s}"""
    m: int
    s: int
    dim: int
    layer_dims: List[int]
    lambda_value: str = Field(..., description="lambda with N = lambda * (k on W_k)")
    niceness: Dict[str, Any]


class FamilyResponse(BaseModel):
    """Member g_k of the nonnice family with its quotient certificate"""
    k: int
    recipe: str
    document: str
    certificate_target: str
    abelian_dim: int
    certificate_rows: List[List[str]]
    certificate_ok: bool


class TranscriptResponse(BaseModel):
    target: str
    outcome: str = Field(..., description="CONTRADICTION, QED or INCONCLUSIVE")
    steps: List[Dict[str, Any]] = []
    contradiction: Optional[str] = None


# =============================================================================
# FASTAPI APP INITIALIZATION
# =============================================================================

app = FastAPI(
    title=f"{Config.APP_NAME} API",
    description="""
    Exact-arithmetic workbench for nilpotent Lie algebras with ad-invariant metrics:
    - Catalog of named algebras with recomputed checks
    - Nikolayevsky derivations and central series
    - Free nilpotent algebras and the nonnice family g_k
    - Replay of nonniceness proof scripts
    """,
    version=Config.APP_VERSION,
    docs_url="/docs",
    redoc_url="/redoc"
)

# =============================================================================
# CORS MIDDLEWARE
# =============================================================================

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


# =============================================================================
# HELPER: ERROR MAPPING
# =============================================================================

def _http_error(exc: WorkbenchError) -> HTTPException:
    """404 for unknown names, 422 for any other workbench error"""
    if isinstance(exc, UnknownAlgebraError):
        return HTTPException(status_code=404, detail=str(exc))
    logger.warning(f"{type(exc).__name__}: {exc}")
    return HTTPException(status_code=422, detail=f"{type(exc).__name__}: {exc}")


def _entry(name: str):
    try:
        return get_catalog().get(name)
    except WorkbenchError as e:
        raise _http_error(e)


# =============================================================================
# HEALTH
# =============================================================================

@app.get("/api/health", response_model=HealthResponse, tags=["System"])
async def health_check():
    """Health check; also reports whether the catalog loads."""
    try:
        entries = len(get_catalog().names())
        status = "healthy"
    except WorkbenchError as e:
        logger.error(f"Catalog failed to load: {e}")
        entries, status = 0, "degraded"
    return HealthResponse(status=status, timestamp=datetime.now().isoformat(), catalog_entries=entries)


# =============================================================================
# CATALOG ENDPOINTS
# =============================================================================

@app.get("/api/catalog", response_model=CatalogListResponse, tags=["Catalog"])
async def list_catalog():
    catalog = get_catalog()
    entries = [
        CatalogSummary(
            name=entry.name,
            dim=entry.algebra.dim,
            provenance=entry.provenance,
            description=entry.spec.description,
            has_metric=entry.metric is not None,
            nice_basis=entry.spec.nice_basis,
        )
        for entry in catalog
    ]
    return CatalogListResponse(total=len(entries), entries=entries)


@app.get("/api/catalog/{name}", response_model=CatalogEntryResponse, tags=["Catalog"])
async def get_catalog_entry(name: str):
    entry = _entry(name)
    return CatalogEntryResponse(
        name=entry.name,
        dim=entry.algebra.dim,
        provenance=entry.provenance,
        description=entry.spec.description,
        document=entry.text,
    )


@app.get("/api/catalog/{name}/verify", response_model=VerifyResponse, tags=["Catalog"])
async def verify_entry(name: str):
    """Recompute Jacobi, metric, series and spectrum checks for one entry."""
    _entry(name)
    try:
        result = get_catalog().verify(name)
    except WorkbenchError as e:
        raise _http_error(e)
    data = result.to_dict()
    return VerifyResponse(name=name, status=data["status"], checks=data["checks"])


@app.get("/api/catalog/{name}/nik", response_model=NikolayevskyResponse, tags=["Catalog"])
async def get_nikolayevsky(name: str):
    entry = _entry(name)
    try:
        result = nikolayevsky(entry.algebra)
    except WorkbenchError as e:
        raise _http_error(e)
    return NikolayevskyResponse(
        name=name,
        nikolayevsky=format_scaled_diagonal(result.diagonal),
        eigenvalues=[EigenvalueItem(value=str(v), multiplicity=m) for v, m in result.eigenvalues],
        method=result.method,
    )


@app.get("/api/catalog/{name}/series", response_model=SeriesResponse, tags=["Catalog"])
async def get_series(name: str):
    entry = _entry(name)
    lcs_dims, ucs_dims = series_dims(entry.algebra)
    return SeriesResponse(name=name, lcs=lcs_dims, ucs=ucs_dims)


# =============================================================================
# CONSTRUCTION ENDPOINTS
# =============================================================================

@app.get("/api/free/{m}/{s}", response_model=FreeResponse, tags=["Constructions"])
async def get_free(
    m: int = PathParam(..., ge=2, le=6, description="Number of generators"),
    s: int = PathParam(..., ge=1, le=8, description="Nilpotency step"),
):
    """Free s-step nilpotent algebra on m generators: layers, lambda and niceness."""
    free = fn.build(m, s)
    verdict = fn.niceness_verdict(m, s)
    return FreeResponse(
        m=m,
        s=s,
        dim=free.dim,
        layer_dims=list(free.layer_dims),
        lambda_value=str(fn.free_lambda(m, s)),
        niceness=verdict.to_dict(),
    )


@app.get("/api/family/{k}", response_model=FamilyResponse, tags=["Constructions"])
async def get_family_member(k: int = PathParam(..., ge=Config.FAMILY_MIN_K, description="Dimension of g_k")):
    """Member g_k of the nonnice family with its quotient certificate."""
    try:
        member = family(k)
        check = verify_certificate(member)
    except WorkbenchError as e:
        raise _http_error(e)
    cert = member.certificate
    return FamilyResponse(
        k=k,
        recipe=member.recipe,
        document=emit_from_algebra(member.algebra, member.metric.metric),
        certificate_target=cert.target,
        abelian_dim=cert.abelian_dim,
        certificate_rows=[[str(c) for c in row] for row in cert.rows],
        certificate_ok=bool(check),
    )


# =============================================================================
# PROOF SCRIPTS
# =============================================================================

@app.post("/api/replay", response_model=TranscriptResponse, tags=["Proofs"])
async def replay_script(request: ReplayRequest):
    """
    Replay a proof script against the catalog.

    Every step is recomputed; a failing step returns 422 with the step label.
    """
    try:
        transcript = run_script(parse_script(request.script))
    except WorkbenchError as e:
        raise _http_error(e)
    data = transcript.to_dict()
    return TranscriptResponse(
        target=data["target"],
        outcome=data["outcome"],
        steps=data["steps"],
        contradiction=data["contradiction"],
    )


# =============================================================================
# ROOT ENDPOINT
# =============================================================================

@app.get("/", tags=["System"])
async def root():
    """API root - returns basic info and links to docs"""
    return {
        "name": f"{Config.APP_NAME} API",
        "version": Config.APP_VERSION,
        "docs": "/docs",
        "health": "/api/health",
        "endpoints": {
            "catalog": {
                "list": "GET /api/catalog",
                "entry": "GET /api/catalog/{name}",
                "verify": "GET /api/catalog/{name}/verify",
                "nik": "GET /api/catalog/{name}/nik",
                "series": "GET /api/catalog/{name}/series",
            },
            "constructions": {
                "free": "GET /api/free/{m}/{s}",
                "family": "GET /api/family/{k}",
            },
            "proofs": {"replay": "POST /api/replay"},
        }
    }


# =============================================================================
# RUN SERVER (for direct execution)
# =============================================================================

if __name__ == "__main__":
    import uvicorn
    uvicorn.run(app, host="0.0.0.0", port=8000, reload=True)
