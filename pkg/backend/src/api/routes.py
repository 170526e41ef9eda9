"""
API routes for the Bergman verifier.

Thin handlers around verification.runner: run the suites, classify a
potential description, and check a Moebius matrix against the Cayley
constraint chain.
"""

import logging
from typing import Any, Dict, List, Optional

from fastapi import APIRouter, Depends, HTTPException
from pydantic import BaseModel, Field

from geometry.errors import GeometryError
from utils.settings import Settings, get_settings
from verification import runner
from verification.catalog import CHECKS, SUITES
from verification.config import MAX_N, InvalidConfig, SuiteConfig
from verification.report import Report

logger = logging.getLogger(__name__)


class RunRequest(BaseModel):
    n_list: Optional[List[int]] = None
    samples: Optional[int] = None
    seed: Optional[int] = None
    tol: Dict[str, float] = Field(default_factory=dict)
    suites: Optional[List[str]] = None
    workers: Optional[int] = None


class ClassifyRequest(BaseModel):
    base: str = "psi0"
    n: Optional[int] = None
    generators: List[Dict[str, Any]] = Field(default_factory=list)
    f: List[Dict[str, Any]] = Field(default_factory=list)
    r: float = 1.0
    kappa: float = 1.0
    isotropy: List[Dict[str, Any]] = Field(default_factory=list)
    mobius: Optional[List[Any]] = None


class MobiusRequest(BaseModel):
    entries: List[Any]


class CheckInfo(BaseModel):
    name: str
    suite: str
    anchor: str
    tolerance: float
    max_n: int


class SuitesResponse(BaseModel):
    suites: List[str]
    max_n: int
    checks: List[CheckInfo]


router = APIRouter(prefix="/api/v1", tags=["verifier"])


def _fail(e: Exception) -> HTTPException:
    if isinstance(e, InvalidConfig):
        return HTTPException(status_code=400, detail=str(e))
    if isinstance(e, GeometryError):
        return HTTPException(status_code=422, detail=str(e))
    logger.exception(f"unexpected error: {e}")
    return HTTPException(status_code=500, detail=str(e))


@router.get("/health")
async def health_check():
    """Health check endpoint"""
    return {"status": "healthy", "version": "1.0.0"}


@router.get("/suites", response_model=SuitesResponse)
async def list_suites():
    """Every check the verifier knows, with its statement and default tolerance."""
    return SuitesResponse(
        suites=list(SUITES),
        max_n=MAX_N,
        checks=[CheckInfo(name=c.name, suite=c.suite, anchor=c.anchor, tolerance=c.tolerance, max_n=c.max_n)
                for c in CHECKS.values()],
    )


@router.post("/run", response_model=Report)
def run_suites(request: RunRequest, settings: Settings = Depends(get_settings)):
    # plain def: FastAPI runs it in its thread pool
    try:
        config = SuiteConfig.from_settings(settings, format="structured", **request.model_dump())
        return runner.run(config)
    except Exception as e:
        raise _fail(e)


@router.post("/classify", response_model=Report)
def classify_potential(request: ClassifyRequest):
    document = request.model_dump(exclude_none=True)
    try:
        return runner.classify(document)
    except ValueError as e:
        # classifier preconditions (kappa, ball corrections) are caller errors
        raise _fail(e if isinstance(e, (InvalidConfig, GeometryError)) else InvalidConfig(str(e)))
    except Exception as e:
        raise _fail(e)


@router.post("/mobius")
def mobius_constraints(request: MobiusRequest):
    """Run the Cayley constraint chain on a (n+1) x (n+1) matrix given row-major."""
    try:
        return runner.mobius_report(request.entries)
    except Exception as e:
        raise _fail(e)
