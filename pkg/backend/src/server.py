#!/usr/bin/env python3
"""
Bergman Verifier - FastAPI Backend

HTTP surface for the identity suites, the potential classifier and the
Moebius constraint chain.
"""

import logging
import os
import sys
from contextlib import asynccontextmanager

# Add current directory to path for imports
sys.path.append(os.path.dirname(__file__))

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware

from api.routes import router as api_router
from utils.settings import get_settings
from verification.catalog import CHECKS, SUITES

settings = get_settings()
logging.basicConfig(
    level=logging.DEBUG if settings.debug else logging.INFO,
    format="%(asctime)s %(levelname)s %(name)s: %(message)s",
)
logger = logging.getLogger(__name__)


@asynccontextmanager
async def lifespan(app: FastAPI):
    """Lifespan context manager for startup/shutdown events"""
    logger.info(f"Starting Bergman verifier API: {len(SUITES)} suites, {len(CHECKS)} checks")
    logger.info(f"defaults: n={settings.n_list} samples={settings.samples} seed={settings.seed}")
    yield
    logger.info("Shutting down Bergman verifier API")


app = FastAPI(
    title="Bergman Verifier API",
    description="Numerical checks of Bergman metrics, canonical potentials and automorphisms of the ball and the Siegel domain",
    version="1.0.0",
    docs_url="/docs",
    redoc_url="/redoc",
    lifespan=lifespan,
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=[
        "http://localhost:3000",
        "http://127.0.0.1:3000",
        "http://localhost:8000",
        "http://127.0.0.1:8000",
    ],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

app.include_router(api_router)


@app.get("/")
async def root():
    """API root endpoint"""
    return {"message": "Bergman Verifier API", "version": "1.0.0", "status": "running"}


if __name__ == "__main__":
    import uvicorn

    uvicorn.run(app, host="0.0.0.0", port=int(os.environ.get("PORT", "8000")), reload=False, log_level="info")
