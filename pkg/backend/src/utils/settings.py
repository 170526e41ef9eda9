"""
Runtime settings read from the environment (and a .env file if present).
"""

import os
from typing import List

from dotenv import load_dotenv
from pydantic import BaseModel, Field

load_dotenv()


def _flag(name: str, default: str = "false") -> bool:
    return os.environ.get(name, default).strip().lower() in ("1", "true", "yes", "on")


class Settings(BaseModel):
    debug: bool = False
    seed: int = Field(default=20240601, ge=0, le=2 ** 64 - 1)
    samples: int = Field(default=100, ge=1)
    n_list: List[int] = Field(default_factory=lambda: [1, 2, 3, 4, 5])
    workers: int = Field(default=1, ge=1)
    report_dir: str = "reports"

    @classmethod
    def from_env(cls) -> "Settings":
        n_list = os.environ.get("VERIFY_N_LIST", "1,2,3,4,5")
        return cls(
            debug=_flag("DEBUG"),
            seed=int(os.environ.get("VERIFY_SEED", "20240601")),
            samples=int(os.environ.get("VERIFY_SAMPLES", "100")),
            n_list=[int(p) for p in n_list.split(",") if p.strip()],
            workers=int(os.environ.get("VERIFY_WORKERS", "1")),
            report_dir=os.environ.get("REPORT_DIR", "reports"),
        )


def get_settings() -> Settings:
    return Settings.from_env()
