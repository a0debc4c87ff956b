"""Family fixtures shared across test modules, built once per session."""

from __future__ import annotations

from functools import lru_cache
from pathlib import Path

from pf_audit.family_file import load_family
from pf_audit.forms.family import FamilySpec
from pf_audit.forms.picard_fuchs import picard_fuchs
from pf_audit.forms.reduction import Certificate
from pf_audit.operators.diffop import DiffOperator

PROJECT_ROOT = Path(__file__).resolve().parent.parent
FAMILIES_DIR = PROJECT_ROOT / "families"


@lru_cache(maxsize=None)
def family(name: str) -> FamilySpec:
    return load_family(FAMILIES_DIR / f"{name}.fam")


@lru_cache(maxsize=None)
def operator_and_certificate(name: str) -> tuple[DiffOperator, Certificate]:
    return picard_fuchs(family(name))


def legendre() -> FamilySpec:
    return family("legendre")


def legendre_operator() -> DiffOperator:
    return operator_and_certificate("legendre")[0]
