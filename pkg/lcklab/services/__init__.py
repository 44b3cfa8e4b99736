"""Potential builders, the key formula and the averaging pipeline."""

from .averaging import AveragingResult, averaging_pipeline
from .key_formula import KeyFormulaReport, ProofChainReport, verify_key_formula, verify_proof_chain
from .omega_w import (
    PotentialCertificate,
    PsiPotential,
    build_omega_W_circle,
    build_psi_potential,
    certify_potential,
)

__all__ = [
    "AveragingResult",
    "KeyFormulaReport",
    "PotentialCertificate",
    "ProofChainReport",
    "PsiPotential",
    "averaging_pipeline",
    "build_omega_W_circle",
    "build_psi_potential",
    "certify_potential",
    "verify_key_formula",
    "verify_proof_chain",
]
