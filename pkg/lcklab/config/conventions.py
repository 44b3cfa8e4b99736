"""
Conventions record.

Every sign and normalization the engine depends on lives here. Modules read
these values instead of hard-coding them, and reports carry the fingerprint
so a verdict can be traced back to the conventions it was computed under.
"""

import hashlib
import json
from dataclasses import asdict, dataclass


@dataclass(frozen=True)
class ConventionsRecord:
    """Frozen sign/normalization choices shared by all modules."""

    coordinate_order: str = "(x_1, y_1, ..., x_n, y_n), z_j = x_j + i y_j"
    complex_structure: str = "I(d/dx_j) = d/dy_j, I(d/dy_j) = -d/dx_j"
    form_action: str = "(I a)(X_1, ..., X_k) = (-1)^k a(I X_1, ..., I X_k)"
    d_c: str = "d^c = -I d I"
    metric: str = "g(X, Y) = omega(I X, Y)"

    # dd^c |z|^2 = DDC_FLAT_CONSTANT * sum_j dx_j ^ dy_j
    ddc_flat_constant: float = -4.0
    # I(omega) = sign * omega for a real (1,1)-form omega
    kahler_form_i_sign: int = 1
    # omega' = e^{-f} omega has Lee form theta + sign * df
    lee_rescale_sign: int = -1
    # Lie_{A^c / lambda} omega_psi = sign * omega_{psi'} for pullback flows
    psi_derivative_sign: int = -1
    # dd^c(lambda^{-3} |A|^2_psi) equals the circle integral over [0, 2 pi / lambda]
    psi_potential_power: int = -3
    # dd^c g~(theta#, theta#) = constant * omega~ on the classical Hopf model
    vaisman_potential_constant: float = 1.0

    def to_dict(self) -> dict:
        return asdict(self)

    def fingerprint(self) -> str:
        """sha256 of the canonical JSON form of the record."""
        payload = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()


CONVENTIONS = ConventionsRecord()
