"""
Pointwise exterior calculus on R^{2n} = C^n.

Every operator returns a new lazily evaluated field. Derivatives come from
``torch.func.jacfwd`` applied to the input's coefficient function, so
composites such as Lie_X Lie_X a or dd^c f stay exact.
"""

import logging
from typing import Optional

import torch
from torch.func import jacfwd

from lcklab.core.exceptions import DegreeError, JetCapabilityError, StructuralError
from lcklab.forms.combinatorics import (
    form_action_matrix,
    two_form_embedding,
    wedge_table,
)
from lcklab.forms.fields import (
    CoefficientFn,
    KForm,
    ScalarField,
    VectorField,
    min_smoothness,
    reduce_smoothness,
)

logger = logging.getLogger(__name__)


def _form(n: int, degree: int, fn: CoefficientFn, smoothness: Optional[int], label: str) -> KForm:
    cls = ScalarField if degree == 0 else KForm
    return cls(n=n, degree=degree, coefficients=fn, smoothness=smoothness, label=label)


def _zero(n: int, degree: int) -> KForm:
    return ScalarField.zero(n, 0) if degree == 0 else KForm.zero(n, degree)


def _same_dimension(*fields) -> int:
    dims = {f.n for f in fields}
    if len(dims) != 1:
        raise StructuralError(f"Dimension mismatch between operands: {sorted(dims)}")
    return dims.pop()


def wedge(a: KForm, b: KForm) -> KForm:
    """Alternating product a ^ b."""
    n = _same_dimension(a, b)
    p, q = a.degree, b.degree
    if p + q > 2 * n:
        raise DegreeError(f"Wedge of degrees {p} and {q} exceeds top degree {2 * n}")
    if a.is_zero or b.is_zero:
        return _zero(n, p + q)
    table = wedge_table(2 * n, p, q)
    fa, fb = a.coefficients, b.coefficients
    return _form(
        n,
        p + q,
        lambda x: torch.einsum("kij,i,j->k", table, fa(x), fb(x)),
        min_smoothness(a.smoothness, b.smoothness),
        f"{a.label}^{b.label}",
    )


def multiply(f: KForm, a: KForm) -> KForm:
    """Product of a function with a form."""
    if f.degree != 0:
        raise DegreeError(f"multiply expects a 0-form first, got degree {f.degree}")
    return wedge(f, a)


def exterior_d(a: KForm) -> KForm:
    """Exterior derivative from exact first derivatives of the components."""
    n, k = a.n, a.degree
    if k >= 2 * n:
        raise DegreeError(f"exterior_d of a top-degree ({k}) form is undefined")
    if a.smoothness is not None and a.smoothness < 1:
        raise JetCapabilityError(f"exterior_d needs a 1-jet; '{a.label}' has no derivatives left")
    if a.is_zero:
        return _zero(n, k + 1)
    table = wedge_table(2 * n, 1, k)
    jac = jacfwd(a.coefficients)
    return _form(
        n,
        k + 1,
        lambda x: torch.einsum("kji,ij->k", table, jac(x)),
        reduce_smoothness(a.smoothness),
        f"d({a.label})",
    )


def apply_I(a: KForm) -> KForm:
    """(I a)(X_1, ..., X_k) = (-1)^k a(I X_1, ..., I X_k)."""
    if a.is_zero or a.degree == 0:
        return a
    action = form_action_matrix(a.n, a.degree)
    fa = a.coefficients
    return _form(a.n, a.degree, lambda x: action @ fa(x), a.smoothness, f"I({a.label})")


def d_c(a: KForm) -> KForm:
    """d^c = -I d I."""
    return apply_I(exterior_d(apply_I(a))) * -1.0


def ddc(f: KForm) -> KForm:
    return exterior_d(d_c(f))


def interior_product(X: VectorField, a: KForm) -> KForm:
    """Contraction in the first slot."""
    n = _same_dimension(X, a)
    k = a.degree
    if k == 0:
        raise DegreeError("interior_product of a 0-form is undefined")
    if X.is_zero or a.is_zero:
        return _zero(n, k - 1)
    table = wedge_table(2 * n, 1, k - 1)
    fx, fa = X.components, a.coefficients
    return _form(
        n,
        k - 1,
        lambda x: torch.einsum("kji,j,k->i", table, fx(x), fa(x)),
        min_smoothness(X.smoothness, a.smoothness),
        f"i_{X.label}({a.label})",
    )


def lie_derivative(X: VectorField, a: KForm) -> KForm:
    """Cartan's formula: Lie_X a = d(i_X a) + i_X(d a)."""
    n = _same_dimension(X, a)
    k = a.degree
    if X.is_zero or a.is_zero:
        return _zero(n, k)
    if k == 0:
        result = interior_product(X, exterior_d(a))
    elif k == 2 * n:
        result = exterior_d(interior_product(X, a))
    else:
        result = exterior_d(interior_product(X, a)) + interior_product(X, exterior_d(a))
    return _form(n, k, result.coefficients, result.smoothness, f"Lie_{X.label}({a.label})")


def lie_derivative_power(X: VectorField, a: KForm, times: int) -> KForm:
    """Lie_X applied ``times`` times."""
    result = a
    for _ in range(times):
        result = lie_derivative(X, result)
    return result


def two_form_matrix(a: KForm) -> CoefficientFn:
    """Point -> antisymmetric matrix W with a(u, v) = u^T W v."""
    if a.degree != 2:
        raise DegreeError(f"two_form_matrix expects a 2-form, got degree {a.degree}")
    embedding = two_form_embedding(2 * a.n)
    fa = a.coefficients
    return lambda x: embedding @ fa(x)
