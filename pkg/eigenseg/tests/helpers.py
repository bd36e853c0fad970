"""
Shared builders for operator tests
"""

from eigenspace import DomainMask, ScalarField, assemble, build_weight
from eigenspace.ae_weight import LORENTZIAN, WeightField, WeightLaw


def prescribed_weight(mu_values) -> WeightField:
    """WeightField with prescribed per-node values (1-D or 2-D)"""
    mu = ScalarField.from_array(mu_values)
    return WeightField(mu, WeightLaw(LORENTZIAN, gamma=1.0), 1.0)


def operator_for(mu_values, face_average='harmonic', threads=1):
    """(op, coupling) on the full rectangle for prescribed weights"""
    weight = prescribed_weight(mu_values)
    mask = DomainMask.full(weight.mu.width, weight.mu.height)
    return assemble(weight, mask, face_average, threads=threads)


def image_operator(image: ScalarField, face_average='harmonic'):
    """(op, coupling) of the Lorentzian weight of `image` on the full rectangle"""
    mask = DomainMask.full(image.width, image.height)
    return assemble(build_weight(image, mask), mask, face_average, threads=1)


def sign_changes(values) -> int:
    """Interior sign changes of a 1-D sequence, ignoring exact zeros"""
    nonzero = values[values != 0]
    return int((nonzero[:-1] * nonzero[1:] < 0).sum())
