"""Auxiliary slice groups Phi (lf rel boundary) and psi (compact) and their
local Kunneth decompositions.

Both groups vanish unless alpha1 == 1. The pairing ``P_aux`` pairs Phi_a with
psi*_{2m-a}; ``P_aux_star`` is its mirror for the inverted indices.
"""
from __future__ import annotations

from dataclasses import dataclass

from .graded import GradedPairing, GradedSpace, check_nondegenerate


class AuxError(ValueError):
    pass


@dataclass(frozen=True)
class SliceAux:
    level: int
    alpha1_is_one: bool
    phi: GradedSpace
    psi: GradedSpace
    phi_star: GradedSpace
    psi_star: GradedSpace
    P_aux: GradedPairing
    P_aux_star: GradedPairing

    def __post_init__(self):
        if not self.alpha1_is_one and not self.is_trivial:
            raise AuxError("Phi and psi must vanish when alpha1 != 1")
        for name, p, left, right in (("P_aux", self.P_aux, self.phi, self.psi_star),
                                     ("P_aux_star", self.P_aux_star, self.phi_star, self.psi)):
            if p.left != left or p.right != right or p.level != self.level:
                raise AuxError(f"{name} does not pair the declared spaces at level {self.level}")

    @classmethod
    def trivial(cls, field, level: int, alpha1_is_one: bool = False) -> "SliceAux":
        z = GradedSpace.zero(field)
        return cls(level, alpha1_is_one, z, z, z, z,
                   GradedPairing(z, z, level), GradedPairing(z, z, level))

    @property
    def field(self):
        return self.phi.field

    @property
    def is_trivial(self) -> bool:
        return all(s.is_zero() for s in (self.phi, self.psi, self.phi_star, self.psi_star))

    def nondegenerate(self) -> bool:
        return check_nondegenerate(self.P_aux) and check_nondegenerate(self.P_aux_star)

    def dualize(self) -> "SliceAux":
        return SliceAux(self.level, self.alpha1_is_one, self.phi_star, self.psi_star,
                        self.phi, self.psi, self.P_aux_star, self.P_aux)


def kunneth_local(aux: SliceAux, star: bool = False) -> GradedSpace:
    """psi tensored with the homology of a circle: psi_i + psi_{i-1} in degree i."""
    psi = aux.psi_star if star else aux.psi
    if not aux.alpha1_is_one:
        return GradedSpace.zero(aux.field)
    basis: dict[int, list[str]] = {}
    for d in psi.degrees:
        for g in psi.labels(d):
            basis.setdefault(d, []).append(f"{g}(x)pt")
            basis.setdefault(d + 1, []).append(f"{g}(x)S1")
    return GradedSpace(aux.field, basis)


def kunneth_local_lf(aux: SliceAux, l: int, star: bool = False) -> GradedSpace:
    """Phi shifted by 2l, tensored with the lf circle factor in degrees 1 and 2."""
    if l < 0:
        raise AuxError("l must be non-negative")
    phi = aux.phi_star if star else aux.phi
    if not aux.alpha1_is_one:
        return GradedSpace.zero(aux.field)
    basis: dict[int, list[str]] = {}
    for d in phi.degrees:
        for g in phi.labels(d):
            basis.setdefault(d + 2 * l + 1, []).append(f"{g}(x)ray")
            basis.setdefault(d + 2 * l + 2, []).append(f"{g}(x)plane")
    return GradedSpace(aux.field, basis)


def aux_from_slice(cfg) -> SliceAux:
    """Aux groups of an A-only disc configuration, computed by the disc oracle."""
    from .oracle.datum import slice_aux
    return slice_aux(cfg)
