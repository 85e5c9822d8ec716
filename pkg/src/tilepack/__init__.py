"""Greedy lower-left anchored rectangle packing with crown-charging checks."""

from .bounds import BoundCertificate, certify, rho_star, xi, xi_prime
from .charging import compute_crowns, crown, crown_area, total_charge
from .generators import (
    AdversarialParams,
    gen_adversarial,
    gen_crown_tight,
    gen_diagonal,
    gen_random,
    gen_worstcase_tile,
)
from .geometry import GeneralizedTile, Instance, Point, Rect, Tile
from .packing import TilePacking, coverage, pack

__all__ = [
    "AdversarialParams",
    "BoundCertificate",
    "GeneralizedTile",
    "Instance",
    "Point",
    "Rect",
    "Tile",
    "TilePacking",
    "certify",
    "compute_crowns",
    "coverage",
    "crown",
    "crown_area",
    "gen_adversarial",
    "gen_crown_tight",
    "gen_diagonal",
    "gen_random",
    "gen_worstcase_tile",
    "pack",
    "rho_star",
    "total_charge",
    "xi",
    "xi_prime",
]
