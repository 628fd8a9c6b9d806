"""Bucket-method multi-scalar multiplication on BN128 and BLS12-381, with a
cycle-level model of a shared double-add accelerator."""
from .curve import (
    AFFINE_INFINITY,
    INFINITY,
    AffinePoint,
    CurveParams,
    JacobianPoint,
    OpCounters,
    is_on_curve,
    point_add,
    point_double,
    scalar_mul_double_and_add,
    to_affine,
    to_jacobian,
    unified_double_add,
)
from .curves import BLS12_381, BN128, CURVES, TOY, get_curve
from .msm import MsmConfig, msm_naive, msm_pippenger
from .vectors import VectorSet, generate_vectors, read_vectors, write_vectors

__version__ = "0.1.0"
