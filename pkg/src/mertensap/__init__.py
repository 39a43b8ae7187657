"""Mertens-type constants C(q, a) for primes in arithmetic progressions.

The truncated product prod_{p <= x, p = a (mod q)} (1 - 1/p) behaves like
C(q, a) / (log x)^{1/phi(q)}; this package computes C(q, a) through exact
character-sum identities (Dirichlet L-values at 1, residue-class Euler
products with small exponents, Meissel-type sums) and cross-validates every
step against brute-force oracles and classical closed forms.
"""

from .characters import (
    DirichletCharacter,
    PrimitiveInduction,
    UnityRoot,
    char_sum_Sm_direct,
    char_sum_Sm_lemma,
    conductor_and_primitive,
    enumerate_characters,
    evaluate,
)
from .constants import (
    DEFAULT_PRIME_BOUND,
    MertensResult,
    SeriesSpec,
    asymptotic_probe,
    big_C,
    c_q1,
    c_qa,
    complement_check,
    f_ts,
    verify_main_product,
)
from .errors import (
    BranchUndeterminedError,
    IdentityViolationError,
    InvalidInputError,
    MertensapError,
    NonRealResultError,
    NotAUnitError,
    PrecisionUnachievableError,
    PrincipalCharacterError,
)
from .lfunctions import LValue, branch_resolved_log_l, capital_pi, l_one
from .numerics import (
    DEFAULT_PRECISION,
    BernoulliTable,
    BigComplex,
    BigReal,
    euler_gamma,
    zeta_even,
)
from .primes import (
    ClassExponentRule,
    PrimeClassIterator,
    TailBoundedValue,
    direct_mertens_product,
    meissel_B,
    partial_c_product,
    primes_in_class,
    residue_class_product,
)
from .unitgroup import (
    Factorization,
    OrbitSolution,
    UnitGroupStructure,
    carmichael_lambda,
    element_order,
    euler_phi,
    factorize,
    non_maximal_set,
    power_residue_class,
    reachable_set,
    unit_group,
)

__version__ = "0.1.0"

__all__ = [
    "BernoulliTable",
    "BigComplex",
    "BigReal",
    "BranchUndeterminedError",
    "ClassExponentRule",
    "DEFAULT_PRECISION",
    "DEFAULT_PRIME_BOUND",
    "DirichletCharacter",
    "Factorization",
    "IdentityViolationError",
    "InvalidInputError",
    "LValue",
    "MertensResult",
    "MertensapError",
    "NonRealResultError",
    "NotAUnitError",
    "OrbitSolution",
    "PrecisionUnachievableError",
    "PrimeClassIterator",
    "PrimitiveInduction",
    "PrincipalCharacterError",
    "SeriesSpec",
    "TailBoundedValue",
    "UnitGroupStructure",
    "UnityRoot",
    "asymptotic_probe",
    "big_C",
    "branch_resolved_log_l",
    "c_q1",
    "c_qa",
    "capital_pi",
    "carmichael_lambda",
    "char_sum_Sm_direct",
    "char_sum_Sm_lemma",
    "complement_check",
    "conductor_and_primitive",
    "direct_mertens_product",
    "element_order",
    "enumerate_characters",
    "euler_gamma",
    "euler_phi",
    "evaluate",
    "f_ts",
    "factorize",
    "l_one",
    "meissel_B",
    "non_maximal_set",
    "partial_c_product",
    "power_residue_class",
    "primes_in_class",
    "reachable_set",
    "residue_class_product",
    "unit_group",
    "verify_main_product",
    "zeta_even",
]
