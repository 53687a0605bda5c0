"""Exact densities and sieving for the divisibility of multiplicative orders."""

from .arith import (
    FactoredInteger,
    carmichael,
    factorize,
    gcd_supernatural,
    kappa,
    mobius,
    multiplicative_order,
    order_valuation,
    unitary_divisors,
    valuation,
)
from .base import Base, discriminant, in_S, parse_base, tau
from .coincidence import (
    CoincidenceQuadruple,
    GeneratorSet,
    coincidence_search,
    derive_generator_sets,
    is_muller,
    solve_order_equation,
    theorem5_families,
)
from .density import cap_C, delta, delta_prime, epsilon, epsilon_prime, exponent_spectrum, gamma_min, table_gamma
from .mdensity import ValuationPattern, coincidence_patterns, scan_bad, unique_pattern_density
from .sieve import (
    CountTable,
    count_series,
    check_complete_multiplicativity,
    congruence_characterization,
    logarithmic_integral,
    normalized_series,
    verify_lemma2,
    verify_prime_inclusion_exclusion,
)
