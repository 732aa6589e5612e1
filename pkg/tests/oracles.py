"""Reference values from scripts/oracle_values.py (mpmath, 30 digits), frozen."""

ORACLE = {
    "ln_gamma_10.3": 13.482036786138356971,
    "ln_gamma_1e-5": 11.512919692895825707,
    "ln_gamma_2.5": 0.28468287047291915963,
    "ln_gamma_123456.7": 1323900.9753909182949,
    "jacobi_norm_7_-0.5_-0.5": 0.068924647993960276848,
    "gegenbauer_norm_10_1.5": 11.478260869565217391,
    "bessel_j_2.7_37.4": 0.064812093073733665544,
    "bessel_j_0_5": -0.17759677131433830435,
    "bessel_j_0.3_13.1": 0.16436631307542657919,
    "bessel_j_1_16.5": -0.0057642137356312269888,
    "bessel_j_10_30": -0.12987689399858876819,
    "bessel_j_30.5_29": 0.084220108311163567327,
    "bessel_j_60_48.5": 0.0003587549424489025894,
    "bessel_j_60_90": -0.096702366626675045774,
    "bessel_j_-0.5_3": -0.45604882079463317885,
    "bessel_j_2.7_4000": 0.0053652064901856521516,
    "jacobi_p_100_0.3_1.2_0.41": -0.041214654387577846063,
    "jacobi_a10_sqrt_log": 0.025351033093285482169,
    "cheb_c7_pow03_sin": -0.014348537316398038516,
    "jacobi_a5_interior": -0.0070677076885912776368,
    "geg_a4_lam1_pow07_log": 0.01760965605656266488,
}

# Bessel transforms: (alpha, beta, mu, nu, b, log_site) -> {omega: value}, psi = cos
BESSEL_TRANSFORM = {
    (-0.5, 0, 1, 0, 0.5, 'AtZero'): {10: -2.8079674267922562508, 100: -1.3733727427284090561, 1000: -0.58691429164104381364},
    (0, 1, 1, 0, 0.5, 'AtZero'): {10: -0.17077860004394594688, 100: -0.02927576379850662509, 1000: -0.0040880812901399897147},
    (2, -0.5, 1, 0, 0.5, 'AtZero'): {10: 0.033155724676746817643, 100: 0.00081746257041705817621, 1000: 0.00014215530842210591151},
    (-0.5, 0.5, 1, 0, 0.5, 'AtB'): {10: -0.32078930746125318058, 100: -0.10238442251725721672, 1000: -0.032446575766388852488},
    (0, 1.5, 1, 0, 0.5, 'AtB'): {10: -0.027923848428287659955, 100: -0.0024513749394235867893, 1000: -0.00024507132915050186172},
    (2, -0.5, 1, 0, 0.5, 'AtB'): {10: 0.15134390472205803797, 100: 0.0007266048930391820042, 1000: 0.0024321546345471484727},
}
