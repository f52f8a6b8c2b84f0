"""Why naive operator replacement breaks units, and the two repairs.

Prints the symbolic time exponent of each way of writing the first-order
equation dx/dt + P x = Q, with P, Q in 1/seconds and x dimensionless.

    python demos/demo_dimensional_bookkeeping.py
"""

from fracdim import (
    DIMENSIONLESS,
    PER_TIME,
    TIME,
    check_homogeneity,
    dim_of_operator,
)

x = DIMENSIONLESS
coeff_classical = PER_TIME  # P, Q in 1/s
coeff_rescaled = PER_TIME + TIME  # P phi, Q phi after the substitution

variants = {
    "classical d/dt": [dim_of_operator("classical_ddt") + x, coeff_classical + x, coeff_classical],
    "naive power-law replacement": [dim_of_operator("caputo") + x, coeff_classical + x, coeff_classical],
    "sigma rule (power-law kernel)": [dim_of_operator("sigma_rescaled_caputo") + x, coeff_classical + x, coeff_classical],
    "naive exponential-kernel replacement": [dim_of_operator("caputo_fabrizio") + x, coeff_classical + x, coeff_classical],
    "phi-rescaled exponential kernel": [dim_of_operator("caputo_fabrizio") + x, coeff_rescaled + x, coeff_rescaled],
}

print(f"{'formulation':40s} {'term exponents':22s} homogeneous?")
for name, terms in variants.items():
    shown = ", ".join(str(t) for t in terms)
    print(f"{name:40s} [{shown}]".ljust(64) + f"  {check_homogeneity(terms)}")

print()
print("The exponents are symbolic in the order: homogeneity above holds")
print("(or fails) for every alpha in (0, 1] at once, e.g. at alpha = 0.3:")
for name, terms in variants.items():
    values = ", ".join(f"{t.evaluate(0.3):+.2f}" for t in terms)
    print(f"  {name:40s} [{values}]")
