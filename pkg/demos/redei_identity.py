"""Counting unramified D4 extensions and reading off the 4-rank.

For the pair (D4, C4) the count f(d) is tied to the 4-rank of the class
group: 4 f / 2^omega + 1 = 2^rk4.  This script prints both sides for a few
discriminants.  It then shows two conventions that matter: the Kronecker
symbol at 2 must not be squared for d = -4m, and real fields need the
narrow class group.

Run: python demos/redei_identity.py
"""
from unramified2.clgroup import redei_4rank
from unramified2.count import f_t, f_total
from unramified2.discs import factor_prime_discriminants
from unramified2.group2 import preset

D4 = preset("D4:C4")


def show(d: int) -> None:
    fact = factor_prime_discriminants(d)
    f = f_total(D4, fact=fact).value
    rk4 = redei_4rank(fact).rk4
    lhs = 4 * f / 2**fact.omega + 1
    print(f"d={d:>7}  q={fact.prime_discs!s:<22} f={f!s:>3}  4f/2^w+1={lhs!s:>3}  2^rk4={2**rk4}")


def main() -> None:
    print("imaginary fields")
    for d in (-39, -84, -4020, -15015, -5460):
        show(d)

    print("\nthe prime 2 for d = -20 (class group C2, so no D4 extension)")
    fact = factor_prime_discriminants(-20)
    print("  plain symbol      :", f_t(D4, fact).value)
    print("  squared at ord 2  :", f_t(D4, fact, ord2_exponent=True).value)

    print("\nreal fields: the identity uses the narrow class group")
    for d in (136, 1365, 780):
        show(d)


if __name__ == "__main__":
    main()
