"""Predicted limits of f / c^omega for the four preset pairs.

Bipartite pairs (H abelian) follow a Cohen-Lenstra law supported on
(2^i - 1)/q.  The other pairs concentrate on a single value.  For those the
script prints both the default point mass and the value without the slot sum
over the prime 2, which is what random-prime simulations settle on.

Run: python demos/predicted_constants.py
"""
from unramified2.group2 import PRESETS, preset
from unramified2.predict import (
    bipartite_distribution,
    cohen_lenstra_distribution,
    correlation_prediction,
    m_moment,
    pair_constants,
    point_mass,
)


def main() -> None:
    for sign, label in ((-1, "imaginary"), (1, "real")):
        print(f"== {label} fields")
        for name in PRESETS:
            spec = preset(name)
            k = pair_constants(spec, sign)
            mean = correlation_prediction([spec], sign).value
            line = f"{name:<13} c={k['c']} |Aut|={k['aut']} |T0|={k['t0_size']} mean={mean}"
            if k["bipartite"]:
                bd = bipartite_distribution(spec, sign)
                head = ", ".join(f"{v}:{p:.3f}" for v, p in zip(bd.support[:3], bd.mass.probabilities[:3]))
                line += f"  law {head}, ..."
            else:
                line += f"  point mass {point_mass(spec, sign)} (without slot sum {point_mass(spec, sign, slot_sum=False)})"
            print(line)
        dist = cohen_lenstra_distribution(sign)
        for kk in (1, 2, 3):
            print(f"   moment k={kk}: sum P(i) 2^(ik) = {dist.moment(kk):.10f}, M = {m_moment(kk, sign)}")
    d4, q8 = preset("D4:C4"), preset("D4oC4:Q8")
    print("\njoint mean of f(D4)/2^w * f(Q8)/3^w:", correlation_prediction([d4, q8], -1).value)


if __name__ == "__main__":
    main()
