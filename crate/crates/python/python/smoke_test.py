"""Quick end-to-end check of the compiled module. Run after `maturin develop`."""

from fractions import Fraction

import stripmix


def main():
    assert stripmix.count_series(2, 7) == [1, 2, 4, 8, 15, 28, 53, 101]
    assert stripmix.count_paths(1, 60) == stripmix.count_series(1, 60)[-1]

    num, den = stripmix.generating_function(2)
    assert den[0] == 1
    # Expand num/den and compare with the counts.
    series = []
    for n in range(12):
        c = (num[n] if n < len(num) else 0) - sum(
            den[k] * series[n - k] for k in range(1, min(n, len(den) - 1) + 1)
        )
        series.append(c)
    assert series == stripmix.count_series(2, 11)

    assert stripmix.charpoly(2) == [1, 1, -2, 2, 1, -3, 3, -1]
    g = stripmix.growth_constants(3)
    lo, hi = (Fraction(b) for b in g["bracket"])
    assert lo <= g["r"] <= hi and abs(g["r"] - 2.050671806254) < 1e-9
    assert abs(stripmix.perron(0) - 1.0) < 1e-12

    kg = stripmix.KernelGraph(2, 4)
    assert len(kg) == 15
    assert kg.class_sizes() == (5, 7, 3)
    assert all(kg.degree(v) <= 5 for v in range(len(kg)))
    assert kg.verify_bottleneck()["sep_size"] == 5

    pip = stripmix.CoralPip(2, 4)
    assert len(pip.consistent_ideals()) == len(kg)
    assert pip.bottleneck_sizes() == kg.class_sizes()
    a, b = pip.low_inconsistent_pair()
    assert pip.is_inconsistent(a, b)

    report = kg.mix(exact_phi=True, t_max=10)
    assert report["phi_exact"] == "3/56" and report["phi_upper"] == "1/12"
    assert report["tau_lb_spectral"] > 0

    t1 = kg.simulate("EEEE", 50, seed=3)
    assert t1 == kg.simulate("EEEE", 50, seed=3) and len(t1) == 51

    try:
        kg.simulate("NNNN", 1)
    except stripmix.StripmixError:
        pass
    else:
        raise AssertionError("invalid start accepted")

    print("stripmix", stripmix.__version__, "smoke test ok")


if __name__ == "__main__":
    main()
