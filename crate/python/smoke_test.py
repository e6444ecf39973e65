"""Smoke test for the rpverify extension module.

Build and install first:  pip install maturin && maturin develop -m crates/python/Cargo.toml
"""

import math

import rpverify as rp


def main() -> None:
    table = rp.RamanujanTable.build(10_000)
    assert [table.ramanujan(n) for n in (1, 2, 3, 10)] == [2, 11, 17, 97]
    assert table.index_s(10) == 25

    report = rp.verify_corollary(table)
    assert report["failures"] == [], report["failures"][:5]
    print(f"corollary on [44, {table.n_max}]: {report['checked']} checked, 0 failures")

    threshold, crossover = rp.eq4_threshold(0.4)
    print(f"eq4 threshold {threshold} (crossover {crossover:.4f})")
    assert threshold in (36734, 36735)

    value, ok = rp.eq5_check(688_384)
    assert ok and abs(value - 0.2846) < 1e-3

    p = rp.BoundParams.corollary()
    assert p.G(688_383) < 0 and p.G_prime(688_384) < 0
    assert abs(p.A(1e6) - math.log(2)) < 0.2

    primes = rp.PrimeTable(1_000_000)
    assert primes.prime_count(1_000_000) == 78_498
    assert primes.nth_prime(78_498) == 999_983

    ex = rp.explore(rp.BoundParams(0.5, "log(log(n))"), cap=100_000)
    assert ex["label"] == "EMPIRICAL" and ex["empirical_n"] is not None
    print(f"explore log(log(n)): empirical N = {ex['empirical_n']} up to {ex['cap']}")

    dusart = rp.verify_dusart("lower", 3, 100_000)
    assert dusart["failures"] == []
    print("smoke test passed")


if __name__ == "__main__":
    main()
