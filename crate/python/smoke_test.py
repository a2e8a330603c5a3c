"""Smoke test for the pydpoisson extension.

Build and install first:  pip install --no-build-isolation -e crates/python
"""

import json

import pydpoisson as dp


def main():
    kks = dp.DoubleBracket.kks(2)
    assert kks.n_gens == 2
    # {{x, x}} = 1 (x) x - x (x) 1
    assert sorted(kks.eval([1], [1])) == [("-1/1", [1], []), ("1/1", [], [1])]
    assert kks.eval([1], [2]) == []
    assert kks.check_double_jacobi(exhaustive_len=2, samples=20, seed=3)["passed"]
    assert kks.check_phi_adapted("phi_minus")["passed"]
    bad = kks.check_phi_adapted("phi_plus", samples=5)
    assert not bad["passed"] and bad["counterexample"]["inputs"]

    plain = dp.PoissonStructure.induce(kks, 2)
    assert len(plain.ring_vars()) == 8
    # {x_11, x_12} = x_12 for one generator
    assert plain.bracket("1:1:1", "1:1:2") == plain.reduce("1:1:2")
    for check in (plain.check_skew, plain.check_jacobi_ring, plain.check_equivariance):
        assert check()["passed"]

    twisted = dp.PoissonStructure.induce_twisted(kks, "phi_minus", "identity", 3)
    assert twisted.mode.startswith("twisted")
    # skew-symmetric 3x3 matrices, one per generator
    assert len(twisted.ring_vars()) == 6
    assert twisted.check_jacobi_ring()["passed"]
    assert twisted.check_multiplicativity(max_word_len=2)["passed"]

    fixture = dp.DoubleBracket.symmetric_pair()
    assert not dp.PoissonStructure.induce(fixture, 2).check_jacobi_ring()["passed"]

    ors = dp.DoubleBracket.ors(["0", "1", "3"])
    assert ors.check_double_jacobi(samples=20)["passed"]

    assert dp.check_prop_f10(3, "orthogonal", max_word_len=1)["passed"]

    job = "[bracket]\nfamily = kks, L = 2\n[involution]\nkind = phi_plus\n[checks]\nseed = 2\ncheck = phi_adapted\n"
    a, b = dp.run_job(job), dp.run_job(job)
    assert a == b
    report = json.loads(a)
    assert report["checks"][0]["passed"] is False

    print("pydpoisson", dp.__version__, "smoke test passed")


if __name__ == "__main__":
    main()
