import numpy as np
import pytest

from dgres import exactla as la
from dgres import heartkit as hk

P = 32003


def _algebra(table, unit, label):
    n = len(unit)
    mult = np.zeros((n, n, n), dtype=np.int64)
    for (a, b), combo in table.items():
        for c, coeff in combo:
            mult[a, b, c] = coeff % P
    A = hk.OrdinaryAlgebra(P, n, mult, np.array(unit, dtype=np.int64) % P, label=label)
    assert A.validate() == []
    return A


def field_alg():
    return _algebra({(0, 0): [(0, 1)]}, [1], "k")


def dual_numbers():
    # k[x]/(x^2), basis 1, x
    return _algebra(
        {(0, 0): [(0, 1)], (0, 1): [(1, 1)], (1, 0): [(1, 1)], (1, 1): []},
        [1, 0],
        "k[x]/(x^2)",
    )


def product_kk():
    return _algebra({(0, 0): [(0, 1)], (1, 1): [(1, 1)]}, [1, 1], "k x k")


def upper_triangular():
    # basis E11, E12, E22
    return _algebra(
        {
            (0, 0): [(0, 1)],
            (0, 1): [(1, 1)],
            (1, 2): [(1, 1)],
            (2, 2): [(2, 1)],
        },
        [1, 0, 1],
        "T2",
    )


def matrix2():
    # basis E11, E12, E21, E22
    tbl = {}
    idx = {(1, 1): 0, (1, 2): 1, (2, 1): 2, (2, 2): 3}
    for (i, j), a in idx.items():
        for (k, l), b in idx.items():
            if j == k:
                tbl[(a, b)] = [(idx[(i, l)], 1)]
    return _algebra(tbl, [1, 0, 0, 1], "M2")


def test_radical_known():
    assert hk.radical(product_kk()).dim == 0
    rad = hk.radical(dual_numbers())
    assert rad == la.span([[0, 1]], 2, P)
    rad = hk.radical(upper_triangular())
    assert rad == la.span([[0, 1, 0]], 3, P)
    assert hk.radical(matrix2()).dim == 0


def test_radical_requires_large_p():
    A = field_alg()
    small = hk.OrdinaryAlgebra(1009, 1, A.mult, A.unit)
    hk.radical(small)  # fine: 1009 > 1
    bad = hk.OrdinaryAlgebra(2, 2, dual_numbers().mult, dual_numbers().unit)
    with pytest.raises(hk.ConfigurationError):
        hk.radical(bad)


def test_radical_nilpotent():
    for A in (dual_numbers(), upper_triangular()):
        chain = hk.radical_chain(A)
        assert chain[-1].dim == 0
        assert len(chain) <= A.dim + 1


def test_simples_known():
    assert [s.dim for s in hk.simples(field_alg())] == [1]
    assert sorted(s.dim for s in hk.simples(product_kk())) == [1, 1]
    assert sorted(s.dim for s in hk.simples(upper_triangular())) == [1, 1]
    assert [s.dim for s in hk.simples(matrix2())] == [2]
    assert [s.dim for s in hk.simples(dual_numbers())] == [1]


def test_simples_reconstruct_semisimple_quotient():
    for A in (field_alg(), product_kk(), upper_triangular(), matrix2(), dual_numbers()):
        S, _, _ = hk.semisimple_quotient(A)
        assert sum(s.dim * s.dim for s in hk.simples(A)) == S.dim


def test_simples_validate_as_modules():
    for A in (upper_triangular(), matrix2()):
        for s in hk.simples(A):
            assert s.validate() == []


def test_projective_cover_regular():
    for A in (dual_numbers(), upper_triangular(), matrix2()):
        reg = hk.regular_module(A)
        cd = hk.projective_cover(reg)
        assert cd.module.dim == reg.dim
        assert cd.kernel.dim == 0
        assert hk.is_projective(reg)


def test_projective_cover_of_simple_over_dual_numbers():
    A = dual_numbers()
    k = hk.simples(A)[0]
    cd = hk.projective_cover(k)
    assert cd.module.dim == 2
    assert cd.kernel.dim == 1
    assert not hk.is_projective(k)


def test_cover_kernel_superfluous():
    for A in (dual_numbers(), upper_triangular()):
        for s in hk.simples(A):
            cd = hk.projective_cover(s)
            prad = hk.module_times_ideal(cd.module, hk.radical(A))
            for row in cd.kernel.basis:
                assert prad.contains(row)


def test_injective_envelope_dual_numbers():
    A = dual_numbers()
    k = hk.simples(A)[0]
    cd = hk.injective_envelope(k)
    assert cd.module.dim == 2  # self-injective local algebra
    assert not hk.is_injective(k)
    reg = hk.regular_module(A)
    assert hk.is_injective(reg)


def test_injective_envelope_essential():
    A = upper_triangular()
    for s in hk.simples(A):
        cd = hk.injective_envelope(s)
        img = la.span(cd.map.T, cd.module.dim, P)
        for t in range(cd.module.dim):
            v = la.eye(cd.module.dim)[t]
            gen = la.span([cd.module.act(v, la.eye(A.dim)[a]) for a in range(A.dim)], cd.module.dim, P)
            assert la.intersection(gen, img).dim > 0


def test_injectivity_of_dual_regular():
    for A in (dual_numbers(), upper_triangular(), matrix2()):
        d = hk.dual_module(hk.regular_module(A))
        assert hk.is_injective(d)


def test_projective_injective_duality():
    A = upper_triangular()
    for s in hk.simples(A):
        assert hk.is_projective(s) == hk.is_injective(hk.dual_module(s))


def test_pi_shriek_examples():
    # ordinary algebra: no boundaries, pi! is the identity
    hd = hk.heart_data(P, dual_numbers().mult, dual_numbers().unit, [])
    K = hk.regular_module(hd.r0)
    out, sub = hk.pi_shriek(hd, K)
    assert out.dim == K.dim

    # Koszul degree-zero data: R0 = k[x]/(x^2), B0 = (x)
    hd = hk.heart_data(P, dual_numbers().mult, dual_numbers().unit, [[0, 1]])
    assert hd.h0.dim == 1
    E = hk.regular_module(hd.r0)  # E(k) for the self-injective R0
    out, sub = hk.pi_shriek(hd, E)
    assert out.dim == 1
    assert sub == la.span([[0, 1]], 2, P)
    assert hk.is_injective(out)

    z = hk.zero_module(hd.r0)
    out, _ = hk.pi_shriek(hd, z)
    assert out.dim == 0


def test_pi_shriek_hull_roundtrip():
    # pi!(E_{R0}(J)) == J for injective H0-modules J
    hd = hk.heart_data(P, dual_numbers().mult, dual_numbers().unit, [[0, 1]])
    for J in (hk.regular_module(hd.h0),):
        JR = hk.restrict_to_r0(hd, J)
        env = hk.injective_envelope(JR)
        out, _ = hk.pi_shriek(hd, env.module)
        assert out.dim == J.dim


def test_split_checks():
    A = dual_numbers()
    reg = hk.regular_module(A)
    assert hk.split_mono_check(reg, reg, la.eye(2))
    k = hk.simples(A)[0]
    # socle inclusion k -> k[x]/(x^2): image spanned by x
    g = np.array([[0], [1]], dtype=np.int64)
    assert not hk.split_mono_check(k, reg, g)
    two, incls = hk.direct_sum([reg, reg])
    assert hk.split_mono_check(reg, two, incls[0])
    assert hk.split_epi_check(reg, reg, la.eye(2))
    proj = incls[0].T
    assert hk.split_epi_check(two, reg, proj)
    # quotient k[x]/(x^2) -> k does not split
    q = np.array([[1, 0]], dtype=np.int64)
    assert not hk.split_epi_check(reg, k, q)


def test_free_rank_and_basis():
    A = upper_triangular()
    reg = hk.regular_module(A)
    assert hk.free_rank(reg) == 1
    two, _ = hk.direct_sum([reg, reg])
    assert hk.free_rank(two) == 2
    gens = hk.free_basis(two)
    assert gens is not None and len(gens) == 2
    s = hk.simples(A)[0]
    assert hk.free_rank(s) is None
    # projective but not free
    M2 = matrix2()
    simple = hk.simples(M2)[0]
    assert hk.is_projective(simple)
    assert hk.free_rank(simple) is None


def test_top_multiplicities_and_length():
    A = upper_triangular()
    reg = hk.regular_module(A)
    assert sorted(hk.top_multiplicities(A, reg)) == [1, 1]
    assert hk.composition_length(reg) == 3
    assert hk.composition_length(hk.simples(A)[0]) == 1
    B = dual_numbers()
    assert hk.composition_length(hk.regular_module(B)) == 2


def test_unsplit_factor_detected():
    # GF(5)[x]/(x^2 - 2) is a field extension of GF(5): 2 is not a square mod 5
    mult = np.zeros((2, 2, 2), dtype=np.int64)
    mult[0, 0, 0] = 1
    mult[0, 1, 1] = 1
    mult[1, 0, 1] = 1
    mult[1, 1, 0] = 2
    A = hk.OrdinaryAlgebra(5, 2, mult, np.array([1, 0]), label="GF(25)")
    assert A.validate() == []
    with pytest.raises(hk.UnsplitFactorError):
        hk.simples(A)
