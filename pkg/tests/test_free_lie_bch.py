import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from forge import free_lie_bch as fl


# independent noncommutative polynomials: dict word -> Fraction

def _p(*words):
    return {w: Fraction(1) for w in words}


def _add(a, b, s=1):
    out = dict(a)
    for w, c in b.items():
        out[w] = out.get(w, 0) + s * c
    return {w: c for w, c in out.items() if c}


def _mul(a, b):
    out = {}
    for u, c in a.items():
        for v, d in b.items():
            out[u + v] = out.get(u + v, 0) + c * d
    return {w: c for w, c in out.items() if c}


def _br(a, b):
    return _add(_mul(a, b), _mul(b, a), -1)


def _sc(a, r):
    return {w: c * Fraction(r) for w, c in a.items()}


def _as_poly(t):
    out = {}
    for d, arr in enumerate(t.deg):
        for i, c in enumerate(arr):
            if c:
                out[fl.index_word(i, d, t.k)] = c
    return out


def test_lyndon_words_against_rotation_oracle():
    for k, N in ((2, 7), (3, 4)):
        brute = [w for n in range(1, N + 1) for w in itertools.product(range(k), repeat=n)
                 if all(w < w[i:] + w[:i] for i in range(1, n))]
        assert sorted(brute, key=lambda t: (len(t), t)) == fl.lyndon_words(k, N)


@pytest.mark.parametrize("k,n,dim", [(2, 1, 2), (2, 2, 1), (2, 3, 2), (2, 4, 3), (2, 5, 6),
                                     (2, 6, 9), (2, 7, 18), (3, 3, 8)])
def test_necklace_dims(k, n, dim):
    assert fl.necklace_dim(k, n) == dim
    assert len(fl.FreeLie(k, n).by_degree[n]) == dim


def test_bch_low_degree_closed_form():
    x, y = _p((0,)), _p((1,))
    xy = _br(x, y)
    want = _add(x, y)
    want = _add(want, _sc(xy, Fraction(1, 2)))
    want = _add(want, _sc(_br(x, xy), Fraction(1, 12)))
    want = _add(want, _sc(_br(y, xy), Fraction(-1, 12)))
    want = _add(want, _sc(_br(y, _br(x, xy)), Fraction(-1, 24)))
    got = _as_poly(fl.bch_phi(4).to_tensor())
    assert got == want


def test_bch_phi_is_lie():
    # extraction raises NotLieError on non-Lie input
    phi = fl.bch_phi(6)
    assert not (phi.to_tensor() - (fl.Tensor.letter(0, 2, 6).exp() * fl.Tensor.letter(1, 2, 6).exp()).log()).low_degree()
    with pytest.raises(fl.NotLieError):
        fl.LieSeries.from_tensor(fl.Tensor.letter(0, 2, 2) * fl.Tensor.letter(0, 2, 2))


def test_associativity_defect_vanishes():
    assert fl.associativity_defect(5).is_zero()


def test_psi_leading_term():
    psi = fl.psi_commutator_series(5)
    assert psi.degree_part(1).is_zero()
    assert psi.degree_part(2).coeffs == {(0, 1): Fraction(1)}


@pytest.mark.parametrize("p", [3, 5, 7])
def test_chf_integrality(p):
    ok, bad, excess = fl.chf_integrality(p, 8)
    assert ok and not bad and excess >= 0


def test_chf_bound_is_sharp_somewhere():
    # the degree-p term of Phi has a genuine 1/p
    phi = fl.bch_phi(5)
    assert min(fl.vp_frac(c, 5) for w, c in phi.items() if len(w) == 5) == -1


@given(st.integers(-50, 50).filter(bool), st.integers(1, 50))
def test_vp_frac(a, b):
    v = fl.vp_frac(Fraction(a * 25, b * 5), 5)
    assert v == 1 + fl.vp_frac(Fraction(a, b), 5)


def test_substitute_identity():
    x, y = fl.LieSeries.letter(0, 2, 5), fl.LieSeries.letter(1, 2, 5)
    assert fl.substitute(fl.bch_phi(5), [x, y]) == fl.bch_phi(5)
    # Phi(x, -x) = 0
    assert fl.bch_of(x, -x).is_zero()


def test_left_normed_basis_spans():
    for n in range(2, 6):
        chosen, rows, lyn = fl.left_normed_basis(n, 5)
        assert len(chosen) == fl.necklace_dim(2, n)


@pytest.mark.parametrize("N,p", [(5, 5), (6, 7)])
def test_inversion_reconstruction(N, p):
    tab = fl.inversion_coefficients(N, p)
    assert tab.exponents_ok()
    assert fl.reconstruction_check(tab) == (True, True)
    back = fl.InversionTables.from_json(tab.to_json())
    assert fl.reconstruction_check(back) == (True, True)


def test_inversion_plain_commutators_below_p():
    tab = fl.inversion_coefficients(4, 7, root_weight=10)
    assert fl.reconstruction_check(tab) == (True, True)
    for table in (tab.a, tab.b):
        for items in table.values():
            assert all(fl.vp_frac(e, 7) is None or fl.vp_frac(e, 7) >= 0 for _, e in items)


def test_word_str_round_trip():
    assert fl.word_parse(fl.word_str((0, 1, 2, 1))) == (0, 1, 2, 1)
    with pytest.raises(ValueError):
        fl.word_str((6,))
