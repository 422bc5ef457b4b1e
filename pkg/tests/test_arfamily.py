from fractions import Fraction

import numpy as np
import pytest

from quadlab.arfamily import (
    Poly4,
    PolyParseError,
    QQi,
    W_VARS,
    ar_operator,
    build_G,
    divisibility_check,
    f_generator,
    is_harmonic,
    laplacian,
    pad_term_with_norm,
    parse_poly,
    polarize,
    q_nonvanishing_check,
)
from quadlab.armap import eval_F
from quadlab.fibers import triple_point

GEN_TEXT = "w*zb*wb^2 - z*zb^2*wb + i*zb*wb"


def test_qqi_arithmetic():
    a = QQi(Fraction(3, 2), Fraction(1, 4))
    b = QQi(0, 1)
    assert a * b == QQi(Fraction(-1, 4), Fraction(3, 2))
    assert (a / a) == QQi(1)
    assert a + (-a) == QQi(0)
    assert (b**2) == QQi(-1)
    assert a.conjugate().im == -a.im
    assert bool(QQi(0)) is False


def test_parse_single_monomial():
    p = parse_poly("zb*wb")
    assert p.terms == {(0, 1, 0, 1): QQi(1)}


def test_parse_generating_polynomial():
    p = parse_poly(GEN_TEXT)
    assert p.terms == {
        (0, 1, 1, 2): QQi(1),
        (1, 2, 0, 1): QQi(-1),
        (0, 1, 0, 1): QQi(0, 1),
    }


def test_parse_error_offset():
    with pytest.raises(PolyParseError) as err:
        parse_poly("z^2 +")
    assert err.value.pos == 5


def test_parse_rejects_garbage():
    for text, pos in (("z^", 2), ("z**2", 2), ("q", 0), ("(z", 2), ("3/0", 2)):
        with pytest.raises(PolyParseError) as err:
            parse_poly(text)
        assert err.value.pos == pos


def test_parse_complex_rational_coefficients():
    p = parse_poly("(3/2+1/4i)*z^2*wb")
    assert p.terms == {(2, 0, 0, 1): QQi(Fraction(3, 2), Fraction(1, 4))}
    q = parse_poly("(3/2-1/4i)*z")
    assert q.terms == {(1, 0, 0, 0): QQi(Fraction(3, 2), Fraction(-1, 4))}


def test_parse_parenthesized_products():
    p = parse_poly("zb*wb*( z*zb + w*wb )")
    assert p.terms == {(1, 2, 0, 1): QQi(1), (0, 1, 1, 2): QQi(1)}


def test_print_parse_roundtrip_fuzz():
    rng = np.random.default_rng(51)
    for _ in range(1000):
        terms = {}
        for _ in range(rng.integers(1, 6)):
            e = tuple(int(v) for v in rng.integers(0, 4, size=4))
            c = QQi(
                Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 8))),
                Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 8))),
            )
            if c:
                terms[e] = c
        p = Poly4(terms)
        assert parse_poly(str(p)) == p


def test_laplacian_examples():
    assert laplacian(parse_poly("z*zb")).terms == {(0, 0, 0, 0): QQi(4)}
    assert laplacian(parse_poly(GEN_TEXT)).is_zero()
    assert laplacian(parse_poly("z*zb - w*wb")).is_zero()


def test_ar_operator_basics():
    assert ar_operator(parse_poly("w")).terms == {(0, 1, 0, 0): QQi(1)}
    with pytest.raises(ValueError):
        ar_operator(parse_poly("3"))
    with pytest.raises(ValueError):
        ar_operator(parse_poly("zb*wb"))  # bidegree (0, 2)


def test_ar_operator_weights():
    # bidegree (2,2) part gets weight 1/(2*3)
    q = parse_poly("w^2*wb^2")
    out = ar_operator(q)
    assert out.terms == {(0, 1, 1, 2): QQi(Fraction(1, 3))}


def test_ar_operator_preserves_harmonicity():
    rng = np.random.default_rng(52)
    for _ in range(200):
        # monomials with a*b = 0 = c*d are harmonic; so are their sums
        terms = {}
        for _ in range(rng.integers(1, 5)):
            a, b = (int(rng.integers(0, 4)), 0) if rng.random() < 0.5 else (0, int(rng.integers(0, 4)))
            c, d = (int(rng.integers(0, 4)), 0) if rng.random() < 0.5 else (0, int(rng.integers(0, 4)))
            if a + c == 0:
                a = 1
            terms[(a, b, c, d)] = QQi(int(rng.integers(-5, 6)), int(rng.integers(-5, 6)))
        q = Poly4(terms)
        if not is_harmonic(q):
            continue
        assert laplacian(ar_operator(q)).is_zero()


def test_polarize_examples():
    assert polarize(parse_poly("zb")).terms == {(0, 1, 0, 0): QQi(1)}
    assert polarize(parse_poly("zb")).vars == W_VARS
    third = parse_poly("w*zb*wb^2 + i*z*zb^2*wb")
    pol = polarize(third)
    assert str(pol) == "w2*w3*w4^2 + i*w1*w2^2*w4"


def test_polarize_agrees_on_real_slices_exactly():
    rng = np.random.default_rng(53)
    p = parse_poly(GEN_TEXT)
    pol = polarize(p)
    for _ in range(1000):
        z = QQi(Fraction(int(rng.integers(-9, 10)), 7), Fraction(int(rng.integers(-9, 10)), 5))
        w = QQi(Fraction(int(rng.integers(-9, 10)), 3), Fraction(int(rng.integers(-9, 10)), 4))
        values = (z, z.conjugate(), w, w.conjugate())
        assert p.eval_exact(values) == pol.eval_exact(values)


def test_f_generator_reproduces_the_map_exactly():
    q, pad = f_generator()
    for part in q.bidegree_parts().values():
        assert is_harmonic(part)
    gmap = build_G(q, pad)
    expected = polarize(parse_poly("w*zb*wb^2 + i*z*zb^2*wb"))
    assert gmap.third_w == expected
    rng = np.random.default_rng(54)
    for _ in range(200):
        W = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        assert np.max(np.abs(gmap(W) - eval_F(W))) <= 1e-12


def test_pad_term_requires_existing_monomial():
    p = parse_poly("z")
    with pytest.raises(KeyError):
        pad_term_with_norm(p, (0, 1, 0, 1))
    padded = pad_term_with_norm(p, (1, 0, 0, 0))
    assert padded == parse_poly("z^2*zb + z*w*wb")


def test_build_G_linear_case():
    gmap = build_G(parse_poly("w"))
    W = np.array([0.3 + 0.1j, 2.0 - 1.0j, 0.5j, 0.7])
    out = gmap(W)
    assert out[0] == W[0] and out[1] == W[2] and out[2] == W[1]


def test_divisibility_check_examples():
    assert divisibility_check(parse_poly("z*zb*w*wb")) is True
    assert divisibility_check(parse_poly("z*zb + w*wb")) is True
    with pytest.raises(ValueError):
        divisibility_check(parse_poly("z*wb"))


def test_divisible_generators_collide_on_triple_points():
    rng = np.random.default_rng(55)
    for _ in range(50):
        terms = {}
        for _ in range(rng.integers(1, 5)):
            a = int(rng.integers(0, 3))
            c = int(rng.integers(0, 3))
            if a + c == 0:
                a = 1
            coeff = QQi(Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 5))))
            if coeff:
                terms[(a, a, c, c)] = coeff
        q = Poly4(terms)
        if not q.terms:
            continue
        assert divisibility_check(q) is True
        gmap = build_G(q)
        for u in (Fraction(1), Fraction(2), Fraction(1, 2)):
            uu = QQi(u)
            wu = (uu, QQi(1) / uu, uu, QQi(0))
            wup = (uu, QQi(0), uu, QQi(1) / uu)
            assert gmap.third_w.eval_exact(wu) == gmap.third_w.eval_exact(wup) == QQi(0)


def test_q_nonvanishing_check_cases():
    norm = parse_poly("z*zb + w*wb")
    mn, _ = q_nonvanishing_check(norm, 500, seed=56)
    assert mn == pytest.approx(1.0, abs=1e-9)

    vanishing = parse_poly("z*zb")
    mn, (z, w) = q_nonvanishing_check(vanishing, 500, seed=56)
    assert mn <= 1e-4
    assert abs(z) <= 1e-2

    skew = parse_poly("2*z*zb + w*wb")
    mn, (z, w) = q_nonvanishing_check(skew, 500, seed=56)
    assert mn == pytest.approx(1.0, abs=1e-6)
    assert abs(z) <= 1e-3


def test_json_roundtrip():
    q, _ = f_generator()
    assert Poly4.from_json(q.to_json()) == q


def test_eval_batch_matches_eval_complex():
    q, pad = f_generator()
    pol = build_G(q, pad).third_w
    rng = np.random.default_rng(57)
    W = rng.standard_normal((100, 4)) + 1j * rng.standard_normal((100, 4))
    batch = pol.eval_batch(W)
    for i in range(100):
        assert abs(batch[i] - pol.eval_complex(W[i])) <= 1e-12
