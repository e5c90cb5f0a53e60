import itertools

import numpy as np
import pytest

from monodual.complexes import (
    ChainMap,
    ChainMapError,
    Complex,
    chain_map_space,
    compose,
    desuspend,
    direct_sum,
    invert,
    is_isomorphism,
    random_chain_map,
    random_complex,
    suspend,
    validate,
)
from monodual.flinalg import Matrix

import random


def disc(p=3, top=1):
    """[F_p -1-> F_p] in degrees top -> top-1."""
    return Complex.make(p, top - 1, (1, 1), (Matrix.make([[1]], p),))


def test_validate_zero_differential():
    c = Complex.make(3, 0, (2, 1, 3), (Matrix.zeros(2, 1, 3), Matrix.zeros(1, 3, 3)))
    assert validate(c)


def test_validate_rejects_identity_twice():
    one = Matrix.make([[1]], 3)
    c = Complex.make(3, 0, (1, 1, 1), (one, one))
    assert not validate(c)


def test_suspend_disc_negates():
    d = disc()
    s = suspend(d)
    assert (s.min_degree, s.max_degree) == (1, 2)
    assert s.diffs[0] == Matrix.make([[-1]], 3)


def test_suspend_zero_differentials_stay_zero():
    c = Complex.make(3, -1, (2, 2), (Matrix.zeros(2, 2, 3),))
    s = suspend(c)
    assert s.min_degree == 0 and all(m.is_zero() for m in s.diffs)


def test_strict_suspension_roundtrip():
    for seed in range(100):
        c = random_complex(seed, 3, 3)
        assert suspend(desuspend(c)) == c
        assert desuspend(suspend(c)) == c


def test_compose_identity_and_degrees():
    rng = random.Random(0)
    a = random_complex(1, 3, 3)
    b = random_complex(2, 3, 3)
    f = random_chain_map(rng, a, b)
    assert compose(ChainMap.identity(b), f) == f
    assert compose(f, ChainMap.identity(a)) == f
    with pytest.raises(ValueError):
        compose(f, f)  # b != a in general for these seeds
    assert b != a


def test_random_chain_maps_commute():
    rng = random.Random(1)
    for seed in range(30):
        a = random_complex(100 + seed, 3, 3)
        b = random_complex(200 + seed, 3, 3)
        f = random_chain_map(rng, a, b)
        for i in a.degrees():
            assert b.diff(i) @ f.component(i) == f.component(i - 1) @ a.diff(i)


def test_chain_map_certification_failure():
    a = disc()
    b = Complex.point(3, 1, 1)
    # the projection onto degree 1 does not commute with the disc differential
    with pytest.raises(ChainMapError):
        ChainMap.make(a, b, {1: Matrix.make([[1]], 3)}, 0)


def test_chain_map_space_scalars():
    pt = Complex.point(3, 0, 1)
    assert len(chain_map_space(pt, pt)) == 1


def test_chain_map_space_disc_to_point():
    # disc with top degree 0: the projection to degree 0 is a chain map
    a = disc(top=0)
    b = Complex.point(3, 0, 1)
    assert len(chain_map_space(a, b)) == 1
    # with the disc's top at degree 1, no nonzero chain map exists
    assert len(chain_map_space(disc(top=1), b)) == 0


def _brute_chain_map_count(a, b):
    slots = [(i, b.dim(i), a.dim(i)) for i in a.degrees()]
    entries = sum(r * c for _, r, c in slots)
    count = 0
    for vals in itertools.product(range(3), repeat=entries):
        comps = {}
        k = 0
        for i, r, c in slots:
            m = np.array(vals[k : k + r * c], dtype=np.int64).reshape(r, c)
            comps[i] = Matrix.make(m, 3)
            k += r * c
        ok = True
        for i in range(a.min_degree, a.max_degree + 2):
            lhs = b.diff(i) @ comps.get(i, Matrix.zeros(b.dim(i - 1), a.dim(i), 3))
            fm1 = comps.get(i - 1, Matrix.zeros(b.dim(i - 1), a.dim(i - 1), 3))
            if lhs != fm1 @ a.diff(i):
                ok = False
                break
        if ok:
            count += 1
    return count


def test_chain_map_space_matches_exhaustive_count():
    for sa, sb in [(11, 12), (13, 14), (15, 16)]:
        a = random_complex(sa, 2, 1)
        b = random_complex(sb, 2, 1)
        dim = len(chain_map_space(a, b))
        assert 3 ** dim == _brute_chain_map_count(a, b)


def test_random_complex_determinism_and_validity():
    for seed in range(100):
        c1 = random_complex(seed, 3, 3)
        c2 = random_complex(seed, 3, 3)
        assert c1 == c2
        assert validate(c1)


def test_random_complex_covers_both_differential_kinds():
    zero_diff = nonzero_diff = 0
    for seed in range(100):
        c = random_complex(seed, 3, 3)
        if any(not m.is_zero() for m in c.diffs):
            nonzero_diff += 1
        elif c.total_dim():
            zero_diff += 1
    assert zero_diff > 0 and nonzero_diff > 0


def test_empty_complex_is_valid_zero_object():
    e = Complex.empty(3)
    assert validate(e) and e.total_dim() == 0
    c = random_complex(5, 2, 2)
    assert direct_sum([e, c]) == direct_sum([c, e]) == direct_sum([c])


def test_direct_sum_validates_and_adds_dims():
    a = random_complex(21, 3, 3)
    b = random_complex(22, 3, 3)
    s = direct_sum([a, b])
    assert validate(s)
    assert s.total_dim() == a.total_dim() + b.total_dim()


def test_invert_roundtrip():
    a = random_complex(31, 2, 2)
    f = ChainMap.identity(a).scale(2)
    assert is_isomorphism(f)
    assert compose(invert(f), f) == ChainMap.identity(a)


def test_json_roundtrip():
    rng = random.Random(7)
    a = random_complex(41, 3, 3)
    b = random_complex(42, 3, 3)
    assert Complex.from_json(a.to_json()) == a
    f = random_chain_map(rng, a, b)
    assert ChainMap.from_json(f.to_json()) == f
