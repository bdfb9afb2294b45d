import numpy as np
import pytest

from qclab.domains import TWO_PI, disk, ellipse, fourier_polar
from qclab.errors import ParameterError


@pytest.mark.parametrize("dom", [disk(), disk(0.5, 0.2 + 0.1j), ellipse(1, 0.6),
                                 fourier_polar([1, 0, 0, 0.2, 0])], ids=lambda d: d.name)
def test_derivatives_match_finite_differences(dom):
    t = np.linspace(0, TWO_PI, 37)
    eps = 1e-5
    fd1 = (dom.point(t + eps) - dom.point(t - eps)) / (2 * eps)
    fd2 = (dom.point(t + eps) - 2 * dom.point(t) + dom.point(t - eps)) / eps**2
    assert np.max(np.abs(fd1 - dom.tangent(t))) < 1e-8
    assert np.max(np.abs(fd2 - dom.second(t))) < 1e-4


def test_domains_are_simple_and_positively_oriented():
    for dom in (disk(), ellipse(), fourier_polar([1, 0.1, 0, 0.2, 0.05])):
        assert dom.is_simple()
        _, z = dom.sample(2048)
        area = 0.5 * np.sum((np.conj(z) * np.roll(z, -1)).imag)
        assert area > 0


def test_contains_polar_and_ray_cast_agree(rng):
    dom = fourier_polar([1, 0, 0, 0.2, 0])
    pts = rng.uniform(-1.3, 1.3, 500) + 1j * rng.uniform(-1.3, 1.3, 500)
    from qclab.domains import _ray_cast
    assert np.array_equal(dom.contains(pts), _ray_cast(dom, pts))


@pytest.mark.parametrize("bad", [lambda: disk(0), lambda: ellipse(1, -1),
                                 lambda: fourier_polar([1, 2, 0]), lambda: fourier_polar([1, 0])])
def test_invalid_parameters(bad):
    with pytest.raises(ParameterError):
        bad()
