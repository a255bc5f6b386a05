import numpy as np
from hypothesis import HealthCheck, settings

from branekit.exterior4 import Form2, LinearMap4, pullback_form2
from branekit.torus_forms import standard_brane, standard_kahler, standard_symplectic

settings.register_profile(
    "ci",
    derandomize=True,
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ci")


def random_int_gl4(rng, bound=2):
    """A random integer 4x4 matrix with positive determinant."""
    while True:
        m = rng.integers(-bound, bound + 1, size=(4, 4))
        det = round(np.linalg.det(m))
        if det > 0:
            return LinearMap4.from_rows(m.tolist())


def random_brane_pair(rng):
    """Pull the standard brane pair back by a random orientation-preserving
    integer linear map; stays an exact brane pair."""
    p = random_int_gl4(rng)
    omega = pullback_form2(p, standard_symplectic())
    f = pullback_form2(p, standard_brane())
    kahler = pullback_form2(p, standard_kahler())
    return omega, f, kahler


def random_form2(rng, bound=3) -> Form2:
    return Form2.from_coeffs(tuple(int(v) for v in rng.integers(-bound, bound + 1, size=6)))
