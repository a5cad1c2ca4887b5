import numpy as np

from openroots import Poly


def random_poly(rng, degree, scale=1.0, monic=True):
    """Random dense complex polynomial of exactly the given degree."""
    low = rng.normal(size=degree) * scale + 1j * rng.normal(size=degree) * scale
    lead = 1.0 if monic else complex(rng.normal(), rng.normal())
    while lead == 0:
        lead = complex(rng.normal(), rng.normal())
    return Poly(list(low) + [lead])


def random_point(rng, radius=2.0):
    r = radius * np.sqrt(rng.uniform())
    t = rng.uniform(0.0, 2.0 * np.pi)
    return complex(r * np.cos(t), r * np.sin(t))
