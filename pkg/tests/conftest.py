from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from slant_hankel.scalars import Scalar
from slant_hankel.symbols import FourierVector, LaurentSymbol

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


rationals = st.builds(Fraction, st.integers(-4, 4), st.integers(1, 4))
scalars = st.builds(Scalar, rationals, rationals)
nonzero_scalars = scalars.filter(bool)


def indices(n, radius=3):
    return st.tuples(*[st.integers(-radius, radius) for _ in range(n)])


def symbols(n, radius=3, max_terms=4):
    return st.dictionaries(indices(n, radius), scalars, max_size=max_terms).map(lambda d: LaurentSymbol(n, d))


def nonzero_symbols(n, radius=3, max_terms=4):
    return st.dictionaries(indices(n, radius), nonzero_scalars, min_size=1, max_size=max_terms).map(
        lambda d: LaurentSymbol(n, d)
    )


def vectors(n, radius=4, max_terms=4):
    return st.dictionaries(indices(n, radius), scalars, max_size=max_terms).map(lambda d: FourierVector(n, d))


dims = st.integers(1, 3)
orders = st.integers(2, 3)
