from __future__ import annotations

from hypothesis import assume, given, settings
from hypothesis import strategies as st

from troptev.exactmath import binomial_gen
from troptev.formula import predicted_counts, trop_tev
from troptev.model import partitions, validate
from troptev.oracle import structured_oracle_seeded

profile = st.lists(st.integers(1, 4), max_size=4)


@st.composite
def contact_data(draw):
    a = draw(st.integers(1, 4))
    n = draw(st.integers(3, 6))
    mu1 = draw(profile)
    s1 = sum(mu1)
    mu3 = draw(st.sampled_from(list(partitions(s1, 4)) or [()]))
    mu2 = draw(profile)
    l4 = 2 * (n - 1) - len(mu1) - len(mu2) - len(mu3)
    assume(l4 >= 0)
    options = list(partitions(a * s1 + sum(mu2), 6, l4))
    assume(options)
    mu4 = draw(st.sampled_from(options))
    return validate(a, n, [mu1, mu2, mu3, mu4])


@settings(max_examples=80, deadline=None)
@given(contact_data(), st.integers(0, 1000))
def test_formula_equals_structured_oracle(g, seed):
    assert trop_tev(g).value == structured_oracle_seeded(g, seed).trop_tev


@settings(max_examples=80, deadline=None)
@given(contact_data())
def test_swap_symmetry_and_sign(g):
    value = trop_tev(g).value
    assert value >= 0
    assert trop_tev(g.swapped()).value == value


@settings(max_examples=80, deadline=None)
@given(contact_data())
def test_labelled_counts_divisible_by_symmetry(g):
    pc = predicted_counts(g)
    assert pc.total_labelled % g.symmetry == 0
    assert (pc.total_labelled == 0) == (trop_tev(g).value == 0)


@given(st.fractions(), st.fractions(), st.integers(0, 8))
def test_vandermonde(x, y, n):
    lhs = sum(binomial_gen(x, k) * binomial_gen(y, n - k) for k in range(n + 1))
    assert lhs == binomial_gen(x + y, n)


@given(st.integers(-30, 30), st.integers(0, 12))
def test_reflection(x, y):
    assert binomial_gen(x, y) == (-1) ** y * binomial_gen(y - x - 1, y)
