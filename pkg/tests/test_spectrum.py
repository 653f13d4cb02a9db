import itertools
import math

import pytest
from hypothesis import given, strategies as st

from dpasim.errors import ConfigError, DomainError
from dpasim.spectrum import (SPEED_OF_LIGHT, AggregationClass, Band, BandCatalog, Regime,
                             Service, Tier, classify_aggregation, default_catalog, wavelength)


def test_wavelength_examples():
    # frozen from lambda = c / f with c = 2.998e8 m/s
    assert wavelength(28) == pytest.approx(0.010707, abs=5e-7)
    assert wavelength(60) == pytest.approx(0.004997, abs=5e-7)
    assert wavelength(56) == wavelength(28) / 2


@pytest.mark.parametrize("f", [0, -1, -28.0])
def test_wavelength_rejects_non_positive(f):
    with pytest.raises(DomainError):
        wavelength(f)


@given(st.floats(0.1, 300), st.floats(0.1, 300))
def test_wavelength_monotone_and_exact(f1, f2):
    assert abs(wavelength(f1) * f1 * 1e9 - SPEED_OF_LIGHT) <= 1e-9 * SPEED_OF_LIGHT
    if f1 < f2:
        assert wavelength(f1) > wavelength(f2)


def test_default_catalog_contents(catalog):
    ids = catalog.ids()
    for needed in ("cell_28", "cell_37", "cell_39", "cell_u71", "wigig_ch1", "cell_sub6"):
        assert needed in ids
    assert catalog["cell_28"].regime is Regime.LICENSED
    assert catalog["cell_u71"].regime is Regime.UNLICENSED
    assert catalog["cell_u71"].service is Service.CELLULAR
    assert catalog["wigig_ch2"].bandwidth_mhz == 2160
    assert catalog["cell_37"].bandwidth_mhz == 400
    assert catalog["cell_sub6"].tier is Tier.SUB6
    # every WiGig channel sits inside 57-71 GHz
    for b in catalog.select(service=Service.WIFI, tier=Tier.MMWAVE):
        assert 57 <= b.low_ghz and b.high_ghz <= 71


def test_catalog_roundtrip(catalog):
    assert BandCatalog.from_dicts(catalog.to_dicts()) == catalog


def test_catalog_rejects_duplicates_and_overlap():
    a = Band("a", Service.CELLULAR, Regime.LICENSED, 28.0, 400)
    with pytest.raises(ConfigError):
        BandCatalog([a, a])
    b = Band("b", Service.CELLULAR, Regime.LICENSED, 28.1, 400)
    with pytest.raises(ConfigError):
        BandCatalog([a, b])
    # different services may overlap
    BandCatalog([a, Band("w", Service.WIFI, Regime.UNLICENSED, 28.1, 400)])


def test_band_tier_must_match_frequency():
    with pytest.raises(ConfigError):
        Band("x", Service.CELLULAR, Regime.LICENSED, 28.0, 400, Tier.SUB6)


def test_classify_examples(catalog):
    assert classify_aggregation({catalog["cell_u71"], catalog["wigig_ch1"]}) is AggregationClass.SUPER_CA
    assert classify_aggregation({catalog["cell_28"]}) is AggregationClass.NONE
    assert classify_aggregation({catalog["cell_sub6"], catalog["cell_laa5"]}) is AggregationClass.LAA


def test_classify_more_rows(catalog):
    # licensed mmWave + unlicensed mmWave cellular stays LAA
    assert classify_aggregation([catalog["cell_28"], catalog["cell_u71"]]) is AggregationClass.LAA
    # licensed sub-6 anchor with an unlicensed mmWave carrier spans tiers
    assert classify_aggregation([catalog["cell_sub6"], catalog["cell_u71"]]) is AggregationClass.SUPER_CA
    # two licensed carriers are plain CA, not a licensed/unlicensed mix
    assert classify_aggregation([catalog["cell_28"], catalog["cell_39"]]) is AggregationClass.NONE
    with pytest.raises(DomainError):
        classify_aggregation([])


bands = st.lists(st.sampled_from(default_catalog().bands), min_size=1, max_size=6, unique=True)


@given(bands, st.randoms(use_true_random=False))
def test_classify_permutation_invariant(sel, rnd):
    shuffled = list(sel)
    rnd.shuffle(shuffled)
    assert classify_aggregation(sel) is classify_aggregation(shuffled)


@given(bands, bands)
def test_superca_is_monotone(sel, extra):
    if classify_aggregation(sel) is AggregationClass.SUPER_CA:
        assert classify_aggregation(set(sel) | set(extra)) is AggregationClass.SUPER_CA


def test_classify_exhaustive_pairs_are_deterministic(catalog):
    for a, b in itertools.combinations(catalog.bands, 2):
        assert classify_aggregation([a, b]) is classify_aggregation([b, a])
        if a.service is not b.service:
            assert classify_aggregation([a, b]) is AggregationClass.SUPER_CA


def test_bandwidth_hz(catalog):
    assert math.isclose(catalog["wigig_ch1"].bandwidth_hz, 2.16e9)
