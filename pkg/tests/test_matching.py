import numpy as np
import pytest

from decoders.matching import (
    DetectionList, MWPMDecoder, Site, SiteKind, TrivialDecoder, make_decoder, matching_weight,
    mwpm_decode, random_syndrome, shortest_path_chain, torus_distance, trivial_decode,
)
from services.repro import check_matching_oracle
from toric.geometry import PauliChain, Syndrome, ToricGeometry
from toric.noise import make_rng, sample_errors
from utils.exceptions import ArgumentError, InvalidSyndromeError


def test_torus_distance_wraps(geometry5):
    g = geometry5
    a = Site(SiteKind.VERTEX, g.site_index(0, 0))
    assert torus_distance(g, a, Site(SiteKind.VERTEX, g.site_index(4, 4))) == 2
    assert torus_distance(g, a, Site(SiteKind.VERTEX, g.site_index(2, 3))) == 4
    assert torus_distance(g, a, a) == 0
    with pytest.raises(ArgumentError):
        torus_distance(g, a, Site(SiteKind.FACE, 0))


@pytest.mark.parametrize("L", [2, 3, 4, 5])
@pytest.mark.parametrize("kind", list(SiteKind))
def test_shortest_path_has_exact_syndrome_and_weight(L, kind):
    g = ToricGeometry(L)
    for a in range(g.n_vertices):
        for b in range(g.n_vertices):
            if a == b:
                continue
            site_a, site_b = Site(kind, a), Site(kind, b)
            chain = shortest_path_chain(g, site_a, site_b)
            syndrome = g.syndrome_of(chain)
            if kind == SiteKind.VERTEX:
                assert syndrome.vertex_detections() == tuple(sorted((a, b)))
                assert syndrome.plaquette_detections() == ()
                assert not chain.x.any()
            else:
                assert syndrome.plaquette_detections() == tuple(sorted((a, b)))
                assert syndrome.vertex_detections() == ()
                assert not chain.z.any()
            assert chain.weight == torus_distance(g, site_a, site_b)


def test_path_tie_prefers_non_wrapping_direction(geometry2):
    g = geometry2
    chain = shortest_path_chain(g, Site(SiteKind.VERTEX, 0), Site(SiteKind.VERTEX, 1))
    assert np.flatnonzero(chain.z).tolist() == [g.h(0, 0)]
    chain = shortest_path_chain(g, Site(SiteKind.VERTEX, 1), Site(SiteKind.VERTEX, 0))
    assert np.flatnonzero(chain.z).tolist() == [g.h(0, 0)]


def test_detection_list_rejects_odd_counts():
    with pytest.raises(InvalidSyndromeError):
        DetectionList.from_syndrome(Syndrome.from_detections(3, vertices=[0, 1, 2]))
    with pytest.raises(InvalidSyndromeError):
        mwpm_decode(ToricGeometry(3), Syndrome.from_detections(3, faces=[4]))


def test_empty_syndrome_gives_identity(geometry3):
    empty = Syndrome.empty(2 * geometry3.n_vertices)
    assert mwpm_decode(geometry3, empty).is_identity
    assert trivial_decode(geometry3, empty).is_identity


def test_wrong_length_syndrome(geometry3):
    with pytest.raises(ArgumentError):
        MWPMDecoder(geometry3).decode(Syndrome.empty(8))


@pytest.mark.parametrize("name", ["mwpm", "trivial"])
@pytest.mark.parametrize("L", [3, 5])
def test_recovery_reproduces_syndrome(name, L):
    g = ToricGeometry(L)
    decoder = make_decoder(name, g)
    x, z = sample_errors(g, 0.15, 200, make_rng(L))
    for bits in g.syndromes_of(x, z):
        syndrome = Syndrome(bits)
        assert g.syndrome_of(decoder(syndrome)) == syndrome


def test_single_qubit_errors_are_corrected_by_mwpm(geometry5):
    g = geometry5
    decoder = MWPMDecoder(g)
    for edge in range(g.n_edges):
        for x_edges, z_edges in (([edge], []), ([], [edge]), ([edge], [edge])):
            error = PauliChain.from_edges(g.n_edges, x_edges=x_edges, z_edges=z_edges)
            assert g.is_success(error, decoder(g.syndrome_of(error)))


def test_trivial_decoder_pairs_in_enumeration_order(geometry5):
    decoder = TrivialDecoder(geometry5)
    syndrome = Syndrome.from_detections(5, vertices=[0, 3, 12, 24])
    pairs = decoder.match(syndrome)
    assert pairs[SiteKind.VERTEX] == [(0, 3), (12, 24)]
    assert pairs[SiteKind.FACE] == []


def test_mwpm_weight_never_exceeds_trivial(geometry5):
    rng = make_rng(8)
    mwpm = MWPMDecoder(geometry5)
    trivial = TrivialDecoder(geometry5)
    for _ in range(200):
        syndrome = random_syndrome(geometry5, rng, max_detections=8)
        for kind in SiteKind:
            assert (matching_weight(geometry5, mwpm.match(syndrome)[kind])
                    <= matching_weight(geometry5, trivial.match(syndrome)[kind]))


def test_unknown_decoder_name(geometry3):
    with pytest.raises(ArgumentError):
        make_decoder("union-find", geometry3)


def test_mwpm_agrees_with_brute_force_oracle():
    comparisons, mismatches = check_matching_oracle(L=5, trials=300, max_detections=10, seed=3)
    assert comparisons == 600
    assert mismatches == []
