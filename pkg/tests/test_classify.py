import pytest

from hypothesis import given, settings, strategies as st

from polyprod.polyprod_setup import PolyprodSetup
from polyprod.polyprod_types import (
    Branch, OddFaceCertificate, SubgraphCertificate, TwoCutCertificate, Verdict,
)
from polyprod.src.classify import (
    check_theorem1, check_theorem2, check_theorem4, classify_kronecker_factor, classify_product,
    format_verdict, is_3_polytope, kronecker_double, product_invariant_violations, theorem1_conditions,
    verify_theorem4_certificate, vertex_deletion_witness,
)
from polyprod.src.graph_core import (
    add_edges, from_edge_list, is_bipartite, is_k_connected, min_degree, relabel, vertex_connectivity,
)
from polyprod.src.planar_embed import (
    enumerate_embeddings, is_planar, rotation_count, test_planarity as planarity,
)
from polyprod.src.products import (
    complete, complete_bipartite, cube, cycle, diamond, path, prism, product, twisted_prism, wheel,
)

from .test_graph_core import atlas_graphs, grown_graphs


# two triangular prisms sharing the top edge 0-1; bottoms 3-4-5 and 7-8-9
glued_prisms = from_edge_list(10, [
    (0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3), (1, 4), (2, 5),
    (1, 6), (0, 6), (7, 8), (8, 9), (7, 9), (0, 7), (1, 8), (6, 9),
])
# two K4 sharing the edge 0-1
glued_k4 = from_edge_list(6, [
    (0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (0, 4), (0, 5), (1, 4), (1, 5), (4, 5),
])
# two triangular prisms sharing a rung 0-1
glued_on_rung = from_edge_list(10, [
    (0, 2), (2, 4), (0, 4), (1, 3), (3, 5), (1, 5), (0, 1), (2, 3), (4, 5),
    (0, 6), (6, 8), (0, 8), (1, 7), (7, 9), (1, 9), (6, 7), (8, 9),
])
# cube plus both diagonals of the face 0-1-3-2
cube_with_chords = add_edges(cube(), [(0, 3), (1, 2)])


def _agrees(H, setup=None):
    return classify_kronecker_factor(H, setup=setup).accepted == is_3_polytope(kronecker_double(H))


@pytest.mark.parametrize("G, expected", zip(
    [complete(4), prism(6), complete_bipartite(3, 3), cycle(5), from_edge_list(3, [(0, 1), (1, 2), (0, 2)])],
    [True, True, False, False, False],
))
def test_oracle(G, expected):
    assert is_3_polytope(G) == expected


@pytest.mark.parametrize("H, branch", zip(
    [wheel(3), wheel(5), wheel(7), wheel(9), prism(3), prism(5)],
    [Branch.THM1_C3, Branch.THM1_C3, Branch.THM1_C3, Branch.THM1_C3, Branch.THM1_C1, Branch.THM1_C1],
))
def test_theorem1_accepts(H, branch):
    verdict = classify_kronecker_factor(H)
    assert verdict.accepted
    assert verdict.branch is branch
    assert is_3_polytope(kronecker_double(H))


def test_odd_wheel_certificate_names_apex_and_rim():
    verdict = check_theorem1(wheel(5), planarity(wheel(5)))
    cert = verdict.certificate
    assert isinstance(cert, OddFaceCertificate)
    assert cert.apex == 0
    assert cert.special_face.vertices == frozenset(range(1, 6))


@pytest.mark.parametrize("n", [4, 6, 8])
def test_even_wheels_reject(n):
    verdict = classify_kronecker_factor(wheel(n))
    assert not verdict.accepted
    assert verdict.reason == "Thm1: no condition holds"
    assert not is_3_polytope(kronecker_double(wheel(n)))


@pytest.mark.parametrize("H, reason", zip(
    [cube(), cycle(5), from_edge_list(3, [(0, 1), (1, 2), (0, 2)]),
     from_edge_list(8, [(0, 1), (2, 3)] + [(u, v) for u in range(4, 8) for v in range(u + 1, 8)])],
    ["product disconnected: factor is bipartite", "min degree 2 < 3 at vertex 0",
     "factor has 3 < 4 vertices", "factor disconnected"],
))
def test_precondition_rejects(H, reason):
    verdict = classify_kronecker_factor(H)
    assert verdict.branch is Branch.REJECT
    assert verdict.reason == reason


def test_cut_vertex_rejects():
    # two K4 sharing vertex 3
    H = from_edge_list(7, [(u, v) for u in range(4) for v in range(u + 1, 4)]
                       + [(u, v) for u in range(3, 7) for v in range(u + 1, 7)])
    verdict = classify_kronecker_factor(H)
    assert verdict.reason == "cut vertex 3"


def test_glued_prisms_accept_by_two_cut_rule():
    verdict = classify_kronecker_factor(glued_prisms)
    assert verdict.accepted and verdict.branch is Branch.THM2
    cert = verdict.certificate
    assert isinstance(cert, TwoCutCertificate)
    assert {f.vertices for f in cert.cut_free_faces} == {frozenset({3, 4, 5}), frozenset({7, 8, 9})}
    assert [w.cut for w in cert.cuts] == [(0, 1)]
    for walk in cert.cuts[0].odd_walks:
        assert walk[0] == walk[-1] and (len(walk) - 1) % 2 == 1
    P = kronecker_double(glued_prisms)
    assert P.n == 20 and is_3_polytope(P)


@pytest.mark.parametrize("H", [glued_k4, glued_on_rung])
def test_two_cut_rule_rejects(H):
    assert vertex_connectivity(H) == 2
    verdict = classify_kronecker_factor(H)
    assert not verdict.accepted
    assert verdict.reason.startswith("Thm2:")
    assert not is_3_polytope(kronecker_double(H))


def test_twisted_prism_accepts_with_second_order():
    H = twisted_prism(2)
    verdict = classify_kronecker_factor(H)
    assert verdict.accepted and verdict.branch is Branch.THM4_ORD2
    cert = verdict.certificate
    assert isinstance(cert, SubgraphCertificate)
    assert verify_theorem4_certificate(H, cert)


def test_cube_with_crossing_chords_accepts():
    verdict = check_theorem4(cube_with_chords)
    assert verdict.accepted
    assert verify_theorem4_certificate(cube_with_chords, verdict.certificate)
    assert classify_kronecker_factor(cube_with_chords).accepted
    assert is_3_polytope(kronecker_double(cube_with_chords))


def test_cube_with_crossing_chords_meets_product_invariants():
    assert sorted(cube_with_chords.degree(v) for v in range(8)) == [3, 3, 3, 3, 4, 4, 4, 4]
    assert product_invariant_violations(cube_with_chords) == []


def test_k5_rejects():
    verdict = classify_kronecker_factor(complete(5))
    assert verdict.reason == "Thm4: no 2-coloring yields a qualifying subgraph"


def test_tampered_certificate_fails_replay():
    H = twisted_prism(2)
    cert = check_theorem4(H).certificate
    assert not verify_theorem4_certificate(H, cert._replace(removed=cert.removed[:1]))
    flipped = tuple(1 - c for c in cert.coloring.color[:1]) + cert.coloring.color[1:]
    assert not verify_theorem4_certificate(H, cert._replace(coloring=cert.coloring._replace(color=flipped)))


def test_small_embed_cap_delegates_to_oracle():
    verdict = check_theorem4(twisted_prism(2), setup=PolyprodSetup(embed_cap=3))
    assert verdict.branch is Branch.DELEGATED
    assert verdict.accepted
    assert format_verdict(verdict).startswith("ACCEPT Delegated (embedding cap 3")


@pytest.mark.parametrize("H", atlas_graphs(4, 6))
def test_oracle_agreement(H):
    assert _agrees(H)


@pytest.mark.slow
@pytest.mark.parametrize("H", atlas_graphs(7, 7))
def test_oracle_agreement_7(H):
    assert _agrees(H)


_accepted_small = [H for H in atlas_graphs(4, 6) if classify_kronecker_factor(H).accepted]


@pytest.mark.parametrize("H", _accepted_small)
def test_accepted_products_satisfy_invariants(H):
    assert product_invariant_violations(H) == []
    assert vertex_deletion_witness(H) is None


def test_degree_three_count_four_gives_quadrangulation():
    H = wheel(3)
    P = kronecker_double(H)
    assert product_invariant_violations(H, P) == []
    assert min_degree(P) == 3


def test_vertex_deletion_witness_on_square_pyramid():
    assert vertex_deletion_witness(wheel(4)) == 0


_polyhedral = [H for H in atlas_graphs(4, 7) if is_k_connected(H, 3) and is_planar(H)]


@pytest.mark.parametrize("H", _polyhedral)
def test_theorem1_conditions_are_exclusive(H):
    assert len(theorem1_conditions(H, planarity(H))) <= 1


_two_connected_planar = [
    H for H in atlas_graphs(4, 6)
    if vertex_connectivity(H) == 2 and min_degree(H) >= 3 and is_planar(H) and rotation_count(H) <= 10000
]


@pytest.mark.parametrize("H", _two_connected_planar + [glued_k4])
def test_two_cut_rule_is_embedding_invariant(H):
    flags = {check_theorem2(H, E).accepted for E in enumerate_embeddings(H)}
    assert len(flags) == 1


def _replace_edge(G, edge, size):
    """Swap the edge u-v for a block of `size` new vertices hung on u and v."""
    u, v = edge
    x, y, z = G.n, G.n + 1, G.n + 2
    if size == 2:
        block = [(x, y), (u, x), (u, y), (v, x), (v, y)]
    else:
        block = [(x, y), (y, z), (x, z), (u, x), (u, y), (v, z)]
    kept = [e for e in G.edges() if set(e) != {u, v}]
    return from_edge_list(G.n + size, kept + block)


def _larger_two_connected_planar():
    built = [
        _replace_edge(prism(3), (0, 1), 2),
        _replace_edge(wheel(4), (1, 2), 3),
        _replace_edge(prism(3), (0, 1), 3),
        _replace_edge(prism(3), (0, 2), 3),
        _replace_edge(wheel(5), (1, 2), 3),
        _replace_edge(complete(4), (0, 1), 2),
    ]
    found = [
        H for H in atlas_graphs(7, 7) + list(grown_graphs(8))
        if min_degree(H) >= 3 and vertex_connectivity(H) == 2 and is_planar(H) and rotation_count(H) <= 10000
    ]
    return found + built


@pytest.mark.slow
def test_two_cut_rule_is_embedding_invariant_up_to_nine_vertices():
    graphs = _larger_two_connected_planar()
    assert {H.n for H in graphs} == {6, 7, 8, 9}
    for H in graphs:
        assert vertex_connectivity(H) == 2 and min_degree(H) >= 3 and is_planar(H), f"{H}"
        flags = {check_theorem2(H, E).accepted for E in enumerate_embeddings(H)}
        assert len(flags) == 1, f"{H}"
        assert _agrees(H), f"{H}"


_planar_in_domain = [
    H for H in atlas_graphs(4, 6)
    if is_planar(H) and min_degree(H) >= 3 and vertex_connectivity(H) >= 2 and not is_bipartite(H)
]


@pytest.mark.parametrize("H", _planar_in_domain)
def test_subgraph_search_agrees_on_planar_factors(H):
    verdict = check_theorem4(H)
    assert verdict.accepted == classify_kronecker_factor(H).accepted
    if verdict.accepted:
        assert verify_theorem4_certificate(H, verdict.certificate)


@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_verdict_invariant_under_relabeling(data):
    H = data.draw(st.sampled_from(atlas_graphs(4, 6)))
    perm = data.draw(st.permutations(list(range(H.n))))
    assert classify_kronecker_factor(relabel(H, perm)).accepted == classify_kronecker_factor(H).accepted


@pytest.mark.parametrize("H, J, kind, accepted, branch", [
    (diamond(), complete(2), "cartesian", True, Branch.CART),
    (path(4), cycle(7), "cartesian", True, Branch.CART),
    (complete(2), cycle(5), "cartesian", True, Branch.CART),
    (complete(3), complete(3), "cartesian", False, Branch.REJECT),
    (path(3), path(3), "strong", True, Branch.STRONG),
    (complete(2), complete(2), "strong", True, Branch.STRONG),
    (complete(2), path(3), "strong", False, Branch.REJECT),
    (wheel(3), complete(2), "kronecker", True, Branch.THM1_C3),
    (wheel(3), path(3), "kronecker", False, Branch.REJECT),
    (wheel(3), path(4), "kronecker", False, Branch.REJECT),
    (wheel(3), complete(1), "cartesian", True, Branch.ORACLE),
    (cycle(5), complete(1), "strong", False, Branch.ORACLE),
])
def test_classify_product(H, J, kind, accepted, branch):
    verdict = classify_product(H, J, kind)
    assert verdict.accepted == accepted
    assert verdict.branch is branch
    assert verdict.accepted == is_3_polytope(product(H, J, kind))


def test_kronecker_dispatch_names_the_factor():
    verdict = classify_product(path(3), wheel(5), "kronecker")
    assert verdict.reason == "kronecker: smaller factor is not K2"


def _pairs(max_n, max_product):
    graphs = atlas_graphs(2, max_n)
    return [
        (A, B) for i, A in enumerate(graphs) for B in graphs[i:]
        if A.n * B.n <= max_product
    ]


@pytest.mark.parametrize("A, B", _pairs(6, 12))
def test_cartesian_agrees_with_oracle(A, B):
    assert classify_product(A, B, "cartesian").accepted == is_3_polytope(product(A, B, "cartesian"))


@pytest.mark.slow
@pytest.mark.parametrize("A, B", [p for p in _pairs(7, 24) if p[0].n * p[1].n > 12])
def test_cartesian_agrees_with_oracle_24(A, B):
    assert classify_product(A, B, "cartesian").accepted == is_3_polytope(product(A, B, "cartesian"))


@pytest.mark.parametrize("A, B", _pairs(4, 16))
def test_strong_agrees_with_oracle(A, B):
    assert classify_product(A, B, "strong").accepted == is_3_polytope(product(A, B, "strong"))


@pytest.mark.slow
def test_strong_polytopes_up_to_five_vertices():
    found = [
        (A.n, A.m, B.n, B.m) for A, B in _pairs(5, 25) if is_3_polytope(product(A, B, "strong"))
    ]
    assert sorted(found) == [(2, 1, 2, 1), (3, 2, 3, 2)]


def test_format_verdict():
    assert format_verdict(classify_kronecker_factor(wheel(4))) == "REJECT (Thm1: no condition holds)"
    lines = format_verdict(classify_kronecker_factor(complete(4))).splitlines()
    assert lines[0] == "ACCEPT Thm1-C3"
    assert lines[1] == "condition: C3"
    assert sum(line.startswith("odd face:") for line in lines) == 4
    assert any(line.startswith("apex:") for line in lines)
    lines = format_verdict(classify_kronecker_factor(twisted_prism(2))).splitlines()
    assert lines[0] == "ACCEPT Thm4-ord2"
    assert "order: ord2" in lines
    assert format_verdict(Verdict(accepted=True, branch=Branch.CART)) == "ACCEPT Cart"


def test_format_verdict_lists_odd_walk_per_cut_component():
    verdict = classify_kronecker_factor(glued_prisms)
    lines = format_verdict(verdict).splitlines()
    assert "cut 0 1: components 2 3 4 5 | 6 7 8 9" in lines
    walks = [line.split(": ", 1)[1] for line in lines if line.startswith("  odd walk: ")]
    assert len(walks) == 2
    assert walks == [" ".join(map(str, w)) for w in verdict.certificate.cuts[0].odd_walks]
    for text, comp in zip(walks, verdict.certificate.cuts[0].components):
        vertices = [int(x) for x in text.split()]
        assert vertices[0] == vertices[-1] and len(vertices) % 2 == 0
        assert set(vertices) <= set(comp)
