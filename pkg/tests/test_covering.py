import numpy as np
import pytest

from conftest import REFERENCE_FACETS, cycle_complex

from liftlap import (
    CocycleError,
    CoveringViolation,
    Graph,
    build_complex,
    coboundary_factorization,
    coboundary_matrix,
    derived_complex,
    derived_graph,
    edge_voltages,
    incidence_graph,
    induced_incidence_voltage,
    verify_covering,
)
from liftlap.perms import identity
from liftlap.randgen import random_complex, random_connected_cover


class TestIncidenceGraph:
    def test_triangle_edge_layer(self, triangle):
        B = incidence_graph(triangle, 1)
        assert (len(B.left), len(B.right), len(B.edges)) == (3, 1, 3)

    def test_triangle_vertex_layer(self, triangle):
        B = incidence_graph(triangle, 0)
        assert (len(B.left), len(B.right), len(B.edges)) == (3, 3, 6)

    def test_reference_complex_edge_layer(self):
        M = build_complex(REFERENCE_FACETS)
        B = incidence_graph(M, 1)
        assert (len(B.left), len(B.right), len(B.edges)) == (12, 6, 18)


class TestDerivedGraph:
    def c3_graph(self):
        return Graph([0, 1, 2], [(0, 1), (1, 2), (0, 2)])

    def test_trivial_voltage_gives_disjoint_copies(self):
        B = self.c3_graph()
        psi = edge_voltages(cycle_complex(3), 2)
        D = derived_graph(B, psi)
        assert len(D.vertices) == 6 and len(D.edges) == 6
        # two components: sheets never mix
        sheets = {v[1] for e in D.edges for v in e}
        assert all(a[1] == b[1] for a, b in D.edges)

    def test_one_swap_gives_six_cycle(self):
        B = self.c3_graph()
        psi = edge_voltages(cycle_complex(3), 2, {(0, 1): (1, 0)})
        D = derived_graph(B, psi)
        assert len(D.vertices) == 6 and len(D.edges) == 6
        assert D.connected
        assert all(len(D.neighbors(v)) == 2 for v in D.vertices)

    def test_single_sheet_copies_the_base(self):
        B = self.c3_graph()
        psi = edge_voltages(cycle_complex(3), 1)
        D = derived_graph(B, psi)
        assert {(u[0], v[0]) for u, v in D.edges} == set(B.edges)


class TestVerifyCovering:
    def test_hexagon_over_triangle(self):
        K = cycle_complex(6)
        M = cycle_complex(3)
        cov = verify_covering(K, M, {v: v % 3 for v in range(6)})
        assert cov.degree == 2
        assert cov.map_face((0, 1)) == (0, 1)

    def test_disconnected_cover_rejected(self):
        K = build_complex([{0, 1, 2}, {3, 4, 5}])
        M = build_complex([{0, 1, 2}])
        with pytest.raises(CoveringViolation) as err:
            verify_covering(K, M, {v: v % 3 for v in range(6)})
        assert err.value.kind == "not-connected"

    def test_path_fails_strong_condition(self):
        K = build_complex([{0, 1}, {1, 2}])
        M = cycle_complex(3)
        with pytest.raises(CoveringViolation) as err:
            verify_covering(K, M, {0: 0, 1: 1, 2: 2})
        assert err.value.kind == "strong-violation"

    def test_degenerate_face_detected(self):
        K = cycle_complex(4)
        M = build_complex([{0, 1}])
        with pytest.raises(CoveringViolation) as err:
            verify_covering(K, M, {0: 0, 1: 1, 2: 0, 3: 1})
        assert err.value.kind in ("degenerate-face", "fiber-overlap", "strong-violation")

    def test_missing_vertex_rejected(self):
        K = cycle_complex(6)
        M = cycle_complex(3)
        with pytest.raises(CoveringViolation) as err:
            verify_covering(K, M, {v: v % 3 for v in range(5)})
        assert err.value.kind == "unmapped-vertex"

    def test_fiber_sizes_constant_across_dimensions(self, c3_double_cover):
        cov = c3_double_cover.covering
        for d in range(0, cov.base.top_dim + 1):
            for g in cov.base.faces(d):
                assert len(cov.labeling.fiber(g)) == cov.degree


class TestDerivedComplex:
    def test_simply_connected_base_disconnects(self, triangle):
        psi = edge_voltages(triangle, 2)
        result = derived_complex(triangle, psi)
        assert not result.connected
        assert len(result.components) == 2

    def test_hexagon_from_swapped_edge(self, c3_double_cover):
        K = c3_double_cover.complex
        assert K.face_count(0) == 6 and K.face_count(1) == 6
        assert c3_double_cover.covering.degree == 2

    def test_near_complete_graph_example(self):
        M = build_complex([{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}])
        psi = edge_voltages(M, 2, {(1, 2): (1, 0)})
        result = derived_complex(M, psi)
        assert result.connected
        assert result.complex.face_count(0) == 8
        assert result.complex.face_count(1) == 10

    def test_cocycle_violation_carries_witness(self, triangle):
        psi = edge_voltages(triangle, 2, {(0, 1): (1, 0)})
        with pytest.raises(CocycleError) as err:
            derived_complex(triangle, psi)
        assert err.value.witness == (0, 1, 2)

    def test_roundtrip_random_covers(self):
        rng = np.random.default_rng(31)
        done = 0
        while done < 12:
            M = random_complex(rng, min_beta1=1)
            out = random_connected_cover(M, int(rng.integers(2, 4)), rng)
            if out is None:
                continue
            psi, result = out
            cov = result.covering
            assert cov is not None and cov.degree == psi.k
            again = verify_covering(result.complex, M, result.vertex_map)
            assert again.degree == psi.k
            done += 1

    def test_simply_connected_random_bases_disconnect(self):
        # every cycle bounds: a cone over anything is simply connected
        rng = np.random.default_rng(32)
        for _ in range(5):
            base = random_complex(rng, max_vertices=5, max_dim=2)
            apex = max(base.vertices) + 1
            cone = build_complex(
                [tuple(f) + (apex,) for f in base.facets()]
            )
            for k in (2, 3):
                psi = __import__("liftlap.randgen", fromlist=["random_edge_voltages"]).random_edge_voltages(
                    cone, k, rng
                )
                if psi is None:
                    continue
                assert not derived_complex(cone, psi).connected


class TestInducedVoltages:
    def test_identity_cover_all_trivial(self):
        M = cycle_complex(3)
        psi = edge_voltages(M, 1)
        cov = derived_complex(M, psi).covering
        iv = induced_incidence_voltage(cov, 0)
        assert all(p == identity(1) for p in iv.perms.values())

    def test_hexagon_single_nontrivial_voltage(self, c3_double_cover):
        iv = induced_incidence_voltage(c3_double_cover.covering, 0)
        nontrivial = [pair for pair, p in iv.perms.items() if p != (0, 1)]
        assert len(nontrivial) == 1

    def test_derived_graph_isomorphic_to_cover_incidence_graph(self):
        rng = np.random.default_rng(33)
        done = 0
        while done < 6:
            M = random_complex(rng, max_vertices=6, min_beta1=1)
            out = random_connected_cover(M, 2, rng)
            if out is None:
                continue
            _, result = out
            cov = result.covering
            for i in range(0, M.top_dim + 1):
                iv = induced_incidence_voltage(cov, i)
                B, gpsi = iv.as_graph_voltages()
                D = derived_graph(B, gpsi)
                BK = incidence_graph(result.complex, i)
                expected = {
                    frozenset((BK.left[a], BK.right[b])) for a, b in BK.edges
                }
                # map derived vertices ((side, face), sheet) through the labeling
                mapped = {
                    frozenset(
                        (
                            cov.labeling.lift(u[0][1], u[1]),
                            cov.labeling.lift(v[0][1], v[1]),
                        )
                    )
                    for u, v in D.edges
                }
                assert mapped == expected
            done += 1


class TestCoboundaryFactorization:
    def test_hexagon_residual_zero(self, c3_double_cover):
        fac = coboundary_factorization(c3_double_cover.covering, 0)
        assert fac.residual == 0

    def test_identity_cover_is_transparent(self):
        M = build_complex([{0, 1, 2}, {2, 3}])
        cov = derived_complex(M, edge_voltages(M, 1)).covering
        for i in range(0, M.top_dim + 1):
            fac = coboundary_factorization(cov, i)
            assert fac.residual == 0
            assert (fac.face_signs.entries == 1).all()
            assert np.array_equal(fac.voltage_coboundary, coboundary_matrix(M, i))

    def test_scrambled_vertex_labels_give_nontrivial_signs(self):
        # relabel the cover so the projection is not monotone; the sign
        # diagonals must absorb the orientation flips exactly
        rng = np.random.default_rng(34)
        done = 0
        saw_negative = False
        while done < 6:
            M = random_complex(rng, max_vertices=6, min_beta1=1, max_dim=3)
            out = random_connected_cover(M, 2, rng)
            if out is None:
                continue
            _, result = out
            K = result.complex
            relabel = {v: r for v, r in zip(K.vertices, rng.permutation(len(K.vertices)))}
            K2 = build_complex(
                [tuple(relabel[v] for v in f) for f in K.facets()],
                include_empty=K.include_empty,
            )
            vmap2 = {relabel[v]: result.vertex_map[v] for v in K.vertices}
            cov2 = verify_covering(K2, M, vmap2)
            for i in range(0, M.top_dim + 1):
                fac = coboundary_factorization(cov2, i)
                assert fac.residual == 0
                saw_negative = saw_negative or (fac.face_signs.entries == -1).any()
            done += 1
        assert saw_negative
