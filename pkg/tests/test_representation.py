import numpy as np
import pytest

from contchoquet import (DiscreteMeasure, DomainError, Polytope,
                         RepresentingMeasureConstraint, barycenter,
                         caratheodory_measure, choquet_witness, dirac,
                         extreme_points, in_L, repair_witness,
                         supported_on_extremes, transport_to_extremes)


def is_vertex_set(atoms, P):
    return all(any(np.array_equal(a, v) for v in P.vertices) for a in atoms)


class TestCaratheodory:
    def test_vertex(self, square):
        mu = caratheodory_measure(square, [1, -1])
        assert len(mu) == 1 and np.array_equal(mu.atoms[0], [1, -1])

    def test_triangle_centroid(self, triangle):
        mu = caratheodory_measure(triangle, [1 / 3, 1 / 3])
        assert len(mu) == 3
        assert np.allclose(mu.weights, 1 / 3, atol=1e-12)

    def test_square_center(self, square):
        mu = caratheodory_measure(square, [0, 0])
        assert len(mu) <= 3 and is_vertex_set(mu.atoms, square)
        assert np.linalg.norm(barycenter(mu)) <= 1e-9

    def test_outside_certificate(self, square):
        with pytest.raises(DomainError) as info:
            caratheodory_measure(square, [3, 0.5])
        f = info.value.certificate
        assert np.linalg.norm(f) == pytest.approx(1.0)
        assert f @ np.array([3, 0.5]) > (square.vertices @ f).max()

    def test_random_instances(self):
        rng = np.random.default_rng(0)
        for _ in range(100):
            d = int(rng.integers(1, 6))
            P = extreme_points(rng.normal(size=(int(rng.integers(1, 30)), d)))
            x = rng.dirichlet(np.ones(len(P))) @ P.vertices
            mu = caratheodory_measure(P, x)
            assert np.linalg.norm(barycenter(mu) - x) <= 1e-9
            assert (mu.weights > 1e-15).sum() <= d + 1
            assert is_vertex_set(mu.atoms, P)

    def test_boundary_within_tolerance(self, square):
        mu = caratheodory_measure(square, [1 + 5e-10, 0.0])
        assert np.linalg.norm(barycenter(mu) - [1, 0]) <= 1e-9


class TestChoquetWitness:
    def test_square(self, square):
        c = RepresentingMeasureConstraint(square, [0, 0], 0.01)
        assert in_L(choquet_witness(c), c)

    def test_triangle(self, triangle):
        c = RepresentingMeasureConstraint(triangle, [1 / 3, 1 / 3], 1e-8)
        assert in_L(choquet_witness(c), c)


class TestTransport:
    def test_on_vertices(self, square):
        mu = DiscreteMeasure(square.vertices[:2], [0.3, 0.7])
        out, snap = transport_to_extremes(mu, square)
        assert snap == 0.0 and np.array_equal(out.atoms, mu.atoms)

    def test_near_vertices(self, square):
        mu = DiscreteMeasure([[1 - 1e-7, 1], [-1, -1 + 5e-7]], [0.5, 0.5])
        out, snap = transport_to_extremes(mu, square)
        assert snap <= 1e-6 and is_vertex_set(out.atoms, square)

    def test_shift_bounded_by_snap(self):
        rng = np.random.default_rng(1)
        for _ in range(200):
            d = int(rng.integers(1, 4))
            P = extreme_points(rng.normal(size=(8, d)))
            k = int(rng.integers(1, 6))
            mu = DiscreteMeasure(rng.normal(size=(k, d)), rng.dirichlet(np.ones(k)))
            out, snap = transport_to_extremes(mu, P)
            assert np.array_equal(out.weights, mu.weights)
            assert len(out) <= len(mu)
            assert np.linalg.norm(barycenter(out) - barycenter(mu)) <= snap + 1e-12


class TestRepair:
    def test_unchanged_when_member(self, square):
        c = RepresentingMeasureConstraint(square, [0, 0], 0.1)
        mu = DiscreteMeasure([[1, 1], [-1, -1]], [0.5, 0.5])
        out, w = repair_witness(mu, c, full_output=True)
        assert out is mu and w == 0.0

    def test_blend_weight_at_least_half(self, square):
        gamma = 0.1
        # barycenter (0.2, 0) is 2*gamma from the target (0, 0)
        mu = DiscreteMeasure([[1, 1], [1, -1], [-1, 1], [-1, -1]],
                             [0.3, 0.3, 0.2, 0.2])
        c = RepresentingMeasureConstraint(square, [0, 0], gamma)
        out, w = repair_witness(mu, c, full_output=True)
        assert w >= 0.5 - 1e-9
        assert in_L(out, c)

    def test_transport_alone(self, square):
        mu = DiscreteMeasure([[0.99, 0.99], [-0.99, -0.99]], [0.5, 0.5])
        c = RepresentingMeasureConstraint(square, [0, 0], 0.5)
        out, w = repair_witness(mu, c, full_output=True)
        assert w == 0.0 and supported_on_extremes(out, square, 0.0)

    def test_always_in_L(self):
        rng = np.random.default_rng(2)
        for _ in range(100):
            d = int(rng.integers(1, 4))
            P = extreme_points(rng.normal(size=(7, d)))
            x = rng.dirichlet(np.ones(len(P))) @ P.vertices
            c = RepresentingMeasureConstraint(P, x, 10 ** rng.uniform(-6, 0))
            k = int(rng.integers(1, 5))
            mu = DiscreteMeasure(rng.normal(size=(k, d)), rng.dirichlet(np.ones(k)))
            assert in_L(repair_witness(mu, c), c)
