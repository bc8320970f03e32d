import numpy as np
import pytest

from contchoquet import (CoverError, DiscreteMeasure, InputError,
                         RefinementError, TestFunctionFamily, build_cover,
                         constant_family, continuous_selection, evaluate,
                         l_delta, michael_epsilon_selection, nearest_point,
                         partition_of_unity, rotation_family, selection_audit,
                         translation_family, verify_delta_selection,
                         vertex_interpolation)
from contchoquet.selection import Chart, CoverWithWitnesses, cover_gaps

from conftest import SQUARE

UNIT = [[0, 0], [1, 0], [0, 1], [1, 1]]
FAM = TestFunctionFamily(0, 2, 64)


def dirac_chart(center, radius, x):
    return Chart(center, radius, DiscreteMeasure([x], [1.0]))


class TestEpsilonSelection:
    def test_constant(self):
        sel = michael_epsilon_selection(constant_family(SQUARE), 0.1,
                                        np.linspace(0, 1, 5), x0=[3, 0])
        assert np.allclose(sel.values, [1, 0])
        assert sel.max_distance == 0.0

    def test_translation(self):
        F = translation_family(SQUARE, [1, 0])
        sel = michael_epsilon_selection(F, 0.1, np.linspace(0, 1, 3))
        assert sel.passed and (sel.audit_distances < 0.1).all()
        assert sel.audit_ts.size >= 10 * (sel.breakpoints.size - 1)

    def test_rotation_unit_square(self):
        F = rotation_family(UNIT)
        sel = michael_epsilon_selection(F, 0.05, np.linspace(0, 1, 11), x0=[0.5, 0.5])
        assert sel.passed
        for t in np.linspace(0, 1, 37):
            assert nearest_point(evaluate(F, t), sel(t))[1] < 0.05

    def test_without_lipschitz_bound(self):
        F = rotation_family(UNIT)
        G = type(F)(F.evaluator, F.domain, F.dim, None)
        sel = michael_epsilon_selection(G, 0.05, np.linspace(0, 1, 3))
        assert sel.passed

    def test_eps_positive(self):
        with pytest.raises(InputError):
            michael_epsilon_selection(constant_family(SQUARE), 0.0, [0, 1])

    def test_refinement_failure(self):
        # a jump the bisection can never resolve
        F = vertex_interpolation([0, 1], [SQUARE, SQUARE])
        jump = type(F)(lambda t: evaluate(F, 0).translate([0.0 if t < 0.5 else 1.0, 0]),
                       (0.0, 1.0), 2, None)
        with pytest.raises(RefinementError):
            michael_epsilon_selection(jump, 0.1, [0, 1])


class TestContinuousSelection:
    def test_interior_reference(self):
        p = continuous_selection(rotation_family(SQUARE), [0.1, 0.2])
        for t in np.linspace(0, 1, 11):
            assert np.allclose(p(t), [0.1, 0.2])

    def test_translation_closed_form(self):
        F = translation_family(np.array(SQUARE) + [2, 0], [1, 0])
        p = continuous_selection(F, [0, 0])
        for t in np.linspace(0, 1, 11):
            assert np.allclose(p(t), [t + 1, 0], atol=1e-12)

    def test_constant(self):
        p = continuous_selection(constant_family(SQUARE), [5, 5])
        assert all(np.allclose(p(t), [1, 1]) for t in (0, 0.3, 1))

    @pytest.mark.parametrize("x_ref", [[0.5, 0.5], [3, -2], [-10, 0]])
    def test_stability_audit(self, x_ref):
        F = rotation_family(UNIT)
        rows = selection_audit(F, continuous_selection(F, x_ref), np.linspace(0, 1, 101))
        assert all(r.passed for r in rows)
        assert max(r.membership_gap for r in rows) <= 1e-10


class TestCoverAndPartition:
    def test_gaps(self):
        charts = [dirac_chart(0.0, 0.3, [0, 0]), dirac_chart(0.5, 0.25, [0, 0]),
                  dirac_chart(1.0, 0.3, [0, 0])]
        assert cover_gaps(charts, (0, 1)) == []
        charts[1] = dirac_chart(0.5, 0.1, [0, 0])
        assert cover_gaps(charts, (0, 1)) == [(0.3, 0.4), (0.6, 0.7)]
        # touching open intervals leave the shared point uncovered
        touching = [dirac_chart(0.25, 0.5, [0, 0]), dirac_chart(1.0, 0.25, [0, 0])]
        assert cover_gaps(touching, (0, 1)) == [(0.75, 0.75)]

    def test_partition_sums_to_one(self):
        rng = np.random.default_rng(0)
        centers = np.linspace(0, 1, 9)
        radii = rng.uniform(0.13, 0.3, 9)
        cover = CoverWithWitnesses([dirac_chart(c, r, [0, 0]) for c, r in
                                    zip(centers, radii)], (0.0, 1.0))
        pou = partition_of_unity(cover)
        for t in np.linspace(0, 1, 10_000):
            w = pou(t)
            assert (w >= 0).all() and abs(w.sum() - 1) <= 1e-12
            assert (w[np.abs(t - centers) >= radii] == 0).all()

    def test_uncovered(self):
        pou = partition_of_unity(CoverWithWitnesses([dirac_chart(0, 0.1, [0, 0])], (0, 1)))
        with pytest.raises(InputError):
            pou(0.5)

    def test_l_delta_single_chart(self):
        cover = CoverWithWitnesses([dirac_chart(0.0, 0.6, [1, 1]),
                                    dirac_chart(1.0, 0.6, [-1, -1])], (0.0, 1.0))
        pou = partition_of_unity(cover)
        assert l_delta(cover, pou, 0.1) is cover.charts[0].witness

    def test_l_delta_midpoint(self):
        cover = CoverWithWitnesses([dirac_chart(0.0, 0.6, [1, 1]),
                                    dirac_chart(1.0, 0.6, [-1, -1])], (0.0, 1.0))
        mu = l_delta(cover, partition_of_unity(cover), 0.5)
        assert np.allclose(mu.weights, [0.5, 0.5])

    def test_l_delta_valid_measure(self):
        rng = np.random.default_rng(1)
        cover = CoverWithWitnesses([dirac_chart(c, 0.2, rng.normal(size=2))
                                    for c in np.linspace(0, 1, 8)], (0.0, 1.0))
        pou = partition_of_unity(cover)
        for t in rng.uniform(0, 1, 200):
            mu = l_delta(cover, pou, t)
            assert (mu.weights >= 0).all() and abs(mu.weights.sum() - 1) <= 1e-12

    def test_l_delta_domain(self):
        cover = CoverWithWitnesses([dirac_chart(0.5, 1.0, [0, 0])], (0.0, 1.0))
        with pytest.raises(InputError):
            l_delta(cover, partition_of_unity(cover), 1.5)


class TestBuildCover:
    def test_constant_single_chart(self):
        F = constant_family(SQUARE)
        p = continuous_selection(F, [0.2, 0.1])
        cover = build_cover(F, p, 0.1, 0.1, FAM, 40, [0.5])
        assert len(cover.charts) == 1
        assert cover_gaps(cover.charts, F.domain) == []

    def test_translation(self):
        F = translation_family(SQUARE, [1, 0])
        p = continuous_selection(F, [-2, 0.5])
        cover = build_cover(F, p, 0.1, 0.1, FAM, 40, np.linspace(0, 1, 11))
        assert cover_gaps(cover.charts, F.domain) == []
        assert min(c.radius for c in cover.charts) > 1e-3

    def test_tiny_delta_fails(self):
        F = translation_family(SQUARE, [50, 0])
        p = continuous_selection(F, [0.3, 0.2])
        with pytest.raises(CoverError) as info:
            build_cover(F, p, 0.1, 1e-9, FAM, 40, np.linspace(0, 1, 3),
                        max_doublings=3)
        assert 0.0 <= info.value.worst_t <= 1.0

    def test_truncation_index_checked(self):
        F = constant_family(SQUARE)
        with pytest.raises(InputError):
            build_cover(F, continuous_selection(F, [0, 0]), 0.1, 0.1, FAM, 3, [0.5])


class TestVerify:
    def run(self, F, x_ref, gamma=0.1, delta=0.1, n_audit=201):
        p = continuous_selection(F, x_ref)
        cover = build_cover(F, p, gamma, delta, FAM, 40, np.linspace(*F.domain, 11))
        pou = partition_of_unity(cover)
        audit = np.linspace(*F.domain, n_audit)
        return p, cover, verify_delta_selection(F, p, cover, pou, gamma, delta,
                                                FAM, 40, audit)

    def test_constant(self):
        _, _, rep = self.run(constant_family(SQUARE), [0.2, 0.1])
        assert rep.passed and rep.max_distance == 0.0

    def test_translation(self):
        _, _, rep = self.run(translation_family(SQUARE, [1, 0]), [-2, 0.5])
        assert rep.passed and rep.max_distance < 0.1
        assert np.isfinite(rep.modulus)

    def test_parallel_matches_serial(self):
        F = translation_family(SQUARE, [1, 0])
        p, cover, rep = self.run(F, [-2, 0.5], n_audit=51)
        pou = partition_of_unity(cover)
        rep4 = verify_delta_selection(F, p, cover, pou, 0.1, 0.1, FAM, 40,
                                      np.linspace(0, 1, 51), jobs=4)
        assert [r.distance for r in rep4.rows] == [r.distance for r in rep.rows]

    def test_halved_radii_on_covered_points(self):
        F = rotation_family(UNIT)
        p, cover, _ = self.run(F, [0.5, 0.5], n_audit=11)
        small = cover.with_radii(0.5)
        pou = partition_of_unity(small)
        audit = [t for t in np.linspace(0, 1, 401)
                 if any(abs(t - c.center) < c.radius for c in small.charts)]
        rep = verify_delta_selection(F, p, small, pou, 0.1, 0.1, FAM, 40, audit)
        assert len(audit) > 0 and rep.passed
