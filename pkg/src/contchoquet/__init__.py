"""Executable finite-dimensional versions of the continuous Choquet and
Krein-Milman constructions for moving convex polytopes."""
from .exceptions import CoverError, DomainError, InputError, RefinementError
from .geometry import (Polytope, contains, direction, directed_hausdorff,
                       extreme_points, hausdorff, nearest_point,
                       slice_vertices, sphere_directions, support,
                       support_gap_sampled)
from .measures import (DiscreteMeasure, RepresentingMeasureConstraint,
                       TestFunctionFamily, barycenter, dirac, from_record,
                       gamma_represents, in_L, integrate, mixture,
                       representation_gap, supported_on_extremes, to_record,
                       weak_star_distance)
from .parametric import (ParametricBody, affine_family, constant_family,
                         continuity_audit, evaluate, exposing_direction,
                         lsc_ext_audit, rotation_family, track_extreme_point,
                         translation_family, vertex_interpolation)
from .representation import (caratheodory_measure, choquet_witness,
                             repair_witness, transport_to_extremes)
from .selection import (CoverWithWitnesses, PartitionOfUnity, build_cover,
                        continuous_selection, l_delta,
                        michael_epsilon_selection, partition_of_unity,
                        selection_audit, verify_delta_selection)

__version__ = "0.1.0"
