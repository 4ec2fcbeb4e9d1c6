"""Coalition formation when agents only care about the size of their group."""
from .core import (Agent, ApprovalInstance, InstanceError, IntervalInstance, Partition,
                   PartitionReport, edd_normalize, edd_order, is_edd, is_wonderful,
                   solve_singletons, validate_instance, validate_partition)
from .deletion import (DeletionResult, max_satisfied, max_satisfied_weighted, min_delete,
                       min_delete_weighted, x_delete, x_delete_min_weight)
from .egalitarian import (CostMatrix, approval_instance_at, is_naturally_single_peaked, min_eg,
                          min_eg_general, min_eg_single_peaked, thresholds)
from .interval_dp import decide_wonderful, solve_wonderful
from .reductions import (OrientationInstance, X3CInstance, cover_to_orientation,
                         orientation_to_cover, orientation_to_wp, verify_orientation,
                         wp2_to_orientation, x3c_to_orientation)
from .single_peaked import (CostSpec, SinglePeakedInstance, check_monotone, check_quadrangle,
                            precompute_coalition_costs, solve_single_peaked)

__all__ = [
    'Agent', 'ApprovalInstance', 'CostMatrix', 'CostSpec', 'DeletionResult',
    'InstanceError', 'IntervalInstance', 'OrientationInstance', 'Partition',
    'PartitionReport', 'SinglePeakedInstance', 'X3CInstance', 'approval_instance_at',
    'check_monotone', 'check_quadrangle', 'cover_to_orientation', 'decide_wonderful',
    'edd_normalize', 'edd_order', 'is_edd', 'is_naturally_single_peaked', 'is_wonderful',
    'max_satisfied', 'max_satisfied_weighted', 'min_delete', 'min_delete_weighted',
    'min_eg', 'min_eg_general', 'min_eg_single_peaked', 'orientation_to_cover',
    'orientation_to_wp', 'precompute_coalition_costs', 'solve_single_peaked',
    'solve_singletons', 'solve_wonderful', 'thresholds', 'validate_instance',
    'validate_partition', 'verify_orientation', 'wp2_to_orientation', 'x3c_to_orientation',
    'x_delete', 'x_delete_min_weight',
]
