"""Capacity-achieving MBR and MSR regenerating codes for clustered storage."""

from .capacity import (capacity_eval, derive, mbr_filesize_pos, mbr_filesize_zero,
                       mbr_point, mbr_theta_pos, mbr_theta_zero, msr_point, s_zero)
from .codes import build, declared_params, reconstruct, repair
from .errors import (ClusterCodeError, FormatError, InconsistentSharesError,
                     InsufficientDataError, ParamError, RegimeError)
from .galois import GF, field_create
from .mdscodec import Matrix, RsCode, mat_solve, rs_create, rs_decode, rs_encode
from .placement import Placement, RepairTranscript
from .topology import (ClusterTopology, NodeId, contact_vectors, incidence_matrix,
                       node_flat, node_pair, omega_star)

__version__ = "0.1.0"
