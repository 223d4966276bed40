from .bootstrap import LeastSquaresBootstrap, lsr_selfrep, build_affinity, normalize_degree
from .kernel import KernelMatrix, learn_kernel, validate_kernel, check_mult_triangle
from .nystrom import NystromKernel, nystrom_approx, assemble_nystrom
from .solver import SolverConfig, solve_representation
from .spectral import LabelVector, affinity_from_z, spectral_cluster, count_components
from .metrics import accuracy, nmi, purity, evaluate
from .datagen import make_two_moons, make_three_rings, make_four_functions
from .pipeline import PipelineConfig, run_pipeline
from .sweep import Sweep, parameter_grid
