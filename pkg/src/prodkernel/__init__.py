"""Product-kernel interpolation on grid-like point sets.

Compose positive definite kernels on low-dimensional factor spaces into a
product kernel, assemble grid interpolation matrices as Kronecker products,
work in the tensor Newton basis, and select points with the componentwise
P-greedy algorithm.  A benchmark CLI (``prodkernel``) reproduces the
stability, accuracy, and timing experiments at desk scale.
"""

from prodkernel.backend import active_backend, available_backends, set_backend
from prodkernel.exceptions import (
    BasisBreakdownError,
    CandidatesExhaustedError,
    KernelSpecError,
    NotPositiveDefiniteError,
    PowerBreakdown,
    SizeLimitError,
)
from prodkernel.greedy import (
    CandidateGrid,
    GreedyState,
    TraceEntry,
    greedy_step,
    initial_state,
    run_pgreedy,
    select_component,
    select_point,
    state_interpolant,
    trace_to_csv,
)
from prodkernel.gridpoints import (
    ComponentPointSet,
    GridPointSet,
    embed_scattered,
    enumerate_grid,
    index_decompose,
    project,
    read_points_csv,
    write_points_csv,
)
from prodkernel.interpolation import (
    Interpolant,
    TensorProductInterpolant,
    assemble_direct,
    assemble_kronecker,
    evaluate,
    fit,
    fit_grid,
    fit_tensor_target,
    mse,
    power_function_direct,
)
from prodkernel.kernels import (
    ComponentKernel,
    Family,
    ProductKernel,
    eval_askey,
    eval_wendland_1_3,
    eval_wendland_3_3,
    kernel_eval,
    parse_kernel_spec,
    parse_product_spec,
    product_eval,
)
from prodkernel.newton import (
    NewtonBasis,
    TensorNewtonBasis,
    newton_build,
    newton_coeffs,
    newton_eval,
    newton_eval_many,
    newton_extend,
    power_from_basis,
    power_product,
    tensor_vandermonde,
)

__version__ = "0.1.0"
