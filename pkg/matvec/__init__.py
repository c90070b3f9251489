"""Fast Hankel matrix-vector products over interchangeable coefficient rings."""
from matvec.decomposition import (
    DecompAccuracyRecord,
    DecomposedSystem,
    Stride,
    bits_lost,
    build_decomposed_system,
    compare_to_oracle,
    decomp_matvec,
    enlarged_complexity_estimate,
    enlarged_dense_product,
    reconstruct,
)
from matvec.errors import (
    ConfigError,
    DimensionError,
    HankelError,
    IndexOutOfRangeError,
    LimbError,
    ParameterError,
    ScaleError,
    ValidationError,
)
from matvec.fft import (
    circulant_matvec_fft,
    fft,
    fft_hankel_matvec,
    fft_operation_estimate,
    linear_convolution,
)
from matvec.karatsuba import (
    KaratsubaConfig,
    OpCountBounds,
    SplitSystem,
    count_operations,
    karatsuba_matvec,
    merge,
    op_count_bounds,
    parallel_karatsuba_matvec,
    split_system,
)
from matvec.rings import (
    CountingRing,
    FixedPointNumber,
    FixedPointRing,
    FloatRing,
    IntegerRing,
    LimbDecomposition,
    OpCountReport,
    Ring,
    counting_scope,
    decompose_limbs,
    limb_as_float,
    make_ring,
    recompose_limbs,
)
from matvec.structured import (
    CirculantMatrix,
    DenseVector,
    HankelMatrix,
    ToeplitzMatrix,
    circulant_matvec,
    circulant_matvec_dense,
    circulant_to_toeplitz,
    element,
    hankel_embed_circulant,
    hankel_from_sequence,
    pad,
    reverse,
    schoolbook_matvec,
    toeplitz_matvec,
    toeplitz_to_hankel,
)
