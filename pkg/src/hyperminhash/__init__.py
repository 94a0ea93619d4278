"""HyperMinHash: MinHash buckets stored as LogLog exponent + short mantissa.

Mergeable sketches for distinct counts, Jaccard indices and intersection
sizes, with an exact model of accidental bucket collisions.
"""

__version__ = "0.1.0"

from ._accel import backend
from .collisions import (
    CollisionEstimate,
    collision_bound,
    estimate_collisions,
    expected_collisions_approx,
    expected_collisions_exact,
    gamma_bound,
    recommend_params,
    variance_bound,
)
from .errors import (
    CardinalityTooLargeError,
    CorruptFileError,
    EmptySketchError,
    HyperMinHashError,
    IncompatibleSketchError,
    InfeasibleError,
    ParameterError,
    SaturatedSketchError,
    SketchFileError,
    TruncatedFileError,
    UnsupportedVersionError,
)
from .estimators import (
    JaccardResult,
    estimate_cardinality,
    hll_subestimate,
    intersection,
    jaccard,
)
from .hashing import HASH_ID, HashWords, derive_words, rho, sigma
from .minhash import MhParams, MhSketch, mh_insert, mh_jaccard, mh_union
from .serialization import deserialize, read_sketch, serialize, write_sketch
from .sketch import (
    Bucket,
    HmhSketch,
    SketchParams,
    bucket_less,
    insert,
    new_sketch,
    pack_bucket,
    sketch_of,
    union,
    unpack_bucket,
)
