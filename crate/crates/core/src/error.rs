use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while validating inputs or running the
/// combinatorial pipeline. Indices in messages are 1-based to match the
/// I/O convention; the fields carry the raw 0-based values.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare {
        row: usize,
        len: usize,
        expected: usize,
    },
    #[error("need at least 2 vertices, got {found}")]
    TooFewVertices { found: usize },
    #[error("{found} vertices exceed the supported maximum of {max}")]
    TooManyVertices { found: usize, max: usize },
    #[error("asymmetric matrix: entry ({},{}) is {a} but ({},{}) is {b}", row + 1, col + 1, col + 1, row + 1)]
    AsymmetricMatrix {
        row: usize,
        col: usize,
        a: i64,
        b: i64,
    },
    #[error("negative multiplicity {value} at entry ({},{})", row + 1, col + 1)]
    NegativeMultiplicity { row: usize, col: usize, value: i64 },
    #[error("bad diagonal at vertex {}: found {found}, expected {expected}", vertex + 1)]
    BadDiagonal {
        vertex: usize,
        found: i64,
        expected: i64,
    },
    #[error("loop edge at vertex {}", vertex + 1)]
    LoopEdge { vertex: usize },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("vertex index {} out of range (graph has {vertex_count} vertices)", index + 1)]
    BadVertexIndex { index: usize, vertex_count: usize },
    #[error("edge index {index} out of range (graph has {edge_count} edges)")]
    BadEdgeIndex { index: usize, edge_count: usize },
    #[error("subset of vertices must be proper and nonempty")]
    EmptyOrFullSubset,
    #[error("a choice on the diagonal must pick the same end twice")]
    DiagonalChoiceMismatch,
    #[error("expected {expected} per-vertex values, got {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("degree mismatch: multidegree sums to {degree_d}, polarization to {degree_e}")]
    DegreeMismatch { degree_d: String, degree_e: String },
    #[error("degree relation violated: polarization degree {degree_e} must equal multidegree degree {degree_q} minus 2")]
    DegreeRelation { degree_e: String, degree_q: i64 },
    #[error("polarization has nonzero degree {degree}")]
    NonzeroDegree { degree: String },
    #[error("twisting exceeded {cap} steps without reaching a quasistable multidegree")]
    NonTermination { cap: u64 },
    #[error("singular locus is not solvable")]
    Unsolvable,
    #[error("grid of {points} points exceeds the enumeration cap of {cap}")]
    GridTooLarge { points: u128, cap: u128 },
}
