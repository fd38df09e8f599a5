//! Published iteration counts for the boundary observation problem on the
//! curved domains, used as acceptance targets. Columns follow
//! [`DEFAULT_ALPHAS`](crate::config::DEFAULT_ALPHAS).

/// A reference table with its per-cell tolerance.
#[derive(Debug, Clone, Copy)]
pub struct ReferenceTable {
    pub name: &'static str,
    pub dim: usize,
    pub degree: usize,
    pub exact: bool,
    pub tolerance: usize,
    /// `(level, dof, counts)`
    pub rows: &'static [(u32, usize, [usize; 6])],
}

pub const EXACT_2D: ReferenceTable = ReferenceTable {
    name: "2D exact Schur",
    dim: 2,
    degree: 2,
    exact: true,
    tolerance: 5,
    rows: &[(3, 264, [21, 36, 33, 22, 9, 5]), (4, 904, [21, 35, 38, 26, 9, 5]), (5, 3336, [21, 35, 35, 29, 10, 5])],
};

pub const PRACTICAL_2D: ReferenceTable = ReferenceTable {
    name: "2D practical",
    dim: 2,
    degree: 2,
    exact: false,
    tolerance: 5,
    rows: &[(3, 264, [24, 38, 39, 34, 23, 19]), (4, 904, [25, 38, 41, 36, 22, 18]), (5, 3336, [25, 38, 40, 34, 22, 17])],
};

pub const PRACTICAL_3D: ReferenceTable = ReferenceTable {
    name: "3D practical",
    dim: 3,
    degree: 3,
    exact: false,
    tolerance: 6,
    rows: &[(2, 811, [20, 35, 41, 32, 19, 16]), (3, 3391, [23, 35, 43, 40, 22, 18])],
};

pub const ALL: [ReferenceTable; 3] = [EXACT_2D, PRACTICAL_2D, PRACTICAL_3D];

/// Qualitative limits that hold in every reference table.
pub const MAX_ITERATIONS: usize = 45;
pub const MAX_LEVEL_GROWTH: f64 = 0.15;
