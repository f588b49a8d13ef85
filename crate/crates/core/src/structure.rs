//! Admissible-gain subspaces and their structure sets.
//!
//! A gain subspace 𝒮 ⊂ ℝ^{m×n} is carried as a [`StructureBasis`]. Its
//! structure set is the set of square `Q` for which every `S_j Q` stays in
//! 𝒮, i.e. `S_j Q = Σ_i Λ_ij S_i` for some k×k matrix `Λ`. Stacked over `j`
//! this is the homogeneous system `L(I_k ⊗ Q) = L(Λ ⊗ I_n)` with
//! `L = [S_1 | … | S_k]`; [`compute_structure_set`] solves it as a nullspace
//! problem and returns the linear hull together with the map `Q ↦ Λ`.

use crate::error::{Error, Result};
use crate::matops::{self, ensure_finite, unit, unvec, vec, Mat, Vector, DEFAULT_RANK_TOL};

/// Ordered, linearly independent basis `S_1 … S_k` of a gain subspace.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureBasis {
    m: usize,
    n: usize,
    mats: Vec<Mat>,
}

impl StructureBasis {
    pub fn new(m: usize, n: usize, mats: Vec<Mat>) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::InvalidStructure("gain dimensions must be positive".into()));
        }
        if mats.is_empty() {
            return Err(Error::InvalidStructure("basis must contain at least one matrix".into()));
        }
        if mats.len() > m * n {
            return Err(Error::InvalidStructure(format!(
                "{} basis matrices exceed dimension {} of the gain space",
                mats.len(),
                m * n
            )));
        }
        for (i, s) in mats.iter().enumerate() {
            if s.shape() != (m, n) {
                return Err(Error::DimensionMismatch(format!(
                    "basis matrix {i} is {}x{}, expected {m}x{n}",
                    s.nrows(),
                    s.ncols()
                )));
            }
            ensure_finite(s, &format!("basis matrix {i}"))?;
        }
        let stacked = Mat::from_columns(&mats.iter().map(vec).collect::<Vec<_>>());
        let rank = matops::rank(&stacked, DEFAULT_RANK_TOL)?;
        if rank != mats.len() {
            return Err(Error::InvalidStructure(format!(
                "basis matrices are linearly dependent (rank {rank} < {})",
                mats.len()
            )));
        }
        Ok(StructureBasis { m, n, mats })
    }

    /// Number of gain rows (inputs).
    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of gain columns (states).
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.mats.len()
    }

    pub fn mats(&self) -> &[Mat] {
        &self.mats
    }

    /// `L = [S_1 | S_2 | … | S_k]`, an m × (k·n) matrix.
    pub fn l_matrix(&self) -> Mat {
        let mut l = Mat::zeros(self.m, self.k() * self.n);
        for (j, s) in self.mats.iter().enumerate() {
            l.columns_mut(j * self.n, self.n).copy_from(s);
        }
        l
    }

    /// `Σ_i coeffs_i · S_i`.
    pub fn combine(&self, coeffs: &[f64]) -> Mat {
        self.mats
            .iter()
            .zip(coeffs)
            .fold(Mat::zeros(self.m, self.n), |acc, (s, c)| acc + s * *c)
    }

    /// Least-squares coordinates of `k` and the Frobenius residual.
    pub fn project(&self, k: &Mat) -> Result<(Vector, f64)> {
        matops::lstsq_residual(&self.mats, k)
    }
}

/// Binary zero pattern: `true` marks an entry forced to zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroPatternMask {
    m: usize,
    n: usize,
    forced_zero: Vec<bool>,
}

impl ZeroPatternMask {
    /// `forced_zero` is row-major with `m·n` entries.
    pub fn new(m: usize, n: usize, forced_zero: Vec<bool>) -> Result<Self> {
        if m == 0 || n == 0 || forced_zero.len() != m * n {
            return Err(Error::DimensionMismatch(format!(
                "mask of {} flags does not fit {m}x{n}",
                forced_zero.len()
            )));
        }
        if forced_zero.iter().all(|&z| z) {
            return Err(Error::InvalidStructure("mask has no free entry".into()));
        }
        Ok(ZeroPatternMask { m, n, forced_zero })
    }

    /// Rows of 0/1 flags, 1 meaning "forced zero".
    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("mask rows differ in length".into()));
        }
        let mut flags = Vec::with_capacity(m * n);
        for (i, r) in rows.iter().enumerate() {
            for (j, &v) in r.iter().enumerate() {
                match v {
                    0 => flags.push(false),
                    1 => flags.push(true),
                    _ => {
                        return Err(Error::InvalidStructure(format!(
                            "mask entry ({i},{j}) is {v}, expected 0 or 1"
                        )))
                    }
                }
            }
        }
        Self::new(m, n, flags)
    }

    pub fn full(m: usize, n: usize) -> Result<Self> {
        Self::new(m, n, vec![false; m * n])
    }

    /// Square mask freeing only the diagonal blocks of the given sizes.
    pub fn block_diagonal(dims: &[usize]) -> Result<Self> {
        let n: usize = dims.iter().sum();
        let owner = block_owner(dims);
        let flags = (0..n * n).map(|idx| owner[idx / n] != owner[idx % n]).collect();
        Self::new(n, n, flags)
    }

    pub fn diagonal(n: usize) -> Result<Self> {
        Self::block_diagonal(&vec![1; n])
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_free(&self, i: usize, j: usize) -> bool {
        !self.forced_zero[i * self.n + j]
    }

    pub fn free_count(&self) -> usize {
        self.forced_zero.iter().filter(|z| !**z).count()
    }

    pub fn is_symmetric(&self) -> bool {
        self.m == self.n
            && (0..self.n).all(|i| (0..self.n).all(|j| self.is_free(i, j) == self.is_free(j, i)))
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (0..self.m)
            .map(|i| (0..self.n).map(|j| u8::from(!self.is_free(i, j))).collect())
            .collect()
    }

    /// Whether `k` has exact zeros on every forced entry.
    pub fn admits(&self, k: &Mat) -> bool {
        k.shape() == (self.m, self.n)
            && (0..self.m).all(|i| (0..self.n).all(|j| self.is_free(i, j) || k[(i, j)] == 0.0))
    }
}

fn block_owner(dims: &[usize]) -> Vec<usize> {
    dims.iter()
        .enumerate()
        .flat_map(|(b, &d)| std::iter::repeat_n(b, d))
        .collect()
}

/// Subsystem block sizes for states and inputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockPartition {
    state_dims: Vec<usize>,
    input_dims: Vec<usize>,
}

impl BlockPartition {
    pub fn new(state_dims: Vec<usize>, input_dims: Vec<usize>) -> Result<Self> {
        if state_dims.is_empty() || input_dims.is_empty() {
            return Err(Error::InvalidStructure("partition needs at least one block".into()));
        }
        if state_dims.iter().chain(&input_dims).any(|&d| d == 0) {
            return Err(Error::InvalidStructure("block dimensions must be positive".into()));
        }
        Ok(BlockPartition { state_dims, input_dims })
    }

    /// Scalar blocks: `n` one-dimensional states and `m` one-dimensional inputs.
    pub fn scalar(n: usize, m: usize) -> Result<Self> {
        Self::new(vec![1; n], vec![1; m])
    }

    pub fn state_dims(&self) -> &[usize] {
        &self.state_dims
    }

    pub fn input_dims(&self) -> &[usize] {
        &self.input_dims
    }

    pub fn n(&self) -> usize {
        self.state_dims.iter().sum()
    }

    pub fn m(&self) -> usize {
        self.input_dims.iter().sum()
    }

    pub fn state_offsets(&self) -> Vec<usize> {
        offsets(&self.state_dims)
    }

    pub fn input_offsets(&self) -> Vec<usize> {
        offsets(&self.input_dims)
    }
}

fn offsets(dims: &[usize]) -> Vec<usize> {
    dims.iter()
        .scan(0, |acc, &d| {
            let start = *acc;
            *acc += d;
            Some(start)
        })
        .collect()
}

/// Canonical basis `{E_ij : (i,j) free}`, enumerated row-major.
pub fn basis_from_mask(mask: &ZeroPatternMask) -> Result<StructureBasis> {
    let mut mats = Vec::with_capacity(mask.free_count());
    for i in 0..mask.m() {
        for j in 0..mask.n() {
            if mask.is_free(i, j) {
                mats.push(unit(mask.m(), mask.n(), i, j));
            }
        }
    }
    StructureBasis::new(mask.m(), mask.n(), mats)
}

/// Gain mask sharing the block zero pattern of `Bᵀ`.
///
/// Gain block `(j, i)` (input block `j`, state block `i`) is free exactly
/// when block `B_ij` has a nonzero entry.
pub fn decentralized_mask(b: &Mat, part: &BlockPartition) -> Result<ZeroPatternMask> {
    let (n, m) = b.shape();
    if n != part.n() || m != part.m() {
        return Err(Error::DimensionMismatch(format!(
            "B is {n}x{m} but the partition describes {}x{}",
            part.n(),
            part.m()
        )));
    }
    let so = part.state_offsets();
    let io = part.input_offsets();
    let mut flags = vec![true; m * n];
    for (&s0, &sd) in so.iter().zip(part.state_dims()) {
        for (&i0, &id) in io.iter().zip(part.input_dims()) {
            let nonzero = b.view((s0, i0), (sd, id)).iter().any(|&x| x != 0.0);
            if nonzero {
                for r in i0..i0 + id {
                    for c in s0..s0 + sd {
                        flags[r * n + c] = false;
                    }
                }
            }
        }
    }
    ZeroPatternMask::new(m, n, flags)
}

/// Basis of the coordinated-control subspace.
///
/// Block column `i` of every gain is `(δ_ji − 1/N)·K_i` down the block rows
/// `j`, so the induced inputs sum to zero across subsystems. All input
/// blocks must share one size for the blocks `K_i` to fit every block row.
pub fn coordinated_basis(part: &BlockPartition) -> Result<StructureBasis> {
    let blocks = part.state_dims().len();
    if blocks < 2 {
        return Err(Error::InvalidStructure("coordination needs at least two blocks".into()));
    }
    if part.input_dims().len() != blocks {
        return Err(Error::InvalidStructure(format!(
            "{blocks} state blocks but {} input blocks",
            part.input_dims().len()
        )));
    }
    let mi = part.input_dims()[0];
    if part.input_dims().iter().any(|&d| d != mi) {
        return Err(Error::InvalidStructure(
            "coordinated inputs must all have the same dimension".into(),
        ));
    }
    let (m, n) = (part.m(), part.n());
    let inv_n = 1.0 / blocks as f64;
    let so = part.state_offsets();
    let mut mats = Vec::new();
    for (i, (&s0, &sd)) in so.iter().zip(part.state_dims()).enumerate() {
        for r in 0..mi {
            for c in 0..sd {
                let mut s = Mat::zeros(m, n);
                for j in 0..blocks {
                    let delta = if i == j { 1.0 } else { 0.0 };
                    s[(j * mi + r, s0 + c)] = delta - inv_n;
                }
                mats.push(s);
            }
        }
    }
    StructureBasis::new(m, n, mats)
}

/// Linear hull of the structure set plus the certificate map `Q ↦ Λ`.
#[derive(Debug, Clone)]
pub struct StructureSetDescription {
    n: usize,
    k: usize,
    q_basis: Vec<Mat>,
    /// Column `l` is `vec(Λ)` for `q_basis[l]`.
    lambda_map: Mat,
    equality_form: Vec<Mat>,
}

impl StructureSetDescription {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Dimension of the hull.
    pub fn dim(&self) -> usize {
        self.q_basis.len()
    }

    /// Frobenius-orthonormal basis of the hull.
    pub fn q_basis(&self) -> &[Mat] {
        &self.q_basis
    }

    /// Functionals (as matrices under the Frobenius pairing) vanishing on the hull.
    pub fn equality_form(&self) -> &[Mat] {
        &self.equality_form
    }

    pub fn lambda_map(&self) -> &Mat {
        &self.lambda_map
    }

    /// Hull element with the given coordinates.
    pub fn element(&self, coords: &[f64]) -> Mat {
        self.q_basis
            .iter()
            .zip(coords)
            .fold(Mat::zeros(self.n, self.n), |acc, (q, c)| acc + q * *c)
    }

    /// Frobenius coordinates of `q` in the hull basis.
    pub fn coords(&self, q: &Mat) -> Vec<f64> {
        self.q_basis.iter().map(|b| b.dot(q)).collect()
    }

    /// Distance from `q` to the hull in Frobenius norm.
    pub fn projection_residual(&self, q: &Mat) -> f64 {
        (q - self.element(&self.coords(q))).norm()
    }

    pub fn lambda_of_coords(&self, coords: &[f64]) -> Mat {
        let v = &self.lambda_map * Vector::from_column_slice(coords);
        Mat::from_column_slice(self.k, self.k, v.as_slice())
    }

    /// Certificate Λ of a hull element (the component off the hull is dropped).
    pub fn lambda_of(&self, q: &Mat) -> Mat {
        self.lambda_of_coords(&self.coords(q))
    }

    /// Per-entry flags: `true` where some hull element is nonzero.
    pub fn free_pattern(&self, tol: f64) -> Vec<Vec<bool>> {
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| self.q_basis.iter().map(|q| q[(i, j)] * q[(i, j)]).sum::<f64>().sqrt() > tol)
                    .collect()
            })
            .collect()
    }
}

/// Solves `S_j Q = Σ_i Λ_ij S_i` (j ∈ [k]) for the hull of the structure set.
///
/// With `Π` the orthogonal projector onto the complement of 𝒮, `Q` belongs
/// to the hull iff `Π vec(S_j Q) = Π (I_n ⊗ S_j) vec(Q) = 0` for every `j`;
/// the stacked (k·m·n) × n² system is solved as a nullspace problem. Since
/// the `S_i` are independent, each `Λ` is then the unique coefficient array
/// of the products `S_j Q` in the basis.
pub fn compute_structure_set(basis: &StructureBasis, tol: f64) -> Result<StructureSetDescription> {
    if tol <= 0.0 || !tol.is_finite() {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let (m, n, k) = (basis.m(), basis.n(), basis.k());
    let (mn, nq) = (m * n, n * n);
    let design = Mat::from_columns(&basis.mats().iter().map(vec).collect::<Vec<_>>());
    let range = matops::range_basis(&design, DEFAULT_RANK_TOL)?;
    if range.ncols() != k {
        return Err(Error::DegenerateStructure("basis lost rank".into()));
    }
    let complement = Mat::identity(mn, mn) - &range * range.transpose();

    let eye_n = Mat::identity(n, n);
    let mut system = Mat::zeros(k * mn, nq);
    for (j, sj) in basis.mats().iter().enumerate() {
        // vec(S_j Q) = (I_n ⊗ S_j) vec(Q)
        system
            .view_mut((j * mn, 0), (mn, nq))
            .copy_from(&(&complement * matops::kron(&eye_n, sj)));
    }
    // the projected system can vanish entirely (every Q admissible), so rank
    // is judged against the norm of the unprojected stack [S_1; …; S_k]
    let stacked = Mat::from_fn(k * m, n, |r, c| basis.mats()[r / m][(r % m, c)]);
    let scale = matops::singular_values(&stacked)?.max();
    let null = matops::nullspace_scaled(&system, tol, scale)?;
    if null.ncols() == 0 {
        return Err(Error::DegenerateStructure("structure system has a trivial nullspace".into()));
    }

    // coefficients in the (generally non-orthogonal) basis: c = D⁺ vec(·)
    let svd = matops::svd(&design)?;
    let inv_s = Mat::from_diagonal(&svd.singular_values.map(|s| 1.0 / s));
    let pinv = svd.v_t.transpose() * inv_s * svd.u.transpose();

    let d = null.ncols();
    let mut q_basis = Vec::with_capacity(d);
    let mut lambda_map = Mat::zeros(k * k, d);
    for l in 0..d {
        let q = unvec(&null.column(l).into_owned(), n, n)?;
        for (j, sj) in basis.mats().iter().enumerate() {
            let coeffs = &pinv * vec(&(sj * &q));
            lambda_map.view_mut((j * k, l), (k, 1)).copy_from(&coeffs);
        }
        q_basis.push(q);
    }

    let equality_form = matops::nullspace(&null.transpose(), tol)?
        .column_iter()
        .map(|c| unvec(&c.into_owned(), n, n))
        .collect::<Result<Vec<_>>>()?;

    Ok(StructureSetDescription { n, k, q_basis, lambda_map, equality_form })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matops::from_rows;

    fn example1_b() -> Mat {
        from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]]).unwrap()
    }

    #[test]
    fn decentralized_mask_of_example_b() {
        let part = BlockPartition::scalar(3, 2).unwrap();
        let mask = decentralized_mask(&example1_b(), &part).unwrap();
        assert_eq!(mask.to_rows(), vec![vec![0, 1, 0], vec![1, 0, 0]]);
        assert_eq!(basis_from_mask(&mask).unwrap().k(), 4);
    }

    #[test]
    fn decentralized_mask_identity_b_is_diagonal() {
        let part = BlockPartition::scalar(3, 3).unwrap();
        let mask = decentralized_mask(&Mat::identity(3, 3), &part).unwrap();
        assert_eq!(mask, ZeroPatternMask::diagonal(3).unwrap());
    }

    #[test]
    fn decentralized_mask_zero_block_direct_definition() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let part = BlockPartition::new(vec![2, 1, 2], vec![1, 2]).unwrap();
        let mut b = Mat::from_fn(5, 3, |_, _| rng.random_range(0.5..1.5));
        // Zero the (state block 1, input block 1) block: rows 2..3, cols 1..3.
        b.view_mut((2, 1), (1, 2)).fill(0.0);
        let mask = decentralized_mask(&b, &part).unwrap();
        for r in 0..3 {
            for c in 0..5 {
                let forced = (1..3).contains(&r) && c == 2;
                assert_eq!(!mask.is_free(r, c), forced, "entry ({r},{c})");
            }
        }
    }

    #[test]
    fn decentralized_mask_dimension_error() {
        let part = BlockPartition::scalar(2, 2).unwrap();
        assert!(matches!(
            decentralized_mask(&example1_b(), &part),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn full_mask_gives_canonical_basis() {
        let basis = basis_from_mask(&ZeroPatternMask::full(2, 2).unwrap()).unwrap();
        assert_eq!(basis.k(), 4);
        assert_eq!(basis.mats()[1], unit(2, 2, 0, 1));
    }

    #[test]
    fn overlapping_mask_counts_marked_cells() {
        let mask = ZeroPatternMask::from_rows(&[
            vec![0, 0, 1, 1, 1],
            vec![0, 0, 1, 1, 1],
            vec![1, 0, 0, 1, 1],
            vec![1, 1, 0, 0, 0],
            vec![1, 1, 0, 0, 0],
        ])
        .unwrap();
        let basis = basis_from_mask(&mask).unwrap();
        assert_eq!(basis.k(), 12);
        for s in basis.mats() {
            assert!(mask.admits(s));
        }
    }

    #[test]
    fn mask_rejects_all_zero_and_bad_flags() {
        assert!(ZeroPatternMask::from_rows(&[vec![1, 1]]).is_err());
        assert!(ZeroPatternMask::from_rows(&[vec![0, 2]]).is_err());
    }

    #[test]
    fn dependent_basis_rejected() {
        let e = unit(1, 2, 0, 0);
        assert!(StructureBasis::new(1, 2, vec![e.clone(), e * 2.0]).is_err());
    }

    #[test]
    fn coordinated_two_scalar_blocks() {
        let part = BlockPartition::scalar(2, 2).unwrap();
        let basis = coordinated_basis(&part).unwrap();
        assert_eq!(basis.k(), 2);
        let s1 = from_rows(&[vec![0.5, 0.0], vec![-0.5, 0.0]]).unwrap();
        let s2 = from_rows(&[vec![0.0, -0.5], vec![0.0, 0.5]]).unwrap();
        assert_eq!(basis.mats()[0], s1);
        assert_eq!(basis.mats()[1], s2);
    }

    #[test]
    fn coordinated_pair_admits_every_right_factor() {
        // zero column sums survive any right multiplication
        let basis = coordinated_basis(&BlockPartition::scalar(2, 2).unwrap()).unwrap();
        let desc = compute_structure_set(&basis, 1e-9).unwrap();
        assert_eq!(desc.dim(), 4);
        assert!(desc.equality_form().is_empty());
    }

    #[test]
    fn coordinated_three_scalar_blocks() {
        let part = BlockPartition::scalar(3, 3).unwrap();
        let basis = coordinated_basis(&part).unwrap();
        for (i, s) in basis.mats().iter().enumerate() {
            for j in 0..3 {
                let expected = if i == j { 2.0 / 3.0 } else { -1.0 / 3.0 };
                assert!((s[(j, i)] - expected).abs() < 1e-15);
            }
            for c in (0..3).filter(|&c| c != i) {
                assert!(s.column(c).iter().all(|&x| x == 0.0));
            }
        }
    }

    #[test]
    fn coordinated_columns_sum_to_zero() {
        let part = BlockPartition::new(vec![2, 1, 3], vec![2, 2, 2]).unwrap();
        let basis = coordinated_basis(&part).unwrap();
        assert_eq!(basis.k(), 2 * 6);
        for s in basis.mats() {
            // Per input component r, summing over block rows j gives zero.
            for r in 0..2 {
                for c in 0..6 {
                    let sum: f64 = (0..3).map(|j| s[(j * 2 + r, c)]).sum();
                    assert!(sum.abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn coordinated_rejects_unequal_inputs() {
        let part = BlockPartition::new(vec![1, 1], vec![1, 2]).unwrap();
        assert!(coordinated_basis(&part).is_err());
    }

    #[test]
    fn single_row_structure_set() {
        // S = {[1, 0]}: S Q = λ S forces q12 = 0.
        let basis = StructureBasis::new(1, 2, vec![unit(1, 2, 0, 0)]).unwrap();
        let desc = compute_structure_set(&basis, 1e-9).unwrap();
        assert_eq!(desc.dim(), 3);
        assert_eq!(
            desc.free_pattern(1e-8),
            vec![vec![true, false], vec![true, true]]
        );
        assert_eq!(desc.equality_form().len(), 1);
        assert!((desc.equality_form()[0][(0, 1)].abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn certificates_solve_the_defining_equations() {
        // repeated singular values in the Q block
        let mask = ZeroPatternMask::new(1, 4, vec![false, true, false, true]).unwrap();
        let basis = basis_from_mask(&mask).unwrap();
        let desc = compute_structure_set(&basis, 1e-9).unwrap();
        assert_eq!(desc.dim(), 12);
        for l in 0..desc.dim() {
            let mut c = vec![0.0; desc.dim()];
            c[l] = 1.0;
            let (q, lam) = (desc.element(&c), desc.lambda_of_coords(&c));
            for (j, sj) in basis.mats().iter().enumerate() {
                let rhs = basis
                    .mats()
                    .iter()
                    .enumerate()
                    .fold(Mat::zeros(1, 4), |acc, (i, si)| acc + si * lam[(i, j)]);
                assert!((sj * &q - rhs).amax() < 1e-12);
            }
        }
    }

    #[test]
    fn identity_has_identity_certificate() {
        let part = BlockPartition::scalar(3, 2).unwrap();
        let mask = decentralized_mask(&example1_b(), &part).unwrap();
        let basis = basis_from_mask(&mask).unwrap();
        let desc = compute_structure_set(&basis, 1e-9).unwrap();
        let eye = Mat::identity(3, 3);
        assert!(desc.projection_residual(&eye) < 1e-10);
        assert!((desc.lambda_of(&eye) - Mat::identity(4, 4)).amax() < 1e-10);
    }

    #[test]
    fn rejects_nonpositive_tolerance() {
        let basis = StructureBasis::new(1, 1, vec![unit(1, 1, 0, 0)]).unwrap();
        assert!(compute_structure_set(&basis, 0.0).is_err());
    }
}
