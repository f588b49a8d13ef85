//! Matrix-inequality modeling layer.
//!
//! Decision variables are parameterized by coordinate bases (symmetric,
//! structured, free or scalar), matrix expressions are affine in those
//! coordinates, and constraints demand that a symmetric expression be
//! negative or positive definite with an explicit margin. [`ProgramBuilder::compile`]
//! lowers everything to blocks of the form `F₀ + Σ xᵢ Fᵢ ⪰ 0`.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::matops::{self, svec, unit, Mat, SymMat, Vector};

/// Default margin realizing a strict inequality.
pub const DEFAULT_EPSILON: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub enum VarKind {
    /// Symmetric n×n, one coordinate per svec entry.
    Sym(usize),
    /// Linear combination of the given (equal-shape) basis matrices.
    Structured(Vec<Mat>),
    /// Unconstrained rows×cols.
    Free(usize, usize),
    Scalar,
}

/// Handle to a decision variable registered with a [`ProgramBuilder`].
#[derive(Debug, Clone)]
pub struct VarRef {
    id: usize,
    offset: usize,
    basis: Arc<[Mat]>,
}

impl VarRef {
    pub fn id(&self) -> usize {
        self.id
    }

    /// Number of scalar coordinates.
    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.basis[0].shape()
    }

    /// This variable's slice of a full coordinate vector.
    pub fn coords<'a>(&self, all: &'a [f64]) -> &'a [f64] {
        &all[self.offset..self.offset + self.len()]
    }

    /// Matrix value of the variable at `all`.
    pub fn value(&self, all: &[f64]) -> Mat {
        let (r, c) = self.shape();
        self.basis
            .iter()
            .zip(self.coords(all))
            .fold(Mat::zeros(r, c), |acc, (b, x)| acc + b * *x)
    }

    /// The variable as an affine expression.
    pub fn expr(&self) -> LinExpr {
        let (r, c) = self.shape();
        let terms = self
            .basis
            .iter()
            .enumerate()
            .map(|(i, b)| (self.offset + i, b.clone()))
            .collect();
        LinExpr { constant: Mat::zeros(r, c), terms }
    }
}

/// Rectangular matrix expression `C + Σ xᵢ Mᵢ`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinExpr {
    constant: Mat,
    terms: BTreeMap<usize, Mat>,
}

impl LinExpr {
    pub fn constant(m: Mat) -> Self {
        LinExpr { constant: m, terms: BTreeMap::new() }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::constant(Mat::zeros(rows, cols))
    }

    pub fn shape(&self) -> (usize, usize) {
        self.constant.shape()
    }

    pub fn constant_part(&self) -> &Mat {
        &self.constant
    }

    /// Coefficient matrices keyed by global coordinate index.
    pub fn terms(&self) -> &BTreeMap<usize, Mat> {
        &self.terms
    }

    fn map(&self, f: impl Fn(&Mat) -> Mat) -> LinExpr {
        LinExpr {
            constant: f(&self.constant),
            terms: self.terms.iter().map(|(&k, m)| (k, f(m))).collect(),
        }
    }

    /// `a · self`
    pub fn left_mul(&self, a: &Mat) -> LinExpr {
        self.map(|m| a * m)
    }

    /// `self · b`
    pub fn right_mul(&self, b: &Mat) -> LinExpr {
        self.map(|m| m * b)
    }

    /// `self ⊗ m`; for a 1×1 expression this is the scalar times `m`.
    pub fn kron(&self, m: &Mat) -> LinExpr {
        self.map(|c| c.kronecker(m))
    }

    pub fn transpose(&self) -> LinExpr {
        self.map(Mat::transpose)
    }

    pub fn eval(&self, coords: &[f64]) -> Mat {
        self.terms
            .iter()
            .fold(self.constant.clone(), |acc, (&i, m)| acc + m * coords[i])
    }

    /// Block matrix from a grid of expressions with compatible shapes.
    pub fn block(grid: &[Vec<LinExpr>]) -> Result<LinExpr> {
        let rows: Vec<usize> = grid.iter().map(|r| r.first().map_or(0, |e| e.shape().0)).collect();
        let ncols = grid.first().map_or(0, Vec::len);
        let cols: Vec<usize> = (0..ncols).map(|j| grid[0][j].shape().1).collect();
        for (i, r) in grid.iter().enumerate() {
            if r.len() != ncols {
                return Err(Error::DimensionMismatch(format!("block row {i} has {} entries", r.len())));
            }
            for (j, e) in r.iter().enumerate() {
                if e.shape() != (rows[i], cols[j]) {
                    return Err(Error::DimensionMismatch(format!(
                        "block ({i},{j}) is {:?}, expected {:?}",
                        e.shape(),
                        (rows[i], cols[j])
                    )));
                }
            }
        }
        let (tr, tc) = (rows.iter().sum::<usize>(), cols.iter().sum::<usize>());
        let mut out = LinExpr::zeros(tr, tc);
        let mut r0 = 0;
        for (i, r) in grid.iter().enumerate() {
            let mut c0 = 0;
            for (j, e) in r.iter().enumerate() {
                out.constant.view_mut((r0, c0), e.shape()).copy_from(&e.constant);
                for (&k, m) in &e.terms {
                    let slot = out.terms.entry(k).or_insert_with(|| Mat::zeros(tr, tc));
                    slot.view_mut((r0, c0), e.shape()).copy_from(m);
                }
                c0 += cols[j];
            }
            r0 += rows[i];
        }
        Ok(out)
    }

    fn combine(mut self, other: &LinExpr, sign: f64) -> LinExpr {
        assert_eq!(self.shape(), other.shape(), "expression shapes differ");
        self.constant += &other.constant * sign;
        for (&k, m) in &other.terms {
            let (r, c) = m.shape();
            *self.terms.entry(k).or_insert_with(|| Mat::zeros(r, c)) += m * sign;
        }
        self
    }
}

impl Add<&LinExpr> for LinExpr {
    type Output = LinExpr;
    fn add(self, rhs: &LinExpr) -> LinExpr {
        self.combine(rhs, 1.0)
    }
}

impl Add for LinExpr {
    type Output = LinExpr;
    fn add(self, rhs: LinExpr) -> LinExpr {
        self.combine(&rhs, 1.0)
    }
}

impl Sub<&LinExpr> for LinExpr {
    type Output = LinExpr;
    fn sub(self, rhs: &LinExpr) -> LinExpr {
        self.combine(rhs, -1.0)
    }
}

impl Sub for LinExpr {
    type Output = LinExpr;
    fn sub(self, rhs: LinExpr) -> LinExpr {
        self.combine(&rhs, -1.0)
    }
}

impl Neg for LinExpr {
    type Output = LinExpr;
    fn neg(self) -> LinExpr {
        self.map(|m| -m)
    }
}

impl Mul<f64> for LinExpr {
    type Output = LinExpr;
    fn mul(self, s: f64) -> LinExpr {
        self.map(|m| m * s)
    }
}

/// Square expression that is symmetric in every coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineMatExpr(LinExpr);

impl AffineMatExpr {
    /// `He(e) = e + eᵀ`.
    pub fn he(e: &LinExpr) -> Result<Self> {
        let (r, c) = e.shape();
        if r != c {
            return Err(Error::DimensionMismatch(format!("He needs a square expression, got {r}x{c}")));
        }
        Ok(AffineMatExpr(e.clone() + e.transpose()))
    }

    /// `(e + eᵀ)/2`; the identity on expressions that are already symmetric.
    pub fn sym(e: &LinExpr) -> Result<Self> {
        Ok(AffineMatExpr(Self::he(e)?.0 * 0.5))
    }

    pub fn dim(&self) -> usize {
        self.0.shape().0
    }

    pub fn expr(&self) -> &LinExpr {
        &self.0
    }

    pub fn eval(&self, coords: &[f64]) -> SymMat {
        SymMat::new(self.0.eval(coords)).expect("square by construction")
    }
}

impl Add for AffineMatExpr {
    type Output = AffineMatExpr;
    fn add(self, rhs: AffineMatExpr) -> AffineMatExpr {
        AffineMatExpr(self.0 + rhs.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    /// `expr ⪯ −ε I`
    NegDef,
    /// `expr ⪰ ε I`
    PosDef,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub expr: AffineMatExpr,
    pub sense: Sense,
    pub eps: f64,
}

/// Builder for a conic feasibility program.
#[derive(Debug, Default, Clone)]
pub struct ProgramBuilder {
    num_scalars: usize,
    vars: Vec<VarRef>,
    constraints: Vec<Constraint>,
}

impl ProgramBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn num_scalars(&self) -> usize {
        self.num_scalars
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn add_var(&mut self, kind: VarKind) -> Result<VarRef> {
        let basis: Vec<Mat> = match kind {
            VarKind::Sym(n) if n > 0 => matops::svec_basis(n),
            VarKind::Free(r, c) if r > 0 && c > 0 => {
                // column-major, matching vec()
                (0..c).flat_map(|j| (0..r).map(move |i| unit(r, c, i, j))).collect()
            }
            VarKind::Scalar => vec![Mat::from_element(1, 1, 1.0)],
            VarKind::Structured(b) => {
                let Some(first) = b.first() else {
                    return Err(Error::InvalidArgument("structured variable needs a basis".into()));
                };
                if b.iter().any(|m| m.shape() != first.shape()) {
                    return Err(Error::DimensionMismatch("structured basis shapes differ".into()));
                }
                b
            }
            _ => return Err(Error::InvalidArgument("variable dimensions must be positive".into())),
        };
        let var = VarRef { id: self.vars.len(), offset: self.num_scalars, basis: basis.into() };
        self.num_scalars += var.len();
        self.vars.push(var.clone());
        Ok(var)
    }

    fn push(&mut self, expr: AffineMatExpr, sense: Sense, eps: f64) -> Result<()> {
        if !(eps > 0.0) || !eps.is_finite() {
            return Err(Error::InvalidArgument(format!("margin must be positive, got {eps}")));
        }
        if expr.0.terms.keys().any(|&k| k >= self.num_scalars) {
            return Err(Error::InvalidArgument("expression references an unknown variable".into()));
        }
        self.constraints.push(Constraint { expr, sense, eps });
        Ok(())
    }

    /// Registers `expr ⪯ −eps·I`.
    pub fn constrain_negdef(&mut self, expr: AffineMatExpr, eps: f64) -> Result<()> {
        self.push(expr, Sense::NegDef, eps)
    }

    /// Registers `expr ⪰ eps·I`.
    pub fn constrain_posdef(&mut self, expr: AffineMatExpr, eps: f64) -> Result<()> {
        self.push(expr, Sense::PosDef, eps)
    }

    pub fn compile(&self) -> Result<CompiledProgram> {
        if self.constraints.is_empty() {
            return Err(Error::EmptyProgram);
        }
        let blocks = self
            .constraints
            .iter()
            .map(|c| {
                let e = c.expr.expr();
                let sign = match c.sense {
                    Sense::NegDef => -1.0,
                    Sense::PosDef => 1.0,
                };
                let d = c.expr.dim();
                let f0 = e.constant_part() * sign - Mat::identity(d, d) * c.eps;
                let coeffs = e
                    .terms()
                    .iter()
                    .map(|(&k, m)| (k, sym_svec(&(m * sign))))
                    .filter(|(_, v)| v.iter().any(|&x| x != 0.0))
                    .collect();
                CompiledBlock { dim: d, eps: c.eps, constant: sym_svec(&f0), coeffs }
            })
            .collect();
        Ok(CompiledProgram { num_scalars: self.num_scalars, blocks })
    }
}

fn sym_svec(m: &Mat) -> Vector {
    svec(&SymMat::new(m.clone()).expect("square by construction"))
}

/// One constraint lowered to `F₀ + Σ xᵢ Fᵢ ⪰ 0` (margin folded into `F₀`).
#[derive(Debug, Clone, PartialEq)]
pub struct CompiledBlock {
    pub dim: usize,
    pub eps: f64,
    /// svec of `F₀`.
    pub constant: Vector,
    /// `(coordinate, svec Fᵢ)` for every coordinate with a nonzero coefficient.
    pub coeffs: Vec<(usize, Vector)>,
}

impl CompiledBlock {
    pub fn eval(&self, coords: &[f64]) -> SymMat {
        let v = self
            .coeffs
            .iter()
            .fold(self.constant.clone(), |acc, (k, f)| acc + f * coords[*k]);
        matops::smat(&v).expect("valid svec length")
    }
}

/// Backend-ready scalarization of a [`ProgramBuilder`].
#[derive(Debug, Clone, PartialEq)]
pub struct CompiledProgram {
    pub num_scalars: usize,
    pub blocks: Vec<CompiledBlock>,
}

impl CompiledProgram {
    /// Relative violation per block: `−λ_min(F_b(x)) / (1 + ‖F_b(x)‖_max)`.
    /// Non-positive values mean the block is satisfied.
    pub fn violations(&self, coords: &[f64]) -> Vec<f64> {
        self.blocks
            .iter()
            .map(|b| {
                let f = b.eval(coords);
                -f.min_eigenvalue() / (1.0 + f.as_mat().amax())
            })
            .collect()
    }

    pub fn worst_violation(&self, coords: &[f64]) -> f64 {
        self.violations(coords)
            .into_iter()
            .fold(f64::NEG_INFINITY, f64::max)
    }
}
