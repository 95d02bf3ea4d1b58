//! Linear-algebra kernel for the standard symplectic vector space (R^{2n}, ω₀):
//! exact half-integer and Z/N arithmetic, Lagrangian frames, symplectic and
//! unitary matrices, and the squared-determinant phase map det².

use std::fmt;

use nalgebra::{Complex, DMatrix, DVector};
use num_complex::ComplexFloat;

use crate::{tol, Error, Result};

// ---------------------------------------------------------------------------
// exact scalars
// ---------------------------------------------------------------------------

/// Exact half-integer, stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt {
    twice: i64,
}

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt { twice: 0 };

    pub fn new(twice_value: i64) -> Self {
        HalfInt { twice: twice_value }
    }

    pub fn from_int(v: i64) -> Self {
        HalfInt { twice: 2 * v }
    }

    pub fn twice(&self) -> i64 {
        self.twice
    }

    pub fn is_integral(&self) -> bool {
        self.twice % 2 == 0
    }

    pub fn as_int(&self) -> Option<i64> {
        if self.is_integral() {
            Some(self.twice / 2)
        } else {
            None
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.twice as f64 / 2.0
    }
}

impl std::ops::Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt::new(self.twice + rhs.twice)
    }
}

impl std::ops::Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt::new(self.twice - rhs.twice)
    }
}

impl std::ops::Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt::new(-self.twice)
    }
}

impl std::iter::Sum for HalfInt {
    fn sum<I: Iterator<Item = HalfInt>>(iter: I) -> HalfInt {
        iter.fold(HalfInt::ZERO, |a, b| a + b)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integral() {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

/// Modulus for Z/N arithmetic: a positive integer or ∞ (plain integers).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Modulus {
    Finite(u64),
    Infinite,
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Modulus::Finite(n) => write!(f, "{n}"),
            Modulus::Infinite => write!(f, "inf"),
        }
    }
}

/// Residue in Z/N with canonical representative (0..N for finite N).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ZModN {
    modulus: Modulus,
    value: i64,
}

impl ZModN {
    pub fn new(modulus: Modulus, value: i64) -> Self {
        let value = match modulus {
            Modulus::Finite(n) => value.rem_euclid(n as i64),
            Modulus::Infinite => value,
        };
        ZModN { modulus, value }
    }

    pub fn zero(modulus: Modulus) -> Self {
        ZModN::new(modulus, 0)
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn value(&self) -> i64 {
        self.value
    }

    fn check(&self, other: &ZModN) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(
                self.modulus.to_string(),
                other.modulus.to_string(),
            ));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &ZModN) -> Result<ZModN> {
        self.check(other)?;
        Ok(ZModN::new(self.modulus, self.value + other.value))
    }

    pub fn try_sub(&self, other: &ZModN) -> Result<ZModN> {
        self.check(other)?;
        Ok(ZModN::new(self.modulus, self.value - other.value))
    }

    pub fn shift(&self, k: i64) -> ZModN {
        ZModN::new(self.modulus, self.value + k)
    }

    pub fn neg(&self) -> ZModN {
        ZModN::new(self.modulus, -self.value)
    }

    /// Reduce an (integral) half-integer into this residue system.
    pub fn from_halfint(modulus: Modulus, h: HalfInt) -> Result<ZModN> {
        let v = h
            .as_int()
            .ok_or_else(|| Error::NonIntegralIndex(h.to_string()))?;
        Ok(ZModN::new(modulus, v))
    }
}

impl fmt::Display for ZModN {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

// ---------------------------------------------------------------------------
// standard structures on R^{2n}
// ---------------------------------------------------------------------------

/// The standard complex structure J₀(u,v) = (−v,u) as a 2n×2n matrix.
pub fn j0_matrix(n: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        m[(i, n + i)] = -1.0;
        m[(n + i, i)] = 1.0;
    }
    m
}

/// ω₀(a, b) = ⟨J₀a, b⟩ = Σ (a_u · b_v − a_v · b_u).
pub fn omega0(a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    let n = a.len() / 2;
    let mut s = 0.0;
    for i in 0..n {
        s += a[i] * b[n + i] - a[n + i] * b[i];
    }
    s
}

/// Modified Gram–Schmidt with a re-orthogonalization pass. Errors if a column
/// drops below the rank tolerance.
pub fn orthonormalize(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let mut q = m.clone();
    let cols = q.ncols();
    for pass in 0..2 {
        for j in 0..cols {
            for k in 0..j {
                let proj = q.column(k).dot(&q.column(j));
                let col_k = q.column(k).clone_owned();
                let mut col_j = q.column_mut(j);
                col_j.axpy(-proj, &col_k, 1.0);
            }
            let norm = q.column(j).norm();
            if pass == 0 && norm < tol::frame_tol().sqrt() {
                return Err(Error::RankDeficient(norm));
            }
            if norm > 0.0 {
                q.column_mut(j).scale_mut(1.0 / norm);
            }
        }
    }
    Ok(q)
}

/// A Lagrangian subspace of (R^{2n}, ω₀), stored as a 2n×n frame together with
/// a cached orthonormalized copy.
#[derive(Debug, Clone)]
pub struct LagrangianFrame {
    n: usize,
    cols: DMatrix<f64>,
    orth: DMatrix<f64>,
}

impl LagrangianFrame {
    pub fn new(cols: DMatrix<f64>) -> Result<Self> {
        let (rows, ncols) = cols.shape();
        if rows == 0 || rows % 2 != 0 || ncols != rows / 2 {
            return Err(Error::DimensionMismatch(format!(
                "expected 2n×n frame, got {rows}×{ncols}"
            )));
        }
        let n = rows / 2;
        let ft = tol::frame_tol();
        let svd = cols.clone().svd(false, false);
        let smin = svd.singular_values.iter().cloned().fold(f64::MAX, f64::min);
        let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
        if smin <= ft * smax.max(1.0) {
            return Err(Error::RankDeficient(smin));
        }
        let scale = smax.max(1.0);
        for i in 0..ncols {
            for j in 0..ncols {
                let w = omega0(&cols.column(i).clone_owned(), &cols.column(j).clone_owned());
                if w.abs() > ft * scale * scale * 10.0 {
                    return Err(Error::NotLagrangian(format!(
                        "ω₀(c_{i}, c_{j}) = {w:.3e}"
                    )));
                }
            }
        }
        let orth = orthonormalize(&cols)?;
        Ok(LagrangianFrame { n, cols, orth })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn columns(&self) -> &DMatrix<f64> {
        &self.cols
    }

    /// Orthonormal frame for the same subspace.
    pub fn orthonormal(&self) -> &DMatrix<f64> {
        &self.orth
    }

    /// The orthonormalized frame as an n×n complex matrix (columns u + iv).
    /// Unitary whenever the frame is Lagrangian.
    pub fn complex_form(&self) -> DMatrix<Complex<f64>> {
        let n = self.n;
        DMatrix::from_fn(n, n, |i, j| {
            Complex::new(self.orth[(i, j)], self.orth[(n + i, j)])
        })
    }

    /// The coordinate Lagrangian R^n ⊂ C^n.
    pub fn standard_rn(n: usize) -> Self {
        let mut cols = DMatrix::zeros(2 * n, n);
        for j in 0..n {
            cols[(j, j)] = 1.0;
        }
        LagrangianFrame::new(cols).expect("standard frame")
    }

    /// The coordinate Lagrangian iR^n ⊂ C^n.
    pub fn standard_irn(n: usize) -> Self {
        let mut cols = DMatrix::zeros(2 * n, n);
        for j in 0..n {
            cols[(n + j, j)] = 1.0;
        }
        LagrangianFrame::new(cols).expect("standard frame")
    }

    /// Build the real 2n×n frame spanned by the columns of a complex n×n
    /// matrix with real span of full rank.
    pub fn from_complex_cols(z: &DMatrix<Complex<f64>>) -> Result<Self> {
        let n = z.nrows();
        if z.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "expected square complex matrix, got {}×{}",
                z.nrows(),
                z.ncols()
            )));
        }
        let mut cols = DMatrix::zeros(2 * n, n);
        for j in 0..n {
            for i in 0..n {
                cols[(i, j)] = z[(i, j)].re;
                cols[(n + i, j)] = z[(i, j)].im;
            }
        }
        LagrangianFrame::new(cols)
    }

    /// Largest principal angle to another subspace of the same dimension.
    pub fn principal_angle_gap(&self, other: &LagrangianFrame) -> f64 {
        let prod = self.orth.transpose() * &other.orth;
        let svd = prod.svd(false, false);
        let smin = svd
            .singular_values
            .iter()
            .cloned()
            .fold(f64::MAX, f64::min)
            .clamp(-1.0, 1.0);
        smin.acos()
    }

    pub fn same_subspace(&self, other: &LagrangianFrame, angle_tol: f64) -> bool {
        self.n == other.n && self.principal_angle_gap(other) < angle_tol
    }
}

/// Validation entry point: does a raw 2n×n matrix span a Lagrangian subspace?
pub fn is_lagrangian(cols: &DMatrix<f64>) -> Result<bool> {
    let (rows, ncols) = cols.shape();
    if rows == 0 || rows % 2 != 0 || ncols != rows / 2 {
        return Err(Error::DimensionMismatch(format!(
            "expected 2n×n frame, got {rows}×{ncols}"
        )));
    }
    match LagrangianFrame::new(cols.clone()) {
        Ok(_) => Ok(true),
        Err(Error::NotLagrangian(_)) | Err(Error::RankDeficient(_)) => Ok(false),
        Err(e) => Err(e),
    }
}

/// An element of Sp(2n, R), validated against MᵀJ₀M = J₀.
#[derive(Debug, Clone)]
pub struct SymplecticMatrix {
    n: usize,
    m: DMatrix<f64>,
}

impl SymplecticMatrix {
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        let (rows, cols) = m.shape();
        if rows == 0 || rows != cols || rows % 2 != 0 {
            return Err(Error::DimensionMismatch(format!(
                "expected 2n×2n matrix, got {rows}×{cols}"
            )));
        }
        let n = rows / 2;
        let j0 = j0_matrix(n);
        let resid = (m.transpose() * &j0 * &m - &j0).norm();
        let scale = m.norm().max(1.0);
        if resid > tol::frame_tol() * scale * scale * 100.0 {
            return Err(Error::NotSymplectic(resid));
        }
        Ok(SymplecticMatrix { n, m })
    }

    pub fn identity(n: usize) -> Self {
        SymplecticMatrix {
            n,
            m: DMatrix::identity(2 * n, 2 * n),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn is_unitary(&self) -> bool {
        let orth = (self.m.transpose() * &self.m - DMatrix::identity(2 * self.n, 2 * self.n))
            .norm();
        let j0 = j0_matrix(self.n);
        let comm = (&j0 * &self.m - &self.m * &j0).norm();
        let t = tol::frame_tol().sqrt();
        orth < t && comm < t
    }

    /// For a unitary element, the corresponding U(n) matrix.
    pub fn unitary_complex_form(&self) -> Result<DMatrix<Complex<f64>>> {
        if !self.is_unitary() {
            return Err(Error::NotSymplectic(f64::NAN));
        }
        let n = self.n;
        Ok(DMatrix::from_fn(n, n, |i, j| {
            Complex::new(self.m[(i, j)], self.m[(n + i, j)])
        }))
    }

    pub fn apply_frame(&self, f: &LagrangianFrame) -> Result<LagrangianFrame> {
        if f.n() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "matrix n = {}, frame n = {}",
                self.n,
                f.n()
            )));
        }
        LagrangianFrame::new(&self.m * f.columns())
    }

    pub fn try_inverse(&self) -> Result<SymplecticMatrix> {
        let inv = self
            .m
            .clone()
            .try_inverse()
            .ok_or(Error::RankDeficient(0.0))?;
        SymplecticMatrix::new(inv)
    }
}

/// The real 2n×2n form of a complex n×n matrix (as a C-linear map on R^{2n}).
pub fn real_form(a: &DMatrix<Complex<f64>>) -> DMatrix<f64> {
    let n = a.nrows();
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = a[(i, j)].re;
            m[(i, n + j)] = -a[(i, j)].im;
            m[(n + i, j)] = a[(i, j)].im;
            m[(n + i, n + j)] = a[(i, j)].re;
        }
    }
    m
}

/// Checks whether exp(tG) is symplectic for all t: J₀G must be symmetric.
pub fn is_hamiltonian_generator(g: &DMatrix<f64>) -> bool {
    let (rows, cols) = g.shape();
    if rows != cols || rows % 2 != 0 || rows == 0 {
        return false;
    }
    let n = rows / 2;
    let k = j0_matrix(n) * g;
    (k.clone() - k.transpose()).norm() <= 1e-9 * g.norm().max(1.0) * 100.0
}

/// Unit-modulus complex number; always stored normalized.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitComplex {
    z: Complex<f64>,
}

impl UnitComplex {
    pub fn new(z: Complex<f64>) -> Result<Self> {
        let norm = z.abs();
        if norm < 1e-12 {
            return Err(Error::RankDeficient(norm));
        }
        Ok(UnitComplex { z: z / norm })
    }

    pub fn one() -> Self {
        UnitComplex {
            z: Complex::new(1.0, 0.0),
        }
    }

    pub fn from_angle(angle: f64) -> Self {
        UnitComplex {
            z: Complex::from_polar(1.0, angle),
        }
    }

    pub fn value(&self) -> Complex<f64> {
        self.z
    }

    /// Argument in (−π, π].
    pub fn angle(&self) -> f64 {
        self.z.im.atan2(self.z.re)
    }

    pub fn approx_eq(&self, other: &UnitComplex) -> bool {
        (self.z - other.z).abs() <= tol::phase_tol() * 10.0
    }

    pub fn mul(&self, other: &UnitComplex) -> UnitComplex {
        UnitComplex {
            z: self.z * other.z,
        }
    }
}

/// det²: the squared determinant of the orthonormalized complex frame. This is
/// a well-defined unit complex number of the subspace (independent of frame).
pub fn det_sq(f: &LagrangianFrame) -> UnitComplex {
    let z = f.complex_form();
    let det = nalgebra::linalg::LU::new(z).determinant();
    UnitComplex::new(det * det).expect("unitary frame determinant")
}

/// Unitary polar factor of a symplectic matrix (commutes with J₀).
pub fn unitary_retraction(phi: &SymplecticMatrix) -> Result<SymplecticMatrix> {
    let svd = phi.matrix().clone().svd(true, true);
    let smin = svd.singular_values.iter().cloned().fold(f64::MAX, f64::min);
    if smin < tol::frame_tol() {
        return Err(Error::RankDeficient(smin));
    }
    let u = svd.u.as_ref().unwrap() * svd.v_t.as_ref().unwrap();
    SymplecticMatrix::new(u)
}

// ---------------------------------------------------------------------------
// product space (V ⊕ V, −β ⊕ β) and graphs
// ---------------------------------------------------------------------------

/// Embed a pair (x, y) ∈ R^{2n} × R^{2n} into R^{4n} with the standard (u,v)
/// block layout: u-block = (x_u, y_u), v-block = (x_v, y_v).
pub fn product_embed(x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
    let n = x.len() / 2;
    let mut out = DVector::zeros(4 * n);
    for i in 0..n {
        out[i] = x[i];
        out[n + i] = y[i];
        out[2 * n + i] = x[n + i];
        out[3 * n + i] = y[n + i];
    }
    out
}

/// The product form (−β ⊕ β) on R^{4n} in the `product_embed` layout.
pub fn omega_product(n: usize, a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    let split = |w: &DVector<f64>| -> (DVector<f64>, DVector<f64>) {
        let mut x = DVector::zeros(2 * n);
        let mut y = DVector::zeros(2 * n);
        for i in 0..n {
            x[i] = w[i];
            x[n + i] = w[2 * n + i];
            y[i] = w[n + i];
            y[n + i] = w[3 * n + i];
        }
        (x, y)
    };
    let (ax, ay) = split(a);
    let (bx, by) = split(b);
    -omega0(&ax, &bx) + omega0(&ay, &by)
}

/// The graph {(x, Φx)} as a 4n×2n frame for the product form −β ⊕ β.
#[derive(Debug, Clone)]
pub struct ProductFrame {
    n: usize,
    cols: DMatrix<f64>,
}

impl ProductFrame {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Raw columns in the `product_embed` layout (untwisted; isotropic for
    /// −β ⊕ β, not for the standard form).
    pub fn columns(&self) -> &DMatrix<f64> {
        &self.cols
    }

    /// Max |(−β⊕β)(c_i, c_j)| over column pairs.
    pub fn product_isotropy_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.cols.ncols() {
            for j in 0..self.cols.ncols() {
                let w = omega_product(
                    self.n,
                    &self.cols.column(i).clone_owned(),
                    &self.cols.column(j).clone_owned(),
                );
                worst = worst.max(w.abs());
            }
        }
        worst
    }

    /// The conjugation-twisted frame {(x̄, Φx)}, which is Lagrangian for the
    /// *standard* form on R^{4n}; index computations run there.
    pub fn twisted(&self) -> Result<LagrangianFrame> {
        let n = self.n;
        let mut cols = self.cols.clone();
        // conjugate the first factor: negate its v-block (rows 2n..3n)
        for i in 2 * n..3 * n {
            for j in 0..cols.ncols() {
                cols[(i, j)] = -cols[(i, j)];
            }
        }
        LagrangianFrame::new(cols)
    }
}

/// Frame of graph(Φ) = {(x, Φx)} ⊂ (V ⊕ V, −β ⊕ β).
pub fn graph_frame(phi: &SymplecticMatrix) -> ProductFrame {
    let n = phi.n();
    let id = DMatrix::<f64>::identity(2 * n, 2 * n);
    let mut cols = DMatrix::zeros(4 * n, 2 * n);
    for j in 0..2 * n {
        let x = id.column(j).clone_owned();
        let y = phi.matrix() * &x;
        let e = product_embed(&x, &y);
        cols.set_column(j, &e);
    }
    ProductFrame { n, cols }
}


#[cfg(test)]
mod prop_tests {
    use super::*;
    use proptest::prelude::*;

    fn modulus_strategy() -> impl Strategy<Value = Modulus> {
        prop_oneof![
            (1u64..30).prop_map(Modulus::Finite),
            Just(Modulus::Infinite),
        ]
    }

    proptest! {
        #[test]
        fn zmodn_group_laws(m in modulus_strategy(), a in -200i64..200, b in -200i64..200) {
            let x = ZModN::new(m, a);
            let y = ZModN::new(m, b);
            prop_assert_eq!(x.try_add(&y).unwrap(), y.try_add(&x).unwrap());
            prop_assert_eq!(x.try_add(&y).unwrap().try_sub(&y).unwrap(), x);
            prop_assert_eq!(x.try_add(&x.neg()).unwrap(), ZModN::zero(m));
            prop_assert_eq!(x.shift(b).shift(-b), x);
        }

        #[test]
        fn halfint_roundtrips(t in -1000i64..1000) {
            let h = HalfInt::new(t);
            prop_assert_eq!(h.twice(), t);
            prop_assert_eq!(h.is_integral(), t % 2 == 0);
            if let Some(v) = h.as_int() {
                prop_assert_eq!(HalfInt::from_int(v), h);
            }
            prop_assert!((h.to_f64() - t as f64 / 2.0).abs() < 1e-12);
        }

        #[test]
        fn orthonormalize_produces_orthonormal_columns(
            seed in proptest::collection::vec(-2.0f64..2.0, 16),
        ) {
            let m = DMatrix::from_row_slice(4, 4, &seed);
            // reject near-singular inputs; MGS needs full rank
            if m.determinant().abs() > 1e-2 {
                let q = orthonormalize(&m).unwrap();
                let gram = q.transpose() * &q;
                prop_assert!((gram - DMatrix::identity(4, 4)).norm() < 1e-9);
            }
        }

        #[test]
        fn omega0_is_antisymmetric(
            u in proptest::collection::vec(-3.0f64..3.0, 4),
            v in proptest::collection::vec(-3.0f64..3.0, 4),
        ) {
            let u = DVector::from_vec(u);
            let v = DVector::from_vec(v);
            prop_assert!((omega0(&u, &v) + omega0(&v, &u)).abs() < 1e-12);
        }
    }
}
