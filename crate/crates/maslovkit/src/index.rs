//! Maslov index for pairs of Lagrangian paths and the Conley–Zehnder index for
//! symplectic paths, computed from crossing forms, with an independent
//! eigenvalue-winding channel used as a cross-check.
//!
//! Crossing form convention: at a crossing t₀ the relative form is
//! Γ = Q_{λ0} − Q_{λ1} on λ0(t₀) ∩ λ1(t₀), where Q_λ(v) = d/dt ω₀(v, w(t))
//! with w(t) ∈ λ(t) through v determined by the fixed complement J₀·λ(t₀).
//! With this sign the counterclockwise rotation of R through iR (n = 1)
//! has index +1.

use nalgebra::{Complex, DMatrix, DVector};

use crate::symcore::{
    is_hamiltonian_generator, j0_matrix, orthonormalize, LagrangianFrame, SymplecticMatrix,
};
use crate::{par, tol, Error, ExecMode, Result};

const TWO_PI: f64 = std::f64::consts::TAU;

fn wrap_pi(x: f64) -> f64 {
    let mut y = x % TWO_PI;
    if y > std::f64::consts::PI {
        y -= TWO_PI;
    } else if y <= -std::f64::consts::PI {
        y += TWO_PI;
    }
    y
}

// ---------------------------------------------------------------------------
// paths
// ---------------------------------------------------------------------------

/// One exponential segment: the path moves by exp(s·G) for s ∈ [0, duration].
#[derive(Debug, Clone)]
pub struct ExpSegment {
    pub generator: DMatrix<f64>,
    pub duration: f64,
}

/// A path of Lagrangian subspaces, either as a product of exponentials acting
/// on an initial frame or as a sampled list of frames.
#[derive(Debug, Clone)]
pub enum LagrangianPath {
    Exponential {
        start: LagrangianFrame,
        t0: f64,
        segments: Vec<ExpSegment>,
        /// frames at segment starts, cached at construction
        checkpoints: Vec<DMatrix<f64>>,
    },
    Samples {
        nodes: Vec<(f64, LagrangianFrame)>,
    },
}

impl LagrangianPath {
    pub fn exponential(
        start: LagrangianFrame,
        t0: f64,
        segments: Vec<ExpSegment>,
    ) -> Result<Self> {
        let n = start.n();
        let mut checkpoints = vec![start.columns().clone()];
        for seg in &segments {
            if seg.generator.shape() != (2 * n, 2 * n) {
                return Err(Error::DimensionMismatch(format!(
                    "generator shape {:?}, expected {}×{}",
                    seg.generator.shape(),
                    2 * n,
                    2 * n
                )));
            }
            if !is_hamiltonian_generator(&seg.generator) {
                return Err(Error::NotSymplectic(f64::NAN));
            }
            if !(seg.duration > 0.0 && seg.duration.is_finite()) {
                return Err(Error::MalformedData("segment duration must be > 0".into()));
            }
            let last = checkpoints.last().unwrap();
            let step = (seg.generator.clone() * seg.duration).exp();
            checkpoints.push(step * last);
        }
        // every checkpoint must still be Lagrangian
        for c in &checkpoints {
            LagrangianFrame::new(c.clone())?;
        }
        Ok(LagrangianPath::Exponential {
            start,
            t0,
            segments,
            checkpoints,
        })
    }

    pub fn samples(nodes: Vec<(f64, LagrangianFrame)>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::MalformedData("empty sample path".into()));
        }
        let n = nodes[0].1.n();
        for w in nodes.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::MalformedData(
                    "sample times must be strictly increasing".into(),
                ));
            }
            if w[0].1.n() != n || w[1].1.n() != n {
                return Err(Error::DimensionMismatch("mixed frame dimensions".into()));
            }
            let gap = w[0].1.principal_angle_gap(&w[1].1);
            if gap >= std::f64::consts::PI / 8.0 {
                return Err(Error::PathTooCoarse(format!(
                    "principal-angle gap {gap:.3} ≥ π/8 between consecutive samples"
                )));
            }
        }
        Ok(LagrangianPath::Samples { nodes })
    }

    /// Constant path on [a, b].
    pub fn constant(frame: LagrangianFrame, a: f64, b: f64) -> Result<Self> {
        LagrangianPath::samples(vec![(a, frame.clone()), (b, frame)])
    }

    pub fn n(&self) -> usize {
        match self {
            LagrangianPath::Exponential { start, .. } => start.n(),
            LagrangianPath::Samples { nodes } => nodes[0].1.n(),
        }
    }

    pub fn interval(&self) -> (f64, f64) {
        match self {
            LagrangianPath::Exponential { t0, segments, .. } => {
                (*t0, t0 + segments.iter().map(|s| s.duration).sum::<f64>())
            }
            LagrangianPath::Samples { nodes } => (nodes[0].0, nodes.last().unwrap().0),
        }
    }

    /// Rough total-rotation estimate used to size scan grids.
    pub(crate) fn rotation_estimate(&self) -> f64 {
        match self {
            LagrangianPath::Exponential { segments, .. } => segments
                .iter()
                .map(|s| s.generator.norm() * s.duration)
                .sum(),
            LagrangianPath::Samples { nodes } => 0.5 * nodes.len() as f64,
        }
    }

    /// Evaluate the raw (not orthonormalized) frame columns at parameter t.
    pub fn eval_columns(&self, t: f64) -> DMatrix<f64> {
        match self {
            LagrangianPath::Exponential {
                t0,
                segments,
                checkpoints,
                ..
            } => {
                let mut s = t - t0;
                for (i, seg) in segments.iter().enumerate() {
                    if s <= seg.duration || i + 1 == segments.len() {
                        let s = s.clamp(0.0, seg.duration);
                        return (seg.generator.clone() * s).exp() * &checkpoints[i];
                    }
                    s -= seg.duration;
                }
                checkpoints[0].clone()
            }
            LagrangianPath::Samples { nodes } => {
                if t <= nodes[0].0 {
                    return nodes[0].1.columns().clone();
                }
                if t >= nodes.last().unwrap().0 {
                    return nodes.last().unwrap().1.columns().clone();
                }
                let k = nodes.partition_point(|(s, _)| *s <= t) - 1;
                let (ta, fa) = &nodes[k];
                let (tb, fb) = &nodes[k + 1];
                let s = (t - ta) / (tb - ta);
                if s <= 0.0 {
                    return fa.columns().clone();
                }
                // graph interpolation over λ(ta) with complement J₀·λ(ta):
                // λ(s) = {w + s·A w}, A the symmetric graph map of λ(tb)
                let n = fa.n();
                let w = fa.orthonormal();
                let p = j0_matrix(n) * w;
                let x = w.transpose() * fb.orthonormal();
                let y = p.transpose() * fb.orthonormal();
                let m = &y * x.try_inverse().expect("density guard keeps X invertible");
                let m = (&m + m.transpose()) * 0.5;
                w + p * (m * s)
            }
        }
    }

    pub fn eval(&self, t: f64) -> Result<LagrangianFrame> {
        LagrangianFrame::new(self.eval_columns(t))
    }
}

/// A path of symplectic matrices (same two variants).
#[derive(Debug, Clone)]
pub enum SymplecticPath {
    Exponential {
        start: SymplecticMatrix,
        t0: f64,
        segments: Vec<ExpSegment>,
    },
    Samples {
        nodes: Vec<(f64, SymplecticMatrix)>,
    },
}

impl SymplecticPath {
    pub fn exponential(
        start: SymplecticMatrix,
        t0: f64,
        segments: Vec<ExpSegment>,
    ) -> Result<Self> {
        let n = start.n();
        for seg in &segments {
            if seg.generator.shape() != (2 * n, 2 * n) {
                return Err(Error::DimensionMismatch("generator shape".into()));
            }
            if !is_hamiltonian_generator(&seg.generator) {
                return Err(Error::NotSymplectic(f64::NAN));
            }
            if !(seg.duration > 0.0 && seg.duration.is_finite()) {
                return Err(Error::MalformedData("segment duration must be > 0".into()));
            }
        }
        Ok(SymplecticPath::Exponential {
            start,
            t0,
            segments,
        })
    }

    pub fn samples(nodes: Vec<(f64, SymplecticMatrix)>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::MalformedData("empty sample path".into()));
        }
        for w in nodes.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::MalformedData(
                    "sample times must be strictly increasing".into(),
                ));
            }
        }
        Ok(SymplecticPath::Samples { nodes })
    }

    pub fn n(&self) -> usize {
        match self {
            SymplecticPath::Exponential { start, .. } => start.n(),
            SymplecticPath::Samples { nodes } => nodes[0].1.n(),
        }
    }

    pub fn interval(&self) -> (f64, f64) {
        match self {
            SymplecticPath::Exponential { t0, segments, .. } => {
                (*t0, t0 + segments.iter().map(|s| s.duration).sum::<f64>())
            }
            SymplecticPath::Samples { nodes } => (nodes[0].0, nodes.last().unwrap().0),
        }
    }

    pub fn eval(&self, t: f64) -> Result<SymplecticMatrix> {
        match self {
            SymplecticPath::Exponential {
                start,
                t0,
                segments,
            } => {
                let mut m = start.matrix().clone();
                let mut s = t - t0;
                for seg in segments {
                    let step = s.clamp(0.0, seg.duration);
                    m = (seg.generator.clone() * step).exp() * m;
                    s -= seg.duration;
                    if s <= 0.0 {
                        break;
                    }
                }
                SymplecticMatrix::new(m)
            }
            SymplecticPath::Samples { nodes } => {
                // piecewise-constant-in-between is too crude for index work;
                // the graph path below re-samples instead. Here we return the
                // nearest node (exact at nodes).
                let k = nodes
                    .iter()
                    .position(|(s, _)| *s >= t)
                    .unwrap_or(nodes.len() - 1);
                Ok(nodes[k].1.clone())
            }
        }
    }

    /// The conjugation-twisted graph path in R^{4n}: t ↦ {(x̄, φ(t)x)}. This is
    /// a Lagrangian path for the standard form; the diagonal goes to the
    /// twisted graph of the identity.
    pub fn graph_path(&self) -> Result<LagrangianPath> {
        let n = self.n();
        match self {
            SymplecticPath::Exponential {
                start,
                t0,
                segments,
            } => {
                let start_frame = crate::symcore::graph_frame(start).twisted()?;
                let segs = segments
                    .iter()
                    .map(|seg| ExpSegment {
                        generator: embed_second_factor(&seg.generator, n),
                        duration: seg.duration,
                    })
                    .collect();
                LagrangianPath::exponential(start_frame, *t0, segs)
            }
            SymplecticPath::Samples { nodes } => {
                let frames = nodes
                    .iter()
                    .map(|(t, m)| Ok((*t, crate::symcore::graph_frame(m).twisted()?)))
                    .collect::<Result<Vec<_>>>()?;
                LagrangianPath::samples(frames)
            }
        }
    }
}

/// Embed a 2n×2n generator acting on the second factor of R^{2n} ⊕ R^{2n}
/// into the 4n×4n product layout of `symcore::product_embed`.
fn embed_second_factor(g: &DMatrix<f64>, n: usize) -> DMatrix<f64> {
    let idx = |i: usize| if i < n { n + i } else { 2 * n + i };
    let mut out = DMatrix::zeros(4 * n, 4 * n);
    for i in 0..2 * n {
        for j in 0..2 * n {
            out[(idx(i), idx(j))] = g[(i, j)];
        }
    }
    out
}

// ---------------------------------------------------------------------------
// crossings
// ---------------------------------------------------------------------------

/// A regular crossing of a pair of Lagrangian paths.
#[derive(Debug, Clone, PartialEq)]
pub struct Crossing {
    pub t: f64,
    pub kernel_dim: usize,
    /// (positive, negative) inertia of the relative crossing form.
    pub signature: (usize, usize),
}

impl Crossing {
    pub fn sign(&self) -> i64 {
        self.signature.0 as i64 - self.signature.1 as i64
    }
}

struct PairEval<'a> {
    p0: &'a LagrangianPath,
    p1: &'a LagrangianPath,
    /// optional symplectic perturbation applied to λ1's frames
    pre1: Option<DMatrix<f64>>,
}

impl<'a> PairEval<'a> {
    fn cols0(&self, t: f64) -> DMatrix<f64> {
        self.p0.eval_columns(t)
    }

    fn cols1(&self, t: f64) -> DMatrix<f64> {
        let c = self.p1.eval_columns(t);
        match &self.pre1 {
            Some(p) => p * c,
            None => c,
        }
    }

    fn orth0(&self, t: f64) -> DMatrix<f64> {
        orthonormalize(&self.cols0(t)).expect("path frame full rank")
    }

    fn orth1(&self, t: f64) -> DMatrix<f64> {
        orthonormalize(&self.cols1(t)).expect("path frame full rank")
    }

    /// Smallest singular value of Im(Z1* Z0): zero iff the subspaces meet.
    fn smin(&self, t: f64) -> f64 {
        let im = im_comparison(&self.orth0(t), &self.orth1(t));
        let svd = im.svd(false, false);
        svd.singular_values.iter().cloned().fold(f64::MAX, f64::min)
    }
}

fn complex_of_orth(w: &DMatrix<f64>) -> DMatrix<Complex<f64>> {
    let n = w.ncols();
    DMatrix::from_fn(n, n, |i, j| Complex::new(w[(i, j)], w[(n + i, j)]))
}

/// Im(Z1* Z0) as a real n×n matrix; its kernel (over R) is the coordinate
/// space of λ0 ∩ λ1.
fn im_comparison(w0: &DMatrix<f64>, w1: &DMatrix<f64>) -> DMatrix<f64> {
    let z0 = complex_of_orth(w0);
    let z1 = complex_of_orth(w1);
    let c = z1.adjoint() * z0;
    c.map(|z| z.im)
}

fn grid_size(pair: &PairEval, a: f64, b: f64) -> usize {
    let rate = pair.p0.rotation_estimate() + pair.p1.rotation_estimate();
    let m = (96.0 * (1.0 + rate)).ceil() as usize;
    m.clamp(128, 40_000).max(((b - a) * 16.0) as usize)
}

/// Locate all crossings λ0(t) ∩ λ1(t) ≠ 0, refined to parameter accuracy eps,
/// with the relative crossing-form signature at each.
pub fn crossings(
    lambda0: &LagrangianPath,
    lambda1: &LagrangianPath,
    eps: f64,
) -> Result<Vec<Crossing>> {
    crossings_mode(lambda0, lambda1, eps, ExecMode::Auto)
}

pub fn crossings_mode(
    lambda0: &LagrangianPath,
    lambda1: &LagrangianPath,
    eps: f64,
    mode: ExecMode,
) -> Result<Vec<Crossing>> {
    let pair = PairEval {
        p0: lambda0,
        p1: lambda1,
        pre1: None,
    };
    let ts = locate_crossings(&pair, eps, mode)?;
    ts.into_iter()
        .map(|t| crossing_form(&pair, t).map(|(kernel_dim, pos, neg)| Crossing {
            t,
            kernel_dim,
            signature: (pos, neg),
        }))
        .collect()
}

fn check_common_interval(pair: &PairEval) -> Result<(f64, f64)> {
    if pair.p0.n() != pair.p1.n() {
        return Err(Error::DimensionMismatch(format!(
            "n = {} vs {}",
            pair.p0.n(),
            pair.p1.n()
        )));
    }
    let (a0, b0) = pair.p0.interval();
    let (a1, b1) = pair.p1.interval();
    if (a0 - a1).abs() > 1e-9 || (b0 - b1).abs() > 1e-9 {
        return Err(Error::DimensionMismatch(format!(
            "parameter intervals differ: [{a0}, {b0}] vs [{a1}, {b1}]"
        )));
    }
    Ok((a0, b0))
}

fn locate_crossings(pair: &PairEval, eps: f64, mode: ExecMode) -> Result<Vec<f64>> {
    let (a, b) = check_common_interval(pair)?;
    let m = grid_size(pair, a, b);
    let f = par::map_grid(m + 1, mode, |i| {
        let t = a + (b - a) * i as f64 / m as f64;
        pair.smin(t)
    });

    let mut ts: Vec<f64> = Vec::new();
    // endpoint crossings read off directly
    if f[0] < tol::KERNEL_TOL {
        ts.push(a);
    }
    let activation = 0.45;
    for i in 1..m {
        if f[i] < activation && f[i] <= f[i - 1] && f[i] <= f[i + 1] {
            let lo = a + (b - a) * (i - 1) as f64 / m as f64;
            let hi = a + (b - a) * (i + 1) as f64 / m as f64;
            let t = golden_min(|t| pair.smin(t), lo, hi, eps.max(tol::BISECT_EPS));
            if pair.smin(t) < tol::KERNEL_TOL {
                ts.push(t);
            }
        }
    }
    // a crossing can hide inside the first or last grid cell, with the grid
    // minimum sitting on the boundary index that the loop above skips
    if f[0] < activation && f[0] <= f[1] && f[0] >= tol::KERNEL_TOL {
        let hi = a + (b - a) / m as f64;
        let t = golden_min(|t| pair.smin(t), a, hi, eps.max(tol::BISECT_EPS));
        if pair.smin(t) < tol::KERNEL_TOL {
            ts.push(t);
        }
    }
    if f[m] < activation && f[m] <= f[m - 1] && f[m] >= tol::KERNEL_TOL {
        let lo = a + (b - a) * (m - 1) as f64 / m as f64;
        let t = golden_min(|t| pair.smin(t), lo, b, eps.max(tol::BISECT_EPS));
        if pair.smin(t) < tol::KERNEL_TOL {
            ts.push(t);
        }
    }
    if f[m] < tol::KERNEL_TOL {
        ts.push(b);
    }
    // snap to endpoints, sort, dedupe
    let snap = ((b - a) / m as f64).max(1e3 * eps);
    for t in ts.iter_mut() {
        if (*t - a).abs() < snap && pair.smin(a) < tol::KERNEL_TOL {
            *t = a;
        }
        if (*t - b).abs() < snap && pair.smin(b) < tol::KERNEL_TOL {
            *t = b;
        }
    }
    ts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    ts.dedup_by(|x, y| (*x - *y).abs() < snap);
    Ok(ts)
}

fn golden_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, eps: f64) -> f64 {
    let phi = (5.0_f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - phi * (hi - lo);
    let mut d = lo + phi * (hi - lo);
    let mut fc = f(c);
    let mut fd = f(d);
    while hi - lo > eps {
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - phi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + phi * (hi - lo);
            fd = f(d);
        }
    }
    0.5 * (lo + hi)
}

/// Kernel basis and inertia of the relative crossing form at t₀.
fn crossing_form(pair: &PairEval, t0: f64) -> Result<(usize, usize, usize)> {
    let (a, b) = check_common_interval(pair)?;
    let n = pair.p0.n();
    let w0 = pair.orth0(t0);
    let w1 = pair.orth1(t0);

    // kernel of Im(Z1* Z0) over R = coordinates of the intersection in w0
    let im = im_comparison(&w0, &w1);
    let svd = im.svd(false, true);
    let vt = svd.v_t.as_ref().unwrap();
    let mut kernel_cols: Vec<DVector<f64>> = Vec::new();
    for (j, s) in svd.singular_values.iter().enumerate() {
        if *s < 1e-6 {
            kernel_cols.push(vt.row(j).transpose());
        }
    }
    let d = kernel_cols.len();
    if d == 0 {
        return Err(Error::DegenerateCrossing(t0));
    }
    let mut k_mat = DMatrix::zeros(2 * n, d);
    for (j, x) in kernel_cols.iter().enumerate() {
        k_mat.set_column(j, &(&w0 * x));
    }
    let k_mat = orthonormalize(&k_mat)?;

    // one-sided/central derivative of the graph form over each path
    let h = 1e-5 * (b - a).max(1e-3);
    let gamma = |which: usize| -> DMatrix<f64> {
        let w = if which == 0 { &w0 } else { &w1 };
        let p = j0_matrix(n) * w;
        let bmat = w.transpose() * &k_mat; // n×d coordinates of kernel in w
        let q_at = |t: f64| -> DMatrix<f64> {
            let cols = if which == 0 {
                pair.cols0(t)
            } else {
                pair.cols1(t)
            };
            let x = w.transpose() * &cols;
            let y = p.transpose() * &cols;
            let m = &y * x.try_inverse().expect("graph over own tangent");
            let m = (&m + m.transpose()) * 0.5;
            bmat.transpose() * m * &bmat
        };
        if t0 - h >= a && t0 + h <= b {
            (q_at(t0 + h) - q_at(t0 - h)) / (2.0 * h)
        } else if t0 + 2.0 * h <= b {
            (q_at(t0) * -3.0 + q_at(t0 + h) * 4.0 - q_at(t0 + 2.0 * h)) / (2.0 * h)
        } else {
            (q_at(t0) * 3.0 - q_at(t0 - h) * 4.0 + q_at(t0 - 2.0 * h)) / (2.0 * h)
        }
    };
    let g = gamma(0) - gamma(1);
    let g = (&g + g.transpose()) * 0.5;
    let eig = g.symmetric_eigenvalues();
    let scale = eig.iter().fold(0.0_f64, |acc, e| acc.max(e.abs())).max(1e-6);
    let mut pos = 0;
    let mut neg = 0;
    for e in eig.iter() {
        if e.abs() < 1e-4 * scale.max(1.0) {
            return Err(Error::DegenerateCrossing(t0));
        }
        if *e > 0.0 {
            pos += 1;
        } else {
            neg += 1;
        }
    }
    Ok((d, pos, neg))
}

// ---------------------------------------------------------------------------
// Maslov index
// ---------------------------------------------------------------------------

use crate::symcore::HalfInt;

fn sum_crossings(crossings: &[Crossing], a: f64, b: f64, span: f64) -> HalfInt {
    let edge = 1e-7 * span.max(1.0);
    let mut twice = 0i64;
    for c in crossings {
        let s = c.sign();
        if (c.t - a).abs() < edge || (c.t - b).abs() < edge {
            twice += s;
        } else {
            twice += 2 * s;
        }
    }
    HalfInt::new(twice)
}

fn maslov_from_eval(pair: &PairEval, mode: ExecMode) -> Result<HalfInt> {
    let (a, b) = check_common_interval(pair)?;
    let ts = locate_crossings(pair, tol::BISECT_EPS, mode)?;
    let mut cs = Vec::with_capacity(ts.len());
    for t in ts {
        let (kernel_dim, pos, neg) = crossing_form(pair, t)?;
        cs.push(Crossing {
            t,
            kernel_dim,
            signature: (pos, neg),
        });
    }
    let mu = sum_crossings(&cs, a, b, b - a);
    // parity safety net: μ ∈ Z iff endpoint intersection dims agree mod 2
    let dim_at = |t: f64| -> usize {
        let im = im_comparison(&pair.orth0(t), &pair.orth1(t));
        im.svd(false, false)
            .singular_values
            .iter()
            .filter(|s| **s < 1e-6)
            .count()
    };
    let parity = (dim_at(a) + dim_at(b)) % 2;
    if (mu.is_integral() && parity != 0) || (!mu.is_integral() && parity == 0) {
        return Err(Error::NonIntegralIndex(format!(
            "parity rule violated: μ = {mu}, endpoint dims {} and {}",
            dim_at(a),
            dim_at(b)
        )));
    }
    Ok(mu)
}

/// Maslov index without the perturbation fallback. Used internally where the
/// endpoints themselves are crossings (a shear would change endpoint data).
pub(crate) fn maslov_pair_raw(
    lambda0: &LagrangianPath,
    lambda1: &LagrangianPath,
    mode: ExecMode,
) -> Result<HalfInt> {
    let pair = PairEval {
        p0: lambda0,
        p1: lambda1,
        pre1: None,
    };
    maslov_from_eval(&pair, mode)
}

/// Deterministic symmetric matrix for the shear-perturbation retry, seeded by
/// MASLOVKIT_SEED (default 0) so reruns are reproducible.
fn perturbation_generator(n: usize) -> DMatrix<f64> {
    use rand::{Rng, SeedableRng};
    let seed = std::env::var("MASLOVKIT_SEED")
        .ok()
        .and_then(|s| s.parse::<u64>().ok())
        .unwrap_or(0);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ 0x4d41_534c_4f56_u64);
    let mut s = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..2 * n {
        for j in 0..=i {
            let v: f64 = rng.gen_range(-1.0..1.0);
            s[(i, j)] = v;
            s[(j, i)] = v;
        }
    }
    j0_matrix(n) * s // Hamiltonian: J₀·(J₀S) = −S symmetric
}

/// Robbin–Salamon Maslov index of a pair of Lagrangian paths:
/// μ = ½·sign Γ(a) + Σ_interior sign Γ(t) + ½·sign Γ(b).
pub fn maslov_pair(lambda0: &LagrangianPath, lambda1: &LagrangianPath) -> Result<HalfInt> {
    maslov_pair_mode(lambda0, lambda1, ExecMode::Auto)
}

pub fn maslov_pair_mode(
    lambda0: &LagrangianPath,
    lambda1: &LagrangianPath,
    mode: ExecMode,
) -> Result<HalfInt> {
    let pair = PairEval {
        p0: lambda0,
        p1: lambda1,
        pre1: None,
    };
    match maslov_from_eval(&pair, mode) {
        Ok(mu) => Ok(mu),
        Err(Error::DegenerateCrossing(t)) => {
            // homotopy invariance: retry with a fixed small shear applied to
            // λ1, at ε and ε/2; accept only if both agree
            let n = lambda0.n();
            let g = perturbation_generator(n);
            let run = |eps: f64| -> Result<HalfInt> {
                let pre = (g.clone() * eps).exp();
                let pair = PairEval {
                    p0: lambda0,
                    p1: lambda1,
                    pre1: Some(pre),
                };
                maslov_from_eval(&pair, mode)
            };
            let a = run(1e-6)?;
            let b = run(5e-7)?;
            if a == b {
                Ok(a)
            } else {
                Err(Error::DegenerateCrossing(t))
            }
        }
        Err(e) => Err(e),
    }
}

/// Conley–Zehnder index ζ(φ) = μ(Δ, graph φ) in (V ⊕ V, −β ⊕ β).
///
/// The sign is pinned so that a short clockwise rotation exp(−tJ₀) has ζ = +1
/// (equivalently: the absolute index of a graded symplectic automorphism
/// satisfies the Morse rule with index 0 for positive-definite forms).
pub fn conley_zehnder(phi: &SymplecticPath) -> Result<HalfInt> {
    conley_zehnder_mode(phi, ExecMode::Auto)
}

pub fn conley_zehnder_mode(phi: &SymplecticPath, mode: ExecMode) -> Result<HalfInt> {
    let n = phi.n();
    let graph = phi.graph_path()?;
    let (a, b) = graph.interval();
    let diag = crate::symcore::graph_frame(&SymplecticMatrix::identity(n)).twisted()?;
    let delta = LagrangianPath::constant(diag, a, b)?;
    Ok(-maslov_pair_mode(&graph, &delta, mode)?)
}

// ---------------------------------------------------------------------------
// det² winding
// ---------------------------------------------------------------------------

/// Total increment of the continuous lift of arg det²(λ(t)) / 2π.
pub fn winding_det_sq(lambda: &LagrangianPath) -> Result<f64> {
    winding_det_sq_mode(lambda, ExecMode::Auto)
}

pub fn winding_det_sq_mode(lambda: &LagrangianPath, mode: ExecMode) -> Result<f64> {
    let (a, b) = lambda.interval();
    let n = lambda.n() as f64;
    let rate = lambda.rotation_estimate() * (n + 1.0);
    let mut m = ((64.0 * (1.0 + rate)).ceil() as usize).clamp(128, 200_000);
    for _attempt in 0..4 {
        let angles = par::map_grid(m + 1, mode, |i| {
            let t = a + (b - a) * i as f64 / m as f64;
            let f = orthonormalize(&lambda.eval_columns(t)).expect("full rank along path");
            let z = complex_of_orth(&f);
            let det = nalgebra::linalg::LU::new(z).determinant();
            let d2 = det * det;
            d2.im.atan2(d2.re)
        });
        let mut total = 0.0;
        let mut coarse = false;
        for w in angles.windows(2) {
            let d = wrap_pi(w[1] - w[0]);
            if d.abs() > 2.0 {
                coarse = true;
                break;
            }
            total += d;
        }
        if !coarse {
            return Ok(total / TWO_PI);
        }
        m *= 4;
    }
    Err(Error::PathTooCoarse(
        "det² phase steps exceed half a turn even after refinement".into(),
    ))
}

// ---------------------------------------------------------------------------
// eigenvalue-winding cross-check channel
// ---------------------------------------------------------------------------

/// Eigenphases of a unitary complex matrix, via simultaneous diagonalization
/// of its commuting Hermitian and anti-Hermitian parts.
fn unitary_eigenphases(w: &DMatrix<Complex<f64>>) -> Vec<f64> {
    let nn = w.nrows();
    let h = (w + w.adjoint()).map(|z| z * Complex::new(0.5, 0.0));
    let k = (w - w.adjoint()).map(|z| z * Complex::new(0.0, -0.5));
    let eig = nalgebra::SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..nn).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].partial_cmp(&eig.eigenvalues[j]).unwrap());
    let mut phases = Vec::with_capacity(nn);
    let mut i = 0;
    while i < nn {
        let mut j = i + 1;
        while j < nn
            && (eig.eigenvalues[order[j]] - eig.eigenvalues[order[i]]).abs() < 1e-8
        {
            j += 1;
        }
        // cluster [i, j): diagonalize the projection of K
        let cols: Vec<usize> = order[i..j].to_vec();
        let mut v = DMatrix::zeros(nn, cols.len());
        for (c, &idx) in cols.iter().enumerate() {
            v.set_column(c, &eig.eigenvectors.column(idx));
        }
        let ksub = v.adjoint() * &k * &v;
        let sins = nalgebra::SymmetricEigen::new(ksub).eigenvalues;
        let cos = eig.eigenvalues[order[i]];
        for s in sins.iter() {
            phases.push(s.atan2(cos));
        }
        i = j;
    }
    phases
}

fn wrap_sorted(unwrapped: &[f64]) -> Vec<(usize, f64)> {
    let mut v: Vec<(usize, f64)> = unwrapped
        .iter()
        .enumerate()
        .map(|(i, &x)| (i, wrap_pi(x)))
        .collect();
    v.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
    v
}

/// Half-integer endpoint weight function: f(θ) = (⌊θ/2π⌋ + ⌈θ/2π⌉)/2, with θ
/// snapped to exact multiples of 2π within `snap`.
fn endpoint_weight(theta: f64, snap: f64) -> HalfInt {
    let m = (theta / TWO_PI).round();
    if (theta - m * TWO_PI).abs() < snap {
        HalfInt::from_int(m as i64)
    } else {
        HalfInt::new(2 * (theta / TWO_PI).floor() as i64 + 1)
    }
}

/// Independent Maslov computation: the sum over eigenphase branches of the
/// unitary comparison matrix S̄₁(t)·S₀(t) (S = ZZᵀ) of their signed winding
/// through +1, with half-weights at the endpoints.
pub fn maslov_eigenwinding(
    lambda0: &LagrangianPath,
    lambda1: &LagrangianPath,
) -> Result<HalfInt> {
    maslov_eigenwinding_mode(lambda0, lambda1, ExecMode::Auto)
}

pub fn maslov_eigenwinding_mode(
    lambda0: &LagrangianPath,
    lambda1: &LagrangianPath,
    mode: ExecMode,
) -> Result<HalfInt> {
    let pair = PairEval {
        p0: lambda0,
        p1: lambda1,
        pre1: None,
    };
    let (a, b) = check_common_interval(&pair)?;
    let n = pair.p0.n();
    let rate = pair.p0.rotation_estimate() + pair.p1.rotation_estimate();
    let mut m = ((96.0 * (1.0 + rate)).ceil() as usize).clamp(128, 200_000);

    'attempt: for _ in 0..4 {
        let raw = par::map_grid(m + 1, mode, |i| {
            let t = a + (b - a) * i as f64 / m as f64;
            let z0 = complex_of_orth(&pair.orth0(t));
            let z1 = complex_of_orth(&pair.orth1(t));
            let s0 = &z0 * z0.transpose();
            let s1 = &z1 * z1.transpose();
            let w = s1.map(|z| z.conj()) * s0;
            let mut p = unitary_eigenphases(&w);
            p.sort_by(|x, y| x.partial_cmp(y).unwrap());
            p
        });
        let mut unwrapped = raw[0].clone();
        for step in raw.windows(2) {
            let target = &step[1];
            let prev_sorted = wrap_sorted(&unwrapped);
            // best cyclic offset matching (phases preserve cyclic order)
            let mut best: Option<(f64, usize)> = None;
            for off in 0..n {
                let mut cost = 0.0;
                for (i, (_, w)) in prev_sorted.iter().enumerate() {
                    cost += wrap_pi(target[(i + off) % n] - w).abs();
                }
                if best.map_or(true, |(c, _)| cost < c) {
                    best = Some((cost, off));
                }
            }
            let (_, off) = best.unwrap();
            let mut max_step = 0.0_f64;
            let deltas: Vec<(usize, f64)> = prev_sorted
                .iter()
                .enumerate()
                .map(|(i, (idx, w))| {
                    let d = wrap_pi(target[(i + off) % n] - w);
                    max_step = max_step.max(d.abs());
                    (*idx, d)
                })
                .collect();
            if max_step > 1.2 {
                m *= 4;
                if m > 400_000 {
                    return Err(Error::PathTooCoarse(
                        "eigenphase steps too large for reliable tracking".into(),
                    ));
                }
                continue 'attempt;
            }
            for (idx, d) in deltas {
                unwrapped[idx] += d;
            }
        }
        let snap = 1e-5;
        let start = &raw[0];
        let mut total = HalfInt::ZERO;
        // branch j started at start[j] (same sorted order as `unwrapped` init)
        for (j, end) in unwrapped.iter().enumerate() {
            total = total + endpoint_weight(*end, snap) - endpoint_weight(start[j], snap);
        }
        return Ok(total);
    }
    unreachable!()
}

/// Crossing-form Maslov index with the independent eigenvalue-winding channel
/// as a hard cross-check.
pub fn maslov_pair_checked(
    lambda0: &LagrangianPath,
    lambda1: &LagrangianPath,
) -> Result<HalfInt> {
    let a = maslov_pair(lambda0, lambda1)?;
    let b = maslov_eigenwinding(lambda0, lambda1)?;
    if a != b {
        return Err(Error::CrossCheckMismatch(a.to_string(), b.to_string()));
    }
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::real_form;

    fn rotation_path(n: usize, angle_rate: f64, duration: f64) -> LagrangianPath {
        // λ(t) = e^{i·angle_rate·t} R^n (all coordinates rotating together)
        let gen = real_form(&DMatrix::from_diagonal(&DVector::from_element(
            n,
            Complex::new(0.0, angle_rate),
        )));
        LagrangianPath::exponential(
            LagrangianFrame::standard_rn(n),
            0.0,
            vec![ExpSegment {
                generator: gen,
                duration,
            }],
        )
        .unwrap()
    }

    #[test]
    fn constant_transverse_pair_has_no_crossings() {
        let l0 = LagrangianPath::constant(LagrangianFrame::standard_rn(1), 0.0, 1.0).unwrap();
        let l1 = LagrangianPath::constant(LagrangianFrame::standard_irn(1), 0.0, 1.0).unwrap();
        assert!(crossings(&l0, &l1, 1e-10).unwrap().is_empty());
        assert_eq!(maslov_pair(&l0, &l1).unwrap(), HalfInt::ZERO);
    }

    #[test]
    fn rotation_against_irn_crosses_once_positively() {
        let l0 = rotation_path(1, std::f64::consts::PI, 1.0);
        let l1 = LagrangianPath::constant(LagrangianFrame::standard_irn(1), 0.0, 1.0).unwrap();
        let cs = crossings(&l0, &l1, 1e-10).unwrap();
        assert_eq!(cs.len(), 1);
        assert!((cs[0].t - 0.5).abs() < 1e-8);
        assert_eq!(cs[0].kernel_dim, 1);
        assert_eq!(cs[0].signature, (1, 0));
        assert_eq!(maslov_pair(&l0, &l1).unwrap(), HalfInt::from_int(1));
    }

    #[test]
    fn quarter_rotation_endpoint_crossing_counts_half() {
        let l0 = rotation_path(1, std::f64::consts::FRAC_PI_2, 1.0);
        let l1 = LagrangianPath::constant(LagrangianFrame::standard_irn(1), 0.0, 1.0).unwrap();
        assert_eq!(maslov_pair(&l0, &l1).unwrap(), HalfInt::new(1));
    }

    #[test]
    fn graph_of_quadratic_form_crosses_at_zero_with_full_kernel() {
        // λ0(t) = graph(tA) over R^n for a rank-n form vs λ1 ≡ R^n: the path
        // frame is [I; tB] (B symmetric nondegenerate)
        let n = 2;
        // generator G with exp(tG)·R^n = graph over R^n: G = [[0,0],[B,0]]
        let mut g = DMatrix::zeros(4, 4);
        g[(2, 0)] = 1.0;
        g[(3, 1)] = -2.0;
        assert!(is_hamiltonian_generator(&g));
        let path = LagrangianPath::exponential(
            LagrangianFrame::standard_rn(n),
            0.0,
            vec![ExpSegment {
                generator: g,
                duration: 1.0,
            }],
        )
        .unwrap();
        let l1 = LagrangianPath::constant(LagrangianFrame::standard_rn(n), 0.0, 1.0).unwrap();
        let cs = crossings(&path, &l1, 1e-10).unwrap();
        assert_eq!(cs.len(), 1);
        assert!((cs[0].t).abs() < 1e-8);
        assert_eq!(cs[0].kernel_dim, n);
        // signature (1, 1): one positive and one negative direction
        assert_eq!(cs[0].signature.0 + cs[0].signature.1, n);
    }

    #[test]
    fn cz_of_small_rotations() {
        let n = 1;
        let j = j0_matrix(n);
        let mk = |sign: f64| {
            SymplecticPath::exponential(
                SymplecticMatrix::identity(n),
                0.0,
                vec![ExpSegment {
                    generator: j.clone() * sign,
                    duration: 0.25,
                }],
            )
            .unwrap()
        };
        assert_eq!(conley_zehnder(&mk(-1.0)).unwrap(), HalfInt::from_int(1));
        assert_eq!(conley_zehnder(&mk(1.0)).unwrap(), HalfInt::from_int(-1));
    }

    #[test]
    fn cz_of_constant_nondegenerate_is_zero() {
        let phi = SymplecticMatrix::new(real_form(&DMatrix::from_diagonal(
            &DVector::from_element(1, Complex::from_polar(1.0, 1.0)),
        )))
        .unwrap();
        let path = SymplecticPath::samples(vec![(0.0, phi.clone()), (1.0, phi)]).unwrap();
        assert_eq!(conley_zehnder(&path).unwrap(), HalfInt::ZERO);
    }

    #[test]
    fn winding_of_full_rotation_loop() {
        let l = rotation_path(1, std::f64::consts::PI, 1.0);
        let w = winding_det_sq(&l).unwrap();
        assert!((w - 1.0).abs() < 1e-6, "got {w}");
        let c = LagrangianPath::constant(LagrangianFrame::standard_rn(2), 0.0, 1.0).unwrap();
        assert!(winding_det_sq(&c).unwrap().abs() < 1e-9);
    }

    #[test]
    fn eigenwinding_agrees_on_basic_examples() {
        let l0 = rotation_path(1, std::f64::consts::PI, 1.0);
        let l1 = LagrangianPath::constant(LagrangianFrame::standard_irn(1), 0.0, 1.0).unwrap();
        assert_eq!(
            maslov_pair_checked(&l0, &l1).unwrap(),
            HalfInt::from_int(1)
        );
        // quarter rotation in n = 2 ends on iR²: one endpoint crossing with a
        // two-dimensional positive form, weight ½·2 = 1
        let l2 = rotation_path(2, std::f64::consts::FRAC_PI_2, 1.0);
        let l3 = LagrangianPath::constant(LagrangianFrame::standard_irn(2), 0.0, 1.0).unwrap();
        assert_eq!(maslov_pair_checked(&l2, &l3).unwrap(), HalfInt::from_int(1));
    }

    #[test]
    fn sample_paths_enforce_density_guard() {
        let a = LagrangianFrame::standard_rn(1);
        let b = LagrangianFrame::standard_irn(1);
        assert!(matches!(
            LagrangianPath::samples(vec![(0.0, a), (1.0, b)]),
            Err(Error::PathTooCoarse(_))
        ));
    }
}
