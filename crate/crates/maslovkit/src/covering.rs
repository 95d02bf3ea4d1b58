//! N-fold Maslov coverings of the Lagrangian Grassmannian as phase lifts of
//! det², with the absolute Z/N-valued Maslov and Conley–Zehnder indices,
//! graded unitary elements acting on lifts, the Lagrangian-handle grading
//! curve, and the local Dehn-twist winding number.
//!
//! A lift is a pair (frame, θ) with e^{2πiθ} = det²(frame); the deck group
//! Z (or Z/N) acts by ρ(k): θ ↦ θ + k. θ is stored as an exact integer deck
//! part plus a float fraction in [0, 1), so Z/N arithmetic never touches
//! floats.

use nalgebra::{Complex, DMatrix};

use crate::index::{
    conley_zehnder, maslov_pair_raw, winding_det_sq, ExpSegment, LagrangianPath, SymplecticPath,
};
use crate::symcore::{
    det_sq, real_form, HalfInt, LagrangianFrame, Modulus, SymplecticMatrix, ZModN,
};
use crate::{tol, Error, ExecMode, Result};

const TWO_PI: f64 = std::f64::consts::TAU;

/// arg z / 2π mapped into [0, 1).
fn frac_of_angle(z: Complex<f64>) -> f64 {
    let a = z.im.atan2(z.re) / TWO_PI;
    let a = a - a.floor();
    // snap the wraparound so a phase just below a full turn does not land on
    // the wrong deck sheet
    if 1.0 - a < 1e-9 {
        0.0
    } else {
        a
    }
}

fn reduce_deck(deck: i64, modulus: Modulus) -> i64 {
    match modulus {
        Modulus::Finite(n) => deck.rem_euclid(n as i64),
        Modulus::Infinite => deck,
    }
}

// ---------------------------------------------------------------------------
// MaslovLift
// ---------------------------------------------------------------------------

/// A point of the N-fold Maslov covering: a Lagrangian frame together with a
/// phase lift θ of det², θ taken mod N for finite N.
#[derive(Debug, Clone)]
pub struct MaslovLift {
    frame: LagrangianFrame,
    modulus: Modulus,
    deck: i64,
    frac: f64,
}

impl MaslovLift {
    pub fn new(frame: LagrangianFrame, modulus: Modulus, theta: f64) -> Result<Self> {
        let frac = frac_of_angle(det_sq(&frame).value());
        let diff = theta - frac;
        let deck = diff.round();
        if (diff - deck).abs() > 100.0 * tol::phase_tol() {
            return Err(Error::InconsistentStart);
        }
        Ok(MaslovLift {
            frame,
            modulus,
            deck: reduce_deck(deck as i64, modulus),
            frac,
        })
    }

    pub fn frame(&self) -> &LagrangianFrame {
        &self.frame
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    /// Integer deck part of θ (reduced mod N for finite N).
    pub fn deck(&self) -> i64 {
        self.deck
    }

    /// Fractional part of θ in [0, 1), fixed by the frame.
    pub fn frac(&self) -> f64 {
        self.frac
    }

    pub fn theta(&self) -> f64 {
        self.deck as f64 + self.frac
    }

    /// Deck transformation ρ(k): θ ↦ θ + k.
    pub fn deck_shift(&self, k: i64) -> Self {
        MaslovLift {
            frame: self.frame.clone(),
            modulus: self.modulus,
            deck: reduce_deck(self.deck + k, self.modulus),
            frac: self.frac,
        }
    }
}

// ---------------------------------------------------------------------------
// lift_path
// ---------------------------------------------------------------------------

/// Continuous lift of det² along a Lagrangian path, from a declared starting
/// phase. Returns the endpoint lift and the traced θ values (unreduced).
pub fn lift_path(
    lambda: &LagrangianPath,
    theta_start: f64,
    modulus: Modulus,
) -> Result<(MaslovLift, Vec<(f64, f64)>)> {
    let (a, b) = lambda.interval();
    let start_frame = lambda.eval(a)?;
    let start_frac = frac_of_angle(det_sq(&start_frame).value());
    let r = theta_start - start_frac;
    if (r - r.round()).abs() > 100.0 * tol::phase_tol() {
        return Err(Error::InconsistentStart);
    }
    let m = ((64.0 * (1.0 + lambda.rotation_estimate() * (lambda.n() as f64 + 1.0))).ceil()
        as usize)
        .clamp(128, 200_000);
    let mut trace = Vec::with_capacity(m + 1);
    let mut theta = theta_start;
    let mut prev: Option<f64> = None;
    for i in 0..=m {
        let t = a + (b - a) * i as f64 / m as f64;
        let angle = det_sq(&lambda.eval(t)?).angle();
        if let Some(p) = prev {
            let d = {
                let mut d = (angle - p) % TWO_PI;
                if d > std::f64::consts::PI {
                    d -= TWO_PI;
                } else if d <= -std::f64::consts::PI {
                    d += TWO_PI;
                }
                d
            };
            if d.abs() > 2.0 {
                return Err(Error::PathTooCoarse(
                    "det² phase step exceeds the tracking bound".into(),
                ));
            }
            theta += d / TWO_PI;
        }
        prev = Some(angle);
        trace.push((t, theta));
    }
    let end = MaslovLift::new(lambda.eval(b)?, modulus, theta)?;
    Ok((end, trace))
}

// ---------------------------------------------------------------------------
// abs_maslov
// ---------------------------------------------------------------------------

/// Spectral data of the symmetric unitary S(λ) = ZZᵀ: a real orthogonal O and
/// angles θ_j ∈ [0, 2π) with S = O·diag(e^{iθ_j})·Oᵀ. The connecting path
/// s ↦ O·diag(e^{isθ_j/2})·R^n then runs from R^n to λ.
fn canonical_angles(frame: &LagrangianFrame) -> (DMatrix<f64>, Vec<f64>) {
    let n = frame.n();
    let z = frame.complex_form();
    let s = &z * z.transpose();
    let x = s.map(|v| v.re);
    let y = s.map(|v| v.im);
    let ex = x.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| ex.eigenvalues[i].partial_cmp(&ex.eigenvalues[j]).unwrap());
    let mut o = DMatrix::zeros(n, n);
    let mut thetas = vec![0.0; n];
    let mut col = 0;
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        while j < n && (ex.eigenvalues[order[j]] - ex.eigenvalues[order[i]]).abs() < 1e-8 {
            j += 1;
        }
        let cos = ex.eigenvalues[order[i]];
        let mut v = DMatrix::zeros(n, j - i);
        for (c, &idx) in order[i..j].iter().enumerate() {
            v.set_column(c, &ex.eigenvectors.column(idx));
        }
        // diagonalize Im S on the cluster (X and Y commute)
        let ysub = v.transpose() * &y * &v;
        let ey = ysub.symmetric_eigen();
        let rot = &v * &ey.eigenvectors;
        for c in 0..j - i {
            o.set_column(col, &rot.column(c));
            let th = ey.eigenvalues[c].atan2(cos);
            thetas[col] = if th < 0.0 { th + TWO_PI } else { th };
            col += 1;
        }
        i = j;
    }
    (o, thetas)
}

/// Connecting path O·diag(e^{isθ_j/2})·R^n on [0, 1] as an exponential path.
fn connecting_path(o: &DMatrix<f64>, thetas: &[f64]) -> Result<LagrangianPath> {
    let n = thetas.len();
    // generator is the real form of i·S̃ with S̃ = O·diag(θ_j/2)·Oᵀ
    let d = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        n,
        thetas.iter().map(|t| t / 2.0),
    ));
    let s_tilde = o * d * o.transpose();
    let gen = real_form(&s_tilde.map(|v| Complex::new(0.0, v)));
    let mut cols = DMatrix::zeros(2 * n, n);
    cols.view_mut((0, 0), (n, n)).copy_from(o);
    LagrangianPath::exponential(
        LagrangianFrame::new(cols)?,
        0.0,
        vec![ExpSegment {
            generator: gen,
            duration: 1.0,
        }],
    )
}

fn check_same_setting(l0: &MaslovLift, l1: &MaslovLift) -> Result<()> {
    if l0.frame.n() != l1.frame.n() {
        return Err(Error::DimensionMismatch(format!(
            "n = {} vs {}",
            l0.frame.n(),
            l1.frame.n()
        )));
    }
    if l0.modulus != l1.modulus {
        return Err(Error::ModulusMismatch(
            l0.modulus.to_string(),
            l1.modulus.to_string(),
        ));
    }
    Ok(())
}

fn intersection_dim(f0: &LagrangianFrame, f1: &LagrangianFrame) -> usize {
    let z0 = f0.complex_form();
    let z1 = f1.complex_form();
    let im = (z1.adjoint() * z0).map(|v| v.im);
    im.svd(false, false)
        .singular_values
        .iter()
        .filter(|s| **s < 1e-6)
        .count()
}

/// Absolute Maslov index μ̃(Λ̃0, Λ̃1) = n/2 − μ(λ0, λ1) ∈ Z/N, computed with
/// canonical connecting paths from the base lift (R^n, 0). Deck parts of the
/// inputs enter through the shift rule μ̃(ρ(k)·, ρ(l)·) = μ̃ − k + l.
pub fn abs_maslov(l0: &MaslovLift, l1: &MaslovLift) -> Result<ZModN> {
    abs_maslov_with_ladder(l0, l1, 0)
}

/// Same computation with the angle-ladder retries started at `first_attempt`;
/// exposed for the independence-of-choices tests (every route must agree).
pub fn abs_maslov_with_ladder(
    l0: &MaslovLift,
    l1: &MaslovLift,
    first_attempt: usize,
) -> Result<ZModN> {
    check_same_setting(l0, l1)?;
    if intersection_dim(&l0.frame, &l1.frame) != 0 {
        return Err(Error::NotTransverse);
    }
    let n = l0.frame.n();
    let (o0, base0) = canonical_angles(&l0.frame);
    let (o1, base1) = canonical_angles(&l1.frame);

    // attempt schedule: always bump θ_j ≈ 0 (a zero angle keeps a direction
    // inside R^n for the whole path); later attempts bump further angles by
    // full turns. Each bump shifts the canonical endpoint phase by exactly 1,
    // which the deck-difference bookkeeping cancels, so all routes agree.
    let mut last_err = Error::DegenerateCrossing(f64::NAN);
    for attempt in first_attempt..first_attempt + 2 * n + 1 {
        let bump = |angles: &[f64], extra: usize| -> Vec<f64> {
            let mut v: Vec<f64> = angles
                .iter()
                .map(|t| if *t < 1e-9 { t + TWO_PI } else { *t })
                .collect();
            let mut order: Vec<usize> = (0..v.len()).collect();
            order.sort_by(|&i, &j| v[i].partial_cmp(&v[j]).unwrap());
            for &idx in order.iter().take(extra) {
                v[idx] += TWO_PI;
            }
            v
        };
        let (e0, e1) = if attempt <= n {
            (0, attempt)
        } else {
            (attempt - n, 0)
        };
        let th0 = bump(&base0, e0);
        let th1 = bump(&base1, e1);
        let p0 = connecting_path(&o0, &th0)?;
        let p1 = connecting_path(&o1, &th1)?;
        let mu = match maslov_pair_raw(&p0, &p1, ExecMode::Auto) {
            Ok(mu) => mu,
            Err(e @ (Error::DegenerateCrossing(_) | Error::NonIntegralIndex(_))) => {
                last_err = e;
                continue;
            }
            Err(e) => return Err(e),
        };
        // canonical endpoint phases are Σθ_j / 2π exactly
        let canon = |th: &[f64]| th.iter().sum::<f64>() / TWO_PI;
        let deck_diff = |l: &MaslovLift, canon_theta: f64| -> Result<i64> {
            let d = l.theta() - canon_theta;
            let r = d.round();
            if (d - r).abs() > 1e-5 {
                return Err(Error::InconsistentStart);
            }
            Ok(r as i64)
        };
        let d0 = deck_diff(l0, canon(&th0))?;
        let d1 = deck_diff(l1, canon(&th1))?;
        let twice = n as i64 - mu.twice();
        if twice % 2 != 0 {
            return Err(Error::NonIntegralIndex(format!(
                "n/2 − μ = {}/2 with n = {n}, μ = {mu}",
                twice
            )));
        }
        return Ok(ZModN::new(l0.modulus, twice / 2 - d0 + d1));
    }
    Err(last_err)
}

// ---------------------------------------------------------------------------
// graded unitaries
// ---------------------------------------------------------------------------

/// A unitary symplectic matrix with a chosen phase t, det(U_C)² = e^{2πit}.
#[derive(Debug, Clone)]
pub struct GradedUnitary {
    u: SymplecticMatrix,
    modulus: Modulus,
    deck: i64,
    frac: f64,
}

impl GradedUnitary {
    pub fn new(u: SymplecticMatrix, modulus: Modulus, t: f64) -> Result<Self> {
        let zc = u.unitary_complex_form()?;
        let det = nalgebra::linalg::LU::new(zc).determinant();
        let frac = frac_of_angle(det * det);
        let diff = t - frac;
        let deck = diff.round();
        if (diff - deck).abs() > 100.0 * tol::phase_tol() {
            return Err(Error::InconsistentStart);
        }
        Ok(GradedUnitary {
            u,
            modulus,
            deck: reduce_deck(deck as i64, modulus),
            frac,
        })
    }

    /// The central element (id, k): identity with a pure deck phase.
    pub fn identity_shift(n: usize, modulus: Modulus, k: i64) -> Self {
        GradedUnitary {
            u: SymplecticMatrix::identity(n),
            modulus,
            deck: reduce_deck(k, modulus),
            frac: 0.0,
        }
    }

    pub fn unitary(&self) -> &SymplecticMatrix {
        &self.u
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn deck(&self) -> i64 {
        self.deck
    }

    pub fn t(&self) -> f64 {
        self.deck as f64 + self.frac
    }

    /// Compose with the central deck shift (id, k).
    pub fn act_deck(&self, k: i64) -> GradedUnitary {
        GradedUnitary {
            u: self.u.clone(),
            modulus: self.modulus,
            deck: reduce_deck(self.deck + k, self.modulus),
            frac: self.frac,
        }
    }

    pub fn compose(&self, other: &GradedUnitary) -> Result<GradedUnitary> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(
                self.modulus.to_string(),
                other.modulus.to_string(),
            ));
        }
        let u = SymplecticMatrix::new(self.u.matrix() * other.u.matrix())?;
        // phases add; recompute the fraction from the product determinant and
        // put the residue into the deck part to avoid float drift
        let t = self.t() + other.t();
        let zc = u.unitary_complex_form()?;
        let det = nalgebra::linalg::LU::new(zc).determinant();
        let frac = frac_of_angle(det * det);
        let deck = (t - frac).round() as i64;
        Ok(GradedUnitary {
            u,
            modulus: self.modulus,
            deck: reduce_deck(deck, self.modulus),
            frac,
        })
    }

    pub fn inverse(&self) -> Result<GradedUnitary> {
        let u = self.u.try_inverse()?;
        let t = -self.t();
        let zc = u.unitary_complex_form()?;
        let det = nalgebra::linalg::LU::new(zc).determinant();
        let frac = frac_of_angle(det * det);
        let deck = (t - frac).round() as i64;
        Ok(GradedUnitary {
            u,
            modulus: self.modulus,
            deck: reduce_deck(deck, self.modulus),
            frac,
        })
    }

    /// Action on a lift: frame ↦ U·frame, θ ↦ θ + t (det² is multiplicative
    /// under unitaries).
    pub fn act(&self, lift: &MaslovLift) -> Result<MaslovLift> {
        if self.modulus != lift.modulus {
            return Err(Error::ModulusMismatch(
                self.modulus.to_string(),
                lift.modulus.to_string(),
            ));
        }
        let frame = LagrangianFrame::new(self.u.matrix() * lift.frame.columns())?;
        MaslovLift::new(frame, lift.modulus, lift.theta() + self.t())
    }
}

pub fn compose_graded(g1: &GradedUnitary, g2: &GradedUnitary) -> Result<GradedUnitary> {
    g1.compose(g2)
}

pub fn act_graded(g: &GradedUnitary, lift: &MaslovLift) -> Result<MaslovLift> {
    g.act(lift)
}

// ---------------------------------------------------------------------------
// absolute Conley–Zehnder index
// ---------------------------------------------------------------------------

/// ζ̃(Φ, Φ̃) = n − ζ(φ) − k ∈ Z/N, where φ is a connecting symplectic path
/// from the identity to Φ and k the deck datum of the chosen lift.
pub fn abs_cz(phi: &SymplecticMatrix, path: &SymplecticPath, k: &ZModN) -> Result<ZModN> {
    let n = phi.n();
    let id = DMatrix::identity(2 * n, 2 * n);
    let det = (id - phi.matrix()).determinant();
    if det.abs() < 1e-9 {
        return Err(Error::DegenerateFixedPoint);
    }
    let (_, b) = path.interval();
    let end = path.eval(b)?;
    if (end.matrix() - phi.matrix()).norm() > 1e-7 {
        return Err(Error::MalformedData(
            "connecting path does not end at the given matrix".into(),
        ));
    }
    let zeta = conley_zehnder(path)?;
    let zeta = zeta.as_int().ok_or_else(|| {
        Error::NonIntegralIndex(format!("ζ = {zeta} for a nondegenerate endpoint"))
    })?;
    ZModN::new(k.modulus(), n as i64 - zeta).try_sub(k)
}

// ---------------------------------------------------------------------------
// handle curves
// ---------------------------------------------------------------------------

/// Sampled embedding γ: R → C with γ(t) = t for t ≤ −1/2 and γ(t) = it for
/// t ≥ 1/2, avoiding −γ(R); models a Lagrangian handle in C^n.
#[derive(Debug, Clone)]
pub struct HandleCurve {
    pub n: usize,
    samples: Vec<(f64, Complex<f64>)>,
}

impl HandleCurve {
    pub fn new(n: usize, samples: Vec<(f64, Complex<f64>)>) -> Result<Self> {
        if n == 0 || samples.len() < 16 {
            return Err(Error::MalformedData("need n ≥ 1 and ≥ 16 samples".into()));
        }
        for w in samples.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::MalformedData("sample times must increase".into()));
            }
        }
        for (t, g) in &samples {
            if *t <= -0.5 && (g - Complex::new(*t, 0.0)).norm() > 1e-9 {
                return Err(Error::MalformedData(format!(
                    "clamping violated at t = {t}: expected γ(t) = t"
                )));
            }
            if *t >= 0.5 && (g - Complex::new(0.0, *t)).norm() > 1e-9 {
                return Err(Error::MalformedData(format!(
                    "clamping violated at t = {t}: expected γ(t) = it"
                )));
            }
        }
        // γ(R) ∩ −γ(R) = ∅ on the samples
        for (_, g) in &samples {
            for (_, h) in &samples {
                if (g + h).norm() < 1e-6 {
                    return Err(Error::MalformedData(
                        "curve meets its own negative".into(),
                    ));
                }
            }
        }
        Ok(HandleCurve { n, samples })
    }

    /// Default curve: polar form ρ(t)e^{iθ(t)} with ρ = √(t² + bump) and a
    /// smoothstep angle π → π/2 over the transition band, 2048 samples.
    pub fn standard(n: usize) -> Self {
        let m = 2048;
        let samples = (0..=m)
            .map(|i| {
                let t = -1.0 + 2.0 * i as f64 / m as f64;
                (t, Self::standard_gamma(t))
            })
            .collect();
        HandleCurve { n, samples }
    }

    fn standard_gamma(t: f64) -> Complex<f64> {
        if t <= -0.5 {
            return Complex::new(t, 0.0);
        }
        if t >= 0.5 {
            return Complex::new(0.0, t);
        }
        let bump = 0.09 * (-1.0 / (1.0 - 4.0 * t * t)).exp();
        let rho = (t * t + bump).sqrt();
        let u = t + 0.5; // smoothstep over [0, 1]
        let w = u * u * u * (6.0 * u * u - 15.0 * u + 10.0);
        let theta = std::f64::consts::PI * (1.0 - 0.5 * w);
        Complex::from_polar(rho, theta)
    }

    pub fn samples(&self) -> &[(f64, Complex<f64>)] {
        &self.samples
    }
}

#[derive(Debug, Clone)]
pub struct HandleGrading {
    /// the traced continuous lift α(t), zero on the incoming clamp
    pub table: Vec<(f64, f64)>,
    /// snapped endpoint value (equals 1 − n/2 for any valid curve)
    pub endpoint: HalfInt,
}

/// Continuous lift α with e^{2πiα(t)} = phase of γ′(t)²·γ(t)^{2n−2},
/// normalized by α(t) = 0 for t ≤ −1/2.
pub fn handle_grading(curve: &HandleCurve) -> Result<HandleGrading> {
    let s = &curve.samples;
    let m = s.len();
    let pow = 2 * curve.n as i32 - 2;
    let phase_at = |i: usize| -> f64 {
        // central difference for γ′ (one-sided at the ends)
        let (lo, hi) = if i == 0 {
            (0, 1)
        } else if i == m - 1 {
            (m - 2, m - 1)
        } else {
            (i - 1, i + 1)
        };
        let dg = (s[hi].1 - s[lo].1) / (s[hi].0 - s[lo].0);
        let v = dg * dg * s[i].1.powi(pow);
        v.im.atan2(v.re)
    };
    let mut table = Vec::with_capacity(m);
    let mut alpha = 0.0;
    let mut prev = phase_at(0);
    if prev.abs() > 1e-6 {
        return Err(Error::MalformedData(
            "phase is not normalized to 0 on the incoming clamp".into(),
        ));
    }
    table.push((s[0].0, 0.0));
    for i in 1..m {
        let p = phase_at(i);
        let mut d = (p - prev) % TWO_PI;
        if d > std::f64::consts::PI {
            d -= TWO_PI;
        } else if d <= -std::f64::consts::PI {
            d += TWO_PI;
        }
        if d.abs() > 2.0 {
            return Err(Error::PathTooCoarse(
                "handle-curve sampling too coarse for phase tracking".into(),
            ));
        }
        alpha += d / TWO_PI;
        prev = p;
        table.push((s[i].0, alpha));
    }
    let twice = (2.0 * alpha).round();
    if (2.0 * alpha - twice).abs() > 1e-3 {
        return Err(Error::MalformedData(format!(
            "endpoint grading {alpha} is not a half-integer"
        )));
    }
    Ok(HandleGrading {
        table,
        endpoint: HalfInt::new(twice as i64),
    })
}

// ---------------------------------------------------------------------------
// local Dehn-twist winding
// ---------------------------------------------------------------------------

/// Deck shift k of the local model of a generalized Dehn twist on C^{n+1},
/// evaluated as minus the det²-winding of the loop
/// λ(t) = e^{−2πit}·R^n ⊕ e^{2πit}·R. Equals 2n − 2.
pub fn dehn_local_shift(n: usize) -> Result<i64> {
    let dim = n + 1;
    let diag = nalgebra::DVector::from_fn(dim, |i, _| {
        if i < n {
            Complex::new(0.0, -TWO_PI)
        } else {
            Complex::new(0.0, TWO_PI)
        }
    });
    let gen = real_form(&DMatrix::from_diagonal(&diag));
    let path = LagrangianPath::exponential(
        LagrangianFrame::standard_rn(dim),
        0.0,
        vec![ExpSegment {
            generator: gen,
            duration: 1.0,
        }],
    )?;
    let w = winding_det_sq(&path)?;
    let k = w.round();
    if (w - k).abs() > 1e-3 {
        return Err(Error::NonIntegralWinding(w));
    }
    Ok(-(k as i64))
}

// ---------------------------------------------------------------------------
// oriented intersection sign (N = 2)
// ---------------------------------------------------------------------------

/// For N = 2 lifts (the oriented Grassmannian), the sign (−1)^{μ̃}.
pub fn oriented_sign(l0: &MaslovLift, l1: &MaslovLift) -> Result<i64> {
    if l0.modulus() != Modulus::Finite(2) || l1.modulus() != Modulus::Finite(2) {
        return Err(Error::ModulusMismatch(
            format!("{} / {}", l0.modulus(), l1.modulus()),
            "2".into(),
        ));
    }
    let mu = abs_maslov(l0, l1)?;
    Ok(if mu.value() % 2 == 0 { 1 } else { -1 })
}
