//! Shift numbers σ_K of boundary circle actions: the closed form for weighted
//! homogeneous singularities, conjugate-point counts for periodic geodesic
//! flows on rank-one symmetric spaces, and the generic det²-winding formula
//! for explicit loops.

use nalgebra::{Complex, DMatrix, DVector};

use crate::index::{winding_det_sq, ExpSegment, LagrangianPath};
use crate::symcore::{real_form, LagrangianFrame};
use crate::{Error, Result};

const TWO_PI: f64 = std::f64::consts::TAU;

// ---------------------------------------------------------------------------
// weighted homogeneous polynomials
// ---------------------------------------------------------------------------

/// A weighted homogeneous polynomial in n+1 variables, recorded as exponent
/// vectors (coefficients are irrelevant for the shift number) with weights
/// β_0..β_n and total weight β: every monomial a satisfies Σ β_i·a_i = β.
///
/// Genericity of the coefficients (an isolated critical point) is a caller
/// obligation and is not verified here.
#[derive(Debug, Clone)]
pub struct WeightedPoly {
    monomials: Vec<Vec<u64>>,
    betas: Vec<u64>,
    beta: u64,
}

impl WeightedPoly {
    pub fn new(monomials: Vec<Vec<u64>>, betas: Vec<u64>, beta: u64) -> Result<Self> {
        if betas.is_empty() || beta == 0 || betas.iter().any(|b| *b == 0) {
            return Err(Error::MalformedData(
                "weights must be positive and nonempty".into(),
            ));
        }
        if monomials.is_empty() {
            return Err(Error::MalformedData("no monomials".into()));
        }
        for m in &monomials {
            if m.len() != betas.len() {
                return Err(Error::DimensionMismatch(format!(
                    "monomial arity {} vs {} weights",
                    m.len(),
                    betas.len()
                )));
            }
            let total: u64 = m.iter().zip(betas.iter()).map(|(a, b)| a * b).sum();
            if total != beta {
                return Err(Error::NotQuasiHomogeneous(m.clone()));
            }
        }
        Ok(WeightedPoly {
            monomials,
            betas,
            beta,
        })
    }

    /// Number of variables minus one (the fibre dimension of the singularity).
    pub fn n(&self) -> usize {
        self.betas.len() - 1
    }

    pub fn betas(&self) -> &[u64] {
        &self.betas
    }

    pub fn beta(&self) -> u64 {
        self.beta
    }

    pub fn monomials(&self) -> &[Vec<u64>] {
        &self.monomials
    }

    /// Sum of the weights w_i = β_i/β as an exact rational (num, den).
    pub fn weight_sum(&self) -> (u64, u64) {
        (self.betas.iter().sum(), self.beta)
    }
}

/// Shift number of the symplectic monodromy: σ_K = 2(β − Σ_j β_j).
pub fn sigma_weighted(p: &WeightedPoly) -> i64 {
    2 * (p.beta as i64 - p.betas.iter().sum::<u64>() as i64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MonodromyVerdict {
    InfiniteOrder,
    Inconclusive,
}

/// Whether the monodromy has infinite order in the graded symplectic mapping
/// class group: decided when Σ w_i ≠ 1 (n ≥ 2, or n = 1 with the flag set).
/// Never reports "finite": the Σ w_i = 1 case is left open.
pub fn monodromy_verdict(p: &WeightedPoly, allow_n1: bool) -> MonodromyVerdict {
    let (num, den) = p.weight_sum();
    let n = p.n();
    if num != den && (n >= 2 || (n == 1 && allow_n1)) {
        MonodromyVerdict::InfiniteOrder
    } else {
        MonodromyVerdict::Inconclusive
    }
}

// ---------------------------------------------------------------------------
// periodic geodesic flows
// ---------------------------------------------------------------------------

/// Conjugate-point data of a unit-speed closed geodesic on an n-manifold:
/// times t ∈ (0, 1] with multiplicities, the full period t = 1 carrying
/// multiplicity n − 1.
#[derive(Debug, Clone)]
pub struct ConjugatePointData {
    dim: usize,
    points: Vec<(f64, usize)>,
}

impl ConjugatePointData {
    pub fn new(dim: usize, points: Vec<(f64, usize)>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::MalformedData("need dimension ≥ 2".into()));
        }
        let mut saw_period = false;
        for (t, m) in &points {
            if !(*t > 0.0 && *t <= 1.0) || *m == 0 {
                return Err(Error::MalformedData(format!(
                    "conjugate point (t = {t}, m = {m}) out of range"
                )));
            }
            if (*t - 1.0).abs() < 1e-12 {
                saw_period = true;
                if *m != dim - 1 {
                    return Err(Error::MalformedData(format!(
                        "full-period multiplicity must be {} (= dim − 1), got {m}",
                        dim - 1
                    )));
                }
            }
        }
        if !saw_period {
            return Err(Error::MalformedData(
                "missing the full-period conjugate point t = 1".into(),
            ));
        }
        Ok(ConjugatePointData { dim, points })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[(f64, usize)] {
        &self.points
    }
}

/// σ_R = −Σ_t m_c(t) over one period; always negative.
pub fn sigma_geodesic(d: &ConjugatePointData) -> i64 {
    -(d.points.iter().map(|(_, m)| *m as i64).sum::<i64>())
}

/// One row of the compact rank-one symmetric space table: closed form for
/// σ_R and a conjugate-point witness reproducing it.
#[derive(Debug, Clone)]
pub struct TableRow {
    pub name: String,
    pub dim: usize,
    pub sigma: i64,
    pub witness: ConjugatePointData,
}

/// The table of shift numbers for the compact rank-one symmetric spaces with
/// parameter m, with reverse-engineered conjugate-point witnesses (the
/// half-period entry plus the forced full-period multiplicity dim − 1).
pub fn symmetric_space_table(m: usize) -> Vec<TableRow> {
    let mut rows = Vec::new();
    let mut push = |name: String, dim: usize, sigma: i64, pts: Vec<(f64, usize)>| {
        if let Ok(witness) = ConjugatePointData::new(dim, pts) {
            debug_assert_eq!(sigma_geodesic(&witness), sigma);
            rows.push(TableRow {
                name,
                dim,
                sigma,
                witness,
            });
        }
    };
    if m >= 2 {
        push(
            format!("S^{m}"),
            m,
            2 - 2 * m as i64,
            vec![(0.5, m - 1), (1.0, m - 1)],
        );
        push(format!("RP^{m}"), m, 1 - m as i64, vec![(1.0, m - 1)]);
    }
    if m >= 1 {
        push(
            format!("CP^{m}"),
            2 * m,
            -2 * m as i64,
            vec![(0.5, 1), (1.0, 2 * m - 1)],
        );
        push(
            format!("HP^{m}"),
            4 * m - 2,
            2 - 4 * m as i64,
            vec![(0.5, 1), (1.0, 4 * m - 3)],
        );
    }
    if m == 2 {
        push("F4/Spin9".into(), 16, -22, vec![(0.5, 7), (1.0, 15)]);
    }
    rows
}

// ---------------------------------------------------------------------------
// loop winding
// ---------------------------------------------------------------------------

/// σ_K of an explicit boundary loop of Lagrangian subspaces:
/// σ = −(winding of det²). The path must close up and the winding must be an
/// integer.
pub fn sigma_from_loop(lambda: &LagrangianPath) -> Result<i64> {
    let (a, b) = lambda.interval();
    let start = lambda.eval(a)?;
    let end = lambda.eval(b)?;
    if start.principal_angle_gap(&end) > 1e-6 {
        return Err(Error::NotALoop);
    }
    let w = winding_det_sq(lambda)?;
    let r = w.round();
    if (w - r).abs() > 1e-3 {
        return Err(Error::NonIntegralWinding(w));
    }
    Ok(-(r as i64))
}

/// The diagonal circle-action loop λ(t) = diag(e^{2πi m_j t})·R^n, t ∈ [0,1].
pub fn diagonal_action_loop(mults: &[i64]) -> Result<LagrangianPath> {
    if mults.is_empty() {
        return Err(Error::MalformedData("empty multiplicity vector".into()));
    }
    let n = mults.len();
    let diag = DVector::from_iterator(
        n,
        mults.iter().map(|m| Complex::new(0.0, TWO_PI * *m as f64)),
    );
    let gen = real_form(&DMatrix::from_diagonal(&diag));
    LagrangianPath::exponential(
        LagrangianFrame::standard_rn(n),
        0.0,
        vec![ExpSegment {
            generator: gen,
            duration: 1.0,
        }],
    )
}

/// The boundary-loop model of a weighted homogeneous monodromy: the fibrewise
/// tangent directions rotate with multiplicities β_1..β_n and the transverse
/// direction with β_0 − β, so that σ matches sigma_weighted.
pub fn weighted_boundary_loop(p: &WeightedPoly) -> Result<LagrangianPath> {
    let betas = p.betas();
    let mut mults: Vec<i64> = betas[1..].iter().map(|b| *b as i64).collect();
    mults.push(betas[0] as i64 - p.beta() as i64);
    diagonal_action_loop(&mults)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e7() -> WeightedPoly {
        // x₀² + x₁³ + x₁x₂³ with weights (9, 6, 4), total 18
        WeightedPoly::new(
            vec![vec![2, 0, 0], vec![0, 3, 0], vec![0, 1, 3]],
            vec![9, 6, 4],
            18,
        )
        .unwrap()
    }

    #[test]
    fn sigma_weighted_examples() {
        assert_eq!(sigma_weighted(&e7()), -2);
        // A_k Milnor fibre x₀^{k+1} + x₁² + … + x_n², β = 2(k+1)
        for (k, n) in [(1usize, 2usize), (3, 3), (5, 2)] {
            let b0 = 2u64;
            let bi = (k + 1) as u64;
            let beta = 2 * (k + 1) as u64;
            let mut betas = vec![b0];
            betas.extend(std::iter::repeat(bi).take(n));
            let mut mons = vec![{
                let mut m = vec![(k + 1) as u64];
                m.extend(std::iter::repeat(0).take(n));
                m
            }];
            for i in 1..=n {
                let mut m = vec![0u64; n + 1];
                m[i] = 2;
                mons.push(m);
            }
            let p = WeightedPoly::new(mons, betas, beta).unwrap();
            let expected = 2 * (2 * (k as i64 + 1) - 2 - n as i64 * (k as i64 + 1));
            assert_eq!(sigma_weighted(&p), expected, "k = {k}, n = {n}");
        }
    }

    #[test]
    fn quasi_homogeneity_is_enforced() {
        let err = WeightedPoly::new(vec![vec![1, 1]], vec![2, 3], 4);
        assert!(matches!(err, Err(Error::NotQuasiHomogeneous(_))));
    }

    #[test]
    fn verdicts() {
        assert_eq!(
            monodromy_verdict(&e7(), false),
            MonodromyVerdict::InfiniteOrder
        );
        // quartic fourfold: weights 1/4 each, Σw = 1
        let quartic = WeightedPoly::new(
            (0..4)
                .map(|i| {
                    let mut m = vec![0u64; 4];
                    m[i] = 4;
                    m
                })
                .collect(),
            vec![1, 1, 1, 1],
            4,
        )
        .unwrap();
        assert_eq!(
            monodromy_verdict(&quartic, false),
            MonodromyVerdict::Inconclusive
        );
        // quadric in n ≥ 2: Σw = (n+1)/2 ≠ 1
        let quadric = WeightedPoly::new(
            (0..3)
                .map(|i| {
                    let mut m = vec![0u64; 3];
                    m[i] = 2;
                    m
                })
                .collect(),
            vec![1, 1, 1],
            2,
        )
        .unwrap();
        assert_eq!(
            monodromy_verdict(&quadric, false),
            MonodromyVerdict::InfiniteOrder
        );
        // verdict is invariant under weight rescaling
        let scaled = WeightedPoly::new(
            vec![vec![2, 0, 0], vec![0, 3, 0], vec![0, 1, 3]],
            vec![27, 18, 12],
            54,
        )
        .unwrap();
        assert_eq!(
            monodromy_verdict(&scaled, false),
            monodromy_verdict(&e7(), false)
        );
    }

    #[test]
    fn geodesic_table_values() {
        for m in 1..=8usize {
            for row in symmetric_space_table(m) {
                assert_eq!(
                    sigma_geodesic(&row.witness),
                    row.sigma,
                    "{} (m = {m})",
                    row.name
                );
                assert!(row.sigma < 0, "{}", row.name);
            }
        }
        let names: Vec<String> = symmetric_space_table(2)
            .iter()
            .map(|r| r.name.clone())
            .collect();
        assert!(names.contains(&"F4/Spin9".to_string()));
        // golden values
        let t3 = symmetric_space_table(3);
        let get = |n: &str| t3.iter().find(|r| r.name == n).unwrap().sigma;
        assert_eq!(get("S^3"), -4);
        assert_eq!(get("RP^3"), -2);
        assert_eq!(get("CP^3"), -6);
        assert_eq!(get("HP^3"), -10);
    }

    #[test]
    fn geodesic_data_validation() {
        assert!(ConjugatePointData::new(3, vec![(0.5, 1)]).is_err());
        assert!(ConjugatePointData::new(3, vec![(1.0, 1)]).is_err());
        ConjugatePointData::new(3, vec![(0.5, 2), (1.0, 2)]).unwrap();
    }

    #[test]
    fn loop_winding_formulas() {
        // trivial loop
        let c = LagrangianPath::constant(LagrangianFrame::standard_rn(2), 0.0, 1.0).unwrap();
        assert_eq!(sigma_from_loop(&c).unwrap(), 0);
        // diagonal loops: σ = −2Σ m_j
        for mults in [vec![1i64], vec![2, -1], vec![1, 1, -3]] {
            let l = diagonal_action_loop(&mults).unwrap();
            let s: i64 = mults.iter().sum();
            assert_eq!(sigma_from_loop(&l).unwrap(), -2 * s, "{mults:?}");
        }
        // non-loop is rejected
        let open = crate::index::LagrangianPath::exponential(
            LagrangianFrame::standard_rn(1),
            0.0,
            vec![ExpSegment {
                generator: crate::symcore::j0_matrix(1),
                duration: 0.3,
            }],
        )
        .unwrap();
        assert!(matches!(sigma_from_loop(&open), Err(Error::NotALoop)));
    }

    #[test]
    fn boundary_loop_matches_sigma_weighted() {
        let p = e7();
        let l = weighted_boundary_loop(&p).unwrap();
        assert_eq!(sigma_from_loop(&l).unwrap(), sigma_weighted(&p));
    }
}

#[cfg(test)]
mod prop_tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn sigma_weighted_scales_with_the_weights(
            exps in proptest::collection::vec(2u64..6, 2..4),
            c in 1u64..5,
        ) {
            let beta: u64 = exps.iter().product();
            let betas: Vec<u64> = exps.iter().map(|e| beta / e).collect();
            let monos: Vec<Vec<u64>> = (0..exps.len())
                .map(|j| {
                    let mut m = vec![0u64; exps.len()];
                    m[j] = exps[j];
                    m
                })
                .collect();
            let p = WeightedPoly::new(monos.clone(), betas.clone(), beta).unwrap();
            let scaled = WeightedPoly::new(
                monos,
                betas.iter().map(|b| b * c).collect(),
                beta * c,
            )
            .unwrap();
            prop_assert_eq!(sigma_weighted(&scaled), c as i64 * sigma_weighted(&p));
            prop_assert_eq!(monodromy_verdict(&scaled, false), monodromy_verdict(&p, false));
        }

        #[test]
        fn sigma_geodesic_is_always_negative(
            dim in 2usize..8,
            extra in proptest::collection::vec((0.1f64..0.9, 1usize..4), 0..4),
        ) {
            let mut pts = vec![(1.0, dim - 1)];
            pts.extend(extra);
            let d = ConjugatePointData::new(dim, pts).unwrap();
            prop_assert!(sigma_geodesic(&d) < 0);
        }
    }
}
