//! `maslov`: JSON-in/JSON-out front end for the maslovkit library.
//!
//! Exit codes: 0 success, 1 schema/usage error, 2 domain error (the library
//! error name and detail are serialized as {"error": name, "detail": …}).
//! Complex inputs (paths, frames, configurations) are read as JSON on stdin;
//! scalar inputs are flags. Output is deterministic: same input bytes produce
//! the same output bytes.

use std::io::Read;

use clap::{Parser, Subcommand};
use nalgebra::DMatrix;
use serde::Deserialize;
use serde_json::{json, Map, Value};

use maslovkit::covering::{
    abs_cz, abs_maslov, dehn_local_shift, handle_grading, lift_path, HandleCurve, MaslovLift,
};
use maslovkit::gradedcalc::{
    cpn_check, knotted_signature, knotted_verdict, picard_lefschetz, pl_order, surface_rules,
    surface_twist, surface_ungradable_search, twist_word_apply, CpnVerdict, CurveData,
    DimVector, GradedConfig, H1Mod, KnotFamily, KnotVerdict, PlOrder, TwistGen,
};
use maslovkit::index::{
    conley_zehnder, crossings, maslov_pair, maslov_pair_checked, winding_det_sq, ExpSegment,
    LagrangianPath, SymplecticPath,
};
use maslovkit::monodromy::{
    diagonal_action_loop, monodromy_verdict, sigma_from_loop, sigma_geodesic, sigma_weighted,
    symmetric_space_table, ConjugatePointData, MonodromyVerdict, WeightedPoly,
};
use maslovkit::symcore::{HalfInt, LagrangianFrame, Modulus, SymplecticMatrix, ZModN};

// ---------------------------------------------------------------------------
// CLI surface
// ---------------------------------------------------------------------------

#[derive(Parser)]
#[command(name = "maslov", about = "index theory for linear symplectic geometry")]
struct Cli {
    /// Override frame and phase tolerances as "FRAME,PHASE"
    #[arg(long, global = true)]
    tol: Option<String>,
    /// Run the independent eigenvalue-winding cross-check where available
    #[arg(long, global = true)]
    self_check: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Maslov and Conley–Zehnder indices of paths
    Maslov {
        #[command(subcommand)]
        sub: MaslovCmd,
    },
    /// Maslov-covering lifts and absolute indices
    Cover {
        #[command(subcommand)]
        sub: CoverCmd,
    },
    /// Graded Dehn-twist calculus
    Calc {
        #[command(subcommand)]
        sub: CalcCmd,
    },
    /// Monodromy shift numbers
    Mono {
        #[command(subcommand)]
        sub: MonoCmd,
    },
}

#[derive(Subcommand)]
enum MaslovCmd {
    /// μ(λ0, λ1) of a pair of Lagrangian paths (stdin: {"lambda0", "lambda1"})
    Pair,
    /// ζ(φ) of a symplectic path (stdin: {"phi"})
    Cz,
    /// winding of det² along a path (stdin: {"lambda"})
    Winding,
}

#[derive(Subcommand)]
enum CoverCmd {
    /// lift det² along a path (stdin: {"lambda", "theta_start", "mod"})
    Lift,
    /// absolute index μ̃ of two lifts (stdin: {"lift0", "lift1"})
    Abs,
    /// absolute index ζ̃ (stdin: {"phi", "path", "k"})
    AbsCz,
    /// grading of the standard Lagrangian handle curve
    Handle {
        #[arg(long)]
        n: usize,
    },
    /// local Dehn-twist deck shift k = 2n−2
    DehnShift {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Subcommand)]
enum CalcCmd {
    /// apply a twist word to a sphere (stdin: config + word + target)
    Twist,
    /// knotted-sphere degree signatures
    Signature {
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: i64,
    },
    /// knotted-sphere isotopy verdict
    Verdict {
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: i64,
    },
    /// Picard–Lefschetz lattice action (stdin: {"n","count","c","l"})
    Pl,
    /// CP^n embedding obstruction (stdin: {"n","profile","h1"})
    Cpn,
    /// surface rotation-number calculus (stdin: curve data + op)
    Surface,
}

#[derive(Subcommand)]
enum MonoCmd {
    /// σ_K of a weighted homogeneous polynomial (stdin: poly)
    Weighted,
    /// infinite-order verdict for the monodromy (stdin: poly)
    Verdict {
        #[arg(long)]
        allow_n1: bool,
    },
    /// σ_R from conjugate-point data (stdin: {"dim","points"})
    Geodesic,
    /// the symmetric-space table at parameter m
    Table {
        #[arg(long)]
        m: usize,
    },
    /// σ_K of an explicit loop (stdin: {"lambda"} or {"mults"})
    Loop,
}

// ---------------------------------------------------------------------------
// JSON input schemas
// ---------------------------------------------------------------------------

enum CliError {
    Schema(String),
    Domain(maslovkit::Error),
}

impl From<maslovkit::Error> for CliError {
    fn from(e: maslovkit::Error) -> Self {
        CliError::Domain(e)
    }
}

type CliResult = Result<Value, CliError>;

fn schema<T: std::fmt::Display>(e: T) -> CliError {
    CliError::Schema(e.to_string())
}

fn read_stdin<T: serde::de::DeserializeOwned>() -> Result<T, CliError> {
    let mut buf = String::new();
    std::io::stdin()
        .read_to_string(&mut buf)
        .map_err(schema)?;
    serde_json::from_str(&buf).map_err(schema)
}

fn matrix(rows: &[Vec<f64>]) -> Result<DMatrix<f64>, CliError> {
    let nr = rows.len();
    let nc = rows.first().map_or(0, |r| r.len());
    if nr == 0 || nc == 0 || rows.iter().any(|r| r.len() != nc) {
        return Err(CliError::Schema("matrix rows must be nonempty and rectangular".into()));
    }
    Ok(DMatrix::from_fn(nr, nc, |i, j| rows[i][j]))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SegSpec {
    generator: Vec<Vec<f64>>,
    duration: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeSpec {
    t: f64,
    frame: Vec<Vec<f64>>,
}

#[derive(Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum PathSpec {
    Exponential {
        start: Vec<Vec<f64>>,
        #[serde(default)]
        t0: f64,
        segments: Vec<SegSpec>,
    },
    Samples {
        nodes: Vec<NodeSpec>,
    },
}

impl PathSpec {
    fn lagrangian(&self) -> Result<LagrangianPath, CliError> {
        match self {
            PathSpec::Exponential {
                start,
                t0,
                segments,
            } => {
                let frame = LagrangianFrame::new(matrix(start)?)?;
                let segs = segments
                    .iter()
                    .map(|s| {
                        Ok(ExpSegment {
                            generator: matrix(&s.generator)?,
                            duration: s.duration,
                        })
                    })
                    .collect::<Result<Vec<_>, CliError>>()?;
                Ok(LagrangianPath::exponential(frame, *t0, segs)?)
            }
            PathSpec::Samples { nodes } => {
                let nodes = nodes
                    .iter()
                    .map(|n| Ok((n.t, LagrangianFrame::new(matrix(&n.frame)?)?)))
                    .collect::<Result<Vec<_>, CliError>>()?;
                Ok(LagrangianPath::samples(nodes)?)
            }
        }
    }

    fn symplectic(&self) -> Result<SymplecticPath, CliError> {
        match self {
            PathSpec::Exponential {
                start,
                t0,
                segments,
            } => {
                let m = SymplecticMatrix::new(matrix(start)?)?;
                let segs = segments
                    .iter()
                    .map(|s| {
                        Ok(ExpSegment {
                            generator: matrix(&s.generator)?,
                            duration: s.duration,
                        })
                    })
                    .collect::<Result<Vec<_>, CliError>>()?;
                Ok(SymplecticPath::exponential(m, *t0, segs)?)
            }
            PathSpec::Samples { nodes } => {
                let nodes = nodes
                    .iter()
                    .map(|n| Ok((n.t, SymplecticMatrix::new(matrix(&n.frame)?)?)))
                    .collect::<Result<Vec<_>, CliError>>()?;
                Ok(SymplecticPath::samples(nodes)?)
            }
        }
    }
}

fn parse_modulus(v: &Value) -> Result<Modulus, CliError> {
    match v {
        Value::String(s) if s == "inf" => Ok(Modulus::Infinite),
        Value::Number(n) => n
            .as_u64()
            .filter(|m| *m > 0)
            .map(Modulus::Finite)
            .ok_or_else(|| CliError::Schema("modulus must be a positive integer or \"inf\"".into())),
        _ => Err(CliError::Schema(
            "modulus must be a positive integer or \"inf\"".into(),
        )),
    }
}

fn parse_zmod(v: &Value) -> Result<ZModN, CliError> {
    let obj = v
        .as_object()
        .ok_or_else(|| CliError::Schema("expected {\"mod\": …, \"val\": …}".into()))?;
    let m = parse_modulus(
        obj.get("mod")
            .ok_or_else(|| CliError::Schema("missing \"mod\"".into()))?,
    )?;
    let val = obj
        .get("val")
        .and_then(Value::as_i64)
        .ok_or_else(|| CliError::Schema("missing integer \"val\"".into()))?;
    Ok(ZModN::new(m, val))
}

fn modulus_json(m: Modulus) -> Value {
    match m {
        Modulus::Finite(n) => json!(n),
        Modulus::Infinite => json!("inf"),
    }
}

fn zmod_json(z: &ZModN) -> Value {
    json!({"mod": modulus_json(z.modulus()), "val": z.value()})
}

fn halfint_json(h: HalfInt) -> Value {
    match h.as_int() {
        Some(v) => json!(v),
        None => json!(format!("{}/2", h.twice())),
    }
}

fn dimvector_json(d: &DimVector) -> Value {
    let mut m = Map::new();
    for (deg, rank) in d.entries() {
        m.insert(deg.to_string(), json!(rank));
    }
    Value::Object(m)
}

fn parse_family(s: &str) -> Result<KnotFamily, CliError> {
    match s {
        "even" => Ok(KnotFamily::Even),
        "odd" => Ok(KnotFamily::Odd),
        _ => Err(CliError::Schema(format!(
            "family must be \"even\" or \"odd\", got {s:?}"
        ))),
    }
}

// ---------------------------------------------------------------------------
// command handlers
// ---------------------------------------------------------------------------

fn cmd_maslov_pair(self_check: bool) -> CliResult {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct In {
        lambda0: PathSpec,
        lambda1: PathSpec,
    }
    let input: In = read_stdin()?;
    let l0 = input.lambda0.lagrangian()?;
    let l1 = input.lambda1.lagrangian()?;
    let mu = if self_check {
        maslov_pair_checked(&l0, &l1)?
    } else {
        maslov_pair(&l0, &l1)?
    };
    let cs = crossings(&l0, &l1, 1e-10)
        .map(|cs| {
            cs.iter()
                .map(|c| {
                    json!({
                        "t": c.t,
                        "kernel_dim": c.kernel_dim,
                        "signature": [c.signature.0, c.signature.1],
                    })
                })
                .collect::<Vec<_>>()
        })
        .unwrap_or_default();
    Ok(json!({"mu": halfint_json(mu), "crossings": cs}))
}

fn cmd_maslov_cz() -> CliResult {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct In {
        phi: PathSpec,
    }
    let input: In = read_stdin()?;
    let zeta = conley_zehnder(&input.phi.symplectic()?)?;
    Ok(json!({"zeta": halfint_json(zeta)}))
}

fn cmd_maslov_winding() -> CliResult {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct In {
        lambda: PathSpec,
    }
    let input: In = read_stdin()?;
    let w = winding_det_sq(&input.lambda.lagrangian()?)?;
    Ok(json!({"winding": w}))
}

fn cmd_cover_lift() -> CliResult {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct In {
        lambda: PathSpec,
        theta_start: f64,
        #[serde(rename = "mod")]
        modulus: Value,
    }
    let input: In = read_stdin()?;
    let m = parse_modulus(&input.modulus)?;
    let (end, trace) = lift_path(&input.lambda.lagrangian()?, input.theta_start, m)?;
    Ok(json!({
        "theta_end": end.theta(),
        "deck": end.deck(),
        "frac": end.frac(),
        "trace_len": trace.len(),
    }))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LiftSpec {
    frame: Vec<Vec<f64>>,
    #[serde(rename = "mod")]
    modulus: Value,
    theta: f64,
}

impl LiftSpec {
    fn build(&self) -> Result<MaslovLift, CliError> {
        let frame = LagrangianFrame::new(matrix(&self.frame)?)?;
        Ok(MaslovLift::new(frame, parse_modulus(&self.modulus)?, self.theta)?)
    }
}

fn cmd_cover_abs() -> CliResult {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct In {
        lift0: LiftSpec,
        lift1: LiftSpec,
    }
    let input: In = read_stdin()?;
    let mu = abs_maslov(&input.lift0.build()?, &input.lift1.build()?)?;
    Ok(json!({"mu_tilde": zmod_json(&mu)}))
}

fn cmd_cover_abs_cz() -> CliResult {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct In {
        phi: Vec<Vec<f64>>,
        path: PathSpec,
        k: Value,
    }
    let input: In = read_stdin()?;
    let phi = SymplecticMatrix::new(matrix(&input.phi)?)?;
    let k = parse_zmod(&input.k)?;
    let z = abs_cz(&phi, &input.path.symplectic()?, &k)?;
    Ok(json!({"zeta_tilde": zmod_json(&z)}))
}

fn cmd_cover_handle(n: usize) -> CliResult {
    if n == 0 {
        return Err(CliError::Schema("need n ≥ 1".into()));
    }
    let g = handle_grading(&HandleCurve::standard(n))?;
    Ok(json!({"endpoint": halfint_json(g.endpoint)}))
}

fn cmd_cover_dehn_shift(n: usize) -> CliResult {
    if n == 0 {
        return Err(CliError::Schema("need n ≥ 1".into()));
    }
    Ok(json!({"k": dehn_local_shift(n)?}))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigSpec {
    n: usize,
    #[serde(rename = "mod")]
    modulus: Value,
    count: usize,
    #[serde(default)]
    indices: Option<Vec<i64>>,
}

impl ConfigSpec {
    fn build(&self) -> Result<GradedConfig, CliError> {
        let m = parse_modulus(&self.modulus)?;
        match &self.indices {
            None => Ok(GradedConfig::a_k(self.n, m, self.count)?),
            Some(idx) => {
                let idx = idx.iter().map(|v| ZModN::new(m, *v)).collect();
                Ok(GradedConfig::with_indices(self.n, m, self.count, idx)?)
            }
        }
    }
}

fn cmd_calc_twist() -> CliResult {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct GenSpec {
        sphere: usize,
        #[serde(default)]
        inverse: bool,
    }
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct In {
        #[serde(flatten)]
        config: ConfigSpec,
        word: Vec<GenSpec>,
        target: usize,
    }
    let input: In = read_stdin()?;
    let cfg = input.config.build()?;
    let word: Vec<TwistGen> = input
        .word
        .iter()
        .map(|g| TwistGen {
            sphere: g.sphere,
            inverse: g.inverse,
        })
        .collect();
    let out = twist_word_apply(&cfg, &word, input.target)?;
    Ok(json!({"sphere": out.sphere, "shift": zmod_json(&out.shift)}))
}

fn signature_config(family: KnotFamily, n: usize) -> Result<GradedConfig, CliError> {
    let count = match family {
        KnotFamily::Even => 3,
        KnotFamily::Odd => 4,
    };
    Ok(GradedConfig::a_k(n, Modulus::Infinite, count)?)
}

fn cmd_calc_signature(family: &str, n: usize, k: i64) -> CliResult {
    let family = parse_family(family)?;
    let cfg = signature_config(family, n)?;
    let (a, b) = knotted_signature(&cfg, family, k)?;
    Ok(json!({"hf01": dimvector_json(&a), "hf12": dimvector_json(&b)}))
}

fn cmd_calc_verdict(family: &str, n: usize, k: i64) -> CliResult {
    let family = parse_family(family)?;
    let cfg = signature_config(family, n)?;
    let v = knotted_verdict(&cfg, family, k)?;
    Ok(json!({
        "verdict": match v {
            KnotVerdict::Distinct => "distinct",
            KnotVerdict::Indistinguishable => "indistinguishable",
        }
    }))
}

fn cmd_calc_pl() -> CliResult {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct In {
        n: usize,
        count: usize,
        c: Vec<i64>,
        l: usize,
    }
    let input: In = read_stdin()?;
    let cfg = GradedConfig::a_k(input.n, Modulus::Infinite, input.count)?;
    let out = picard_lefschetz(&cfg, &input.c, input.l)?;
    let order = match pl_order(&cfg, input.l)? {
        PlOrder::One => json!(1),
        PlOrder::Two => json!(2),
        PlOrder::Infinite => json!("inf"),
    };
    Ok(json!({"result": out, "order": order}))
}

fn cmd_calc_cpn() -> CliResult {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct In {
        n: usize,
        profile: Vec<u64>,
        h1: Value,
    }
    let input: In = read_stdin()?;
    let h1 = match &input.h1 {
        Value::Number(x) if x.as_u64() == Some(0) => H1Mod::Zero,
        Value::Object(o) => {
            let g = o
                .get("g")
                .and_then(Value::as_u64)
                .ok_or_else(|| CliError::Schema("h1 object needs integer \"g\"".into()))?;
            H1Mod::Z2Power(g as usize)
        }
        _ => {
            return Err(CliError::Schema(
                "h1 must be 0 or {\"g\": …}".into(),
            ))
        }
    };
    match cpn_check(input.n, &input.profile, &h1)? {
        CpnVerdict::Admissible => Ok(json!({"verdict": "admissible"})),
        CpnVerdict::Contradiction(reason) => {
            Ok(json!({"verdict": "contradiction", "reason": reason}))
        }
    }
}

fn cmd_calc_surface() -> CliResult {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct CurveSpec {
        class: Vec<i64>,
        rot: i64,
    }
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct In {
        genus: usize,
        #[serde(rename = "mod")]
        modulus: Value,
        curves: Vec<CurveSpec>,
        op: String,
        #[serde(default)]
        l: Option<usize>,
        #[serde(default)]
        target_class: Option<Vec<i64>>,
        #[serde(default)]
        target_rot: Option<i64>,
    }
    let input: In = read_stdin()?;
    let m = parse_modulus(&input.modulus)?;
    let curves = input
        .curves
        .iter()
        .map(|c| (c.class.clone(), ZModN::new(m, c.rot)))
        .collect();
    let data = CurveData::new(input.genus, m, curves)?;
    match input.op.as_str() {
        "rules" => {
            let sum = surface_rules(&data)?;
            Ok(json!({"triple_sum": zmod_json(&sum)}))
        }
        "twist" => {
            let l = input
                .l
                .ok_or_else(|| CliError::Schema("twist op needs \"l\"".into()))?;
            let tc = input
                .target_class
                .ok_or_else(|| CliError::Schema("twist op needs \"target_class\"".into()))?;
            let tr = ZModN::new(
                m,
                input
                    .target_rot
                    .ok_or_else(|| CliError::Schema("twist op needs \"target_rot\"".into()))?,
            );
            let (class, rot) = surface_twist(&data, l, &tc, &tr)?;
            Ok(json!({"class": class, "rot": zmod_json(&rot)}))
        }
        "search" => {
            let nu = surface_ungradable_search(&data)?;
            Ok(json!({"nu": nu}))
        }
        other => Err(CliError::Schema(format!(
            "op must be rules|twist|search, got {other:?}"
        ))),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PolySpec {
    monomials: Vec<Vec<u64>>,
    betas: Vec<u64>,
    beta: u64,
}

impl PolySpec {
    fn build(&self) -> Result<WeightedPoly, CliError> {
        Ok(WeightedPoly::new(
            self.monomials.clone(),
            self.betas.clone(),
            self.beta,
        )?)
    }
}

fn cmd_mono_weighted() -> CliResult {
    let input: PolySpec = read_stdin()?;
    Ok(json!({"sigma": sigma_weighted(&input.build()?)}))
}

fn cmd_mono_verdict(allow_n1: bool) -> CliResult {
    let input: PolySpec = read_stdin()?;
    let v = monodromy_verdict(&input.build()?, allow_n1);
    Ok(json!({
        "verdict": match v {
            MonodromyVerdict::InfiniteOrder => "infinite-order",
            MonodromyVerdict::Inconclusive => "inconclusive",
        }
    }))
}

fn cmd_mono_geodesic() -> CliResult {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct PointSpec {
        t: f64,
        m: usize,
    }
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct In {
        dim: usize,
        points: Vec<PointSpec>,
    }
    let input: In = read_stdin()?;
    let data = ConjugatePointData::new(
        input.dim,
        input.points.iter().map(|p| (p.t, p.m)).collect(),
    )?;
    Ok(json!({"sigma": sigma_geodesic(&data)}))
}

fn cmd_mono_table(m: usize) -> CliResult {
    let rows: Vec<Value> = symmetric_space_table(m)
        .iter()
        .map(|r| json!({"name": r.name, "dim": r.dim, "sigma": r.sigma}))
        .collect();
    Ok(json!({"rows": rows}))
}

fn cmd_mono_loop() -> CliResult {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct In {
        #[serde(default)]
        lambda: Option<PathSpec>,
        #[serde(default)]
        mults: Option<Vec<i64>>,
    }
    let input: In = read_stdin()?;
    let path = match (&input.lambda, &input.mults) {
        (Some(spec), None) => spec.lagrangian()?,
        (None, Some(mults)) => diagonal_action_loop(mults)?,
        _ => {
            return Err(CliError::Schema(
                "provide exactly one of \"lambda\" or \"mults\"".into(),
            ))
        }
    };
    Ok(json!({"sigma": sigma_from_loop(&path)?}))
}

// ---------------------------------------------------------------------------
// dispatch
// ---------------------------------------------------------------------------

fn dispatch(cli: &Cli) -> CliResult {
    if let Some(tols) = &cli.tol {
        let parts: Vec<&str> = tols.split(',').collect();
        if parts.len() != 2 {
            return Err(CliError::Schema("--tol expects \"FRAME,PHASE\"".into()));
        }
        let frame: f64 = parts[0].parse().map_err(schema)?;
        let phase: f64 = parts[1].parse().map_err(schema)?;
        if !(frame > 0.0 && phase > 0.0) {
            return Err(CliError::Schema("tolerances must be positive".into()));
        }
        maslovkit::tol::set_tols(frame, phase);
    }
    match &cli.cmd {
        Cmd::Maslov { sub } => match sub {
            MaslovCmd::Pair => cmd_maslov_pair(cli.self_check),
            MaslovCmd::Cz => cmd_maslov_cz(),
            MaslovCmd::Winding => cmd_maslov_winding(),
        },
        Cmd::Cover { sub } => match sub {
            CoverCmd::Lift => cmd_cover_lift(),
            CoverCmd::Abs => cmd_cover_abs(),
            CoverCmd::AbsCz => cmd_cover_abs_cz(),
            CoverCmd::Handle { n } => cmd_cover_handle(*n),
            CoverCmd::DehnShift { n } => cmd_cover_dehn_shift(*n),
        },
        Cmd::Calc { sub } => match sub {
            CalcCmd::Twist => cmd_calc_twist(),
            CalcCmd::Signature { family, n, k } => cmd_calc_signature(family, *n, *k),
            CalcCmd::Verdict { family, n, k } => cmd_calc_verdict(family, *n, *k),
            CalcCmd::Pl => cmd_calc_pl(),
            CalcCmd::Cpn => cmd_calc_cpn(),
            CalcCmd::Surface => cmd_calc_surface(),
        },
        Cmd::Mono { sub } => match sub {
            MonoCmd::Weighted => cmd_mono_weighted(),
            MonoCmd::Verdict { allow_n1 } => cmd_mono_verdict(*allow_n1),
            MonoCmd::Geodesic => cmd_mono_geodesic(),
            MonoCmd::Table { m } => cmd_mono_table(*m),
            MonoCmd::Loop => cmd_mono_loop(),
        },
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // clap usage/help output; help and version requests are success
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    match dispatch(&cli) {
        Ok(v) => {
            println!("{v}");
            std::process::exit(0);
        }
        Err(CliError::Schema(detail)) => {
            eprintln!("{}", json!({"error": "SchemaError", "detail": detail}));
            std::process::exit(1);
        }
        Err(CliError::Domain(e)) => {
            println!("{}", json!({"error": e.name(), "detail": e.to_string()}));
            std::process::exit(2);
        }
    }
}
