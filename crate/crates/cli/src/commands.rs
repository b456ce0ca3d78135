//! One handler per subcommand. Each returns a check report plus
//! command-specific details.

use clap::Subcommand;
use serde_json::{json, Value};

use ftvn::automorphisms::{automorphism_sampler, is_automorphism, orbit_transport, LinearMap};
use ftvn::campaign::{run_campaign, CheckReport, Finding};
use ftvn::center::{center_defect, decompose, lineality_check, unit_element};
use ftvn::doubly_stochastic::{
    birkhoff_decompose, construct_ds_witness, ds_fixed_points, eja_ds_criteria,
    extract_transition_matrix, is_ds_matrix, is_ds_transform,
};
use ftvn::instances::{decreasing_rearrangement, InstanceSpec};
use ftvn::majorization::{lidskii_sum_check, majorize_in_v};
use ftvn::numerics::Matrix;
use ftvn::reduction::{center_correspondence, check_reduced, make_reduced_pair, WNormalForm};
use ftvn::system::{check_axioms, commute, lambda, witness_a3};
use ftvn::{Element, Error, System};

use crate::input::{element_for, square_matrix, Payload};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Randomized check of A1-A3
    Axioms,
    /// Commutation criteria for --x/--y, or on witness-built commuting pairs
    Commute,
    /// Center membership of --x, or the lineality campaign
    Center,
    /// Split --x into center and orthogonal parts
    Decompose,
    /// Is --matrix (or a sampled map) an automorphism
    AutomorphCheck,
    /// Automorphism carrying --x to --y
    OrbitTransport,
    /// Is --x majorized by --y in V
    Majorize,
    /// Is --matrix a doubly stochastic transformation
    DsCheck,
    /// Doubly stochastic M with M·y = x for vectors --x ≺ --y
    DsWitness,
    /// Birkhoff decomposition of a doubly stochastic --matrix
    Birkhoff,
    /// Reduced-pair conditions and center correspondence
    ReduceCheck,
    /// λ(Σxᵢ) ≺ Σλ(xᵢ) for --x/--y, or on sampled pairs and triples
    Lidskii,
    /// Decreasing rearrangement of --x
    Rearrange,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Self::Axioms => "axioms",
            Self::Commute => "commute",
            Self::Center => "center",
            Self::Decompose => "decompose",
            Self::AutomorphCheck => "automorph-check",
            Self::OrbitTransport => "orbit-transport",
            Self::Majorize => "majorize",
            Self::DsCheck => "ds-check",
            Self::DsWitness => "ds-witness",
            Self::Birkhoff => "birkhoff",
            Self::ReduceCheck => "reduce-check",
            Self::Lidskii => "lidskii",
            Self::Rearrange => "rearrange",
        }
    }

    pub fn needs_system(self) -> bool {
        !matches!(self, Self::DsWitness | Self::Birkhoff | Self::Rearrange)
    }
}

/// Resolved inputs for one run.
pub struct Inputs {
    pub system: Option<System>,
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
    pub x: Option<Payload>,
    pub y: Option<Payload>,
    pub matrix: Option<Payload>,
    pub witness: bool,
}

pub enum Failure {
    /// Bad input; exit 2.
    Usage(String),
    /// The property under test does not hold; exit 1 with this message as
    /// the counterexample.
    Violation(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotMajorized(_) | Error::OrbitMismatch(_) | Error::HypothesisNotMet(_) => {
                Failure::Violation(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Outcome = Result<(CheckReport, Value), Failure>;

impl Inputs {
    fn sys(&self) -> &System {
        self.system.as_ref().expect("system resolved for this command")
    }

    fn element(&self, which: &str) -> Result<Element, Failure> {
        let p = self.payload(which)?;
        element_for(self.sys(), p).map_err(Failure::Usage)
    }

    fn payload(&self, which: &str) -> Result<&Payload, Failure> {
        let p = match which {
            "x" => &self.x,
            "y" => &self.y,
            _ => &self.matrix,
        };
        p.as_ref().ok_or_else(|| Failure::Usage(format!("--{which} is required")))
    }

    fn vector(&self, which: &str) -> Result<Vec<f64>, Failure> {
        match self.payload(which)? {
            Payload::Vector(v) => Ok(v.clone()),
            Payload::Matrix(_) => Err(Failure::Usage(format!("--{which} must be a vector"))),
        }
    }

    fn map(&self) -> Result<LinearMap, Failure> {
        let n = self.sys().dim_v();
        let m = square_matrix(self.payload("matrix")?, Some(n)).map_err(Failure::Usage)?;
        Ok(LinearMap::from_matrix(m))
    }

    fn single(&self, violation: f64, payload: Value) -> CheckReport {
        let mut r = CheckReport::new(self.seed, self.tol);
        r.record(violation, || payload);
        r
    }
}

fn rows(m: &Matrix) -> Value {
    json!(m.to_rows())
}

fn rel(v: f64, scale: f64) -> f64 {
    v / (1.0 + scale)
}

pub fn run(cmd: Command, inp: &Inputs) -> Outcome {
    match cmd {
        Command::Axioms => Ok((check_axioms(inp.sys(), inp.samples, inp.seed, inp.tol)?, Value::Null)),
        Command::Commute => commute_cmd(inp),
        Command::Center => center_cmd(inp),
        Command::Decompose => decompose_cmd(inp),
        Command::AutomorphCheck => automorph_cmd(inp),
        Command::OrbitTransport => transport_cmd(inp),
        Command::Majorize => majorize_cmd(inp),
        Command::DsCheck => ds_check_cmd(inp),
        Command::DsWitness => ds_witness_cmd(inp),
        Command::Birkhoff => birkhoff_cmd(inp),
        Command::ReduceCheck => reduce_cmd(inp),
        Command::Lidskii => lidskii_cmd(inp),
        Command::Rearrange => rearrange_cmd(inp),
    }
}

fn commute_cmd(inp: &Inputs) -> Outcome {
    let sys = inp.sys();
    if inp.x.is_some() || inp.y.is_some() {
        let (x, y) = (inp.element("x")?, inp.element("y")?);
        let r = commute(sys, &x, &y, inp.tol)?;
        let worst = r.criteria().iter().map(|c| c.defect).fold(0.0, f64::max);
        let report = inp.single(worst, json!({ "x": x, "y": y }));
        return Ok((report, json!({ "commute": r.verdict, "criteria": r, "agreement": r.agreement() })));
    }
    // y = witness for (x, λ(u)) commutes with x by construction
    let report = run_campaign(inp.samples, inp.seed, inp.tol, |_, rng| {
        let x = sys.sample_element(rng);
        let u = sys.sample_element(rng);
        let probe = || -> ftvn::Result<(f64, Value)> {
            let y = witness_a3(sys, &x, &lambda(sys, &u)?)?;
            let r = commute(sys, &x, &y, inp.tol)?;
            let worst = r.criteria().iter().map(|c| c.defect).fold(0.0, f64::max);
            Ok((worst, json!({ "x": x, "y": y, "criteria": r })))
        };
        match probe() {
            Ok((v, p)) => Finding::new(v, p),
            Err(e) => Finding::new(f64::MAX, json!({ "x": x, "u": u, "error": e.to_string() })),
        }
    });
    Ok((report, Value::Null))
}

fn center_info(sys: &System) -> Value {
    let c = sys.center_desc();
    json!({ "center_dim": c.dim(), "center_kind": c.kind, "center_basis": c.basis, "unit": unit_element(sys) })
}

fn center_cmd(inp: &Inputs) -> Outcome {
    let sys = inp.sys();
    let mut details = center_info(sys);
    if inp.x.is_some() {
        let x = inp.element("x")?;
        let d = center_defect(sys, &x)?;
        details["in_center"] = json!(d <= inp.tol);
        details["center_defect"] = json!(d);
        return Ok((inp.single(d, json!({ "x": x, "center_defect": d })), details));
    }
    Ok((lineality_check(sys, inp.samples, inp.seed, inp.tol)?, details))
}

fn decompose_cmd(inp: &Inputs) -> Outcome {
    let sys = inp.sys();
    let x = inp.element("x")?;
    let (xc, xp) = decompose(sys, &x)?;
    let recon = rel(x.sub(&xc.add(&xp)).norm(), x.norm());
    let ortho = rel(xc.dot(&xp).abs(), x.norm() * x.norm());
    let central = center_defect(sys, &xc)?;
    let worst = recon.max(ortho).max(central);
    let report = inp.single(
        worst,
        json!({ "x": x, "reconstruction": recon, "orthogonality": ortho, "center_defect": central }),
    );
    Ok((report, json!({ "center_part": xc, "orthogonal_part": xp })))
}

fn automorph_cmd(inp: &Inputs) -> Outcome {
    let sys = inp.sys();
    let (a, source) = if inp.matrix.is_some() {
        (inp.map()?, "given")
    } else {
        (automorphism_sampler(sys, inp.seed), "sampler")
    };
    let report = is_automorphism(sys, &a, inp.samples, inp.seed, inp.tol)?;
    Ok((report, json!({ "source": source, "kind": a.meta, "matrix": rows(&a.matrix) })))
}

fn transport_cmd(inp: &Inputs) -> Outcome {
    let sys = inp.sys();
    let (x, y) = (inp.element("x")?, inp.element("y")?);
    let a = orbit_transport(sys, &x, &y, inp.tol)?;
    let residual = rel(a.apply_element(&x).sub(&y).norm(), y.norm());
    let ortho = a.matrix.orthogonality_defect();
    let report = inp.single(
        residual.max(ortho),
        json!({ "x": x, "y": y, "residual": residual, "orthogonality_defect": ortho }),
    );
    Ok((report, json!({ "kind": a.meta, "matrix": rows(&a.matrix) })))
}

fn majorize_cmd(inp: &Inputs) -> Outcome {
    let sys = inp.sys();
    let (x, y) = (inp.element("x")?, inp.element("y")?);
    let verdict = majorize_in_v(sys, &x, &y, inp.tol)?;
    let report = inp.single(
        if verdict.holds { (-verdict.margin).max(0.0) } else { (-verdict.margin).max(inp.tol * 2.0) },
        json!({ "x": x, "y": y, "margin": verdict.margin, "weak_holds": verdict.weak_holds }),
    );
    let mut details = json!({ "holds": verdict.holds, "weak_holds": verdict.weak_holds, "margin": verdict.margin });
    if inp.witness && verdict.holds {
        if let Some(w) = &verdict.witness {
            details["hull_witness"] = json!(w);
        }
        // a DS matrix on the λ side; on Rⁿ↓ it acts on x and y themselves
        let ds = match (sys.spec(), sys.reduced_form()) {
            (InstanceSpec::RnDown { .. }, _) => Some((x.0.clone(), y.0.clone(), "vectors")),
            (_, Some(WNormalForm::Decreasing)) => {
                Some((lambda(sys, &x)?.0, lambda(sys, &y)?.0, "spectra"))
            }
            _ => None,
        };
        if let Some((a, b, acts_on)) = ds {
            let m = construct_ds_witness(&a, &b, inp.tol)?.matrix;
            details["witness"] = json!({ "acts_on": acts_on, "matrix": rows(&m) });
        }
    }
    Ok((report, details))
}

fn ds_check_cmd(inp: &Inputs) -> Outcome {
    let sys = inp.sys();
    let d = inp.map()?;
    let mut report = is_ds_transform(sys, &d, inp.samples, inp.seed, inp.tol)?;
    let mut details = json!({ "ds_transform": report.passed });
    match eja_ds_criteria(sys, &d, inp.samples, inp.seed, inp.tol) {
        Ok(r) => {
            details["eja_criteria"] = json!(r.passed);
            report.absorb(r);
        }
        Err(Error::Unsupported(_)) => {}
        Err(e) => return Err(e.into()),
    }
    let fixed = ds_fixed_points(sys, &d, inp.tol)?;
    details["fixed_points"] = json!(fixed.passed);
    report.absorb(fixed);
    if matches!(sys.spec(), InstanceSpec::RnDown { .. }) {
        details["ds_matrix"] = json!(is_ds_matrix(&d.matrix, inp.tol));
    }
    if let (InstanceSpec::Sym { .. }, Some(_)) = (sys.spec(), &inp.x) {
        let x = inp.element("x")?;
        let t = extract_transition_matrix(sys, &d, &x)?;
        details["transition_matrix"] = rows(&t.matrix.matrix);
        details["degenerate_frame"] = json!(t.degenerate_frame);
    }
    Ok((report, details))
}

fn ds_witness_cmd(inp: &Inputs) -> Outcome {
    let (x, y) = (inp.vector("x")?, inp.vector("y")?);
    let m = construct_ds_witness(&x, &y, inp.tol)?.matrix;
    let my = m.matvec(&y);
    let residual = my.iter().zip(&x).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
    let ds = if is_ds_matrix(&m, inp.tol) { 0.0 } else { 1.0 };
    let report = inp.single(rel(residual, 0.0).max(ds), json!({ "x": x, "y": y, "residual": residual }));
    Ok((report, json!({ "matrix": rows(&m) })))
}

fn birkhoff_cmd(inp: &Inputs) -> Outcome {
    let m = square_matrix(inp.payload("matrix")?, None).map_err(Failure::Usage)?;
    let n = m.rows();
    let d = birkhoff_decompose(&m, inp.tol)?;
    let err = d.reconstruct(n).sub(&m).frobenius_norm();
    let bound = (n.saturating_sub(1)).pow(2) + 1;
    let over = if d.terms.len() <= bound { 0.0 } else { 1.0 };
    let report = inp.single(err.max(over), json!({ "reconstruction_error": err, "terms": d.terms.len() }));
    Ok((report, json!({ "terms": d.terms, "term_bound": bound, "reconstruction_error": err })))
}

fn reduce_cmd(inp: &Inputs) -> Outcome {
    let pair = make_reduced_pair(inp.sys())?;
    let mut report = check_reduced(&pair, inp.samples, inp.seed, inp.tol)?;
    let reduced = report.passed;
    let centers = center_correspondence(&pair, inp.tol)?;
    let details = json!({ "normal_form": pair.form, "reduced": reduced, "center_correspondence": centers.passed });
    report.absorb(centers);
    Ok((report, details))
}

fn lidskii_cmd(inp: &Inputs) -> Outcome {
    let sys = inp.sys();
    if inp.x.is_some() || inp.y.is_some() {
        let xs = [inp.element("x")?, inp.element("y")?];
        let v = lidskii_sum_check(sys, &xs, inp.tol)?;
        let report = inp.single((-v.margin).max(0.0), json!({ "xs": xs, "margin": v.margin }));
        return Ok((report, json!({ "holds": v.holds, "margin": v.margin })));
    }
    make_reduced_pair(sys)?;
    let report = run_campaign(inp.samples, inp.seed, inp.tol, |i, rng| {
        let xs: Vec<Element> = (0..2 + i % 2).map(|_| sys.sample_element(rng)).collect();
        match lidskii_sum_check(sys, &xs, inp.tol) {
            Ok(v) => Finding::new((-v.margin).max(0.0), json!({ "xs": xs, "margin": v.margin })),
            Err(e) => Finding::new(f64::MAX, json!({ "xs": xs, "error": e.to_string() })),
        }
    });
    Ok((report, Value::Null))
}

fn rearrange_cmd(inp: &Inputs) -> Outcome {
    let x = inp.vector("x")?;
    let r = decreasing_rearrangement(&x);
    let report = inp.single(0.0, Value::Null);
    Ok((report, json!({ "star": r.star, "permutation": r.permutation })))
}
