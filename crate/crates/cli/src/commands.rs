use std::path::Path;

use qhm_core::clifford::{construct_irreducible, verify_clifford};
use qhm_core::gallery;
use qhm_core::orthomul::{self, from_osystem, hopf_construction, standard_multiplication, verify_orthomul};
use qhm_core::osystem::{self, construct_range_maximal, hurwitz_radon, verify_osystem};
use qhm_core::qhm::{self, classify, range_extend, sampled_criteria, verify_qhm, ClassificationReport};
use qhm_core::sampling::gaussian_point;
use qhm_core::{Error, Matrix, QuadraticHarmonicMorphism, Scalar, TolerancePolicy};
use serde_json::{json, Value};

use crate::document::{matrix_to_json, scalar_to_json, Kind, ObjectDocument, Provenance};
use crate::{Cli, CliError, Command, Output};

struct Ctx {
    seed: u64,
    samples: usize,
    tol: TolerancePolicy,
    command: &'static str,
}

impl Ctx {
    fn provenance(&self) -> Provenance {
        Provenance {
            command: self.command.to_string(),
            seed: self.seed,
        }
    }

    fn document(&self, kind: Kind, dims: [usize; 2], matrices: &[Matrix]) -> ObjectDocument {
        ObjectDocument::new(kind, dims, matrices, &self.provenance())
    }

    fn qhm_document(&self, phi: &QuadraticHarmonicMorphism) -> ObjectDocument {
        self.document(Kind::Qhm, [phi.m(), phi.n()], phi.components())
    }
}

/// Runs one command. Errors carry their exit code; a rejected `verify`
/// still returns its report, with exit code 1.
pub fn run(cli: &Cli) -> Result<Output, CliError> {
    let tol = TolerancePolicy::with_identity_tol(cli.tol).map_err(|e| CliError::Format(e.to_string()))?;
    let command = match &cli.command {
        Command::Sigma { .. } => "sigma",
        Command::Construct { .. } => "construct",
        Command::Verify { .. } => "verify",
        Command::Classify { .. } => "classify",
        Command::Convert { .. } => "convert",
        Command::Extend { .. } => "extend",
        Command::Split { .. } => "split",
        Command::Eval { .. } => "eval",
    };
    let ctx = Ctx {
        seed: cli.seed,
        samples: cli.samples,
        tol,
        command,
    };
    let text = match &cli.command {
        Command::Sigma { m } => sigma(*m)?,
        Command::Construct {
            kind,
            n,
            m,
            hopf,
            example,
        } => construct(&ctx, *kind, *n, *m, *hopf, example.as_deref())?.to_json(),
        Command::Verify { file } => return verify(&ctx, &read(file)?),
        Command::Classify { file } => {
            let phi = load_qhm(&ctx, &read(file)?)?;
            pretty(&classification_json(&classify(&phi)?))
        }
        Command::Convert { file, to } => convert(&ctx, &read(file)?, *to)?.to_json(),
        Command::Extend { file } => ctx.qhm_document(&range_extend(&load_qhm(&ctx, &read(file)?)?)?).to_json(),
        Command::Split { file } => split(&ctx, &read(file)?)?,
        Command::Eval { file, point } => eval(&ctx, &read(file)?, point.as_deref())?,
    };
    Ok(Output {
        text,
        exit_code: 0,
        diagnostic: None,
    })
}

fn read(path: &Path) -> Result<ObjectDocument, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    ObjectDocument::parse(&text)
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn sigma(m: usize) -> Result<String, CliError> {
    if m == 0 {
        return Err(CliError::Format("m must be positive".into()));
    }
    let h = hurwitz_radon(m);
    Ok(format!("m={} r={} c={} d={} sigma={}\n", h.m, h.r, h.c, h.d, h.sigma))
}

fn require(value: Option<usize>, flag: &str, kind: Kind) -> Result<usize, CliError> {
    match value {
        Some(v) if v > 0 => Ok(v),
        Some(_) => Err(CliError::Format(format!("--{flag} must be positive"))),
        None => Err(CliError::Format(format!("construct {kind} needs --{flag}"))),
    }
}

fn construct(
    ctx: &Ctx,
    kind: Kind,
    n: Option<usize>,
    m: Option<usize>,
    hopf: Option<usize>,
    example: Option<&str>,
) -> Result<ObjectDocument, CliError> {
    Ok(match kind {
        Kind::Clifford => {
            let cs = construct_irreducible(require(n, "n", kind)?);
            ctx.document(kind, [cs.two_m(), cs.n()], cs.matrices())
        }
        Kind::Osystem => {
            let m = require(m, "m", kind)?;
            let full = construct_range_maximal(m);
            let os = match n {
                None => full,
                Some(k) if k >= 1 && k <= full.n() => osystem::sub_system(&full, &(0..k).collect::<Vec<_>>())?,
                Some(k) => {
                    return Err(CliError::Rejected(format!(
                        "no O-system with {k} members on R^{m}: at most σ({m}) = {}",
                        full.n()
                    )))
                }
            };
            ctx.document(kind, [os.m(), os.n()], os.matrices())
        }
        Kind::Orthomul => {
            let mu = match (n, m) {
                (Some(k), None) => standard_multiplication(k)?,
                (None, Some(m)) => from_osystem(&construct_range_maximal(m)),
                _ => return Err(CliError::Format("construct orthomul needs exactly one of --n and --m".into())),
            };
            ctx.document(kind, [mu.p(), mu.q()], mu.slices())
        }
        Kind::Qhm => {
            let phi = match (n, hopf, example) {
                (Some(n), None, None) => qhm::from_clifford(&construct_irreducible(n))?,
                (None, Some(k), None) => hopf_construction(&standard_multiplication(k)?)?,
                (None, None, Some("z-squared")) => gallery::z_squared(),
                (None, None, Some("two-scale")) => gallery::two_scale_r8(),
                (None, None, Some(other)) => {
                    return Err(CliError::Format(format!(
                        "unknown example {other:?}; known: z-squared, two-scale"
                    )))
                }
                _ => {
                    return Err(CliError::Format(
                        "construct qhm needs exactly one of --n, --hopf and --example".into(),
                    ))
                }
            };
            ctx.qhm_document(&phi)
        }
    })
}

fn max_pair_residual(mats: &[Matrix], pair: impl Fn(&Matrix, &Matrix, bool) -> Matrix) -> f64 {
    let mut worst = 0.0_f64;
    for (i, a) in mats.iter().enumerate() {
        for b in &mats[i..] {
            worst = worst.max(pair(a, b, std::ptr::eq(a, b)).frobenius_norm());
        }
    }
    worst
}

fn two_identity(n: usize) -> Matrix {
    Matrix::identity(n).scale(&Scalar::int(2))
}

/// Residual summary for a report, computed whether or not the check passes.
fn residuals(ctx: &Ctx, kind: Kind, mats: &[Matrix]) -> Value {
    match kind {
        Kind::Clifford => {
            let id2 = two_identity(mats[0].rows());
            let asym = mats.iter().map(|p| (p - &p.transpose()).frobenius_norm()).fold(0.0, f64::max);
            json!({
                "symmetry": asym,
                "anticommutation": max_pair_residual(mats, |a, b, same| {
                    let r = a.anticommutator(b);
                    if same { &r - &id2 } else { r }
                }),
            })
        }
        Kind::Osystem => {
            let id2 = two_identity(mats[0].rows());
            json!({
                "anticommutation": max_pair_residual(mats, |a, b, same| {
                    let r = &(&a.transpose() * b) + &(&b.transpose() * a);
                    if same { &r - &id2 } else { r }
                }),
            })
        }
        Kind::Orthomul => match orthomul::OrthogonalMultiplication::from_slices(mats.to_vec()) {
            Ok(mu) => {
                let r = verify_orthomul(&mu, ctx.samples, ctx.seed);
                json!({ "sampled_defect": r.sampled_defect, "slice_residual": r.slice_residual })
            }
            Err(_) => json!({}),
        },
        Kind::Qhm => {
            let first = &mats[0] * &mats[0];
            let trace = mats.iter().map(|a| a.trace().to_f64().abs()).fold(0.0, f64::max);
            let anti = max_pair_residual(mats, |a, b, same| {
                if same {
                    &(a * a) - &first
                } else {
                    a.anticommutator(b)
                }
            });
            let sampled = sampled_criteria(mats, ctx.samples, ctx.seed);
            json!({
                "trace": trace,
                "conformality": anti,
                "sampled_laplacian": sampled.max_laplacian,
                "sampled_conformal_defect": sampled.max_conformal_defect,
            })
        }
    }
}

/// Runs the library check for `kind`.
fn check(ctx: &Ctx, kind: Kind, mats: &[Matrix]) -> Result<(), Error> {
    match kind {
        Kind::Clifford => verify_clifford(mats, &ctx.tol).map(drop),
        Kind::Osystem => verify_osystem(mats, &ctx.tol).map(drop),
        Kind::Orthomul => {
            let mu = orthomul::OrthogonalMultiplication::from_slices(mats.to_vec())?;
            let r = verify_orthomul(&mu, ctx.samples, ctx.seed);
            if r.passed {
                Ok(())
            } else {
                Err(Error::ShapeMismatch(format!(
                    "not norm-preserving: slice residual {:e}, sampled defect {:e}",
                    r.slice_residual, r.sampled_defect
                )))
            }
        }
        Kind::Qhm => verify_qhm(mats, &ctx.tol, ctx.samples, ctx.seed).map(drop),
    }
}

fn explain(kind: Kind, mats: &[Matrix], e: &Error) -> String {
    let m = mats[0].rows();
    if kind == Kind::Osystem && m % 2 == 1 && mats.len() >= 2 {
        return format!(
            "{e}; no O-system with two or more members exists on odd-dimensional R^{m}, \
             because τ_1ᵗτ_2 would be an orthogonal skew-symmetric matrix and those need even dimension"
        );
    }
    e.to_string()
}

fn verify(ctx: &Ctx, doc: &ObjectDocument) -> Result<Output, CliError> {
    let mats = doc.matrices()?;
    let outcome = check(ctx, doc.kind, &mats);
    let error = outcome.as_ref().err().map(|e| explain(doc.kind, &mats, e));
    let report = json!({
        "kind": doc.kind,
        "dims": doc.dims,
        "valid": error.is_none(),
        "error": error,
        "samples": ctx.samples,
        "seed": ctx.seed,
        "residuals": residuals(ctx, doc.kind, &mats),
    });
    Ok(Output {
        text: pretty(&report),
        exit_code: if error.is_some() { 1 } else { 0 },
        diagnostic: error.map(|e| format!("rejected: {e}")),
    })
}

fn load_qhm(ctx: &Ctx, doc: &ObjectDocument) -> Result<QuadraticHarmonicMorphism, CliError> {
    if doc.kind != Kind::Qhm {
        return Err(CliError::Format(format!("expected a qhm document, found {}", doc.kind)));
    }
    Ok(verify_qhm(&doc.matrices()?, &ctx.tol, ctx.samples, ctx.seed)?)
}

fn classification_json(r: &ClassificationReport) -> Value {
    json!({
        "m": r.m,
        "n": r.n,
        "q_rank": r.q_rank,
        "is_q_nonsingular": r.is_q_nonsingular,
        "is_umbilical": r.is_umbilical,
        "spectrum": {
            "positive": r.spectrum.positive.iter()
                .map(|(l, k)| json!({ "value": scalar_to_json(l), "multiplicity": k }))
                .collect::<Vec<_>>(),
            "zero_count": r.spectrum.zero_count,
        },
        "scales": r.splitting.iter().map(|s| scalar_to_json(&s.scale)).collect::<Vec<_>>(),
        "splitting": r.splitting.iter()
            .map(|s| json!({ "scale": scalar_to_json(&s.scale), "dim": s.map.m() }))
            .collect::<Vec<_>>(),
    })
}

fn convert(ctx: &Ctx, doc: &ObjectDocument, to: Kind) -> Result<ObjectDocument, CliError> {
    let mats = doc.matrices()?;
    Ok(match (doc.kind, to) {
        (Kind::Qhm, Kind::Clifford) => {
            let phi = verify_qhm(&mats, &ctx.tol, ctx.samples, ctx.seed)?;
            let r = classify(&phi)?;
            if !r.is_umbilical {
                return Err(Error::NotUmbilical.into());
            }
            if !r.is_q_nonsingular {
                return Err(Error::QSingular {
                    q_rank: r.q_rank,
                    m: r.m,
                }
                .into());
            }
            let inv = r.splitting[0].scale.recip().expect("positive scale");
            let ps: Vec<Matrix> = phi.components().iter().map(|a| a.scale(&inv)).collect();
            let cs = verify_clifford(&ps, &ctx.tol)?;
            ctx.document(Kind::Clifford, [cs.two_m(), cs.n()], cs.matrices())
        }
        (Kind::Clifford, Kind::Qhm) => {
            let cs = verify_clifford(&mats, &ctx.tol)?;
            ctx.qhm_document(&qhm::from_clifford(&cs)?)
        }
        (Kind::Clifford, Kind::Osystem) => {
            let os = osystem::from_clifford(&verify_clifford(&mats, &ctx.tol)?)?;
            ctx.document(Kind::Osystem, [os.m(), os.n()], os.matrices())
        }
        (Kind::Osystem, Kind::Clifford) => {
            let cs = osystem::to_clifford(&verify_osystem(&mats, &ctx.tol)?);
            ctx.document(Kind::Clifford, [cs.two_m(), cs.n()], cs.matrices())
        }
        (Kind::Osystem, Kind::Orthomul) => {
            let mu = from_osystem(&verify_osystem(&mats, &ctx.tol)?);
            ctx.document(Kind::Orthomul, [mu.p(), mu.q()], mu.slices())
        }
        (Kind::Orthomul, Kind::Osystem) => {
            let mu = orthomul::OrthogonalMultiplication::from_slices(mats)?;
            let os = orthomul::to_osystem(&mu)?;
            ctx.document(Kind::Osystem, [os.m(), os.n()], os.matrices())
        }
        (from, to) if from == to => {
            check(ctx, from, &mats).map_err(|e| CliError::Rejected(explain(from, &mats, &e)))?;
            ctx.document(from, doc.dims, &mats)
        }
        (from, to) => {
            return Err(CliError::Format(format!(
                "cannot convert {from} to {to}; supported: qhm↔clifford, clifford↔osystem, osystem↔orthomul"
            )))
        }
    })
}

fn split(ctx: &Ctx, doc: &ObjectDocument) -> Result<String, CliError> {
    let phi = load_qhm(ctx, doc)?;
    let r = classify(&phi)?;
    let exact = r.coordinate_change.is_exact();
    let summands: Vec<Value> = r
        .splitting
        .iter()
        .map(|s| {
            json!({
                "scale": scalar_to_json(&s.scale),
                "map": serde_json::to_value(ctx.qhm_document(&s.map)).expect("documents serialize"),
            })
        })
        .collect();
    Ok(pretty(&json!({
        "q_rank": r.q_rank,
        "coordinate_change": matrix_to_json(&r.coordinate_change, exact),
        "summands": summands,
    })))
}

fn parse_point(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|e| CliError::Format(format!("bad coordinate {t:?}: {e}")))
        })
        .collect()
}

type Evaluator = Box<dyn Fn(&[f64]) -> Result<Vec<f64>, Error>>;

fn eval(ctx: &Ctx, doc: &ObjectDocument, point: Option<&str>) -> Result<String, CliError> {
    let (dim, f): (usize, Evaluator) = match doc.kind {
        Kind::Qhm => {
            let phi = load_qhm(ctx, doc)?;
            (phi.m(), Box::new(move |x| phi.evaluate(x)))
        }
        Kind::Orthomul => {
            let mu = orthomul::OrthogonalMultiplication::from_slices(doc.matrices()?)?;
            let p = mu.p();
            (p + mu.q(), Box::new(move |x| mu.apply(&x[..p], &x[p..])))
        }
        other => return Err(CliError::Format(format!("eval needs a qhm or orthomul document, found {other}"))),
    };
    let x = match point {
        Some(t) => parse_point(t)?,
        None => gaussian_point(dim, ctx.seed, 0),
    };
    if x.len() != dim {
        return Err(CliError::Format(format!("point has {} coordinates, expected {dim}", x.len())));
    }
    let value = f(&x)?;
    Ok(pretty(&json!({ "point": x, "value": value })))
}
