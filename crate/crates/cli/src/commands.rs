use std::collections::BTreeMap;
use std::path::Path;

use blowsplit::ainfty::json::AlgebraJson;
use blowsplit::ainfty::{check_ainfty, AInftyAlgebra, Violation};
use blowsplit::blowup::{blowup_generation, BlowupModel, BlowupReport, Generation};
use blowsplit::hochschild::{hochschild_homology_dims, HHReport};
use blowsplit::linalg::{determinant, Matrix};
use blowsplit::openclosed::{oc_matrix, surjectivity_test, OCMatrix, OcKind, SurjectivityReport};
use blowsplit::rational::{format_rational, lcm_u32};
use blowsplit::toric::{critical_points, floer_cohomology_dims, hessian, hessian_clifford, hessian_has_clifford_shape, FloerDims, PotentialFunction};
use blowsplit::trees::{census, enumerate_stable_types, EnumerationOptions, TreedDiskType};
use blowsplit::verify::{verify_all, VerifyConfig, VerifyReport};
use blowsplit::{Error, NovikovElement, Rational};
use serde::Serialize;

use crate::args::{rational, Format, Kind, PotentialArgs, TreeMode};
use crate::CliError;

/// Rendered report plus whether the checks it records all passed.
pub struct Outcome {
    pub text: String,
    pub passed: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, passed: true }
    }
}

fn json<T: Serialize>(v: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| CliError::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn csv_table(header: &[String], rows: &[Vec<String>]) -> Result<String, CliError> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(header).map_err(|e| CliError::Io(e.to_string()))?;
    for r in rows {
        w.write_record(r).map_err(|e| CliError::Io(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
}

fn md_table(header: &[String], rows: &[Vec<String>]) -> String {
    let mut s = format!("| {} |\n|{}\n", header.join(" | "), "---|".repeat(header.len()));
    for r in rows {
        s.push_str(&format!("| {} |\n", r.iter().map(|x| x.replace('|', "/")).collect::<Vec<_>>().join(" | ")));
    }
    s
}

fn unsupported(cmd: &str, f: Format) -> CliError {
    CliError::Lib(Error::InvalidInput(format!("{cmd} does not support --format {f:?}").to_lowercase()))
}

/// Natural order unless overridden by a multiple of it.
fn resolve_order(natural: u32, over: Option<u32>) -> Result<u32, CliError> {
    match over {
        None => Ok(natural),
        Some(m) if m > 0 && m % natural == 0 => Ok(m),
        Some(m) => Err(CliError::Lib(Error::InvalidInput(format!("cyclotomic order {m} is not a multiple of {natural}")))),
    }
}

fn embed_matrix(m: &Matrix, order: u32) -> Matrix {
    m.iter().map(|r| r.iter().map(|x| x.embed(order)).collect()).collect()
}

fn read_algebra(path: &Path, cutoff: &Rational) -> Result<AInftyAlgebra, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let j: AlgebraJson = serde_json::from_str(&text).map_err(|e| CliError::Lib(Error::MalformedAlgebra(e.to_string())))?;
    let a = AInftyAlgebra::from_json(&j)?;
    // the file's cutoff wins unless the flag tightens it
    Ok(if cutoff < a.cutoff() { a.with_cutoff(cutoff.clone()) } else { a })
}

#[derive(Serialize)]
struct TreesReport {
    boundary: usize,
    interior: usize,
    mode: String,
    census: BTreeMap<i64, usize>,
    types: Vec<TreedDiskType>,
}

pub fn trees_enumerate(boundary: usize, interior: usize, mode: TreeMode, format: Option<Format>) -> Result<Outcome, CliError> {
    let opts = match mode {
        TreeMode::Associahedron => EnumerationOptions::associahedron(),
        TreeMode::Treed => EnumerationOptions::treed(),
        TreeMode::Weighted => EnumerationOptions::weighted(),
    };
    let types = enumerate_stable_types(boundary, interior, &opts)?;
    let counts = census(&types);
    let header = vec!["dimension".to_string(), "count".to_string()];
    let rows: Vec<Vec<String>> = counts.iter().map(|(d, c)| vec![d.to_string(), c.to_string()]).collect();
    let text = match format.unwrap_or(Format::Csv) {
        Format::Csv => csv_table(&header, &rows)?,
        Format::Md => md_table(&header, &rows),
        Format::Json => json(&TreesReport { boundary, interior, mode: format!("{mode:?}").to_lowercase(), census: counts, types })?,
    };
    Ok(Outcome::ok(text))
}

#[derive(Serialize)]
struct AinftyReport {
    cutoff: String,
    objects: Vec<String>,
    rank: usize,
    max_arity: usize,
    flat: bool,
    passed: bool,
    violations: Vec<Violation>,
}

pub fn ainfty_verify(file: &Path, cutoff: &Rational, format: Option<Format>) -> Result<Outcome, CliError> {
    let a = read_algebra(file, cutoff)?;
    let violations = check_ainfty(&a);
    let r = AinftyReport {
        cutoff: format_rational(a.cutoff()),
        objects: a.objects().to_vec(),
        rank: a.rank(),
        max_arity: a.max_arity(),
        flat: a.is_flat(),
        passed: violations.is_empty(),
        violations,
    };
    let text = match format.unwrap_or(Format::Json) {
        Format::Json => json(&r)?,
        Format::Md => {
            let mut s = format!("cutoff {}, rank {}, max arity {}\n\n", r.cutoff, r.rank, r.max_arity);
            s.push_str(&format!("{} violations\n", r.violations.len()));
            for v in &r.violations {
                s.push_str(&format!("- {v}\n"));
            }
            s
        }
        f => return Err(unsupported("ainfty verify", f)),
    };
    Ok(Outcome { text, passed: r.passed })
}

#[derive(Serialize)]
struct HhJson {
    cutoff: String,
    length: usize,
    report: HHReport,
}

pub fn hh_dims(file: &Path, length: usize, cutoff: &Rational, format: Option<Format>) -> Result<Outcome, CliError> {
    let a = read_algebra(file, cutoff)?;
    let r = hochschild_homology_dims(&a, length)?;
    let header: Vec<String> = ["degree", "dimension", "stable"].iter().map(|s| s.to_string()).collect();
    let rows: Vec<Vec<String>> = r
        .current
        .dims
        .iter()
        .map(|(g, d)| vec![g.to_string(), d.to_string(), (r.previous.dims.get(g) == Some(d) && r.stable).to_string()])
        .collect();
    let text = match format.unwrap_or(Format::Csv) {
        Format::Csv => csv_table(&header, &rows)?,
        Format::Md => format!("cutoff {}, length {length}\n\n{}", format_rational(a.cutoff()), md_table(&header, &rows)),
        Format::Json => json(&HhJson { cutoff: format_rational(a.cutoff()), length, report: r })?,
    };
    Ok(Outcome::ok(text))
}

fn potential(args: &PotentialArgs) -> Result<PotentialFunction, CliError> {
    Ok(match args.kind {
        Kind::Pn => {
            if args.eps.is_some() {
                return Err(CliError::Lib(Error::InvalidInput("--eps applies only to --kind exceptional".into())));
            }
            PotentialFunction::clifford_torus(args.n)?
        }
        Kind::Exceptional => {
            let eps = args.eps.as_deref().ok_or_else(|| Error::InvalidInput("--kind exceptional needs --eps p/q".into()))?;
            PotentialFunction::exceptional(args.n, rational(eps)?)?
        }
    })
}

#[derive(Serialize)]
struct CritJson {
    k: usize,
    y: Vec<String>,
    value: NovikovElement,
    hessian: Matrix,
    det: NovikovElement,
    clifford_shape: bool,
    floer: FloerDims,
    clifford: AlgebraJson,
}

#[derive(Serialize)]
struct PotentialReport {
    cutoff: String,
    cyclotomic_order: u32,
    potential: PotentialFunction,
    critical_points: Vec<CritJson>,
    note: &'static str,
}

pub fn potential_crit(args: &PotentialArgs, cutoff: &Rational, order: Option<u32>, format: Option<Format>) -> Result<Outcome, CliError> {
    let w = potential(args)?;
    let order = resolve_order(w.root_order(), order)?;
    let mut pts = Vec::new();
    for p in critical_points(&w) {
        let h = hessian(&w, &p.y)?;
        let cliff = hessian_clifford(&w, &p.y, cutoff.clone())?;
        pts.push(CritJson {
            k: p.k,
            y: p.y.iter().map(|c| c.embed(order).to_string()).collect(),
            value: w.evaluate(&p.y)?.embed(order),
            det: determinant(&h).embed(order),
            clifford_shape: hessian_has_clifford_shape(&h),
            hessian: embed_matrix(&h, order),
            floer: floer_cohomology_dims(&w, &p)?,
            clifford: cliff.to_json(),
        });
    }
    let r = PotentialReport {
        cutoff: format_rational(cutoff),
        cyclotomic_order: order,
        potential: w,
        critical_points: pts,
        note: "leading-order model: Clifford algebra of the Hessian, higher corrections not modeled",
    };
    let header: Vec<String> = ["k", "y", "value", "det", "clifford_shape"].iter().map(|s| s.to_string()).collect();
    let rows: Vec<Vec<String>> = r
        .critical_points
        .iter()
        .map(|c| vec![c.k.to_string(), format!("({})", c.y.join(", ")), c.value.to_string(), c.det.to_string(), c.clifford_shape.to_string()])
        .collect();
    let text = match format.unwrap_or(Format::Json) {
        Format::Json => json(&r)?,
        Format::Csv => csv_table(&header, &rows)?,
        Format::Md => format!("cutoff {}, cyclotomic order {}\n\n{}", r.cutoff, order, md_table(&header, &rows)),
    };
    Ok(Outcome::ok(text))
}

#[derive(Serialize)]
struct OcReport {
    cutoff: String,
    cyclotomic_order: u32,
    matrix: OCMatrix,
    surjectivity: SurjectivityReport,
}

pub fn oc(args: &PotentialArgs, cutoff: &Rational, order: Option<u32>, format: Option<Format>) -> Result<Outcome, CliError> {
    let (kind, eps) = match args.kind {
        Kind::Pn => {
            if args.eps.is_some() {
                return Err(CliError::Lib(Error::InvalidInput("--eps applies only to --kind exceptional".into())));
            }
            (OcKind::Projective, None)
        }
        Kind::Exceptional => {
            let eps = args.eps.as_deref().ok_or_else(|| Error::InvalidInput("--kind exceptional needs --eps p/q".into()))?;
            (OcKind::Exceptional, Some(rational(eps)?))
        }
    };
    let mut m = oc_matrix(args.n, kind, eps)?;
    let surjectivity = surjectivity_test(&m.entries, cutoff)?;
    let order = resolve_order(m.root_order, order)?;
    m.entries = embed_matrix(&m.entries, order);
    let mut header = vec!["row".to_string()];
    header.extend(m.cols.iter().cloned());
    let rows: Vec<Vec<String>> = m
        .rows
        .iter()
        .zip(&m.entries)
        .map(|(r, row)| std::iter::once(r.clone()).chain(row.iter().map(|x| x.to_string())).collect())
        .collect();
    let text = match format.unwrap_or(Format::Json) {
        Format::Json => json(&OcReport { cutoff: format_rational(cutoff), cyclotomic_order: order, matrix: m, surjectivity })?,
        Format::Csv => csv_table(&header, &rows)?,
        Format::Md => format!(
            "cutoff {}, cyclotomic order {order}\n\n{}\ndet = {}\n\ndet below cutoff = {}\n\nverdict: {:?}\n",
            format_rational(cutoff),
            md_table(&header, &rows),
            surjectivity.det,
            surjectivity.det_below,
            surjectivity.verdict
        ),
    };
    Ok(Outcome::ok(text))
}

#[derive(Serialize)]
struct BlowupJson {
    n: usize,
    eps: String,
    cutoff: String,
    cyclotomic_order: u32,
    total_dim: usize,
    generates: bool,
    report: BlowupReport,
}

pub fn blowup_split(n: usize, eps: &str, cutoff: &Rational, format: Option<Format>) -> Result<Outcome, CliError> {
    let eps = rational(eps)?;
    let model = BlowupModel::projective(n, eps.clone())?;
    let report = blowup_generation(&model, cutoff)?;
    let r = BlowupJson {
        n,
        eps: format_rational(&eps),
        cutoff: format_rational(cutoff),
        cyclotomic_order: lcm_u32(n as u32 + 1, (n as u32).saturating_sub(1).max(1)),
        total_dim: model.total_dim(),
        generates: report.generation.verdict == Generation::Generates,
        report,
    };
    let text = match format.unwrap_or(Format::Json) {
        Format::Json => json(&r)?,
        Format::Md => {
            let g = &r.report.generation;
            let mut s = format!("# Bl_p P^{n}, eps = {}\n\ncutoff {}, cyclotomic order {}\n\n", r.eps, r.cutoff, r.cyclotomic_order);
            let header: Vec<String> = ["summand", "rank"].iter().map(|s| s.to_string()).collect();
            if let Some(split) = &r.report.split {
                let rows: Vec<Vec<String>> = split.summands.iter().map(|x| vec![x.name.clone(), x.rank.to_string()]).collect();
                s.push_str(&md_table(&header, &rows));
            }
            s.push_str(&format!(
                "\ntotal dim {}, old rank {}, exceptional rank {}, orthogonal {}, verdict {:?}\n",
                r.total_dim, g.old_rank, g.exceptional_rank, g.orthogonal, g.verdict
            ));
            if let Some(v) = &r.report.min_extra_valuation {
                s.push_str(&format!("\nminimal extra valuation {}\n", format_rational(v)));
            }
            if let Some(note) = &r.report.note {
                s.push_str(&format!("\n{note}\n"));
            }
            s
        }
        f => return Err(unsupported("blowup split", f)),
    };
    Ok(Outcome { text, passed: r.generates })
}

pub fn verify(seed: u64, hh_length: usize, eps: &str, cutoff: &Rational, format: Option<Format>) -> Result<Outcome, CliError> {
    let cfg = VerifyConfig { seed, cutoff: cutoff.clone(), hh_length, exceptional_eps: rational(eps)? };
    let r: VerifyReport = verify_all(&cfg);
    let passed = r.passed == r.total;
    let text = match format.unwrap_or(Format::Md) {
        Format::Md => r.to_markdown(),
        Format::Json => json(&r)?,
        Format::Csv => {
            let header: Vec<String> = ["id", "criterion", "passed", "detail"].iter().map(|s| s.to_string()).collect();
            let rows: Vec<Vec<String>> = r.criteria.iter().map(|c| vec![c.id.to_string(), c.name.clone(), c.passed.to_string(), c.detail.clone()]).collect();
            csv_table(&header, &rows)?
        }
    };
    Ok(Outcome { text, passed })
}
