use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use serde::Serialize;

use nilflow::coadjoint::{
    casimir_basis_with_degree, classify_orbit, generic_rank, generic_rank_symbolic, SamplingConfig,
};
use nilflow::exactmath::rat::{self, format_rat, Rat};
use nilflow::exactmath::{ExtForm, RatMatrix};
use nilflow::flows::{
    equivalence_checks, euler_field, identity_hamiltonian, integrate, magnetic_field_equations,
    magnetic_field_symbolic, metric_hamiltonian, standard_monitors, EquivalenceReport,
    MagneticSetup, Monitor, MonitorDrift,
};
use nilflow::forms::{
    ce_differential, check_contact, check_d_squared, check_symplectic, cohomology_dims,
    v_symplectic_form, ContactCertificate, SymplecticCertificate,
};
use nilflow::group::{
    group_axioms_check, lattice_closure_report, AxiomReport, LatticeReport, NilpotentGroup,
};
use nilflow::liealg::{invariant_profile, AlgebraFile, Cocycle2, LieAlgebra, Profile};

use crate::args::*;
use crate::report::Report;
use crate::CliError;

type Result<T> = std::result::Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn compute(e: impl Into<anyhow::Error>) -> CliError {
    CliError::Compute(e.into())
}

pub fn load_algebra(src: &AlgebraSource) -> Result<LieAlgebra> {
    match (&src.family, src.dim, &src.algebra) {
        (Some(f), Some(n), None) => Ok(LieAlgebra::family(*f, n)),
        (None, None, Some(path)) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))
                .map_err(CliError::Compute)?;
            LieAlgebra::from_json(&text).map_err(compute)
        }
        _ => Err(usage(
            "specify either --family with --dim, or --algebra FILE",
        )),
    }
}

fn parse_rats(s: &str, what: &str) -> Result<Vec<Rat>> {
    rat::parse_rat_list(s).map_err(|e| usage(format!("{what}: {e}")))
}

fn parse_floats(s: &str, what: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|e| usage(format!("{what}: `{t}`: {e}")))
        })
        .collect()
}

fn check_len<T>(v: &[T], n: usize, what: &str) -> Result<()> {
    if v.len() == n {
        Ok(())
    } else {
        Err(usage(format!(
            "{what} has {} coordinates, algebra has dimension {n}",
            v.len()
        )))
    }
}

/// "i,j,c;i,j,c" with 1-based indices.
pub fn parse_cocycle(s: &str, n: usize) -> Result<Cocycle2> {
    let mut pairs = Vec::new();
    for part in s.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let fields: Vec<&str> = part.split(',').map(str::trim).collect();
        let [i, j, c] = fields[..] else {
            return Err(usage(format!("cocycle entry `{part}` must be i,j,c")));
        };
        let idx = |t: &str| -> Result<usize> {
            match t.parse::<usize>() {
                Ok(k) if (1..=n).contains(&k) => Ok(k - 1),
                _ => Err(usage(format!("cocycle index `{t}` not in 1..={n}"))),
            }
        };
        let c = rat::parse_rat(c).map_err(|e| usage(format!("cocycle value: {e}")))?;
        let (i, j) = (idx(i)?, idx(j)?);
        if i == j {
            return Err(usage(format!(
                "cocycle entry `{part}` pairs an index with itself"
            )));
        }
        pairs.push((i, j, c));
    }
    Ok(Cocycle2::from_pairs(n, &pairs))
}

fn parse_form(s: &str, n: usize) -> Result<ExtForm> {
    ExtForm::parse(s, n).map_err(|e| usage(format!("form `{s}`: {e}")))
}

fn rat_strings(v: &[Rat]) -> Vec<String> {
    v.iter().map(format_rat).collect()
}

fn emit<T: Serialize>(body: T, seed: u64, algebras: &[&LieAlgebra]) -> Result<()> {
    emit_to(body, seed, algebras, None)
}

/// Prints the report and, with `out`, writes the same bytes to that file.
pub fn emit_to<T: Serialize>(
    body: T,
    seed: u64,
    algebras: &[&LieAlgebra],
    out: Option<&Path>,
) -> Result<()> {
    let json = Report::new(body, seed, algebras).to_json();
    if let Some(path) = out {
        fs::write(path, format!("{json}\n"))
            .with_context(|| format!("writing {}", path.display()))
            .map_err(CliError::Compute)?;
    }
    print_stdout(&format!("{json}\n"))
}

/// A closed pipe downstream (`| head`) is not an error.
fn print_stdout(text: &str) -> Result<()> {
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::Compute(
            anyhow::Error::new(e).context("writing stdout"),
        )),
        _ => Ok(()),
    }
}

#[derive(Serialize)]
struct AlgebraBody {
    dim: usize,
    family: Option<String>,
    algebra: AlgebraFile,
    lower_central_dims: Vec<usize>,
    derived_dims: Vec<usize>,
    nilpotency_class: Option<usize>,
    solvable_step: Option<usize>,
    center_dim: usize,
    is_filiform: bool,
    is_n_graded: bool,
    integer_structure_constants: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    profile: Option<Profile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    written_to: Option<PathBuf>,
}

pub fn algebra(cmd: &AlgebraCmd, seed: u64) -> Result<()> {
    let mut g = load_algebra(&cmd.source)?;
    if let Some(triples) = &cmd.extend {
        let alpha = parse_cocycle(triples, g.dim())?;
        g = g.central_extension(&alpha).map_err(compute)?;
    }
    if let Some(path) = &cmd.out {
        fs::write(path, g.to_json())
            .with_context(|| format!("writing {}", path.display()))
            .map_err(CliError::Compute)?;
    }
    let body = AlgebraBody {
        dim: g.dim(),
        family: g.recognize_family().map(|f| f.to_string()),
        algebra: g.to_file(),
        lower_central_dims: g.lower_central_series().iter().map(|s| s.dim()).collect(),
        derived_dims: g.derived_series().iter().map(|s| s.dim()).collect(),
        nilpotency_class: g.nilpotency_class(),
        solvable_step: g.solvable_step(),
        center_dim: g.center().dim(),
        is_filiform: g.is_filiform(),
        is_n_graded: g.is_n_graded(),
        integer_structure_constants: g.has_integer_structure_constants(),
        profile: cmd.profile.then(|| invariant_profile(&g)),
        written_to: cmd.out.clone(),
    };
    emit(body, seed, &[&g])
}

#[derive(Serialize)]
struct CasimirBody {
    generators: Vec<String>,
    nu: usize,
    generic_rank: usize,
    method: nilflow::coadjoint::CasimirMethod,
    max_degree: u32,
}

pub fn casimir(cmd: &CasimirCmd, seed: u64) -> Result<()> {
    let g = load_algebra(&cmd.source)?;
    let cfg = SamplingConfig::with_seed(seed);
    let set = casimir_basis_with_degree(&g, &cfg, cmd.max_degree).map_err(compute)?;
    let generators: Vec<String> = set.generators.iter().map(ToString::to_string).collect();
    if cmd.format == OutputFormat::Text {
        return print_stdout(
            &generators
                .iter()
                .map(|s| format!("{s}\n"))
                .collect::<String>(),
        );
    }
    emit(
        CasimirBody {
            generators,
            nu: set.nu,
            generic_rank: set.generic_rank,
            method: set.method,
            max_degree: set.max_degree,
        },
        seed,
        &[&g],
    )
}

#[derive(Serialize)]
struct RankBody {
    rank: usize,
    nu: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<CertificateBody>,
}

#[derive(Serialize)]
struct CertificateBody {
    certified: bool,
    lower_bound: usize,
    upper_bound: usize,
    minor_rows: Vec<usize>,
    minor_cols: Vec<usize>,
    minor_determinant: String,
}

pub fn rank(cmd: &RankCmd, seed: u64) -> Result<()> {
    let g = load_algebra(&cmd.source)?;
    let cfg = SamplingConfig::with_seed(seed);
    let body = if cmd.symbolic {
        let c = generic_rank_symbolic(&g, &cfg);
        RankBody {
            rank: c.sampled.rank,
            nu: c.sampled.nu,
            certificate: Some(CertificateBody {
                certified: c.certified(),
                lower_bound: c.lower_bound(),
                upper_bound: c.upper_bound,
                minor_rows: c.minor_rows.iter().map(|i| i + 1).collect(),
                minor_cols: c.minor_cols.iter().map(|i| i + 1).collect(),
                minor_determinant: c.minor_determinant.to_string(),
            }),
        }
    } else {
        let r = generic_rank(&g, &cfg);
        RankBody {
            rank: r.rank,
            nu: r.nu,
            certificate: None,
        }
    };
    emit(body, seed, &[&g])
}

#[derive(Serialize)]
struct OrbitEquationBody {
    poly: String,
    value: String,
}

#[derive(Serialize)]
struct OrbitBody {
    base_point: Vec<String>,
    dimension: usize,
    depth: usize,
    stratum_dim: usize,
    equations: Vec<OrbitEquationBody>,
}

pub fn orbit(cmd: &OrbitCmd, seed: u64) -> Result<()> {
    let g = load_algebra(&cmd.source)?;
    let p = parse_rats(&cmd.point, "--point")?;
    check_len(&p, g.dim(), "--point")?;
    let o = classify_orbit(&g, &p).map_err(compute)?;
    let body = OrbitBody {
        base_point: rat_strings(&o.base_point),
        dimension: o.dimension,
        depth: o.depth,
        stratum_dim: o.stratum_dim,
        equations: o
            .equations
            .iter()
            .map(|e| OrbitEquationBody {
                poly: e.poly.to_string(),
                value: format_rat(&e.value),
            })
            .collect(),
    };
    emit(body, seed, &[&g])
}

#[derive(Serialize)]
struct RunBody {
    #[serde(skip_serializing_if = "Option::is_none")]
    charge: Option<String>,
    final_state: Vec<f64>,
    monitors: Vec<MonitorDrift>,
    #[serde(skip_serializing_if = "Option::is_none")]
    csv: Option<PathBuf>,
}

#[derive(Serialize)]
struct FlowBody {
    system: &'static str,
    dim: usize,
    dt: f64,
    steps: usize,
    hamiltonian: String,
    /// For magnetic systems the charge appears as `charge_variable`.
    field: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    charge_variable: Option<String>,
    runs: Vec<RunBody>,
    #[serde(skip_serializing_if = "Option::is_none")]
    equivalence: Option<EquivalenceReport>,
}

fn indexed_path(path: &Path, k: usize, total: usize) -> PathBuf {
    if total == 1 {
        return path.to_path_buf();
    }
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("traj");
    let name = match path.extension().and_then(|s| s.to_str()) {
        Some(ext) => format!("{stem}_c{k}.{ext}"),
        None => format!("{stem}_c{k}"),
    };
    path.with_file_name(name)
}

fn load_metric(source: &str, n: usize) -> Result<nilflow::exactmath::Poly> {
    if source == "identity" {
        return Ok(identity_hamiltonian(n));
    }
    let text = fs::read_to_string(source)
        .with_context(|| format!("reading metric {source}"))
        .map_err(CliError::Compute)?;
    let rows: Vec<Vec<String>> = serde_json::from_str(&text)
        .with_context(|| {
            format!("metric {source} must be a JSON array of rows of rational strings")
        })
        .map_err(CliError::Compute)?;
    let rows: Vec<Vec<Rat>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|c| rat::parse_rat(c))
                .collect::<std::result::Result<_, _>>()
        })
        .collect::<std::result::Result<_, _>>()
        .map_err(compute)?;
    let m = RatMatrix::from_rows(rows).map_err(compute)?;
    if m.rows() != n {
        return Err(compute(anyhow!(
            "metric is {}x{}, algebra has dimension {n}",
            m.rows(),
            m.cols()
        )));
    }
    metric_hamiltonian(&m).map_err(compute)
}

pub fn flow(cmd: &FlowCmd, seed: u64) -> Result<()> {
    let g = load_algebra(&cmd.source)?;
    let n = g.dim();
    let x0 = parse_floats(&cmd.x0, "--x0")?;
    check_len(&x0, n, "--x0")?;
    if cmd.dt.is_nan() || cmd.dt <= 0.0 || cmd.steps == 0 {
        return Err(usage("--dt must be positive and --steps at least 1"));
    }
    let h = load_metric(&cmd.metric, n)?;
    let monitors: Vec<Monitor> = match cmd.monitor {
        MonitorSet::None => Vec::new(),
        MonitorSet::H => vec![Monitor::new("H", h.clone())],
        MonitorSet::Casimirs => {
            let set = nilflow::coadjoint::casimir_basis(&g, &SamplingConfig::with_seed(seed))
                .map_err(compute)?;
            standard_monitors(&h, &set.generators)
        }
    };
    let cocycle = cmd
        .cocycle
        .as_deref()
        .map(|s| parse_cocycle(s, n))
        .transpose()?;

    let (system_kind, systems) = match &cocycle {
        None => ("euler", vec![euler_field(&g, &h)]),
        Some(b) => {
            let charges = match &cmd.charges {
                Some(s) => parse_rats(s, "--charges")?,
                None => vec![Rat::from_integer(1.into())],
            };
            let mut systems = Vec::new();
            for c in charges {
                let setup =
                    MagneticSetup::new(g.clone(), h.clone(), b.clone(), c).map_err(compute)?;
                systems.push(magnetic_field_equations(&setup).map_err(compute)?);
            }
            ("magnetic", systems)
        }
    };
    let equivalence = match (&cocycle, cmd.check_equivalence) {
        (Some(b), true) => Some(equivalence_checks(&g, b, &h).map_err(compute)?),
        _ => None,
    };

    // Independent trajectories per charge run in parallel.
    let total = systems.len();
    let results: Vec<_> = std::thread::scope(|scope| {
        let handles: Vec<_> = systems
            .iter()
            .map(|sys| scope.spawn(|| integrate(sys, &x0, cmd.dt, cmd.steps, &monitors)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("integration thread"))
            .collect()
    });
    let mut runs = Vec::new();
    for (k, (sys, tr)) in systems.iter().zip(results).enumerate() {
        let tr = tr.map_err(compute)?;
        let csv = match &cmd.out {
            Some(path) => {
                let p = indexed_path(path, k, total);
                fs::write(&p, tr.to_csv())
                    .with_context(|| format!("writing {}", p.display()))
                    .map_err(CliError::Compute)?;
                Some(p)
            }
            None => None,
        };
        runs.push(RunBody {
            charge: sys.charge.as_ref().map(format_rat),
            final_state: tr.final_state().to_vec(),
            monitors: tr.drift_summary(),
            csv,
        });
    }
    let (field, charge_variable) = match &cocycle {
        None => (
            systems[0].field.iter().map(ToString::to_string).collect(),
            None,
        ),
        Some(b) => {
            let symbolic = magnetic_field_symbolic(&g, &h, b).map_err(compute)?;
            (
                symbolic[..n].iter().map(ToString::to_string).collect(),
                Some(format!("x{}", n + 1)),
            )
        }
    };
    let body = FlowBody {
        system: system_kind,
        dim: n,
        dt: cmd.dt,
        steps: cmd.steps,
        hamiltonian: h.to_string(),
        field,
        charge_variable,
        runs,
        equivalence,
    };
    emit(body, seed, &[&g])
}

#[derive(Serialize, Default)]
struct FormsBody {
    #[serde(skip_serializing_if = "Option::is_none")]
    differential: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    symplectic: Option<SymplecticCertificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    contact: Option<ContactCertificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    betti: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    d_squared_zero: Option<bool>,
}

pub fn forms(cmd: &FormsCmd, seed: u64) -> Result<()> {
    let g = load_algebra(&cmd.source)?;
    let n = g.dim();
    let mut body = FormsBody::default();
    let checks = |c| cmd.check.contains(&c);
    let symplectic = cmd
        .symplectic
        .as_deref()
        .or(checks(FormsCheck::Symplectic).then_some("standard"));
    let contact = cmd
        .contact
        .as_deref()
        .or(checks(FormsCheck::Contact).then_some("standard"));
    let betti = cmd.betti.or(checks(FormsCheck::Cohomology).then_some(n));
    if let Some(s) = &cmd.differential {
        body.differential = Some(ce_differential(&g, &parse_form(s, n)?).to_string());
    }
    if let Some(s) = symplectic {
        let omega = if s == "standard" {
            if n % 2 != 0 || n < 2 {
                return Err(usage("the standard symplectic form needs even dimension"));
            }
            v_symplectic_form(n / 2)
        } else {
            parse_form(s, n)?
        };
        if omega.degree() != 2 {
            return Err(usage("--symplectic expects a 2-form"));
        }
        body.symplectic = Some(check_symplectic(&g, &omega));
    }
    if let Some(s) = contact {
        let omega = if s == "standard" {
            if n == 0 {
                return Err(usage("empty algebra"));
            }
            ExtForm::basis_one_form(n, n - 1)
        } else {
            parse_form(s, n)?
        };
        if omega.degree() != 1 {
            return Err(usage("--contact expects a 1-form"));
        }
        body.contact = Some(check_contact(&g, &omega));
    }
    if let Some(p) = betti {
        body.betti = Some(cohomology_dims(&g, p));
    }
    if cmd.check_d2 {
        body.d_squared_zero = Some(check_d_squared(&g));
    }
    emit_to(body, seed, &[&g], cmd.out.as_deref())
}

#[derive(Serialize, Default)]
struct GroupBody {
    #[serde(skip_serializing_if = "Option::is_none")]
    product: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    axioms: Option<AxiomReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lattice: Option<LatticeReport>,
}

pub fn group(cmd: &GroupCmd, seed: u64) -> Result<()> {
    let g = load_algebra(&cmd.source)?;
    let grp = NilpotentGroup::new(&g).map_err(compute)?;
    let mut body = GroupBody::default();
    if let Some(uv) = &cmd.mul {
        let u = parse_rats(&uv[0], "first factor")?;
        let v = parse_rats(&uv[1], "second factor")?;
        check_len(&u, g.dim(), "first factor")?;
        check_len(&v, g.dim(), "second factor")?;
        body.product = Some(rat_strings(&grp.mul(&u, &v).map_err(compute)?));
    }
    if let Some(k) = cmd.axioms {
        body.axioms = Some(group_axioms_check(&g, k, seed).map_err(compute)?);
    }
    if let Some(r) = cmd.lattice {
        if r < 0 {
            return Err(usage("--lattice radius must be non-negative"));
        }
        body.lattice = Some(lattice_closure_report(&g, r).map_err(compute)?);
    }
    emit(body, seed, &[&g])
}
