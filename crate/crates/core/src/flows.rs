//! Euler equations on 𝔤*, their magnetic deformations on central
//! extensions, and fixed-step RK4 integration with conservation monitors.

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coadjoint::{poisson_matrix, PoissonMatrix};
use crate::exactmath::poly::CompiledPoly;
use crate::exactmath::rat::{self, Rat};
use crate::exactmath::{Poly, RatMatrix};
use crate::liealg::{Cocycle2, LieAlgebra, LieError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FlowError {
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error("metric must be a symmetric {expected}x{expected} matrix")]
    BadMetric { expected: usize },
    #[error("state became non-finite at step {step} (t = {time}); reduce dt")]
    NonFinite { step: usize, time: f64 },
    #[error("dt must be positive and steps at least 1")]
    BadStep,
    #[error("initial state has {got} coordinates, system has {expected}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// ẋ_i = field[i](x). For Euler systems field[i] = {x_i, H}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HamiltonianSystem {
    pub algebra: LieAlgebra,
    pub hamiltonian: Poly,
    pub field: Vec<Poly>,
    /// Charge substituted into a magnetic system, `None` for plain Euler.
    pub charge: Option<Rat>,
}

impl HamiltonianSystem {
    pub fn dim(&self) -> usize {
        self.field.len()
    }

    pub fn compile(&self) -> CompiledField {
        CompiledField {
            components: self.field.iter().map(Poly::compile).collect(),
        }
    }
}

/// Euler equations ẋ_i = {x_i, H} on 𝔤*.
pub fn euler_field(g: &LieAlgebra, h: &Poly) -> HamiltonianSystem {
    let a = poisson_matrix(g);
    euler_field_with(&a, g, h)
}

fn euler_field_with(a: &PoissonMatrix, g: &LieAlgebra, h: &Poly) -> HamiltonianSystem {
    HamiltonianSystem {
        algebra: g.clone(),
        hamiltonian: h.clone(),
        field: (0..g.dim())
            .map(|i| a.bracket_with_coordinate(i, h))
            .collect(),
        charge: None,
    }
}

/// H = ½ Σ_i x_i² on an n-dimensional coalgebra.
pub fn identity_hamiltonian(n: usize) -> Poly {
    let half = rat::rat(1, 2);
    (0..n).fold(Poly::zero(n), |acc, i| {
        &acc + &Poly::var(n, i).pow(2).scale(&half)
    })
}

/// H = ½ Σ g^{ik} x_i x_k for a symmetric coefficient matrix.
pub fn metric_hamiltonian(metric: &RatMatrix) -> Result<Poly, FlowError> {
    let n = metric.rows();
    if metric.cols() != n || !metric.is_symmetric() {
        return Err(FlowError::BadMetric { expected: n });
    }
    let half = rat::rat(1, 2);
    let mut h = Poly::zero(n);
    for i in 0..n {
        for k in 0..n {
            if metric[(i, k)].is_zero() {
                continue;
            }
            let c = &metric[(i, k)] * &half;
            h = &h + &(&Poly::var(n, i) * &Poly::var(n, k)).scale(&c);
        }
    }
    Ok(h)
}

/// A metric Hamiltonian on 𝔤* deformed by a closed magnetic 2-form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MagneticSetup {
    pub algebra: LieAlgebra,
    pub hamiltonian: Poly,
    pub cocycle: Cocycle2,
    pub charge: Rat,
}

impl MagneticSetup {
    pub fn new(
        algebra: LieAlgebra,
        hamiltonian: Poly,
        cocycle: Cocycle2,
        charge: Rat,
    ) -> Result<Self, FlowError> {
        cocycle.check_closed(&algebra)?;
        Ok(MagneticSetup {
            algebra,
            hamiltonian,
            cocycle,
            charge,
        })
    }
}

/// Magnetic field with the charge kept symbolic as x_{n+1}:
/// ẋ_i = {x_i, H}_𝔤 + x_{n+1} Σ_k B_{ik} ∂H/∂x_k, and ẋ_{n+1} = 0.
/// For H = ½Σx_k² the sum is Σ_k B_{ik} x_k.
pub fn magnetic_field_symbolic(
    g: &LieAlgebra,
    h: &Poly,
    b: &Cocycle2,
) -> Result<Vec<Poly>, FlowError> {
    b.check_closed(g)?;
    let n = g.dim();
    let base = euler_field(g, h);
    let charge = Poly::var(n + 1, n);
    let grad: Vec<Poly> = (0..n).map(|k| h.partial(k).extend_vars(n + 1)).collect();
    let mut field: Vec<Poly> = base
        .field
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let lorentz = (0..n).fold(Poly::zero(n + 1), |acc, k| {
                let bik = b.value(i, k);
                if bik.is_zero() {
                    acc
                } else {
                    &acc + &grad[k].scale(&bik)
                }
            });
            &f.extend_vars(n + 1) + &(&charge * &lorentz)
        })
        .collect();
    field.push(Poly::zero(n + 1));
    Ok(field)
}

/// Magnetic equations on 𝔤* with the charge substituted.
pub fn magnetic_field_equations(setup: &MagneticSetup) -> Result<HamiltonianSystem, FlowError> {
    let n = setup.algebra.dim();
    let symbolic = magnetic_field_symbolic(&setup.algebra, &setup.hamiltonian, &setup.cocycle)?;
    let field = symbolic[..n]
        .iter()
        .map(|f| {
            f.substitute(n, &setup.charge)
                .truncate_vars(n)
                .expect("charge substituted")
        })
        .collect();
    Ok(HamiltonianSystem {
        algebra: setup.algebra.clone(),
        hamiltonian: setup.hamiltonian.clone(),
        field,
        charge: Some(setup.charge.clone()),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    /// {x_i, Ĥ} = {x_i, H} on the extension, Ĥ = H + ½x_{n+1}².
    pub sub_riemannian: bool,
    /// Extended field restricted to x_{n+1} = c equals the magnetic field,
    /// identically in c.
    pub magnetic: bool,
    /// ẋ_{n+1} is the zero polynomial.
    pub charge_conserved: bool,
    /// Charges at which (b) was additionally checked after substitution.
    #[serde(with = "rat::serde_rat_vec")]
    pub sampled_charges: Vec<Rat>,
}

impl EquivalenceReport {
    pub fn all_pass(&self) -> bool {
        self.sub_riemannian && self.magnetic && self.charge_conserved
    }
}

/// Symbolic comparison of the extended Euler flow on 𝔤_B* with the
/// magnetic flow on 𝔤*.
pub fn equivalence_checks(
    g: &LieAlgebra,
    b: &Cocycle2,
    h: &Poly,
) -> Result<EquivalenceReport, FlowError> {
    let n = g.dim();
    let ext = g.central_extension(b)?;
    let a = poisson_matrix(&ext);
    let h_ext = h.extend_vars(n + 1);
    let h_hat = &h_ext + &Poly::var(n + 1, n).pow(2).scale(&rat::rat(1, 2));
    let plain = euler_field_with(&a, &ext, &h_ext);
    let hat = euler_field_with(&a, &ext, &h_hat);

    let sub_riemannian = plain.field == hat.field;
    let charge_conserved = hat.field[n].is_zero();
    let symbolic = magnetic_field_symbolic(g, h, b)?;
    let mut magnetic = hat.field[..n] == symbolic[..n];

    let sampled_charges = vec![rat::int(0), rat::int(1), rat::rat(-3, 2), rat::int(7)];
    for c in &sampled_charges {
        let setup = MagneticSetup::new(g.clone(), h.clone(), b.clone(), c.clone())?;
        let mag = magnetic_field_equations(&setup)?;
        let restricted: Vec<Poly> = hat.field[..n]
            .iter()
            .map(|f| {
                f.substitute(n, c)
                    .truncate_vars(n)
                    .expect("charge substituted")
            })
            .collect();
        magnetic &= restricted == mag.field;
    }
    Ok(EquivalenceReport {
        sub_riemannian,
        magnetic,
        charge_conserved,
        sampled_charges,
    })
}

/// Field compiled for f64 evaluation.
#[derive(Clone, Debug)]
pub struct CompiledField {
    components: Vec<CompiledPoly>,
}

impl CompiledField {
    pub fn eval_into(&self, x: &[f64], out: &mut [f64]) {
        for (o, c) in out.iter_mut().zip(&self.components) {
            *o = c.eval(x);
        }
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }
}

#[derive(Clone, Debug)]
pub struct Monitor {
    pub name: String,
    pub poly: Poly,
}

impl Monitor {
    pub fn new(name: impl Into<String>, poly: Poly) -> Self {
        Monitor {
            name: name.into(),
            poly,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonitorDrift {
    pub name: String,
    pub initial: f64,
    /// max_t |m(t) − m(0)| / |m(0)|, or the absolute drift when |m(0)| ≤ 1e-12.
    pub max_drift: f64,
    pub relative: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub monitor_names: Vec<String>,
    /// monitor_values[step][monitor]
    pub monitor_values: Vec<Vec<f64>>,
}

const RELATIVE_FLOOR: f64 = 1e-12;

impl Trajectory {
    pub fn final_state(&self) -> &[f64] {
        self.states.last().expect("at least the initial state")
    }

    pub fn drift_summary(&self) -> Vec<MonitorDrift> {
        self.monitor_names
            .iter()
            .enumerate()
            .map(|(j, name)| {
                let m0 = self.monitor_values[0][j];
                let relative = m0.abs() > RELATIVE_FLOOR;
                let scale = if relative { m0.abs() } else { 1.0 };
                let max_drift = self
                    .monitor_values
                    .iter()
                    .map(|row| (row[j] - m0).abs() / scale)
                    .fold(0.0, f64::max);
                MonitorDrift {
                    name: name.clone(),
                    initial: m0,
                    max_drift,
                    relative,
                }
            })
            .collect()
    }

    pub fn max_drift(&self) -> f64 {
        self.drift_summary()
            .iter()
            .map(|d| d.max_drift)
            .fold(0.0, f64::max)
    }

    /// CSV with columns t, x_1..x_n, then one column per monitor.
    pub fn to_csv(&self) -> String {
        let n = self.states.first().map_or(0, Vec::len);
        let mut out = String::from("t");
        for i in 1..=n {
            out.push_str(&format!(",x_{i}"));
        }
        for name in &self.monitor_names {
            out.push(',');
            out.push_str(name);
        }
        out.push('\n');
        for ((t, x), m) in self
            .times
            .iter()
            .zip(&self.states)
            .zip(&self.monitor_values)
        {
            out.push_str(&format!("{t:e}"));
            for v in x.iter().chain(m) {
                out.push_str(&format!(",{v:e}"));
            }
            out.push('\n');
        }
        out
    }
}

/// Classical RK4 with fixed step, logging every step.
pub fn integrate(
    system: &HamiltonianSystem,
    x0: &[f64],
    dt: f64,
    steps: usize,
    monitors: &[Monitor],
) -> Result<Trajectory, FlowError> {
    integrate_field(&system.compile(), x0, dt, steps, monitors)
}

pub fn integrate_field(
    field: &CompiledField,
    x0: &[f64],
    dt: f64,
    steps: usize,
    monitors: &[Monitor],
) -> Result<Trajectory, FlowError> {
    let n = field.dim();
    if dt.is_nan() || dt <= 0.0 || steps == 0 {
        return Err(FlowError::BadStep);
    }
    if x0.len() != n {
        return Err(FlowError::DimensionMismatch {
            expected: n,
            got: x0.len(),
        });
    }
    let compiled: Vec<CompiledPoly> = monitors.iter().map(|m| m.poly.compile()).collect();
    let observe = |x: &[f64]| compiled.iter().map(|c| c.eval(x)).collect::<Vec<_>>();

    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    let mut values = Vec::with_capacity(steps + 1);
    let mut x = x0.to_vec();
    times.push(0.0);
    values.push(observe(&x));
    states.push(x.clone());

    let (mut k1, mut k2, mut k3, mut k4) = (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    let mut tmp = vec![0.0; n];
    for step in 1..=steps {
        field.eval_into(&x, &mut k1);
        for i in 0..n {
            tmp[i] = x[i] + 0.5 * dt * k1[i];
        }
        field.eval_into(&tmp, &mut k2);
        for i in 0..n {
            tmp[i] = x[i] + 0.5 * dt * k2[i];
        }
        field.eval_into(&tmp, &mut k3);
        for i in 0..n {
            tmp[i] = x[i] + dt * k3[i];
        }
        field.eval_into(&tmp, &mut k4);
        for i in 0..n {
            x[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        let t = step as f64 * dt;
        if x.iter().any(|v| !v.is_finite()) {
            return Err(FlowError::NonFinite { step, time: t });
        }
        times.push(t);
        values.push(observe(&x));
        states.push(x.clone());
    }
    Ok(Trajectory {
        times,
        states,
        monitor_names: monitors.iter().map(|m| m.name.clone()).collect(),
        monitor_values: values,
    })
}

/// The system with field negated, for time-reversal checks.
pub fn reversed(system: &HamiltonianSystem) -> HamiltonianSystem {
    HamiltonianSystem {
        field: system.field.iter().map(|f| -f).collect(),
        ..system.clone()
    }
}

/// Standard monitors: H followed by each Casimir generator.
pub fn standard_monitors(h: &Poly, casimirs: &[Poly]) -> Vec<Monitor> {
    let mut m = vec![Monitor::new("H", h.clone())];
    m.extend(
        casimirs
            .iter()
            .enumerate()
            .map(|(i, c)| Monitor::new(format!("C{}", i + 1), c.clone())),
    );
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rat::int;

    fn p(s: &str, n: usize) -> Poly {
        Poly::parse(s, n).unwrap()
    }

    #[test]
    fn euler_v4() {
        let g = LieAlgebra::v_family(4);
        let s = euler_field(&g, &identity_hamiltonian(4));
        assert_eq!(s.field[0], p("x2*x3 + 2*x3*x4", 4));
        assert_eq!(s.field[1], p("-x1*x3", 4));
        assert_eq!(s.field[2], p("-2*x1*x4", 4));
        assert!(s.field[3].is_zero());
    }

    #[test]
    fn euler_heisenberg_and_casimir() {
        let s = euler_field(&LieAlgebra::heisenberg(), &identity_hamiltonian(3));
        assert_eq!(s.field, vec![p("x2*x3", 3), p("-x1*x3", 3), Poly::zero(3)]);
        let f4 = p("x2*x4 - 1/4*x3^2", 4);
        let z = euler_field(&LieAlgebra::v_family(4), &f4);
        assert!(z.field.iter().all(Poly::is_zero));
    }

    #[test]
    fn metric_validation() {
        let m = RatMatrix::from_rows(vec![vec![int(2), int(1)], vec![int(1), int(3)]]).unwrap();
        assert_eq!(
            metric_hamiltonian(&m).unwrap(),
            p("x1^2 + x1*x2 + 3/2*x2^2", 2)
        );
        let bad = RatMatrix::from_rows(vec![vec![int(2), int(1)], vec![int(0), int(3)]]).unwrap();
        assert!(matches!(
            metric_hamiltonian(&bad),
            Err(FlowError::BadMetric { .. })
        ));
        assert_eq!(
            metric_hamiltonian(&RatMatrix::identity(3)).unwrap(),
            identity_hamiltonian(3)
        );
    }

    #[test]
    fn planar_magnetic_rotation() {
        let b = Cocycle2::from_pairs(2, &[(0, 1, int(1))]);
        let setup =
            MagneticSetup::new(LieAlgebra::abelian(2), identity_hamiltonian(2), b, int(3)).unwrap();
        let s = magnetic_field_equations(&setup).unwrap();
        assert_eq!(s.field, vec![p("3*x2", 2), p("-3*x1", 2)]);
    }

    #[test]
    fn zero_charge_is_plain_euler() {
        let g = LieAlgebra::v_family(5);
        let h = identity_hamiltonian(5);
        let setup = MagneticSetup::new(g.clone(), h.clone(), Cocycle2::v_tower(5), int(0)).unwrap();
        assert_eq!(
            magnetic_field_equations(&setup).unwrap().field,
            euler_field(&g, &h).field
        );
    }

    #[test]
    fn non_closed_cocycle_rejected() {
        let b = Cocycle2::from_pairs(4, &[(1, 3, int(1))]);
        let r = MagneticSetup::new(LieAlgebra::v_family(4), identity_hamiltonian(4), b, int(1));
        assert!(matches!(r, Err(FlowError::Lie(LieError::NotClosed(_)))));
    }

    #[test]
    fn v3_to_v4_matches_extension() {
        let g = LieAlgebra::v_family(3);
        let h = identity_hamiltonian(3);
        let report = equivalence_checks(&g, &Cocycle2::v_tower(3), &h).unwrap();
        assert!(report.all_pass(), "{report:?}");
        // Explicit: magnetic V3 flow with charge c equals Euler on V4 at x4 = c.
        let c = rat::rat(5, 2);
        let setup = MagneticSetup::new(g, h, Cocycle2::v_tower(3), c.clone()).unwrap();
        let mag = magnetic_field_equations(&setup).unwrap();
        let ext = euler_field(&LieAlgebra::v_family(4), &identity_hamiltonian(4));
        for i in 0..3 {
            assert_eq!(
                ext.field[i].substitute(3, &c).truncate_vars(3).unwrap(),
                mag.field[i]
            );
        }
    }

    #[test]
    fn zero_cocycle_equivalence() {
        let g = LieAlgebra::q_family(4);
        let r = equivalence_checks(&g, &Cocycle2::zero(4), &identity_hamiltonian(4)).unwrap();
        assert!(r.all_pass());
    }

    #[test]
    fn heisenberg_rotation_accuracy() {
        let s = euler_field(&LieAlgebra::heisenberg(), &identity_hamiltonian(3));
        let mons = vec![
            Monitor::new("H", identity_hamiltonian(3)),
            Monitor::new("x3", p("x3", 3)),
        ];
        let tr = integrate(&s, &[1.0, 0.0, 1.0], 1e-3, 10_000, &mons).unwrap();
        assert!(tr.max_drift() <= 1e-9);
        // x3 = 1: (x1, x2) rotates clockwise with unit speed.
        let t = 10.0f64;
        let end = tr.final_state();
        assert!((end[0] - t.cos()).abs() < 1e-9);
        assert!((end[1] + t.sin()).abs() < 1e-9);
    }

    #[test]
    fn zero_field_constant() {
        let s = euler_field(&LieAlgebra::abelian(3), &identity_hamiltonian(3));
        let tr = integrate(&s, &[1.0, -2.0, 0.5], 0.1, 50, &[]).unwrap();
        assert!(tr.states.iter().all(|x| x == &vec![1.0, -2.0, 0.5]));
    }

    #[test]
    fn time_reversal() {
        let s = euler_field(&LieAlgebra::v_family(6), &identity_hamiltonian(6));
        let x0 = [1.0, 0.0, 0.0, 1.0, 0.0, 2.0];
        let fwd = integrate(&s, &x0, 1e-3, 2000, &[]).unwrap();
        let back = integrate(&reversed(&s), fwd.final_state(), 1e-3, 2000, &[]).unwrap();
        for (a, b) in back.final_state().iter().zip(x0) {
            assert!((a - b).abs() < 1e-6);
        }
    }

    #[test]
    fn blow_up_is_reported() {
        // ẋ = x² leaves the representable range in finite time.
        let g = LieAlgebra::abelian(1);
        let s = HamiltonianSystem {
            algebra: g,
            hamiltonian: Poly::zero(1),
            field: vec![p("x1^2", 1)],
            charge: None,
        };
        assert!(matches!(
            integrate(&s, &[1.0], 0.5, 100, &[]),
            Err(FlowError::NonFinite { .. })
        ));
        assert_eq!(
            integrate(&s, &[1.0], 0.0, 1, &[]).unwrap_err(),
            FlowError::BadStep
        );
    }

    #[test]
    fn csv_layout() {
        let s = euler_field(&LieAlgebra::heisenberg(), &identity_hamiltonian(3));
        let tr = integrate(
            &s,
            &[1.0, 0.0, 1.0],
            0.5,
            2,
            &[Monitor::new("H", identity_hamiltonian(3))],
        )
        .unwrap();
        let csv = tr.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "t,x_1,x_2,x_3,H");
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[1].split(',').count(), 5);
    }
}
