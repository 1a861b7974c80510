//! Forward spherical transform by quadrature, inversion against the
//! Plancherel weight, and spectral multipliers realized as convolution
//! kernels.

use crate::action::ActionKind;
use crate::error::{Error, Result};
use crate::heisenberg::{AnalyticProfile, DecayClass, GroupPoint, InvariantFunction};
use crate::invariant::IrredLabel;
use crate::jet::Jet;
use crate::quad::{GaussLegendre, Rule};
use crate::spectrum::SpectrumModel;
use crate::special::{bessel_profile, binomial, laguerre_weighted_sweep};
use num_complex::Complex64;
use rayon::prelude::*;
use std::sync::Arc;

/// Quadrature sizes for the transform pair.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct QuadratureSpec {
    pub t_nodes: usize,
    pub t_max: f64,
    pub r_nodes: usize,
    pub r_max: f64,
    pub lambda_nodes_per_half: usize,
    /// extra panel break near 0 to resolve the small-lambda boundary layer
    pub lambda_inner_panel: Option<f64>,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            t_nodes: 160,
            t_max: 14.0,
            r_nodes: 160,
            r_max: 9.0,
            lambda_nodes_per_half: 160,
            lambda_inner_panel: None,
        }
    }
}

impl QuadratureSpec {
    pub fn lambda_rule(&self, model: &SpectrumModel) -> Rule {
        let gl = GaussLegendre::new(self.lambda_nodes_per_half);
        let mut points = vec![];
        match self.lambda_inner_panel {
            None => {
                points.extend(gl.scaled(model.lambda_min, 0.0));
                points.extend(gl.scaled(0.0, model.lambda_max));
            }
            Some(b) => {
                points.extend(gl.scaled(model.lambda_min, -b));
                points.extend(gl.scaled(-b, 0.0));
                points.extend(gl.scaled(0.0, b));
                points.extend(gl.scaled(b, model.lambda_max));
            }
        }
        Rule { points }
    }

    pub fn t_rule(&self) -> Rule {
        Rule::gauss(self.t_nodes, -self.t_max, self.t_max)
    }

    pub fn r_rule(&self) -> Rule {
        Rule::gauss(self.r_nodes, 0.0, self.r_max)
    }
}

fn gamma_int(n: usize) -> f64 {
    let mut g = 1.0;
    for i in 1..n {
        g *= i as f64;
    }
    g
}

/// The Plancherel constant (2 pi)^{-(n+1)}; the calibration procedure in
/// `calibrate_plancherel` reproduces it from the delta test on a converged
/// model, and the frozen value is what inversion uses.
pub fn plancherel_constant(n: usize) -> f64 {
    (2.0 * std::f64::consts::PI).powi(-(n as i32) - 1)
}

/// Delta-test calibration of the Plancherel constant: demand
/// inverse(forward(gaussian(1,1)))(0,0) = 1. The label truncation leaves a
/// deficit proportional to 1/alpha_cut, so the raw ratio at two cuts is
/// Richardson-extrapolated in 1/(alpha_cut + 1). Documented procedure; the
/// frozen `plancherel_constant` is what this reproduces.
pub fn calibrate_plancherel(action: crate::action::ActionDescriptor) -> Result<f64> {
    let f = InvariantFunction::parse("gaussian(1,1)", action)?;
    let mut quad = QuadratureSpec::default();
    quad.lambda_nodes_per_half = 180;
    quad.lambda_inner_panel = Some(0.5);
    let run = |cut: usize| -> Result<f64> {
        let gs = Arc::new(crate::invariant::build_generator_system(action, cut)?);
        let model = SpectrumModel::new(gs, cut, (-10.0, 10.0));
        let table = gelfand_forward(&f, &model, &quad)?;
        let reduced = action.reduced_dim();
        let r_axes: Vec<Vec<f64>> = (0..reduced).map(|_| vec![0.0]).collect();
        let vals = inverse_on_grid(&table, &[0.0], &r_axes);
        Ok(vals[0].re)
    };
    let (k1, k2) = (384usize, 768usize);
    let v1 = run(k1)?;
    let v2 = run(k2)?;
    let (x1, x2) = (1.0 / (k1 + 1) as f64, 1.0 / (k2 + 1) as f64);
    let extrapolated = (v2 * x1 - v1 * x2) / (x1 - x2);
    // f(0,0) = 1, so the calibrated constant divides out the measured value
    Ok(plancherel_constant(action.n) / extrapolated)
}

/// Sampled Gelfand transform on the truncated spectrum; principal values are
/// stored on the lambda quadrature nodes (so the table integrates), and the
/// degenerate part on the model's parameter grid.
#[derive(Clone)]
pub struct GelfandTable {
    pub model: SpectrumModel,
    pub lambda_points: Vec<(f64, f64)>,
    pub labels: Vec<IrredLabel>,
    pub dims: Vec<f64>,
    /// values[lambda index][label index]
    pub values: Vec<Vec<Complex64>>,
    /// (w radii, value) on the degenerate piece
    pub degenerate: Vec<(Vec<f64>, Complex64)>,
}

impl GelfandTable {
    pub fn sup_abs(&self) -> f64 {
        let p = self
            .values
            .iter()
            .flat_map(|row| row.iter().map(|v| v.norm()))
            .fold(0.0_f64, f64::max);
        self.degenerate.iter().map(|(_, v)| v.norm()).fold(p, f64::max)
    }

    /// Pointwise product with a spectral symbol m(lambda, xi).
    pub fn apply_symbol(&self, m: &dyn Fn(f64, &[f64]) -> Complex64) -> GelfandTable {
        let mut out = self.clone();
        for (i, &(l, _)) in self.lambda_points.iter().enumerate() {
            for (a, label) in self.labels.iter().enumerate() {
                let xi = self.model.gensys.xi(l, label).unwrap();
                out.values[i][a] *= m(l, &xi);
            }
        }
        for (radii, v) in out.degenerate.iter_mut() {
            let w: Vec<Complex64> = radii.iter().map(|&r| Complex64::new(r, 0.0)).collect();
            let w_full = degenerate_representative(&self.model, &w);
            let xi = self.model.gensys.rho_eval(&w_full);
            *v *= m(0.0, &xi);
        }
        out
    }

    pub fn zero_like(&self) -> GelfandTable {
        let mut out = self.clone();
        for row in out.values.iter_mut() {
            for v in row.iter_mut() {
                *v = Complex64::ZERO;
            }
        }
        for (_, v) in out.degenerate.iter_mut() {
            *v = Complex64::ZERO;
        }
        out
    }

    /// CSV rows: lambda, xi_*, re, im (principal part, deterministic order).
    pub fn to_csv(&self) -> String {
        let d = self.model.d();
        let mut s = String::from("lambda");
        for j in 1..=d {
            s.push_str(&format!(",xi_{j}"));
        }
        s.push_str(",re,im\n");
        for (a, label) in self.labels.iter().enumerate() {
            let mut rows: Vec<(f64, usize)> =
                self.lambda_points.iter().enumerate().map(|(i, &(l, _))| (l, i)).collect();
            rows.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
            for (l, i) in rows {
                let xi = self.model.gensys.xi(l, label).unwrap();
                s.push_str(&format!("{l:.16e}"));
                for x in xi {
                    s.push_str(&format!(",{x:.16e}"));
                }
                let v = self.values[i][a];
                s.push_str(&format!(",{:.16e},{:.16e}\n", v.re, v.im));
            }
        }
        s
    }
}

fn degenerate_representative(model: &SpectrumModel, w_radii: &[Complex64]) -> Vec<Complex64> {
    let n = model.gensys.action.n;
    match model.gensys.action.kind {
        ActionKind::UnitaryFull => {
            let mut w = vec![Complex64::ZERO; n];
            w[0] = w_radii[0];
            w
        }
        ActionKind::Torus => w_radii.to_vec(),
    }
}

/// t-integrals against e^{i lambda t} for all lambda nodes: returns
/// rows[lambda][radial tuple index].
pub(crate) fn t_transform(
    f: &InvariantFunction,
    lambdas: &[f64],
    t_rule: &Rule,
    radial_tuples: &[Vec<f64>],
) -> Vec<Vec<Complex64>> {
    // sample f on the (t, tuple) grid once
    let samples: Vec<Vec<Complex64>> = t_rule
        .points
        .par_iter()
        .map(|&(t, _)| radial_tuples.iter().map(|r| f.eval_reduced(t, r)).collect())
        .collect();
    lambdas
        .par_iter()
        .map(|&l| {
            let mut row = vec![Complex64::ZERO; radial_tuples.len()];
            for (ti, &(t, wt)) in t_rule.points.iter().enumerate() {
                let phase = Complex64::new(0.0, l * t).exp() * wt;
                for (ri, v) in samples[ti].iter().enumerate() {
                    row[ri] += phase * v;
                }
            }
            row
        })
        .collect()
}

pub(crate) fn radial_tuples(reduced: usize, r_rule: &Rule) -> (Vec<Vec<f64>>, Vec<f64>) {
    let mut tuples: Vec<Vec<f64>> = vec![vec![]];
    let mut weights: Vec<f64> = vec![1.0];
    for _ in 0..reduced {
        let mut nt = vec![];
        let mut nw = vec![];
        for (t, &w0) in tuples.iter().zip(&weights) {
            for &(r, w) in &r_rule.points {
                let mut v = t.clone();
                v.push(r);
                nt.push(v);
                nw.push(w0 * w);
            }
        }
        tuples = nt;
        weights = nw;
    }
    (tuples, weights)
}

/// Surface measure factor for the reduced coordinates: unitary n gives
/// (2 pi^n / Gamma(n)) r^{2n-1}; the torus gives prod 2 pi r_j.
pub(crate) fn measure_factor(action: crate::action::ActionDescriptor, radii: &[f64]) -> f64 {
    match action.kind {
        ActionKind::UnitaryFull => {
            let n = action.n;
            let mut gamma_n = 1.0; // Gamma(n) = (n-1)!
            for i in 1..n {
                gamma_n *= i as f64;
            }
            2.0 * std::f64::consts::PI.powi(n as i32) / gamma_n
                * radii[0].powi(2 * n as i32 - 1)
        }
        ActionKind::Torus =>

            radii.iter().map(|&r| 2.0 * std::f64::consts::PI * r).product(),
    }
}

/// Forward transform of an integrable invariant function on the truncated
/// spectrum, sampled at the lambda quadrature nodes of `quad`.
pub fn gelfand_forward(
    f: &InvariantFunction,
    model: &SpectrumModel,
    quad: &QuadratureSpec,
) -> Result<GelfandTable> {
    if f.decay == DecayClass::PolynomialGrowth {
        return Err(Error::NonIntegrable(
            "polynomial-growth profiles are not integrable; window them first".into(),
        ));
    }
    let action = f.action;
    let reduced = action.reduced_dim();
    if reduced > 2 {
        return Err(Error::UnsupportedAction(
            "transforms support reduced dimension <= 2".into(),
        ));
    }
    let lambda_rule = quad.lambda_rule(model);
    let t_rule = quad.t_rule();
    let r_rule = quad.r_rule();
    let (tuples, rweights) = radial_tuples(reduced, &r_rule);
    let lambdas: Vec<f64> = lambda_rule.points.iter().map(|&(l, _)| l).collect();
    let trows = t_transform(f, &lambdas, &t_rule, &tuples);
    let labels = model.gensys.labels_up_to(model.alpha_cut);
    let dims: Vec<f64> = labels.iter().map(|l| l.dim(action.n) as f64).collect();

    let values: Vec<Vec<Complex64>> = lambdas
        .par_iter()
        .zip(&trows)
        .map(|(&l, row)| principal_row(model, &labels, l, row, &tuples, &rweights))
        .collect();

    // degenerate part on the model parameter grid
    let w_axis: Vec<f64> = (0..model.degenerate_samples)
        .map(|i| model.degenerate_radius * i as f64 / (model.degenerate_samples - 1) as f64)
        .collect();
    let mut w_tuples: Vec<Vec<f64>> = vec![vec![]];
    for _ in 0..reduced {
        let mut next = vec![];
        for t in &w_tuples {
            for &r in &w_axis {
                let mut v = t.clone();
                v.push(r);
                next.push(v);
            }
        }
        w_tuples = next;
    }
    // t-row at lambda = 0
    let zero_row = t_transform(f, &[0.0], &t_rule, &tuples).pop().unwrap();
    let degenerate: Vec<(Vec<f64>, Complex64)> = w_tuples
        .par_iter()
        .map(|wr| {
            let mut acc = Complex64::ZERO;
            for ((radii, &wgt), tv) in tuples.iter().zip(&rweights).zip(&zero_row) {
                let eta = match action.kind {
                    ActionKind::UnitaryFull => {
                        bessel_profile(action.n as u32, radii[0] * radii[0] * wr[0] * wr[0])
                    }
                    ActionKind::Torus => {
                        let mut pr = 1.0;
                        for (rj, wj) in radii.iter().zip(wr) {
                            pr *= bessel_profile(1, rj * rj * wj * wj);
                        }
                        pr
                    }
                };
                acc += tv * (eta * wgt * measure_factor(action, radii));
            }
            (wr.clone(), acc)
        })
        .collect();

    Ok(GelfandTable {
        model: model.clone(),
        lambda_points: lambda_rule.points,
        labels,
        dims,
        values,
        degenerate,
    })
}

/// Forward transform of a kernel given spectrally: the inversion sum is
/// evaluated exactly on the forward quadrature grid (no interpolation), then
/// transformed. This is forward(inverse(table)) composed without a grid
/// cache.
pub fn forward_of_inverse(
    table: &GelfandTable,
    tail: Option<&MultiplierSymbol>,
    test_model: &SpectrumModel,
    quad: &QuadratureSpec,
    lambdas: &[f64],
) -> Result<Vec<Vec<Complex64>>> {
    let action = table.model.gensys.action;
    let reduced = action.reduced_dim();
    if reduced > 2 {
        return Err(Error::UnsupportedAction(
            "transforms support reduced dimension <= 2".into(),
        ));
    }
    let t_rule = quad.t_rule();
    let r_rule = quad.r_rule();
    let (tuples, rweights) = radial_tuples(reduced, &r_rule);
    let t_nodes: Vec<f64> = t_rule.points.iter().map(|&(t, _)| t).collect();
    let r_axes: Vec<Vec<f64>> = (0..reduced)
        .map(|_| r_rule.points.iter().map(|&(r, _)| r).collect())
        .collect();
    let kernel_values = inverse_on_grid_with_tail(table, &t_nodes, &r_axes, tail);
    let labels = test_model.gensys.labels_up_to(test_model.alpha_cut);
    Ok(lambdas
        .par_iter()
        .map(|&l| {
            let mut trow = vec![Complex64::ZERO; tuples.len()];
            for (ti, &(t, wt)) in t_rule.points.iter().enumerate() {
                let phase = Complex64::new(0.0, l * t).exp() * wt;
                let base = ti * tuples.len();
                for (ri, acc) in trow.iter_mut().enumerate() {
                    *acc += phase * kernel_values[base + ri];
                }
            }
            principal_row(test_model, &labels, l, &trow, &tuples, &rweights)
        })
        .collect())
}

/// Principal curve values at explicit lambda points (not tied to the
/// quadrature rule); rows[lambda][label].
pub fn forward_at_lambdas(
    f: &InvariantFunction,
    model: &SpectrumModel,
    quad: &QuadratureSpec,
    lambdas: &[f64],
) -> Result<Vec<Vec<Complex64>>> {
    let reduced = f.action.reduced_dim();
    if reduced > 2 {
        return Err(Error::UnsupportedAction(
            "transforms support reduced dimension <= 2".into(),
        ));
    }
    let t_rule = quad.t_rule();
    let r_rule = quad.r_rule();
    let (tuples, rweights) = radial_tuples(reduced, &r_rule);
    let trows = t_transform(f, lambdas, &t_rule, &tuples);
    let labels = model.gensys.labels_up_to(model.alpha_cut);
    Ok(lambdas
        .par_iter()
        .zip(&trows)
        .map(|(&l, row)| principal_row(model, &labels, l, row, &tuples, &rweights))
        .collect())
}

/// One row of principal values: all labels at a fixed lambda.
pub(crate) fn principal_row(
    model: &SpectrumModel,
    labels: &[IrredLabel],
    l: f64,
    trow: &[Complex64],
    tuples: &[Vec<f64>],
    rweights: &[f64],
) -> Vec<Complex64> {
    let action = model.gensys.action;
    let la = l.abs();
    match action.kind {
        ActionKind::UnitaryFull => {
            let kmax = model.alpha_cut;
            let mut acc = vec![Complex64::ZERO; kmax + 1];
            let mut sweep = vec![0.0; kmax + 1];
            for ((radii, &w), tv) in tuples.iter().zip(rweights).zip(trow) {
                let u = radii[0] * radii[0];
                // e^{-la u/4} L_k(la u/2) is the weighted Laguerre value
                laguerre_weighted_sweep(kmax, (action.n - 1) as f64, la * u / 2.0, &mut sweep);
                let wm = w * measure_factor(action, radii);
                for (k, a) in acc.iter_mut().enumerate() {
                    *a += tv * (sweep[k] * wm);
                }
            }
            labels
                .iter()
                .map(|lab| {
                    let IrredLabel::Unitary(k) = lab else { unreachable!() };
                    acc[*k] / binomial(k + action.n - 1, action.n - 1)
                })
                .collect()
        }
        ActionKind::Torus => {
            let n = action.n;
            let kmax = model.alpha_cut;
            // per-axis Laguerre tables including gaussian and measure per axis
            // tuples are the product grid of r_rule per axis, in row-major order
            let m = (tuples.len() as f64).powf(1.0 / n as f64).round() as usize;
            let mut axis_r: Vec<f64> = Vec::with_capacity(m);
            for t in tuples.iter().take(m) {
                axis_r.push(t[n - 1]);
            }
            // weights per axis are identical; recover from the first block
            if n == 1 {
                let mut acc = vec![Complex64::ZERO; kmax + 1];
                let mut sweep = vec![0.0; kmax + 1];
                for ((radii, &w), tv) in tuples.iter().zip(rweights).zip(trow) {
                    let u = radii[0] * radii[0];
                    laguerre_weighted_sweep(kmax, 0.0, la * u / 2.0, &mut sweep);
                    let wm = w * measure_factor(action, radii);
                    for (k, a) in acc.iter_mut().enumerate() {
                        *a += tv * (sweep[k] * wm);
                    }
                }
                return labels
                    .iter()
                    .map(|lab| {
                        let IrredLabel::Torus(a) = lab else { unreachable!() };
                        acc[a[0]]
                    })
                    .collect();
            }
            // n == 2: matrix contraction
            debug_assert_eq!(n, 2);
            let mut lag: Vec<Vec<f64>> = vec![vec![0.0; kmax + 1]; m];
            let mut sweep = vec![0.0; kmax + 1];
            for (i, &r) in axis_r.iter().enumerate() {
                let u = r * r;
                laguerre_weighted_sweep(kmax, 0.0, la * u / 2.0, &mut sweep);
                let meas = 2.0 * std::f64::consts::PI * r;
                for k in 0..=kmax {
                    lag[i][k] = sweep[k] * meas;
                }
            }
            // first contraction over r2 (inner index), weights folded per-axis:
            // rweights[i1*m + i2] = w1 * w2; measure separable.
            // V[i1][k2] = sum_{i2} trow[i1 m + i2] w2(i2) lag[i2][k2]
            // using rweights / w1: recover per-axis weights from r_rule spacing
            // simpler: use full weight and divide at the end is wrong; instead
            // carry the pair weight into the first contraction and none later.
            let mut v = vec![vec![Complex64::ZERO; kmax + 1]; m];
            for i1 in 0..m {
                for i2 in 0..m {
                    let tv = trow[i1 * m + i2] * rweights[i1 * m + i2];
                    for k2 in 0..=kmax {
                        v[i1][k2] += tv * lag[i2][k2];
                    }
                }
            }
            // second contraction over r1 (weights already included)
            let mut table = vec![vec![Complex64::ZERO; kmax + 1]; kmax + 1];
            for i1 in 0..m {
                for k1 in 0..=kmax {
                    let l1 = lag[i1][k1];
                    if l1 == 0.0 {
                        continue;
                    }
                    for k2 in 0..=kmax {
                        table[k1][k2] += v[i1][k2] * l1;
                    }
                }
            }
            labels
                .iter()
                .map(|lab| {
                    let IrredLabel::Torus(a) = lab else { unreachable!() };
                    if a[0] + a[1] <= kmax {
                        table[a[0]][a[1]]
                    } else {
                        Complex64::ZERO
                    }
                })
                .collect()
        }
    }
}

/// Grid-backed profile (values on a uniform (t, radial..) grid) with
/// separable cubic interpolation; evaluates to 0 outside the grid.
pub struct GridProfile {
    pub reduced: usize,
    pub t_max: f64,
    pub t_points: usize,
    pub r_max: f64,
    pub r_points: usize,
    /// values indexed t-major then radial axes
    pub values: Vec<Complex64>,
}

impl GridProfile {
    fn t_step(&self) -> f64 {
        2.0 * self.t_max / (self.t_points - 1) as f64
    }

    fn r_step(&self) -> f64 {
        self.r_max / (self.r_points - 1) as f64
    }

    fn value_at_index(&self, ti: i64, ri: &[i64]) -> Complex64 {
        // mirror radial axes at 0, zero outside
        if ti < 0 || ti >= self.t_points as i64 {
            return Complex64::ZERO;
        }
        let mut idx = ti as usize;
        for &r in ri {
            let r = r.abs();
            if r >= self.r_points as i64 {
                return Complex64::ZERO;
            }
            idx = idx * self.r_points + r as usize;
        }
        self.values[idx]
    }

    fn interp1(values: [Complex64; 4], frac: f64) -> Complex64 {
        // Catmull-Rom
        let t = frac;
        let a = values[1];
        let b = (values[2] - values[0]) * 0.5;
        let c = values[0] - values[1] * 2.5 + values[2] * 2.0 - values[3] * 0.5;
        let d = (values[3] - values[0]) * 0.5 + (values[1] - values[2]) * 1.5;
        a + (b + (c + d * t) * t) * t
    }

    fn eval_rec(&self, axis: usize, ti: i64, tfrac: f64, ri: &mut Vec<i64>, rfrac: &[f64]) -> Complex64 {
        if axis == self.reduced {
            // interpolate along t
            let mut vals = [Complex64::ZERO; 4];
            for (o, v) in vals.iter_mut().enumerate() {
                *v = self.value_at_index(ti + o as i64 - 1, ri);
            }
            return Self::interp1(vals, tfrac);
        }
        let base = ri[axis];
        let mut vals = [Complex64::ZERO; 4];
        for (o, v) in vals.iter_mut().enumerate() {
            ri[axis] = base + o as i64 - 1;
            *v = self.eval_rec(axis + 1, ti, tfrac, ri, rfrac);
        }
        ri[axis] = base;
        Self::interp1(vals, rfrac[axis])
    }
}

impl AnalyticProfile for GridProfile {
    fn reduced_dim(&self) -> usize {
        self.reduced
    }

    fn eval(&self, t: f64, u: &[f64]) -> Complex64 {
        let radii: Vec<f64> = u.iter().map(|&x| x.max(0.0).sqrt()).collect();
        if t.abs() > self.t_max || radii.iter().any(|&r| r > self.r_max) {
            return Complex64::ZERO;
        }
        let ts = (t + self.t_max) / self.t_step();
        let ti = ts.floor() as i64;
        let tfrac = ts - ti as f64;
        let mut ri = Vec::with_capacity(self.reduced);
        let mut rfrac = Vec::with_capacity(self.reduced);
        for &r in &radii {
            let rs = r / self.r_step();
            let i = rs.floor() as i64;
            ri.push(i);
            rfrac.push(rs - i as f64);
        }
        self.eval_rec(0, ti, tfrac, &mut ri, &rfrac)
    }

    fn jet(&self, _t: f64, _u: &[f64], _order: usize) -> Option<Jet> {
        None
    }
}

/// Evaluate the inversion sum on an explicit (t, radial) grid: separable over
/// the lambda nodes. Returns values in t-major order matching GridProfile.
pub fn inverse_on_grid(
    table: &GelfandTable,
    t_axis: &[f64],
    r_axes: &[Vec<f64>],
) -> Vec<Complex64> {
    inverse_on_grid_with_tail(table, t_axis, r_axes, None)
}

/// Label-tail completion for the radial path: the sum over labels beyond the
/// truncation is replaced by its continuum limit, where the normalized
/// Laguerre modes become the degenerate Bessel profile with spectral density
/// xi^{n-1} / ((n-1)! (4 lambda)^n). Requires the symbol as a function to
/// sample beyond the table.
pub fn inverse_on_grid_with_tail(
    table: &GelfandTable,
    t_axis: &[f64],
    r_axes: &[Vec<f64>],
    tail: Option<&MultiplierSymbol>,
) -> Vec<Complex64> {
    let model = &table.model;
    let action = model.gensys.action;
    let n = action.n;
    let cn = plancherel_constant(n);
    let reduced = action.reduced_dim();
    assert_eq!(r_axes.len(), reduced);
    // radial tuples in row-major order
    let mut tuples: Vec<Vec<f64>> = vec![vec![]];
    for ax in r_axes {
        let mut next = vec![];
        for t in &tuples {
            for &r in ax {
                let mut v = t.clone();
                v.push(r);
                next.push(v);
            }
        }
        tuples = next;
    }
    // per lambda node: radial factor G_i(tuple) = sum_labels v dim radial
    let gfactors: Vec<Vec<Complex64>> = table
        .lambda_points
        .par_iter()
        .enumerate()
        .map(|(i, &(l, _))| {
            let la = l.abs();
            match action.kind {
                ActionKind::UnitaryFull => {
                    let kmax = model.alpha_cut;
                    let mut coef = vec![Complex64::ZERO; kmax + 1];
                    for (a, lab) in table.labels.iter().enumerate() {
                        let IrredLabel::Unitary(k) = lab else { unreachable!() };
                        coef[*k] = table.values[i][a] * table.dims[a]
                            / binomial(k + n - 1, n - 1);
                    }
                    // continuum completion over the missing labels
                    let tail_rule = tail.map(|m| {
                        let c = la * (4 * kmax + 2 * n + 2) as f64;
                        // multi-scale panels: resolve symbol decay scales
                        // from ~1 up to ~100
                        let gl = GaussLegendre::new(32);
                        let mut pts = gl.scaled(c, c + 4.0);
                        pts.extend(gl.scaled(c + 4.0, c + 16.0));
                        pts.extend(gl.scaled(c + 16.0, c + 64.0));
                        pts.extend(gl.scaled(c + 64.0, c + 240.0));
                        pts.extend(gl.scaled(c + 240.0, c + 720.0));
                        let density = 1.0
                            / (gamma_int(n) * (4.0 * la).powi(n as i32));
                        // drop points where the symbol no longer contributes;
                        // this also keeps the Bessel arguments moderate
                        let mut vals: Vec<(f64, Complex64)> = Vec::new();
                        let mut peak = 0.0_f64;
                        for &(xi, w) in &pts {
                            let mv = m(l, &[xi]) * (w * density * xi.powi(n as i32 - 1));
                            peak = peak.max(mv.norm());
                            if mv.norm() > 1e-18 * peak.max(1e-280) {
                                vals.push((xi, mv));
                            }
                        }
                        vals
                    });
                    let mut sweep = vec![0.0; kmax + 1];
                    tuples
                        .iter()
                        .map(|radii| {
                            let u = radii[0] * radii[0];
                            laguerre_weighted_sweep(kmax, (n - 1) as f64, la * u / 2.0, &mut sweep);
                            let mut s = Complex64::ZERO;
                            for (k, c) in coef.iter().enumerate() {
                                s += c * sweep[k];
                            }
                            if let Some(rule) = &tail_rule {
                                for &(xi, mv) in rule {
                                    s += mv * bessel_profile(n as u32, u * xi / 2.0);
                                }
                            }
                            s
                        })
                        .collect()
                }
                ActionKind::Torus => {
                    let kmax = model.alpha_cut;
                    if reduced == 1 {
                        let mut coef = vec![Complex64::ZERO; kmax + 1];
                        for (a, lab) in table.labels.iter().enumerate() {
                            let IrredLabel::Torus(al) = lab else { unreachable!() };
                            coef[al[0]] = table.values[i][a];
                        }
                        let mut sweep = vec![0.0; kmax + 1];
                        tuples
                            .iter()
                            .map(|radii| {
                                let u = radii[0] * radii[0];
                                laguerre_weighted_sweep(kmax, 0.0, la * u / 2.0, &mut sweep);
                                let mut s = Complex64::ZERO;
                                for (k, c) in coef.iter().enumerate() {
                                    s += c * sweep[k];
                                }
                                s
                            })
                            .collect()
                    } else {
                        // n = 2 matrix path: M[k1][k2] * L(r2) then L(r1)
                        let mut mcoef = vec![vec![Complex64::ZERO; kmax + 1]; kmax + 1];
                        for (a, lab) in table.labels.iter().enumerate() {
                            let IrredLabel::Torus(al) = lab else { unreachable!() };
                            mcoef[al[0]][al[1]] = table.values[i][a];
                        }
                        let m1 = r_axes[0].len();
                        let m2 = r_axes[1].len();
                        let mut lag2 = vec![vec![0.0; kmax + 1]; m2];
                        let mut sweep = vec![0.0; kmax + 1];
                        for (b, &r) in r_axes[1].iter().enumerate() {
                            let u = r * r;
                            laguerre_weighted_sweep(kmax, 0.0, la * u / 2.0, &mut sweep);
                            lag2[b][..=kmax].copy_from_slice(&sweep[..=kmax]);
                        }
                        // W[k1][i2] = sum_{k2} mcoef[k1][k2] lag2[i2][k2]
                        let mut w = vec![vec![Complex64::ZERO; m2]; kmax + 1];
                        for (k1, row) in mcoef.iter().enumerate() {
                            for (i2, l2) in lag2.iter().enumerate() {
                                let mut s = Complex64::ZERO;
                                for (k2, c) in row.iter().enumerate() {
                                    s += c * l2[k2];
                                }
                                w[k1][i2] = s;
                            }
                        }
                        let mut out = vec![Complex64::ZERO; m1 * m2];
                        let mut lag1 = vec![0.0; kmax + 1];
                        for (i1, &r) in r_axes[0].iter().enumerate() {
                            let u = r * r;
                            laguerre_weighted_sweep(kmax, 0.0, la * u / 2.0, &mut lag1);
                            for i2 in 0..m2 {
                                let mut s = Complex64::ZERO;
                                for k1 in 0..=kmax {
                                    s += w[k1][i2] * lag1[k1];
                                }
                                out[i1 * m2 + i2] = s;
                            }
                        }
                        out
                    }
                }
            }
        })
        .collect();
    // assemble over t: out(t, tuple) = cn sum_i w_i |l_i|^n e^{-i l t} G_i
    t_axis
        .par_iter()
        .flat_map(|&t| {
            let mut row = vec![Complex64::ZERO; tuples.len()];
            for (i, &(l, w)) in table.lambda_points.iter().enumerate() {
                let factor = Complex64::new(0.0, -l * t).exp() * (w * l.abs().powi(n as i32) * cn);
                for (j, g) in gfactors[i].iter().enumerate() {
                    row[j] += factor * g;
                }
            }
            row
        })
        .collect()
}

/// Inverse transform packaged as a grid-backed invariant function.
pub fn gelfand_inverse(
    table: &GelfandTable,
    grid_t_points: usize,
    grid_r_points: usize,
    quad: &QuadratureSpec,
) -> Result<InvariantFunction> {
    let action = table.model.gensys.action;
    let reduced = action.reduced_dim();
    let t_axis: Vec<f64> = (0..grid_t_points)
        .map(|i| -quad.t_max + 2.0 * quad.t_max * i as f64 / (grid_t_points - 1) as f64)
        .collect();
    let r_axis: Vec<f64> = (0..grid_r_points)
        .map(|i| quad.r_max * i as f64 / (grid_r_points - 1) as f64)
        .collect();
    let r_axes: Vec<Vec<f64>> = (0..reduced).map(|_| r_axis.clone()).collect();
    let values = inverse_on_grid(table, &t_axis, &r_axes);
    let profile = GridProfile {
        reduced,
        t_max: quad.t_max,
        t_points: grid_t_points,
        r_max: quad.r_max,
        r_points: grid_r_points,
        values,
    };
    InvariantFunction::new(action, Arc::new(profile), DecayClass::Schwartz)
}

/// A spectral multiplier symbol with enough smoothness/decay declared by its
/// owner; evaluated pointwise on R^{d+1}.
pub type MultiplierSymbol = dyn Fn(f64, &[f64]) -> Complex64 + Sync;

/// Convolution kernel of m(V_0..V_d): the inverse transform of the sampled
/// symbol. The returned function satisfies forward(M) = m on the truncated
/// spectrum up to quadrature and truncation error.
pub fn multiplier_kernel(
    m: &MultiplierSymbol,
    model: &SpectrumModel,
    quad: &QuadratureSpec,
    grid_t_points: usize,
    grid_r_points: usize,
) -> Result<InvariantFunction> {
    let table = symbol_table(m, model, quad);
    let action = model.gensys.action;
    let reduced = action.reduced_dim();
    let t_axis: Vec<f64> = (0..grid_t_points)
        .map(|i| -quad.t_max + 2.0 * quad.t_max * i as f64 / (grid_t_points - 1) as f64)
        .collect();
    let r_axis: Vec<f64> = (0..grid_r_points)
        .map(|i| quad.r_max * i as f64 / (grid_r_points - 1) as f64)
        .collect();
    let r_axes: Vec<Vec<f64>> = (0..reduced).map(|_| r_axis.clone()).collect();
    let tail = if reduced == 1 { Some(m) } else { None };
    let values = inverse_on_grid_with_tail(&table, &t_axis, &r_axes, tail);
    let profile = GridProfile {
        reduced,
        t_max: quad.t_max,
        t_points: grid_t_points,
        r_max: quad.r_max,
        r_points: grid_r_points,
        values,
    };
    InvariantFunction::new(action, Arc::new(profile), DecayClass::Schwartz)
}

/// Sample a symbol on the truncated spectrum at the quadrature nodes.
pub fn symbol_table(
    m: &MultiplierSymbol,
    model: &SpectrumModel,
    quad: &QuadratureSpec,
) -> GelfandTable {
    let lambda_rule = quad.lambda_rule(model);
    let labels = model.gensys.labels_up_to(model.alpha_cut);
    let dims: Vec<f64> = labels.iter().map(|l| l.dim(model.gensys.action.n) as f64).collect();
    let values: Vec<Vec<Complex64>> = lambda_rule
        .points
        .par_iter()
        .map(|&(l, _)| {
            labels
                .iter()
                .map(|lab| {
                    let xi = model.gensys.xi(l, lab).unwrap();
                    m(l, &xi)
                })
                .collect()
        })
        .collect();
    GelfandTable {
        model: model.clone(),
        lambda_points: lambda_rule.points,
        labels,
        dims,
        values,
        degenerate: vec![],
    }
}

/// L1 norm of the reduced profile by quadrature (for the boundedness check).
pub fn l1_norm(f: &InvariantFunction, quad: &QuadratureSpec) -> f64 {
    let reduced = f.action.reduced_dim();
    let t_rule = quad.t_rule();
    let r_rule = quad.r_rule();
    let (tuples, rweights) = radial_tuples(reduced, &r_rule);
    t_rule
        .points
        .par_iter()
        .map(|&(t, wt)| {
            let mut s = 0.0;
            for (radii, &wr) in tuples.iter().zip(&rweights) {
                s += f.eval_reduced(t, radii).norm() * wr * measure_factor(f.action, radii);
            }
            s * wt
        })
        .sum()
}

/// Apply an invariant differential operator (a word sum over the fields) to
/// an analytic invariant function, returning a new invariant function whose
/// profile is computed through exact jets on the real section.
pub fn apply_invariant_operator(
    f: &InvariantFunction,
    op: &crate::invariant::WordSum,
) -> Result<InvariantFunction> {
    struct DerivedProfile {
        base: Arc<InvariantFunction>,
        op: crate::diffop::DiffOp,
        reduced: usize,
    }
    impl AnalyticProfile for DerivedProfile {
        fn reduced_dim(&self) -> usize {
            self.reduced
        }
        fn eval(&self, t: f64, u: &[f64]) -> Complex64 {
            let n = self.base.action.n;
            let z: Vec<Complex64> = match self.base.action.kind {
                ActionKind::UnitaryFull => {
                    let mut z = vec![Complex64::ZERO; n];
                    z[0] = Complex64::new(u[0].max(0.0).sqrt(), 0.0);
                    z
                }
                ActionKind::Torus => {
                    u.iter().map(|&x| Complex64::new(x.max(0.0).sqrt(), 0.0)).collect()
                }
            };
            let p = GroupPoint::new(t, z);
            let jet = crate::heisenberg::SmoothFn::jet_at(self.base.as_ref(), &p, self.op.max_order())
                .expect("analytic profile");
            self.op.apply(&jet, &p.formal())
        }
        fn jet(&self, _t: f64, _u: &[f64], _order: usize) -> Option<Jet> {
            None
        }
    }
    let dop = op.to_diffop()?;
    let reduced = f.action.reduced_dim();
    let base = Arc::new(InvariantFunction::new(f.action, f.profile.clone(), f.decay)?);
    InvariantFunction::new(
        f.action,
        Arc::new(DerivedProfile { base, op: dop, reduced }),
        f.decay,
    )
}

/// Direct group convolution (f * g)(x) = int f(y) g(y^{-1} x) dy by a coarse
/// 3D quadrature over H_1 in real coordinates; test oracle for multiplier
/// identities (n = 1 only).
pub fn convolve_h1(
    f: &InvariantFunction,
    g: &InvariantFunction,
    x: &GroupPoint,
    nodes: usize,
    t_half: f64,
    r_half: f64,
) -> Complex64 {
    let gl_t = GaussLegendre::new(nodes).scaled(-t_half, t_half);
    let gl_xy = GaussLegendre::new(nodes).scaled(-r_half, r_half);
    let mut sum = Complex64::ZERO;
    for &(ty, wt) in &gl_t {
        for &(xr, wx) in &gl_xy {
            for &(yi, wy) in &gl_xy {
                let y = GroupPoint::new(ty, vec![Complex64::new(xr, yi)]);
                let fy = crate::heisenberg::SmoothFn::eval(f, &y);
                if fy.norm() < 1e-300 {
                    continue;
                }
                let yinv_x = crate::heisenberg::group_multiply(&y.inverse(), x).unwrap();
                let gv = crate::heisenberg::SmoothFn::eval(g, &yinv_x);
                sum += fy * gv * (wt * wx * wy);
            }
        }
    }
    sum
}
