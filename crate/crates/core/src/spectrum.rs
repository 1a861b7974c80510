//! The embedded spectrum in R^{d+1}: the degenerate plane piece at lambda = 0
//! parametrized by the Hilbert map, and the countable family of homogeneous
//! curves indexed by irreducible labels.

use crate::action::ActionKind;
use crate::error::{Error, Result};
use crate::invariant::{GeneratorSystem, IrredLabel};
use num_complex::Complex64;
use std::sync::Arc;

/// Label of a spectrum point.
#[derive(Debug, Clone, PartialEq)]
pub enum SpectrumLabel {
    /// On the lambda = 0 plane; carries the orbit invariants (the reduced
    /// radii of a representative w).
    Degenerate { w_radii: Vec<f64> },
    /// On a curve: lambda != 0 and an irreducible label.
    Principal { alpha: IrredLabel },
}

/// A point (lambda, xi) of the embedded spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumPoint {
    pub lambda: f64,
    pub xi: Vec<f64>,
    pub label: SpectrumLabel,
}

impl SpectrumPoint {
    pub fn coords(&self) -> Vec<f64> {
        let mut v = vec![self.lambda];
        v.extend(&self.xi);
        v
    }
}

/// Finite truncation of the spectrum.
#[derive(Debug, Clone)]
pub struct SpectrumModel {
    pub gensys: Arc<GeneratorSystem>,
    /// enumerate labels with total degree <= alpha_cut
    pub alpha_cut: usize,
    pub lambda_min: f64,
    pub lambda_max: f64,
    /// radial samples of the degenerate parameter |w_j| per reduced axis
    pub degenerate_samples: usize,
    pub degenerate_radius: f64,
}

impl SpectrumModel {
    pub fn new(gensys: Arc<GeneratorSystem>, alpha_cut: usize, lambda_range: (f64, f64)) -> Self {
        assert!(alpha_cut <= gensys.m_max, "alpha_cut exceeds the eigentable range");
        SpectrumModel {
            gensys,
            alpha_cut,
            lambda_min: lambda_range.0,
            lambda_max: lambda_range.1,
            degenerate_samples: 65,
            degenerate_radius: 16.0,
        }
    }

    pub fn d(&self) -> usize {
        self.gensys.d()
    }

    /// The principal point on the curve of `alpha` at this lambda.
    pub fn principal_point(&self, lambda: f64, alpha: &IrredLabel) -> Option<SpectrumPoint> {
        if lambda == 0.0 {
            return None;
        }
        let xi = self.gensys.xi(lambda, alpha)?;
        Some(SpectrumPoint { lambda, xi, label: SpectrumLabel::Principal { alpha: alpha.clone() } })
    }

    /// The degenerate point for an orbit representative with reduced radii.
    pub fn degenerate_point(&self, w_radii: &[f64]) -> SpectrumPoint {
        let n = self.gensys.action.n;
        let w: Vec<Complex64> = match self.gensys.action.kind {
            ActionKind::UnitaryFull => {
                let mut w = vec![Complex64::ZERO; n];
                w[0] = Complex64::new(w_radii[0], 0.0);
                w
            }
            ActionKind::Torus => w_radii.iter().map(|&r| Complex64::new(r, 0.0)).collect(),
        };
        SpectrumPoint {
            lambda: 0.0,
            xi: self.gensys.rho_eval(&w),
            label: SpectrumLabel::Degenerate { w_radii: w_radii.to_vec() },
        }
    }

    /// Uniform lambda samples excluding 0, symmetric when the range is.
    pub fn lambda_samples(&self, count: usize) -> Vec<f64> {
        let mut out = vec![];
        let (a, b) = (self.lambda_min, self.lambda_max);
        for i in 0..count {
            let l = a + (b - a) * (i as f64 + 0.5) / count as f64;
            if l != 0.0 {
                out.push(l);
            }
        }
        out
    }
}

/// Enumerate the truncated spectrum: all principal points for labels of total
/// degree <= alpha_cut at the lambda samples, then degenerate points from a
/// radial/polyradial parameter grid. Ordering: (|alpha|, alpha lex, lambda
/// ascending), degenerate points last.
pub fn enumerate_spectrum(model: &SpectrumModel, lambda_samples: usize) -> Vec<SpectrumPoint> {
    let lambdas = model.lambda_samples(lambda_samples);
    let labels = model.gensys.labels_up_to(model.alpha_cut);
    let mut out = vec![];
    for label in &labels {
        for &l in &lambdas {
            if let Some(p) = model.principal_point(l, label) {
                out.push(p);
            }
        }
    }
    // degenerate part: reduced radial grid
    let reduced = model.gensys.action.reduced_dim();
    let axis: Vec<f64> = (0..model.degenerate_samples)
        .map(|i| model.degenerate_radius * i as f64 / (model.degenerate_samples - 1) as f64)
        .collect();
    let mut tuples: Vec<Vec<f64>> = vec![vec![]];
    for _ in 0..reduced {
        let mut next = vec![];
        for t in &tuples {
            for &r in &axis {
                let mut v = t.clone();
                v.push(r);
                next.push(v);
            }
        }
        tuples = next;
    }
    for radii in tuples {
        out.push(model.degenerate_point(&radii));
    }
    out
}

/// Anisotropic dilation (lambda, xi) -> (r lambda, r^{m_1} xi_1, ..).
pub fn dilate(gensys: &GeneratorSystem, p: &SpectrumPoint, r: f64) -> Result<SpectrumPoint> {
    if r <= 0.0 {
        return Err(Error::Config(format!("dilation parameter must be positive, got {r}")));
    }
    let xi: Vec<f64> = p
        .xi
        .iter()
        .zip(&gensys.degrees)
        .map(|(&x, &mj)| r.powi(mj as i32) * x)
        .collect();
    let label = match &p.label {
        SpectrumLabel::Principal { alpha } => SpectrumLabel::Principal { alpha: alpha.clone() },
        SpectrumLabel::Degenerate { w_radii } => SpectrumLabel::Degenerate {
            // rho_j is homogeneous of degree 2 m_j in w, so radii scale by sqrt r
            w_radii: w_radii.iter().map(|&x| x * r.sqrt()).collect(),
        },
    };
    Ok(SpectrumPoint { lambda: r * p.lambda, xi, label })
}

/// Nearest enumerated spectrum point in Euclidean distance; ties broken by
/// smaller |alpha| (principal before degenerate), then smaller lambda.
pub fn project_to_spectrum(
    model: &SpectrumModel,
    enumerated: &[SpectrumPoint],
    q: &[f64],
) -> Result<(SpectrumPoint, f64)> {
    if q.len() != model.d() + 1 {
        return Err(Error::Config(format!(
            "query has {} coordinates, spectrum lives in R^{}",
            q.len(),
            model.d() + 1
        )));
    }
    // range guard: the enumeration covers |lambda| <= lambda_max and xi below
    // the largest curve value
    let max_xi = enumerated
        .iter()
        .flat_map(|p| p.xi.iter().copied())
        .fold(0.0_f64, f64::max);
    if q[0].abs() > model.lambda_max.abs().max(model.lambda_min.abs()) * 1.5
        || q[1..].iter().any(|&x| x > max_xi * 1.5 + 1.0)
    {
        return Err(Error::OutsideEnumeration(q.to_vec()));
    }
    let mut best: Option<(usize, f64)> = None;
    for (i, p) in enumerated.iter().enumerate() {
        let c = p.coords();
        let d2: f64 = c.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum();
        let d = d2.sqrt();
        let better = match best {
            None => true,
            Some((bi, bd)) => {
                if (d - bd).abs() > 1e-14 {
                    d < bd
                } else {
                    tie_break(p, &enumerated[bi])
                }
            }
        };
        if better {
            best = Some((i, d));
        }
    }
    let (i, d) = best.ok_or_else(|| Error::OutsideEnumeration(q.to_vec()))?;
    Ok((enumerated[i].clone(), d))
}

fn tie_break(a: &SpectrumPoint, b: &SpectrumPoint) -> bool {
    let rank = |p: &SpectrumPoint| match &p.label {
        SpectrumLabel::Principal { alpha } => (alpha.total_degree(), p.lambda),
        SpectrumLabel::Degenerate { .. } => (usize::MAX, p.lambda),
    };
    rank(a) < rank(b)
}

/// CSV export of the fan: lambda, xi_1..xi_d, label_kind, alpha text.
pub fn spectrum_csv(points: &[SpectrumPoint]) -> String {
    let d = points.first().map(|p| p.xi.len()).unwrap_or(0);
    let mut s = String::from("lambda");
    for j in 1..=d {
        s.push_str(&format!(",xi_{j}"));
    }
    s.push_str(",label_kind,alpha\n");
    for p in points {
        s.push_str(&format!("{:.16e}", p.lambda));
        for x in &p.xi {
            s.push_str(&format!(",{x:.16e}"));
        }
        match &p.label {
            SpectrumLabel::Principal { alpha } => {
                let a = match alpha {
                    IrredLabel::Unitary(k) => format!("{k}"),
                    IrredLabel::Torus(v) => {
                        v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
                    }
                };
                s.push_str(&format!(",principal,{a}\n"));
            }
            SpectrumLabel::Degenerate { w_radii } => {
                let a = w_radii.iter().map(|x| format!("{x:.6e}")).collect::<Vec<_>>().join(" ");
                s.push_str(&format!(",degenerate,{a}\n"));
            }
        }
    }
    s
}
