//! The curve interpolation operator: for lambda != 0 it places a window bump
//! around each eigenvalue curve and copies the curve value there; integer
//! separation of the eigenvalue vectors guarantees at most one active term.

use super::cutoffs::interpolation_window;
use crate::action::ActionKind;
use crate::error::{Error, Result};
use crate::invariant::{GeneratorSystem, IrredLabel};
use num_complex::Complex64;
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

/// Curve values h(lambda, alpha) for the labels of a generator system,
/// callable at arbitrary nonzero lambda.
pub struct CurveTable {
    pub labels: Vec<IrredLabel>,
    index: HashMap<IrredLabel, usize>,
    row: Box<dyn Fn(f64) -> Arc<Vec<Complex64>> + Sync + Send>,
}

impl CurveTable {
    /// Build from a row producer (all labels at one lambda), memoized.
    pub fn new(
        labels: Vec<IrredLabel>,
        rows: Box<dyn Fn(f64) -> Vec<Complex64> + Sync + Send>,
    ) -> Self {
        let cache: Mutex<HashMap<u64, Arc<Vec<Complex64>>>> = Mutex::new(HashMap::new());
        let index = labels.iter().cloned().enumerate().map(|(i, l)| (l, i)).collect();
        let row = Box::new(move |lambda: f64| -> Arc<Vec<Complex64>> {
            let key = lambda.to_bits();
            if let Some(hit) = cache.lock().unwrap().get(&key) {
                return hit.clone();
            }
            let fresh = Arc::new(rows(lambda));
            cache.lock().unwrap().insert(key, fresh.clone());
            fresh
        });
        CurveTable { labels, index, row }
    }

    pub fn value(&self, lambda: f64, label: &IrredLabel) -> Complex64 {
        match self.index.get(label) {
            None => Complex64::ZERO,
            Some(&i) => (self.row)(lambda)[i],
        }
    }
}

/// Affine structure of the eigenvalue table, validated exactly at
/// construction: V^_j(alpha) = c0 + c1 alpha_j + c2 |alpha| (c2 = 0 and
/// alpha scalar for the radial case).
#[derive(Debug, Clone)]
struct EigenAffine {
    c0: i64,
    c1: i64,
    c2: i64,
}

fn fit_eigentable(gensys: &GeneratorSystem) -> Result<EigenAffine> {
    let n = gensys.action.n;
    match gensys.action.kind {
        ActionKind::UnitaryFull => {
            let v0 = gensys.eigenvalue(0, &IrredLabel::Unitary(0)).unwrap();
            let v1 = gensys.eigenvalue(0, &IrredLabel::Unitary(1)).unwrap();
            let aff = EigenAffine { c0: v0, c1: v1 - v0, c2: 0 };
            for (label, vals) in &gensys.eigentable {
                let IrredLabel::Unitary(k) = label else { unreachable!() };
                if vals[0] != aff.c0 + aff.c1 * *k as i64 {
                    return Err(Error::EigenvalueStructure(
                        "eigenvalue table is not affine in the label".into(),
                    ));
                }
            }
            Ok(aff)
        }
        ActionKind::Torus => {
            let zero = IrredLabel::Torus(vec![0; n]);
            let mut e1 = vec![0; n];
            e1[0] = 1;
            let c0 = gensys.eigenvalue(0, &zero).unwrap();
            let v_same = gensys.eigenvalue(0, &IrredLabel::Torus(e1.clone())).unwrap();
            let (c1, c2);
            if n >= 2 {
                let mut e2 = vec![0; n];
                e2[1] = 1;
                let v_other = gensys.eigenvalue(0, &IrredLabel::Torus(e2)).unwrap();
                c2 = v_other - c0;
                c1 = v_same - c0 - c2;
            } else {
                // n = 1: c2 indistinguishable from c1; fold into c1
                c1 = v_same - c0;
                c2 = 0;
            }
            let aff = EigenAffine { c0, c1, c2 };
            for (label, vals) in &gensys.eigentable {
                let IrredLabel::Torus(a) = label else { unreachable!() };
                let total: i64 = a.iter().map(|&x| x as i64).sum();
                for (j, &v) in vals.iter().enumerate() {
                    if v != aff.c0 + aff.c1 * a[j] as i64 + aff.c2 * total {
                        return Err(Error::EigenvalueStructure(
                            "eigenvalue table is not affine in the label".into(),
                        ));
                    }
                }
            }
            Ok(aff)
        }
    }
}

/// The interpolation operator bound to a generator system and a curve table.
pub struct CurveInterpolant {
    pub gensys: Arc<GeneratorSystem>,
    pub table: CurveTable,
    affine: EigenAffine,
}

impl CurveInterpolant {
    pub fn new(gensys: Arc<GeneratorSystem>, table: CurveTable) -> Result<Self> {
        let affine = fit_eigentable(&gensys)?;
        // distinctness of eigenvalue vectors across labels
        let mut seen = std::collections::BTreeSet::new();
        for vals in gensys.eigentable.values() {
            if !seen.insert(vals.clone()) {
                return Err(Error::EigenvalueStructure(
                    "eigenvalue vectors are not distinct across labels".into(),
                ));
            }
        }
        Ok(CurveInterpolant { gensys, table, affine })
    }

    /// Candidate labels whose windows could contain u; hard error if two are
    /// simultaneously active.
    fn active_label(&self, u: &[f64]) -> Result<Option<(IrredLabel, f64)>> {
        let mut active: Option<(IrredLabel, f64)> = None;
        let mut consider = |label: IrredLabel, vhat: &[i64]| -> Result<()> {
            let mut weight = 1.0;
            for (x, &v) in u.iter().zip(vhat) {
                weight *= interpolation_window(x - v as f64);
                if weight == 0.0 {
                    return Ok(());
                }
            }
            if let Some((prev, _)) = &active {
                if *prev != label {
                    return Err(Error::OverlappingSummands);
                }
            }
            active = Some((label, weight));
            Ok(())
        };
        match self.gensys.action.kind {
            ActionKind::UnitaryFull => {
                let (c0, c1) = (self.affine.c0 as f64, self.affine.c1 as f64);
                let kf = (u[0] - c0) / c1;
                for k in [kf.floor() as i64, kf.ceil() as i64] {
                    if k < 0 {
                        continue;
                    }
                    let vhat = vec![self.affine.c0 + self.affine.c1 * k];
                    consider(IrredLabel::Unitary(k as usize), &vhat)?;
                }
            }
            ActionKind::Torus => {
                let n = self.gensys.action.n;
                let (c0, c1, c2) = (self.affine.c0, self.affine.c1, self.affine.c2);
                let sum_u: f64 = u.iter().sum();
                let denom = (c1 + n as i64 * c2) as f64;
                let lf = (sum_u - n as f64 * c0 as f64) / denom;
                let lmin = (lf - 1.5).floor() as i64;
                for l in lmin..=(lf + 1.5).ceil() as i64 {
                    if l < 0 {
                        continue;
                    }
                    let mut alpha = Vec::with_capacity(n);
                    let mut ok = true;
                    let mut total: i64 = 0;
                    for &x in u {
                        let a = ((x - (c0 + c2 * l) as f64) / c1 as f64).round() as i64;
                        if a < 0 {
                            ok = false;
                            break;
                        }
                        total += a;
                        alpha.push(a as usize);
                    }
                    if !ok || total != l {
                        continue;
                    }
                    let vhat: Vec<i64> = alpha
                        .iter()
                        .map(|&a| c0 + c1 * a as i64 + c2 * l)
                        .collect();
                    consider(IrredLabel::Torus(alpha), &vhat)?;
                }
            }
        }
        Ok(active)
    }

    /// E h at (lambda, xi): zero on the lambda = 0 plane, otherwise the
    /// single windowed curve value.
    pub fn eval(&self, lambda: f64, xi: &[f64]) -> Result<Complex64> {
        if lambda == 0.0 {
            return Ok(Complex64::ZERO);
        }
        let u: Vec<f64> = xi
            .iter()
            .zip(&self.gensys.degrees)
            .map(|(&x, &m)| x / lambda.abs().powi(m as i32))
            .collect();
        if u.iter().any(|&x| x <= 0.0) {
            return Ok(Complex64::ZERO);
        }
        match self.active_label(&u)? {
            None => Ok(Complex64::ZERO),
            Some((label, weight)) => Ok(self.table.value(lambda, &label) * weight),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::ActionDescriptor;
    use crate::invariant::build_generator_system;

    fn interp_u1() -> CurveInterpolant {
        let gs = Arc::new(build_generator_system(ActionDescriptor::unitary(1), 16).unwrap());
        let labels = gs.labels_up_to(16);
        let table = CurveTable::new(
            labels.clone(),
            Box::new(move |lambda| {
                labels
                    .iter()
                    .map(|l| {
                        let IrredLabel::Unitary(k) = l else { unreachable!() };
                        Complex64::new(lambda + *k as f64, 0.5 * lambda)
                    })
                    .collect()
            }),
        );
        CurveInterpolant::new(gs, table).unwrap()
    }

    #[test]
    fn exact_on_curve_points() {
        let e = interp_u1();
        for k in 0..=12usize {
            for &l in &[0.4, -1.7, 3.0] {
                let xi = e.gensys.xi(l, &IrredLabel::Unitary(k)).unwrap();
                let got = e.eval(l, &xi).unwrap();
                let want = Complex64::new(l + k as f64, 0.5 * l);
                assert!((got - want).norm() < 1e-14, "k={k} l={l}");
            }
        }
    }

    #[test]
    fn zero_plane_and_gaps() {
        let e = interp_u1();
        assert_eq!(e.eval(0.0, &[5.0]).unwrap(), Complex64::ZERO);
        // midway between curves the window vanishes (gap 4, window radius 3/4)
        let l = 1.0;
        let mid = 4.0; // between 2 and 6
        assert_eq!(e.eval(l, &[mid]).unwrap(), Complex64::ZERO);
        // negative xi gives zero
        assert_eq!(e.eval(l, &[-3.0]).unwrap(), Complex64::ZERO);
    }

    #[test]
    fn linearity_in_the_table() {
        // E is linear in h: check by comparing tables h, 2h
        let gs = Arc::new(build_generator_system(ActionDescriptor::unitary(1), 8).unwrap());
        let labels = gs.labels_up_to(8);
        let mk = |scale: f64| {
            let labels = labels.clone();
            CurveTable::new(
                labels.clone(),
                Box::new(move |lambda| {
                    labels
                        .iter()
                        .map(|l| {
                            let IrredLabel::Unitary(k) = l else { unreachable!() };
                            Complex64::new(scale * (lambda - 0.3 * *k as f64), 0.0)
                        })
                        .collect()
                }),
            )
        };
        let e1 = CurveInterpolant::new(gs.clone(), mk(1.0)).unwrap();
        let e2 = CurveInterpolant::new(gs, mk(2.0)).unwrap();
        for i in 0..200 {
            let l = 0.05 + i as f64 * 0.017;
            let xi = 1.9 + i as f64 * 0.11;
            let a = e1.eval(l, &[xi]).unwrap();
            let b = e2.eval(l, &[xi]).unwrap();
            assert!((b - a * 2.0).norm() < 1e-13);
        }
    }

    #[test]
    fn torus_label_resolution() {
        let gs = Arc::new(build_generator_system(ActionDescriptor::torus(2), 12).unwrap());
        let labels = gs.labels_up_to(12);
        let table = CurveTable::new(
            labels.clone(),
            Box::new(move |_l| {
                labels
                    .iter()
                    .map(|l| {
                        let IrredLabel::Torus(a) = l else { unreachable!() };
                        Complex64::new(a[0] as f64 * 10.0 + a[1] as f64, 0.0)
                    })
                    .collect()
            }),
        );
        let e = CurveInterpolant::new(gs.clone(), table).unwrap();
        for a in 0..=4usize {
            for b in 0..=4usize {
                let label = IrredLabel::Torus(vec![a, b]);
                let l = 0.7;
                let xi = gs.xi(l, &label).unwrap();
                let got = e.eval(l, &xi).unwrap();
                assert!((got.re - (a as f64 * 10.0 + b as f64)).abs() < 1e-12);
                // slightly off-curve within the window: same value scaled
                let mut near = xi.clone();
                near[0] += 0.3 * l;
                let v = e.eval(l, &near).unwrap();
                let w = interpolation_window(0.3);
                assert!((v.re - w * (a as f64 * 10.0 + b as f64)).abs() < 1e-12);
            }
        }
    }
}
