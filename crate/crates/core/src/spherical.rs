//! Bounded spherical functions: the principal family attached to Bargmann
//! representations (Laguerre closed forms) and the degenerate family attached
//! to the one-dimensional representations (Bessel closed forms), each with an
//! independent oracle for validation.

use crate::action::{ActionDescriptor, ActionKind};
use crate::error::{Error, Result};
use crate::heisenberg::{formal_vars, GroupPoint, SmoothFn};
use crate::invariant::IrredLabel;
use crate::jet::{Jet, JetSpace};
use crate::special::{bessel_profile, binomial, laguerre_deriv, laguerre_weighted, monomial_space_dim};
use num_complex::Complex64;

/// Identity of a spherical function.
#[derive(Debug, Clone, PartialEq)]
pub enum SphericalLabel {
    Principal { lambda: f64, alpha: IrredLabel },
    Degenerate { w: Vec<Complex64> },
}

/// A bounded spherical function with a closed-form evaluator and exact jets.
#[derive(Debug, Clone)]
pub struct SphericalFunction {
    pub action: ActionDescriptor,
    pub label: SphericalLabel,
}

impl SphericalFunction {
    pub fn principal(action: ActionDescriptor, lambda: f64, alpha: IrredLabel) -> Result<Self> {
        if lambda == 0.0 {
            return Err(Error::DegenerateLambda);
        }
        let ok = match (&alpha, action.kind) {
            (IrredLabel::Unitary(_), ActionKind::UnitaryFull) => true,
            (IrredLabel::Torus(a), ActionKind::Torus) => a.len() == action.n,
            _ => false,
        };
        if !ok {
            return Err(Error::Config(format!("label {alpha:?} does not match action {action}")));
        }
        Ok(SphericalFunction { action, label: SphericalLabel::Principal { lambda, alpha } })
    }

    pub fn degenerate(action: ActionDescriptor, w: Vec<Complex64>) -> Result<Self> {
        if w.len() != action.n {
            return Err(Error::DimensionMismatch(w.len(), action.n));
        }
        Ok(SphericalFunction { action, label: SphericalLabel::Degenerate { w } })
    }
}

/// Closed-form evaluation of the principal spherical function.
pub fn eval_principal(
    action: ActionDescriptor,
    lambda: f64,
    alpha: &IrredLabel,
    p: &GroupPoint,
) -> Result<Complex64> {
    if lambda == 0.0 {
        return Err(Error::DegenerateLambda);
    }
    let la = lambda.abs();
    let phase = Complex64::new(0.0, lambda * p.t).exp();
    let radial = match (action.kind, alpha) {
        (ActionKind::UnitaryFull, IrredLabel::Unitary(k)) => {
            let n = action.n;
            let u: f64 = p.z.iter().map(|w| w.norm_sqr()).sum();
            laguerre_weighted(*k, (n - 1) as f64, la * u / 2.0) / binomial(k + n - 1, n - 1)
        }
        (ActionKind::Torus, IrredLabel::Torus(a)) => {
            let mut r = 1.0;
            for (w, &kj) in p.z.iter().zip(a) {
                let u = w.norm_sqr();
                r *= laguerre_weighted(kj, 0.0, la * u / 2.0);
            }
            r
        }
        _ => return Err(Error::Config("label does not match action".into())),
    };
    Ok(phase * radial)
}

/// Closed-form evaluation of the degenerate spherical function; independent
/// of t.
pub fn eval_degenerate(
    action: ActionDescriptor,
    w: &[Complex64],
    p: &GroupPoint,
) -> Result<Complex64> {
    if w.len() != action.n {
        return Err(Error::DimensionMismatch(w.len(), action.n));
    }
    let v = match action.kind {
        ActionKind::UnitaryFull => {
            let z2: f64 = p.z.iter().map(|x| x.norm_sqr()).sum();
            let w2: f64 = w.iter().map(|x| x.norm_sqr()).sum();
            bessel_profile(action.n as u32, z2 * w2)
        }
        ActionKind::Torus => {
            let mut r = 1.0;
            for (zj, wj) in p.z.iter().zip(w) {
                r *= bessel_profile(1, zj.norm_sqr() * wj.norm_sqr());
            }
            r
        }
    };
    Ok(Complex64::new(v, 0.0))
}

impl SmoothFn for SphericalFunction {
    fn n(&self) -> usize {
        self.action.n
    }

    fn eval(&self, p: &GroupPoint) -> Complex64 {
        match &self.label {
            SphericalLabel::Principal { lambda, alpha } => {
                eval_principal(self.action, *lambda, alpha, p).expect("validated at construction")
            }
            SphericalLabel::Degenerate { w } => {
                eval_degenerate(self.action, w, p).expect("validated at construction")
            }
        }
    }

    fn jet_at(&self, p: &GroupPoint, order: usize) -> Option<Jet> {
        let n = self.action.n;
        let nv = formal_vars(n);
        let space = JetSpace::get(nv, order);
        let tj = Jet::variable(&space, 0, Complex64::new(p.t, 0.0));
        // u_j = z_j zb_j jets
        let u_jets: Vec<Jet> = (0..n)
            .map(|j| {
                let zj = Jet::variable(&space, 1 + j, p.z[j]);
                let zbj = Jet::variable(&space, 1 + n + j, p.z[j].conj());
                zj.mul(&zbj)
            })
            .collect();
        let jet = match &self.label {
            SphericalLabel::Principal { lambda, alpha } => {
                let la = lambda.abs();
                let phase = tj.scale(Complex64::new(0.0, *lambda)).exp();
                let radial = match (self.action.kind, alpha) {
                    (ActionKind::UnitaryFull, IrredLabel::Unitary(k)) => {
                        let mut total = Jet::zero(&space);
                        for uj in &u_jets {
                            total = total.add(uj);
                        }
                        laguerre_factor(&total, *k, (n - 1) as f64, la, order)
                            .scale(Complex64::new(1.0 / binomial(k + n - 1, n - 1), 0.0))
                    }
                    (ActionKind::Torus, IrredLabel::Torus(a)) => {
                        let mut prod = Jet::constant(&space, Complex64::ONE);
                        for (uj, &kj) in u_jets.iter().zip(a) {
                            prod = prod.mul(&laguerre_factor(uj, kj, 0.0, la, order));
                        }
                        prod
                    }
                    _ => return None,
                };
                phase.mul(&radial)
            }
            SphericalLabel::Degenerate { w } => match self.action.kind {
                ActionKind::UnitaryFull => {
                    let w2: f64 = w.iter().map(|x| x.norm_sqr()).sum();
                    let mut total = Jet::zero(&space);
                    for uj in &u_jets {
                        total = total.add(uj);
                    }
                    bessel_factor(&total, n as u32, w2, order)
                }
                ActionKind::Torus => {
                    let mut prod = Jet::constant(&space, Complex64::ONE);
                    for (uj, wj) in u_jets.iter().zip(w) {
                        prod = prod.mul(&bessel_factor(uj, 1, wj.norm_sqr(), order));
                    }
                    prod
                }
            },
        };
        Some(jet)
    }
}

/// Jet of u -> e^{-la u/4} L_k^{(a)}(la u / 2) composed with the jet `u`.
fn laguerre_factor(u: &Jet, k: usize, a: f64, la: f64, order: usize) -> Jet {
    let gauss = u.scale(Complex64::new(-la / 4.0, 0.0)).exp();
    let x0 = la * u.value().re / 2.0;
    let derivs: Vec<Complex64> = (0..=order)
        .map(|j| Complex64::new(laguerre_deriv(k, a, x0, j) * (la / 2.0).powi(j as i32), 0.0))
        .collect();
    let lag = u.compose_univariate(&derivs);
    gauss.mul(&lag)
}

/// Jet of u -> B_nu(w2 * u) composed with the jet `u`, using
/// B_nu^{(j)}(s) = (-1/4)^j B_{nu+j}(s) / (nu (nu+1) .. (nu+j-1)).
fn bessel_factor(u: &Jet, nu: u32, w2: f64, order: usize) -> Jet {
    let s0 = w2 * u.value().re;
    let mut derivs = Vec::with_capacity(order + 1);
    let mut poch = 1.0;
    for j in 0..=order as u32 {
        if j > 0 {
            poch *= (nu + j - 1) as f64;
        }
        let d = (-0.25f64).powi(j as i32) / poch * bessel_profile(nu + j, s0);
        derivs.push(Complex64::new(d * w2.powi(j as i32), 0.0));
    }
    u.compose_univariate(&derivs)
}

// ---------------------------------------------------------------------------
// Oracles
// ---------------------------------------------------------------------------

/// Matrix-coefficient oracle at lambda = 1: averages the diagonal Fock-space
/// coefficients of the representation over the orthonormal monomial basis of
/// the degree-k space. Exact finite expansion; no Laguerre functions.
pub fn principal_oracle(action: ActionDescriptor, alpha: &IrredLabel, p: &GroupPoint) -> Complex64 {
    let n = action.n;
    let (dim, dlist): (usize, Vec<Vec<u32>>) = match (action.kind, alpha) {
        (ActionKind::UnitaryFull, IrredLabel::Unitary(k)) => (
            monomial_space_dim(*k, n),
            crate::invariant::monomial_basis(n, *k),
        ),
        (ActionKind::Torus, IrredLabel::Torus(a)) => {
            (1, vec![a.iter().map(|&x| x as u32).collect()])
        }
        _ => panic!("label does not match action"),
    };
    let mut sum = Complex64::ZERO;
    for d in &dlist {
        sum += diagonal_fock_coefficient(d, &p.z);
    }
    let z2: f64 = p.z.iter().map(|x| x.norm_sqr()).sum();
    let prefactor = Complex64::new(0.0, p.t).exp() * (-z2 / 4.0).exp();
    prefactor * sum / dim as f64
}

/// Coefficient of w^d in e^{-(1/2) w . conj(z)} prod_h (w_h + z_h)^{d_h},
/// which equals the diagonal matrix coefficient of the normalized monomial.
fn diagonal_fock_coefficient(d: &[u32], z: &[Complex64]) -> Complex64 {
    // expand per coordinate: coefficient of w_h^{c_h} in
    //   sum_{b} (-zb_h/2)^b w_h^b / b!  *  sum_{g} C(d_h, g) w_h^g z_h^{d_h-g}
    // and take c = d overall; b + g = d_h per coordinate forces g = d_h - b.
    let mut total = Complex64::new(1.0, 0.0);
    for (h, &dh) in d.iter().enumerate() {
        let mut coord = Complex64::ZERO;
        let mut bfact = 1.0;
        for b in 0..=dh {
            if b > 0 {
                bfact *= b as f64;
            }
            let g = dh - b;
            let mut val = Complex64::new(binomial(dh as usize, g as usize) / bfact, 0.0);
            for _ in 0..b {
                val *= -z[h].conj() / 2.0;
            }
            for _ in 0..(dh - g) {
                val *= z[h];
            }
            coord += val;
        }
        total *= coord;
    }
    total
}

/// Orbit-average oracle for the degenerate family: quadrature of
/// e^{i Re <z, k w>} over the group orbit of w (circle products for the
/// torus, the full sphere for the unitary action; n <= 2 for the latter).
pub fn degenerate_oracle(action: ActionDescriptor, w: &[Complex64], p: &GroupPoint) -> Complex64 {
    match action.kind {
        ActionKind::Torus => {
            let mut prod = Complex64::new(1.0, 0.0);
            for (zj, wj) in p.z.iter().zip(w) {
                prod *= circle_average(*zj, *wj);
            }
            prod
        }
        ActionKind::UnitaryFull => {
            let s = w.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            match action.n {
                1 => circle_average(p.z[0], Complex64::new(s, 0.0)),
                2 => sphere3_average(&p.z, s),
                _ => panic!("degenerate oracle implemented for n <= 2"),
            }
        }
    }
}

fn circle_average(z: Complex64, w: Complex64) -> Complex64 {
    let m = 512usize;
    let mut sum = Complex64::ZERO;
    for i in 0..m {
        let th = 2.0 * std::f64::consts::PI * i as f64 / m as f64;
        let k = Complex64::new(0.0, th).exp();
        let re = (z * (k * w).conj()).re;
        sum += Complex64::new(0.0, re).exp();
    }
    sum / m as f64
}

/// Average of e^{i Re <z, u>} over the sphere |u| = s in C^2, with
/// u = s (e^{i a} cos psi, e^{i b} sin psi) and measure
/// 2 cos psi sin psi d psi * da/2pi * db/2pi.
fn sphere3_average(z: &[Complex64], s: f64) -> Complex64 {
    let mth = 64usize;
    let gl = crate::quad::GaussLegendre::new(48);
    let mut sum = Complex64::ZERO;
    for (psi, wpsi) in gl.scaled(0.0, std::f64::consts::FRAC_PI_2) {
        let (c, si) = (psi.cos(), psi.sin());
        let mut inner = Complex64::ZERO;
        for ia in 0..mth {
            let a = 2.0 * std::f64::consts::PI * ia as f64 / mth as f64;
            let u1 = s * c * Complex64::new(0.0, a).exp();
            let re1 = (z[0] * u1.conj()).re;
            for ib in 0..mth {
                let b = 2.0 * std::f64::consts::PI * ib as f64 / mth as f64;
                let u2 = s * si * Complex64::new(0.0, b).exp();
                let re = re1 + (z[1] * u2.conj()).re;
                inner += Complex64::new(0.0, re).exp();
            }
        }
        sum += inner * (2.0 * c * si * wpsi / (mth * mth) as f64);
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sample_points(n: usize, count: usize) -> Vec<GroupPoint> {
        (0..count)
            .map(|i| {
                let x = i as f64 * 0.193 + 0.1;
                let z = (0..n)
                    .map(|j| {
                        c(
                            1.7 * (x * (j + 1) as f64).sin(),
                            1.3 * (x * 0.77 + j as f64).cos(),
                        )
                    })
                    .collect();
                GroupPoint::new((x * 1.31).sin() * 2.0, z)
            })
            .collect()
    }

    #[test]
    fn principal_at_center_ray() {
        // p = (t, 0) -> e^{i lambda t}
        let action = ActionDescriptor::unitary(2);
        let p = GroupPoint::new(0.83, vec![Complex64::ZERO; 2]);
        let v = eval_principal(action, -1.7, &IrredLabel::Unitary(5), &p).unwrap();
        let want = c(0.0, -1.7 * 0.83).exp();
        assert!((v - want).norm() < 1e-15);
    }

    #[test]
    fn normalization_at_identity() {
        let e1 = GroupPoint::identity(1);
        let e2 = GroupPoint::identity(2);
        for k in 0..=8 {
            let v = eval_principal(ActionDescriptor::unitary(2), 1.0, &IrredLabel::Unitary(k), &e2)
                .unwrap();
            assert_eq!(v, Complex64::ONE);
        }
        let v = eval_degenerate(ActionDescriptor::unitary(1), &[c(2.0, 1.0)], &e1).unwrap();
        assert_eq!(v, Complex64::ONE);
        let w0 = eval_degenerate(ActionDescriptor::unitary(1), &[Complex64::ZERO], &sample_points(1, 1)[0]).unwrap();
        assert_eq!(w0, Complex64::ONE);
    }

    #[test]
    fn lambda_zero_is_an_error() {
        let p = GroupPoint::identity(1);
        assert!(matches!(
            eval_principal(ActionDescriptor::unitary(1), 0.0, &IrredLabel::Unitary(0), &p),
            Err(Error::DegenerateLambda)
        ));
    }

    #[test]
    fn closed_form_vs_matrix_coefficient_unitary() {
        for n in 1..=2usize {
            let action = ActionDescriptor::unitary(n);
            for k in 0..=8usize {
                for p in sample_points(n, 12) {
                    let closed =
                        eval_principal(action, 1.0, &IrredLabel::Unitary(k), &p).unwrap();
                    let oracle = principal_oracle(action, &IrredLabel::Unitary(k), &p);
                    assert!(
                        (closed - oracle).norm() < 1e-12,
                        "n={n} k={k}: {closed} vs {oracle}"
                    );
                }
            }
        }
    }

    #[test]
    fn closed_form_vs_matrix_coefficient_torus() {
        let action = ActionDescriptor::torus(2);
        for a in 0..=4usize {
            for b in 0..=3usize {
                let label = IrredLabel::Torus(vec![a, b]);
                for p in sample_points(2, 8) {
                    let closed = eval_principal(action, 1.0, &label, &p).unwrap();
                    let oracle = principal_oracle(action, &label, &p);
                    assert!((closed - oracle).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn radial_part_is_real() {
        // phi * e^{-i lambda t} is real (the invariant polynomial is real)
        let action = ActionDescriptor::unitary(2);
        for p in sample_points(2, 10) {
            let v = eval_principal(action, 1.4, &IrredLabel::Unitary(3), &p).unwrap();
            let dephased = v * c(0.0, -1.4 * p.t).exp();
            assert!(dephased.im.abs() < 1e-14);
        }
    }

    #[test]
    fn scaling_law() {
        let action = ActionDescriptor::unitary(1);
        let alpha = IrredLabel::Unitary(4);
        for p in sample_points(1, 10) {
            for &la in &[0.3, 2.0, 5.5] {
                let lhs = eval_principal(action, la, &alpha, &p).unwrap();
                let scaled = GroupPoint::new(
                    la * p.t,
                    p.z.iter().map(|w| w * la.sqrt()).collect(),
                );
                let rhs = eval_principal(action, 1.0, &alpha, &scaled).unwrap();
                assert!((lhs - rhs).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn conjugation_for_negative_lambda() {
        let action = ActionDescriptor::torus(2);
        let alpha = IrredLabel::Torus(vec![2, 1]);
        for p in sample_points(2, 6) {
            let neg = eval_principal(action, -0.9, &alpha, &p).unwrap();
            let pos = eval_principal(action, 0.9, &alpha, &p).unwrap();
            assert!((neg - pos.conj()).norm() < 1e-14);
        }
    }

    #[test]
    fn degenerate_closed_form_vs_orbit_quadrature() {
        // torus n=2 and unitary n=1,2
        let tor = ActionDescriptor::torus(2);
        let w = vec![c(1.2, -0.4), c(0.3, 0.9)];
        for p in sample_points(2, 8) {
            let closed = eval_degenerate(tor, &w, &p).unwrap();
            let oracle = degenerate_oracle(tor, &w, &p);
            assert!((closed - oracle).norm() < 1e-10, "{closed} vs {oracle}");
        }
        let un1 = ActionDescriptor::unitary(1);
        let w1 = vec![c(0.8, 0.7)];
        for p in sample_points(1, 8) {
            let closed = eval_degenerate(un1, &w1, &p).unwrap();
            let oracle = degenerate_oracle(un1, &w1, &p);
            assert!((closed - oracle).norm() < 1e-10);
        }
        let un2 = ActionDescriptor::unitary(2);
        let w2 = vec![c(0.5, -0.2), c(-0.4, 0.6)];
        for p in sample_points(2, 6) {
            let closed = eval_degenerate(un2, &w2, &p).unwrap();
            let oracle = degenerate_oracle(un2, &w2, &p);
            assert!((closed - oracle).norm() < 1e-9, "{closed} vs {oracle}");
        }
    }

    #[test]
    fn degenerate_bounded_by_one() {
        let un2 = ActionDescriptor::unitary(2);
        let w = vec![c(1.5, 0.1), c(-0.7, 2.0)];
        for p in sample_points(2, 40) {
            let v = eval_degenerate(un2, &w, &p).unwrap();
            assert!(v.norm() <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn eigenfunction_property_principal() {
        use crate::invariant::build_generator_system;
        // V_j phi = |lambda|^{m_j} table * phi, via exact jets
        for action in [ActionDescriptor::unitary(1), ActionDescriptor::torus(2)] {
            let gs = build_generator_system(action, 8).unwrap();
            let labels: Vec<IrredLabel> = gs.labels_up_to(4);
            for alpha in labels.iter().step_by(3) {
                let lambda = -1.3;
                let phi = SphericalFunction::principal(action, lambda, alpha.clone()).unwrap();
                for (j, op) in gs.operators.iter().enumerate() {
                    let dop = op.to_diffop().unwrap();
                    let want = lambda.abs().powi(gs.degrees[j] as i32)
                        * gs.eigenvalue(j, alpha).unwrap() as f64;
                    for p in sample_points(action.n, 5) {
                        let jet = phi.jet_at(&p, dop.max_order()).unwrap();
                        let got = dop.apply(&jet, &p.formal());
                        let expect = phi.eval(&p) * want;
                        let denom = expect.norm().max(1e-3);
                        assert!(
                            (got - expect).norm() / denom < 1e-9,
                            "{action} {alpha:?} j={j}: {got} vs {expect}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn eigenfunction_property_degenerate() {
        use crate::heisenberg::{apply_field, Field};
        use crate::invariant::build_generator_system;
        for action in [ActionDescriptor::unitary(1), ActionDescriptor::torus(2)] {
            let gs = build_generator_system(action, 8).unwrap();
            let w: Vec<Complex64> = (0..action.n).map(|j| c(0.9 + 0.3 * j as f64, -0.5)).collect();
            let eta = SphericalFunction::degenerate(action, w.clone()).unwrap();
            let rho = gs.rho_eval(&w);
            for (j, op) in gs.operators.iter().enumerate() {
                let dop = op.to_diffop().unwrap();
                for p in sample_points(action.n, 5) {
                    let jet = eta.jet_at(&p, dop.max_order()).unwrap();
                    let got = dop.apply(&jet, &p.formal());
                    let expect = eta.eval(&p) * rho[j];
                    assert!(
                        (got - expect).norm() / expect.norm().max(1e-3) < 1e-9,
                        "{action} j={j}: {got} vs {expect}"
                    );
                }
            }
            // -iT eta = 0
            for p in sample_points(action.n, 5) {
                let t = apply_field(Field::T, &eta, &p).unwrap();
                assert!(t.norm() < 1e-14);
            }
        }
    }
}
