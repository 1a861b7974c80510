//! Polynomial-coefficient differential operators in the formal variables
//! (t, z_1..z_n, zb_1..zb_n). Words in the left-invariant fields compose to
//! such operators, which then act on jets pointwise.

use crate::jet::Jet;
use num_complex::Complex64;
use std::collections::HashMap;

/// Polynomial in the formal variables, sparse monomial map.
#[derive(Debug, Clone, Default)]
pub struct Poly {
    pub terms: HashMap<Vec<u8>, Complex64>,
}

impl Poly {
    pub fn constant(nvars: usize, c: Complex64) -> Poly {
        let mut terms = HashMap::new();
        terms.insert(vec![0u8; nvars], c);
        Poly { terms }
    }

    pub fn variable(nvars: usize, var: usize, c: Complex64) -> Poly {
        let mut e = vec![0u8; nvars];
        e[var] = 1;
        let mut terms = HashMap::new();
        terms.insert(e, c);
        Poly { terms }
    }

    pub fn add_assign(&mut self, other: &Poly) {
        for (e, c) in &other.terms {
            *self.terms.entry(e.clone()).or_insert(Complex64::ZERO) += c;
        }
        self.terms.retain(|_, c| c.norm_sqr() > 0.0);
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::default();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u8> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                *out.terms.entry(e).or_insert(Complex64::ZERO) += ca * cb;
            }
        }
        out
    }

    /// Partial derivative in variable `var`.
    pub fn diff(&self, var: usize) -> Poly {
        let mut out = Poly::default();
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[var] -= 1;
            *out.terms.entry(e2).or_insert(Complex64::ZERO) += c * e[var] as f64;
        }
        out
    }

    pub fn eval(&self, point: &[Complex64]) -> Complex64 {
        let mut s = Complex64::ZERO;
        for (e, c) in &self.terms {
            let mut m = *c;
            for (var, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    m *= point[var];
                }
            }
            s += m;
        }
        s
    }
}

/// Sum of terms coeff-poly * d^multi.
#[derive(Debug, Clone)]
pub struct DiffOp {
    pub nvars: usize,
    pub terms: HashMap<Vec<u8>, Poly>,
}

impl DiffOp {
    pub fn zero(nvars: usize) -> DiffOp {
        DiffOp { nvars, terms: HashMap::new() }
    }

    pub fn identity(nvars: usize) -> DiffOp {
        let mut op = DiffOp::zero(nvars);
        op.terms.insert(vec![0u8; nvars], Poly::constant(nvars, Complex64::ONE));
        op
    }

    /// First-order operator `poly_coeff * d/d var`.
    pub fn first_order(nvars: usize, var: usize, coeff: Poly) -> DiffOp {
        let mut op = DiffOp::zero(nvars);
        let mut e = vec![0u8; nvars];
        e[var] = 1;
        op.terms.insert(e, coeff);
        op
    }

    pub fn add_term(&mut self, expo: Vec<u8>, coeff: Poly) {
        match self.terms.get_mut(&expo) {
            Some(p) => p.add_assign(&coeff),
            None => {
                self.terms.insert(expo, coeff);
            }
        }
    }

    pub fn add(&self, other: &DiffOp) -> DiffOp {
        let mut out = self.clone();
        for (e, p) in &other.terms {
            out.add_term(e.clone(), p.clone());
        }
        out
    }

    pub fn scale(&self, c: Complex64) -> DiffOp {
        let mut out = self.clone();
        for p in out.terms.values_mut() {
            for v in p.terms.values_mut() {
                *v *= c;
            }
        }
        out
    }

    /// Operator composition self . other (apply `other` first).
    /// Leibniz: d^a (d . ) requires distributing derivatives over the
    /// coefficient polynomials of `other`.
    pub fn compose(&self, other: &DiffOp) -> DiffOp {
        let mut out = DiffOp::zero(self.nvars);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                // d^a (cb d^b) = sum_{g <= a} binom(a, g) (d^g cb) d^{a-g+b}
                distribute(self.nvars, a, cb, &mut |gamma_deriv_cb, a_minus_g| {
                    let expo: Vec<u8> =
                        a_minus_g.iter().zip(b).map(|(x, y)| x + y).collect();
                    let coeff = ca.mul(gamma_deriv_cb);
                    out.add_term(expo, coeff);
                });
            }
        }
        out
    }

    /// Highest derivative order used by any term.
    pub fn max_order(&self) -> usize {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as usize).sum())
            .max()
            .unwrap_or(0)
    }

    /// Apply at a point given a jet of the target function at that point.
    /// `point` lists the formal-variable values (t, z.., zb..).
    pub fn apply(&self, f_jet: &Jet, point: &[Complex64]) -> Complex64 {
        let mut s = Complex64::ZERO;
        for (e, p) in &self.terms {
            let d = f_jet.derivative(e);
            if d != Complex64::ZERO {
                s += p.eval(point) * d;
            }
        }
        s
    }
}

/// Enumerate gamma <= a with multinomial factors, calling
/// `visit(d^gamma coeff * binom(a,gamma), a - gamma)`.
fn distribute(
    nvars: usize,
    a: &[u8],
    coeff: &Poly,
    visit: &mut dyn FnMut(&Poly, &[u8]),
) {
    fn rec(
        var: usize,
        a: &[u8],
        current: Poly,
        gamma: &mut Vec<u8>,
        factor: f64,
        visit: &mut dyn FnMut(&Poly, &[u8]),
    ) {
        if var == a.len() {
            if factor != 1.0 {
                let mut scaled = current.clone();
                for v in scaled.terms.values_mut() {
                    *v *= factor;
                }
                let rem: Vec<u8> = a.iter().zip(gamma.iter()).map(|(x, g)| x - g).collect();
                visit(&scaled, &rem);
            } else {
                let rem: Vec<u8> = a.iter().zip(gamma.iter()).map(|(x, g)| x - g).collect();
                visit(&current, &rem);
            }
            return;
        }
        let mut d = current;
        let mut binom = 1.0;
        for g in 0..=a[var] {
            gamma[var] = g;
            if g > 0 {
                binom *= (a[var] - g + 1) as f64 / g as f64;
                d = d.diff(var);
                if d.terms.is_empty() {
                    gamma[var] = 0;
                    return;
                }
            }
            rec(var + 1, a, d.clone(), gamma, factor * binom, visit);
        }
        gamma[var] = 0;
    }
    let _ = nvars;
    let mut gamma = vec![0u8; a.len()];
    rec(0, a, coeff.clone(), &mut gamma, 1.0, visit);
}
