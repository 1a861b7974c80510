//! Truncated multivariate Taylor arithmetic ("jets") with complex
//! coefficients. Functions on the group are treated in Wirtinger style as
//! power series in the formal variables (t, z_1..z_n, zb_1..zb_n), so the
//! complex fields become coefficient extractions.

use num_complex::Complex64;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Monomial basis and product table for jets in `nvars` variables truncated
/// at total degree `order`.
#[derive(Debug)]
pub struct JetSpace {
    pub nvars: usize,
    pub order: usize,
    pub monomials: Vec<Vec<u8>>,
    index: HashMap<Vec<u8>, usize>,
    /// (i, j, k) with monomial_i * monomial_j = monomial_k
    products: Vec<(u32, u32, u32)>,
}

fn enumerate_monomials(nvars: usize, order: usize) -> Vec<Vec<u8>> {
    let mut out = vec![];
    let mut cur = vec![0u8; nvars];
    fn rec(out: &mut Vec<Vec<u8>>, cur: &mut Vec<u8>, var: usize, left: usize) {
        if var == cur.len() {
            out.push(cur.clone());
            return;
        }
        for e in 0..=left {
            cur[var] = e as u8;
            rec(out, cur, var + 1, left - e);
        }
        cur[var] = 0;
    }
    rec(&mut out, &mut cur, 0, order);
    // sort by total degree then lex for determinism
    out.sort_by_key(|m| (m.iter().map(|&e| e as usize).sum::<usize>(), m.clone()));
    out
}

impl JetSpace {
    fn new(nvars: usize, order: usize) -> Self {
        let monomials = enumerate_monomials(nvars, order);
        let index: HashMap<Vec<u8>, usize> =
            monomials.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        let deg =
            |m: &Vec<u8>| -> usize { m.iter().map(|&e| e as usize).sum() };
        let mut products = vec![];
        for (i, mi) in monomials.iter().enumerate() {
            let di = deg(mi);
            for (j, mj) in monomials.iter().enumerate() {
                if di + deg(mj) > order {
                    continue;
                }
                let sum: Vec<u8> = mi.iter().zip(mj).map(|(a, b)| a + b).collect();
                let k = index[&sum];
                products.push((i as u32, j as u32, k as u32));
            }
        }
        JetSpace { nvars, order, monomials, index, products }
    }

    pub fn get(nvars: usize, order: usize) -> Arc<JetSpace> {
        static CACHE: OnceLock<Mutex<HashMap<(usize, usize), Arc<JetSpace>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().unwrap();
        guard
            .entry((nvars, order))
            .or_insert_with(|| Arc::new(JetSpace::new(nvars, order)))
            .clone()
    }

    pub fn dim(&self) -> usize {
        self.monomials.len()
    }

    pub fn monomial_index(&self, expo: &[u8]) -> Option<usize> {
        self.index.get(expo).copied()
    }
}

/// A truncated Taylor expansion around some base point.
#[derive(Debug, Clone)]
pub struct Jet {
    pub space: Arc<JetSpace>,
    pub coeffs: Vec<Complex64>,
}

impl Jet {
    pub fn zero(space: &Arc<JetSpace>) -> Self {
        Jet { space: space.clone(), coeffs: vec![Complex64::ZERO; space.dim()] }
    }

    pub fn constant(space: &Arc<JetSpace>, c: Complex64) -> Self {
        let mut j = Jet::zero(space);
        j.coeffs[0] = c;
        j
    }

    /// The coordinate function `var` expanded at base value `v0`.
    pub fn variable(space: &Arc<JetSpace>, var: usize, v0: Complex64) -> Self {
        let mut j = Jet::zero(space);
        j.coeffs[0] = v0;
        if space.order >= 1 {
            let mut e = vec![0u8; space.nvars];
            e[var] = 1;
            let idx = space.monomial_index(&e).unwrap();
            j.coeffs[idx] = Complex64::ONE;
        }
        j
    }

    pub fn value(&self) -> Complex64 {
        self.coeffs[0]
    }

    /// Partial derivative value: coeff * multi-factorial.
    pub fn derivative(&self, expo: &[u8]) -> Complex64 {
        match self.space.monomial_index(expo) {
            None => Complex64::ZERO,
            Some(i) => {
                let mut fact = 1.0;
                for &e in expo {
                    for k in 2..=e as usize {
                        fact *= k as f64;
                    }
                }
                self.coeffs[i] * fact
            }
        }
    }

    pub fn add(&self, other: &Jet) -> Jet {
        let mut out = self.clone();
        for (a, b) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
        out
    }

    pub fn sub(&self, other: &Jet) -> Jet {
        let mut out = self.clone();
        for (a, b) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *a -= b;
        }
        out
    }

    pub fn scale(&self, c: Complex64) -> Jet {
        let mut out = self.clone();
        for a in out.coeffs.iter_mut() {
            *a *= c;
        }
        out
    }

    pub fn mul(&self, other: &Jet) -> Jet {
        let mut out = Jet::zero(&self.space);
        for &(i, j, k) in &self.space.products {
            let a = self.coeffs[i as usize];
            if a == Complex64::ZERO {
                continue;
            }
            let b = other.coeffs[j as usize];
            if b == Complex64::ZERO {
                continue;
            }
            out.coeffs[k as usize] += a * b;
        }
        out
    }

    /// Compose with a univariate outer function given its derivative values
    /// `derivs[k] = h^(k)(g(base))` for k = 0..=order.
    pub fn compose_univariate(&self, derivs: &[Complex64]) -> Jet {
        let order = self.space.order;
        assert!(derivs.len() > order);
        let mut frac = self.clone();
        frac.coeffs[0] = Complex64::ZERO; // nilpotent part
        // Horner: h(g0) + N (h'(g0) + N (h''(g0)/2 + ...))
        let mut acc = Jet::constant(&self.space, derivs[order] / factorial(order));
        for k in (0..order).rev() {
            acc = frac.mul(&acc);
            acc.coeffs[0] += derivs[k] / factorial(k);
        }
        acc
    }

    pub fn exp(&self) -> Jet {
        let g0 = self.value().exp();
        let derivs: Vec<Complex64> = (0..=self.space.order).map(|_| g0).collect();
        self.compose_univariate(&derivs)
    }

    /// Substitute jets for the variables of a Taylor expansion: `f_jet` is the
    /// expansion of f at the point whose coordinates are the values of `args`;
    /// the result expands x -> f(args(x)).
    pub fn substitute(f_jet: &Jet, args: &[Jet]) -> Jet {
        let space = &args[0].space;
        assert_eq!(args.len(), f_jet.space.nvars);
        // centered argument jets
        let centered: Vec<Jet> = args
            .iter()
            .map(|a| {
                let mut c = a.clone();
                c.coeffs[0] = Complex64::ZERO;
                c
            })
            .collect();
        let mut out = Jet::zero(space);
        // iterate over f's monomials; build powers lazily per monomial
        for (i, expo) in f_jet.space.monomials.iter().enumerate() {
            let c = f_jet.coeffs[i];
            if c == Complex64::ZERO {
                continue;
            }
            let mut term = Jet::constant(space, c);
            for (var, &e) in expo.iter().enumerate() {
                for _ in 0..e {
                    term = term.mul(&centered[var]);
                }
            }
            out = out.add(&term);
        }
        out
    }
}

fn factorial(k: usize) -> f64 {
    let mut f = 1.0;
    for i in 2..=k {
        f *= i as f64;
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn product_and_exp() {
        let space = JetSpace::get(2, 3);
        let x = Jet::variable(&space, 0, c(0.5));
        let y = Jet::variable(&space, 1, c(-1.0));
        // f = exp(x*y), df/dx = y f, d2f/dxdy = (1 + xy) f
        let f = x.mul(&y).exp();
        let f0 = (0.5f64 * -1.0).exp();
        assert!((f.value().re - f0).abs() < 1e-15);
        assert!((f.derivative(&[1, 0]).re - (-1.0 * f0)).abs() < 1e-14);
        let d2 = f.derivative(&[1, 1]).re;
        assert!((d2 - (1.0 + 0.5 * -1.0) * f0).abs() < 1e-14);
    }

    #[test]
    fn substitution_chain_rule() {
        // g(u,v) = u^2 + 3v at (u0,v0) = (2, 1); u = x+y, v = x*y at (1,1)
        let outer = JetSpace::get(2, 2);
        let inner = JetSpace::get(2, 2);
        let u0 = c(2.0);
        let v0 = c(1.0);
        let gu = Jet::variable(&outer, 0, u0);
        let gv = Jet::variable(&outer, 1, v0);
        let g = gu.mul(&gu).add(&gv.scale(c(3.0)));
        let x = Jet::variable(&inner, 0, c(1.0));
        let y = Jet::variable(&inner, 1, c(1.0));
        let u = x.add(&y);
        let v = x.mul(&y);
        let h = Jet::substitute(&g, &[u, v]);
        // h = (x+y)^2 + 3xy; at (1,1): value 7, dh/dx = 2(x+y) + 3y = 7
        assert!((h.value().re - 7.0).abs() < 1e-14);
        assert!((h.derivative(&[1, 0]).re - 7.0).abs() < 1e-14);
        assert!((h.derivative(&[1, 1]).re - 5.0).abs() < 1e-14);
    }
}
