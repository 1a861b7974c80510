//! Quadrature rules: Gauss-Legendre nodes/weights (Newton on the Legendre
//! recurrence) and Chebyshev series utilities for spectrally accurate
//! antiderivatives along an axis.

/// Gauss-Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            // Tricomi initial guess, then Newton.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_and_deriv(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
            let (_, d) = legendre_and_deriv(n, 0.0);
            weights[n / 2] = 2.0 / (d * d);
        }
        GaussLegendre { nodes, weights }
    }

    /// Nodes and weights mapped to [a, b].
    pub fn scaled(&self, a: f64, b: f64) -> Vec<(f64, f64)> {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| (c + h * x, h * w))
            .collect()
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, a: f64, b: f64, f: F) -> f64 {
        self.scaled(a, b).iter().map(|&(x, w)| w * f(x)).sum()
    }
}

fn legendre_and_deriv(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 1..n {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * p0) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// A fixed quadrature rule as explicit (node, weight) pairs.
#[derive(Debug, Clone)]
pub struct Rule {
    pub points: Vec<(f64, f64)>,
}

impl Rule {
    pub fn gauss(n: usize, a: f64, b: f64) -> Self {
        Rule { points: GaussLegendre::new(n).scaled(a, b) }
    }

    /// Two symmetric Gauss panels [-b, 0] and [0, b]; keeps |x|^k integrands
    /// smooth on each panel.
    pub fn symmetric_panels(n_per_panel: usize, b: f64) -> Self {
        let gl = GaussLegendre::new(n_per_panel);
        let mut points = gl.scaled(-b, 0.0);
        points.extend(gl.scaled(0.0, b));
        Rule { points }
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.points.iter().map(|&(x, w)| w * f(x)).sum()
    }
}

/// Chebyshev representation of a smooth function on [a, b], sampled at
/// Chebyshev-Lobatto points. Supports evaluation, definite integrals and the
/// antiderivative, all spectrally accurate.
#[derive(Debug, Clone)]
pub struct ChebSeries {
    pub a: f64,
    pub b: f64,
    /// Chebyshev coefficients c_0 .. c_n for sum' c_k T_k.
    pub coeffs: Vec<f64>,
}

/// Chebyshev-Lobatto points on [a, b], ascending, n+1 points.
pub fn chebyshev_points(n: usize, a: f64, b: f64) -> Vec<f64> {
    (0..=n)
        .map(|j| {
            let t = (std::f64::consts::PI * j as f64 / n as f64).cos();
            0.5 * (a + b) - 0.5 * (b - a) * t
        })
        .collect()
}

impl ChebSeries {
    /// Build from values at `chebyshev_points(n, a, b)` (ascending order).
    pub fn from_values(a: f64, b: f64, values: &[f64]) -> Self {
        let n = values.len() - 1;
        // values[j] corresponds to x_j with theta_j = pi (n-j)/n
        let mut coeffs = vec![0.0; n + 1];
        for (k, c) in coeffs.iter_mut().enumerate() {
            let mut s = 0.0;
            for (j, &v) in values.iter().enumerate() {
                let theta = std::f64::consts::PI * (n - j) as f64 / n as f64;
                let w = if j == 0 || j == n { 0.5 } else { 1.0 };
                s += w * v * (k as f64 * theta).cos();
            }
            *c = 2.0 * s / n as f64;
            if k == 0 || k == n {
                *c *= 0.5;
            }
        }
        ChebSeries { a, b, coeffs }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let t = (2.0 * x - self.a - self.b) / (self.b - self.a);
        // Clenshaw
        let mut b1 = 0.0;
        let mut b2 = 0.0;
        for &c in self.coeffs.iter().skip(1).rev() {
            let b0 = 2.0 * t * b1 - b2 + c;
            b2 = b1;
            b1 = b0;
        }
        t * b1 - b2 + self.coeffs[0]
    }

    /// Antiderivative vanishing at the left endpoint `a`.
    pub fn antiderivative(&self) -> ChebSeries {
        let n = self.coeffs.len() - 1;
        let h = 0.5 * (self.b - self.a);
        let mut d = vec![0.0; n + 2];
        for k in 1..=n {
            let ck = self.coeffs[k];
            let ckp2 = if k + 2 <= n { self.coeffs[k + 2] } else { 0.0 };
            d[k + 1] = h * (ck - ckp2) / (2.0 * (k + 1) as f64);
        }
        if n >= 1 {
            let c2 = if n >= 2 { self.coeffs[2] } else { 0.0 };
            d[1] = h * (2.0 * self.coeffs[0] - c2) / 2.0;
        }
        // pin F(a) = 0: T_k(-1) = (-1)^k
        let mut at_a = 0.0;
        for (k, &dk) in d.iter().enumerate() {
            at_a += dk * if k % 2 == 0 { 1.0 } else { -1.0 };
        }
        d[0] -= at_a;
        ChebSeries { a: self.a, b: self.b, coeffs: d }
    }

    /// Definite integral over [a, b].
    pub fn integral(&self) -> f64 {
        let h = 0.5 * (self.b - self.a);
        let mut s = 2.0 * self.coeffs[0];
        let mut k = 2;
        while k < self.coeffs.len() {
            s -= 2.0 * self.coeffs[k] / ((k * k - 1) as f64);
            k += 2;
        }
        s * h
    }
}

/// Uniform symmetric grid on [-half, half] with `2*half_count + 1` points,
/// always containing 0.
pub fn symmetric_grid(half: f64, half_count: usize) -> Vec<f64> {
    let n = half_count as i64;
    (-n..=n).map(|i| half * i as f64 / n as f64).collect()
}

/// Uniform grid on [0, len] with `count` points including both endpoints.
pub fn ray_grid(len: f64, count: usize) -> Vec<f64> {
    (0..count).map(|i| len * i as f64 / (count - 1) as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_polynomial_exactness() {
        let gl = GaussLegendre::new(8);
        // exact for degree <= 15
        let val = gl.integrate(0.0, 1.0, |x| x.powi(15));
        assert!((val - 1.0 / 16.0).abs() < 1e-14);
    }

    #[test]
    fn gauss_legendre_gaussian() {
        let gl = GaussLegendre::new(64);
        let val = gl.integrate(-8.0, 8.0, |x| (-x * x).exp());
        assert!((val - std::f64::consts::PI.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn cheb_roundtrip_and_antiderivative() {
        let n = 64;
        let pts = chebyshev_points(n, -3.0, 5.0);
        let vals: Vec<f64> = pts.iter().map(|&x| (-0.3 * x * x).exp() * x.cos()).collect();
        let s = ChebSeries::from_values(-3.0, 5.0, &vals);
        for &x in &[-2.9f64, -1.0, 0.0, 2.2, 4.9] {
            let f = (-0.3 * x * x).exp() * x.cos();
            assert!((s.eval(x) - f).abs() < 1e-12);
        }
        let anti = s.antiderivative();
        assert!(anti.eval(-3.0).abs() < 1e-13);
        // F(b) should equal the definite integral
        assert!((anti.eval(5.0) - s.integral()).abs() < 1e-12);
        // derivative check via finite differences of the antiderivative
        let x = 1.3;
        let h = 1e-5;
        let fd = (anti.eval(x + h) - anti.eval(x - h)) / (2.0 * h);
        assert!((fd - s.eval(x)).abs() < 1e-8);
    }
}
