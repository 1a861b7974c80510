//! Smooth flat-plateau cutoff functions built from the classical e^{-1/x}
//! profile; all are identically 1 and identically 0 on closed regions so
//! finite-difference jet checks see clean plateaus.

/// 0 for x <= 0, 1 for x >= 1, smooth and flat at both ends.
pub fn smooth_step(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        let a = (-1.0 / x).exp();
        let b = (-1.0 / (1.0 - x)).exp();
        a / (a + b)
    }
}

/// Even bump: 1 on |x| <= a, 0 on |x| >= b.
#[derive(Debug, Clone, Copy)]
pub struct Bump {
    pub plateau: f64,
    pub support: f64,
}

impl Bump {
    pub fn new(plateau: f64, support: f64) -> Self {
        assert!(0.0 <= plateau && plateau < support);
        Bump { plateau, support }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let ax = x.abs();
        if ax <= self.plateau {
            1.0
        } else if ax >= self.support {
            0.0
        } else {
            smooth_step((self.support - ax) / (self.support - self.plateau))
        }
    }
}

/// eta: 1 on |x| <= 1, 0 on |x| >= 2.
pub fn eta(x: f64) -> f64 {
    Bump::new(1.0, 2.0).eval(x)
}

/// The curve-interpolation window: 1 on |x| <= 1/2, 0 on |x| >= 3/4.
pub fn interpolation_window(x: f64) -> f64 {
    Bump::new(0.5, 0.75).eval(x)
}

/// psi: 1 on |x| <= 2, 0 on |x| >= 3 (the building block of the spectrum
/// neighborhood cutoff).
pub fn psi(x: f64) -> f64 {
    Bump::new(2.0, 3.0).eval(x)
}

/// The smooth function equal to 1 on a neighborhood of the embedded
/// spectrum, homogeneous of degree 0 outside a compact set:
/// Psi = psi(A) + psi(lambda^2 / S)(1 - psi(A)), with
/// A = lambda^2 + sum |xi_l|^{2/m_l} and S = sum |xi_l|^{2/m_l}.
#[derive(Debug, Clone)]
pub struct SpectrumNeighborhood {
    pub degrees: Vec<usize>,
}

impl SpectrumNeighborhood {
    pub fn eval(&self, lambda: f64, xi: &[f64]) -> f64 {
        let s: f64 = xi
            .iter()
            .zip(&self.degrees)
            .map(|(&x, &m)| x.abs().powf(2.0 / m as f64))
            .sum();
        let a = lambda * lambda + s;
        let pa = psi(a);
        if pa == 1.0 {
            return 1.0;
        }
        let ratio = if s > 0.0 {
            lambda * lambda / s
        } else if lambda == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        pa + psi(ratio) * (1.0 - pa)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_plateaus_and_monotone() {
        assert_eq!(smooth_step(-0.1), 0.0);
        assert_eq!(smooth_step(0.0), 0.0);
        assert_eq!(smooth_step(1.0), 1.0);
        assert!((smooth_step(0.5) - 0.5).abs() < 1e-15);
        let mut prev = 0.0;
        for i in 0..=100 {
            let v = smooth_step(i as f64 / 100.0);
            assert!(v >= prev - 1e-15);
            prev = v;
        }
    }

    #[test]
    fn window_supports() {
        assert_eq!(interpolation_window(0.49), 1.0);
        assert_eq!(interpolation_window(-0.5), 1.0);
        assert_eq!(interpolation_window(0.76), 0.0);
        assert!(interpolation_window(0.6) > 0.0 && interpolation_window(0.6) < 1.0);
    }

    #[test]
    fn spectrum_neighborhood_is_one_on_curves() {
        // points (lambda, |lambda|^{m} v) with v >= 1 lie inside the plateau
        let psi_n = SpectrumNeighborhood { degrees: vec![1, 1] };
        for &l in &[0.01f64, 0.5, 1.0, 3.0, -2.0, 10.0] {
            for &v1 in &[2.0, 6.0, 50.0] {
                let xi = [l.abs() * v1, l.abs() * 5.0];
                assert_eq!(psi_n.eval(l, &xi), 1.0, "l={l} v={v1}");
            }
        }
        // on the degenerate plane
        assert_eq!(psi_n.eval(0.0, &[3.0, 7.0]), 1.0);
        assert_eq!(psi_n.eval(0.0, &[0.0, 0.0]), 1.0);
        // far from the spectrum along the lambda axis
        assert_eq!(psi_n.eval(10.0, &[0.0, 0.0]), 0.0);
    }
}
