//! Special functions: generalized Laguerre polynomials and the entire
//! Bessel-type profile used by radial Fourier analysis in even dimensions.

/// Generalized Laguerre polynomial `L_k^{(a)}(x)` by the stable upward
/// three-term recurrence.
pub fn laguerre(k: usize, a: f64, x: f64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let mut lm1 = 1.0;
    let mut l = 1.0 + a - x;
    for j in 1..k {
        let jf = j as f64;
        let lp1 = ((2.0 * jf + 1.0 + a - x) * l - (jf + a) * lm1) / (jf + 1.0);
        lm1 = l;
        l = lp1;
    }
    l
}

/// All values `L_0^{(a)}(x), ..., L_kmax^{(a)}(x)` in one recurrence sweep.
pub fn laguerre_sweep(kmax: usize, a: f64, x: f64, out: &mut [f64]) {
    debug_assert!(out.len() > kmax);
    out[0] = 1.0;
    if kmax == 0 {
        return;
    }
    out[1] = 1.0 + a - x;
    for j in 1..kmax {
        let jf = j as f64;
        out[j + 1] = ((2.0 * jf + 1.0 + a - x) * out[j] - (jf + a) * out[j - 1]) / (jf + 1.0);
    }
}

/// Gaussian-weighted values e^{-x/2} L_0^{(a)}(x) .. e^{-x/2} L_kmax^{(a)}(x)
/// in one sweep; the weighted functions are bounded, so the recurrence never
/// overflows at large arguments (the raw polynomials do).
pub fn laguerre_weighted_sweep(kmax: usize, a: f64, x: f64, out: &mut [f64]) {
    debug_assert!(out.len() > kmax);
    let w = (-x / 2.0).exp();
    out[0] = w;
    if kmax == 0 {
        return;
    }
    out[1] = (1.0 + a - x) * w;
    for j in 1..kmax {
        let jf = j as f64;
        out[j + 1] = ((2.0 * jf + 1.0 + a - x) * out[j] - (jf + a) * out[j - 1]) / (jf + 1.0);
    }
}

/// Single Gaussian-weighted value e^{-x/2} L_k^{(a)}(x).
pub fn laguerre_weighted(k: usize, a: f64, x: f64) -> f64 {
    let w = (-x / 2.0).exp();
    if k == 0 {
        return w;
    }
    let mut lm1 = w;
    let mut l = (1.0 + a - x) * w;
    for j in 1..k {
        let jf = j as f64;
        let lp1 = ((2.0 * jf + 1.0 + a - x) * l - (jf + a) * lm1) / (jf + 1.0);
        lm1 = l;
        l = lp1;
    }
    l
}

/// Derivative identity d/dx L_k^{(a)} = -L_{k-1}^{(a+1)}; returns the j-th
/// derivative of L_k^{(a)} at x.
pub fn laguerre_deriv(k: usize, a: f64, x: f64, j: usize) -> f64 {
    if j > k {
        return 0.0;
    }
    let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
    sign * laguerre(k - j, a + j as f64, x)
}

/// The entire function `B_nu(s) = 0F1(; nu; -s/4) = Gamma(nu) (u/2)^{1-nu} J_{nu-1}(u)`
/// with `u = sqrt(s)`, for integer `nu >= 1` and `s >= 0`.
///
/// `B_1(u^2) = J_0(u)`; the average of `e^{i<z,u>}` over the sphere `|u| = c`
/// in real dimension `2n` equals `B_n(c^2 |z|^2)`. Satisfies
/// `B_nu'(s) = -B_{nu+1}(s) / (4 nu)`.
pub fn bessel_profile(nu: u32, s: f64) -> f64 {
    assert!(nu >= 1, "bessel_profile needs nu >= 1");
    assert!(s >= -1e-12, "bessel_profile needs s >= 0, got {s}");
    let s = s.max(0.0);
    // The alternating series loses ~ 2 log10(max term) digits; keep it to
    // arguments below u = 12 where that is under 3 digits.
    if s <= 144.0 {
        bessel_profile_series(nu, s)
    } else {
        let u = s.sqrt();
        let jn = bessel_j_asymptotic(nu - 1, u);
        let mut scale = 1.0; // Gamma(nu) (u/2)^{1-nu}
        for m in 1..nu {
            scale *= m as f64 / (0.5 * u);
        }
        scale * jn
    }
}

/// Hankel asymptotic expansion of J_m(x) for x >= 12: optimally truncated,
/// error comparable to e^{-2x}.
pub fn bessel_j_asymptotic(m: u32, x: f64) -> f64 {
    debug_assert!(x >= 12.0);
    let mu = 4.0 * (m as f64) * (m as f64);
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0;
    let mut k = 0usize;
    // a_{k+1} = a_k (mu - (2k+1)^2) / ((k+1) 8 x)
    loop {
        let odd = (2 * k + 1) as f64;
        let next = term * (mu - odd * odd) / ((k + 1) as f64 * 8.0 * x);
        if k % 2 == 0 {
            // odd-index terms feed Q with alternating sign
            let sign = if k % 4 == 0 { 1.0 } else { -1.0 };
            q += sign * next;
        } else {
            let sign = if k % 4 == 1 { -1.0 } else { 1.0 };
            p += sign * next;
        }
        term = next;
        k += 1;
        if k >= 16 || term.abs() < 1e-17 {
            break;
        }
    }
    let chi = x - (2.0 * m as f64 + 1.0) * std::f64::consts::FRAC_PI_4;
    (2.0 / (std::f64::consts::PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

fn bessel_profile_series(nu: u32, s: f64) -> f64 {
    let x = 0.25 * s;
    let mut term = 1.0;
    let mut sum = 1.0;
    for m in 1..200 {
        let mf = m as f64;
        term *= -x / (mf * (nu as f64 + mf - 1.0));
        sum += term;
        if term.abs() < 1e-18 * sum.abs().max(1.0) {
            break;
        }
    }
    sum
}

/// `J_m(x)` for integer order by the periodized trapezoid rule on
/// `(1/pi) \int_0^pi cos(m t - x sin t) dt`, which converges geometrically
/// for analytic integrands. Intended for moderate `x`; small `x` is served
/// by the series path of `bessel_profile`.
pub fn bessel_j_integral(m: u32, x: f64) -> f64 {
    let nodes = (64 + (1.7 * x.abs()) as usize + 8 * m as usize).max(64);
    let h = std::f64::consts::PI / nodes as f64;
    // endpoint terms carry weight 1/2
    let f = |t: f64| (m as f64 * t - x * t.sin()).cos();
    let mut sum = 0.5 * (f(0.0) + f(std::f64::consts::PI));
    for i in 1..nodes {
        sum += f(i as f64 * h);
    }
    sum * h / std::f64::consts::PI
}

/// Exact binomial coefficient as f64 (small arguments).
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut r = 1.0;
    for i in 0..k {
        r = r * (n - i) as f64 / (i + 1) as f64;
    }
    r.round()
}

/// dim P_k(C^n) = C(k+n-1, n-1).
pub fn monomial_space_dim(k: usize, n: usize) -> usize {
    binomial(k + n - 1, n - 1) as usize
}
