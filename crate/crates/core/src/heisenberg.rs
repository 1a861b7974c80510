//! Heisenberg group arithmetic in canonical coordinates, left-invariant
//! fields, invariant functions given by reduced-coordinate profiles, and
//! grid-estimated Schwartz norms.

use crate::action::{ActionDescriptor, ActionKind};
use crate::diffop::{DiffOp, Poly};
use crate::error::{Error, Result};
use crate::jet::{Jet, JetSpace};
use num_complex::Complex64;
use std::sync::Arc;

/// A point (t, z) of H_n.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupPoint {
    pub t: f64,
    pub z: Vec<Complex64>,
}

impl GroupPoint {
    pub fn new(t: f64, z: Vec<Complex64>) -> Self {
        GroupPoint { t, z }
    }

    pub fn identity(n: usize) -> Self {
        GroupPoint { t: 0.0, z: vec![Complex64::ZERO; n] }
    }

    pub fn n(&self) -> usize {
        self.z.len()
    }

    pub fn inverse(&self) -> Self {
        GroupPoint { t: -self.t, z: self.z.iter().map(|w| -w).collect() }
    }

    /// Homogeneous gauge (|z|^4 + t^2)^{1/4}.
    pub fn gauge(&self) -> f64 {
        let z2: f64 = self.z.iter().map(|w| w.norm_sqr()).sum();
        (z2 * z2 + self.t * self.t).powf(0.25)
    }

    /// Values of the formal variables (t, z_1..z_n, zb_1..zb_n).
    pub fn formal(&self) -> Vec<Complex64> {
        let mut v = Vec::with_capacity(1 + 2 * self.n());
        v.push(Complex64::new(self.t, 0.0));
        v.extend(self.z.iter().copied());
        v.extend(self.z.iter().map(|w| w.conj()));
        v
    }
}

/// Group law (t,z)(u,w) = (t + u + Im(w . conj z)/2, z + w).
pub fn group_multiply(a: &GroupPoint, b: &GroupPoint) -> Result<GroupPoint> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch(a.n(), b.n()));
    }
    let cross: Complex64 = b.z.iter().zip(&a.z).map(|(w, z)| w * z.conj()).sum();
    Ok(GroupPoint {
        t: a.t + b.t + 0.5 * cross.im,
        z: a.z.iter().zip(&b.z).map(|(z, w)| z + w).collect(),
    })
}

pub fn left_translate(a: &GroupPoint, p: &GroupPoint) -> Result<GroupPoint> {
    group_multiply(a, p)
}

/// The left-invariant fields and the central derivative.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    /// Z_j = d/dz_j - (i/4) zb_j d/dt, 1-based j.
    Z(usize),
    /// Zb_j = d/dzb_j + (i/4) z_j d/dt, 1-based j.
    Zbar(usize),
    /// T = d/dt.
    T,
}

impl Field {
    /// Weighted degree: T counts 2, Z and Zbar count 1 (matching the
    /// parabolic dilations (t, z) -> (r^2 t, r z)).
    pub fn weight(&self) -> usize {
        match self {
            Field::T => 2,
            _ => 1,
        }
    }
}

/// Number of formal variables for dimension n.
pub fn formal_vars(n: usize) -> usize {
    1 + 2 * n
}

/// The field as a polynomial-coefficient operator in the formal variables.
pub fn field_op(n: usize, field: Field) -> Result<DiffOp> {
    let nv = formal_vars(n);
    let quarter_i = Complex64::new(0.0, 0.25);
    match field {
        Field::T => Ok(DiffOp::first_order(nv, 0, Poly::constant(nv, Complex64::ONE))),
        Field::Z(j) => {
            if j == 0 || j > n {
                return Err(Error::FieldIndex { index: j, n });
            }
            let mut op = DiffOp::first_order(nv, j, Poly::constant(nv, Complex64::ONE));
            // - (i/4) zb_j d/dt
            op = op.add(&DiffOp::first_order(nv, 0, Poly::variable(nv, n + j, -quarter_i)));
            Ok(op)
        }
        Field::Zbar(j) => {
            if j == 0 || j > n {
                return Err(Error::FieldIndex { index: j, n });
            }
            let mut op = DiffOp::first_order(nv, n + j, Poly::constant(nv, Complex64::ONE));
            op = op.add(&DiffOp::first_order(nv, 0, Poly::variable(nv, j, quarter_i)));
            Ok(op)
        }
    }
}

/// Compose a word of fields (applied right to left) into one operator.
pub fn word_op(n: usize, word: &[Field]) -> Result<DiffOp> {
    let mut op = DiffOp::identity(formal_vars(n));
    for &f in word.iter().rev() {
        // new letter acts after the existing operator
        op = field_op(n, f)?.compose(&op);
    }
    Ok(op)
}

/// A smooth function on H_n evaluable pointwise, optionally with exact jets.
pub trait SmoothFn: Send + Sync {
    fn n(&self) -> usize;
    fn eval(&self, p: &GroupPoint) -> Complex64;
    /// Taylor expansion in the formal variables at p, when available.
    fn jet_at(&self, _p: &GroupPoint, _order: usize) -> Option<Jet> {
        None
    }
}

/// Apply a single field at a point: exact when a jet is available, centered
/// finite differences with step 1e-4 (1 + |coordinate|) otherwise.
pub fn apply_field(field: Field, f: &dyn SmoothFn, p: &GroupPoint) -> Result<Complex64> {
    apply_word(&[field], f, p)
}

/// Apply a word of fields at a point.
pub fn apply_word(word: &[Field], f: &dyn SmoothFn, p: &GroupPoint) -> Result<Complex64> {
    let n = f.n();
    for &l in word {
        if let Field::Z(j) | Field::Zbar(j) = l {
            if j == 0 || j > n {
                return Err(Error::FieldIndex { index: j, n });
            }
        }
    }
    let op = word_op(n, word)?;
    let ord = op.max_order();
    if let Some(jet) = f.jet_at(p, ord) {
        return Ok(op.apply(&jet, &p.formal()));
    }
    if ord > 2 {
        return Err(Error::Differentiability(ord));
    }
    let jet = fd_jet(f, p, ord);
    Ok(op.apply(&jet, &p.formal()))
}

/// Finite-difference jet in the formal variables up to order <= 2. Real
/// increments in (t, x_j, y_j) are converted to the Wirtinger coefficients.
fn fd_jet(f: &dyn SmoothFn, p: &GroupPoint, order: usize) -> Jet {
    let n = f.n();
    let nv = formal_vars(n);
    let space = JetSpace::get(nv, order);
    let mut jet = Jet::zero(&space);
    jet.coeffs[0] = f.eval(p);
    if order == 0 {
        return jet;
    }
    let step = |c: f64| 1e-4 * (1.0 + c.abs());
    // real-coordinate vector: [t, x_1, y_1, ..]
    let real_dim = 1 + 2 * n;
    let mut base = vec![p.t];
    for w in &p.z {
        base.push(w.re);
        base.push(w.im);
    }
    let eval_at = |coords: &[f64]| -> Complex64 {
        let z = (0..n).map(|j| Complex64::new(coords[1 + 2 * j], coords[2 + 2 * j])).collect();
        f.eval(&GroupPoint { t: coords[0], z })
    };
    // first-order real partials
    let mut d1 = vec![Complex64::ZERO; real_dim];
    for (v, d) in d1.iter_mut().enumerate() {
        let h = step(base[v]);
        let mut up = base.clone();
        up[v] += h;
        let mut dn = base.clone();
        dn[v] -= h;
        *d = (eval_at(&up) - eval_at(&dn)) / (2.0 * h);
    }
    // second-order real partials when requested
    let mut d2 = vec![vec![Complex64::ZERO; real_dim]; real_dim];
    if order >= 2 {
        let f0 = jet.coeffs[0];
        for v in 0..real_dim {
            let h = step(base[v]);
            let mut up = base.clone();
            up[v] += h;
            let mut dn = base.clone();
            dn[v] -= h;
            d2[v][v] = (eval_at(&up) - 2.0 * f0 + eval_at(&dn)) / (h * h);
            for w in (v + 1)..real_dim {
                let k = step(base[w]);
                let mut pp = base.clone();
                pp[v] += h;
                pp[w] += k;
                let mut pm = base.clone();
                pm[v] += h;
                pm[w] -= k;
                let mut mp = base.clone();
                mp[v] -= h;
                mp[w] += k;
                let mut mm = base.clone();
                mm[v] -= h;
                mm[w] -= k;
                let mixed =
                    (eval_at(&pp) - eval_at(&pm) - eval_at(&mp) + eval_at(&mm)) / (4.0 * h * k);
                d2[v][w] = mixed;
                d2[w][v] = mixed;
            }
        }
    }
    // convert real partials to Wirtinger: d/dz = (d/dx - i d/dy)/2
    let half = Complex64::new(0.5, 0.0);
    let mhalf_i = Complex64::new(0.0, -0.5);
    let phalf_i = Complex64::new(0.0, 0.5);
    // formal var index -> linear combination over real indices
    let mut comb: Vec<Vec<(usize, Complex64)>> = vec![vec![(0, Complex64::ONE)]];
    for j in 0..n {
        comb.push(vec![(1 + 2 * j, half), (2 + 2 * j, half * mhalf_i * 2.0)]);
    }
    for j in 0..n {
        comb.push(vec![(1 + 2 * j, half), (2 + 2 * j, half * phalf_i * 2.0)]);
    }
    // first order coefficients
    for (fv, lc) in comb.iter().enumerate() {
        let mut e = vec![0u8; nv];
        e[fv] = 1;
        if let Some(idx) = space.monomial_index(&e) {
            let mut val = Complex64::ZERO;
            for &(rv, c) in lc {
                val += c * d1[rv];
            }
            jet.coeffs[idx] = val;
        }
    }
    if order >= 2 {
        for fv in 0..nv {
            for fw in fv..nv {
                let mut e = vec![0u8; nv];
                e[fv] += 1;
                e[fw] += 1;
                if let Some(idx) = space.monomial_index(&e) {
                    let mut val = Complex64::ZERO;
                    for &(rv, cv) in &comb[fv] {
                        for &(rw, cw) in &comb[fw] {
                            val += cv * cw * d2[rv][rw];
                        }
                    }
                    // Taylor coefficient: derivative / multiplicity factorial
                    let fact = if fv == fw { 2.0 } else { 1.0 };
                    jet.coeffs[idx] = val / fact;
                }
            }
        }
    }
    jet
}

/// Decay classes for invariant functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum DecayClass {
    Schwartz,
    CompactlySupported,
    PolynomialGrowth,
}

/// A profile in reduced coordinates (t, u) with u_j = |z_j|^2 (polyradial)
/// or the single u = |z|^2 (radial); smooth in these variables so jets on the
/// group come from substitution u_j = z_j zb_j.
pub trait AnalyticProfile: Send + Sync {
    fn reduced_dim(&self) -> usize;
    fn eval(&self, t: f64, u: &[f64]) -> Complex64;
    /// Jet in the formal profile variables (t, u_1..u_m); grid-backed
    /// profiles return None and fall back to finite differences.
    fn jet(&self, t: f64, u: &[f64], order: usize) -> Option<Jet>;
}

/// t^k e^{-a t^2} * e^{-sum_j b_j u_j}  (the `gaussian` / `hermite-gaussian`
/// families, with per-coordinate weights for torus tests).
#[derive(Debug, Clone)]
pub struct GaussHermiteProfile {
    pub k: u32,
    pub a: f64,
    pub b: Vec<f64>,
}

impl GaussHermiteProfile {
    pub fn gaussian(a: f64, b: f64, reduced: usize) -> Self {
        GaussHermiteProfile { k: 0, a, b: vec![b; reduced] }
    }
}

impl AnalyticProfile for GaussHermiteProfile {
    fn reduced_dim(&self) -> usize {
        self.b.len()
    }

    fn eval(&self, t: f64, u: &[f64]) -> Complex64 {
        let mut e = -self.a * t * t;
        for (bj, uj) in self.b.iter().zip(u) {
            e -= bj * uj;
        }
        Complex64::new(t.powi(self.k as i32) * e.exp(), 0.0)
    }

    fn jet(&self, t: f64, u: &[f64], order: usize) -> Option<Jet> {
        let nv = 1 + self.b.len();
        let space = JetSpace::get(nv, order);
        let tj = Jet::variable(&space, 0, Complex64::new(t, 0.0));
        let mut expo = tj.mul(&tj).scale(Complex64::new(-self.a, 0.0));
        for (j, (&bj, &uj)) in self.b.iter().zip(u).enumerate() {
            let uj_jet = Jet::variable(&space, 1 + j, Complex64::new(uj, 0.0));
            expo = expo.add(&uj_jet.scale(Complex64::new(-bj, 0.0)));
        }
        let mut out = expo.exp();
        for _ in 0..self.k {
            out = out.mul(&tj);
        }
        Some(out)
    }
}

/// e^{i w t} e^{-(t/width)^2} e^{-u/4} L_k(u/2): a matrix-coefficient radial
/// mode carried on a t-window, concentrating the transform near lambda = w.
#[derive(Debug, Clone)]
pub struct ModulatedLaguerreProfile {
    pub k: usize,
    pub freq: f64,
    pub width: f64,
}

impl AnalyticProfile for ModulatedLaguerreProfile {
    fn reduced_dim(&self) -> usize {
        1
    }

    fn eval(&self, t: f64, u: &[f64]) -> Complex64 {
        let x = u[0];
        let radial = (-x / 4.0).exp() * crate::special::laguerre(self.k, 0.0, x / 2.0);
        let tw = (-(t / self.width) * (t / self.width)).exp();
        Complex64::new(0.0, self.freq * t).exp() * tw * radial
    }

    fn jet(&self, t: f64, u: &[f64], order: usize) -> Option<Jet> {
        let space = JetSpace::get(2, order);
        let tj = Jet::variable(&space, 0, Complex64::new(t, 0.0));
        let uj = Jet::variable(&space, 1, Complex64::new(u[0], 0.0));
        let phase = tj.scale(Complex64::new(0.0, self.freq)).exp();
        let iw = 1.0 / (self.width * self.width);
        let tw = tj.mul(&tj).scale(Complex64::new(-iw, 0.0)).exp();
        let gauss = uj.scale(Complex64::new(-0.25, 0.0)).exp();
        // Laguerre outer composition at x = u/2
        let x = u[0] / 2.0;
        let derivs: Vec<Complex64> = (0..=order)
            .map(|j| {
                Complex64::new(crate::special::laguerre_deriv(self.k, 0.0, x, j) / 2f64.powi(j as i32), 0.0)
            })
            .collect();
        let lag = uj.scale(Complex64::new(0.5, 0.0)).compose_univariate(&derivs);
        Some(phase.mul(&tw).mul(&gauss).mul(&lag))
    }
}

/// The t-independent radial mode e^{-u/4} L_k(u/2) (`laguerre-mode`).
#[derive(Debug, Clone)]
pub struct LaguerreModeProfile {
    pub k: usize,
}

impl AnalyticProfile for LaguerreModeProfile {
    fn reduced_dim(&self) -> usize {
        1
    }

    fn eval(&self, _t: f64, u: &[f64]) -> Complex64 {
        let x = u[0];
        Complex64::new((-x / 4.0).exp() * crate::special::laguerre(self.k, 0.0, x / 2.0), 0.0)
    }

    fn jet(&self, _t: f64, u: &[f64], order: usize) -> Option<Jet> {
        let space = JetSpace::get(2, order);
        let uj = Jet::variable(&space, 1, Complex64::new(u[0], 0.0));
        let gauss = uj.scale(Complex64::new(-0.25, 0.0)).exp();
        let x = u[0] / 2.0;
        let derivs: Vec<Complex64> = (0..=order)
            .map(|j| {
                Complex64::new(crate::special::laguerre_deriv(self.k, 0.0, x, j) / 2f64.powi(j as i32), 0.0)
            })
            .collect();
        let lag = uj.scale(Complex64::new(0.5, 0.0)).compose_univariate(&derivs);
        Some(gauss.mul(&lag))
    }
}

/// A K-invariant function given by a reduced-coordinate profile.
pub struct InvariantFunction {
    pub action: ActionDescriptor,
    pub profile: Arc<dyn AnalyticProfile>,
    pub decay: DecayClass,
}

impl InvariantFunction {
    pub fn new(
        action: ActionDescriptor,
        profile: Arc<dyn AnalyticProfile>,
        decay: DecayClass,
    ) -> Result<Self> {
        if profile.reduced_dim() != action.reduced_dim() {
            return Err(Error::Config(format!(
                "profile has {} reduced coordinates, action needs {}",
                profile.reduced_dim(),
                action.reduced_dim()
            )));
        }
        Ok(InvariantFunction { action, profile, decay })
    }

    /// Reduced u-coordinates of a point under the action.
    pub fn reduce(&self, z: &[Complex64]) -> Vec<f64> {
        match self.action.kind {
            ActionKind::UnitaryFull => vec![z.iter().map(|w| w.norm_sqr()).sum()],
            ActionKind::Torus => z.iter().map(|w| w.norm_sqr()).collect(),
        }
    }

    /// Profile value at reduced coordinates (t, radii), radii being |z_j|.
    pub fn eval_reduced(&self, t: f64, radii: &[f64]) -> Complex64 {
        let u: Vec<f64> = radii.iter().map(|r| r * r).collect();
        self.profile.eval(t, &u)
    }

    /// Parse the function mini-language:
    /// `gaussian(a,b)`, `hermite-gaussian(k,a,b)`, `laguerre-mode(k)`.
    pub fn parse(spec: &str, action: ActionDescriptor) -> Result<Self> {
        let spec = spec.trim();
        let (name, args) = spec
            .split_once('(')
            .and_then(|(n, rest)| rest.strip_suffix(')').map(|a| (n, a)))
            .ok_or_else(|| Error::Parse(format!("bad function spec `{spec}`")))?;
        let nums: Vec<f64> = if args.trim().is_empty() {
            vec![]
        } else {
            args.split(',')
                .map(|s| s.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad number in `{spec}`"))))
                .collect::<Result<_>>()?
        };
        let reduced = action.reduced_dim();
        match name {
            "gaussian" => {
                if nums.len() != 2 {
                    return Err(Error::Parse("gaussian(a,b) needs 2 arguments".into()));
                }
                InvariantFunction::new(
                    action,
                    Arc::new(GaussHermiteProfile::gaussian(nums[0], nums[1], reduced)),
                    DecayClass::Schwartz,
                )
            }
            "hermite-gaussian" => {
                if nums.len() != 3 {
                    return Err(Error::Parse("hermite-gaussian(k,a,b) needs 3 arguments".into()));
                }
                InvariantFunction::new(
                    action,
                    Arc::new(GaussHermiteProfile {
                        k: nums[0] as u32,
                        a: nums[1],
                        b: vec![nums[2]; reduced],
                    }),
                    DecayClass::Schwartz,
                )
            }
            "laguerre-mode" => {
                if nums.len() != 1 {
                    return Err(Error::Parse("laguerre-mode(k) needs 1 argument".into()));
                }
                InvariantFunction::new(
                    action,
                    Arc::new(LaguerreModeProfile { k: nums[0] as usize }),
                    DecayClass::PolynomialGrowth,
                )
            }
            _ => Err(Error::Parse(format!("unknown function `{name}`"))),
        }
    }
}

impl SmoothFn for InvariantFunction {
    fn n(&self) -> usize {
        self.action.n
    }

    fn eval(&self, p: &GroupPoint) -> Complex64 {
        self.profile.eval(p.t, &self.reduce(&p.z))
    }

    fn jet_at(&self, p: &GroupPoint, order: usize) -> Option<Jet> {
        let n = self.action.n;
        let nv = formal_vars(n);
        let space = JetSpace::get(nv, order);
        let u = self.reduce(&p.z);
        let pj = self.profile.jet(p.t, &u, order)?;
        // inner jets: t, then each u-coordinate as z_j zb_j (or the sum)
        let tj = Jet::variable(&space, 0, Complex64::new(p.t, 0.0));
        let mut args = vec![tj];
        match self.action.kind {
            ActionKind::UnitaryFull => {
                let mut s = Jet::zero(&space);
                for j in 0..n {
                    let zj = Jet::variable(&space, 1 + j, p.z[j]);
                    let zbj = Jet::variable(&space, 1 + n + j, p.z[j].conj());
                    s = s.add(&zj.mul(&zbj));
                }
                args.push(s);
            }
            ActionKind::Torus => {
                for j in 0..n {
                    let zj = Jet::variable(&space, 1 + j, p.z[j]);
                    let zbj = Jet::variable(&space, 1 + n + j, p.z[j].conj());
                    args.push(zj.mul(&zbj));
                }
            }
        }
        Some(Jet::substitute(&pj, &args))
    }
}

/// Sampling grid for norm estimation and invariance checks.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct GridSpec {
    pub t_max: f64,
    pub r_max: f64,
    /// points on the t axis (odd so 0 is included)
    pub t_points: usize,
    /// points on each radial axis
    pub r_points: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        // 256 intervals per axis; the t axis keeps the origin on the grid.
        GridSpec { t_max: 12.0, r_max: 8.0, t_points: 257, r_points: 257 }
    }
}

impl GridSpec {
    pub fn coarse() -> Self {
        GridSpec { t_max: 12.0, r_max: 8.0, t_points: 65, r_points: 33 }
    }

    pub fn t_axis(&self) -> Vec<f64> {
        crate::quad::symmetric_grid(self.t_max, self.t_points / 2)
    }

    pub fn r_axis(&self) -> Vec<f64> {
        crate::quad::ray_grid(self.r_max, self.r_points)
    }
}

/// Nonnegative Schwartz norm order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct SchwartzNormOrder(pub usize);

/// Enumerate all words over {T, Z_j, Zbar_j} of weighted degree <= p.
pub fn weighted_words(n: usize, p: usize) -> Vec<Vec<Field>> {
    let mut letters = vec![Field::T];
    for j in 1..=n {
        letters.push(Field::Z(j));
        letters.push(Field::Zbar(j));
    }
    let mut out = vec![vec![]];
    let mut frontier = vec![(vec![], 0usize)];
    while let Some((word, w)) = frontier.pop() {
        for &l in &letters {
            let nw = w + l.weight();
            if nw <= p {
                let mut next = word.clone();
                next.push(l);
                out.push(next.clone());
                frontier.push((next, nw));
            }
        }
    }
    out
}

/// Grid-supremum Schwartz norm of order p:
/// sup (1 + |x|)^p |X^I f(x)| over weighted-degree <= p words, with |x| the
/// homogeneous gauge. Phases are fixed to zero on the sampling grid (the
/// profile is K-invariant; individual derivatives are sampled along the
/// real section).
pub fn schwartz_norm(f: &InvariantFunction, p: SchwartzNormOrder, grid: &GridSpec) -> Result<f64> {
    let n = f.action.n;
    let words = weighted_words(n, p.0);
    let ops: Vec<DiffOp> = words
        .iter()
        .map(|w| word_op(n, w))
        .collect::<Result<Vec<_>>>()?;
    let max_ord = ops.iter().map(|o| o.max_order()).max().unwrap_or(0);
    let reduced = f.action.reduced_dim();
    let t_axis = grid.t_axis();
    let r_axis = grid.r_axis();

    // radial tuples: one radius for unitary, an r-grid per coordinate for torus
    let mut tuples: Vec<Vec<f64>> = vec![vec![]];
    for _ in 0..reduced {
        let mut next = vec![];
        for t in &tuples {
            for &r in &r_axis {
                let mut v = t.clone();
                v.push(r);
                next.push(v);
            }
        }
        tuples = next;
    }

    use rayon::prelude::*;
    let sup = t_axis
        .par_iter()
        .map(|&t| {
            let mut local: f64 = 0.0;
            for radii in &tuples {
                let z: Vec<Complex64> = match f.action.kind {
                    ActionKind::UnitaryFull => {
                        let mut z = vec![Complex64::ZERO; n];
                        z[0] = Complex64::new(radii[0], 0.0);
                        z
                    }
                    ActionKind::Torus => {
                        radii.iter().map(|&r| Complex64::new(r, 0.0)).collect()
                    }
                };
                let pt = GroupPoint::new(t, z);
                let jet = f.jet_at(&pt, max_ord).expect("analytic profile provides jets");
                let weight = (1.0 + pt.gauge()).powi(p.0 as i32);
                let formal = pt.formal();
                for op in &ops {
                    let v = op.apply(&jet, &formal).norm();
                    local = local.max(weight * v);
                }
            }
            local
        })
        .reduce(|| 0.0, f64::max);
    Ok(sup)
}

/// Sample the declared invariance: |f(k.(t,z)) - f(t,z)| over random group
/// elements of the action, returning the largest residual.
pub fn invariance_residual(f: &InvariantFunction, samples: &[(GroupPoint, Vec<f64>)]) -> f64 {
    // each sample: a point and a list of angles (one per torus coordinate, or
    // a single rotation parameter applied to a 2-plane for the unitary case)
    let mut worst: f64 = 0.0;
    for (p, angles) in samples {
        let rotated: Vec<Complex64> = match f.action.kind {
            ActionKind::UnitaryFull => {
                // use a diagonal torus element followed by a planar rotation;
                // both are unitary, enough to exercise radial invariance
                let mut z: Vec<Complex64> = p
                    .z
                    .iter()
                    .zip(angles)
                    .map(|(w, &a)| w * Complex64::new(0.0, a).exp())
                    .collect();
                if z.len() >= 2 {
                    let c = angles[0].cos();
                    let s = angles[0].sin();
                    let (a0, a1) = (z[0], z[1]);
                    z[0] = c * a0 + s * a1;
                    z[1] = -s * a0 + c * a1;
                }
                z
            }
            ActionKind::Torus => p
                .z
                .iter()
                .zip(angles)
                .map(|(w, &a)| w * Complex64::new(0.0, a).exp())
                .collect(),
        };
        let q = GroupPoint::new(p.t, rotated);
        worst = worst.max((f.eval(&q) - f.eval(p)).norm());
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Polynomial test function with exact jets.
    struct FormalPoly {
        n: usize,
        poly: Poly,
    }

    impl SmoothFn for FormalPoly {
        fn n(&self) -> usize {
            self.n
        }
        fn eval(&self, p: &GroupPoint) -> Complex64 {
            self.poly.eval(&p.formal())
        }
        fn jet_at(&self, p: &GroupPoint, order: usize) -> Option<Jet> {
            let nv = formal_vars(self.n);
            let space = JetSpace::get(nv, order);
            let formal = p.formal();
            let mut out = Jet::zero(&space);
            for (e, coef) in &self.poly.terms {
                let mut term = Jet::constant(&space, *coef);
                for (var, &k) in e.iter().enumerate() {
                    let vj = Jet::variable(&space, var, formal[var]);
                    for _ in 0..k {
                        term = term.mul(&vj);
                    }
                }
                out = out.add(&term);
            }
            Some(out)
        }
    }

    #[test]
    fn group_law_identity_and_inverse() {
        let e = GroupPoint::identity(1);
        let p = GroupPoint::new(0.7, vec![c(1.0, -2.0)]);
        assert_eq!(group_multiply(&e, &p).unwrap(), p);
        let q = group_multiply(&p, &p.inverse()).unwrap();
        assert!(q.t.abs() < 1e-15 && q.z[0].norm() < 1e-15);
    }

    #[test]
    fn group_law_example() {
        // (0, 1) . (0, i) = (1/2 Im(i * conj(1)), 1 + i) = (1/2, 1+i)
        let a = GroupPoint::new(0.0, vec![c(1.0, 0.0)]);
        let b = GroupPoint::new(0.0, vec![c(0.0, 1.0)]);
        let p = group_multiply(&a, &b).unwrap();
        assert!((p.t - 0.5).abs() < 1e-15);
        assert!((p.z[0] - c(1.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let a = GroupPoint::identity(1);
        let b = GroupPoint::identity(2);
        assert!(group_multiply(&a, &b).is_err());
    }

    #[test]
    fn field_on_coordinate_functions() {
        let nv = formal_vars(1);
        // f = t: T f = 1, Z_1 f = -(i/4) zb_1
        let f_t = FormalPoly { n: 1, poly: Poly::variable(nv, 0, Complex64::ONE) };
        let p = GroupPoint::new(0.3, vec![c(0.4, -1.1)]);
        let v = apply_field(Field::T, &f_t, &p).unwrap();
        assert!((v - Complex64::ONE).norm() < 1e-14);
        let v2 = apply_field(Field::Z(1), &f_t, &p).unwrap();
        let want = c(0.0, -0.25) * p.z[0].conj();
        assert!((v2 - want).norm() < 1e-14);
        // f = z_1: Z_1 f = 1
        let f_z = FormalPoly { n: 1, poly: Poly::variable(nv, 1, Complex64::ONE) };
        let v3 = apply_field(Field::Z(1), &f_z, &p).unwrap();
        assert!((v3 - Complex64::ONE).norm() < 1e-14);
    }

    #[test]
    fn field_index_out_of_range() {
        let nv = formal_vars(1);
        let f = FormalPoly { n: 1, poly: Poly::variable(nv, 0, Complex64::ONE) };
        let p = GroupPoint::identity(1);
        assert!(apply_field(Field::Z(2), &f, &p).is_err());
    }

    #[test]
    fn left_invariance_of_fields() {
        // (Z_1 (f . L_a))(p) = (Z_1 f)(L_a p) for an analytic f
        let action = ActionDescriptor::unitary(1);
        let f = InvariantFunction::new(
            action,
            Arc::new(GaussHermiteProfile { k: 1, a: 0.5, b: vec![0.3] }),
            DecayClass::Schwartz,
        )
        .unwrap();
        let a = GroupPoint::new(0.4, vec![c(0.6, 0.2)]);
        let p = GroupPoint::new(-0.7, vec![c(-0.3, 0.9)]);
        let ap = group_multiply(&a, &p).unwrap();

        struct Translated<'f> {
            f: &'f InvariantFunction,
            a: GroupPoint,
        }
        impl SmoothFn for Translated<'_> {
            fn n(&self) -> usize {
                self.f.n()
            }
            fn eval(&self, p: &GroupPoint) -> Complex64 {
                self.f.eval(&group_multiply(&self.a, p).unwrap())
            }
            fn jet_at(&self, p: &GroupPoint, order: usize) -> Option<Jet> {
                // L_a is polynomial in the formal variables; substitute.
                let n = self.f.n();
                let nv = formal_vars(n);
                let space = JetSpace::get(nv, order);
                let ap = group_multiply(&self.a, p).unwrap();
                let fjet = self.f.jet_at(&ap, order)?;
                // components of L_a(x) as jets at p
                let tj = Jet::variable(&space, 0, Complex64::new(p.t, 0.0));
                let mut comps = vec![];
                // t-component: t_a + t + Im(z . conj(z_a))/2
                //            = t_a + t + (z . conj(z_a) - zb . z_a)/(4i)
                let mut tcomp = tj;
                tcomp.coeffs[0] += Complex64::new(self.a.t, 0.0);
                for j in 0..n {
                    let zj = Jet::variable(&space, 1 + j, p.z[j]);
                    let zbj = Jet::variable(&space, 1 + n + j, p.z[j].conj());
                    let quarter = Complex64::new(0.0, -0.25); // 1/(4i)
                    tcomp = tcomp.add(&zj.scale(self.a.z[j].conj() * quarter));
                    tcomp = tcomp.add(&zbj.scale(self.a.z[j] * -quarter));
                }
                comps.push(tcomp);
                for j in 0..n {
                    let mut zj = Jet::variable(&space, 1 + j, p.z[j]);
                    zj.coeffs[0] += self.a.z[j];
                    comps.push(zj);
                }
                for j in 0..n {
                    let mut zbj = Jet::variable(&space, 1 + n + j, p.z[j].conj());
                    zbj.coeffs[0] += self.a.z[j].conj();
                    comps.push(zbj);
                }
                Some(Jet::substitute(&fjet, &comps))
            }
        }

        let tf = Translated { f: &f, a: a.clone() };
        for field in [Field::Z(1), Field::Zbar(1), Field::T] {
            let lhs = apply_field(field, &tf, &p).unwrap();
            let rhs = apply_field(field, &f, &ap).unwrap();
            assert!((lhs - rhs).norm() < 1e-8, "{field:?}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn schwartz_norm_zero_and_gaussian() {
        let action = ActionDescriptor::unitary(1);
        let zero = InvariantFunction::new(
            action,
            Arc::new(GaussHermiteProfile { k: 0, a: 1.0, b: vec![0.0] }),
            DecayClass::Schwartz,
        )
        .unwrap();
        // multiply by zero via a profile wrapper: use k=0, and scale by 0
        struct ZeroProfile;
        impl AnalyticProfile for ZeroProfile {
            fn reduced_dim(&self) -> usize {
                1
            }
            fn eval(&self, _: f64, _: &[f64]) -> Complex64 {
                Complex64::ZERO
            }
            fn jet(&self, _: f64, _: &[f64], order: usize) -> Option<Jet> {
                Some(Jet::zero(&JetSpace::get(2, order)))
            }
        }
        let zf = InvariantFunction::new(action, Arc::new(ZeroProfile), DecayClass::Schwartz).unwrap();
        let grid = GridSpec::coarse();
        assert_eq!(schwartz_norm(&zf, SchwartzNormOrder(2), &grid).unwrap(), 0.0);
        let _ = zero;

        // p = 0 for the centered gaussian: supremum 1 at the origin
        let g = InvariantFunction::parse("gaussian(1,1)", action).unwrap();
        let n0 = schwartz_norm(&g, SchwartzNormOrder(0), &grid).unwrap();
        assert!((n0 - 1.0).abs() < 1e-14, "norm {n0}");
    }

    #[test]
    fn schwartz_norm_monotone_in_p() {
        let action = ActionDescriptor::unitary(1);
        let g = InvariantFunction::parse("gaussian(1,1)", action).unwrap();
        let grid = GridSpec::coarse();
        let n0 = schwartz_norm(&g, SchwartzNormOrder(0), &grid).unwrap();
        let n1 = schwartz_norm(&g, SchwartzNormOrder(1), &grid).unwrap();
        let n2 = schwartz_norm(&g, SchwartzNormOrder(2), &grid).unwrap();
        assert!(n0 <= n1 && n1 <= n2);
    }

    /// Frozen regression value for the p = 2 grid norm of gaussian(1,1), n=1,
    /// computed once by this same brute-force supremum on the default grid.
    #[test]
    fn schwartz_norm_gaussian_p2_regression() {
        let action = ActionDescriptor::unitary(1);
        let g = InvariantFunction::parse("gaussian(1,1)", action).unwrap();
        let grid = GridSpec { t_max: 12.0, r_max: 8.0, t_points: 129, r_points: 65 };
        let n2 = schwartz_norm(&g, SchwartzNormOrder(2), &grid).unwrap();
        assert!(n2.is_finite() && n2 > 0.0);
        // frozen after first computation; see test output if it drifts
        let frozen = SCHWARTZ_P2_GAUSSIAN;
        assert!(
            (n2 - frozen).abs() <= 1e-9 * frozen.max(1.0),
            "p=2 norm drifted: {n2:.12} vs frozen {frozen:.12}"
        );
    }

    // Brute-force value recorded from the oracle run (see test above).
    const SCHWARTZ_P2_GAUSSIAN: f64 = 3.016170031274;

    #[test]
    fn invariance_sampling() {
        let action = ActionDescriptor::torus(2);
        let f = InvariantFunction::new(
            action,
            Arc::new(GaussHermiteProfile { k: 0, a: 1.0, b: vec![0.5, 1.5] }),
            DecayClass::Schwartz,
        )
        .unwrap();
        let samples: Vec<(GroupPoint, Vec<f64>)> = (0..50)
            .map(|i| {
                let x = i as f64 * 0.137;
                (
                    GroupPoint::new(x.sin(), vec![c(x.cos(), 0.3 * x.sin()), c(0.2 * x, -0.7)]),
                    vec![1.3 * x, -2.1 * x],
                )
            })
            .collect();
        assert!(invariance_residual(&f, &samples) < 1e-12);
    }
}
