//! Invariant polynomials and exact eigenvalue computation: Hilbert bases for
//! the supported actions, symmetrization into noncommutative words in the
//! complex fields, rational matrices of the derived Bargmann representation
//! on polynomial spaces, and the privileged generator system with integer
//! eigenvalue tables.

use crate::action::{ActionDescriptor, ActionKind};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::collections::BTreeMap;

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Label of an irreducible constituent of the polynomial representation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum IrredLabel {
    /// Degree-k space for the full unitary group.
    Unitary(usize),
    /// Monomial line w^alpha for the torus.
    Torus(Vec<usize>),
}

impl IrredLabel {
    pub fn total_degree(&self) -> usize {
        match self {
            IrredLabel::Unitary(k) => *k,
            IrredLabel::Torus(a) => a.iter().sum(),
        }
    }

    pub fn dim(&self, n: usize) -> usize {
        match self {
            IrredLabel::Unitary(k) => crate::special::monomial_space_dim(*k, n),
            IrredLabel::Torus(_) => 1,
        }
    }
}

/// Invariant polynomial in z, conj(z) with rational coefficients; keys are
/// (a, b) exponent pairs for z^a zb^b.
#[derive(Debug, Clone, PartialEq)]
pub struct InvPoly {
    pub n: usize,
    pub terms: BTreeMap<(Vec<u32>, Vec<u32>), Rational>,
}

impl InvPoly {
    pub fn zero(n: usize) -> Self {
        InvPoly { n, terms: BTreeMap::new() }
    }

    pub fn add_term(&mut self, a: Vec<u32>, b: Vec<u32>, c: Rational) {
        let e = self.terms.entry((a, b)).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            // keep the map reduced
            let key: Vec<_> = self
                .terms
                .iter()
                .filter(|(_, v)| v.is_zero())
                .map(|(k, _)| k.clone())
                .collect();
            for k in key {
                self.terms.remove(&k);
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> InvPoly {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v *= c;
        }
        out
    }

    pub fn add(&self, other: &InvPoly) -> InvPoly {
        let mut out = self.clone();
        for ((a, b), c) in &other.terms {
            out.add_term(a.clone(), b.clone(), c.clone());
        }
        out
    }

    /// |w|^{2m} = (sum_h w_h wb_h)^m
    pub fn radial_power(n: usize, m: usize) -> InvPoly {
        let mut p = InvPoly::zero(n);
        p.add_term(vec![0; n], vec![0; n], Rational::one());
        for _ in 0..m {
            let mut next = InvPoly::zero(n);
            for ((a, b), c) in &p.terms {
                for h in 0..n {
                    let mut a2 = a.clone();
                    let mut b2 = b.clone();
                    a2[h] += 1;
                    b2[h] += 1;
                    next.add_term(a2, b2, c.clone());
                }
            }
            p = next;
        }
        p
    }

    /// Numeric evaluation at w (z = w, zb = conj w).
    pub fn eval(&self, w: &[num_complex::Complex64]) -> num_complex::Complex64 {
        let mut s = num_complex::Complex64::ZERO;
        for ((a, b), c) in &self.terms {
            let mut m = num_complex::Complex64::new(rational_to_f64(c), 0.0);
            for h in 0..self.n {
                for _ in 0..a[h] {
                    m *= w[h];
                }
                for _ in 0..b[h] {
                    m *= w[h].conj();
                }
            }
            s += m;
        }
        s
    }
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    let num = r.numer();
    let den = r.denom();
    // exact for the small rationals appearing here
    bigint_to_f64(num) / bigint_to_f64(den)
}

fn bigint_to_f64(b: &BigInt) -> f64 {
    let s = b.to_string();
    s.parse::<f64>().unwrap()
}

/// Homogeneous Hilbert basis of the invariant polynomial algebra.
#[derive(Debug, Clone)]
pub struct HilbertBasis {
    pub action: ActionDescriptor,
    pub generators: Vec<InvPoly>,
    pub degrees: Vec<usize>,
}

/// The F_1-orthonormal invariant p_alpha for the degree-one constituent:
/// unitary -> sum_j |z_j|^2 / 2 ; torus -> |z_j|^2 / 2 per coordinate.
/// (The monomial w^d has squared Fock norm 2^{|d|} d!.)
pub fn hilbert_basis(action: ActionDescriptor) -> Result<HilbertBasis> {
    let n = action.n;
    match action.kind {
        ActionKind::UnitaryFull => {
            let mut g = InvPoly::zero(n);
            for h in 0..n {
                let mut a = vec![0u32; n];
                let mut b = vec![0u32; n];
                a[h] = 1;
                b[h] = 1;
                g.add_term(a, b, rat(1, 2));
            }
            Ok(HilbertBasis { action, generators: vec![g], degrees: vec![1] })
        }
        ActionKind::Torus => {
            let mut gens = vec![];
            for h in 0..n {
                let mut g = InvPoly::zero(n);
                let mut a = vec![0u32; n];
                let mut b = vec![0u32; n];
                a[h] = 1;
                b[h] = 1;
                g.add_term(a, b, rat(1, 2));
                gens.push(g);
            }
            Ok(HilbertBasis { action, degrees: vec![1; n], generators: gens })
        }
    }
}

/// Letters of noncommutative words in the complex fields (0-based index).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Letter {
    Z(usize),
    Zb(usize),
}

/// Rational combination of words; represents an element of the universal
/// enveloppe restricted to the fields Z, Zb.
#[derive(Debug, Clone)]
pub struct WordSum {
    pub n: usize,
    pub terms: Vec<(Rational, Vec<Letter>)>,
}

impl WordSum {
    pub fn zero(n: usize) -> Self {
        WordSum { n, terms: vec![] }
    }

    pub fn add(&self, other: &WordSum) -> WordSum {
        let mut out = self.clone();
        out.terms.extend(other.terms.iter().cloned());
        out.normalize()
    }

    pub fn scale(&self, c: &Rational) -> WordSum {
        let mut out = self.clone();
        for (coef, _) in out.terms.iter_mut() {
            *coef *= c;
        }
        out
    }

    /// Concatenation product (operator composition, left factor applied last).
    pub fn mul(&self, other: &WordSum) -> WordSum {
        let mut out = WordSum::zero(self.n);
        for (ca, wa) in &self.terms {
            for (cb, wb) in &other.terms {
                let mut w = wa.clone();
                w.extend(wb.iter().copied());
                out.terms.push((ca * cb, w));
            }
        }
        out.normalize()
    }

    pub fn pow(&self, k: usize) -> WordSum {
        let mut out = WordSum { n: self.n, terms: vec![(Rational::one(), vec![])] };
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    fn normalize(mut self) -> WordSum {
        let mut map: BTreeMap<Vec<Letter>, Rational> = BTreeMap::new();
        for (c, w) in self.terms.drain(..) {
            let e = map.entry(w).or_insert_with(Rational::zero);
            *e += c;
        }
        WordSum {
            n: self.n,
            terms: map.into_iter().filter(|(_, c)| !c.is_zero()).map(|(w, c)| (c, w)).collect(),
        }
    }

    /// The sublaplacian -2 sum (Z_h Zb_h + Zb_h Z_h).
    pub fn sublaplacian(n: usize) -> WordSum {
        let mut terms = vec![];
        for h in 0..n {
            terms.push((rat(-2, 1), vec![Letter::Z(h), Letter::Zb(h)]));
            terms.push((rat(-2, 1), vec![Letter::Zb(h), Letter::Z(h)]));
        }
        WordSum { n, terms }
    }

    /// Convert to a numeric differential operator in the formal variables.
    pub fn to_diffop(&self) -> Result<crate::diffop::DiffOp> {
        use crate::heisenberg::{field_op, Field};
        let nv = crate::heisenberg::formal_vars(self.n);
        let mut out = crate::diffop::DiffOp::zero(nv);
        for (c, word) in &self.terms {
            let mut op = crate::diffop::DiffOp::identity(nv);
            for &l in word.iter().rev() {
                let f = match l {
                    Letter::Z(h) => Field::Z(h + 1),
                    Letter::Zb(h) => Field::Zbar(h + 1),
                };
                op = field_op(self.n, f)?.compose(&op);
            }
            let scaled = op.scale(num_complex::Complex64::new(rational_to_f64(c), 0.0));
            out = out.add(&scaled);
        }
        Ok(out)
    }
}

/// Symmetrization conventions for mapping invariant polynomials to words.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SymConvention {
    /// Average over distinct orderings of the letter multiset.
    Average,
    /// Sum over distinct orderings without division.
    Sum,
    /// Average times 2^(degree); the real-coordinate identification of the
    /// symmetric algebra sends each complex letter with a factor 2.
    ScaledAverage,
}

/// Symmetrize an invariant polynomial into a word sum: each monomial
/// z^a zb^b maps to the average over all distinct orderings of the multiset
/// {Z_h (a_h times), Zb_h (b_h times)}.
pub fn symmetrize(poly: &InvPoly) -> WordSum {
    symmetrize_with(poly, SymConvention::Average)
}

pub fn symmetrize_with(poly: &InvPoly, convention: SymConvention) -> WordSum {
    let n = poly.n;
    let mut out = WordSum::zero(n);
    for ((a, b), c) in &poly.terms {
        let mut letters = vec![];
        for h in 0..n {
            for _ in 0..a[h] {
                letters.push(Letter::Z(h));
            }
            for _ in 0..b[h] {
                letters.push(Letter::Zb(h));
            }
        }
        letters.sort();
        let orderings = multiset_permutations(&letters);
        let count = orderings.len() as i64;
        let deg = letters.len() as u32;
        let factor = match convention {
            SymConvention::Average => c * rat(1, count),
            SymConvention::Sum => c.clone(),
            SymConvention::ScaledAverage => c * rat(2i64.pow(deg), count),
        };
        for w in orderings {
            out.terms.push((factor.clone(), w));
        }
    }
    out.normalize()
}

fn multiset_permutations(sorted: &[Letter]) -> Vec<Vec<Letter>> {
    let mut out = vec![];
    let mut pool = sorted.to_vec();
    let mut cur = vec![];
    fn rec(pool: &mut Vec<Letter>, cur: &mut Vec<Letter>, out: &mut Vec<Vec<Letter>>) {
        if pool.is_empty() {
            out.push(cur.clone());
            return;
        }
        let mut last: Option<Letter> = None;
        for i in 0..pool.len() {
            if Some(pool[i]) == last {
                continue;
            }
            last = Some(pool[i]);
            let l = pool.remove(i);
            cur.push(l);
            rec(pool, cur, out);
            cur.pop();
            pool.insert(i, l);
        }
    }
    rec(&mut pool, &mut cur, &mut out);
    out
}

/// Monomial basis of P_m(C^n), graded lexicographic (here: fixed degree m,
/// exponents in lexicographic order).
pub fn monomial_basis(n: usize, m: usize) -> Vec<Vec<u32>> {
    let mut out = vec![];
    let mut cur = vec![0u32; n];
    fn rec(out: &mut Vec<Vec<u32>>, cur: &mut Vec<u32>, var: usize, left: u32) {
        if var + 1 == cur.len() {
            cur[var] = left;
            out.push(cur.clone());
            return;
        }
        for e in (0..=left).rev() {
            cur[var] = e;
            rec(out, cur, var + 1, left - e);
        }
        cur[var] = 0;
    }
    rec(&mut out, &mut cur, 0, m as u32);
    out
}

/// Exact matrix of the derived representation of a word sum from P_m to
/// P_{m'}; rows indexed by the target basis, columns by the source basis.
#[derive(Debug, Clone, PartialEq)]
pub struct FockMatrix {
    pub source_degree: usize,
    pub target_degree: usize,
    pub source_basis: Vec<Vec<u32>>,
    pub target_basis: Vec<Vec<u32>>,
    /// entries[row][col]
    pub entries: Vec<Vec<Rational>>,
}

pub const FOCK_DIM_CAP: usize = 4096;

/// Substitution rules of the derived Bargmann representation at lambda = 1:
/// Z_h acts as d/dw_h and Zb_h as multiplication by -w_h/2, applied in word
/// order (rightmost letter first).
pub fn fock_matrix(d: &WordSum, m: usize) -> Result<FockMatrix> {
    let n = d.n;
    // degree change must be uniform over words
    let mut delta: Option<i64> = None;
    for (_, w) in &d.terms {
        let z = w.iter().filter(|l| matches!(l, Letter::Z(_))).count() as i64;
        let zb = w.len() as i64 - z;
        let dd = zb - z;
        match delta {
            None => delta = Some(dd),
            Some(x) if x == dd => {}
            _ => {
                return Err(Error::EigenvalueStructure(
                    "word sum mixes degree shifts; no single matrix exists".into(),
                ))
            }
        }
    }
    let delta = delta.unwrap_or(0);
    let target_degree_i = m as i64 + delta;
    let target_degree = if target_degree_i < 0 { 0 } else { target_degree_i as usize };
    let source_basis = monomial_basis(n, m);
    let target_basis = if target_degree_i < 0 {
        vec![]
    } else {
        monomial_basis(n, target_degree)
    };
    if source_basis.len() > FOCK_DIM_CAP || target_basis.len() > FOCK_DIM_CAP {
        return Err(Error::MatrixTooLarge {
            dim: source_basis.len().max(target_basis.len()),
            cap: FOCK_DIM_CAP,
        });
    }
    let index: BTreeMap<Vec<u32>, usize> =
        target_basis.iter().cloned().enumerate().map(|(i, b)| (b, i)).collect();
    let mut entries = vec![vec![Rational::zero(); source_basis.len()]; target_basis.len()];
    for (col, mono) in source_basis.iter().enumerate() {
        // state: exponent -> coefficient
        for (c, word) in &d.terms {
            let mut state: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
            state.insert(mono.clone(), c.clone());
            for &l in word.iter().rev() {
                let mut next: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
                for (e, coef) in &state {
                    match l {
                        Letter::Z(h) => {
                            if e[h] > 0 {
                                let mut e2 = e.clone();
                                e2[h] -= 1;
                                let add = coef * rat(e[h] as i64, 1);
                                *next.entry(e2).or_insert_with(Rational::zero) += add;
                            }
                        }
                        Letter::Zb(h) => {
                            let mut e2 = e.clone();
                            e2[h] += 1;
                            let add = coef * rat(-1, 2);
                            *next.entry(e2).or_insert_with(Rational::zero) += add;
                        }
                    }
                }
                state = next;
                if state.is_empty() {
                    break;
                }
            }
            for (e, coef) in state {
                if coef.is_zero() {
                    continue;
                }
                let row = index
                    .get(&e)
                    .copied()
                    .expect("degree bookkeeping guarantees membership");
                entries[row][col] += coef;
            }
        }
    }
    Ok(FockMatrix { source_degree: m, target_degree, source_basis, target_basis, entries })
}

impl FockMatrix {
    pub fn is_square(&self) -> bool {
        self.source_degree == self.target_degree
    }

    pub fn mul(&self, other: &FockMatrix) -> FockMatrix {
        assert_eq!(self.source_basis.len(), other.target_basis.len());
        let rows = self.target_basis.len();
        let cols = other.source_basis.len();
        let inner = self.source_basis.len();
        let mut entries = vec![vec![Rational::zero(); cols]; rows];
        for r in 0..rows {
            for k in 0..inner {
                if self.entries[r][k].is_zero() {
                    continue;
                }
                for c in 0..cols {
                    if other.entries[k][c].is_zero() {
                        continue;
                    }
                    let prod = &self.entries[r][k] * &other.entries[k][c];
                    entries[r][c] += prod;
                }
            }
        }
        FockMatrix {
            source_degree: other.source_degree,
            target_degree: self.target_degree,
            source_basis: other.source_basis.clone(),
            target_basis: self.target_basis.clone(),
            entries,
        }
    }

    pub fn pow(&self, k: usize) -> FockMatrix {
        assert!(self.is_square() && k >= 1);
        let mut out = self.clone();
        for _ in 1..k {
            out = out.mul(self);
        }
        out
    }

    pub fn add_scaled(&self, other: &FockMatrix, c: &Rational) -> FockMatrix {
        let mut out = self.clone();
        for (ra, rb) in out.entries.iter_mut().zip(&other.entries) {
            for (a, b) in ra.iter_mut().zip(rb) {
                *a += b * c;
            }
        }
        out
    }

    /// Exactly scalar on the whole space? Returns the scalar if so.
    pub fn as_scalar(&self) -> Option<Rational> {
        if !self.is_square() || self.entries.is_empty() {
            return None;
        }
        let lam = self.entries[0][0].clone();
        for (r, row) in self.entries.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                if r == c {
                    if *v != lam {
                        return None;
                    }
                } else if !v.is_zero() {
                    return None;
                }
            }
        }
        Some(lam)
    }

    /// Exactly diagonal? Returns the diagonal if so.
    pub fn as_diagonal(&self) -> Option<Vec<Rational>> {
        if !self.is_square() {
            return None;
        }
        for (r, row) in self.entries.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                if r != c && !v.is_zero() {
                    return None;
                }
            }
        }
        Some((0..self.entries.len()).map(|i| self.entries[i][i].clone()).collect())
    }

    /// Least common multiple of entry denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        let mut l = BigInt::one();
        for row in &self.entries {
            for v in row {
                l = num_integer::lcm(l, v.denom().clone());
            }
        }
        l
    }
}

/// The privileged generator system with exact eigenvalue tables.
#[derive(Debug, Clone)]
pub struct GeneratorSystem {
    pub action: ActionDescriptor,
    pub basis: HilbertBasis,
    pub degrees: Vec<usize>,
    pub normalization: i64,
    pub convention: SymConvention,
    /// words of the operators V_j (without V_0 = -iT)
    pub operators: Vec<WordSum>,
    /// exact eigenvalues V^_j(phi_alpha), one vector per label, |alpha| <= m_max
    pub eigentable: BTreeMap<IrredLabel, Vec<i64>>,
    /// degenerate eigenvalue polynomials rho_j on C^n
    pub rho: Vec<InvPoly>,
    pub m_max: usize,
}

impl GeneratorSystem {
    pub fn d(&self) -> usize {
        self.operators.len()
    }

    /// V^_j(phi_alpha) for labels inside the table.
    pub fn eigenvalue(&self, j: usize, label: &IrredLabel) -> Option<i64> {
        self.eigentable.get(label).map(|v| v[j])
    }

    /// xi-coordinates of the principal point (lambda, alpha).
    pub fn xi(&self, lambda: f64, label: &IrredLabel) -> Option<Vec<f64>> {
        let v = self.eigentable.get(label)?;
        Some(
            v.iter()
                .zip(&self.degrees)
                .map(|(&e, &mj)| lambda.abs().powi(mj as i32) * e as f64)
                .collect(),
        )
    }

    /// rho(w) in R^d for a point w in C^n.
    pub fn rho_eval(&self, w: &[num_complex::Complex64]) -> Vec<f64> {
        self.rho.iter().map(|p| p.eval(w).re).collect()
    }

    /// Labels with total degree <= cap, in (degree, lex) order.
    pub fn labels_up_to(&self, cap: usize) -> Vec<IrredLabel> {
        let n = self.action.n;
        let mut out = vec![];
        match self.action.kind {
            ActionKind::UnitaryFull => {
                for k in 0..=cap {
                    out.push(IrredLabel::Unitary(k));
                }
            }
            ActionKind::Torus => {
                for k in 0..=cap {
                    for mono in monomial_basis(n, k) {
                        out.push(IrredLabel::Torus(mono.iter().map(|&x| x as usize).collect()));
                    }
                }
            }
        }
        out
    }

    /// Serialize the eigenvalue table with exact numbers.
    pub fn eigentable_json(&self) -> serde_json::Value {
        let gens: Vec<serde_json::Value> = self
            .basis
            .generators
            .iter()
            .enumerate()
            .map(|(j, g)| {
                let coeffs: Vec<serde_json::Value> = g
                    .terms
                    .iter()
                    .map(|((a, b), c)| {
                        serde_json::json!({
                            "a": a,
                            "b": b,
                            "num": c.numer().to_string().parse::<i64>().unwrap(),
                            "den": c.denom().to_string().parse::<i64>().unwrap(),
                        })
                    })
                    .collect();
                serde_json::json!({ "j": j + 1, "m_j": self.degrees[j], "gamma_coeffs": coeffs })
            })
            .collect();
        let table: Vec<serde_json::Value> = self
            .eigentable
            .iter()
            .map(|(label, values)| {
                let alpha = match label {
                    IrredLabel::Unitary(k) => vec![*k],
                    IrredLabel::Torus(a) => a.clone(),
                };
                serde_json::json!({ "alpha": alpha, "values": values })
            })
            .collect();
        serde_json::json!({
            "action": format!("{}", self.action),
            "n": self.action.n,
            "N": self.normalization,
            "convention": format!("{:?}", self.convention),
            "generators": gens,
            "table": table,
        })
    }
}

/// Block structure of P_m under the action: list of (label, column indices).
pub fn blocks_of_degree(
    action: ActionDescriptor,
    m: usize,
) -> Vec<(IrredLabel, Vec<usize>)> {
    let basis = monomial_basis(action.n, m);
    match action.kind {
        ActionKind::UnitaryFull => {
            vec![(IrredLabel::Unitary(m), (0..basis.len()).collect())]
        }
        ActionKind::Torus => basis
            .iter()
            .enumerate()
            .map(|(i, e)| {
                (IrredLabel::Torus(e.iter().map(|&x| x as usize).collect()), vec![i])
            })
            .collect(),
    }
}

/// Check that a square Fock matrix is scalar on each irreducible block and
/// extract the per-block scalars.
pub fn block_scalars(
    mat: &FockMatrix,
    blocks: &[(IrredLabel, Vec<usize>)],
) -> Result<Vec<(IrredLabel, Rational)>> {
    let mut out = vec![];
    let dim = mat.source_basis.len();
    for (label, cols) in blocks {
        let lam = mat.entries[cols[0]][cols[0]].clone();
        for &c in cols {
            for r in 0..dim {
                let v = &mat.entries[r][c];
                if r == c {
                    if *v != lam {
                        return Err(Error::EigenvalueStructure(format!(
                            "block {label:?} not scalar: diagonal mismatch"
                        )));
                    }
                } else if !v.is_zero() {
                    return Err(Error::EigenvalueStructure(format!(
                        "block {label:?} not scalar: off-diagonal entry at ({r},{c})"
                    )));
                }
            }
        }
        out.push((label.clone(), lam));
    }
    Ok(out)
}

/// Build the generator system: choose the symmetrization convention by the
/// normalization identity, find the minimal integer N clearing denominators,
/// form V_j = N (-1)^{m_j} L_j + (sublaplacian)^{m_j}, and verify the exact
/// integrality, sign, and block-scalar structure.
pub fn build_generator_system(action: ActionDescriptor, m_max: usize) -> Result<GeneratorSystem> {
    let n = action.n;
    let basis = hilbert_basis(action)?;
    let degrees = basis.degrees.clone();
    let subl = WordSum::sublaplacian(n);

    // Pick the convention making sum_{m_j = 1} L_j equal -sublaplacian/2 on
    // polynomial spaces (tested exactly on degrees 0..=3).
    let mut chosen = None;
    'conv: for conv in [SymConvention::Average, SymConvention::Sum, SymConvention::ScaledAverage] {
        let mut lsum = WordSum::zero(n);
        for (g, &mj) in basis.generators.iter().zip(&degrees) {
            if mj == 1 {
                lsum = lsum.add(&symmetrize_with(g, conv));
            }
        }
        for m in 0..=3usize {
            let lhs = fock_matrix(&lsum, m)?;
            let rhs = fock_matrix(&subl.scale(&rat(-1, 2)), m)?;
            if lhs != rhs {
                continue 'conv;
            }
        }
        chosen = Some(conv);
        break;
    }
    let convention = chosen.ok_or_else(|| {
        Error::EigenvalueStructure(
            "no symmetrization convention satisfies the normalization identity".into(),
        )
    })?;

    let l_ops: Vec<WordSum> =
        basis.generators.iter().map(|g| symmetrize_with(g, convention)).collect();

    // minimal N: lcm of denominators of all M_{j,m}, m <= m_max
    let mut ncm = BigInt::one();
    for l in &l_ops {
        for m in 0..=m_max {
            let mat = fock_matrix(l, m)?;
            ncm = num_integer::lcm(ncm, mat.denominator_lcm());
        }
    }
    let nval: i64 = ncm.to_string().parse().map_err(|_| {
        Error::EigenvalueStructure("normalization integer exceeds i64".into())
    })?;

    // operators V_j as word sums
    let operators: Vec<WordSum> = l_ops
        .iter()
        .zip(&degrees)
        .map(|(l, &mj)| {
            let sign = if mj % 2 == 0 { rat(nval, 1) } else { rat(-nval, 1) };
            l.scale(&sign).add(&subl.pow(mj))
        })
        .collect();

    // eigentable with exact verification
    let mut eigentable: BTreeMap<IrredLabel, Vec<i64>> = BTreeMap::new();
    for m in 0..=m_max {
        let blocks = blocks_of_degree(action, m);
        let mut per_label: BTreeMap<IrredLabel, Vec<i64>> =
            blocks.iter().map(|(l, _)| (l.clone(), vec![])).collect();
        for (j, (l, &mj)) in l_ops.iter().zip(&degrees).enumerate() {
            let lmat = fock_matrix(l, m)?;
            // integrality and sign of the pre-normalization eigenvalues
            let lscalars = block_scalars(&lmat, &blocks)?;
            for (label, lam) in &lscalars {
                let scaled = lam * rat(nval, 1);
                if !scaled.is_integer() {
                    return Err(Error::EigenvalueStructure(format!(
                        "N * eigenvalue not integral for generator {j} at {label:?}"
                    )));
                }
                let expected_negative = mj % 2 == 1;
                if lam.is_positive() == expected_negative {
                    return Err(Error::EigenvalueStructure(format!(
                        "eigenvalue sign violates (-1)^m_j for generator {j} at {label:?}"
                    )));
                }
            }
            // the full operator
            let sign = if mj % 2 == 0 { rat(nval, 1) } else { rat(-nval, 1) };
            let vmat = fock_matrix(&subl, m)?.pow(mj).add_scaled(&lmat, &sign);
            let scalars = block_scalars(&vmat, &blocks)?;
            for (label, lam) in scalars {
                if !lam.is_integer() || !lam.is_positive() {
                    return Err(Error::EigenvalueStructure(format!(
                        "eigenvalue of V_{} at {label:?} is {lam}, not a positive integer",
                        j + 1
                    )));
                }
                let v: i64 = lam.to_integer().to_string().parse().unwrap();
                per_label.get_mut(&label).unwrap().push(v);
            }
        }
        eigentable.extend(per_label);
    }

    // degenerate eigenvalue polynomials rho_j = N gamma_j + |w|^{2 m_j}
    let rho: Vec<InvPoly> = basis
        .generators
        .iter()
        .zip(&degrees)
        .map(|(g, &mj)| g.scale(&rat(nval, 1)).add(&InvPoly::radial_power(n, mj)))
        .collect();

    Ok(GeneratorSystem {
        action,
        basis,
        degrees,
        normalization: nval,
        convention,
        operators,
        eigentable,
        rho,
        m_max,
    })
}
