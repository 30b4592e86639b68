//! The restricted height-model companion of the loop model.
//!
//! Heights live on the triangular alcove `kappa1 + kappa2 <= p' - 3` of the
//! rank-two weight lattice and change by one of three fixed step vectors
//! between neighbouring sites.  Faces carry local weights built from the
//! trigonometric function of the height gaps, and a staggered row of faces
//! yields a commuting transfer family.  The fused hierarchy built on this
//! representation truncates: every fused matrix with `m + n = p' - 2`
//! vanishes, and the few labels beyond the truncation line collapse onto
//! `u`-independent constant matrices with a cube-root-of-identity structure.
//!
//! # Example
//!
//! Closed paths exist only when the width is a multiple of three, since the
//! three step vectors sum to zero:
//!
//! ```
//! use a2lattice::rsos::PathSpace;
//! use a2lattice::scalars::{C64, Params};
//!
//! let params = Params::from_root(2, 5, C64::new(1.0, 0.0));
//! assert_eq!(PathSpace::cyclic(&params, 3).dim(), 12);
//! assert_eq!(PathSpace::cyclic(&params, 4).dim(), 0);
//! ```

use std::collections::HashMap;

use nalgebra::DMatrix;
use thiserror::Error;

use crate::faceops::{cell, Cell, Tile};
use crate::hierarchy::{ElementarySource, Hierarchy};
use crate::scalars::{BraidLabel, Params, C64};

/// A height: a point `(kappa1, kappa2)` of the triangular alcove in the
/// fundamental-weight basis.
pub type Height = (i32, i32);

/// The three step vectors in the fundamental-weight basis; a path moves from
/// `a` to `a + STEPS[mu]`.  They sum to zero, so closed paths need a length
/// divisible by three.
pub const STEPS: [Height; 3] = [(1, 0), (-1, 1), (0, -1)];

/// All alcove points `kappa1 + kappa2 <= p' - 3`, in lexicographic order.
///
/// # Panics
///
/// Panics for `pprime < 5`: smaller alcoves leave no room for the three
/// steps.
pub fn lattice(pprime: u32) -> Vec<Height> {
    assert!(pprime >= 5, "the height alcove needs p' >= 5");
    let cap = pprime as i32 - 3;
    let mut out = Vec::new();
    for k1 in 0..=cap {
        for k2 in 0..=(cap - k1) {
            out.push((k1, k2));
        }
    }
    out
}

/// Whether `a` lies in the alcove for `pprime`.
pub fn in_alcove(pprime: u32, a: Height) -> bool {
    a.0 >= 0 && a.1 >= 0 && a.0 + a.1 <= pprime as i32 - 3
}

/// The step index `mu` with `b = a + STEPS[mu]`, if any.
pub fn step_label(a: Height, b: Height) -> Option<usize> {
    STEPS
        .iter()
        .position(|h| (a.0 + h.0, a.1 + h.1) == b)
}

/// Height gap `(a + rho) . (h_mu - h_nu)` for step indices `mu, nu` in
/// `0..3`: an antisymmetric integer with `gap(a,0,1) = kappa1 + 1`,
/// `gap(a,1,2) = kappa2 + 1`, `gap(a,0,2) = kappa1 + kappa2 + 2`.
pub fn height_gap(a: Height, mu: usize, nu: usize) -> i32 {
    match (mu, nu) {
        (0, 1) => a.0 + 1,
        (1, 2) => a.1 + 1,
        (0, 2) => a.0 + a.1 + 2,
        (1, 0) | (2, 1) | (2, 0) => -height_gap(a, nu, mu),
        _ => 0,
    }
}

/// Errors from evaluating a face weight on explicit corner heights.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum WeightError {
    /// The four corners are not pairwise connected by step vectors.
    #[error("corner heights are not pairwise admissible")]
    Inadmissible,
    /// `sin(lambda * gap)` vanishes for the relevant height gap.
    #[error("face weight has a pole: sin(lambda * gap) = 0")]
    Pole,
}

/// Face weight with corners laid out as
///
/// ```text
///   a   b      (top edge)
///     u
///   d   c      (bottom edge)
/// ```
///
/// The weight is `delta(b, d) sin(lambda - u)/sin(lambda)` plus, when the
/// two bottom-path steps `a -> d -> c` differ,
/// `sin(u)/sin(lambda) * sin(lambda (g + 1))/sin(lambda g)` with
/// `g = height_gap(a, mu, nu)`.  At `u = 0` only the `delta` term survives.
pub fn face_weight(
    params: &Params,
    a: Height,
    b: Height,
    d: Height,
    c: Height,
    u: C64,
) -> Result<C64, WeightError> {
    let mu = step_label(a, d).ok_or(WeightError::Inadmissible)?;
    let nu = step_label(d, c).ok_or(WeightError::Inadmissible)?;
    step_label(a, b).ok_or(WeightError::Inadmissible)?;
    step_label(b, c).ok_or(WeightError::Inadmissible)?;
    let lambda = params.lambda;
    let mut w = C64::new(0.0, 0.0);
    if b == d {
        w += (lambda - u).sin() / lambda.sin();
    }
    if mu != nu {
        let g = f64::from(height_gap(a, mu, nu));
        let denom = (lambda * g).sin();
        if denom.abs() < 1e-12 {
            return Err(WeightError::Pole);
        }
        w += u.sin() / lambda.sin() * ((lambda * (g + 1.0)).sin() / denom);
    }
    Ok(w)
}

/// Internal weight: zero on inadmissible corners, panics on poles (which
/// cannot occur for alcove heights at `lambda = pi (p'-p)/p'`).
fn weight(params: &Params, a: Height, b: Height, d: Height, c: Height, u: C64) -> C64 {
    match face_weight(params, a, b, d, c, u) {
        Ok(w) => w,
        Err(WeightError::Inadmissible) => C64::new(0.0, 0.0),
        Err(WeightError::Pole) => panic!("face weight pole on alcove heights"),
    }
}

/// Basis of admissible height words, open or cyclic, in lexicographic order.
#[derive(Clone)]
pub struct PathSpace {
    params: Params,
    pprime: u32,
    len: usize,
    cyclic: bool,
    words: Vec<Vec<Height>>,
    index: HashMap<Vec<Height>, usize>,
}

impl PathSpace {
    /// Cyclic words of length `n_cols` (the number of faces per transfer
    /// row).  Empty unless `n_cols` is a positive multiple of three.
    pub fn cyclic(params: &Params, n_cols: usize) -> PathSpace {
        PathSpace::build(params, n_cols, true)
    }

    /// Open words with `len` letters, for the local-operator relations.
    pub fn open(params: &Params, len: usize) -> PathSpace {
        PathSpace::build(params, len, false)
    }

    fn build(params: &Params, len: usize, cyclic: bool) -> PathSpace {
        let (_, pprime) = params
            .root
            .expect("height paths need a root-of-unity coupling p/p'");
        assert!(len >= 1);
        let mut words = Vec::new();
        let mut word: Vec<Height> = Vec::with_capacity(len);
        for start in lattice(pprime) {
            word.push(start);
            extend(pprime, len, cyclic, &mut word, &mut words);
            word.pop();
        }
        words.sort();
        let index = words
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i))
            .collect();
        PathSpace {
            params: params.clone(),
            pprime,
            len,
            cyclic,
            words,
            index,
        }
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn pprime(&self) -> u32 {
        self.pprime
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn is_cyclic(&self) -> bool {
        self.cyclic
    }

    pub fn dim(&self) -> usize {
        self.words.len()
    }

    pub fn words(&self) -> &[Vec<Height>] {
        &self.words
    }

    /// Local generator at position `j`, replacing the middle letter of the
    /// segment at `j-1, j, j+1`.  The matrix element from middle letter `d`
    /// to middle letter `b` is the `u`-part coefficient of
    /// [`face_weight`]: `sin(lambda (g+1))/sin(lambda g)` with `g` the gap
    /// of the input steps.  For open words `j` must be interior.
    pub fn hecke(&self, j: usize) -> DMatrix<C64> {
        if !self.cyclic {
            assert!(j >= 1 && j + 1 < self.len, "open-word position not interior");
        }
        let d = self.dim();
        let mut m = DMatrix::from_element(d, d, C64::new(0.0, 0.0));
        let lambda = self.params.lambda;
        for (ci, w) in self.words.iter().enumerate() {
            let jm = if self.cyclic { (j + self.len - 1) % self.len } else { j - 1 };
            let jp = if self.cyclic { (j + 1) % self.len } else { j + 1 };
            let (a, mid, c) = (w[jm], w[j], w[jp]);
            let mu = step_label(a, mid).expect("stored word is admissible");
            let nu = step_label(mid, c).expect("stored word is admissible");
            if mu == nu {
                continue;
            }
            let g = f64::from(height_gap(a, mu, nu));
            let coeff = C64::new((lambda * (g + 1.0)).sin() / (lambda * g).sin(), 0.0);
            for other in [mu, nu] {
                let b = (a.0 + STEPS[other].0, a.1 + STEPS[other].1);
                let mut w2 = w.clone();
                w2[j] = b;
                if let Some(&ri) = self.index.get(&w2) {
                    m[(ri, ci)] += coeff;
                }
            }
        }
        m
    }

    /// The conjugation involution on cyclic words: flip each height
    /// `(kappa1, kappa2) -> (kappa2, kappa1)` and reverse the word about its
    /// base point.  Squares to the identity.
    pub fn conjugation(&self) -> DMatrix<C64> {
        assert!(self.cyclic);
        let d = self.dim();
        let mut m = DMatrix::from_element(d, d, C64::new(0.0, 0.0));
        for (ci, w) in self.words.iter().enumerate() {
            let mut w2: Vec<Height> = w.iter().map(|&(k1, k2)| (k2, k1)).collect();
            w2[1..].reverse();
            let ri = self.index[&w2];
            m[(ri, ci)] = C64::new(1.0, 0.0);
        }
        m
    }

    /// Elementary transfer matrix of one family on cyclic words.
    ///
    /// The first family is the staggered row product
    /// `T[w'][w] = prod_j W(w'_{j-1}, w'_j / w_j, w_{j+1} | u)`, which is the
    /// identity at `u = 0`.  The second family is its conjugate,
    /// `C T(lambda - u) C` with [`PathSpace::conjugation`] `C`.
    pub fn elementary(&self, label: BraidLabel, u: C64) -> DMatrix<C64> {
        assert!(self.cyclic, "transfer matrices need cyclic words");
        match label {
            BraidLabel::OneZero => self.row(u),
            BraidLabel::ZeroOne => {
                let c = self.conjugation();
                let lambda = C64::new(self.params.lambda, 0.0);
                &c * self.row(lambda - u) * &c
            }
        }
    }

    fn row(&self, u: C64) -> DMatrix<C64> {
        let d = self.dim();
        let n = self.len;
        let mut m = DMatrix::from_element(d, d, C64::new(0.0, 0.0));
        for (ci, w) in self.words.iter().enumerate() {
            'rows: for (ri, wp) in self.words.iter().enumerate() {
                let mut z = C64::new(1.0, 0.0);
                for j in 0..n {
                    let jm = (j + n - 1) % n;
                    let jp = (j + 1) % n;
                    z *= weight(&self.params, wp[jm], wp[j], w[j], w[jp], u);
                    if z == C64::new(0.0, 0.0) {
                        continue 'rows;
                    }
                }
                m[(ri, ci)] = z;
            }
        }
        m
    }

    /// Fused hierarchy seeded with the two elementary row families.
    pub fn hierarchy(&self, u: C64) -> Hierarchy {
        assert!(self.cyclic);
        Hierarchy::from_source(
            &self.params,
            Box::new(PathSource {
                space: self.clone(),
            }),
            self.len,
            u,
        )
    }
}

fn extend(
    pprime: u32,
    len: usize,
    cyclic: bool,
    word: &mut Vec<Height>,
    out: &mut Vec<Vec<Height>>,
) {
    if word.len() == len {
        if !cyclic || step_label(word[len - 1], word[0]).is_some() {
            out.push(word.clone());
        }
        return;
    }
    let last = *word.last().expect("word has a base point");
    for h in STEPS {
        let next = (last.0 + h.0, last.1 + h.1);
        if in_alcove(pprime, next) {
            word.push(next);
            extend(pprime, len, cyclic, word, out);
            word.pop();
        }
    }
}

struct PathSource {
    space: PathSpace,
}

impl ElementarySource for PathSource {
    fn dim(&self) -> usize {
        self.space.dim()
    }

    fn matrix(&self, label: BraidLabel, u: C64) -> DMatrix<C64> {
        self.space.elementary(label, u)
    }
}

/// The constant matrices that close the truncated hierarchy.
pub struct ClosureConstants {
    /// `T_0^(p',0) / f_(-1)`, independent of `u`.
    pub a: DMatrix<C64>,
    /// `T_0^(0,p') / f_(-1)`, independent of `u`.
    pub atilde: DMatrix<C64>,
    /// `T_0^(p'-3,0) / (sigma^(p'-1) f_(-3))`, a cube root of the identity.
    pub b: DMatrix<C64>,
    /// `T_0^(0,p'-3) / (sigma^(p'-p) f_(-2))`, a cube root of the identity.
    pub btilde: DMatrix<C64>,
    /// `2 a + sigma^p' b`: the first closure matrix.
    pub j: DMatrix<C64>,
    /// `2 atilde + sigma^(p'-p) btilde`: the second closure matrix.
    pub k: DMatrix<C64>,
}

/// One named residual from the truncation/closure verification.
pub struct ClosureCheck {
    pub label: &'static str,
    pub residual: f64,
}

/// Verifies the truncation of the fused family and extracts the closure
/// constants, evaluating at the two arguments `u1`, `u2` (the second is used
/// for the `u`-independence checks).  Returns the constants at `u1` and the
/// named residuals; all residuals are relative to the scale of the matrices
/// involved.
pub fn verify_closure(
    space: &PathSpace,
    u1: C64,
    u2: C64,
) -> (ClosureConstants, Vec<ClosureCheck>) {
    let (p, pp) = space
        .params()
        .root
        .expect("closure needs a root-of-unity coupling");
    let pp = i64::from(pp);
    let p = i64::from(p);
    let h1 = space.hierarchy(u1);
    let h2 = space.hierarchy(u2);
    let sigma = h1.sigma();
    let sig = |e: i64| C64::new(sigma.powi(e as i32), 0.0);
    let mut checks = Vec::new();
    let mut push = |label: &'static str, num: f64, scale: f64| {
        checks.push(ClosureCheck {
            label,
            residual: num / scale.max(1.0),
        });
    };
    let norm = crate::transfer::max_abs;

    // Every fused matrix on the truncation line vanishes.
    let mut trunc: f64 = 0.0;
    for m in 0..=(pp - 2) {
        trunc = trunc.max(norm(&h1.t(0, m, pp - 2 - m)));
    }
    push("truncation-line", trunc, 1.0);

    // The two labels beyond the line are proportional.
    let t_top = h1.t(0, pp, 0);
    let t_mixed = h1.t(0, pp - 2, 1);
    push(
        "beyond-truncation-ratio",
        norm(&(&t_top * h1.f(-2) + &t_mixed * h1.f(-1))),
        norm(&t_top),
    );

    let a = &t_top / h1.f(-1);
    let atilde = h1.t(0, 0, pp) / h1.f(-1);
    push(
        "constant-a",
        norm(&(&a - h2.t(0, pp, 0) / h2.f(-1))),
        norm(&a),
    );
    push(
        "constant-atilde",
        norm(&(&atilde - h2.t(0, 0, pp) / h2.f(-1))),
        norm(&atilde),
    );
    push(
        "constant-a-mixed",
        norm(&(&t_mixed + &a * h1.f(-2))),
        norm(&a),
    );
    push(
        "constant-atilde-mixed",
        norm(&(h1.t(0, 1, pp - 2) + &atilde * (sig(1) * h1.f(-1)))),
        norm(&atilde),
    );

    let b = h1.t(0, pp - 3, 0) / (sig(pp - 1) * h1.f(-3));
    let btilde = h1.t(0, 0, pp - 3) / (sig(pp - p) * h1.f(-2));
    let id = h1.identity();
    push("cube-left", norm(&(&b * &b * &b - &id)), 1.0);
    push("cube-right", norm(&(&btilde * &btilde * &btilde - &id)), 1.0);
    push(
        "constant-b",
        norm(&(&b - h2.t(0, pp - 3, 0) / (sig(pp - 1) * h2.f(-3)))),
        norm(&b),
    );

    let j = &a * C64::new(2.0, 0.0) + &b * sig(pp);
    let k = &atilde * C64::new(2.0, 0.0) + &btilde * sig(pp - p);
    let lhs = h1.t(0, pp, 0);
    let rhs = h1.t(1, pp - 2, 1) - h1.t(2, pp - 3, 0) * sig(1) + &j * h1.f(-1);
    push("closure-left", norm(&(&lhs - rhs)), norm(&lhs));
    let lhs = h1.t(0, 0, pp);
    let rhs = h1.t(0, 1, pp - 2) * sig(1) - h1.t(1, 0, pp - 3) + &k * h1.f(-1);
    push("closure-right", norm(&(&lhs - rhs)), norm(&lhs));

    (
        ClosureConstants {
            a,
            atilde,
            b,
            btilde,
            j,
            k,
        },
        checks,
    )
}

/// The two cells of the special-gauge decomposition of the first elementary
/// face: with gauge parameter `t = e^(-iu)`,
/// `face10(u) = sin(lambda-u)/sin(lambda) * plain + sin(u)/sin(lambda) * hecke`.
pub fn hecke_form_cells(lambda: f64) -> (Cell, Cell) {
    let one = C64::new(1.0, 0.0);
    let plain = cell(&[
        (Tile::Empty, one),
        (Tile::ArcNw, one),
        (Tile::ArcSe, one),
        (Tile::DiagNwSe, one),
    ]);
    let phase = (C64::i() * lambda).exp();
    let hecke = cell(&[
        (Tile::ArcNw, phase.inv()),
        (Tile::ArcSe, phase),
        (Tile::Vert, one),
        (Tile::Horiz, one),
        (Tile::DiagNeSw, one),
    ]);
    (plain, hecke)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fusion::{cell_diff, lin};
    use crate::transfer::max_abs;

    fn root_params(p: u32, pp: u32) -> Params {
        Params::from_root(p, pp, C64::new(1.0, 0.0))
    }

    #[test]
    fn alcove_counts() {
        assert_eq!(lattice(5).len(), 6);
        assert_eq!(lattice(6).len(), 10);
        assert_eq!(lattice(7).len(), 15);
    }

    #[test]
    #[should_panic(expected = "p' >= 5")]
    fn alcove_rejects_small_pprime() {
        lattice(4);
    }

    #[test]
    fn height_gaps() {
        assert_eq!(height_gap((0, 0), 0, 1), 1);
        assert_eq!(height_gap((0, 0), 1, 2), 1);
        assert_eq!(height_gap((0, 0), 0, 2), 2);
        assert_eq!(height_gap((2, 1), 0, 2), 5);
        for mu in 0..3 {
            for nu in 0..3 {
                assert_eq!(
                    height_gap((1, 2), mu, nu),
                    -height_gap((1, 2), nu, mu)
                );
            }
        }
    }

    #[test]
    fn face_weight_cases() {
        // Straight faces give the pure delta weight; mixed-step faces with
        // coinciding vertical neighbours give the single-ratio form that
        // combines both terms.
        let params = root_params(2, 5);
        let lambda = params.lambda;
        let u = C64::new(0.37, 0.21);
        let a = (1, 0);
        // Straight: both bottom steps equal, b = d.
        let d = (2, 0);
        let c = (3, 0);
        let w = face_weight(&params, a, d, d, c, u).unwrap();
        let expected = (lambda - u).sin() / lambda.sin();
        assert!((w - expected).norm() < 1e-13);
        // Bent with b = d: delta plus ratio collapses to a single quotient.
        let d = (2, 0);
        let c = (1, 1);
        let g = f64::from(height_gap(a, 0, 1));
        let w = face_weight(&params, a, d, d, c, u).unwrap();
        let expected = (u + lambda * g).sin() / (lambda * g).sin();
        assert!((w - expected).norm() < 1e-12);
        // Bent with b != d: pure ratio term.
        let b = (0, 1);
        let w = face_weight(&params, a, b, d, c, u).unwrap();
        let expected = u.sin() / lambda.sin() * ((lambda * (g + 1.0)).sin() / (lambda * g).sin());
        assert!((w - expected).norm() < 1e-12);
        // Inadmissible corners are rejected.
        assert_eq!(
            face_weight(&params, a, (1, 0), (2, 0), (3, 0), u),
            Err(WeightError::Inadmissible)
        );
    }

    #[test]
    fn open_word_counts() {
        assert_eq!(PathSpace::open(&root_params(1, 5), 5).dim(), 39);
        assert_eq!(PathSpace::open(&root_params(1, 6), 5).dim(), 144);
        assert_eq!(PathSpace::open(&root_params(1, 7), 5).dim(), 330);
    }

    #[test]
    fn cyclic_word_counts() {
        let p = root_params(2, 5);
        for (n, expect) in [(1, 0), (2, 0), (3, 12), (4, 0), (5, 0), (6, 54)] {
            assert_eq!(PathSpace::cyclic(&p, n).dim(), expect, "n = {n}");
        }
        assert_eq!(PathSpace::cyclic(&root_params(1, 6), 3).dim(), 27);
        assert_eq!(PathSpace::cyclic(&root_params(1, 7), 3).dim(), 48);
    }

    #[test]
    fn local_generator_relations() {
        // Quadratic, cubic and quartic relations of the local generators on
        // open words, across several alcove sizes.
        for pp in [5, 6, 7] {
            let params = root_params(1, pp);
            let space = PathSpace::open(&params, 5);
            let beta = C64::new(2.0 * params.lambda.cos(), 0.0);
            let us: Vec<_> = (1..4).map(|j| space.hecke(j)).collect();
            for u in &us {
                assert!(max_abs(&(u * u - u * beta)) < 1e-11, "quadratic p'={pp}");
            }
            for w in us.windows(2) {
                let (a, b) = (&w[0], &w[1]);
                let lhs = a * b * a - a;
                let rhs = b * a * b - b;
                assert!(max_abs(&(lhs - rhs)) < 1e-11, "cubic p'={pp}");
            }
            let (um, u0, up) = (&us[0], &us[1], &us[2]);
            let lhs = (um - up * u0 * um + u0) * (u0 * up * u0 - u0);
            assert!(max_abs(&lhs) < 1e-10, "quartic p'={pp}");
        }
    }

    #[test]
    fn transfer_identity_and_commutation() {
        for (p, pp) in [(2, 5), (1, 6)] {
            let params = root_params(p, pp);
            let space = PathSpace::cyclic(&params, 3);
            let id = DMatrix::identity(space.dim(), space.dim());
            let at_zero = space.elementary(BraidLabel::OneZero, C64::new(0.0, 0.0));
            assert!(max_abs(&(at_zero - id)) < 1e-13);
            let u = C64::new(0.31, 0.11);
            let v = C64::new(-0.47, 0.29);
            let a10 = space.elementary(BraidLabel::OneZero, u);
            let b10 = space.elementary(BraidLabel::OneZero, v);
            let b01 = space.elementary(BraidLabel::ZeroOne, v);
            assert!(max_abs(&(&a10 * &b10 - &b10 * &a10)) < 1e-12);
            assert!(max_abs(&(&a10 * &b01 - &b01 * &a10)) < 1e-12);
        }
    }

    #[test]
    fn conjugation_is_an_involution() {
        let space = PathSpace::cyclic(&root_params(2, 5), 3);
        let c = space.conjugation();
        let id = DMatrix::identity(space.dim(), space.dim());
        assert!(max_abs(&(&c * &c - id)) < 1e-14);
    }

    #[test]
    fn hierarchy_truncates_and_satisfies_bilinear_identity() {
        let params = root_params(2, 5);
        let space = PathSpace::cyclic(&params, 3);
        let u = C64::new(0.31, 0.11);
        let h = space.hierarchy(u);
        for m in 0..=3 {
            assert!(max_abs(&h.t(0, m, 3 - m)) < 1e-10, "(m,n)=({m},{})", 3 - m);
        }
        // T_0^(2,0) T_1^(2,0) = f_2 T_0^(0,2) + T_0^(3,0) T_1^(1,0).
        let lhs = h.t(0, 2, 0) * h.t(1, 2, 0);
        let rhs = h.t(0, 0, 2) * h.f(2) + h.t(0, 3, 0) * h.t(1, 1, 0);
        assert!(max_abs(&(lhs - rhs)) < 1e-10);
    }

    #[test]
    fn closure_constants_verify() {
        for (p, pp) in [(2, 5), (1, 5)] {
            let params = root_params(p, pp);
            let space = PathSpace::cyclic(&params, 3);
            let (consts, checks) =
                verify_closure(&space, C64::new(0.31, 0.11), C64::new(-0.47, 0.29));
            for c in &checks {
                assert!(c.residual < 1e-9, "{} at ({p},{pp}): {}", c.label, c.residual);
            }
            let id = DMatrix::identity(space.dim(), space.dim());
            assert!(max_abs(&(&consts.b * &consts.b * &consts.b - id)) < 1e-9);
        }
    }

    #[test]
    fn special_gauge_decomposition() {
        // In the gauge t = e^(-iu), the first elementary face splits into
        // the plain and local-generator cells with trigonometric weights.
        let lambda = 0.83;
        let u = C64::new(0.41, -0.23);
        let mut params = Params::new(lambda, C64::new(1.0, 0.0));
        params.gauge = (-C64::i() * u).exp();
        let face = crate::faceops::face(&params, BraidLabel::OneZero, u);
        let (plain, hecke) = hecke_form_cells(lambda);
        let s1m = (C64::new(lambda, 0.0) - u).sin() / lambda.sin();
        let s0 = u.sin() / lambda.sin();
        let combo = lin(&[(s1m, &plain), (s0, &hecke)]);
        assert!(cell_diff(&face, &combo) < 1e-13);
    }
}
