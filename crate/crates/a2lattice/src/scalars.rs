//! Trigonometric scalar functions, q-numbers and spectral phase formulas.
//!
//! Everything downstream (face weights, fusion coefficients, braid spectra,
//! closure phases) is expressed through the small set of functions defined
//! here: the crossing-shifted sine ratios `s_k`, the q-numbers `[k]`, the
//! symmetric polynomial `cheb` governing fused braid spectra, and the phase
//! bookkeeping for sectors of the cylinder.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Shorthand for double-precision complex numbers used throughout.
pub type C64 = Complex64;

/// Model parameters shared by every construction in the crate.
///
/// `lambda` is the crossing parameter, `omega` the twist fugacity attached to
/// defects winding around the cylinder, `alpha` the fugacity of
/// non-contractible loops and `gauge` the free gauge parameter carried by the
/// two single-arc tiles.  `root` optionally records a root-of-unity
/// parameterisation `(p, p')` with `lambda = pi (p' - p) / p'`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub lambda: f64,
    pub omega: C64,
    pub alpha: C64,
    pub gauge: C64,
    pub root: Option<(u32, u32)>,
}

impl Params {
    /// Generic-parameter constructor: `alpha` defaults to
    /// `omega + 1/omega` and the gauge to 1.
    pub fn new(lambda: f64, omega: C64) -> Self {
        Params {
            lambda,
            omega,
            alpha: omega + omega.inv(),
            gauge: C64::new(1.0, 0.0),
            root: None,
        }
    }

    /// Root-of-unity constructor with `lambda = pi (p' - p) / p'`.
    ///
    /// # Panics
    /// Panics unless `1 <= p < p'` and `gcd(p, p') == 1`.
    pub fn from_root(p: u32, pp: u32, omega: C64) -> Self {
        assert!(1 <= p && p < pp, "require 1 <= p < p'");
        assert_eq!(gcd(p, pp), 1, "require gcd(p, p') = 1");
        let mut params = Self::new(std::f64::consts::PI * f64::from(pp - p) / f64::from(pp), omega);
        params.root = Some((p, pp));
        params
    }

    /// Deformation parameter `q = exp(i lambda)`.
    pub fn q(&self) -> C64 {
        (C64::i() * self.lambda).exp()
    }

    /// Contractible-loop fugacity `beta = 2 cos(lambda) = [2]`.
    pub fn beta(&self) -> f64 {
        2.0 * self.lambda.cos()
    }

    /// Braid phase unit `phi = (pi - lambda) / 3`.
    pub fn phi(&self) -> f64 {
        (std::f64::consts::PI - self.lambda) / 3.0
    }

    /// Crossing-shifted sine ratio `s_k(u) = sin(k lambda + u) / sin(lambda)`.
    pub fn s(&self, k: i64, u: C64) -> C64 {
        (u + k as f64 * self.lambda).sin() / self.lambda.sin()
    }

    /// Scalar multiplier `f_k(u) = (s_k(u))^N` for a homogeneous system of
    /// `n_cols` columns, or the product over shifted columns when
    /// inhomogeneities are supplied.
    pub fn f(&self, k: i64, u: C64, n_cols: usize, inhomogeneities: Option<&[f64]>) -> C64 {
        match inhomogeneities {
            None => self.s(k, u).powu(n_cols as u32),
            Some(xi) => {
                assert_eq!(xi.len(), n_cols);
                xi.iter().map(|&x| self.s(k, u + x)).product()
            }
        }
    }

    /// q-number `[k] = (q^k - q^-k) / (q - q^-1) = sin(k lambda)/sin(lambda)`.
    pub fn qnum(&self, k: i64) -> f64 {
        (k as f64 * self.lambda).sin() / self.lambda.sin()
    }

    /// q-factorial `[k]!`.
    pub fn qfact(&self, k: i64) -> f64 {
        (1..=k).map(|j| self.qnum(j)).product()
    }

    /// q-binomial `[m; k] = [m]! / ([m-k]! [k]!)`.
    pub fn qbinom(&self, m: i64, k: i64) -> f64 {
        self.qfact(m) / (self.qfact(m - k) * self.qfact(k))
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// A symmetry sector of the cylinder with `n_cols` nodes per row, `defects`
/// through-lines and `vacancies` unoccupied nodes; `arcs` pairs of nodes are
/// connected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Sector {
    pub n_cols: usize,
    pub defects: usize,
    pub vacancies: usize,
}

impl Sector {
    /// Constructs a sector, checking that `n_cols - defects - vacancies` is a
    /// non-negative even number (twice the arc count).
    pub fn new(n_cols: usize, defects: usize, vacancies: usize) -> Self {
        let rest = n_cols
            .checked_sub(defects + vacancies)
            .expect("defects + vacancies exceed the number of nodes");
        assert!(rest % 2 == 0, "n_cols - defects - vacancies must be even");
        Sector {
            n_cols,
            defects,
            vacancies,
        }
    }

    /// Number of arcs in the sector.
    pub fn arcs(&self) -> usize {
        (self.n_cols - self.defects - self.vacancies) / 2
    }

    /// All sectors of a cylinder with `n_cols` nodes.
    pub fn all(n_cols: usize) -> Vec<Sector> {
        let mut out = Vec::new();
        for vacancies in 0..=n_cols {
            for defects in 0..=(n_cols - vacancies) {
                if (n_cols - vacancies - defects) % 2 == 0 {
                    out.push(Sector::new(n_cols, defects, vacancies));
                }
            }
        }
        out
    }

    /// The three braid phase angles `(theta_1, theta_2, theta_3)`; they sum
    /// to zero.  In every sector the braid transfer matrices are scalar, with
    /// eigenvalue a three-term sum of these phases weighted by the twist.
    pub fn braid_thetas(&self, params: &Params) -> (f64, f64, f64) {
        let phi = params.phi();
        let (d, v, a) = (
            self.defects as f64,
            self.vacancies as f64,
            self.arcs() as f64,
        );
        (
            phi * (-a - 2.0 * d + v),
            phi * (2.0 * a + d - 2.0 * v),
            phi * (-a + d + v),
        )
    }

    /// Scalar eigenvalue of the elementary braid transfer matrix.
    ///
    /// `label` selects the (1,0) or (0,1) operator and `sign` the limit
    /// `Im u -> +inf` (+1) or `-inf` (-1).
    pub fn braid_eigenvalue(&self, params: &Params, label: BraidLabel, sign: i32) -> C64 {
        let (t1, t2, t3) = self.braid_thetas(params);
        let om = params.omega;
        let s = f64::from(sign);
        let ph = |x: f64| (C64::i() * (s * x)).exp();
        match label {
            BraidLabel::OneZero => om * ph(t1) + ph(t2) + om.inv() * ph(t3),
            BraidLabel::ZeroOne => om * ph(-t3) + ph(-t2) + om.inv() * ph(-t1),
        }
    }

    /// The three spectral-parameter-free eigenvalue generators
    /// `(y1, y2, y3)` with `y1 y2 y3 = 1`, from which every fused braid
    /// eigenvalue follows via [`cheb`].
    pub fn braid_ys(&self, params: &Params, sign: i32) -> [C64; 3] {
        let (t1, t2, t3) = self.braid_thetas(params);
        let om = params.omega;
        let s = f64::from(sign);
        let ph = |x: f64| (C64::i() * (s * x)).exp();
        [om * ph(t1), ph(t2), om.inv() * ph(t3)]
    }
}

/// Selects one of the two elementary operators (fundamental labels).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BraidLabel {
    /// The `(1,0)` operator.
    OneZero,
    /// The `(0,1)` operator.
    ZeroOne,
}

/// Generalised Chebyshev function of the fused braid spectra: the degree-`m`
/// complete homogeneous symmetric polynomial in `(y1, y2, y3)` with
/// `y3 = 1/(y1 y2)`.
///
/// When the arguments are pairwise separated by more than `1e-8` this equals
/// the determinant-ratio (divided-difference) form
/// `[y1^{m+2}(y2-y3) + y2^{m+2}(y3-y1) + y3^{m+2}(y1-y2)]
///  / [(y1-y2)(y1-y3)(y2-y3)]`,
/// which is evaluated directly; near coincidences the stable summation path
/// is used (the polynomial sum *is* the divided difference).  `m = -1` gives
/// 0 and `m = 0` gives 1; `m <= -2` is rejected.
pub fn cheb(m: i64, y1: C64, y2: C64) -> C64 {
    assert!(m >= -1, "cheb defined for m >= -1");
    if m == -1 {
        return C64::new(0.0, 0.0);
    }
    let y3 = (y1 * y2).inv();
    let sep = (y1 - y2).norm().min((y1 - y3).norm()).min((y2 - y3).norm());
    if sep > 1e-8 {
        let num = y1.powi(m as i32 + 2) * (y2 - y3)
            + y2.powi(m as i32 + 2) * (y3 - y1)
            + y3.powi(m as i32 + 2) * (y1 - y2);
        num / ((y1 - y2) * (y1 - y3) * (y2 - y3))
    } else {
        homogeneous_sum(m as u32, y1, y2, y3)
    }
}

fn homogeneous_sum(m: u32, y1: C64, y2: C64, y3: C64) -> C64 {
    let mut total = C64::new(0.0, 0.0);
    for i in 0..=m {
        for j in 0..=(m - i) {
            total += y1.powu(i) * y2.powu(j) * y3.powu(m - i - j);
        }
    }
    total
}
