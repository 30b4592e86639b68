//! The fused operator family generated by its defining recursion.
//!
//! Writing `T_k^(m,n)` for the fused transfer matrix of type `(m, n)` at
//! argument `u + k lambda`, the whole family follows from the elementary
//! matrices through the three-term recursion
//!
//! ```text
//! f_k T_k^(m,n) = T_k^(1,0) T_(k+1)^(m-1,n) - T_k^(0,1) T_(k+2)^(m-2,n)
//!                 + sigma f_(k-1) T_(k+3)^(m-3,n),
//! ```
//!
//! with `T_k^(0,0) = f_(k-1) I`, `T^(m,-1) = T^(-1,n) = 0`, and the
//! resolution rules that express negative labels through non-negative ones.
//! At a root of unity the argument shift `k -> k + p'` is a shift by a
//! multiple of `pi`, so `T_(k+p') = sigma^(p'-p) T_k`; this is used to
//! canonicalise cache keys.
//!
//! # Example
//!
//! For the type `(2, 0)` the recursion collapses to a bilinear identity in
//! the elementary matrices:
//!
//! ```
//! use a2lattice::hierarchy::Hierarchy;
//! use a2lattice::scalars::{C64, Params, Sector};
//!
//! let params = Params::new(0.83, C64::new(1.0, 0.0));
//! let h = Hierarchy::new(&params, Sector::new(2, 2, 0), C64::new(0.4, -0.3));
//! let lhs = h.t(0, 2, 0) * h.f(0);
//! let rhs = h.t(0, 1, 0) * h.t(1, 1, 0) - h.t(0, 0, 1) * h.f(1);
//! assert!((lhs - rhs).norm() < 1e-10);
//! ```

use std::cell::RefCell;
use std::collections::HashMap;

use nalgebra::DMatrix;

use crate::scalars::{BraidLabel, Params, Sector, C64};
use crate::transfer::Transfer;

/// Source of the two elementary matrices the recursion is seeded with.
/// Implemented by the loop-model [`Transfer`] engine and by the height-model
/// path representation.
pub trait ElementarySource {
    fn dim(&self) -> usize;
    fn matrix(&self, label: BraidLabel, u: C64) -> DMatrix<C64>;
}

/// Memoised generator of the fused family in one representation at one base
/// argument.
pub struct Hierarchy {
    params: Params,
    source: Box<dyn ElementarySource>,
    u: C64,
    /// Number of lattice columns: the exponent in `f_k` and the sign
    /// `sigma = (-1)^N`.
    n_cols: usize,
    sector: Option<Sector>,
    /// Optional column inhomogeneities added to the argument per column.
    xi: Option<Vec<f64>>,
    memo: RefCell<HashMap<(i64, i64, i64), DMatrix<C64>>>,
}

struct LoopSource {
    engine: Transfer,
    xi: Option<Vec<f64>>,
}

impl ElementarySource for LoopSource {
    fn dim(&self) -> usize {
        self.engine.dim()
    }

    fn matrix(&self, label: BraidLabel, u: C64) -> DMatrix<C64> {
        match &self.xi {
            None => self.engine.elementary(label, u),
            Some(xi) => self.engine.elementary_inhomogeneous(label, u, xi),
        }
    }
}

impl Hierarchy {
    pub fn new(params: &Params, sector: Sector, u: C64) -> Hierarchy {
        let engine = Transfer::new(params, sector);
        Hierarchy {
            params: params.clone(),
            source: Box::new(LoopSource { engine, xi: None }),
            u,
            n_cols: sector.n_cols,
            sector: Some(sector),
            xi: None,
            memo: RefCell::new(HashMap::new()),
        }
    }

    /// Like [`Hierarchy::new`] with column inhomogeneities `xi`.
    pub fn with_inhomogeneities(
        params: &Params,
        sector: Sector,
        u: C64,
        xi: Vec<f64>,
    ) -> Hierarchy {
        assert_eq!(xi.len(), sector.n_cols);
        let engine = Transfer::new(params, sector);
        Hierarchy {
            params: params.clone(),
            source: Box::new(LoopSource {
                engine,
                xi: Some(xi.clone()),
            }),
            u,
            n_cols: sector.n_cols,
            sector: Some(sector),
            xi: Some(xi),
            memo: RefCell::new(HashMap::new()),
        }
    }

    /// Builds the recursion on top of any elementary source acting on a
    /// lattice with `n_cols` faces per row.
    pub fn from_source(
        params: &Params,
        source: Box<dyn ElementarySource>,
        n_cols: usize,
        u: C64,
    ) -> Hierarchy {
        Hierarchy {
            params: params.clone(),
            source,
            u,
            n_cols,
            sector: None,
            xi: None,
            memo: RefCell::new(HashMap::new()),
        }
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    /// Loop-model sector, when the hierarchy is built on link states.
    pub fn sector(&self) -> Sector {
        self.sector
            .expect("hierarchy was not built on a link-state sector")
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn dim(&self) -> usize {
        self.source.dim()
    }

    pub fn base_argument(&self) -> C64 {
        self.u
    }

    /// Identity matrix on the representation space.
    pub fn identity(&self) -> DMatrix<C64> {
        DMatrix::identity(self.dim(), self.dim())
    }

    /// Sign `sigma = (-1)^N`.
    pub fn sigma(&self) -> f64 {
        if self.n_cols % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// Scalar `f_k`: the product of `s_k` over the columns at the shifted
    /// argument.
    pub fn f(&self, k: i64) -> C64 {
        self.params.f(k, self.u, self.n_cols, self.xi.as_deref())
    }

    /// Fused matrix `T_k^(m,n)`, from the memoised recursion.
    pub fn t(&self, k: i64, m: i64, n: i64) -> DMatrix<C64> {
        // Zero labels.
        if m == -1 || n == -1 {
            return DMatrix::from_element(self.dim(), self.dim(), C64::new(0.0, 0.0));
        }
        // Resolution of labels below -1.
        if m <= -2 {
            return -self.t(k + m + 1, -m - 2, n + m + 1);
        }
        if n <= -2 {
            let sign = self.sigma().powi((-n - 1) as i32);
            return self.t(k, m + n + 1, -n - 2) * C64::new(-sign, 0.0);
        }
        // Canonicalise the shift at a root of unity.
        if let Some((p, pp)) = self.params.root {
            let period = i64::from(pp);
            let shift = k.div_euclid(period);
            if shift != 0 {
                let nu = self.sigma().powi((pp - p) as i32).powi(shift as i32);
                return self.t(k - shift * period, m, n) * C64::new(nu, 0.0);
            }
        }
        let key = (k, m, n);
        if let Some(v) = self.memo.borrow().get(&key) {
            return v.clone();
        }
        let v = self.compute(k, m, n);
        self.memo.borrow_mut().insert(key, v.clone());
        v
    }

    fn elementary(&self, label: BraidLabel, k: i64) -> DMatrix<C64> {
        let u = self.u + k as f64 * self.params.lambda;
        self.source.matrix(label, u)
    }

    fn compute(&self, k: i64, m: i64, n: i64) -> DMatrix<C64> {
        match (m, n) {
            (0, 0) => self.identity() * self.f(k - 1),
            (1, 0) => self.elementary(BraidLabel::OneZero, k),
            (0, 1) => self.elementary(BraidLabel::ZeroOne, k),
            _ => {
                let a = self.t(k, 1, 0) * self.t(k + 1, m - 1, n);
                let b = self.t(k, 0, 1) * self.t(k + 2, m - 2, n);
                let c = self.t(k + 3, m - 3, n) * (self.sigma() * self.f(k - 1));
                (a - b + c) / self.f(k)
            }
        }
    }
}

/// Braid (large imaginary argument) limit of the fused family: the limit of
/// `(exp(±i (m + 2n) phi) / s_(m+n-1)(u))^N T^(m,n)(u)`, evaluated far up
/// the imaginary axis.  `sign = +1` selects `Im u -> +inf`.
pub fn braid_fused(
    params: &Params,
    sector: Sector,
    m: i64,
    n: i64,
    sign: i32,
) -> DMatrix<C64> {
    let u = C64::new(0.3, f64::from(sign) * 24.0);
    let h = Hierarchy::new(params, sector, u);
    let phase = (C64::i() * (f64::from(sign) * (m + 2 * n) as f64 * params.phi())).exp();
    let pref = (phase / params.s(m + n - 1, u)).powu(sector.n_cols as u32);
    h.t(0, m, n) * pref
}
