//! The certification harness: every functional identity satisfied by the
//! fused transfer-matrix family, expressed as a checkable predicate with
//! residual reporting.
//!
//! Checks are grouped into suites (local face identities, fusion recursions,
//! bilinear T-system identities, Y-system identities of the ratio operators,
//! the root-of-unity closure identities and their Y-system counterparts,
//! braid-limit scalars, vacancy conservation, direct-fusion cross-checks and
//! the height-model suite).  Each check evaluates both sides of an identity
//! at sampled spectral parameters and records the relative residual
//! `|LHS - RHS|_F / (|LHS|_F + |RHS|_F + 1)`.
//!
//! Checks whose content follows algebraically from the defining recursion
//! are flagged [`CheckKind::Implementation`]; checks that certify genuine
//! model content (the recursion against direct fusion, the closure
//! constants, the elementary recursions) are flagged
//! [`CheckKind::ModelContent`].
//!
//! # Example
//!
//! ```
//! use a2lattice::relations::{run, RunSpec, Suite};
//! use a2lattice::scalars::{C64, Params};
//!
//! let params = Params::new(0.83, C64::new(1.0, 0.0));
//! let mut spec = RunSpec::new(Suite::Braid, vec![params]);
//! spec.n_max = 2;
//! let report = run(&spec);
//! assert!(report.passed());
//! ```

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap, VecDeque};
use std::sync::Mutex;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::faceops;
use crate::fusion;
use crate::hierarchy::{braid_fused, Hierarchy};
use crate::linkstate;
use crate::rsos;
use crate::scalars::{cheb, BraidLabel, Params, Sector, C64};
use crate::transfer::Transfer;

/// Outcome of a single identity check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Pass,
    Fail,
}

/// Classifies what a passing check certifies: genuine model content, or the
/// internal consistency of the implementation (identities that follow
/// algebraically from the defining recursion).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CheckKind {
    ModelContent,
    Implementation,
}

/// One verified identity: its tag, the representation it was checked in, the
/// sampled points, and the worst relative residual observed.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub id: String,
    pub sector: String,
    pub params: String,
    /// Sampled base arguments `(Re u, Im u)`.
    pub points: Vec<(f64, f64)>,
    pub residual: f64,
    pub tolerance: f64,
    pub kind: CheckKind,
    pub verdict: Verdict,
}

/// Relative residual of a matrix identity.
pub fn rel_residual(lhs: &DMatrix<C64>, rhs: &DMatrix<C64>) -> f64 {
    (lhs - rhs).norm() / (lhs.norm() + rhs.norm() + 1.0)
}

/// Relative residual of a scalar identity.
pub fn scalar_residual(lhs: C64, rhs: C64) -> f64 {
    (lhs - rhs).norm() / (lhs.norm() + rhs.norm() + 1.0)
}

fn kind_of(id: &str) -> CheckKind {
    if id.starts_with("tsystem") || id.contains("ratio-definition") {
        CheckKind::Implementation
    } else {
        CheckKind::ModelContent
    }
}

/// Deterministic seed derivation: mixes the run seed with a textual tag so
/// independent tasks draw independent, reproducible streams.
pub fn derive_seed(seed: u64, tag: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325 ^ seed;
    for b in tag.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Accumulates per-identity worst residuals over sampled points.
struct Acc {
    map: BTreeMap<String, (f64, Vec<(f64, f64)>)>,
}

impl Acc {
    fn new() -> Acc {
        Acc {
            map: BTreeMap::new(),
        }
    }

    fn rec(&mut self, id: &str, u: C64, residual: f64) {
        let entry = self.map.entry(id.to_string()).or_default();
        entry.0 = entry.0.max(residual);
        entry.1.push((u.re, u.im));
    }

    fn into_checks(self, sector: &str, params: &str, tolerance: f64) -> Vec<IdentityCheck> {
        self.map
            .into_iter()
            .map(|(id, (residual, points))| IdentityCheck {
                verdict: if residual <= tolerance {
                    Verdict::Pass
                } else {
                    Verdict::Fail
                },
                kind: kind_of(&id),
                id,
                sector: sector.to_string(),
                params: params.to_string(),
                points,
                residual,
                tolerance,
            })
            .collect()
    }
}

/// Evaluation context for one representation: parameters, sector, sampling
/// policy and a deterministic random stream.
pub struct Ctx {
    pub params: Params,
    pub sector: Sector,
    pub samples: usize,
    pub tolerance: f64,
    rng: RefCell<ChaCha8Rng>,
}

impl Ctx {
    pub fn new(params: &Params, sector: Sector, samples: usize, tolerance: f64, seed: u64) -> Ctx {
        let tag = format!("{}|{}", params_desc(params), sector_desc(sector));
        Ctx {
            params: params.clone(),
            sector,
            samples,
            tolerance,
            rng: RefCell::new(ChaCha8Rng::seed_from_u64(derive_seed(seed, &tag))),
        }
    }

    fn draw(&self) -> C64 {
        let mut rng = self.rng.borrow_mut();
        let re = rng.gen_range(0.1..1.3);
        let im = rng.gen_range(0.12..0.45) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        C64::new(re, im)
    }

    /// Draws a base argument keeping the listed `f_k` away from zero;
    /// resamples up to 20 times.
    fn sample_u(&self, guards: &[i64]) -> C64 {
        for _ in 0..20 {
            let u = self.draw();
            let ok = guards.iter().all(|&k| {
                self.params
                    .f(k, u, self.sector.n_cols, None)
                    .norm()
                    > 1e-6
            });
            if ok {
                return u;
            }
        }
        self.draw()
    }

    fn hier(&self, u: C64) -> Hierarchy {
        Hierarchy::new(&self.params, self.sector, u)
    }

    fn sector_desc(&self) -> String {
        sector_desc(self.sector)
    }

    fn params_desc(&self) -> String {
        params_desc(&self.params)
    }
}

/// Human- and machine-readable description of a parameter point.
pub fn params_desc(params: &Params) -> String {
    let om = params.omega;
    match params.root {
        Some((p, pp)) => format!("root=({p},{pp}),omega=({:.4},{:.4})", om.re, om.im),
        None => format!("lambda={:.4},omega=({:.4},{:.4})", params.lambda, om.re, om.im),
    }
}

/// Description of a link-state sector.
pub fn sector_desc(sector: Sector) -> String {
    format!(
        "N={},d={},v={}",
        sector.n_cols, sector.defects, sector.vacancies
    )
}

// ---------------------------------------------------------------------------
// Eigen machinery
// ---------------------------------------------------------------------------

/// Eigenvalues of a general complex matrix (diagonal of its triangular Schur
/// factor).
pub fn eigenvalues(m: &DMatrix<C64>) -> Vec<C64> {
    if m.nrows() == 1 {
        return vec![m[(0, 0)]];
    }
    let (_, t) = m.clone().schur().unpack();
    t.diagonal().iter().copied().collect()
}

/// Eigenpairs via Schur eigenvalues refined by inverse iteration.  The
/// returned vectors are unit-norm with a deterministic phase convention
/// (largest-modulus entry real positive).
pub fn eigenpairs(m: &DMatrix<C64>) -> Vec<(C64, DVector<C64>)> {
    let n = m.nrows();
    let scale = m.norm().max(1.0);
    let mut out = Vec::with_capacity(n);
    for lambda in eigenvalues(m) {
        let mut shift_eps = 1e-10 * scale;
        let mut v = DVector::from_element(n, C64::new(1.0, 0.0));
        v /= C64::new(v.norm(), 0.0);
        'outer: for _ in 0..6 {
            let shift = lambda + C64::new(shift_eps, shift_eps);
            let a = m - DMatrix::identity(n, n) * shift;
            let lu = a.lu();
            let mut w = v.clone();
            for _ in 0..4 {
                match lu.solve(&w) {
                    Some(next) => {
                        let norm = next.norm();
                        if !norm.is_finite() || norm == 0.0 {
                            shift_eps *= 10.0;
                            continue 'outer;
                        }
                        w = next / C64::new(norm, 0.0);
                    }
                    None => {
                        shift_eps *= 10.0;
                        continue 'outer;
                    }
                }
            }
            v = w;
            break;
        }
        // Deterministic phase.
        let mut best = 0;
        for i in 0..n {
            if v[i].norm() > v[best].norm() {
                best = i;
            }
        }
        let phase = v[best] / C64::new(v[best].norm().max(1e-300), 0.0);
        v /= phase;
        out.push((lambda, v));
    }
    out
}

/// Common eigenbasis of a family of commuting matrices, from a random
/// complex linear combination.  Returns `None` when some returned vector
/// fails to be a common eigenvector to relative accuracy `1e-8` (degenerate
/// clustering): callers then resample or fall back to matrix-level checks.
pub fn common_eigenbasis(
    mats: &[&DMatrix<C64>],
    rng: &mut impl Rng,
) -> Option<Vec<DVector<C64>>> {
    let n = mats[0].nrows();
    let mut combo = DMatrix::from_element(n, n, C64::new(0.0, 0.0));
    for m in mats {
        let phase = C64::new(0.0, rng.gen_range(0.0..std::f64::consts::TAU)).exp();
        combo += *m * phase;
    }
    let mut basis = Vec::with_capacity(n);
    for (_, v) in eigenpairs(&combo) {
        for m in mats {
            let w = *m * &v;
            let mu = v.dotc(&w);
            let resid = (&w - &v * mu).norm() / (w.norm() + 1.0);
            if resid > 1e-8 {
                return None;
            }
        }
        basis.push(v);
    }
    Some(basis)
}

/// Eigenvalue of `m` on the unit eigenvector `v`.
pub fn eig_scalar(m: &DMatrix<C64>, v: &DVector<C64>) -> C64 {
    v.dotc(&(m * v))
}

/// Scalar view of one hierarchy on a common eigenbasis, with memoised
/// per-label eigenvalue columns.
struct EigView<'a> {
    h: &'a Hierarchy,
    basis: Vec<DVector<C64>>,
    cache: RefCell<HashMap<(i64, i64, i64), Vec<C64>>>,
}

impl<'a> EigView<'a> {
    fn new(h: &'a Hierarchy, basis: Vec<DVector<C64>>) -> EigView<'a> {
        EigView {
            h,
            basis,
            cache: RefCell::new(HashMap::new()),
        }
    }

    fn len(&self) -> usize {
        self.basis.len()
    }

    /// Eigenvalues of `T_k^(m,n)` across the basis.
    fn tv(&self, k: i64, m: i64, n: i64) -> Vec<C64> {
        if let Some(v) = self.cache.borrow().get(&(k, m, n)) {
            return v.clone();
        }
        let mat = self.h.t(k, m, n);
        let vals: Vec<C64> = self.basis.iter().map(|v| eig_scalar(&mat, v)).collect();
        self.cache.borrow_mut().insert((k, m, n), vals.clone());
        vals
    }

    /// Eigenvalues of an externally supplied matrix across the basis.
    fn sv(&self, m: &DMatrix<C64>) -> Vec<C64> {
        self.basis.iter().map(|v| eig_scalar(m, v)).collect()
    }

    /// First-family ratio operator eigenvalue `t_k^m` at basis index `i`.
    fn t_ratio(&self, k: i64, m: i64, i: usize) -> C64 {
        let num = self.tv(k, m + 1, 0)[i] * self.tv(k + 1, m - 1, 0)[i];
        let den = self.h.f(m + k) * self.tv(k, 0, m)[i];
        num / den
    }

    /// Second-family ratio operator eigenvalue `t~_k^n` at basis index `i`.
    fn tt_ratio(&self, k: i64, n: i64, i: usize) -> C64 {
        let sig = self.h.sigma().powi(n as i32);
        let num = self.tv(k, 0, n + 1)[i] * self.tv(k + 1, 0, n - 1)[i];
        let den = self.h.f(k - 1) * self.tv(k + 1, n, 0)[i];
        num / den * C64::new(sig, 0.0)
    }
}

// ---------------------------------------------------------------------------
// Local face-identity suite
// ---------------------------------------------------------------------------

/// Local identities of the elementary faces: the two pure and one mixed
/// exchange (Yang-Baxter) relations, the two inversion identities, and the
/// spectral invariance of the transfer matrix under the single-arc gauge.
pub fn verify_local(
    params: &Params,
    samples: usize,
    tolerance: f64,
    seed: u64,
) -> Vec<IdentityCheck> {
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, &format!(
        "local|{}",
        params_desc(params)
    )));
    let mut acc = Acc::new();
    let beta = params.beta();
    let f10 = |u: C64| faceops::face(params, BraidLabel::OneZero, u);
    let f01 = |u: C64| faceops::face(params, BraidLabel::ZeroOne, u);
    for _ in 0..samples {
        let u = C64::new(rng.gen_range(0.1..1.2), rng.gen_range(-0.4..0.4));
        let v = C64::new(rng.gen_range(0.1..1.2), rng.gen_range(-0.4..0.4));
        acc.rec(
            "local-exchange-first",
            u,
            faceops::exchange_residual(&f10(v), &f10(u), &f10(u + v), beta),
        );
        acc.rec(
            "local-exchange-mixed",
            u,
            faceops::exchange_residual(&f10(v), &f01(u), &f01(u + v), beta),
        );
        // The all-second-family arrangement does not close in this cell
        // orientation (a frozen negative control in the face-operator
        // module), so only the uniform and mixed versions are checked here.
        for kind in [faceops::InversionKind::Crossing, faceops::InversionKind::Shifted] {
            let (scalar, expected, resid) = faceops::inversion(params, kind, u);
            let id = match kind {
                faceops::InversionKind::Crossing => "local-inversion-crossing",
                faceops::InversionKind::Shifted => "local-inversion-shifted",
            };
            acc.rec(id, u, resid.max(scalar_residual(scalar, expected)));
        }
    }
    // Spectral invariance under the single-arc gauge parameter.
    for sector in [Sector::new(2, 0, 0), Sector::new(3, 1, 0)] {
        let u = C64::new(rng.gen_range(0.1..1.2), rng.gen_range(0.1..0.4));
        let gauges = [
            C64::new(1.0, 0.0),
            C64::new(2.0, 0.0),
            (-C64::i() * u).exp(),
        ];
        let mut spectra = Vec::new();
        for g in gauges {
            let mut pg = params.clone();
            pg.gauge = g;
            let engine = Transfer::new(&pg, sector);
            let mut eig = eigenvalues(&engine.elementary(BraidLabel::OneZero, u));
            eig.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
            spectra.push(eig);
        }
        let scale: f64 = spectra[0].iter().map(|z| z.norm()).fold(0.0, f64::max) + 1.0;
        let mut worst: f64 = 0.0;
        for s in &spectra[1..] {
            for (a, b) in spectra[0].iter().zip(s) {
                worst = worst.max((a - b).norm() / scale);
            }
        }
        acc.rec("local-gauge-spectrum", u, worst);
    }
    acc.into_checks("faces", &params_desc(params), tolerance)
}

// ---------------------------------------------------------------------------
// Fusion-hierarchy suite
// ---------------------------------------------------------------------------

/// Commutation of the elementary family, antiperiodicity in `pi`, and the
/// defining fusion recursions up to total level `max_level`.
pub fn verify_fusion_hierarchy(ctx: &Ctx, max_level: i64) -> Vec<IdentityCheck> {
    let mut acc = Acc::new();
    let guards: Vec<i64> = (-3..=max_level + 1).collect();
    for _ in 0..ctx.samples {
        let u = ctx.sample_u(&guards);
        let v = ctx.sample_u(&guards);
        let h = ctx.hier(u);
        let hv = ctx.hier(v);
        let sig = C64::new(h.sigma(), 0.0);
        // Commuting family.
        let (a10, a01) = (h.t(0, 1, 0), h.t(0, 0, 1));
        let (b10, b01) = (hv.t(0, 1, 0), hv.t(0, 0, 1));
        acc.rec(
            "family-commutation-first",
            u,
            rel_residual(&(&a10 * &b10), &(&b10 * &a10)),
        );
        acc.rec(
            "family-commutation-mixed",
            u,
            rel_residual(&(&a10 * &b01), &(&b01 * &a10)),
        );
        acc.rec(
            "family-commutation-second",
            u,
            rel_residual(&(&a01 * &b01), &(&b01 * &a01)),
        );
        // Antiperiodicity in pi.
        let hpi = ctx.hier(u + std::f64::consts::PI);
        let sign = C64::new(if ctx.sector.n_cols % 2 == 0 { 1.0 } else { -1.0 }, 0.0);
        acc.rec(
            "family-antiperiodicity-first",
            u,
            rel_residual(&hpi.t(0, 1, 0), &(&a10 * sign)),
        );
        acc.rec(
            "family-antiperiodicity-second",
            u,
            rel_residual(&hpi.t(0, 0, 1), &(&a01 * sign)),
        );
        // Elementary recursions.
        for m in 1..=max_level {
            let lhs = h.t(0, m, 0) * h.t(m, 1, 0);
            let rhs = h.t(0, m - 1, 1) * h.f(m) + h.t(0, m + 1, 0) * h.f(m - 1);
            acc.rec("fusion-recursion-first", u, rel_residual(&lhs, &rhs));
        }
        for n in 1..=max_level {
            let lhs = h.t(0, 0, 1) * h.t(1, 0, n);
            let rhs = h.t(1, 1, n - 1) * (sig * h.f(-1)) + h.t(0, 0, n + 1) * h.f(0);
            acc.rec("fusion-recursion-second", u, rel_residual(&lhs, &rhs));
        }
        for m in 1..=max_level {
            for n in 1..=(max_level - m) {
                let lhs = h.t(0, m, 0) * h.t(m, 0, n);
                let rhs = h.t(0, m, n) * h.f(m - 1)
                    + h.t(0, m - 1, 0) * h.t(m + 1, 0, n - 1) * sig;
                acc.rec("fusion-recursion-mixed", u, rel_residual(&lhs, &rhs));
            }
        }
        for m in 0..=max_level {
            for n in 0..=(max_level - m) {
                if m + n < 2 {
                    continue;
                }
                let lhs = h.t(0, m, n) * h.f(m + n - 2);
                let rhs = h.t(0, m, n - 1) * h.t(m + n - 1, 0, 1)
                    - h.t(0, m, n - 2) * h.t(m + n - 1, 1, 0) * sig
                    + h.t(0, m, n - 3) * h.f(m + n - 1);
                acc.rec("fusion-three-term", u, rel_residual(&lhs, &rhs));
            }
        }
    }
    acc.into_checks(&ctx.sector_desc(), &ctx.params_desc(), ctx.tolerance)
}

// ---------------------------------------------------------------------------
// T-system suite
// ---------------------------------------------------------------------------

/// Bilinear T-system identities, including the shifted generalisation over a
/// grid of labels (which holds trivially at the negative base labels).
pub fn verify_tsystem(ctx: &Ctx, max_level: i64) -> Vec<IdentityCheck> {
    let mut acc = Acc::new();
    let guards: Vec<i64> = (-4..=max_level + 4).collect();
    for _ in 0..ctx.samples {
        let u = ctx.sample_u(&guards);
        let h = ctx.hier(u);
        let sigma = h.sigma();
        for m in 1..=max_level {
            let lhs = h.t(0, m, 0) * h.t(1, m, 0);
            let rhs = h.t(0, 0, m) * h.f(m) + h.t(0, m + 1, 0) * h.t(1, m - 1, 0);
            acc.rec("tsystem-first", u, rel_residual(&lhs, &rhs));
        }
        for n in 1..=max_level {
            let lhs = h.t(0, 0, n) * h.t(1, 0, n);
            let rhs = h.t(1, n, 0) * (C64::new(sigma.powi(n as i32), 0.0) * h.f(-1))
                + h.t(0, 0, n + 1) * h.t(1, 0, n - 1);
            acc.rec("tsystem-second", u, rel_residual(&lhs, &rhs));
        }
        for m in -4..=4i64 {
            for k in -4..=4i64 {
                let lhs = h.t(0, m, 0) * h.t(k + 1, m - k, 0);
                let rhs = h.t(0, k, m - k) * h.f(m)
                    + h.t(0, m + 1, 0) * h.t(k + 1, m - 1 - k, 0);
                acc.rec("tsystem-shifted-first", u, rel_residual(&lhs, &rhs));
            }
        }
        for n in -4..=4i64 {
            for k in -4..=4i64 {
                let lhs = h.t(0, 0, n) * h.t(1, 0, n + k);
                let rhs = h.t(1, n, k) * (C64::new(sigma.powi(n as i32), 0.0) * h.f(-1))
                    + h.t(0, 0, n + 1 + k) * h.t(1, 0, n - 1);
                acc.rec("tsystem-shifted-second", u, rel_residual(&lhs, &rhs));
            }
        }
    }
    acc.into_checks(&ctx.sector_desc(), &ctx.params_desc(), ctx.tolerance)
}

// ---------------------------------------------------------------------------
// Y-system suite
// ---------------------------------------------------------------------------

/// The Y-system identities of the ratio operators, checked per common
/// eigenvalue in cleared-denominator form; on degenerate clustering the same
/// cleared forms are checked as matrix identities.
pub fn verify_ysystem(ctx: &Ctx, max_level: i64) -> Vec<IdentityCheck> {
    let mut acc = Acc::new();
    let guards: Vec<i64> = (-2..=max_level + 2).collect();
    for _ in 0..ctx.samples {
        let u = ctx.sample_u(&guards);
        let h = ctx.hier(u);
        let t10 = h.t(0, 1, 0);
        let t01 = h.t(1, 0, 1);
        let mut basis = None;
        for _ in 0..4 {
            basis = common_eigenbasis(&[&t10, &t01], &mut *ctx.rng.borrow_mut());
            if basis.is_some() {
                break;
            }
        }
        match basis {
            Some(vs) => {
                let view = EigView::new(&h, vs);
                ysystem_eigen(&view, &h, max_level, u, &mut acc);
            }
            None => ysystem_matrix(&h, max_level, u, &mut acc),
        }
    }
    acc.into_checks(&ctx.sector_desc(), &ctx.params_desc(), ctx.tolerance)
}

/// Per-eigenvalue Y-system checks in fully cleared (inverse-free) scalar
/// form, plus the ratio-operator definition consistency.
fn ysystem_eigen(view: &EigView, h: &Hierarchy, max_level: i64, u: C64, acc: &mut Acc) {
    let sig = |e: i64| C64::new(h.sigma().powi(e as i32), 0.0);
    for i in 0..view.len() {
        for m in 1..=max_level {
            // Definition consistency: the bilinear identity re-expressed
            // through the ratio eigenvalue.
            let lhs = view.tv(0, m, 0)[i] * view.tv(1, m, 0)[i];
            let rhs = h.f(m) * view.tv(0, 0, m)[i] * (C64::new(1.0, 0.0) + view.t_ratio(0, m, i));
            acc.rec("ysystem-ratio-definition-first", u, scalar_residual(lhs, rhs));
            let lhs = view.tv(0, 0, m)[i] * view.tv(1, 0, m)[i];
            let rhs = sig(m)
                * h.f(-1)
                * view.tv(1, m, 0)[i]
                * (C64::new(1.0, 0.0) + view.tt_ratio(0, m, i));
            acc.rec("ysystem-ratio-definition-second", u, scalar_residual(lhs, rhs));
        }
        for m in 1..max_level {
            // First-family Y-relation, cleared of all inverses:
            // N0 N1 (Nt + Dt) D0' D1'' = (D0' + N0')(D1'' + N1'') D0 D1 Nt.
            let n0 = view.tv(0, m + 1, 0)[i] * view.tv(1, m - 1, 0)[i];
            let d0 = h.f(m) * view.tv(0, 0, m)[i];
            let n1 = view.tv(1, m + 1, 0)[i] * view.tv(2, m - 1, 0)[i];
            let d1 = h.f(m + 1) * view.tv(1, 0, m)[i];
            let n0p = view.tv(0, m + 2, 0)[i] * view.tv(1, m, 0)[i];
            let d0p = h.f(m + 1) * view.tv(0, 0, m + 1)[i];
            let n1pp = view.tv(1, m, 0)[i] * view.tv(2, m - 2, 0)[i];
            let d1pp = h.f(m) * view.tv(1, 0, m - 1)[i];
            let nt = sig(m) * view.tv(0, 0, m + 1)[i] * view.tv(1, 0, m - 1)[i];
            let dt = h.f(-1) * view.tv(1, m, 0)[i];
            let lhs = n0 * n1 * (nt + dt) * d0p * d1pp;
            let rhs = (d0p + n0p) * (d1pp + n1pp) * d0 * d1 * nt;
            acc.rec("ysystem-first", u, scalar_residual(lhs, rhs));
            // Second-family Y-relation, cleared likewise.
            let n = m;
            let nt0 = sig(n) * view.tv(0, 0, n + 1)[i] * view.tv(1, 0, n - 1)[i];
            let dt0 = h.f(-1) * view.tv(1, n, 0)[i];
            let nt1 = sig(n) * view.tv(1, 0, n + 1)[i] * view.tv(2, 0, n - 1)[i];
            let dt1 = h.f(0) * view.tv(2, n, 0)[i];
            let n1y = view.tv(1, n + 1, 0)[i] * view.tv(2, n - 1, 0)[i];
            let d1y = h.f(n + 1) * view.tv(1, 0, n)[i];
            let nt0p = sig(n + 1) * view.tv(0, 0, n + 2)[i] * view.tv(1, 0, n)[i];
            let dt0p = h.f(-1) * view.tv(1, n + 1, 0)[i];
            let nt1pp = sig(n - 1) * view.tv(1, 0, n)[i] * view.tv(2, 0, n - 2)[i];
            let dt1pp = h.f(0) * view.tv(2, n - 1, 0)[i];
            let lhs = nt0 * nt1 * (n1y + d1y) * dt0p * dt1pp;
            let rhs = (dt0p + nt0p) * (dt1pp + nt1pp) * dt0 * dt1 * n1y;
            acc.rec("ysystem-second", u, scalar_residual(lhs, rhs));
        }
    }
}

/// Matrix-level fallback: the identical cleared forms evaluated as products
/// of commuting matrices.
fn ysystem_matrix(h: &Hierarchy, max_level: i64, u: C64, acc: &mut Acc) {
    let sig = |e: i64| C64::new(h.sigma().powi(e as i32), 0.0);
    for m in 1..=max_level {
        let lhs = h.t(0, m, 0) * h.t(1, m, 0);
        let rhs = h.t(0, 0, m) * h.f(m) + h.t(0, m + 1, 0) * h.t(1, m - 1, 0);
        acc.rec("ysystem-ratio-definition-first", u, rel_residual(&lhs, &rhs));
        let lhs = h.t(0, 0, m) * h.t(1, 0, m);
        let rhs = h.t(1, m, 0) * (sig(m) * h.f(-1)) + h.t(0, 0, m + 1) * h.t(1, 0, m - 1);
        acc.rec("ysystem-ratio-definition-second", u, rel_residual(&lhs, &rhs));
    }
    for m in 1..max_level {
        let n0 = h.t(0, m + 1, 0) * h.t(1, m - 1, 0);
        let d0 = h.t(0, 0, m) * h.f(m);
        let n1 = h.t(1, m + 1, 0) * h.t(2, m - 1, 0);
        let d1 = h.t(1, 0, m) * h.f(m + 1);
        let n0p = h.t(0, m + 2, 0) * h.t(1, m, 0);
        let d0p = h.t(0, 0, m + 1) * h.f(m + 1);
        let n1pp = h.t(1, m, 0) * h.t(2, m - 2, 0);
        let d1pp = h.t(1, 0, m - 1) * h.f(m);
        let nt = h.t(0, 0, m + 1) * h.t(1, 0, m - 1) * sig(m);
        let dt = h.t(1, m, 0) * h.f(-1);
        let lhs = &n0 * &n1 * (&nt + &dt) * &d0p * &d1pp;
        let rhs = (&d0p + &n0p) * (&d1pp + &n1pp) * &d0 * &d1 * &nt;
        acc.rec("ysystem-first", u, rel_residual(&lhs, &rhs));
        let n = m;
        let nt0 = h.t(0, 0, n + 1) * h.t(1, 0, n - 1) * sig(n);
        let dt0 = h.t(1, n, 0) * h.f(-1);
        let nt1 = h.t(1, 0, n + 1) * h.t(2, 0, n - 1) * sig(n);
        let dt1 = h.t(2, n, 0) * h.f(0);
        let n1y = h.t(1, n + 1, 0) * h.t(2, n - 1, 0);
        let d1y = h.t(1, 0, n) * h.f(n + 1);
        let nt0p = h.t(0, 0, n + 2) * h.t(1, 0, n) * sig(n + 1);
        let dt0p = h.t(1, n + 1, 0) * h.f(-1);
        let nt1pp = h.t(1, 0, n) * h.t(2, 0, n - 2) * sig(n - 1);
        let dt1pp = h.t(2, n - 1, 0) * h.f(0);
        let lhs = &nt0 * &nt1 * (&n1y + &d1y) * &dt0p * &dt1pp;
        let rhs = (&dt0p + &nt0p) * (&dt1pp + &nt1pp) * &dt0 * &dt1 * &n1y;
        acc.rec("ysystem-second", u, rel_residual(&lhs, &rhs));
    }
}

// ---------------------------------------------------------------------------
// Closure suites (root of unity)
// ---------------------------------------------------------------------------

/// The two constant matrices that close the hierarchy at a root of unity.
pub struct ClosureData {
    pub j: DMatrix<C64>,
    pub k: DMatrix<C64>,
}

fn jk_at(h: &Hierarchy, pp: i64) -> (DMatrix<C64>, DMatrix<C64>) {
    let sig = C64::new(h.sigma(), 0.0);
    let f1 = h.f(-1);
    let j = (h.t(0, pp, 0) - h.t(1, pp - 2, 1) + h.t(2, pp - 3, 0) * sig) / f1;
    let k = (h.t(0, 0, pp) - h.t(0, 1, pp - 2) * sig + h.t(1, 0, pp - 3)) / f1;
    (j, k)
}

/// Extracts the closure constants at one guarded argument.
pub fn closure_data(ctx: &Ctx) -> ClosureData {
    let (_, pp) = ctx.params.root.expect("closure needs a root-of-unity coupling");
    let u = ctx.sample_u(&[-1]);
    let h = ctx.hier(u);
    let (j, k) = jk_at(&h, i64::from(pp));
    ClosureData { j, k }
}

/// Scalar values of the closure constants on a sector, in both the
/// phase-sum and braid-combination normalisations.
struct ClosureScalars {
    jw: C64,
    kw: C64,
    lambda_phases: [C64; 3],
    sigma_jw: C64,
    sigma_kw: C64,
}

fn closure_scalars(params: &Params, sector: Sector) -> ClosureScalars {
    let (p, pp) = params.root.expect("needs a root");
    let (p, pp) = (i64::from(p), i64::from(pp));
    let n = sector.n_cols as i64;
    let (d, v, a) = (
        sector.defects as i64,
        sector.vacancies as i64,
        sector.arcs() as i64,
    );
    let om = params.omega;
    let third = std::f64::consts::PI / 3.0;
    let ph = |e: i64| (C64::i() * (third * (p * e) as f64)).exp();
    let kappa = (C64::i() * (third * (n * (3 * pp - 2 * p)) as f64)).exp();
    let kappat = (C64::i() * (third * (n * (3 * pp - p)) as f64)).exp();
    let jw = (om.powi(pp as i32) * ph(-a - 2 * d + v)
        + ph(2 * a + d - 2 * v)
        + om.powi(-(pp as i32)) * ph(-a + d + v))
        / kappa;
    let kw = (om.powi(pp as i32) * ph(a - d - v)
        + ph(-2 * a - d + 2 * v)
        + om.powi(-(pp as i32)) * ph(a + 2 * d - v))
        / kappat;
    let par = |e: i64| C64::new(if e % 2 == 0 { 1.0 } else { -1.0 }, 0.0);
    let lambda_phases = [
        om.powi(pp as i32) * par(p * (n - v - a)),
        par(p * v),
        om.powi(-(pp as i32)) * par(p * a),
    ];
    let sigma: f64 = if n % 2 == 0 { 1.0 } else { -1.0 };
    let sig = |e: i64| C64::new(sigma.powi(e as i32), 0.0);
    let sigma_jw = sig(pp - p) * (lambda_phases[0] + lambda_phases[1] + lambda_phases[2]);
    let sigma_kw = sig(pp)
        * (lambda_phases[0].inv() + lambda_phases[1].inv() + lambda_phases[2].inv());
    ClosureScalars {
        jw,
        kw,
        lambda_phases,
        sigma_jw,
        sigma_kw,
    }
}

/// Root-of-unity closure: extracts the constant matrices at several
/// arguments, asserts their independence of the argument, re-verifies the
/// closure identities at fresh arguments, and compares the constants with
/// their braid combination and sector spectra.
pub fn verify_closure(ctx: &Ctx) -> (ClosureData, Vec<IdentityCheck>) {
    let (p, pp) = ctx.params.root.expect("closure needs a root-of-unity coupling");
    let (p, pp) = (i64::from(p), i64::from(pp));
    let mut acc = Acc::new();
    let mut extractions = Vec::new();
    for _ in 0..3.max(ctx.samples.min(5)) {
        let u = ctx.sample_u(&[-1]);
        let h = ctx.hier(u);
        extractions.push((u, jk_at(&h, pp)));
    }
    let (u0, (j, k)) = extractions[0].clone();
    for (u, (ji, ki)) in &extractions[1..] {
        acc.rec("closure-first-independence", *u, rel_residual(&j, ji));
        acc.rec("closure-second-independence", *u, rel_residual(&k, ki));
    }
    // Fresh-argument residuals of the closure identities themselves.
    for _ in 0..2 {
        let u = ctx.sample_u(&[-1]);
        let h = ctx.hier(u);
        let sig = C64::new(h.sigma(), 0.0);
        let lhs = h.t(0, pp, 0);
        let rhs = h.t(1, pp - 2, 1) - h.t(2, pp - 3, 0) * sig + &j * h.f(-1);
        acc.rec("closure-first", u, rel_residual(&lhs, &rhs));
        let lhs = h.t(0, 0, pp);
        let rhs = h.t(0, 1, pp - 2) * sig - h.t(1, 0, pp - 3) + &k * h.f(-1);
        acc.rec("closure-second", u, rel_residual(&lhs, &rhs));
    }
    // Braid combination.
    let third = std::f64::consts::PI / 3.0;
    let n = ctx.sector.n_cols as i64;
    let kappa = (C64::i() * (third * (n * (3 * pp - 2 * p)) as f64)).exp();
    let kappat = (C64::i() * (third * (n * (3 * pp - p)) as f64)).exp();
    let bsum_j = braid_fused(&ctx.params, ctx.sector, pp, 0, 1)
        + braid_fused(&ctx.params, ctx.sector, pp - 3, 0, 1)
        - braid_fused(&ctx.params, ctx.sector, pp - 2, 1, 1);
    acc.rec("closure-first-braid", u0, rel_residual(&(&j * kappa), &bsum_j));
    let bsum_k = braid_fused(&ctx.params, ctx.sector, 0, pp, 1)
        + braid_fused(&ctx.params, ctx.sector, 0, pp - 3, 1)
        - braid_fused(&ctx.params, ctx.sector, 1, pp - 2, 1);
    acc.rec("closure-second-braid", u0, rel_residual(&(&k * kappat), &bsum_k));
    // Sector spectra and phase decomposition.
    let sc = closure_scalars(&ctx.params, ctx.sector);
    let id = DMatrix::identity(j.nrows(), j.nrows());
    acc.rec("closure-first-spectrum", u0, rel_residual(&j, &(&id * sc.jw)));
    acc.rec("closure-second-spectrum", u0, rel_residual(&k, &(&id * sc.kw)));
    acc.rec("closure-phases-first", u0, rel_residual(&j, &(&id * sc.sigma_jw)));
    acc.rec("closure-phases-second", u0, rel_residual(&k, &(&id * sc.sigma_kw)));
    (
        ClosureData { j, k },
        acc.into_checks(&ctx.sector_desc(), &ctx.params_desc(), ctx.tolerance),
    )
}

/// The shifted and high-label closure identities, and the composite closure
/// of the doubly-saturated operator.
pub fn verify_extended_closure(ctx: &Ctx, data: &ClosureData) -> Vec<IdentityCheck> {
    let (_, pp) = ctx.params.root.expect("closure needs a root-of-unity coupling");
    let pp = i64::from(pp);
    let mut acc = Acc::new();
    for _ in 0..ctx.samples.min(3) {
        let u = ctx.sample_u(&[-1, 0, 1]);
        let h = ctx.hier(u);
        let sig = |e: i64| C64::new(h.sigma().powi(e as i32), 0.0);
        for kk in -1..=pp - 1 {
            let lhs = h.t(0, pp, kk);
            let rhs = h.t(1, pp - 2, kk + 1) - h.t(kk + 2, pp - kk - 3, 0) * sig(kk + 1)
                + &data.j * h.t(0, 0, kk);
            acc.rec("closure-extended-first", u, rel_residual(&lhs, &rhs));
            let lhs = h.t(0, kk, pp);
            let rhs = h.t(0, kk + 1, pp - 2) * sig(1) - h.t(kk + 1, 0, pp - kk - 3) * sig(kk)
                + &data.k * h.t(0, kk, 0);
            acc.rec("closure-extended-second", u, rel_residual(&lhs, &rhs));
        }
        for jj in -1..=2i64 {
            for kk in 0..=2i64 {
                let lhs = h.t(0, pp + jj, kk);
                let rhs = h.t(jj + 1, pp - jj - 2, jj + kk + 1)
                    - h.t(jj + kk + 2, pp - jj - kk - 3, jj) * sig(kk + 1)
                    + &data.j * h.t(0, jj, kk);
                acc.rec("closure-high-first", u, rel_residual(&lhs, &rhs));
                let lhs = h.t(0, kk, pp + jj);
                let rhs = h.t(0, jj + kk + 1, pp - jj - 2) * sig(jj + 1)
                    - h.t(kk + 1, jj, pp - jj - kk - 3) * sig(jj + kk)
                    + &data.k * h.t(0, kk, jj);
                acc.rec("closure-high-second", u, rel_residual(&lhs, &rhs));
            }
        }
        let lhs = h.t(0, pp, pp);
        let rhs = h.t(2, pp - 2, pp - 2) - h.t(pp, 0, 0) * sig(pp)
            + &data.j * h.t(0, 1, pp - 2) * sig(1)
            + &data.k * h.t(1, pp - 2, 1)
            + (&data.j * &data.k) * h.f(-1);
        acc.rec("closure-double", u, rel_residual(&lhs, &rhs));
    }
    acc.into_checks(&ctx.sector_desc(), &ctx.params_desc(), ctx.tolerance)
}

/// Y-system closure at a root of unity: the inverse-free product identities
/// as matrix checks, and the per-eigenvalue ratio, factorised and product
/// forms of the closed Y-system.
pub fn verify_yclosure(ctx: &Ctx, data: &ClosureData) -> Vec<IdentityCheck> {
    let (p, pp) = ctx.params.root.expect("closure needs a root-of-unity coupling");
    let (p, pp) = (i64::from(p), i64::from(pp));
    let mut acc = Acc::new();
    let guards: Vec<i64> = (-3..=pp + 1).collect();
    let mut done = 0usize;
    let mut attempts = 0usize;
    while done < ctx.samples.min(3) && attempts < 30 {
        attempts += 1;
        let u = ctx.sample_u(&guards);
        let h = ctx.hier(u);
        let sig = |e: i64| C64::new(h.sigma().powi(e as i32), 0.0);
        // Matrix-level product identities.
        // Shared second factor; clearing the cubic ratio form of its
        // denominators forces the label (p'-2, 0) in the subtracted term.
        let l2 = h.t(1, pp - 1, 0) * h.t(0, 0, pp - 1)
            - h.t(1, pp - 2, 0) * h.t(1, 0, pp - 2) * sig(1);
        {
            let l1 = h.t(0, pp - 1, 0) * h.t(0, 0, pp - 1)
                - h.t(1, pp - 2, 0) * h.t(0, 0, pp - 2) * sig(1);
            let a = h.t(0, 0, pp - 1);
            let x = h.t(1, pp - 2, 0);
            let rhs = (&a * &a * &a
                + &data.j * &a * &a * &x * sig(pp - p)
                + &data.k * &a * &x * &x * sig(pp - p)
                + &x * &x * &x * sig(p))
                * h.f(pp - 1);
            acc.rec("yclosure-product-first", u, rel_residual(&(&l1 * &l2), &rhs));
        }
        {
            let m1 = h.t(1, pp - 1, 0) * h.t(1, 0, pp - 1)
                - h.t(2, pp - 2, 0) * h.t(1, 0, pp - 2) * sig(1);
            let at = h.t(1, pp - 1, 0);
            let xt = h.t(1, 0, pp - 2);
            let rhs = (&at * &at * &at
                + &data.k * &at * &at * &xt * sig(pp + 1)
                + &data.j * &at * &xt * &xt * sig(pp)
                + &xt * &xt * &xt * sig(p + 1))
                * (sig(pp - 1) * h.f(-1));
            acc.rec("yclosure-product-second", u, rel_residual(&(&m1 * &l2), &rhs));
        }
        // Per-eigenvalue checks.
        let t10 = h.t(0, 1, 0);
        let t01 = h.t(1, 0, 1);
        let mut basis = None;
        for _ in 0..4 {
            basis = common_eigenbasis(&[&t10, &t01], &mut *ctx.rng.borrow_mut());
            if basis.is_some() {
                break;
            }
        }
        let Some(vs) = basis else { continue };
        let view = EigView::new(&h, vs);
        let jv = view.sv(&data.j);
        let kv = view.sv(&data.k);
        let sc = closure_scalars(&ctx.params, ctx.sector);
        let [e1, e2, e3] = sc.lambda_phases;
        let one = C64::new(1.0, 0.0);
        let mut degenerate = false;
        for i in 0..view.len() {
            // Ratio variables.
            let x = |kk: i64| view.tv(kk + 1, pp - 2, 0)[i] / view.tv(kk, 0, pp - 1)[i];
            let xt = |kk: i64| -view.tv(kk, 0, pp - 2)[i] / view.tv(kk, pp - 1, 0)[i];
            let dens = [
                view.tv(0, 0, pp - 1)[i],
                view.tv(1, 0, pp - 1)[i],
                view.tv(0, pp - 1, 0)[i],
                view.tv(1, pp - 1, 0)[i],
                view.tv(2, pp - 1, 0)[i],
                view.tv(2, 0, pp - 1)[i],
            ];
            if dens.iter().any(|z| z.norm() < 1e-9) {
                degenerate = true;
                break;
            }
            let (x0, x1) = (x(0), x(1));
            let (xt0, xt1, xt2) = (xt(0), xt(1), xt(2));
            let (y0, y1) = (sig(1) * x0 * xt0, sig(1) * x1 * xt1);
            let (z0, z1) = (sig(1) * x0 * xt1, sig(1) * x1 * xt2);
            let t0p = view.t_ratio(0, pp - 1, i);
            let tt0p = view.tt_ratio(0, pp - 1, i);
            // Cubic ratio form of the closed Y-system.
            let num = one + sig(pp - p) * jv[i] * x0 + sig(pp - p) * kv[i] * x0 * x0
                + sig(p) * x0 * x0 * x0;
            let den1 = one
                - sig(1) * view.tv(1, pp - 2, 0)[i] * view.tv(0, 0, pp - 2)[i]
                    / (view.tv(0, pp - 1, 0)[i] * view.tv(0, 0, pp - 1)[i]);
            let den2 = one
                - sig(1) * view.tv(1, pp - 2, 0)[i] * view.tv(1, 0, pp - 2)[i]
                    / (view.tv(1, pp - 1, 0)[i] * view.tv(0, 0, pp - 1)[i]);
            acc.rec(
                "yclosure-ratio-first",
                u,
                scalar_residual((one + t0p) * den1 * den2, num),
            );
            let r = view.tv(1, 0, pp - 2)[i] / view.tv(1, pp - 1, 0)[i];
            let numt = one + sig(pp + 1) * kv[i] * r + sig(pp) * jv[i] * r * r
                + sig(p + 1) * r * r * r;
            let dent1 = one
                - sig(1) * view.tv(2, pp - 2, 0)[i] * view.tv(1, 0, pp - 2)[i]
                    / (view.tv(1, pp - 1, 0)[i] * view.tv(1, 0, pp - 1)[i]);
            acc.rec(
                "yclosure-ratio-second",
                u,
                scalar_residual((one + tt0p) * dent1 * den2, numt),
            );
            // Factorised form.
            acc.rec(
                "yclosure-factorised-first",
                u,
                scalar_residual(
                    (one + t0p) * (one + y0) * (one + z0),
                    (one + e1 * x0) * (one + e2 * x0) * (one + e3 * x0),
                ),
            );
            // The linear-factor variable of the second family carries an
            // extra sign sigma relative to the ratio variable, so that the
            // expansion reproduces the cubic numerator for either parity of
            // the width.
            let w1 = -sig(1) * xt1;
            acc.rec(
                "yclosure-factorised-second",
                u,
                scalar_residual(
                    (one + tt0p) * (one + y1) * (one + z0),
                    (one + e1.inv() * w1) * (one + e2.inv() * w1) * (one + e3.inv() * w1),
                ),
            );
            // Product relations for the ratio variables.
            let t1p2 = view.t_ratio(1, pp - 2, i);
            let tt0p2 = view.tt_ratio(0, pp - 2, i);
            let tt1p2 = view.tt_ratio(1, pp - 2, i);
            let fac_x = (one + e1.inv() * w1) * (one + e2.inv() * w1.inv())
                * (one + e3.inv() * w1);
            // The x and x-tilde products carry the prefactor sigma^p * e2,
            // where e2 = (-1)^(p*v) is the middle eigen-phase: the inverted
            // middle factor satisfies 1 + e2^-1 w^-1 = e2 (1 + e2^-1 w) / w,
            // which injects one factor of e2 relative to the factorised
            // forms.  The y and z products each contain two inverted middle
            // factors, so e2^2 = 1 and their prefactor is +1.
            acc.rec(
                "yclosure-x-product",
                u,
                scalar_residual(
                    x0 * x1 * fac_x,
                    sig(p) * e2 * (one + t1p2) * (one + y1) * (one + z0),
                ),
            );
            let fac_xt = (one + e1 * x0) * (one + e2 * x0.inv()) * (one + e3 * x0);
            acc.rec(
                "yclosure-xtilde-product",
                u,
                scalar_residual(
                    xt0 * xt1 * fac_xt,
                    sig(p) * e2 * (one + tt0p2) * (one + y0) * (one + z0),
                ),
            );
            acc.rec(
                "yclosure-y-product",
                u,
                scalar_residual(
                    y0 * y1 * fac_xt * fac_x,
                    (one + t1p2)
                        * (one + tt0p2)
                        * (one + y0)
                        * (one + y1)
                        * (one + z0)
                        * (one + z0),
                ),
            );
            let fac_x1 = (one + e1 * x1) * (one + e2 * x1.inv()) * (one + e3 * x1);
            acc.rec(
                "yclosure-z-product",
                u,
                scalar_residual(
                    z0 * z1 * fac_x1 * fac_x,
                    (one + t1p2)
                        * (one + tt1p2)
                        * (one + y1)
                        * (one + y1)
                        * (one + z0)
                        * (one + z1),
                ),
            );
            // Link between the bilinear and ratio normalisations.
            acc.rec(
                "yclosure-ratio-link",
                u,
                scalar_residual(
                    view.tv(0, pp - 1, 0)[i] * view.tv(1, pp - 1, 0)[i],
                    h.f(pp - 1) * view.tv(0, 0, pp - 1)[i] * (one + t0p),
                ),
            );
        }
        if !degenerate {
            done += 1;
        }
    }
    acc.into_checks(&ctx.sector_desc(), &ctx.params_desc(), ctx.tolerance)
}

// ---------------------------------------------------------------------------
// Braid suite
// ---------------------------------------------------------------------------

/// Braid-limit checks: the elementary braid matrices are scalar on each
/// sector with the predicted value, the fused braid matrices match the
/// generalised Chebyshev values, and the braid recursions hold.
pub fn verify_braid(ctx: &Ctx) -> Vec<IdentityCheck> {
    let mut acc = Acc::new();
    let engine = Transfer::new(&ctx.params, ctx.sector);
    let id = engine.identity();
    for sign in [1, -1] {
        let marker = C64::new(0.0, f64::from(sign));
        let ys = ctx.sector.braid_ys(&ctx.params, sign);
        let u10 = |m: i64| cheb(m, ys[0], ys[1]);
        let u01 = |n: i64| cheb(n, ys[0].inv(), ys[1].inv());
        let umn = |m: i64, n: i64| u10(m) * u01(n) - u10(m - 1) * u01(n - 1);
        for label in [BraidLabel::OneZero, BraidLabel::ZeroOne] {
            let b = engine.braid(label, sign);
            let expected = ctx.sector.braid_eigenvalue(&ctx.params, label, sign);
            acc.rec("braid-elementary", marker, rel_residual(&b, &(&id * expected)));
        }
        for m in 0..=4i64 {
            for n in 0..=(4 - m) {
                if m + n == 0 {
                    continue;
                }
                let b = braid_fused(&ctx.params, ctx.sector, m, n, sign);
                acc.rec(
                    "braid-fused-scalar",
                    marker,
                    rel_residual(&b, &(&id * umn(m, n))),
                );
            }
        }
        for m in 1..=4i64 {
            acc.rec(
                "braid-recursion-first",
                marker,
                scalar_residual(u10(m) * u10(1), umn(m - 1, 1) + u10(m + 1)),
            );
            acc.rec(
                "braid-recursion-second",
                marker,
                scalar_residual(u01(1) * u01(m), umn(1, m - 1) + u01(m + 1)),
            );
        }
        for (m, n) in [(1, 1), (2, 1), (1, 2)] {
            let lhs = braid_fused(&ctx.params, ctx.sector, m, 0, sign)
                * braid_fused(&ctx.params, ctx.sector, 0, n, sign);
            let rhs = braid_fused(&ctx.params, ctx.sector, m, n, sign)
                + braid_fused(&ctx.params, ctx.sector, m - 1, 0, sign)
                    * braid_fused(&ctx.params, ctx.sector, 0, n - 1, sign);
            acc.rec("braid-recursion-mixed", marker, rel_residual(&lhs, &rhs));
        }
    }
    acc.into_checks(&ctx.sector_desc(), &ctx.params_desc(), ctx.tolerance)
}

// ---------------------------------------------------------------------------
// Vacancy conservation
// ---------------------------------------------------------------------------

/// The elementary transfer matrices preserve the number of vacancies: acting
/// on every link state of every sector of the given width never produces
/// weight on states with a different vacancy count.
pub fn verify_vacancy(
    params: &Params,
    n_cols: usize,
    samples: usize,
    tolerance: f64,
    seed: u64,
) -> Vec<IdentityCheck> {
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(
        seed,
        &format!("vacancy|{}|{}", params_desc(params), n_cols),
    ));
    let mut acc = Acc::new();
    let engine = Transfer::new(params, Sector::new(n_cols, n_cols, 0));
    for label in [BraidLabel::OneZero, BraidLabel::ZeroOne] {
        let id = match label {
            BraidLabel::OneZero => "vacancy-first",
            BraidLabel::ZeroOne => "vacancy-second",
        };
        for _ in 0..samples {
            let u = C64::new(rng.gen_range(0.1..1.2), rng.gen_range(-0.4..0.4));
            let row: Vec<_> = (0..n_cols)
                .map(|_| faceops::face(params, label, u))
                .collect();
            let mut off: f64 = 0.0;
            let mut scale: f64 = 0.0;
            for sector in Sector::all(n_cols) {
                for state in linkstate::basis(sector) {
                    for (out, w) in engine.act(&[row.clone()], None, &state) {
                        scale = scale.max(w.norm());
                        if out.sector().vacancies != sector.vacancies {
                            off = off.max(w.norm());
                        }
                    }
                }
            }
            acc.rec(id, u, off / (scale + 1.0));
        }
    }
    acc.into_checks(&format!("N={n_cols} (all sectors)"), &params_desc(params), tolerance)
}

// ---------------------------------------------------------------------------
// Direct fusion cross-check
// ---------------------------------------------------------------------------

/// The projector-built fused transfer matrices equal the operators generated
/// by the recursion.
pub fn verify_fusion_direct(ctx: &Ctx) -> Vec<IdentityCheck> {
    let mut acc = Acc::new();
    for _ in 0..ctx.samples {
        let u = ctx.sample_u(&[0, 1]);
        let h = ctx.hier(u);
        for (m, n) in [(2, 0), (1, 1), (0, 2), (3, 0), (2, 1)] {
            let direct = fusion::fused_transfer(&ctx.params, ctx.sector, m, n, u);
            let rec = h.t(0, m as i64, n as i64);
            acc.rec("fusion-direct", u, rel_residual(&direct, &rec));
        }
    }
    acc.into_checks(&ctx.sector_desc(), &ctx.params_desc(), ctx.tolerance)
}

// ---------------------------------------------------------------------------
// Height-model suite
// ---------------------------------------------------------------------------

/// Height-model checks: local generator relations on open words, the face
/// decomposition into identity and generator parts, the transfer family on
/// cyclic paths, truncation of the hierarchy, the bilinear identity, and the
/// truncation-closure constants.
pub fn verify_rsos(
    params: &Params,
    n_cols: usize,
    samples: usize,
    tolerance: f64,
    seed: u64,
) -> Vec<IdentityCheck> {
    let (_, pp) = params.root.expect("height model needs a root-of-unity coupling");
    let pp_i = i64::from(pp);
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(
        seed,
        &format!("rsos|{}|{}", params_desc(params), n_cols),
    ));
    let mut acc = Acc::new();
    let mark = C64::new(0.0, 0.0);
    // Local generator relations on open words.
    {
        let space = rsos::PathSpace::open(params, 5);
        let beta = C64::new(2.0 * params.lambda.cos(), 0.0);
        let gens: Vec<_> = (1..4).map(|j| space.hecke(j)).collect();
        for g in &gens {
            acc.rec(
                "rsos-generator-quadratic",
                mark,
                rel_residual(&(g * g), &(g * beta)),
            );
        }
        for w in gens.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            let lhs = a * b * a - a;
            let rhs = b * a * b - b;
            acc.rec("rsos-generator-cubic", mark, rel_residual(&lhs, &rhs));
        }
        let (um, u0, up) = (&gens[0], &gens[1], &gens[2]);
        let lhs = (um - up * u0 * um + u0) * (u0 * up * u0 - u0);
        let zero = DMatrix::from_element(lhs.nrows(), lhs.ncols(), C64::new(0.0, 0.0));
        acc.rec("rsos-generator-quartic", mark, rel_residual(&lhs, &zero));
    }
    // Loop-face decomposition into identity and generator cells.
    {
        let mut pg = params.clone();
        let u = C64::new(rng.gen_range(0.1..1.0), rng.gen_range(0.1..0.4));
        pg.gauge = (-C64::i() * u).exp();
        let face = faceops::face(&pg, BraidLabel::OneZero, u);
        let (plain, hecke) = rsos::hecke_form_cells(params.lambda);
        let recon = fusion::lin(&[(params.s(1, -u), &plain), (params.s(0, u), &hecke)]);
        acc.rec("rsos-face-decomposition", u, fusion::cell_diff(&face, &recon));
    }
    // Cyclic-path transfer family.
    let space = rsos::PathSpace::cyclic(params, n_cols);
    if space.dim() == 0 {
        // The step vectors sum to zero, so cyclic paths exist only when the
        // width is a multiple of three: other widths are vacuously conserved.
        return acc.into_checks(
            &format!("rsos p'={pp} N={n_cols} (empty)"),
            &params_desc(params),
            tolerance,
        );
    }
    let id = DMatrix::identity(space.dim(), space.dim());
    let origin = space.elementary(BraidLabel::OneZero, C64::new(0.0, 0.0));
    acc.rec("rsos-identity-at-origin", mark, rel_residual(&origin, &id));
    for _ in 0..samples {
        let u = C64::new(rng.gen_range(0.1..1.2), rng.gen_range(0.1..0.4));
        let v = C64::new(rng.gen_range(0.1..1.2), rng.gen_range(-0.4..-0.1));
        let a10 = space.elementary(BraidLabel::OneZero, u);
        let b10 = space.elementary(BraidLabel::OneZero, v);
        let b01 = space.elementary(BraidLabel::ZeroOne, v);
        acc.rec(
            "rsos-commutation-first",
            u,
            rel_residual(&(&a10 * &b10), &(&b10 * &a10)),
        );
        acc.rec(
            "rsos-commutation-mixed",
            u,
            rel_residual(&(&a10 * &b01), &(&b01 * &a10)),
        );
        let h = space.hierarchy(u);
        // Truncation of the hierarchy at the alcove boundary.
        let scale = h.t(0, 1, 0).norm() + 1.0;
        for m in 0..=(pp_i - 2) {
            let n = pp_i - 2 - m;
            acc.rec("rsos-truncation", u, h.t(0, m, n).norm() / scale);
        }
        // Bilinear identity on the path representation.
        let lhs = h.t(0, 2, 0) * h.t(1, 2, 0);
        let rhs = h.t(0, 0, 2) * h.f(2) + h.t(0, 3, 0) * h.t(1, 1, 0);
        acc.rec("rsos-tsystem", u, rel_residual(&lhs, &rhs));
    }
    // Truncation-closure constants.
    let u1 = C64::new(0.31, 0.11);
    let u2 = C64::new(-0.47, 0.29);
    let (_, checks) = rsos::verify_closure(&space, u1, u2);
    for c in checks {
        acc.rec(&format!("rsos-{}", c.label), u1, c.residual);
    }
    acc.into_checks(
        &format!("rsos p'={pp} N={n_cols}"),
        &params_desc(params),
        tolerance,
    )
}

// ---------------------------------------------------------------------------
// Orchestration
// ---------------------------------------------------------------------------

/// The verification suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Local,
    Hierarchy,
    Tsystem,
    Ysystem,
    Closure,
    Yclosure,
    Braid,
    Vacancy,
    FusionDirect,
    Rsos,
    All,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::Local,
        Suite::Hierarchy,
        Suite::Tsystem,
        Suite::Ysystem,
        Suite::Closure,
        Suite::Yclosure,
        Suite::Braid,
        Suite::Vacancy,
        Suite::FusionDirect,
        Suite::Rsos,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Local => "local",
            Suite::Hierarchy => "hierarchy",
            Suite::Tsystem => "tsystem",
            Suite::Ysystem => "ysystem",
            Suite::Closure => "closure",
            Suite::Yclosure => "yclosure",
            Suite::Braid => "braid",
            Suite::Vacancy => "vacancy",
            Suite::FusionDirect => "fusion-direct",
            Suite::Rsos => "rsos",
            Suite::All => "all",
        }
    }

    pub fn parse(s: &str) -> Option<Suite> {
        match s {
            "local" => Some(Suite::Local),
            "hierarchy" => Some(Suite::Hierarchy),
            "tsystem" => Some(Suite::Tsystem),
            "ysystem" => Some(Suite::Ysystem),
            "closure" => Some(Suite::Closure),
            "yclosure" => Some(Suite::Yclosure),
            "braid" => Some(Suite::Braid),
            "vacancy" => Some(Suite::Vacancy),
            "fusion-direct" => Some(Suite::FusionDirect),
            "rsos" => Some(Suite::Rsos),
            "all" => Some(Suite::All),
            _ => None,
        }
    }
}

/// Full description of a verification run.
#[derive(Debug, Clone)]
pub struct RunSpec {
    pub suite: Suite,
    pub params_list: Vec<Params>,
    pub n_max: usize,
    /// Optional `(defects, vacancies)` filter; `None` keeps every sector.
    pub sectors: Option<Vec<(usize, usize)>>,
    pub samples: usize,
    /// Residual threshold override; by default 1e-9, relaxed to 1e-8 for the
    /// closure and Y-closure suites where more cancellation occurs.
    pub tolerance: Option<f64>,
    pub proof_grade: bool,
    pub seed: u64,
    pub jobs: usize,
}

impl RunSpec {
    pub fn new(suite: Suite, params_list: Vec<Params>) -> RunSpec {
        RunSpec {
            suite,
            params_list,
            n_max: 3,
            sectors: None,
            samples: 5,
            tolerance: None,
            proof_grade: false,
            seed: 0,
            jobs: 1,
        }
    }

    fn tolerance_for(&self, suite: Suite) -> f64 {
        if let Some(t) = self.tolerance {
            return t;
        }
        match suite {
            Suite::Closure | Suite::Yclosure | Suite::Rsos => 1e-8,
            _ => 1e-9,
        }
    }

    /// Number of sample points: in proof-grade mode the identity sides are
    /// Laurent polynomials in `exp(i u)` of bounded width, so evaluation at
    /// `D + 1` distinct points certifies the polynomial identity up to
    /// conditioning.  The bound used is `2 N w` with `w` the largest number
    /// of elementary factors appearing in any term of the suite.
    fn samples_for(&self, suite: Suite, n_cols: usize) -> usize {
        if !self.proof_grade {
            return self.samples;
        }
        let weight: usize = match suite {
            Suite::Local => 3,
            Suite::Hierarchy => 7,
            Suite::Tsystem => 13,
            Suite::Ysystem => 26,
            Suite::Closure => 8,
            Suite::Yclosure => 26,
            Suite::Braid => 1,
            Suite::Vacancy => 1,
            Suite::FusionDirect => 4,
            Suite::Rsos => 8,
            Suite::All => 1,
        };
        2 * n_cols * weight + 1
    }
}

/// The standard parameter matrix: one generic coupling and three
/// root-of-unity couplings, each with trivial and generic twist.
pub fn standard_params() -> Vec<Params> {
    let omegas = [C64::new(1.0, 0.0), (C64::i() * 0.37).exp()];
    let mut out = Vec::new();
    for om in omegas {
        out.push(Params::new(0.83, om));
        out.push(Params::from_root(1, 3, om));
        out.push(Params::from_root(1, 4, om));
        out.push(Params::from_root(2, 5, om));
    }
    out
}

fn sectors_for(n_max: usize, filter: &Option<Vec<(usize, usize)>>) -> Vec<Sector> {
    let mut out = Vec::new();
    for n in 1..=n_max.min(3) {
        out.extend(Sector::all(n));
    }
    if n_max >= 4 {
        for (d, v) in [(0, 0), (2, 0), (1, 1)] {
            out.push(Sector::new(4, d, v));
        }
    }
    if let Some(f) = filter {
        out.retain(|s| f.contains(&(s.defects, s.vacancies)));
    }
    out
}

/// Run metadata (deterministic: no wall-clock data, so identical
/// configuration and seed produce byte-identical reports).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Meta {
    pub suite: String,
    pub seed: u64,
    pub samples: usize,
    pub n_max: usize,
    pub proof_grade: bool,
    pub parameter_matrix: Vec<String>,
    pub version: String,
}

/// A full verification report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub meta: Meta,
    pub checks: Vec<IdentityCheck>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.verdict == Verdict::Pass)
    }

    pub fn failures(&self) -> Vec<&IdentityCheck> {
        self.checks
            .iter()
            .filter(|c| c.verdict == Verdict::Fail)
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }
}

type Task = Box<dyn FnOnce() -> Vec<IdentityCheck> + Send>;

fn suite_tasks(spec: &RunSpec, suite: Suite, tasks: &mut Vec<Task>) {
    let sectors = sectors_for(spec.n_max, &spec.sectors);
    for params in &spec.params_list {
        let tol = spec.tolerance_for(suite);
        match suite {
            Suite::All => unreachable!("expanded by caller"),
            Suite::Local => {
                let (p, samples, seed) = (params.clone(), spec.samples_for(suite, 2), spec.seed);
                tasks.push(Box::new(move || verify_local(&p, samples, tol, seed)));
            }
            Suite::Vacancy => {
                for n in 1..=spec.n_max.min(4) {
                    let (p, samples, seed) = (params.clone(), spec.samples_for(suite, n), spec.seed);
                    tasks.push(Box::new(move || verify_vacancy(&p, n, samples, tol, seed)));
                }
            }
            Suite::Rsos => {
                let Some((_, pp)) = params.root else { continue };
                if pp < 5 {
                    continue;
                }
                for n in 1..=spec.n_max.min(4) {
                    let (p, samples, seed) = (params.clone(), spec.samples_for(suite, n), spec.seed);
                    tasks.push(Box::new(move || verify_rsos(&p, n, samples, tol, seed)));
                }
            }
            Suite::Closure | Suite::Yclosure => {
                if params.root.is_none() {
                    continue;
                }
                for &sector in &sectors {
                    let p = params.clone();
                    let samples = spec.samples_for(suite, sector.n_cols);
                    let seed = spec.seed;
                    tasks.push(Box::new(move || {
                        let ctx = Ctx::new(&p, sector, samples, tol, seed);
                        match suite {
                            Suite::Closure => {
                                let (data, mut checks) = verify_closure(&ctx);
                                checks.extend(verify_extended_closure(&ctx, &data));
                                checks
                            }
                            _ => {
                                let data = closure_data(&ctx);
                                verify_yclosure(&ctx, &data)
                            }
                        }
                    }));
                }
            }
            Suite::Hierarchy | Suite::Tsystem | Suite::Ysystem | Suite::Braid
            | Suite::FusionDirect => {
                for &sector in &sectors {
                    let p = params.clone();
                    let samples = spec.samples_for(suite, sector.n_cols);
                    let seed = spec.seed;
                    tasks.push(Box::new(move || {
                        let ctx = Ctx::new(&p, sector, samples, tol, seed);
                        match suite {
                            Suite::Hierarchy => verify_fusion_hierarchy(&ctx, 5),
                            Suite::Tsystem => verify_tsystem(&ctx, 5),
                            Suite::Ysystem => verify_ysystem(&ctx, 4),
                            Suite::Braid => verify_braid(&ctx),
                            _ => verify_fusion_direct(&ctx),
                        }
                    }));
                }
            }
        }
    }
}

/// Executes a verification run: builds the task list, runs it on a bounded
/// worker pool, and aggregates the checks deterministically (sorted by
/// identity tag, parameter point and sector).
pub fn run(spec: &RunSpec) -> Report {
    let mut tasks: Vec<Task> = Vec::new();
    match spec.suite {
        Suite::All => {
            for s in Suite::ALL {
                suite_tasks(spec, s, &mut tasks);
            }
        }
        s => suite_tasks(spec, s, &mut tasks),
    }
    let queue: Mutex<VecDeque<Task>> = Mutex::new(tasks.into_iter().collect());
    let results: Mutex<Vec<IdentityCheck>> = Mutex::new(Vec::new());
    std::thread::scope(|scope| {
        for _ in 0..spec.jobs.max(1) {
            scope.spawn(|| loop {
                let task = queue.lock().unwrap().pop_front();
                match task {
                    Some(f) => {
                        let checks = f();
                        results.lock().unwrap().extend(checks);
                    }
                    None => break,
                }
            });
        }
    });
    let mut checks = results.into_inner().unwrap();
    checks.sort_by(|a, b| {
        (&a.id, &a.params, &a.sector)
            .cmp(&(&b.id, &b.params, &b.sector))
    });
    Report {
        meta: Meta {
            suite: spec.suite.name().to_string(),
            seed: spec.seed,
            samples: spec.samples,
            n_max: spec.n_max,
            proof_grade: spec.proof_grade,
            parameter_matrix: spec.params_list.iter().map(params_desc).collect(),
            version: env!("CARGO_PKG_VERSION").to_string(),
        },
        checks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn generic() -> Params {
        Params::new(0.83, (C64::i() * 0.37).exp())
    }

    #[test]
    fn eigenpairs_recover_diagonalisable_matrix() {
        // A small matrix with known spectrum: conjugated diagonal.
        let d = DMatrix::from_diagonal(&DVector::from_vec(vec![
            C64::new(1.0, 0.5),
            C64::new(-0.3, 0.2),
            C64::new(2.0, -1.0),
        ]));
        let s = DMatrix::from_row_slice(
            3,
            3,
            &[
                C64::new(1.0, 0.0),
                C64::new(0.3, 0.1),
                C64::new(0.0, 0.2),
                C64::new(0.0, 0.0),
                C64::new(1.0, 0.0),
                C64::new(-0.4, 0.0),
                C64::new(0.2, 0.0),
                C64::new(0.0, 0.0),
                C64::new(1.0, 0.0),
            ],
        );
        let m = &s * &d * s.clone().try_inverse().unwrap();
        let mut eig: Vec<f64> = eigenvalues(&m).iter().map(|z| z.re).collect();
        eig.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((eig[0] + 0.3).abs() < 1e-10);
        for (lam, v) in eigenpairs(&m) {
            let resid = (&m * &v - &v * lam).norm();
            assert!(resid < 1e-8, "eigenpair residual {resid}");
        }
    }

    #[test]
    fn common_eigenbasis_of_commuting_pair() {
        let p = generic();
        let sector = Sector::new(3, 1, 0);
        let h = Hierarchy::new(&p, sector, C64::new(0.3, 0.2));
        let a = h.t(0, 1, 0);
        let b = h.t(1, 0, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let basis = common_eigenbasis(&[&a, &b], &mut rng).expect("generic pair separates");
        assert_eq!(basis.len(), a.nrows());
    }

    #[test]
    fn residual_normalisation() {
        let a = DMatrix::from_element(2, 2, C64::new(1.0, 0.0));
        assert!(rel_residual(&a, &a) < 1e-16);
        let zero = DMatrix::from_element(2, 2, C64::new(0.0, 0.0));
        // |A|_F = 2, so the residual against zero is 2 / (2 + 0 + 1).
        assert!((rel_residual(&a, &zero) - 2.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn derive_seed_is_stable_and_tag_sensitive() {
        assert_eq!(derive_seed(7, "a"), derive_seed(7, "a"));
        assert_ne!(derive_seed(7, "a"), derive_seed(7, "b"));
        assert_ne!(derive_seed(7, "a"), derive_seed(8, "a"));
    }

    #[test]
    fn local_suite_passes_generic_coupling() {
        let checks = verify_local(&generic(), 3, 1e-9, 1);
        assert!(!checks.is_empty());
        for c in &checks {
            assert_eq!(c.verdict, Verdict::Pass, "{} residual {}", c.id, c.residual);
        }
    }

    #[test]
    fn fusion_hierarchy_suite_small_sector() {
        let ctx = Ctx::new(&generic(), Sector::new(2, 0, 0), 2, 1e-9, 1);
        let checks = verify_fusion_hierarchy(&ctx, 4);
        for c in &checks {
            assert_eq!(c.verdict, Verdict::Pass, "{} residual {}", c.id, c.residual);
        }
    }

    #[test]
    fn tsystem_suite_small_sector() {
        let ctx = Ctx::new(&generic(), Sector::new(2, 2, 0), 2, 1e-9, 1);
        let checks = verify_tsystem(&ctx, 4);
        for c in &checks {
            assert_eq!(c.verdict, Verdict::Pass, "{} residual {}", c.id, c.residual);
        }
        // The shifted identities are flagged as implementation checks.
        let shifted = checks.iter().find(|c| c.id == "tsystem-shifted-first").unwrap();
        assert_eq!(shifted.kind, CheckKind::Implementation);
    }

    #[test]
    fn ysystem_suite_small_sector() {
        let ctx = Ctx::new(&generic(), Sector::new(2, 1, 1), 2, 1e-9, 1);
        let checks = verify_ysystem(&ctx, 3);
        for c in &checks {
            assert_eq!(c.verdict, Verdict::Pass, "{} residual {}", c.id, c.residual);
        }
    }

    #[test]
    fn closure_suite_at_smallest_root() {
        let p = Params::from_root(1, 3, (C64::i() * 0.37).exp());
        let ctx = Ctx::new(&p, Sector::new(2, 0, 0), 3, 1e-8, 1);
        let (data, checks) = verify_closure(&ctx);
        for c in &checks {
            assert_eq!(c.verdict, Verdict::Pass, "{} residual {}", c.id, c.residual);
        }
        let ext = verify_extended_closure(&ctx, &data);
        for c in &ext {
            assert_eq!(c.verdict, Verdict::Pass, "{} residual {}", c.id, c.residual);
        }
    }

    #[test]
    fn yclosure_suite_at_smallest_root() {
        let p = Params::from_root(1, 3, (C64::i() * 0.37).exp());
        // Both parities of the width, since several signs depend on it.
        for sector in [Sector::new(2, 0, 0), Sector::new(3, 1, 0)] {
            let ctx = Ctx::new(&p, sector, 2, 1e-8, 1);
            let data = closure_data(&ctx);
            let checks = verify_yclosure(&ctx, &data);
            assert!(checks.iter().any(|c| c.id == "yclosure-ratio-first"));
            for c in &checks {
                assert_eq!(
                    c.verdict,
                    Verdict::Pass,
                    "{} {} residual {}",
                    c.id,
                    c.sector,
                    c.residual
                );
            }
        }
    }

    #[test]
    fn braid_suite_small_sector() {
        let ctx = Ctx::new(&generic(), Sector::new(2, 1, 1), 1, 1e-9, 1);
        let checks = verify_braid(&ctx);
        for c in &checks {
            assert_eq!(c.verdict, Verdict::Pass, "{} residual {}", c.id, c.residual);
        }
    }

    #[test]
    fn vacancy_suite_small_width() {
        let checks = verify_vacancy(&generic(), 2, 2, 1e-12, 1);
        for c in &checks {
            assert_eq!(c.verdict, Verdict::Pass, "{} residual {}", c.id, c.residual);
        }
    }

    #[test]
    fn rsos_suite_smallest_alcove() {
        let p = Params::from_root(2, 5, C64::new(1.0, 0.0));
        let checks = verify_rsos(&p, 3, 2, 1e-8, 1);
        assert!(checks.iter().any(|c| c.id == "rsos-truncation"));
        for c in &checks {
            assert_eq!(c.verdict, Verdict::Pass, "{} residual {}", c.id, c.residual);
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let spec = {
            let mut s = RunSpec::new(Suite::Braid, vec![generic()]);
            s.n_max = 2;
            s.seed = 11;
            s.jobs = 2;
            s
        };
        let a = run(&spec).to_json();
        let b = run(&spec).to_json();
        assert_eq!(a, b);
    }
}
